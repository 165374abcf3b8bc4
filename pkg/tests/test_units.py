import dataclasses
import math
import unittest

from cpforce.exceptions import DomainError
from cpforce.units import (
    CONSTANTS,
    angular_frequency_to_ev,
    cm_to_meters,
    constants_digest,
    constants_table,
    dyn_to_newton,
    ev_to_angular_frequency,
    meters_to_cm,
    newton_to_dyn,
)


class TestConstants(unittest.TestCase):
    def testCgsValues(self):
        self.assertAlmostEqual(CONSTANTS.hbar / 1.0545718176461565e-27, 1.0, places=12)
        self.assertAlmostEqual(CONSTANTS.c / 2.99792458e10, 1.0, places=14)
        self.assertAlmostEqual(CONSTANTS.k_B / 1.380649e-16, 1.0, places=12)
        self.assertAlmostEqual(CONSTANTS.erg_per_eV / 1.602176634e-12, 1.0, places=12)
        self.assertAlmostEqual(CONSTANTS.mu_B / 9.2740100783e-21, 1.0, places=8)

    def testBohrMagnetonMatchesDefinition(self):
        derived = CONSTANTS.e * CONSTANTS.hbar / (2 * CONSTANTS.m_e * CONSTANTS.c)
        self.assertLess(abs(derived / CONSTANTS.mu_B - 1), 1e-8)

    def testInconsistentBohrMagnetonRejected(self):
        with self.assertRaises(DomainError):
            dataclasses.replace(CONSTANTS, mu_B=2 * CONSTANTS.mu_B)

    def testNonPositiveConstantRejected(self):
        with self.assertRaises(DomainError):
            dataclasses.replace(CONSTANTS, k_B=0.0)

    def testDigestIsStable(self):
        digest = constants_digest()
        self.assertEqual(len(digest), 64)
        self.assertEqual(digest, constants_digest())
        self.assertEqual(set(constants_table()), {"hbar", "c", "k_B", "mu_B", "erg_per_eV", "e", "m_e"})


class TestConversions(unittest.TestCase):
    def testZeroEnergy(self):
        self.assertEqual(ev_to_angular_frequency(0.0), 0.0)

    def testHydrogenOscillatorFrequency(self):
        self.assertLess(abs(ev_to_angular_frequency(11.65) / 1.770e16 - 1), 1e-3)

    def testGoldPlasmaFrequency(self):
        self.assertLess(abs(ev_to_angular_frequency(9.0) / 1.367e16 - 1), 1e-3)

    def testEnergyRoundTrip(self):
        for energy in (1.68, 9.0, 11.1, 11.65):
            self.assertAlmostEqual(angular_frequency_to_ev(ev_to_angular_frequency(energy)), energy, places=12)

    def testNegativeEnergyRejected(self):
        with self.assertRaises(DomainError):
            ev_to_angular_frequency(-1.0)
        with self.assertRaises(DomainError):
            angular_frequency_to_ev(-1.0)
        with self.assertRaises(DomainError):
            ev_to_angular_frequency(math.nan)

    def testSiRoundTrip(self):
        for value in (1e-6, 3.1622776601683795e-6, 1e-5):
            self.assertAlmostEqual(cm_to_meters(meters_to_cm(value)) / value, 1.0, places=15)
            self.assertAlmostEqual(newton_to_dyn(dyn_to_newton(value)) / value, 1.0, places=15)
        self.assertAlmostEqual(meters_to_cm(1e-6) / 1e-4, 1.0, places=15)
        self.assertEqual(dyn_to_newton(1.0), 1e-5)
