import unittest

import numpy as np

from cpforce.exceptions import ConfigError, DomainError
from cpforce.models.atoms import (
    ATOM_PRESETS,
    ATOM_PROVENANCE,
    AtomModel,
    ResponseMode,
    atom_preset,
    magnetic_susceptibility_at,
    polarizability_at,
    static_ratio,
    static_susceptibility,
)
from cpforce.units import CONSTANTS, ev_to_angular_frequency


class TestPolarizability(unittest.TestCase):
    def setUp(self):
        self.atom = atom_preset("H")

    def testStaticValue(self):
        self.assertEqual(polarizability_at(self.atom, 0.0), 6.67e-25)

    def testHalfAtOscillatorFrequency(self):
        self.assertAlmostEqual(polarizability_at(self.atom, self.atom.omega_a) / self.atom.alpha0, 0.5, places=14)

    def testStaticMode(self):
        values = polarizability_at(self.atom, np.array([0.0, 1e15, 1e17]), ResponseMode.Static)
        np.testing.assert_array_equal(values, np.full(3, self.atom.alpha0))

    def testNegativeFrequencyRejected(self):
        with self.assertRaises(DomainError):
            polarizability_at(self.atom, -1.0)


class TestMagneticSusceptibility(unittest.TestCase):
    def setUp(self):
        self.atom = atom_preset("H")

    def testCurieLaw(self):
        expected = CONSTANTS.mu_B**2 * 0.75 / (3.0 * CONSTANTS.k_B)
        self.assertAlmostEqual(static_susceptibility(self.atom, 1.0) / expected, 1.0, places=12)
        self.assertAlmostEqual(static_susceptibility(self.atom, 2.0) / static_susceptibility(self.atom, 1.0), 0.5)

    def testHydrogenValues(self):
        self.assertLess(abs(static_susceptibility(self.atom, 1.0) / 1.56e-25 - 1), 0.01)
        self.assertLess(abs(static_susceptibility(self.atom, 300.0) / 5.2e-28 - 1), 0.01)
        self.assertAlmostEqual(static_ratio(self.atom, 1.0), 0.23, delta=0.01)

    def testDebyeRollOff(self):
        beta0 = static_susceptibility(self.atom, 1.0)
        self.assertEqual(magnetic_susceptibility_at(self.atom, 0.0, 1.0), beta0)
        half = magnetic_susceptibility_at(self.atom, 1.0 / self.atom.tau_rel, 1.0)
        self.assertAlmostEqual(half / beta0, 0.5, places=14)

    def testStaticMode(self):
        beta0 = static_susceptibility(self.atom, 1.0)
        self.assertEqual(magnetic_susceptibility_at(self.atom, 1e15, 1.0, ResponseMode.Static), beta0)

    def testNoMomentNoSusceptibility(self):
        atom = AtomModel("He", alpha0=1.38e-25, omega_a=ev_to_angular_frequency(20.0), g=2.0, J=0.0)
        self.assertEqual(static_susceptibility(atom, 1.0), 0.0)

    def testTemperatureMustBePositive(self):
        with self.assertRaises(DomainError):
            static_susceptibility(self.atom, 0.0)


class TestAtomPresets(unittest.TestCase):
    def testPresets(self):
        rb = atom_preset("Rb87")
        self.assertEqual(rb.alpha0, 4.73e-23)
        self.assertAlmostEqual(rb.omega_a / ev_to_angular_frequency(1.68), 1.0, places=14)
        self.assertEqual((rb.g, rb.J), (1.0, 0.5))
        self.assertEqual(set(ATOM_PRESETS), set(ATOM_PROVENANCE))

    def testRelaxationTimeOverride(self):
        atom = atom_preset("H", tau_rel=1e-6)
        self.assertEqual(atom.tau_rel, 1e-6)
        self.assertEqual(atom_preset("H").tau_rel, 1e-8)

    def testUnknownPreset(self):
        with self.assertRaises(ConfigError):
            atom_preset("Cs")

    def testInvalidAtom(self):
        with self.assertRaises(DomainError):
            AtomModel("X", alpha0=-1.0, omega_a=1e16, g=1.0, J=0.5)
        with self.assertRaises(DomainError):
            atom_preset("H", tau_rel=-1.0)

    def testDescribeRoundTripsEnergy(self):
        self.assertAlmostEqual(atom_preset("H").describe()["hbar_omega_a_ev"], 11.65, places=12)
