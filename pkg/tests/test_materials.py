import math
import unittest

import numpy as np

from cpforce.exceptions import ConfigError, ContractError, DomainError
from cpforce.models.materials import (
    WALL_PRESETS,
    WALL_PROVENANCE,
    ConstantEps,
    IdealMetal,
    MuMode,
    NonMagnetic,
    Plasma,
    StaticFerromagnet,
    WallModel,
    eps_xi_squared_deficit,
    permeability_at,
    permittivity_at,
    wall_preset,
    with_mu_mode,
)
from cpforce.units import ev_to_angular_frequency


class TestPermittivity(unittest.TestCase):
    def testPlasmaAtPlasmaFrequency(self):
        omega_p = ev_to_angular_frequency(9.0)
        self.assertAlmostEqual(permittivity_at(Plasma(omega_p), omega_p), 2.0, places=14)

    def testPlasmaDivergesAtZero(self):
        self.assertEqual(permittivity_at(Plasma(1e16), 0.0), math.inf)

    def testDeficitIsFiniteAtZero(self):
        omega_p = ev_to_angular_frequency(11.1)
        deficit = eps_xi_squared_deficit(Plasma(omega_p), np.array([0.0, 1e12, 1e15]))
        np.testing.assert_array_equal(deficit, np.full(3, omega_p**2))

    def testConstantDeficit(self):
        self.assertEqual(eps_xi_squared_deficit(ConstantEps(3.0), 2.0), 8.0)
        self.assertEqual(eps_xi_squared_deficit(ConstantEps(3.0), 0.0), 0.0)

    def testConstantPermittivityIsFlat(self):
        np.testing.assert_array_equal(permittivity_at(ConstantEps(3.0), [0.0, 1e10, 1e16]), [3.0, 3.0, 3.0])

    def testIdealMetalHasNoPermittivity(self):
        with self.assertRaises(ContractError):
            permittivity_at(IdealMetal(), 1.0)
        with self.assertRaises(ContractError):
            eps_xi_squared_deficit(IdealMetal(), 1.0)

    def testNegativeFrequencyRejected(self):
        with self.assertRaises(DomainError):
            permittivity_at(ConstantEps(3.0), -1.0)

    def testInvalidModels(self):
        with self.assertRaises(DomainError):
            ConstantEps(0.5)
        with self.assertRaises(DomainError):
            Plasma(0.0)
        with self.assertRaises(DomainError):
            StaticFerromagnet(0.9)


class TestPermeability(unittest.TestCase):
    def testZeroFrequencyOnly(self):
        mu = StaticFerromagnet(100.0, MuMode.ZeroFrequencyOnly)
        np.testing.assert_array_equal(permeability_at(mu, np.arange(3)), [100.0, 1.0, 1.0])

    def testAllFrequencies(self):
        mu = StaticFerromagnet(100.0, MuMode.AllFrequencies)
        np.testing.assert_array_equal(permeability_at(mu, np.arange(3)), [100.0, 100.0, 100.0])

    def testNonMagnetic(self):
        self.assertEqual(permeability_at(NonMagnetic(), 0), 1.0)
        self.assertEqual(permeability_at(NonMagnetic(), 7), 1.0)

    def testNegativeIndexRejected(self):
        with self.assertRaises(DomainError):
            permeability_at(NonMagnetic(), -1)


class TestWallPresets(unittest.TestCase):
    def testPresetParameters(self):
        self.assertTrue(wall_preset("ideal-metal").is_ideal_metal)
        self.assertEqual(wall_preset("au-plasma").eps, Plasma(ev_to_angular_frequency(9.0)))

        fe = wall_preset("fe-plasma")
        self.assertEqual(fe.eps, Plasma(ev_to_angular_frequency(11.1)))
        self.assertEqual(fe.mu, StaticFerromagnet(1000.0, MuMode.ZeroFrequencyOnly))
        self.assertTrue(fe.is_magnetic)

        ferro = wall_preset("ferro-dielectric")
        self.assertEqual(ferro.eps, ConstantEps(3.0))
        self.assertEqual(ferro.mu, StaticFerromagnet(100.0))

    def testEveryPresetHasProvenance(self):
        self.assertEqual(set(WALL_PRESETS), set(WALL_PROVENANCE))

    def testUnknownPreset(self):
        with self.assertRaises(ConfigError):
            wall_preset("copper")

    def testWithMuMode(self):
        switched = with_mu_mode(wall_preset("ferro-dielectric"), MuMode.AllFrequencies)
        self.assertEqual(switched.mu.mode, MuMode.AllFrequencies)
        self.assertEqual(switched.eps, ConstantEps(3.0))

        gold = wall_preset("au-plasma")
        self.assertIs(with_mu_mode(gold, MuMode.AllFrequencies), gold)

    def testDescribe(self):
        info = wall_preset("ferro-dielectric").describe()
        self.assertEqual(info["eps_model"], "constant")
        self.assertEqual(info["eps0"], 3.0)
        self.assertEqual(info["mu0"], 100.0)
        self.assertEqual(info["mu_mode"], "zero-frequency-only")

        vacuum = WallModel("vacuum", ConstantEps(1.0)).describe()
        self.assertEqual(vacuum["mu0"], 1.0)
        self.assertFalse(WallModel("vacuum", ConstantEps(1.0)).is_magnetic)
