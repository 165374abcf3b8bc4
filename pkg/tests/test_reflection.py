import math
import unittest

import numpy as np

from cpforce.exceptions import ContractError, DomainError
from cpforce.models.materials import ConstantEps, MuMode, StaticFerromagnet, WallModel, wall_preset, with_mu_mode
from cpforce.numerics.spectral import SpectralContext
from cpforce.physics.reflection import reflection_arrays, reflection_at, wall_response
from cpforce.units import CONSTANTS

OMEGA_C = CONSTANTS.c / 2e-4  # a = 1 um


class TestReflection(unittest.TestCase):
    def testIdealMetal(self):
        wall = wall_preset("ideal-metal")
        for zeta, y, l in ((0.0, 0.0, 0), (0.0, 3.0, 0), (0.5, 0.7, 4), (20.0, 40.0, 100)):
            pair = reflection_at(wall, zeta, y, l, OMEGA_C)
            self.assertEqual((pair.r_tm, pair.r_te), (1.0, -1.0))

    def testFerroDielectricStatic(self):
        wall = wall_preset("ferro-dielectric")
        for y in (0.1, 1.0, 25.0):
            pair = reflection_at(wall, 0.0, y, 0, OMEGA_C)
            self.assertAlmostEqual(pair.r_tm, 0.5, places=14)
            self.assertAlmostEqual(pair.r_te, 99.0 / 101.0, places=14)

    def testNonMagneticDielectricStaticTe(self):
        wall = WallModel("glass", ConstantEps(3.0))
        self.assertEqual(reflection_at(wall, 0.0, 2.0, 0, OMEGA_C).r_te, 0.0)

    def testStaticLimitAtZeroY(self):
        ferro = reflection_at(wall_preset("ferro-dielectric"), 0.0, 0.0, 0, 1e14)
        self.assertAlmostEqual(ferro.r_tm, 0.5, places=14)
        self.assertAlmostEqual(ferro.r_te, 99.0 / 101.0, places=14)

        glass = reflection_at(WallModel("glass", ConstantEps(3.0)), 0.0, 0.0, 0, 1e14)
        self.assertAlmostEqual(glass.r_tm, 0.5, places=14)
        self.assertEqual(glass.r_te, 0.0)

        vacuum = reflection_at(WallModel("vacuum", ConstantEps(1.0)), 0.0, 0.0, 0, OMEGA_C)
        self.assertEqual((vacuum.r_tm, vacuum.r_te), (0.0, 0.0))

    def testStaticLimitInBlock(self):
        y = np.array([0.0, 1e-3, 1.0, 30.0])
        pair = reflection_arrays(wall_preset("ferro-dielectric"), 0.0, y, 0, OMEGA_C)
        np.testing.assert_allclose(pair.r_tm, np.full(4, 0.5), rtol=1e-14)
        np.testing.assert_allclose(pair.r_te, np.full(4, 99.0 / 101.0), rtol=1e-14)

    def testGoldStatic(self):
        wall = wall_preset("au-plasma")
        y = wall.eps.omega_p / OMEGA_C
        pair = reflection_at(wall, 0.0, y, 0, OMEGA_C)
        self.assertEqual(pair.r_tm, 1.0)
        self.assertAlmostEqual(pair.r_te, (1 - math.sqrt(2)) / (1 + math.sqrt(2)), places=12)
        self.assertAlmostEqual(pair.r_te, -0.17157, places=5)

    def testPlasmaContinuityAtZeroFrequency(self):
        wall = wall_preset("au-plasma")
        for y in (0.5, 5.0, 50.0):
            static = reflection_at(wall, 0.0, y, 0, OMEGA_C)
            near = reflection_at(wall, 1e-8, y, 1, OMEGA_C)
            self.assertAlmostEqual(static.r_tm, near.r_tm, delta=1e-6)
            self.assertAlmostEqual(static.r_te, near.r_te, delta=1e-6)

    def testVacuumReflectsNothing(self):
        wall = WallModel("vacuum", ConstantEps(1.0))
        for zeta, y, l in ((0.0, 1.0, 0), (0.3, 0.3, 2), (2.0, 9.0, 7)):
            pair = reflection_at(wall, zeta, y, l, OMEGA_C)
            self.assertEqual((pair.r_tm, pair.r_te), (0.0, 0.0))

    def testLargePermittivityApproachesIdealMetal(self):
        previous = (0.0, 0.0)
        for eps0 in (10.0, 1e3, 1e5, 1e8):
            pair = reflection_at(WallModel("dielectric", ConstantEps(eps0)), 0.4, 1.0, 1, OMEGA_C)
            self.assertGreater(pair.r_tm, previous[0])
            self.assertLess(pair.r_te, previous[1])
            previous = (pair.r_tm, pair.r_te)
        self.assertAlmostEqual(previous[0], 1.0, delta=1e-3)
        self.assertAlmostEqual(previous[1], -1.0, delta=1e-3)

    def testBoundsAndSigns(self):
        ctx = SpectralContext(1e-4, 1.0)
        ls = np.arange(0, 200, 7)
        zeta = ls * ctx.zeta_1
        y = zeta[:, None] + np.linspace(1e-3, 30.0, 16)[None, :]
        for name in ("au-plasma", "fe-plasma", "ferro-dielectric"):
            for mode in MuMode:
                wall = with_mu_mode(wall_preset(name), mode)
                pair = reflection_arrays(wall, zeta[:, None], y, ls[:, None], ctx.omega_c)
                self.assertTrue(np.all(np.abs(pair.r_tm) <= 1.0 + 1e-12))
                self.assertTrue(np.all(np.abs(pair.r_te) <= 1.0 + 1e-12))

        glass = WallModel("glass", ConstantEps(3.0))
        pair = reflection_arrays(glass, zeta[:, None], y, ls[:, None], ctx.omega_c)
        self.assertTrue(np.all(pair.r_te <= 0.0))
        self.assertTrue(np.all(pair.r_tm >= 0.0))

    def testPermeabilityModes(self):
        wall = WallModel("ferrite", ConstantEps(3.0), StaticFerromagnet(100.0, MuMode.ZeroFrequencyOnly))
        only_static = reflection_at(wall, 0.5, 1.0, 3, OMEGA_C)
        everywhere = reflection_at(with_mu_mode(wall, MuMode.AllFrequencies), 0.5, 1.0, 3, OMEGA_C)
        self.assertLess(only_static.r_te, 0.0)
        self.assertGreater(everywhere.r_te, 0.0)

    def testDomainErrors(self):
        wall = wall_preset("au-plasma")
        with self.assertRaises(DomainError):
            reflection_at(wall, 1.0, 0.5, 1, OMEGA_C)
        with self.assertRaises(DomainError):
            reflection_at(wall, -1.0, 0.5, 1, OMEGA_C)
        with self.assertRaises(DomainError):
            reflection_at(wall, 0.0, 1.0, 0, 0.0)
        with self.assertRaises(ContractError):
            reflection_at(wall, 0.0, 1.0, 2, OMEGA_C)

    def testResponseBroadcasts(self):
        wall = wall_preset("fe-plasma")
        zeta = np.array([0.0, 0.1, 0.2])
        response = wall_response(wall, zeta, np.arange(3), OMEGA_C)
        pair = response.at(np.array([1.0, 2.0, 3.0]))
        self.assertEqual(pair.r_tm.shape, (3,))
        self.assertEqual(pair.r_tm[0], 1.0)
