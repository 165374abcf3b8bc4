import dataclasses
import math
import unittest
from unittest import mock

import numpy as np

from cpforce.exceptions import DomainError, RarefactionError
from cpforce.models.atoms import atom_preset
from cpforce.models.materials import ConstantEps, WallModel, wall_preset
from cpforce.numerics.spectral import SpectralContext
from cpforce.physics.casimir_polder import SolverOptions
from cpforce.physics.plates import (
    ATOM_QUAD_REL_TOL,
    DiluteGasWall,
    atom_free_energy_integral,
    dilute_response,
    first_order_reflection,
    plate_classical_limit,
    plate_free_energy,
    rarefaction_check,
    richardson_limit,
)
from cpforce.units import CONSTANTS


class TestPlateFreeEnergy(unittest.TestCase):
    T = 300.0

    def testVacuumGap(self):
        vacuum = WallModel("vacuum", ConstantEps(1.0))
        self.assertEqual(plate_free_energy(vacuum, wall_preset("ideal-metal"), 1e-4, self.T), 0.0)

    def testSymmetric(self):
        gold, ferro = wall_preset("au-plasma"), wall_preset("ferro-dielectric")
        self.assertEqual(plate_free_energy(gold, ferro, 1e-4, self.T), plate_free_energy(ferro, gold, 1e-4, self.T))

    def testAttractive(self):
        gold = wall_preset("au-plasma")
        near = plate_free_energy(gold, gold, 1e-4, self.T)
        far = plate_free_energy(gold, gold, 2e-4, self.T)
        self.assertLess(near, far)
        self.assertLess(far, 0.0)

    def testStrongerDielectricAttractsMore(self):
        energies = []
        for eps0 in (2.0, 3.0, 5.0):
            wall = WallModel(f"dielectric-{eps0:g}", ConstantEps(eps0))
            energies.append(plate_free_energy(wall, wall, 1e-4, self.T))
        self.assertTrue(energies[0] > energies[1] > energies[2], energies)
        self.assertLess(energies[0], 0.0)

    def testClassicalLimit(self):
        a = 20e-4
        self.assertGreater(SpectralContext(a, self.T).tau_norm, 30.0)
        ideal = wall_preset("ideal-metal")
        value = plate_free_energy(ideal, ideal, a, self.T)
        expected = plate_classical_limit(a, self.T)
        self.assertLess(abs(value / expected - 1), 1e-6)

    def testClassicalCoefficient(self):
        expected = -1.2020569031595942 / (8 * math.pi)
        a, T = 1e-4, 300.0
        self.assertAlmostEqual(plate_classical_limit(a, T) * a**2 / (CONSTANTS.k_B * T) / expected, 1.0, places=14)


class TestDiluteGas(unittest.TestCase):
    def setUp(self):
        self.atom = atom_preset("H")

    def testDilutionGuard(self):
        DiluteGasWall(self.atom, 1e19)
        with self.assertRaises(DomainError):
            DiluteGasWall(self.atom, 1e21)
        with self.assertRaises(DomainError):
            DiluteGasWall(self.atom, 0.0)

    def testFirstOrderReflection(self):
        ctx = SpectralContext(1e-4, 1.0)
        zeta, y, xi = ctx.zeta_1, 2.0 * ctx.zeta_1, ctx.xi_1
        opts = SolverOptions()

        def residuals(N):
            gas = DiluteGasWall(self.atom, N)
            exact = dilute_response(gas, ctx, np.array([1]), opts).at(y)
            approx = first_order_reflection(gas, zeta, y, xi, ctx.T, opts)
            return abs(float(exact.r_tm[0]) - approx.r_tm), abs(float(exact.r_te[0]) - approx.r_te)

        dense, sparse = residuals(1e19), residuals(5e18)
        for high, low in zip(dense, sparse):
            self.assertAlmostEqual(math.log2(high / low), 2.0, delta=0.1)

    def testFirstOrderSigns(self):
        gas = DiluteGasWall(self.atom, 1e12)
        ctx = SpectralContext(1e-4, 1.0)
        pair = first_order_reflection(gas, ctx.zeta_1, 2.0 * ctx.zeta_1, ctx.xi_1, ctx.T)
        self.assertGreater(pair.r_tm, 0.0)
        self.assertLess(pair.r_te, 0.0)

    def testFirstOrderDomain(self):
        gas = DiluteGasWall(self.atom, 1e12)
        with self.assertRaises(DomainError):
            first_order_reflection(gas, 0.0, 0.0, 0.0, 1.0)
        with self.assertRaises(DomainError):
            first_order_reflection(gas, 0.5, 0.4, 1e12, 1.0)


class TestRarefaction(unittest.TestCase):
    def testRichardsonLimit(self):
        N = (3e12, 2e12, 1e12)
        D = [1.0 + 2.0 * n / 1e12 + 3.0 * (n / 1e12) ** 2 for n in N]
        self.assertAlmostEqual(richardson_limit(N, D), 1.0, places=10)
        self.assertAlmostEqual(richardson_limit((2.0, 1.0), (7.0, 6.0)), 5.0, places=12)

    def testRichardsonNeedsTwoPoints(self):
        with self.assertRaises(RarefactionError):
            richardson_limit((1.0,), (1.0,))

    def testInvalidDensities(self):
        atom, wall = atom_preset("H"), wall_preset("ideal-metal")
        with self.assertRaises(DomainError):
            rarefaction_check(atom, wall, 1e-4, 1.0, (1e10, 1e11))
        with self.assertRaises(RarefactionError):
            rarefaction_check(atom, wall, 1e-4, 1.0, (1e10,))

    def testAtomIntegralTail(self):
        integral = atom_free_energy_integral(atom_preset("H"), wall_preset("ideal-metal"), 1e-4, 300.0)
        self.assertLess(integral.value, 0.0)
        self.assertEqual(integral.value, integral.explicit + integral.tail)
        self.assertAlmostEqual(integral.tail_exponent, 3.0, delta=0.01)
        self.assertLess(abs(integral.tail), 0.01 * abs(integral.value))
        self.assertTrue(integral.quad_converged)
        self.assertLessEqual(integral.quad_error, ATOM_QUAD_REL_TOL * abs(integral.explicit))

    def testUnconvergedAtomIntegralFailsCheck(self):
        atom, wall = atom_preset("H"), wall_preset("ideal-metal")
        exact = atom_free_energy_integral(atom, wall, 1e-4, 300.0)
        rough = dataclasses.replace(exact, quad_error=1e-3 * abs(exact.explicit), quad_message="maximum subdivisions")
        self.assertFalse(rough.quad_converged)
        with mock.patch("cpforce.physics.plates.atom_free_energy_integral", return_value=rough):
            report = rarefaction_check(atom, wall, 1e-4, 300.0, (1e12, 1e11))
        self.assertFalse(report.passed)
        self.assertTrue(any("quadrature" in line for line in report.diagnostics), report.diagnostics)
        self.assertEqual(report.as_dict()["quad_error"], rough.quad_error)

    def testRoomTemperatureConsistency(self):
        opts = SolverOptions(sum_rel_tol=1e-10, quad_rel_tol=1e-10)
        report = rarefaction_check(atom_preset("H"), wall_preset("ideal-metal"), 1e-4, 300.0, (1e12, 1e11), opts)
        self.assertTrue(report.passed, report.diagnostics)
        self.assertLess(report.mismatch, 1e-4)
        self.assertEqual(report.as_dict()["N_values_cm3"], [1e12, 1e11])
