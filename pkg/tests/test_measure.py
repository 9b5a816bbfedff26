import math

import numpy as np
import pytest

from bures.euler import (CosetAngles, EigenvalueAngles, coset_unitary,
                         diag_eigenvalues_batch, params_from_values)
from bures.generators import generator_set
from bures.measure import (AngleBox, MeasureValue, NormalizationMode,
                           angle_box, bures_joint_density, coset_box,
                           coset_measure_factor, coset_normalization_constant,
                           eigen_box, eigen_measure_factor,
                           eigenvalue_jacobian, haar_coset_density,
                           hall_density, joint_density_batch,
                           normalization_constant)
from conftest import random_box_points

# independent high-resolution evaluations (frozen; see also pi^2 and pi^3/4)
Z3_PINNED = 7.959681468268041
JOINT3_PINNED_POINT = [0.31, 0.77, 2.13, 0.95, 0.41, 1.02, 2.9, 0.2]
JOINT3_PINNED_VALUE = 0.016246150905926


class TestHallDensity:
    def test_degenerate_pair_vanishes(self):
        assert hall_density([0.5, 0.5]) == 0.0

    def test_two_state_value(self):
        # 4*(1/2)^2/1 / sqrt(3/16)
        assert abs(hall_density([0.75, 0.25]) - 4 / math.sqrt(3)) <= 1e-14

    def test_three_state_value(self):
        # hand evaluation: 16/135
        assert abs(hall_density([0.5, 1 / 3, 1 / 6]) - 16 / 135) <= 1e-14

    def test_boundary_singular(self):
        assert hall_density([1.0, 0.0]) == math.inf

    def test_rejects_negative(self):
        with pytest.raises(ValueError, match="nonnegative"):
            hall_density([1.2, -0.2])

    def test_rejects_bad_sum(self):
        with pytest.raises(ValueError, match="sum"):
            hall_density([0.6, 0.6])


class TestEigenvalueJacobian:
    def test_two_state_values(self):
        assert abs(eigenvalue_jacobian(EigenvalueAngles(2, (math.pi / 4,))) - 1) <= 1e-15
        assert eigenvalue_jacobian(EigenvalueAngles(2, (0.0,))) == 0.0

    def test_three_state_finite_differences(self, rng):
        h = 1e-6
        for _ in range(100):
            t = np.array([rng.uniform(0.01, math.pi / 4 - 0.01),
                          rng.uniform(0.01, 0.94)])
            closed = eigenvalue_jacobian(EigenvalueAngles(3, tuple(t)))
            jac = np.empty((2, 2))
            for col in range(2):
                step = np.zeros(2)
                step[col] = h
                up = diag_eigenvalues_batch(3, (t + step)[None, :])[0]
                dn = diag_eigenvalues_batch(3, (t - step)[None, :])[0]
                jac[:, col] = (up[:2] - dn[:2]) / (2 * h)
            assert abs(closed - abs(np.linalg.det(jac))) <= 1e-8


class TestEigenMeasureFactor:
    def test_matches_hall_times_jacobian_interior(self, rng):
        for n in (2, 3):
            for _ in range(100):
                pts = random_box_points(n, 1, rng)[0, :n - 1]
                # keep clear of the spectrum boundary where hall_density blows up
                eig = EigenvalueAngles(n, tuple(np.clip(pts, 0.05, None)))
                lam = diag_eigenvalues_batch(n, np.asarray(eig.angles)[None, :])[0]
                direct = hall_density(lam) * eigenvalue_jacobian(eig)
                composed = float(eigen_measure_factor(n, np.asarray(eig.angles)))
                assert abs(direct - composed) <= 1e-10 * max(1.0, abs(direct))

    def test_finite_on_boundary(self):
        assert eigen_measure_factor(2, np.array([0.0])) == 8.0
        val3 = eigen_measure_factor(3, np.array([0.0, 0.0]))
        assert np.isfinite(val3) and val3 == 0.0

    def test_two_state_closed_form(self):
        t = np.linspace(0, math.pi / 4, 64)
        got = eigen_measure_factor(2, t[:, None])
        assert np.abs(got - 8 * np.cos(2 * t) ** 2).max() <= 1e-14


class TestCosetDensity:
    def test_two_state_equals_sin_2beta(self):
        worst = 0.0
        for al in np.linspace(0, math.pi, 50):
            for be in np.linspace(0, math.pi / 2, 50):
                d = haar_coset_density(CosetAngles(2, (al, be)))
                worst = max(worst, abs(d - math.sin(2 * be)))
        assert worst <= 1e-10

    def test_two_state_pole_and_peak(self):
        assert abs(haar_coset_density(CosetAngles(2, (1.0, math.pi / 4))) - 1) <= 1e-13
        assert haar_coset_density(CosetAngles(2, (0.3, 0.0))) <= 1e-13

    def test_alpha_independence(self, rng):
        for n in (2, 3):
            base = random_box_points(n, 1, rng)[0, n - 1:]
            vals = []
            for al in np.linspace(0, math.pi, 20):
                ang = base.copy()
                ang[0] = al
                vals.append(haar_coset_density(CosetAngles(n, tuple(ang))))
            assert max(vals) - min(vals) <= 1e-10

    def test_three_state_finite_differences(self, rng):
        """Central-difference recomputation of the same coefficient matrix."""
        gset = generator_set(3)
        coset_gens = gset.coset_generators()
        h = 1e-6
        for _ in range(20):
            ang = np.array([rng.uniform(lo + 0.05, hi - 0.05)
                            for lo, hi in zip(coset_box(3).lower, coset_box(3).upper)])
            u0 = coset_unitary(CosetAngles(3, tuple(ang)))
            rows = []
            for k in range(6):
                up, dn = ang.copy(), ang.copy()
                up[k] += h
                dn[k] -= h
                du = (coset_unitary(CosetAngles(3, tuple(up)))
                      - coset_unitary(CosetAngles(3, tuple(dn)))) / (2 * h)
                x = -1j * u0.conj().T @ du
                rows.append([0.5 * np.trace(x @ t).real for t in coset_gens])
            fd = abs(np.linalg.det(np.array(rows)))
            exact = haar_coset_density(CosetAngles(3, tuple(ang)))
            assert abs(exact - fd) <= 1e-7

    def test_batch_matches_scalar(self, rng):
        for n in (2, 3):
            pts = random_box_points(n, 40, rng)[:, n - 1:]
            batch = coset_measure_factor(n, pts)
            for row, val in zip(pts, batch):
                assert abs(val - haar_coset_density(CosetAngles(n, tuple(row)))) <= 1e-13

    def test_three_state_derived_closed_form(self, rng):
        # regression against an independently verified factorized form:
        # 0.5 sin(2 beta) sin(2 b) sin(2 theta) sin^2(theta)
        pts = random_box_points(3, 200, rng)[:, 2:]
        got = coset_measure_factor(3, pts)
        be, th, b = pts[:, 1], pts[:, 3], pts[:, 5]
        want = 0.5 * np.abs(np.sin(2 * be) * np.sin(2 * b)
                            * np.sin(2 * th) * np.sin(th) ** 2)
        assert np.abs(got - want).max() <= 1e-12


class TestJointDensity:
    def test_degenerate_point_vanishes(self):
        # cos(2 theta)^2 at theta = float(pi/4); zero up to roundoff of pi/2
        p = params_from_values(2, [math.pi / 4, 0.3, 0.4])
        assert bures_joint_density(p).value <= 1e-30

    def test_two_state_analytic(self, rng):
        pts = random_box_points(2, 100, rng)
        dens = joint_density_batch(2, pts)
        want = 8 * np.cos(2 * pts[:, 0]) ** 2 * np.sin(2 * pts[:, 2])
        assert np.abs(dens - want).max() <= 1e-10

    def test_three_state_pinned_point(self):
        p = params_from_values(3, JOINT3_PINNED_POINT)
        got = bures_joint_density(p).value
        assert abs(got - JOINT3_PINNED_VALUE) <= 1e-10

    def test_nonnegative_everywhere(self, rng):
        for n in (2, 3):
            assert joint_density_batch(n, random_box_points(n, 500, rng)).min() >= 0.0

    def test_modes(self):
        p = params_from_values(2, [0.3, 0.5, 0.7])
        raw = bures_joint_density(p, NormalizationMode.RAW)
        norm = bures_joint_density(p, NormalizationMode.NORMALIZED)
        assert isinstance(raw, MeasureValue)
        assert raw.normalization_mode is NormalizationMode.RAW
        assert norm.normalization_mode is NormalizationMode.NORMALIZED
        assert abs(norm.value - raw.value / normalization_constant(2)) <= 1e-15

    def test_scalar_matches_batch(self, rng):
        for n in (2, 3):
            row = random_box_points(n, 1, rng)[0]
            p = params_from_values(n, row)
            assert abs(bures_joint_density(p).value
                       - joint_density_batch(n, row[None, :]).item()) <= 1e-12


class TestNormalization:
    def test_two_state_is_pi_squared(self):
        assert abs(normalization_constant(2) - math.pi ** 2) <= 1e-8

    def test_two_state_resolution_stability(self):
        z32 = normalization_constant(2, points_per_axis=32)
        z64 = normalization_constant(2, points_per_axis=64)
        assert abs(z32 - z64) <= 1e-6

    def test_three_state_pinned(self):
        assert abs(normalization_constant(3) - Z3_PINNED) <= 1e-6 * Z3_PINNED

    def test_coset_constant_3state(self):
        # pi^3 from the three free diagonal angles, 1/4 from the rest
        assert abs(coset_normalization_constant(3) - math.pi ** 3 / 4) <= 1e-9

    def test_coset_constant_2state(self):
        assert abs(coset_normalization_constant(2) - math.pi) <= 1e-12

    def test_cached(self):
        assert normalization_constant(2) == normalization_constant(2)

    def test_invalid_n(self):
        with pytest.raises(ValueError):
            normalization_constant(4)


class TestAngleBox:
    def test_contents(self):
        box2 = angle_box(2)
        assert isinstance(box2, AngleBox)
        assert box2.names == ("theta", "alpha", "beta")
        assert box2.lower == (0.0, 0.0, 0.0)
        assert box2.upper == (math.pi / 4, math.pi, math.pi / 2)
        box3 = angle_box(3)
        assert box3.names == ("theta1", "theta2", "alpha", "beta", "gamma",
                              "theta_big", "a", "b")
        assert box3.dim == 8

    def test_sub_boxes(self):
        assert eigen_box(3).dim == 2
        assert coset_box(3).dim == 6
        assert abs(angle_box(2).volume - math.pi ** 3 / 8) <= 1e-15
