import math

import numpy as np
import pytest

from bures.tensorgrid import (QuadratureRule, QuadratureSpec, axis_rule,
                              tensor_quadrature, thread_count)

GL = QuadratureRule.GAUSS_LEGENDRE
SIMPSON = QuadratureRule.COMPOSITE_SIMPSON


class TestAxisRules:
    def test_gauss_legendre_polynomial_exactness(self):
        # m-point GL integrates degree 2m-1 exactly
        x, w = axis_rule(GL, 4, 0.0, 1.0)
        got = (w * x ** 7).sum()
        assert abs(got - 1 / 8) <= 1e-14

    def test_simpson_cubic_exact_odd_points(self):
        x, w = axis_rule(SIMPSON, 11, 0.0, 2.0)
        assert abs((w * x ** 3).sum() - 4.0) <= 1e-12

    def test_simpson_even_points(self):
        x, w = axis_rule(SIMPSON, 10, 0.0, 1.0)
        assert abs((w * np.sin(x)).sum() - (1 - math.cos(1))) <= 1e-4

    def test_two_points_is_trapezoid(self):
        x, w = axis_rule(SIMPSON, 2, 0.0, 1.0)
        assert np.allclose(w, [0.5, 0.5], atol=0)

    def test_weights_sum_to_length(self):
        for rule in (GL, SIMPSON):
            for pts in (2, 5, 8, 9):
                _, w = axis_rule(rule, pts, -1.0, 3.5)
                assert abs(w.sum() - 4.5) <= 1e-12

    def test_validation(self):
        with pytest.raises(ValueError):
            QuadratureSpec(1)
        with pytest.raises(ValueError):
            axis_rule(GL, 1, 0, 1)


class TestTensorQuadrature:
    def test_separable_product(self):
        spec = QuadratureSpec(16)
        got = tensor_quadrature(
            lambda p: np.sin(p[:, 0]) * np.cos(p[:, 1]) * p[:, 2] ** 2,
            [0, 0, 0], [math.pi, math.pi / 2, 1.0], spec)
        assert abs(got - 2.0 * 1.0 * (1 / 3)) <= 1e-12

    def test_matches_dense_reference(self):
        spec = QuadratureSpec(5)
        lo, hi = [0.0, -1.0], [1.0, 2.0]
        fn = lambda p: np.exp(-p[:, 0] * p[:, 1]) + p[:, 0]
        got = tensor_quadrature(fn, lo, hi, spec)
        x0, w0 = axis_rule(GL, 5, lo[0], hi[0])
        x1, w1 = axis_rule(GL, 5, lo[1], hi[1])
        g0, g1 = np.meshgrid(x0, x1, indexing="ij")
        pts = np.column_stack([g0.ravel(), g1.ravel()])
        ref = (np.outer(w0, w1).ravel() * fn(pts)).sum()
        assert abs(got - ref) <= 1e-14

    def test_thread_invariance(self):
        fn = lambda p: np.cos(p).sum(axis=1) ** 2
        spec = QuadratureSpec(9)
        a = tensor_quadrature(fn, [0] * 5, [1] * 5, spec, threads=1)
        b = tensor_quadrature(fn, [0] * 5, [1] * 5, spec, threads=4)
        assert a == b

    def test_env_thread_invariance(self, monkeypatch):
        fn = lambda p: (p ** 2).sum(axis=1)
        spec = QuadratureSpec(7)
        monkeypatch.setenv("BURES_THREADS", "1")
        a = tensor_quadrature(fn, [0] * 6, [1] * 6, spec)
        monkeypatch.setenv("BURES_THREADS", "4")
        b = tensor_quadrature(fn, [0] * 6, [1] * 6, spec)
        assert a == b

    def test_bad_bounds(self):
        with pytest.raises(ValueError):
            tensor_quadrature(lambda p: p[:, 0], [0, 0], [1], QuadratureSpec(3))


class TestThreadCount:
    def test_default(self, monkeypatch):
        monkeypatch.delenv("BURES_THREADS", raising=False)
        assert thread_count() == 1

    def test_env(self, monkeypatch):
        monkeypatch.setenv("BURES_THREADS", "6")
        assert thread_count() == 6

    def test_argument_overrides_env(self, monkeypatch):
        monkeypatch.setenv("BURES_THREADS", "6")
        assert thread_count(2) == 2

    def test_invalid(self, monkeypatch):
        monkeypatch.setenv("BURES_THREADS", "zero")
        with pytest.raises(ValueError):
            thread_count()
        with pytest.raises(ValueError):
            thread_count(0)
