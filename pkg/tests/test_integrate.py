import pytest

from bures.functionals import FunctionalId, from_eigenvalues
from bures.integrate import IntegrationResult, integrate, integrate_mc
from bures.tensorgrid import QuadratureSpec

ENTROPY = FunctionalId.parse("entropy")
PURITY = FunctionalId.parse("purity")
CONST = FunctionalId.parse("moment:0")

# 1-D spectral reduction values (independent evaluation, frozen):
# mean entropy from mpmath tanh-sinh quadrature; mean purity analytic 7/8
MEAN_ENTROPY_2 = 0.21962769445322395
MEAN_PURITY_2 = 0.875
# 2-D spectral-reduction pins for n=3 (96-point Gauss-Legendre, frozen)
MEAN_ENTROPY_3 = 0.523048468775154
MEAN_PURITY_3 = 0.684443199321445


class TestQuadrature2:
    def test_constant_normalizes_to_one(self):
        res = integrate(2, CONST)
        assert abs(res.value - 1.0) <= 1e-6

    def test_mean_purity(self):
        res = integrate(2, PURITY)
        assert abs(res.value - MEAN_PURITY_2) <= 1e-6
        assert res.error_estimate <= 1e-6

    def test_mean_entropy(self):
        res = integrate(2, ENTROPY)
        assert abs(res.value - MEAN_ENTROPY_2) <= 1e-5

    def test_linearity(self):
        a, b = 2.5, -0.75
        combo = lambda lam: (a * from_eigenvalues(ENTROPY, lam)
                             + b * from_eigenvalues(PURITY, lam))
        lhs = integrate(2, combo).value
        rhs = a * integrate(2, ENTROPY).value + b * integrate(2, PURITY).value
        assert abs(lhs - rhs) <= 1e-10

    def test_result_metadata(self):
        res = integrate(2, PURITY, QuadratureSpec(16))
        assert isinstance(res, IntegrationResult)
        assert res.method == "quadrature"
        assert res.points_per_axis == 16
        assert res.rule == "gauss-legendre"


class TestQuadrature3:
    def test_constant_normalizes_to_one(self):
        # full 8-D stream; 6 points/axis measures ~3e-5 against the cached constant
        res = integrate(3, CONST, QuadratureSpec(6))
        assert abs(res.value - 1.0) <= 1e-4

    def test_spectral_reduction_pins(self):
        ent = integrate(3, ENTROPY, QuadratureSpec(5))
        pur = integrate(3, PURITY, QuadratureSpec(5))
        assert abs(ent.value - MEAN_ENTROPY_3) <= 3e-3
        assert abs(pur.value - MEAN_PURITY_3) <= 1e-3


class TestMonteCarlo:
    def test_deterministic(self):
        a = integrate_mc(2, PURITY, 2000, seed=9)
        b = integrate_mc(2, PURITY, 2000, seed=9)
        assert a.value == b.value and a.std_error == b.std_error

    def test_purity_agreement(self):
        res = integrate_mc(2, PURITY, 50_000, seed=31)
        assert res.method == "mc"
        assert res.samples == 50_000
        assert abs(res.value - MEAN_PURITY_2) <= 4 * res.std_error

    def test_entropy_agreement_3state(self):
        res = integrate_mc(3, ENTROPY, 4_000, seed=17)
        assert abs(res.value - MEAN_ENTROPY_3) <= 4 * res.std_error

    def test_validation(self):
        with pytest.raises(ValueError):
            integrate_mc(2, PURITY, 0, seed=1)
        with pytest.raises(TypeError):
            integrate_mc(2, lambda lam: lam.sum(axis=-1), 10, seed=1)


class TestValidation:
    def test_bad_n(self):
        with pytest.raises(ValueError):
            integrate(4, PURITY)

    def test_bad_functional(self):
        with pytest.raises(TypeError):
            integrate(2, "purity")
