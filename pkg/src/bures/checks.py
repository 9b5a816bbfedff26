"""Runnable invariant suite behind the ``check`` CLI command.

Every check returns its measured deviation and the tolerance it was held to.
All randomness is internally seeded, so a run is a pure function of the
suite name.  The "fast" suite finishes in seconds; "full" adds the
statistical pushforward tests and cross-method integration checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import generators
from .euler import (COSET_RANGES, EIGEN_RANGES, CosetAngles,
                    EigenvalueAngles, coset_unitary, density_from_params,
                    diag_eigenvalues, diag_eigenvalues_batch, euler_unitary,
                    params_from_density_2, params_from_values)
from .functionals import FunctionalId, FunctionalKind
from .integrate import integrate, integrate_mc
from .linalg import dagger, eig_hermitian, expm_i_generator, frobenius_norm
from .measure import (coset_measure_factor, eigen_measure_factor,
                      eigenvalue_jacobian, haar_coset_density,
                      normalization_constant)
from .sampling import SamplerSpec, sample, sample_coset
KS_CRITICAL_1PCT = 1.6276  # asymptotic Kolmogorov quantile at alpha = 0.01


@dataclass(frozen=True)
class CheckResult:
    name: str
    deviation: float
    tolerance: float
    passed: bool


def _result(name: str, deviation: float, tolerance: float) -> CheckResult:
    return CheckResult(name, float(deviation), float(tolerance),
                       bool(deviation <= tolerance))


def ks_statistic(values: np.ndarray, cdf: Callable[[np.ndarray], np.ndarray]) -> float:
    """Two-sided Kolmogorov-Smirnov statistic against a continuous cdf."""
    x = np.sort(np.asarray(values, dtype=np.float64))
    m = x.size
    c = cdf(x)
    hi = np.arange(1, m + 1) / m
    lo = np.arange(0, m) / m
    return float(max((hi - c).max(), (c - lo).max()))


def _random_point_arrays(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    ranges = EIGEN_RANGES[n] + COSET_RANGES[n]
    cols = [rng.uniform(lo, hi, count) for lo, hi in ranges]
    return np.column_stack(cols)


# ---------------------------------------------------------------------------
# generator algebra
# ---------------------------------------------------------------------------

def check_generator_orthogonality() -> CheckResult:
    dev = 0.0
    for n in (2, 3):
        gens = generators.generator_set(n).generators
        for a, ta in enumerate(gens):
            for b, tb in enumerate(gens):
                want = 2.0 if a == b else 0.0
                dev = max(dev, abs(np.trace(ta @ tb) - want))
    return _result("generator_orthogonality", dev, 1e-14)


def check_generator_hermitian_traceless() -> CheckResult:
    dev = 0.0
    for n in (2, 3):
        for t in generators.generator_set(n).generators:
            dev = max(dev, frobenius_norm(t - t.conj().T), abs(np.trace(t)))
    return _result("generator_hermitian_traceless", dev, 0.0)


def check_cartan_commutation() -> CheckResult:
    dev = 0.0
    for n in (2, 3):
        gset = generators.generator_set(n)
        cartan = [gset.generators[k - 1] for k in gset.cartan_indices]
        for a in cartan:
            for b in cartan:
                dev = max(dev, frobenius_norm(a @ b - b @ a))
    return _result("cartan_commutation", dev, 1e-14)


# ---------------------------------------------------------------------------
# exponentials and eigendecomposition
# ---------------------------------------------------------------------------

def check_expm_unitarity_group_law() -> CheckResult:
    rng = np.random.default_rng(101)
    dev = 0.0
    for n in (2, 3):
        eye = np.eye(n)
        for _ in range(20):
            h = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            h = h + h.conj().T
            s, t = rng.uniform(-3, 3, 2)
            u = expm_i_generator(h, t)
            dev = max(dev, frobenius_norm(u @ dagger(u) - eye))
            dev = max(dev, frobenius_norm(
                expm_i_generator(h, s + t) - expm_i_generator(h, s) @ u))
            det_dev = abs(np.linalg.det(u) - np.exp(1j * t * np.trace(h)))
            dev = max(dev, det_dev)
    return _result("expm_unitarity_group_law", dev, 1e-12)


def check_eig_roundtrip() -> CheckResult:
    rng = np.random.default_rng(102)
    dev = 0.0
    for n in (2, 3):
        for _ in range(50):
            h = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            h = h + h.conj().T
            h *= 10.0 / max(1.0, frobenius_norm(h))
            w, v = eig_hermitian(h)
            dev = max(dev, frobenius_norm((v * w) @ v.conj().T - h))
            dev = max(dev, frobenius_norm(v.conj().T @ v - np.eye(n)))
            if w.size > 1 and float((w[:-1] - w[1:]).min()) < 0.0:
                dev = max(dev, 1.0)  # ordering violation
    return _result("eig_roundtrip", dev, 1e-12)


# ---------------------------------------------------------------------------
# parameterization
# ---------------------------------------------------------------------------

def check_density_validity() -> CheckResult:
    rng = np.random.default_rng(103)
    dev = 0.0
    for n in (2, 3):
        pts = _random_point_arrays(n, 500, rng)
        for row in pts:
            p = params_from_values(n, row)
            rho = density_from_params(p)
            dev = max(dev, frobenius_norm(rho - rho.conj().T))
            dev = max(dev, abs(np.trace(rho).real - 1.0), abs(np.trace(rho).imag))
            w = np.linalg.eigvalsh(rho)
            dev = max(dev, max(0.0, -float(w.min())))
            lam = np.sort(diag_eigenvalues(p.eigen))[::-1]
            dev = max(dev, float(np.abs(np.sort(w)[::-1] - lam).max()))
    return _result("density_validity", dev, 1e-12)


def check_dropped_angle_invariance() -> CheckResult:
    rng = np.random.default_rng(104)
    grid = np.linspace(0.0, 2 * math.pi, 7)
    dev = 0.0
    for n in (2, 3):
        for _ in range(10):
            pt = _random_point_arrays(n, 1, rng)[0]
            k = n - 1
            lam = diag_eigenvalues_batch(n, pt[None, :k])[0]
            dropped = 1 if n == 2 else 2
            for slot in range(dropped):
                ref = None
                for g in grid:
                    full = list(pt[k:]) + [0.0] * dropped
                    full[len(pt[k:]) + slot] = g
                    u = euler_unitary(n, full)
                    rho = (u * lam) @ u.conj().T
                    if ref is None:
                        ref = rho
                    else:
                        dev = max(dev, float(np.abs(rho - ref).max()))
    return _result("dropped_angle_invariance", dev, 1e-13)


def check_inverse_roundtrip_2state() -> CheckResult:
    rng = np.random.default_rng(105)
    dev = 0.0
    for _ in range(100):
        p = params_from_values(2, _random_point_arrays(2, 1, rng)[0])
        rho = density_from_params(p)
        rec = params_from_density_2(rho)
        dev = max(dev, float(np.abs(density_from_params(rec.params) - rho).max()))
    return _result("inverse_roundtrip_2state", dev, 1e-10)


# ---------------------------------------------------------------------------
# measures
# ---------------------------------------------------------------------------

def check_coset_density_2state_closed_form() -> CheckResult:
    alphas = np.linspace(0, math.pi, 20)
    betas = np.linspace(0, math.pi / 2, 20)
    dev = 0.0
    for al in alphas:
        for be in betas:
            d = haar_coset_density(CosetAngles(2, (al, be)))
            dev = max(dev, abs(d - math.sin(2 * be)))
    return _result("coset_density_2state_closed_form", dev, 1e-10)


def _coset_rows_fd(n: int, angles: np.ndarray, h: float = 1e-6) -> float:
    """|det C| with the factor derivatives replaced by central differences."""
    gset = generators.generator_set(n)
    coset_gens = gset.coset_generators()
    m = angles.size

    def unitary(x):
        return coset_unitary(CosetAngles(n, tuple(x)))

    u0 = unitary(angles)
    rows = []
    for k in range(m):
        up = angles.copy(); up[k] += h
        dn = angles.copy(); dn[k] -= h
        du = (unitary(up) - unitary(dn)) / (2 * h)
        x = -1j * u0.conj().T @ du
        rows.append([0.5 * np.trace(x @ t).real for t in coset_gens])
    return abs(float(np.linalg.det(np.array(rows))))


def check_coset_density_fd_3state() -> CheckResult:
    rng = np.random.default_rng(106)
    dev = 0.0
    for _ in range(3):
        ang = np.array([rng.uniform(lo + 0.05, hi - 0.05) for lo, hi in COSET_RANGES[3]])
        exact = haar_coset_density(CosetAngles(3, tuple(ang)))
        dev = max(dev, abs(exact - _coset_rows_fd(3, ang)))
    return _result("coset_density_fd_3state", dev, 1e-7)


def check_jacobian_fd_3state() -> CheckResult:
    rng = np.random.default_rng(107)
    h = 1e-6
    dev = 0.0
    for _ in range(25):
        t = np.array([rng.uniform(0.01, math.pi / 4 - 0.01),
                      rng.uniform(0.01, EIGEN_RANGES[3][1][1] - 0.01)])
        closed = eigenvalue_jacobian(EigenvalueAngles(3, tuple(t)))
        jac = np.empty((2, 2))
        for col in range(2):
            step = np.zeros(2)
            step[col] = h
            up = diag_eigenvalues_batch(3, (t + step)[None, :])[0]
            dn = diag_eigenvalues_batch(3, (t - step)[None, :])[0]
            jac[:, col] = (up[:2] - dn[:2]) / (2 * h)
        dev = max(dev, abs(closed - abs(np.linalg.det(jac))))
    return _result("jacobian_fd_3state", dev, 1e-8)


def check_joint_density_2state_analytic() -> CheckResult:
    rng = np.random.default_rng(108)
    pts = _random_point_arrays(2, 50, rng)
    dens = (eigen_measure_factor(2, pts[:, :1]) * coset_measure_factor(2, pts[:, 1:]))
    want = 8 * np.cos(2 * pts[:, 0]) ** 2 * np.sin(2 * pts[:, 2])
    return _result("joint_density_2state_analytic",
                   float(np.abs(dens - want).max()), 1e-10)


def check_normalization_2state() -> CheckResult:
    z = normalization_constant(2)
    return _result("normalization_2state", abs(z - math.pi ** 2), 1e-6)


def check_sampler_determinism() -> CheckResult:
    spec = SamplerSpec(seed=2024, batch_size=8)
    a = sample(2, 256, spec, threads=1)
    b = sample(2, 256, spec, threads=4)
    same = np.array_equal(a.params, b.params)
    return _result("sampler_determinism", 0.0 if same else 1.0, 0.0)


# ---------------------------------------------------------------------------
# full-suite statistical checks
# ---------------------------------------------------------------------------

def check_normalization_3state_consistency() -> CheckResult:
    z8 = normalization_constant(3, points_per_axis=8)
    z10 = normalization_constant(3, points_per_axis=10)
    return _result("normalization_3state_consistency",
                   abs(z8 - z10) / abs(z10), 1e-4)


def check_pushforward_uniform_2state() -> CheckResult:
    batch = sample_coset(2, 100_000, SamplerSpec(seed=501))
    u11 = np.abs(batch.unitaries()[:, 0, 0]) ** 2
    d = ks_statistic(u11, lambda t: np.clip(t, 0.0, 1.0))
    return _result("pushforward_uniform_2state", d,
                   KS_CRITICAL_1PCT / math.sqrt(u11.size))


def check_pushforward_dirichlet_3state() -> CheckResult:
    batch = sample_coset(3, 100_000, SamplerSpec(seed=502))
    col = np.abs(batch.unitaries()[:, :, 0]) ** 2
    # Dirichlet(1,1,1) marginals are Beta(1,2)
    beta12 = lambda t: 1.0 - (1.0 - np.clip(t, 0.0, 1.0)) ** 2
    d = max(ks_statistic(col[:, j], beta12) for j in range(3))
    return _result("pushforward_dirichlet_3state", d,
                   KS_CRITICAL_1PCT / math.sqrt(col.shape[0]))


def check_mc_quadrature_agreement_2state() -> CheckResult:
    fid = FunctionalId(FunctionalKind.PURITY)
    quad = integrate(2, fid)
    mc = integrate_mc(2, fid, 100_000, seed=503)
    gap = abs(quad.value - mc.value)
    tol = 3.0 * math.hypot(mc.std_error, quad.error_estimate)
    return _result("mc_quadrature_agreement_2state", gap, tol)


def check_entropy_oracle_2state() -> CheckResult:
    # 1-D spectral reduction of the same measure: weight 8 cos^2(2t) / pi
    x, w = np.polynomial.legendre.leggauss(200)
    t = math.pi / 8 * (x + 1.0)
    w = math.pi / 8 * w
    lam = np.stack([np.cos(t) ** 2, np.sin(t) ** 2], axis=-1)
    from .functionals import from_eigenvalues
    fid = FunctionalId(FunctionalKind.VON_NEUMANN_ENTROPY)
    ref = float((from_eigenvalues(fid, lam) * 8 * np.cos(2 * t) ** 2 / math.pi * w).sum())
    quad = integrate(2, fid)
    return _result("entropy_oracle_2state", abs(quad.value - ref), 1e-5)


FAST_CHECKS = (
    check_generator_orthogonality,
    check_generator_hermitian_traceless,
    check_cartan_commutation,
    check_expm_unitarity_group_law,
    check_eig_roundtrip,
    check_density_validity,
    check_dropped_angle_invariance,
    check_inverse_roundtrip_2state,
    check_coset_density_2state_closed_form,
    check_coset_density_fd_3state,
    check_jacobian_fd_3state,
    check_joint_density_2state_analytic,
    check_normalization_2state,
    check_sampler_determinism,
)

FULL_CHECKS = FAST_CHECKS + (
    check_normalization_3state_consistency,
    check_pushforward_uniform_2state,
    check_pushforward_dirichlet_3state,
    check_mc_quadrature_agreement_2state,
    check_entropy_oracle_2state,
)


def run_suite(suite: str = "fast") -> list[CheckResult]:
    if suite == "fast":
        checks = FAST_CHECKS
    elif suite == "full":
        checks = FULL_CHECKS
    else:
        raise ValueError(f"unknown suite {suite!r} (expected 'fast' or 'full')")
    return [fn() for fn in checks]
