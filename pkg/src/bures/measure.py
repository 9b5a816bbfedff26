"""The Bures measure in Euler-angle coordinates.

The coordinate density is a product of three factors:

  * the eigenvalue-simplex density
    (lam_1..lam_n)^(-1/2) * prod_{j<k} 4 (lam_j - lam_k)^2 / (lam_j + lam_k),
  * the Jacobian |d(lam_1..lam_{n-1}) / d(eigenvalue angles)|,
  * the invariant coset density of the truncated Euler product, computed
    numerically as |det C| where C_{k,a} = Tr(-i U^dag dU/dx_k T_a)/2 with
    columns over the non-diagonal (coset) generators.

The first two factors have an integrable 1/sqrt(lam) singularity against a
vanishing Jacobian at spectrum boundaries; ``*_measure_factor`` composes them
analytically so the product stays finite there.  Everything is exposed both
as scalar operations on the typed coordinates and as vectorized kernels.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import generators
from .euler import (COSET_NAMES, COSET_RANGES, EIGEN_NAMES, EIGEN_RANGES,
                    CosetAngles, DensityMatrixParams, EigenvalueAngles,
                    coset_factor_stack, _COSET_KINDS)
from .linalg import dagger, expm_i_generator, matmul
from .tensorgrid import QuadratureRule, QuadratureSpec, tensor_quadrature


class NormalizationMode(Enum):
    RAW = "raw"
    NORMALIZED = "normalized"


@dataclass(frozen=True)
class MeasureValue:
    """A nonnegative coordinate density with its normalization convention."""

    value: float
    normalization_mode: NormalizationMode
    n: int


@dataclass(frozen=True)
class AngleBox:
    """The rectangular coordinate domain (eigenvalue angles, then coset)."""

    n: int
    names: tuple[str, ...]
    lower: tuple[float, ...]
    upper: tuple[float, ...]

    @property
    def dim(self) -> int:
        return len(self.names)

    @property
    def volume(self) -> float:
        return float(np.prod(np.asarray(self.upper) - np.asarray(self.lower)))


def _box(n: int, names, ranges) -> AngleBox:
    lo = tuple(r[0] for r in ranges)
    hi = tuple(r[1] for r in ranges)
    return AngleBox(n, tuple(names), lo, hi)


def angle_box(n: int) -> AngleBox:
    """Full (n^2 - 1)-dimensional coordinate box."""
    return _box(n, EIGEN_NAMES[n] + COSET_NAMES[n], EIGEN_RANGES[n] + COSET_RANGES[n])


def eigen_box(n: int) -> AngleBox:
    return _box(n, EIGEN_NAMES[n], EIGEN_RANGES[n])


def coset_box(n: int) -> AngleBox:
    return _box(n, COSET_NAMES[n], COSET_RANGES[n])


# ---------------------------------------------------------------------------
# eigenvalue factor
# ---------------------------------------------------------------------------

def hall_density(lambdas) -> float:
    """Eigenvalue-simplex density with respect to d(lam_1)..d(lam_{n-1}).

    Returns +inf when some eigenvalue is exactly zero (boundary-singular);
    the 1/sqrt factor diverges there and the caller decides how to handle it.
    """
    lam = np.asarray(lambdas, dtype=np.float64)
    if lam.ndim != 1 or lam.size not in (2, 3):
        raise ValueError(f"expected 2 or 3 eigenvalues, got shape {lam.shape}")
    if np.any(lam < 0):
        raise ValueError(f"eigenvalues must be nonnegative, got {lam.tolist()}")
    if abs(lam.sum() - 1.0) > 1e-12:
        raise ValueError(f"eigenvalues must sum to 1, got {lam.sum()!r}")
    if np.any(lam == 0.0):
        return math.inf
    prod = 1.0
    for j in range(lam.size):
        for k in range(j + 1, lam.size):
            prod *= 4.0 * (lam[j] - lam[k]) ** 2 / (lam[j] + lam[k])
    return float(prod / math.sqrt(np.prod(lam)))


def eigenvalue_jacobian(eigen: EigenvalueAngles) -> float:
    """|det d(lam_1..lam_{n-1}) / d(angles)| in closed form."""
    if eigen.n == 2:
        (t,) = eigen.angles
        return abs(math.sin(2 * t))
    t1, t2 = eigen.angles
    return abs(math.sin(2 * t1) * math.sin(t2) ** 2 * math.sin(2 * t2))


def eigen_measure_factor(n: int, angles: np.ndarray) -> np.ndarray:
    """Eigenvalue density times Jacobian, composed analytically.

    n=2: 8 cos^2(2t).  n=3: the only vanishing pair denominator
    (lam_1 + lam_2 = sin^2 t2) cancels against the Jacobian, leaving an
    explicit product with denominators bounded below by 1/3.
    Finite on the whole closed box; ``angles`` has shape (..., n-1).
    """
    angles = np.asarray(angles, dtype=np.float64)
    if n == 2:
        t = angles[..., 0]
        return 8.0 * np.cos(2 * t) ** 2
    t1, t2 = angles[..., 0], angles[..., 1]
    s2 = np.sin(t2) ** 2
    l1 = np.cos(t1) ** 2 * s2
    l2 = np.sin(t1) ** 2 * s2
    l3 = np.cos(t2) ** 2
    return (256.0 * np.sin(t2) ** 3 * np.cos(2 * t1) ** 2
            * (l1 - l3) ** 2 * (l2 - l3) ** 2 / ((l1 + l3) * (l2 + l3)))


# ---------------------------------------------------------------------------
# coset factor
# ---------------------------------------------------------------------------

def _coset_chain(n: int):
    """Factor generators of the truncated Euler product plus the coset
    (non-diagonal) generator basis used for the coefficient columns."""
    gset = generators.generator_set(n)
    if n == 2:
        factor_gens = [gset.generators[2], gset.generators[1]]   # s3, s2
    else:
        g = gset.generators
        factor_gens = [g[2], g[1], g[2], g[4], g[2], g[1]]       # l3,l2,l3,l5,l3,l2
    return factor_gens, gset.coset_generators()


def haar_coset_density(coset: CosetAngles) -> float:
    """Invariant coset density |det C| at one point.

    Each angle sits in exactly one exponential factor, so dU/dx_k is U with
    that factor replaced by its exact derivative (i g_k) e^{i g_k x_k}; the
    rows of C are the coset-generator coefficients of -i U^dag dU/dx_k.
    """
    n = coset.n
    factor_gens, coset_gens = _coset_chain(n)
    factors = [expm_i_generator(g, x) for g, x in zip(factor_gens, coset.angles)]
    u = np.eye(n, dtype=np.complex128)
    for f in factors:
        u = matmul(u, f)
    udag = dagger(u)
    rows = []
    for k, g in enumerate(factor_gens):
        du = np.eye(n, dtype=np.complex128)
        for j, f in enumerate(factors):
            du = matmul(du, matmul(1j * g, f) if j == k else f)
        x = -1j * matmul(udag, du)
        rows.append([0.5 * np.trace(x @ t).real for t in coset_gens])
    return abs(float(np.linalg.det(np.array(rows))))


def _left_mult_generator(n: int, kind: str, v: np.ndarray) -> np.ndarray:
    """g @ v for the sparse factor generators, batched over the first axis."""
    out = np.zeros_like(v)
    if kind == "phase":              # diag(1, -1[, 0])
        out[:, 0, :] = v[:, 0, :]
        out[:, 1, :] = -v[:, 1, :]
    elif kind == "rot01":            # (0,1) antisymmetric pair, entries -i/i
        out[:, 0, :] = -1j * v[:, 1, :]
        out[:, 1, :] = 1j * v[:, 0, :]
    else:                            # rot02
        out[:, 0, :] = -1j * v[:, 2, :]
        out[:, 2, :] = 1j * v[:, 0, :]
    return out


def coset_measure_factor(n: int, angles: np.ndarray) -> np.ndarray:
    """Vectorized ``haar_coset_density``; ``angles`` has shape (N, 2|6).

    Uses suffix products V_k = F_k..F_m, for which
    -i U^dag dU/dx_k = V_k^dag g_k V_k, and reads the coefficient columns
    off the three independent upper-triangle entries of that Hermitian
    matrix (the coset generators pair (real, -imag) parts of each entry).
    """
    angles = np.atleast_2d(np.asarray(angles, dtype=np.float64))
    kinds = _COSET_KINDS[n]
    factors = coset_factor_stack(n, angles)
    m = len(kinds)
    suffix = [None] * m
    suffix[m - 1] = factors[m - 1]
    for k in range(m - 2, -1, -1):
        suffix[k] = factors[k] @ suffix[k + 1]
    cnt = angles.shape[0]
    rows = np.empty((cnt, m, m))
    for k in range(m):
        v = suffix[k]
        gv = _left_mult_generator(n, kinds[k], v)
        vc = v.conj()
        x01 = (vc[:, :, 0] * gv[:, :, 1]).sum(axis=1)
        rows[:, k, 0] = x01.real
        rows[:, k, 1] = -x01.imag
        if n == 3:
            x02 = (vc[:, :, 0] * gv[:, :, 2]).sum(axis=1)
            x12 = (vc[:, :, 1] * gv[:, :, 2]).sum(axis=1)
            rows[:, k, 2] = x02.real
            rows[:, k, 3] = -x02.imag
            rows[:, k, 4] = x12.real
            rows[:, k, 5] = -x12.imag
    return np.abs(np.linalg.det(rows))


# ---------------------------------------------------------------------------
# joint density and normalization
# ---------------------------------------------------------------------------

def joint_density_batch(n: int, points: np.ndarray, normalized: bool = False) -> np.ndarray:
    """RAW (or normalized) joint density on stacked full-coordinate rows."""
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    k = n - 1
    dens = (eigen_measure_factor(n, points[:, :k])
            * coset_measure_factor(n, points[:, k:]))
    if normalized:
        dens = dens / normalization_constant(n)
    return dens


def bures_joint_density(p: DensityMatrixParams,
                        mode: NormalizationMode = NormalizationMode.RAW) -> MeasureValue:
    """Joint coordinate density at one parameter point."""
    raw = (float(eigen_measure_factor(p.n, np.asarray(p.eigen.angles)))
           * haar_coset_density(p.coset))
    if mode is NormalizationMode.NORMALIZED:
        return MeasureValue(raw / normalization_constant(p.n), mode, p.n)
    return MeasureValue(raw, NormalizationMode.RAW, p.n)


# reference resolutions for the cached constants (Gauss-Legendre per factor);
# convergence is geometric, so these are already stable to ~1e-12
REFERENCE_POINTS = {2: 64, 3: 10}

_norm_lock = threading.Lock()
_factor_cache: dict[tuple, float] = {}

_FACTOR_FNS = {"eigen": (eigen_box, eigen_measure_factor),
               "coset": (coset_box, coset_measure_factor)}


def _factor_integral(which: str, n: int, pts: int, rule: QuadratureRule,
                     threads: int | None) -> float:
    """Cached tensor quadrature of one density factor over its sub-box."""
    key = (which, n, rule.value, pts)
    with _norm_lock:
        if key in _factor_cache:
            return _factor_cache[key]
    box_fn, fn = _FACTOR_FNS[which]
    box = box_fn(n)
    val = tensor_quadrature(lambda p: fn(n, p), box.lower, box.upper,
                            QuadratureSpec(pts, rule), threads=threads)
    with _norm_lock:
        _factor_cache.setdefault(key, val)
        return _factor_cache[key]


def normalization_constant(n: int, points_per_axis: int | None = None,
                           rule: QuadratureRule = QuadratureRule.GAUSS_LEGENDRE,
                           threads: int | None = None) -> float:
    """Integral of the RAW joint density over the angle box (cached).

    The RAW density is by construction a product of an eigenvalue-angle
    factor and a coset-angle factor, so the tensor-product rule over the full
    box factorizes exactly into the product of the two sub-box quadratures;
    they are evaluated separately (identical value, far fewer nodes).
    """
    if n not in (2, 3):
        raise ValueError(f"only n in {{2, 3}} is supported, got {n}")
    pts = REFERENCE_POINTS[n] if points_per_axis is None else int(points_per_axis)
    return (_factor_integral("eigen", n, pts, rule, threads)
            * _factor_integral("coset", n, pts, rule, threads))


def coset_normalization_constant(n: int, points_per_axis: int | None = None,
                                 rule: QuadratureRule = QuadratureRule.GAUSS_LEGENDRE,
                                 threads: int | None = None) -> float:
    """Integral of the coset density alone over the coset box (cached)."""
    if n not in (2, 3):
        raise ValueError(f"only n in {{2, 3}} is supported, got {n}")
    pts = REFERENCE_POINTS[n] if points_per_axis is None else int(points_per_axis)
    return _factor_integral("coset", n, pts, rule, threads)
