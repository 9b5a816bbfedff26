"""Command-line interface.

Subcommands: density, sample, integrate, volume, check.  Output is a single
JSON record (or a CSV stream for ``sample --format csv``) with schema_version
"1"; every float is printed with 17 significant digits so serialized output
round-trips byte-for-byte.  Angles are radians only.  The environment
variable BURES_THREADS sets the worker count and never changes numbers.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .euler import (AngleRangeError, COSET_NAMES, EIGEN_NAMES, DensityMatrixParams,
                    density_from_params, params_from_values)
from .functionals import FunctionalId
from .integrate import DEFAULT_POINTS, integrate, integrate_mc
from .linalg import eig_hermitian
from .measure import (NormalizationMode, REFERENCE_POINTS, bures_joint_density,
                      normalization_constant)
from .sampling import EnvelopeViolationError, SamplerSpec, sample
from .tensorgrid import QuadratureRule, QuadratureSpec
from .checks import run_suite

SCHEMA_VERSION = "1"

USAGE_ERROR = 2
CHECK_FAILURE = 1


def _fmt_float(x: float) -> str:
    # 17 significant digits: lossless round-trip for binary64
    return f"{float(x):.16e}"


def dumps_record(obj) -> str:
    """Serialize a record to JSON with fixed float formatting and key order."""
    parts: list[str] = []
    _write_json(obj, parts)
    return "".join(parts)


def _write_json(obj, parts: list[str]) -> None:
    if isinstance(obj, dict):
        parts.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                parts.append(", ")
            parts.append(f'"{k}": ')
            _write_json(v, parts)
        parts.append("}")
    elif isinstance(obj, (list, tuple)):
        parts.append("[")
        for i, v in enumerate(obj):
            if i:
                parts.append(", ")
            _write_json(v, parts)
        parts.append("]")
    elif isinstance(obj, bool):
        parts.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        parts.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        parts.append(_fmt_float(obj))
    elif isinstance(obj, str):
        parts.append('"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"')
    elif obj is None:
        parts.append("null")
    else:
        raise TypeError(f"cannot serialize {type(obj)!r}")


def matrix_payload(m: np.ndarray) -> list[list[float]]:
    """Row-major list of [re, im] pairs."""
    flat = np.asarray(m, dtype=np.complex128).reshape(-1)
    return [[float(z.real), float(z.imag)] for z in flat]


def _param_names(n: int) -> tuple[str, ...]:
    return EIGEN_NAMES[n] + COSET_NAMES[n]


def parse_params(n: int, tokens: list[str]) -> DensityMatrixParams:
    expected = _param_names(n)
    got: dict[str, float] = {}
    for tok in tokens:
        for piece in tok.split(","):
            piece = piece.strip()
            if not piece:
                continue
            name, eq, text = piece.partition("=")
            if not eq:
                raise ValueError(f"expected name=value, got {piece!r}")
            name = name.strip()
            if name not in expected:
                raise ValueError(f"unknown parameter {name!r} for n={n} "
                                 f"(expected {', '.join(expected)})")
            if name in got:
                raise ValueError(f"duplicate parameter {name!r}")
            try:
                got[name] = float(text)
            except ValueError:
                raise ValueError(f"parameter {name!r} has non-numeric value {text!r}") from None
    missing = [nm for nm in expected if nm not in got]
    if missing:
        raise ValueError(f"missing parameter(s): {', '.join(missing)}")
    return params_from_values(n, [got[nm] for nm in expected])


def _rule(text: str) -> QuadratureRule:
    return (QuadratureRule.COMPOSITE_SIMPSON if text == "simpson"
            else QuadratureRule.GAUSS_LEGENDRE)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_density(args) -> int:
    params = parse_params(args.n, args.params)
    rho = density_from_params(params)
    eigvals = eig_hermitian(rho).eigenvalues
    mode = (NormalizationMode.NORMALIZED if args.mode == "normalized"
            else NormalizationMode.RAW)
    dens = bures_joint_density(params, mode)
    record = {
        "schema_version": SCHEMA_VERSION,
        "kind": "density",
        "n": args.n,
        "mode": mode.value,
        "params": {k: float(v) for k, v in params.as_dict().items()},
        "matrix": matrix_payload(rho),
        "eigenvalues": [float(w) for w in eigvals],
        "bures_density": float(dens.value),
    }
    print(dumps_record(record))
    return 0


def _csv_header(n: int) -> str:
    cols = list(_param_names(n))
    for i in range(n):
        for j in range(n):
            cols += [f"m{i}{j}_re", f"m{i}{j}_im"]
    return ",".join(cols)


def cmd_sample(args) -> int:
    if args.count < 0:
        raise ValueError("--count must be >= 0")
    spec = SamplerSpec(seed=args.seed, envelope_constant=args.envelope,
                       batch_size=args.batch_size)
    batch = sample(args.n, args.count, spec)
    mats = (batch.matrices() if args.count
            else np.empty((0, args.n, args.n), dtype=np.complex128))
    if args.format == "csv":
        lines = [_csv_header(args.n)]
        for row, m in zip(batch.params, mats):
            vals = [_fmt_float(v) for v in row]
            flat = m.reshape(-1)
            for z in flat:
                vals += [_fmt_float(z.real), _fmt_float(z.imag)]
            lines.append(",".join(vals))
        print("\n".join(lines))
        return 0
    names = _param_names(args.n)
    samples = []
    for row, m in zip(batch.params, mats):
        samples.append({
            "params": {nm: float(v) for nm, v in zip(names, row)},
            "matrix": matrix_payload(m),
        })
    record = {
        "schema_version": SCHEMA_VERSION,
        "kind": "samples",
        "n": args.n,
        "seed": int(args.seed),
        "count": int(args.count),
        "envelope": float(batch.envelope),
        "batch_size": int(batch.batch_size),
        "total_proposals": int(batch.total_proposals),
        "params_order": list(names),
        "samples": samples,
    }
    print(dumps_record(record))
    return 0


def cmd_integrate(args) -> int:
    fid = FunctionalId.parse(args.functional)
    record = {
        "schema_version": SCHEMA_VERSION,
        "kind": "scalar",
        "n": args.n,
        "quantity": "integral",
        "functional": fid.label,
        "method": args.method,
    }
    if args.method == "quadrature":
        spec = QuadratureSpec(args.points or DEFAULT_POINTS[args.n], _rule(args.rule))
        res = integrate(args.n, fid, spec)
        record.update({
            "value": res.value,
            "error_estimate": res.error_estimate,
            "points_per_axis": res.points_per_axis,
            "rule": res.rule,
        })
    else:
        res = integrate_mc(args.n, fid, args.samples, seed=args.seed)
        record.update({
            "value": res.value,
            "error_estimate": res.error_estimate,
            "samples": res.samples,
            "std_error": res.std_error,
            "seed": int(args.seed),
        })
    print(dumps_record(record))
    return 0


def cmd_volume(args) -> int:
    points = args.points or REFERENCE_POINTS[args.n]
    if points < 4:
        raise ValueError("--points must be >= 4")
    rule = _rule(args.rule)
    value = normalization_constant(args.n, points_per_axis=points, rule=rule)
    compare = normalization_constant(args.n, points_per_axis=points - 2, rule=rule)
    record = {
        "schema_version": SCHEMA_VERSION,
        "kind": "scalar",
        "n": args.n,
        "quantity": "volume",
        "method": "quadrature",
        "value": float(value),
        "error_estimate": abs(value - compare),
        "points_per_axis": int(points),
        "comparison_points": int(points - 2),
        "rule": rule.value,
    }
    print(dumps_record(record))
    return 0


def cmd_check(args) -> int:
    results = run_suite(args.suite)
    ok = all(r.passed for r in results)
    record = {
        "schema_version": SCHEMA_VERSION,
        "kind": "check",
        "n": 0,
        "suite": args.suite,
        "passed": ok,
        "checks": [{"name": r.name, "deviation": r.deviation,
                    "tolerance": r.tolerance, "passed": r.passed}
                   for r in results],
    }
    print(dumps_record(record))
    for r in results:
        status = "ok" if r.passed else "FAIL"
        print(f"{status:4s} {r.name}: deviation {r.deviation:.3e} "
              f"(tolerance {r.tolerance:.3e})", file=sys.stderr)
    return 0 if ok else CHECK_FAILURE


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bures",
        description="Euler-angle coordinates and Bures measures for 2- and "
                    "3-state density matrices. Angles are radians.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_n(p):
        p.add_argument("--n", type=int, choices=(2, 3), required=True,
                       help="Hilbert-space dimension")

    p = sub.add_parser("density",
                       help="evaluate the density matrix and Bures density at a point")
    add_n(p)
    p.add_argument("--params", nargs="+", required=True, metavar="NAME=VALUE",
                   help="full coordinate set, e.g. theta=0.3 alpha=1.0 beta=0.2 "
                        "(n=2) or theta1,theta2,alpha,beta,gamma,theta_big,a,b "
                        "(n=3); comma- or space-separated")
    p.add_argument("--mode", choices=("raw", "normalized"), default="raw")
    p.set_defaults(fn=cmd_density)

    p = sub.add_parser("sample", help="draw Bures-distributed density matrices")
    add_n(p)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--format", choices=("json", "csv"), default="json",
                   help="csv columns: the angles by name, then 2n^2 matrix "
                        "columns m{i}{j}_re, m{i}{j}_im in row-major order")
    p.add_argument("--envelope", type=float, default=None,
                   help="rejection bound M (default: estimated from a grid)")
    p.add_argument("--batch-size", type=int, default=None,
                   help="proposals per round per pending sample (output-invariant)")
    p.set_defaults(fn=cmd_sample)

    p = sub.add_parser("integrate",
                       help="integrate a functional against the normalized Bures measure")
    add_n(p)
    p.add_argument("--functional", required=True,
                   help="entropy | purity | moment:k (moment:0 is the constant 1)")
    p.add_argument("--method", choices=("quadrature", "mc"), default="quadrature")
    p.add_argument("--points", type=int, default=None,
                   help="quadrature points per axis (default 32 for n=2, 8 for n=3)")
    p.add_argument("--rule", choices=("gauss-legendre", "simpson"),
                   default="gauss-legendre")
    p.add_argument("--samples", type=int, default=1_000_000,
                   help="Monte Carlo sample count (method=mc)")
    p.add_argument("--seed", type=int, default=0, help="Monte Carlo seed")
    p.set_defaults(fn=cmd_integrate)

    p = sub.add_parser("volume",
                       help="RAW normalization constant of the Bures density")
    add_n(p)
    p.add_argument("--points", type=int, default=None,
                   help="quadrature points per axis (default 64 for n=2, 10 for n=3)")
    p.add_argument("--rule", choices=("gauss-legendre", "simpson"),
                   default="gauss-legendre")
    p.set_defaults(fn=cmd_volume)

    p = sub.add_parser("check", help="run the invariant suite")
    p.add_argument("--suite", choices=("fast", "full"), default="fast")
    p.set_defaults(fn=cmd_check)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (AngleRangeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except EnvelopeViolationError as exc:
        print(f"envelope violation: {exc}", file=sys.stderr)
        return CHECK_FAILURE


if __name__ == "__main__":
    sys.exit(main())
