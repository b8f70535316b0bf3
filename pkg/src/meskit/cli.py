"""Command-line front end.

Subcommands: ``gen`` (emit a canonical preserver plus a ground-truth sidecar),
``classify`` (decompose a superoperator into sigma/U/V), ``extend`` (blockwise
extension plus commutation report), ``check-lemmas`` (structural identity
suite).  Results go to stdout as JSON; failures emit an error JSON on stderr.

Exit codes: 0 success, 2 usage/parse errors, 3 not a preserver, 4 not
invertible on the MES span, 5 inconsistent Choi discriminant, 6 recovered
unitary not a Kronecker product, 1 unexpected numerical breakdown.

The default tolerance is 1e-9; the MESKIT_TOL environment variable overrides
it and an explicit ``--tol`` flag wins over both.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import lemmas, serialize
from .choi import detect_sigma
from .classify import DecomposeConfig, Decomposition, decompose
from .errors import (
    DimensionError,
    InconsistentChoiError,
    MESKitError,
    NotInvertibleError,
    NotKroneckerError,
    NotMESError,
    NotPreserverError,
)
from .extension import ad_commutation_residual, extend, p_operator, q_operator
from .states import is_mes, pi, random_coisometry
from .superop import (
    SigmaFlag,
    Superoperator,
    apply,
    make_adjoint_preserver,
    make_swap_preserver,
    make_trace_preserver,
)
from .tensor import Dims, haar_unitary, kron

_EXIT_USAGE = 2
_ERROR_EXIT_CODES = {
    NotPreserverError: 3,
    NotMESError: 3,
    NotInvertibleError: 4,
    InconsistentChoiError: 5,
    NotKroneckerError: 6,
}


@dataclass(frozen=True)
class RunConfig:
    """Resolved command-line options shared by the subcommands."""

    m: int
    k: int
    seed: int
    tol: float
    samples: int | None
    output_path: str | None

    def __post_init__(self) -> None:
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.samples is not None and self.samples < 1:
            raise ValueError("samples must be >= 1")


def _default_tol() -> float:
    env = os.environ.get("MESKIT_TOL")
    return float(env) if env else 1e-9


def _fail(exc: BaseException, code: int) -> int:
    payload = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    print(serialize.dumps(payload), file=sys.stderr)
    return code


def _error_code(exc: MESKitError) -> int:
    for cls, code in _ERROR_EXIT_CODES.items():
        if isinstance(exc, cls):
            return code
    if isinstance(exc, DimensionError):
        return _EXIT_USAGE
    return 1


def _config(args) -> RunConfig:
    return RunConfig(
        m=getattr(args, "m", 1),
        k=getattr(args, "k", 1),
        seed=args.seed,
        tol=args.tol if args.tol is not None else _default_tol(),
        samples=args.samples,
        output_path=getattr(args, "out", None),
    )


def _truth_path(out: str) -> str:
    return out[: -len(".json")] + ".truth.json" if out.endswith(".json") else out + ".truth.json"


def _decomposition_obj(dec: Decomposition) -> dict:
    return {
        "sigma": dec.sigma.value,
        "U": serialize.matrix_to_obj(dec.U),
        "V": serialize.matrix_to_obj(dec.V),
        "kron_residual": dec.kron_residual,
        "verification_residual": dec.verification_residual,
    }


def cmd_gen(args) -> int:
    config = _config(args)
    sigma = SigmaFlag(args.sigma)
    out = config.output_path or "superop.json"
    try:
        dims = Dims.from_mk(config.m, config.k)
    except DimensionError as exc:
        return _fail(exc, _EXIT_USAGE)
    truth: dict = {"form": args.form, "m": config.m, "k": config.k, "seed": config.seed}
    if args.form == "adjoint":
        u = haar_unitary(dims.m, np.random.SeedSequence([config.seed, 41, 0]))
        v = haar_unitary(dims.n, np.random.SeedSequence([config.seed, 41, 1]))
        phi = make_adjoint_preserver(u, v, sigma)
        truth.update(
            {"sigma": sigma.value, "U": serialize.matrix_to_obj(u), "V": serialize.matrix_to_obj(v)}
        )
    elif args.form == "swap":
        if config.k != 1:
            return _fail(
                DimensionError("the switch form needs a square space: use --k 1"), _EXIT_USAGE
            )
        u = haar_unitary(dims.m, np.random.SeedSequence([config.seed, 41, 0]))
        v = haar_unitary(dims.m, np.random.SeedSequence([config.seed, 41, 1]))
        phi = make_swap_preserver(u, v, sigma)
        truth.update(
            {"sigma": sigma.value, "U": serialize.matrix_to_obj(u), "V": serialize.matrix_to_obj(v)}
        )
    else:  # trace
        rho = pi(random_coisometry(dims, np.random.SeedSequence([config.seed, 41, 2])))
        phi = make_trace_preserver(rho)
        truth.update({"rho": serialize.matrix_to_obj(rho.matrix)})
    serialize.write_json(out, serialize.superoperator_to_obj(phi.matrix, phi.dims))
    serialize.write_json(_truth_path(out), truth)
    print(serialize.dumps({"superop": out, "truth": _truth_path(out)}))
    return 0


def _load_superop(path: str) -> Superoperator:
    obj = serialize.read_json(path)
    matrix, dims = serialize.superoperator_from_obj(obj)
    return Superoperator(matrix=matrix, dims=dims)


def cmd_classify(args) -> int:
    config = _config(args)
    try:
        phi = _load_superop(args.input)
    except (OSError, ValueError, KeyError, TypeError, DimensionError) as exc:
        return _fail(exc, _EXIT_USAGE)
    cfg = DecomposeConfig(tol=config.tol, recover_samples=config.samples, seed=config.seed)
    try:
        dec = decompose(phi, cfg)
    except MESKitError as exc:
        return _fail(exc, _error_code(exc))
    payload = _decomposition_obj(dec)
    if config.output_path:
        serialize.write_json(config.output_path, payload)
    print(serialize.dumps(payload))
    return 0


def cmd_extend(args) -> int:
    config = _config(args)
    try:
        phi = _load_superop(args.input)
    except (OSError, ValueError, KeyError, TypeError, DimensionError) as exc:
        return _fail(exc, _EXIT_USAGE)
    try:
        if args.sigma == "auto":
            sigma = detect_sigma(phi, seed=config.seed)
        else:
            sigma = SigmaFlag(args.sigma)
        ext = extend(phi, sigma)
    except MESKitError as exc:
        return _fail(exc, _error_code(exc))
    dims = phi.dims
    samples = config.samples if config.samples is not None else 20
    operators = [(f"P{j}xI", kron(p_operator(j, dims), np.eye(dims.n))) for j in range(1, dims.k + 1)]
    operators += [
        (f"Q{p}{q}", q_operator(p, q, dims))
        for p in range(1, dims.k + 1)
        for q in range(p + 1, dims.k + 1)
    ]
    states = [
        pi(random_coisometry(ext.yy_dims, np.random.SeedSequence([config.seed, 43, i]))).matrix
        for i in range(samples)
    ]
    commutation = []
    for name, w in operators:
        residual = max(ad_commutation_residual(ext, w, s) for s in states)
        commutation.append(
            {"operator": name, "max_residual": residual, "pass": residual < config.tol}
        )
    mes_ok = sum(1 for s in states if is_mes(apply(ext, s), ext.yy_dims, 1e-8))
    report = {
        "sigma": sigma.value,
        "dims": serialize.dims_to_obj(dims),
        "commutation": commutation,
        "mes_preservation": {"samples": samples, "preserved": mes_ok, "pass": mes_ok == samples},
        "tol": config.tol,
        "all_pass": all(c["pass"] for c in commutation) and mes_ok == samples,
    }
    out = config.output_path or "extended.json"
    serialize.write_json(
        out,
        {
            "base_dims": serialize.dims_to_obj(dims),
            "sigma": sigma.value,
            "matrix": serialize.matrix_to_obj(ext.matrix),
        },
    )
    print(serialize.dumps(report))
    return 0


def cmd_check_lemmas(args) -> int:
    config = _config(args)
    try:
        dims = Dims.from_mk(config.m, config.k)
    except DimensionError as exc:
        return _fail(exc, _EXIT_USAGE)
    samples = config.samples if config.samples is not None else 20
    results = lemmas.run_all(dims, tol=config.tol, samples=samples, seed=config.seed)
    report = {
        "dims": serialize.dims_to_obj(dims),
        "tol": config.tol,
        "samples": samples,
        "checks": [r.to_obj() for r in results],
        "all_pass": all(r.passed for r in results),
    }
    print(serialize.dumps(report))
    return 0 if report["all_pass"] else 1


def _add_common(parser: argparse.ArgumentParser, dims: bool) -> None:
    if dims:
        parser.add_argument("--m", type=int, default=2, help="dimension of the X factor")
        parser.add_argument("--k", type=int, default=2, help="block count (Y has dimension k*m)")
    parser.add_argument("--seed", type=int, default=0, help="seed for all randomized draws")
    parser.add_argument(
        "--tol", type=float, default=None, help="tolerance (default 1e-9, or MESKIT_TOL)"
    )
    parser.add_argument("--samples", type=int, default=None, help="sample-count override")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="meskit",
        description="Generate, classify and extend maps preserving maximally entangled states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="emit a canonical preserver and its ground truth")
    _add_common(gen, dims=True)
    gen.add_argument("--sigma", choices=["identity", "transpose"], default="identity")
    gen.add_argument("--form", choices=["adjoint", "swap", "trace"], default="adjoint")
    gen.add_argument("--out", default="superop.json", help="output path for the superoperator")
    gen.set_defaults(func=cmd_gen)

    classify = sub.add_parser("classify", help="decompose a superoperator into sigma, U, V")
    classify.add_argument("input", help="superoperator JSON file")
    _add_common(classify, dims=False)
    classify.add_argument("--out", default=None, help="also write the decomposition here")
    classify.set_defaults(func=cmd_classify)

    ext = sub.add_parser("extend", help="blockwise extension plus commutation report")
    ext.add_argument("input", help="superoperator JSON file")
    _add_common(ext, dims=False)
    ext.add_argument("--sigma", choices=["identity", "transpose", "auto"], default="auto")
    ext.add_argument("--out", default=None, help="output path for the extension (default extended.json)")
    ext.set_defaults(func=cmd_extend)

    check = sub.add_parser("check-lemmas", help="run the structural identity suite")
    _add_common(check, dims=True)
    check.set_defaults(func=cmd_check_lemmas)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else _EXIT_USAGE
    try:
        return args.func(args)
    except ValueError as exc:
        return _fail(exc, _EXIT_USAGE)


if __name__ == "__main__":
    sys.exit(main())
