"""Command-line front end: construct, verify, bounds, report.

Every command is deterministic given its flag set (randomness only ever
flows from --seed), repeats the relevant flags inside its JSON artifact, and
writes artifacts atomically.  Exit codes: 0 success/consistent, 2 usage or
input errors, 3 refuted, 4 inconclusive.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

import numpy as np

from . import bounds as bounds_mod
from . import construct as construct_mod
from . import verify as verify_mod
from .construct import basis_from_json_dict, basis_to_json_dict
from .errors import EntspanError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_REFUTED = 3
EXIT_INCONCLUSIVE = 4

_VERDICT_EXIT = {
    verify_mod.VERDICT_CONSISTENT: EXIT_OK,
    verify_mod.VERDICT_REFUTED: EXIT_REFUTED,
    verify_mod.VERDICT_INCONCLUSIVE: EXIT_INCONCLUSIVE,
}

_KIND_FLAGS = {
    "geq": construct_mod.KIND_MIN_RANK,
    "flanders": construct_mod.KIND_MAX_RANK,
    "fixed": construct_mod.KIND_FIXED_RANK,
    "antisym": construct_mod.KIND_ANTISYMMETRIC,
    "random": construct_mod.KIND_RANDOM,
}


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _flagset(args, names) -> dict:
    return {name: getattr(args, name) for name in names}


def cmd_construct(args) -> int:
    kind = _KIND_FLAGS[args.kind]
    if kind == construct_mod.KIND_MIN_RANK:
        if args.r is None:
            raise EntspanError("construct --kind geq needs --r")
        basis = construct_mod.construct_min_rank_subspace(args.da, args.db, args.r)
        bound = bounds_mod.max_dim_geq(args.da, args.db, args.r)
    elif kind == construct_mod.KIND_MAX_RANK:
        if args.r is None:
            raise EntspanError("construct --kind flanders needs --r")
        basis = construct_mod.construct_max_rank_leq_subspace(args.da, args.db, args.r)
        bound = bounds_mod.flanders_max_leq(args.da, args.db, args.r)
    elif kind == construct_mod.KIND_FIXED_RANK:
        basis = construct_mod.construct_fixed_rank_subspace(args.da, args.db)
        bound = bounds_mod.westwick_range(args.da, args.db, min(args.da, args.db))[0]
    elif kind == construct_mod.KIND_ANTISYMMETRIC:
        if (args.da, args.db) != (3, 3):
            raise EntspanError("the antisymmetric construction is specific to --da 3 --db 3")
        basis = construct_mod.antisymmetric_basis_3x3()
        bound = bounds_mod.westwick_range(3, 3, 2)[2]
    else:
        if args.dim is None:
            raise EntspanError("construct --kind random needs --dim")
        basis = construct_mod.random_subspace(args.da, args.db, args.dim, args.seed)
        bound = args.dim
    payload = basis_to_json_dict(basis)
    payload["metadata"] = dict(payload["metadata"])
    payload["metadata"]["run"] = _flagset(args, ("da", "db", "r", "kind", "dim", "seed"))
    _write_atomic(args.out, _dump_json(payload))
    print(f"dim={basis.dimension} bound={bound}")
    print(f"artifact: {args.out}")
    return EXIT_OK


def _load_basis(path: str):
    try:
        with open(path) as f:
            data = json.load(f)
    except json.JSONDecodeError as exc:
        raise EntspanError(f"malformed basis file {path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return basis_from_json_dict(data)


def cmd_verify(args) -> int:
    basis = _load_basis(args.basis)
    r = args.r if args.r is not None else basis.r
    if r is None:
        raise EntspanError("basis carries no rank threshold; pass --r")
    if args.mode == "sample":
        report = verify_mod.sample_verify_exact(basis, r, args.samples, args.seed, require=args.require)
    elif args.mode == "gfp":
        if args.p is None:
            raise EntspanError("gfp mode needs --p")
        report = verify_mod.gfp_exhaustive_min_rank(basis, args.p, r=r, cap=args.cap)
    elif args.mode == "sigma":
        _, _, report = verify_mod.minimize_sigma_r(
            basis, r, restarts=args.restarts, iters=args.iters, seed=args.seed, tol=args.tol
        )
    else:
        rng_report = _structural_scan(basis, r, args.samples, args.seed)
        report = rng_report
    payload = verify_mod.report_to_json_dict(report)
    payload["params"] = dict(payload["params"] or {})
    payload["params"]["run"] = _flagset(
        args, ("basis", "mode", "r", "samples", "seed", "p", "restarts", "iters", "tol", "require", "cap")
    )
    _write_atomic(args.out, _dump_json(payload))
    bits = [f"mode={report.mode}", f"verdict={report.verdict}"]
    if report.min_rank_observed is not None:
        bits.append(f"min_rank_observed={report.min_rank_observed}")
    if report.max_rank_observed is not None:
        bits.append(f"max_rank_observed={report.max_rank_observed}")
    if report.min_sigma_r is not None:
        bits.append(f"min_sigma_r={report.min_sigma_r:.3e}")
    bits.append(f"n={report.samples_or_points}")
    print(" ".join(bits))
    print(f"artifact: {args.out}")
    return _VERDICT_EXIT[report.verdict]


def _structural_scan(basis, r: int, samples: int, seed: int) -> verify_mod.VerificationReport:
    """Structural certificates for seeded combinations; every one must land."""
    rng = np.random.default_rng(seed)
    certs = []
    for _ in range(samples):
        coeffs = rng.integers(-verify_mod.SAMPLE_BOX, verify_mod.SAMPLE_BOX + 1, size=basis.dimension)
        while not coeffs.any():
            coeffs = rng.integers(-verify_mod.SAMPLE_BOX, verify_mod.SAMPLE_BOX + 1, size=basis.dimension)
        certs.append(verify_mod.structural_certificate(basis, [int(c) for c in coeffs]))
    return verify_mod.VerificationReport(
        mode="structural",
        samples_or_points=samples,
        verdict=verify_mod.VERDICT_CONSISTENT,
        min_rank_observed=r,
        seed=seed,
        witnesses=tuple(certs),
        params={"r": r},
    )


def cmd_bounds(args) -> int:
    if args.grid:
        rs = range(2, min(args.da, args.db) + 1)
    else:
        if args.r is None:
            raise EntspanError("bounds needs --r or --grid")
        rs = [args.r]
    rows = [bounds_mod.bounds_table(args.da, args.db, r) for r in rs]
    if args.format == "json":
        text = _dump_json(
            {
                "run": _flagset(args, ("da", "db", "r", "grid", "format")),
                "rows": [bounds_mod.bounds_table_to_json_dict(t) for t in rows],
            }
        )
    else:
        text = bounds_mod.bounds_table_text(rows) + "\n"
    if args.out:
        _write_atomic(args.out, text)
        print(f"artifact: {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_report(args) -> int:
    if args.kind == "mixed":
        if args.d is None or args.p is None:
            raise EntspanError("report --kind mixed needs --d and --p")
        rep = bounds_mod.mixed_state_report(args.d, args.p)
        payload = bounds_mod.mixed_state_report_to_json_dict(rep)
        line = (
            f"d={rep.d} p={rep.p} r={rep.r} dim={rep.dim} entropy_bits={rep.entropy_bits:.4f} "
            f"schmidt_measure_lb={rep.schmidt_measure_lb}"
        )
    else:
        if args.da is None or args.db is None or args.k is None:
            raise EntspanError("report --kind random needs --da, --db and --k")
        rep = bounds_mod.random_comparison(args.da, args.db, args.k)
        payload = bounds_mod.random_comparison_to_json_dict(rep)
        line = (
            f"da={rep.dA} db={rep.dB} k={rep.k} exact_dim={rep.exact_dim} "
            f"asymptotic={rep.asymptotic:.1f} threshold_k={rep.threshold_k:.4f}"
        )
    payload["run"] = _flagset(args, ("kind", "d", "p", "da", "db", "k"))
    if args.format == "json" or args.out:
        text = _dump_json(payload)
        if args.out:
            _write_atomic(args.out, text)
            print(line)
            print(f"artifact: {args.out}")
        else:
            sys.stdout.write(text)
    else:
        print(line)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entspan",
        description="Construct, verify and bound matrix subspaces with constrained Schmidt rank.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a subspace basis and write it as JSON")
    c.add_argument("--da", type=int, required=True)
    c.add_argument("--db", type=int, required=True)
    c.add_argument("--r", type=int, default=None)
    c.add_argument("--kind", choices=sorted(_KIND_FLAGS), default="geq")
    c.add_argument("--dim", type=int, default=None, help="dimension for --kind random")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out", default="basis.json")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="run a verification mode against a basis file")
    v.add_argument("--basis", required=True)
    v.add_argument("--mode", choices=("sample", "gfp", "sigma", "structural"), required=True)
    v.add_argument("--r", type=int, default=None)
    v.add_argument("--samples", type=int, default=1000)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--p", type=int, default=None)
    v.add_argument("--cap", type=int, default=verify_mod.GFP_ENUMERATION_CAP)
    v.add_argument("--restarts", type=int, default=64)
    v.add_argument("--iters", type=int, default=500)
    v.add_argument("--tol", type=float, default=verify_mod.SIGMA_TOL)
    v.add_argument("--require", choices=("geq", "leq", "eq"), default="geq")
    v.add_argument("--out", default="report.json")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bounds", help="print the bound table for one r or the whole grid")
    b.add_argument("--da", type=int, required=True)
    b.add_argument("--db", type=int, required=True)
    b.add_argument("--r", type=int, default=None)
    b.add_argument("--grid", action="store_true")
    b.add_argument("--format", choices=("text", "json"), default="text")
    b.add_argument("--out", default=None)
    b.set_defaults(func=cmd_bounds)

    p = sub.add_parser("report", help="mixed-state projector report or random-subspace comparison")
    p.add_argument("--kind", choices=("mixed", "random"), required=True)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--da", type=int, default=None)
    p.add_argument("--db", type=int, default=None)
    p.add_argument("--k", type=float, default=None)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EntspanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
