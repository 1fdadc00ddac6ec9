"""Command-line surface: check instances, falsify, generate corpora.

Exit codes for ``check``: 0 ConvexCertified, 1 NonConvexCertified,
2 NumericallyConvex, 3 Inconclusive, 64 input error, 70 internal
contradiction.  ``falsify`` exits 1 when a witness was found and 2
otherwise.  Reports are JSON with a versioned schema; floats are written
with full round-trip precision so witnesses re-validate bit-faithfully.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .certificates import (
    BatteryConfig,
    CERTIFICATE_NAMES,
    CertificateContradiction,
    run_battery,
)
from .core import (
    Cone,
    InstanceFormatError,
    ORTHANT,
    QuadraticInstance,
    Verdict,
    WitnessPair,
    foc_slack,
    instance_to_dict,
    load_instance,
    save_instance,
)
from .generators import FAMILIES, gen_bipos, gen_cd, gen_diag_iff, gen_gap, gen_random
from .oracle import OracleConfig, OracleStatus, falsify, run_oracle

EXIT_CONVEX = 0
EXIT_NONCONVEX = 1
EXIT_NUMERICALLY_CONVEX = 2
EXIT_INCONCLUSIVE = 3
EXIT_INPUT_ERROR = 64
EXIT_CONTRADICTION = 70

AGGREGATE_EXIT = {
    "ConvexCertified": EXIT_CONVEX,
    "NonConvexCertified": EXIT_NONCONVEX,
    "NumericallyConvex": EXIT_NUMERICALLY_CONVEX,
    "Inconclusive": EXIT_INCONCLUSIVE,
}


def _digest(arr) -> str:
    data = np.ascontiguousarray(np.asarray(arr, dtype=float)).tobytes()
    return hashlib.sha256(data).hexdigest()[:16]


def instance_digest(inst: QuadraticInstance) -> dict:
    return {
        "n": inst.n,
        "sha_A": _digest(inst.A),
        "sha_b": _digest(inst.b),
        "sha_c": _digest([inst.c]),
        "asymmetry_warning": inst.asymmetry_warning,
        "input_asymmetry": inst.input_asymmetry,
    }


def aggregate_verdict(battery, oracle_verdict, inst, cone) -> str:
    """Precedence: any valid refutation wins, then any positive proof, then
    the oracle's numerical corroboration, then Inconclusive."""
    witnesses = [o.witness for o in battery.outcomes if o.verdict is Verdict.PROVES_NONCONVEX]
    if oracle_verdict is not None and oracle_verdict.status is OracleStatus.FALSIFIED:
        witnesses.append(oracle_verdict.witness)
    for w in witnesses:
        if w is not None and w.validate(inst, cone) and w.slack < -1e-12:
            return "NonConvexCertified"
    if battery.verdict is Verdict.PROVES_CONVEX:
        return "ConvexCertified"
    if oracle_verdict is not None and oracle_verdict.status is OracleStatus.NUMERICALLY_CONVEX:
        return "NumericallyConvex"
    return "Inconclusive"


def build_report(inst, cone, battery, oracle_verdict, seed, elapsed) -> dict:
    verdict = aggregate_verdict(battery, oracle_verdict, inst, cone)
    report = {
        "schema": 1,
        "tool_version": __version__,
        "instance": instance_digest(inst),
        "certificates": [
            {
                "name": o.name,
                "verdict": o.verdict.value,
                "witness": o.witness.to_dict() if o.witness else None,
                "detail": _jsonable(o.detail),
            }
            for o in battery.outcomes
        ],
        "oracle": oracle_verdict.to_dict() if oracle_verdict is not None else None,
        "verdict": verdict,
        "exit_code": AGGREGATE_EXIT[verdict],
        "seed": seed,
        "timing_s": elapsed,
    }
    return report


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    return obj


def _check_battery_oracle_agreement(battery, oracle_verdict, inst, cone) -> None:
    if battery.verdict is not Verdict.PROVES_CONVEX or oracle_verdict is None:
        return
    if oracle_verdict.status is OracleStatus.FALSIFIED:
        w = oracle_verdict.witness
        if w is not None and w.validate(inst, cone):
            raise CertificateContradiction(
                [o for o in battery.outcomes if o.verdict is Verdict.PROVES_CONVEX]
            )


def cmd_check(args) -> int:
    try:
        inst, cone = load_instance(args.instance)
    except (InstanceFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    started = time.perf_counter()
    config = OracleConfig(seed=args.seed, pair_budget=args.samples, tol=args.tol)
    only = tuple(args.certs.split(",")) if args.certs else None
    try:
        battery_config = BatteryConfig(exhaustive=args.exhaustive, only=only)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    try:
        battery = run_battery(inst, cone, battery_config)
        oracle_verdict = run_oracle(inst, cone, config)
        _check_battery_oracle_agreement(battery, oracle_verdict, inst, cone)
    except CertificateContradiction as exc:
        print(f"internal contradiction: {exc}", file=sys.stderr)
        return EXIT_CONTRADICTION
    elapsed = time.perf_counter() - started
    report = build_report(inst, cone, battery, oracle_verdict, args.seed, elapsed)
    text = json.dumps(report, indent=2)
    if args.report:
        Path(args.report).write_text(text + "\n")
    print(text)
    return report["exit_code"]


def cmd_falsify(args) -> int:
    try:
        inst, cone = load_instance(args.instance)
    except (InstanceFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    config = OracleConfig(seed=args.seed, pair_budget=args.budget, run_h_minimization=False)
    verdict = falsify(inst, cone, config)
    out = {
        "status": verdict.status.value,
        "pairs_checked": verdict.pairs_checked,
        "min_slack": verdict.min_slack,
        "witness": verdict.witness.to_dict() if verdict.witness else None,
        "seed": args.seed,
    }
    print(json.dumps(out, indent=2))
    return EXIT_NONCONVEX if verdict.status is OracleStatus.FALSIFIED else EXIT_NUMERICALLY_CONVEX


def cmd_generate(args) -> int:
    if args.family not in FAMILIES:
        print(f"error: unknown family '{args.family}'", file=sys.stderr)
        return EXIT_INPUT_ERROR
    if args.n < 3:
        print("error: n must be >= 3", file=sys.stderr)
        return EXIT_INPUT_ERROR
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for k in range(args.count):
        rng = np.random.default_rng([args.seed, k])
        inst = FAMILIES[args.family](args.n, rng)
        inst.meta["seed"] = [args.seed, k]
        cone = Cone.orthant(args.n)
        path = out_dir / f"{args.family}_n{args.n}_s{args.seed}_{k:03d}.json"
        save_instance(path, inst, cone)
        print(path)
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sphconv",
        description=(
            "Decide, refute, or corroborate convexity of a quadratic function "
            "along the geodesics of a cone-constrained spherical cap."
        ),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="run the certificate battery and the oracle")
    p_check.add_argument("instance", help="path to an instance JSON file")
    p_check.add_argument("--samples", type=int, default=100_000, help="oracle pair budget")
    p_check.add_argument("--seed", type=int, default=0)
    p_check.add_argument("--tol", type=float, default=1e-9, help="base oracle tolerance")
    p_check.add_argument("--exhaustive", action="store_true", help="run every certificate")
    p_check.add_argument("--report", help="also write the JSON report to this path")
    p_check.add_argument("--certs", help="comma-separated certificate names to run")
    p_check.set_defaults(func=cmd_check)

    p_falsify = sub.add_parser("falsify", help="oracle-only counterexample search")
    p_falsify.add_argument("instance")
    p_falsify.add_argument("--budget", type=int, default=100_000)
    p_falsify.add_argument("--seed", type=int, default=0)
    p_falsify.set_defaults(func=cmd_falsify)

    p_gen = sub.add_parser("generate", help="write instance corpora")
    p_gen.add_argument("--family", required=True, metavar="FAMILY",
                       help="one of: " + ", ".join(sorted(FAMILIES)))
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--count", type=int, default=1)
    p_gen.add_argument("--out", default=".")
    p_gen.set_defaults(func=cmd_generate)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
