"""Command-line front end: run verification suites and emit reports.

Exit codes: 0 when nothing fails (axioms allowed), 1 when a check fails,
2 on usage errors.
"""
from __future__ import annotations

import argparse
import configparser
import json
import os
import sys
from pathlib import Path
from typing import Callable, Sequence

from . import chow, cohomology, defect, discriminant, ktheory, localgeom, mutation
from .report import FAIL, STATUSES, VerificationReport, check, REFERENCE, timed

CONFIG_ENV = "DBLQUARTIC_CONFIG"
DEFAULTS = {"prime": 7, "seed": 0, "grid": 4}


class UsageError(Exception):
    pass


def load_config(path: str | None) -> dict:
    """Plain ``key = value`` lines; recognised keys are prime, seed and grid."""
    cfg = dict(DEFAULTS)
    path = path or os.environ.get(CONFIG_ENV)
    if not path:
        return cfg
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"config file not found: {path}")
    parser = configparser.ConfigParser()
    try:
        parser.read_string("[config]\n" + p.read_text())
    except configparser.Error as exc:
        raise UsageError(f"malformed config file: {exc}") from exc
    for key, value in parser["config"].items():
        if key not in DEFAULTS:
            raise UsageError(f"unknown config key {key!r}")
        try:
            cfg[key] = int(value)
        except ValueError as exc:
            raise UsageError(f"config key {key!r} needs an integer") from exc
    return cfg


def _step_records(step: int | None) -> list[VerificationReport]:
    if step is None:
        return [r for r in mutation.suite() if not r.id.startswith("mutation.special")
                and not r.id.startswith("mutation.axiom")]
    if not 1 <= step <= 8:
        raise UsageError("--step must be between 1 and 8")
    reps = mutation.verify_figure1(steps=range(1, step + 1))
    last = reps[-1]
    if last.step != step:
        return [check(f"mutation.replay-step-{step}", f"mutation step {step}", "certified",
                      f"replay stopped at step {last.step}", REFERENCE)]
    return [check(f"mutation.replay-step-{step}", f"mutation step {step} of the eight-step sequence",
                  "certified", "certified" if last.certified else f"refused: {last.failure}", REFERENCE,
                  detail=last.to_dict())]


def _special_records() -> list[VerificationReport]:
    return [r for r in mutation.suite() if r.id.startswith(("mutation.special", "mutation.axiom"))]


def _discriminant_records(args, cfg) -> list[VerificationReport]:
    if args.instance:
        try:
            inst = discriminant.FiniteFieldInstance.load(args.instance)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read instance file: {exc}") from exc
    else:
        prime = args.prime if args.prime is not None else cfg["prime"]
        seed = args.seed if args.seed is not None else cfg["seed"]
        if prime > discriminant.MAX_PRIME or prime < 3:
            raise UsageError(f"--prime must be an odd prime <= {discriminant.MAX_PRIME}")
        if any(prime % d == 0 for d in range(2, prime)):
            raise UsageError("--prime must be prime")
        inst = discriminant.random_instance(prime, seed)
    if inst.prime > discriminant.MAX_PRIME:
        raise UsageError(f"instance prime exceeds {discriminant.MAX_PRIME}")
    return discriminant.suite(instance=inst)


def _suites(args, cfg) -> list[tuple[str, Callable[[], list]]]:
    grid = cfg["grid"]
    cmd = args.command
    table = {
        "chow": lambda: chow.suite(),
        "cohomology": lambda: cohomology.suite(grid) + ktheory.suite(grid),
        "mutate": lambda: _step_records(getattr(args, "step", None)),
        "mutate-special": _special_records,
        "discriminant": lambda: _discriminant_records(args, cfg),
        "defect": defect.suite,
        "localgeom": localgeom.suite,
    }
    if cmd == "verify-all":
        args.step = None
        args.instance = getattr(args, "instance", None)
        args.prime = getattr(args, "prime", None)
        args.seed = getattr(args, "seed", None)
        order = ["chow", "cohomology", "mutate", "mutate-special", "discriminant", "defect", "localgeom"]
        return [(k, table[k]) for k in order]
    return [(cmd, table[cmd])]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "jsonl"), default="text",
                        help="text table (default), one JSON document, or one JSON record per line")
    common.add_argument("--config", help=f"key=value config file (default: ${CONFIG_ENV})")
    common.add_argument("--timing", action="store_true", help="record wall time per suite in millis")
    common.add_argument("--grid", type=int, help="half-width of the invariant sweeps")

    parser = argparse.ArgumentParser(prog="dblquartic", description="Exact verification suites.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify-all", parents=[common], help="run every suite")
    sub.add_parser("chow", parents=[common], help="Chern classes, degrees, canonical classes")
    sub.add_parser("cohomology", parents=[common], help="cohomology oracle and HRR consistency")
    m = sub.add_parser("mutate", parents=[common], help="replay the eight-step mutation sequence")
    m.add_argument("--step", type=int, help="report a single step (1-8)")
    sub.add_parser("mutate-special", parents=[common], help="ledger-mode steps for the special resolution")
    d = sub.add_parser("discriminant", parents=[common], help="determinant identity and F_p node survey")
    d.add_argument("--prime", type=int)
    d.add_argument("--seed", type=int)
    d.add_argument("--instance", help="instance file (key=value lines)")
    sub.add_parser("defect", parents=[common], help="Eagon-Northcott defect and projectivity verdict")
    sub.add_parser("localgeom", parents=[common], help="local models at the nodes")
    return parser


def render(records: list[VerificationReport], fmt: str) -> str:
    if fmt == "jsonl":
        return "".join(r.to_json() + "\n" for r in records)
    counts = {s: sum(r.status == s for r in records) for s in STATUSES}
    if fmt == "json":
        doc = {"records": [r.to_dict() for r in records], "summary": counts}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    width = max([len(r.id) for r in records] + [2])
    lines = [f"{'id':<{width}}  {'status':<12}  {'provenance':<10}  computed"]
    for r in records:
        comp = json.dumps(r.to_dict()["computed"], sort_keys=True)
        if len(comp) > 70:
            comp = comp[:67] + "..."
        lines.append(f"{r.id:<{width}}  {r.status:<12}  {r.provenance:<10}  {comp}")
    lines.append(", ".join(f"{k}: {v}" for k, v in counts.items()))
    return "\n".join(lines) + "\n"


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = load_config(args.config)
        if args.grid is not None:
            if args.grid < 0:
                raise UsageError("--grid must be non-negative")
            cfg["grid"] = args.grid
        records: list[VerificationReport] = []
        for _, fn in _suites(args, cfg):
            with timed(records, args.timing):
                records.extend(fn())
    except UsageError as exc:
        print(f"dblquartic: error: {exc}", file=sys.stderr)
        return 2
    records.sort(key=lambda r: r.id)
    out.write(render(records, args.format))
    return 1 if any(r.status == FAIL for r in records) else 0


def main() -> None:
    sys.exit(run())
