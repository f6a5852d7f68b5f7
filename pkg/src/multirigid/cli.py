"""Command-line interface: ``multirigid <command> [options]``.

Exit codes: 0 complete fan / polytopal / success, 2 bases only, 3 not bases,
4 structural error, 5 fan but no valid lift, 64 bad flags.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import __version__
from .errors import InvalidParams, MultirigidError
from .fan import Realization, Verdict, certify_fan, make_matrix
from .ngon import KTriangulation, enumerate_k_triangulations, format_edge, polygon
from .obstructions import desargues_class, impossibility_witness, morgan_scott_signs, star_interior_test
from .polytope import build_inequalities, find_lift, lift_from_json, verify_lift
from .rigidity import (
    MatrixKind,
    ParameterConfig,
    circle_positions,
    parse_rational,
    parse_rational_list,
)

EXIT_OK = 0
EXIT_BASES_ONLY = 2
EXIT_NOT_BASES = 3
EXIT_STRUCTURAL = 4
EXIT_INFEASIBLE = 5
EXIT_USAGE = 64

VERDICT_EXIT = {Verdict.COMPLETE_FAN: EXIT_OK, Verdict.BASES_ONLY: EXIT_BASES_ONLY, Verdict.NOT_BASES: EXIT_NOT_BASES}

# Runs that take hours to days; they need --tier heavy.
HEAVY_RUNS = {(2, 12), (2, 13), (4, 13)}
CHECKPOINT_EVERY = 100_000


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits with 2, which is a verdict here
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


@dataclass
class RunConfig:
    k: int
    n: int
    positions: ParameterConfig | None
    kind: MatrixKind
    threads: int
    exhaustive: bool
    seed: int | None
    tier: str

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "positions": None if self.positions is None else self.positions.to_json(),
            "positionSource": None if self.positions is None else self.positions.source,
            "kind": self.kind.value,
            "threads": self.threads,
            "exhaustive": self.exhaustive,
            "seed": self.seed,
            "tier": self.tier,
        }


def parse_positions(spec: str | None, n: int, bits: int) -> ParameterConfig:
    """standard | circle | file path (JSON list or {"t": [...]}) | inline comma list."""
    if spec is None or spec == "standard":
        return ParameterConfig.standard(n)
    if spec == "circle":
        return circle_positions(n, bits)
    path = spec[1:] if spec.startswith("@") else spec
    if not re.fullmatch(r"[-+0-9/,\s]+", spec) and Path(path).is_file():
        data = json.loads(Path(path).read_text())
        values = data["t"] if isinstance(data, dict) else data
        return ParameterConfig(tuple(parse_rational(v) for v in values), source=f"file:{path}")
    try:
        values = parse_rational_list(spec)
    except (ValueError, InvalidParams) as exc:
        raise UsageError(f"cannot parse positions {spec!r}: {exc}") from None
    return ParameterConfig(tuple(values), source="inline")


def _threads(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("MULTIRIGID_THREADS")
    return int(env) if env and env.isdigit() else 1


def _config(args, need_positions: bool = True) -> RunConfig:
    k, n = args.k, args.n
    if k is None or n is None:
        raise UsageError("--k and --n are required")
    if k < 1 or n < 2 * k + 1:
        raise UsageError(f"need k >= 1 and n >= 2k+1, got k={k}, n={n}")
    positions = parse_positions(args.positions, n, args.circle_bits) if need_positions else None
    if positions is not None and positions.n != n:
        raise UsageError(f"expected {n} positions, got {positions.n}")
    kind_flag = getattr(args, "kind", None)
    kind = MatrixKind.parse(kind_flag) if kind_flag else MatrixKind.POLYNOMIAL
    return RunConfig(k, n, positions, kind, _threads(args.threads), bool(args.exhaustive), args.seed, args.tier)


def _check_tier(cfg: RunConfig) -> None:
    if cfg.tier != "heavy" and ((cfg.k, cfg.n) in HEAVY_RUNS or cfg.n >= 14):
        raise UsageError(f"(k, n) = ({cfg.k}, {cfg.n}) is a long run; pass --tier heavy")


def _emit(report: dict, out: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=False)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _base_report(command: str, cfg: RunConfig | None) -> dict:
    return {"format": 1, "tool": "multirigid", "version": __version__, "command": command, "config": cfg.to_json() if cfg else None}


# ---------------------------------------------------------------------------
# commands


def cmd_enumerate(args) -> int:
    cfg = _config(args, need_positions=False)
    _check_tier(cfg)
    n, k = cfg.n, cfg.k
    poly = polygon(n, k)
    count = 0
    start = None
    ckpt = Path(args.checkpoint) if args.checkpoint else None
    if args.resume:
        if ckpt is None or not ckpt.is_file():
            raise UsageError("--resume needs an existing --checkpoint file")
        state = json.loads(ckpt.read_text())
        if (state.get("k"), state.get("n")) != (k, n):
            raise UsageError("checkpoint is for different (k, n)")
        count = int(state["count"])
        if state.get("last") is not None:
            start = KTriangulation.from_edges(n, k, [tuple(int(x) for x in e.split(",")) for e in state["last"]])
    every = args.checkpoint_every
    if args.resume and args.out and Path(args.out).is_file():
        # Drop facets written after the checkpoint so the stream has no duplicates.
        with open(args.out) as fh:
            kept = [line for _, line in zip(range(count), fh)]
        Path(args.out).write_text("".join(kept))
    sink = open(args.out, "a" if args.resume else "w") if args.out else (None if args.count_only else sys.stdout)
    last = start
    try:
        for T in enumerate_k_triangulations(n, k, start):
            count += 1
            last = T
            if sink is not None:
                sink.write(json.dumps({"format": 1, "index": count, "relevant": [format_edge(e) for e in T.relevant]}) + "\n")
            if ckpt is not None and count % every == 0:
                if sink is not None:
                    sink.flush()
                _write_checkpoint(ckpt, k, n, count, last, complete=False)
    finally:
        if sink is not None and sink is not sys.stdout:
            sink.close()
    if ckpt is not None:
        _write_checkpoint(ckpt, k, n, count, last, complete=True)
    summary = {"format": 1, "k": k, "n": n, "relevantEdges": len(poly.relevant), "count": count}
    stream = sys.stdout if (args.out or args.count_only) else sys.stderr
    stream.write(json.dumps(summary) + "\n")
    return EXIT_OK


def _write_checkpoint(path: Path, k: int, n: int, count: int, last: KTriangulation | None, complete: bool) -> None:
    state = {
        "format": 1,
        "k": k,
        "n": n,
        "count": count,
        "last": None if last is None else [format_edge(e) for e in last.relevant],
        "complete": complete,
    }
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(json.dumps(state) + "\n")
    tmp.replace(path)


def cmd_check_fan(args) -> int:
    cfg = _config(args)
    _check_tier(cfg)
    t0 = time.perf_counter()
    fan = certify_fan(cfg.k, cfg.n, cfg.positions, cfg.kind, exhaustive=cfg.exhaustive)
    report = _base_report("check-fan", cfg)
    report["fan"] = fan.to_json()
    report["verdict"] = fan.verdict.value
    report["timing"] = {"seconds": round(time.perf_counter() - t0, 3)}
    _emit(report, args.out)
    return VERDICT_EXIT[fan.verdict]


def _load_lift(path: str) -> dict:
    data = json.loads(Path(path).read_text())
    if isinstance(data, dict) and "lift" in data and isinstance(data["lift"], dict):
        data = data["lift"]
    return lift_from_json(data)


def _polytope(args, command: str, check_fan: bool) -> int:
    cfg = _config(args)
    _check_tier(cfg)
    t0 = time.perf_counter()
    report = _base_report(command, cfg)
    matrix = make_matrix(cfg.k, cfg.n, cfg.positions, cfg.kind)
    R = Realization(matrix, cfg.k)
    R.require_full_rank()
    if check_fan:
        fan = certify_fan(cfg.k, cfg.n, cfg.positions, cfg.kind, exhaustive=cfg.exhaustive, realization=R)
        report["fan"] = fan.to_json()
        if fan.verdict is not Verdict.COMPLETE_FAN:
            report["verdict"] = fan.verdict.value
            report["timing"] = {"seconds": round(time.perf_counter() - t0, 3)}
            _emit(report, args.out)
            return VERDICT_EXIT[fan.verdict]
    system = build_inequalities(R)
    report["inequalities"] = len(system.inequalities)
    report["variables"] = [format_edge(e) for e in system.variables]
    lift_path = getattr(args, "lift", None)
    if lift_path:
        ok, bad = verify_lift(_load_lift(lift_path), system)
        report["lift"] = {"valid": ok, "firstViolated": None if bad is None else bad.to_json()}
        report["verdict"] = "Polytopal" if ok else "LiftInvalid"
        code = EXIT_OK if ok else EXIT_INFEASIBLE
    else:
        outcome = find_lift(system)
        report["lp"] = outcome.to_json(system)
        report["verdict"] = "Polytopal" if outcome.feasible else "Infeasible"
        code = EXIT_OK if outcome.feasible else EXIT_INFEASIBLE
    report["timing"] = {"seconds": round(time.perf_counter() - t0, 3)}
    _emit(report, args.out)
    return code


def cmd_check_polytope(args) -> int:
    return _polytope(args, "check-polytope", check_fan=not args.assume_fan)


def cmd_verify_lift(args) -> int:
    return _polytope(args, "verify-lift", check_fan=False)


def cmd_find_lift(args) -> int:
    return _polytope(args, "find-lift", check_fan=False)


def _planar_points(args, count: int) -> tuple[list, dict]:
    """Parabola points (t, t^2) from --t, or from --positions for the given count."""
    if args.t is not None:
        t = ParameterConfig(tuple(parse_rational_list(args.t)), source="inline")
    else:
        t = parse_positions(args.positions, count, args.circle_bits)
    if t.n != count:
        raise UsageError(f"expected {count} parameters, got {t.n}")
    return list(t.parabola().q), {"t": t.to_json(), "positionSource": t.source}


def cmd_obstruction(args) -> int:
    report = {"format": 1, "tool": "multirigid", "version": __version__, "command": f"obstruction {args.which}"}
    if args.which == "desargues":
        q, echo = _planar_points(args, 6)
        cls = desargues_class(q)
        report.update(config=echo, orientation=cls.value, morganScott=morgan_scott_signs(q).to_json())
    elif args.which == "star-interior":
        if args.k is None:
            raise UsageError("--k is required")
        q, echo = _planar_points(args, 2 * args.k + 3)
        echo["k"] = args.k
        report.update(config=echo, result=star_interior_test(q, args.k).to_json())
    else:
        if args.k is None:
            raise UsageError("--k is required")
        n = args.n if args.n is not None else 2 * args.k + 6
        if n != 2 * args.k + 6:
            raise UsageError(f"two-k-six needs n = 2k+6 = {2 * args.k + 6}")
        q, echo = _planar_points(args, n)
        echo.update(k=args.k, n=n)
        report.update(config=echo, witness=impossibility_witness(q, args.k).to_json())
    _emit(report, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing

_VALUE_FLAGS = {"--positions", "--t"}


def _join_negative_values(argv: Sequence[str]) -> list[str]:
    """Let ``--positions -2,1,...`` through argparse by rewriting to ``--positions=-2,1,...``."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a in _VALUE_FLAGS and i + 1 < len(argv) and re.fullmatch(r"-[0-9][-+0-9/,]*", argv[i + 1]):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def _common(p: argparse.ArgumentParser, positions: bool = True) -> None:
    p.add_argument("--k", type=int)
    p.add_argument("--n", type=int)
    if positions:
        p.add_argument("--positions", help="standard | circle | FILE | inline list such as -2,1,2,3")
        p.add_argument("--kind", help="matrix kind: Polynomial (default), BarJoint, Hyper, Cofactor, CofactorHomogeneous")
        p.add_argument("--circle-bits", type=int, default=64)
    p.add_argument("--threads", type=int, help="worker count (default: MULTIRIGID_THREADS or 1)")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--seed", type=int)
    p.add_argument("--tier", choices=("desk", "heavy"), default="desk")
    p.add_argument("--exhaustive", action="store_true", help="run every check instead of stopping at the first failure")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="multirigid", description="Exact certification of multiassociahedron realizations")
    parser.add_argument("--version", action="version", version=f"multirigid {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("enumerate", help="stream k-triangulations as JSONL")
    _common(p, positions=False)
    p.add_argument("--checkpoint", help="checkpoint file (written every --checkpoint-every facets)")
    p.add_argument("--checkpoint-every", type=int, default=CHECKPOINT_EVERY)
    p.add_argument("--resume", action="store_true")
    p.add_argument("--count-only", action="store_true", help="print only the count")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("check-fan", help="certify a complete simplicial fan")
    _common(p)
    p.set_defaults(func=cmd_check_fan)

    p = sub.add_parser("check-polytope", help="certify the fan, then verify or search a lift")
    _common(p)
    p.add_argument("--lift", help="lift JSON {\"i,j\": \"p/q\"}; omitted: search one")
    p.add_argument("--assume-fan", action="store_true", help="skip fan certification")
    p.set_defaults(func=cmd_check_polytope)

    p = sub.add_parser("verify-lift", help="check a lift against every circuit inequality")
    _common(p)
    p.add_argument("--lift", required=True)
    p.set_defaults(func=cmd_verify_lift)

    p = sub.add_parser("find-lift", help="exact LP: a lift or a Farkas certificate")
    _common(p)
    p.set_defaults(func=cmd_find_lift)

    p = sub.add_parser("obstruction", help="geometric obstructions")
    p.add_argument("which", choices=("desargues", "star-interior", "two-k-six"))
    _common(p)
    p.add_argument("--t", help="parabola parameters, e.g. -4,-2,-1,1,2,4")
    p.set_defaults(func=cmd_obstruction)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_join_negative_values(argv))
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"multirigid: {exc}\n")
        return EXIT_USAGE
    except MultirigidError as exc:
        sys.stderr.write(f"multirigid: {type(exc).__name__}: {exc}\n")
        return EXIT_STRUCTURAL


if __name__ == "__main__":
    raise SystemExit(main())
