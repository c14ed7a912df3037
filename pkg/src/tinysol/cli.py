"""Command line front end.

    tinysol check FILE...               parse and validate .tns / .scn files
    tinysol run SCENARIO [options]      run a scenario and check its expects
    tinysol state SCENARIO [--at K]     dump the state after K transactions

Exit status: 0 ok, 1 failed expect (or invalid file for ``check``),
2 parse or usage error, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from .chain import (
    GenesisError,
    apply_chain,
    check_expects,
    genesis,
    raise_recursion_limit,
    scenario_addresses,
    transactions,
)
from .interp import DEFAULT_FUEL, TraceEvent
from .state import InvariantViolation, State, total_supply
from .syntax import ParseError, load_contract, load_scenario, validate_contract
from .syntax.nodes import Scenario
from .values import format_value, from_json

FUEL_ENV = "TINYSOL_FUEL"

EXIT_OK, EXIT_EXPECT, EXIT_PARSE, EXIT_INTERNAL = 0, 1, 2, 3


def default_fuel() -> int:
    raw = os.environ.get(FUEL_ENV)
    if raw is None:
        return DEFAULT_FUEL
    try:
        fuel = int(raw)
    except ValueError:
        raise SystemExit(f"{FUEL_ENV} must be an integer, got {raw!r}") from None
    if fuel < 0:
        raise SystemExit(f"{FUEL_ENV} must be non-negative")
    return fuel


def _load(path: str) -> tuple[Scenario, State, dict, list]:
    sc = load_scenario(path)
    state, registry = genesis(sc)
    return sc, state, registry, transactions(sc)


def run_report(path: str, fuel: int = DEFAULT_FUEL, tracer=None, strict_callee: bool = False,
               upto: Optional[int] = None) -> dict:
    """Run a scenario file and build the report dictionary (the JSON
    schema documented in the README). ``upto`` stops after that many
    transactions and skips the expects."""
    sc, state0, registry, txs = _load(path)
    if upto is not None:
        if not 0 <= upto <= len(txs):
            raise IndexError(f"--at must be between 0 and {len(txs)}, got {upto}")
        txs = txs[:upto]
    result = apply_chain(state0, txs, registry, fuel, tracer, strict_callee)
    addrs = scenario_addresses(sc, result.state) | set(state0.addresses())
    before, after = total_supply(state0, addrs), total_supply(result.state, addrs)
    if before != after:
        raise InvariantViolation(f"total supply changed from {before} to {after}")
    expects = [] if upto is not None else check_expects(sc, result.state)
    status = EXIT_EXPECT if any(not e.ok for e in expects) else EXIT_OK
    return {
        "scenario": sc.name or Path(path).stem,
        "fuel": fuel,
        "receipts": [
            {
                "index": i,
                "tx": str(r.tx),
                "rule": r.rule,
                "cause": None if r.cause is None else str(r.cause),
                "detail": r.detail,
                "fuel_used": r.fuel_used,
                "deltas": {str(a): d for a, d in r.deltas},
            }
            for i, r in enumerate(result.receipts, 1)
        ],
        "expects": [
            {"line": e.line, "expr": e.text, "ok": e.ok, "lhs": e.lhs, "rhs": e.rhs, "error": e.error}
            for e in expects
        ],
        "state": result.state.export(),
        "status": status,
    }


def format_receipt(r: dict) -> str:
    line = f"tx {r['index']}  {r['rule']}  {r['tx']}  fuel={r['fuel_used']}"
    if r["cause"] is not None:
        line += f"  cause={r['cause']}"
        if r["detail"]:
            line += f" ({r['detail']})"
    for a, d in r["deltas"].items():
        line += f"  {a}:{d:+d}"
    return line


def format_expect(e: dict) -> str:
    line = f"expect line {e['line']}  {'ok' if e['ok'] else 'FAILED'}  {e['expr']}"
    if e["lhs"] is not None:
        line += f"  [{e['lhs']} vs {e['rhs']}]"
    if e["error"]:
        line += f"  error: {e['error']}"
    return line


def format_state_record(rec: dict) -> str:
    return f"{rec['address']}[{format_value(from_json(rec['key']))}] = {format_value(from_json(rec['value']))}"


def render_text(report: dict) -> str:
    lines = [f"scenario {report['scenario']} (fuel {report['fuel']})"]
    lines += [format_receipt(r) for r in report["receipts"]]
    lines += [format_expect(e) for e in report["expects"]]
    lines.append("state")
    lines += ["  " + format_state_record(rec) for rec in report["state"]]
    lines.append(f"status {report['status']}")
    return "\n".join(lines) + "\n"


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def cmd_check(args: argparse.Namespace) -> int:
    status = EXIT_OK
    for path in args.paths:
        try:
            if path.endswith(".scn"):
                sc = load_scenario(path)
                genesis(sc)
                transactions(sc)
            else:
                validate_contract(load_contract(path))
        except ParseError as exc:
            if exc.path is None:
                exc.path = path
            print(exc, file=sys.stderr)
            status = EXIT_EXPECT
        except GenesisError as exc:
            print(f"{path}: {exc.code}: {exc}", file=sys.stderr)
            status = EXIT_EXPECT
        else:
            print(f"{path}: ok")
    return status


def _tracer(enabled: bool):
    if not enabled:
        return None

    def emit(ev: TraceEvent) -> None:
        print(ev, file=sys.stderr)

    return emit


def _run(args: argparse.Namespace, upto: Optional[int] = None) -> tuple[int, Optional[dict]]:
    try:
        report = run_report(args.scenario, args.fuel, _tracer(getattr(args, "trace", False)),
                            getattr(args, "strict_callee", False), upto)
    except (ParseError, GenesisError) as exc:
        print(exc if isinstance(exc, ParseError) else f"{args.scenario}: {exc}", file=sys.stderr)
        return EXIT_PARSE, None
    except IndexError as exc:
        print(exc, file=sys.stderr)
        return EXIT_PARSE, None
    except InvariantViolation as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL, None
    return report["status"], report


def cmd_run(args: argparse.Namespace) -> int:
    status, report = _run(args)
    if report is not None:
        sys.stdout.write(render_json(report) if args.format == "json" else render_text(report))
    return status


def cmd_state(args: argparse.Namespace) -> int:
    status, report = _run(args, upto=args.at)
    if report is None:
        return status
    if args.format == "json":
        sys.stdout.write(json.dumps(report["state"], indent=2, ensure_ascii=False) + "\n")
    else:
        sys.stdout.write("".join(format_state_record(r) + "\n" for r in report["state"]))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tinysol", description="Run TinySol contracts and scenarios.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="parse and validate contract and scenario files")
    c.add_argument("paths", nargs="+")
    c.set_defaults(func=cmd_check)

    fuel_help = f"statement steps per transaction (default ${FUEL_ENV} or {DEFAULT_FUEL})"
    r = sub.add_parser("run", help="run a scenario and check its expect lines")
    r.add_argument("scenario")
    r.add_argument("--fuel", type=int, default=None, help=fuel_help)
    r.add_argument("--trace", action="store_true", help="stream rule applications to stderr")
    r.add_argument("--format", choices=("text", "json"), default="text")
    r.add_argument("--strict-callee", action="store_true",
                   help="reject transactions addressed to accounts")
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("state", help="dump the state after the first K transactions")
    s.add_argument("scenario")
    s.add_argument("--at", type=int, default=None, metavar="K")
    s.add_argument("--fuel", type=int, default=None, help=fuel_help)
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.set_defaults(func=cmd_state)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "fuel", None) is None and hasattr(args, "fuel"):
        args.fuel = default_fuel()
    if getattr(args, "fuel", 0) < 0:
        parser.error("--fuel must be non-negative")
    raise_recursion_limit()
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
