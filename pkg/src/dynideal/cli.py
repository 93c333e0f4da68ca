"""Command line front end: ``dynideal scenario|report|game ...``."""

from __future__ import annotations

import argparse
import json
import sys

from .errors import DynIdealError
from .game import make_strategy, run_game
from .ideals import get_instance
from .scenarios import (
    resolve_scenario,
    scenario_list,
    scenario_run,
    verify_report_data,
    write_report,
)


def _params(pairs) -> dict:
    out = {}
    for item in pairs or []:
        key, _, value = item.partition("=")
        try:
            out[key] = json.loads(value)
        except json.JSONDecodeError:
            out[key] = value
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dynideal", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    scn = sub.add_parser("scenario", help="list or run scenarios")
    scn_sub = scn.add_subparsers(dest="action", required=True)
    scn_sub.add_parser("list", help="print the builtin scenario names")
    run = scn_sub.add_parser("run", help="run a builtin scenario or a scenario file")
    run.add_argument("target", help="scenario name or path to a JSON scenario file")
    run.add_argument("--seed", type=int)
    run.add_argument("--horizon", type=int)
    run.add_argument("--budget", type=int, help="cap on trials and games per check")
    run.add_argument("--report", help="report path (default: $DYNIDEAL_REPORT_DIR/<name>.json)")

    rep = sub.add_parser("report", help="verify reports")
    rep_sub = rep.add_subparsers(dest="action", required=True)
    ver = rep_sub.add_parser("verify", help="check the digest and re-verify every certificate")
    ver.add_argument("path")

    game = sub.add_parser("game", help="play one DC game")
    game_sub = game.add_subparsers(dest="action", required=True)
    g = game_sub.add_parser("run")
    g.add_argument("instance", help="instance name, e.g. BoundedQ or FiniteSym")
    g.add_argument("strategy_I")
    g.add_argument("strategy_II")
    g.add_argument("--horizon", type=int, default=10)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--param", action="append", metavar="KEY=VALUE",
                   help="instance parameter, e.g. N=20 (repeatable)")
    g.add_argument("--thresholds", help="comma-separated thresholds for the stratified strategy")
    return p


def _cmd_scenario(args, out) -> int:
    if args.action == "list":
        for name in scenario_list():
            print(name, file=out)
        return 0
    scn = resolve_scenario(args.target)
    report = scenario_run(scn, seed=args.seed, horizon=args.horizon, budget=args.budget)
    path = write_report(report, args.report)
    for rec in report["checks"]:
        print(f"{'PASS' if rec['passed'] else 'FAIL'}  {rec['id']}  {rec['claim']}", file=out)
    s = report["summary"]
    print(f"{s['passed']}/{s['total']} checks passed; report written to {path}", file=out)
    return 0 if s["failed"] == 0 else 1


def _cmd_report(args, out) -> int:
    try:
        with open(args.path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        print(f"cannot read report: {exc}", file=out)
        return 2
    v = verify_report_data(data)
    print(f"digest: {'ok' if v.digest_ok else 'MISMATCH'}", file=out)
    for cid, ok in v.checks:
        print(f"{'ok  ' if ok else 'FAIL'}  {cid}", file=out)
    for msg in v.problems:
        print(f"problem: {msg}", file=out)
    print("verified" if v.ok else "NOT verified", file=out)
    return 0 if v.ok else 1


def _cmd_game(args, out) -> int:
    params = _params(args.param)
    inst = get_instance(args.instance, **params)
    kw = {}
    if args.strategy_I == "stratified":
        if not args.thresholds:
            print("the stratified strategy needs --thresholds", file=out)
            return 2
        kw["thresholds"] = [int(x) for x in args.thresholds.split(",")]
    sI = make_strategy("I", args.strategy_I, **kw)
    sII = make_strategy("II", args.strategy_II)
    t, verdict = run_game(inst, sI, sII, args.horizon, seed=args.seed)
    print(json.dumps({"transcript": t.to_json(), "verdict": verdict.to_json()},
                     sort_keys=True, indent=1), file=out)
    return 0 if verdict.outcome_in_ideal else 1


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        if args.command == "scenario":
            return _cmd_scenario(args, out)
        if args.command == "report":
            return _cmd_report(args, out)
        return _cmd_game(args, out)
    except DynIdealError as exc:
        print(f"error: {exc}", file=out)
        return 2


if __name__ == "__main__":
    sys.exit(main())
