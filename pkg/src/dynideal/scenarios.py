"""Scenario catalog, deterministic runner and independent report verification.

A scenario is a JSON object::

    {"name": str, "description": str, "seed": int,
     "checks": [{"id": str, "claim": str, "anchor": str, "kind": str, "params": {...}}]}

``kind`` names an entry of :data:`dynideal.checks.CHECKS`.  Optional
top-level ``horizon`` and ``budget`` override every game horizon and cap every
trial or game count.

A report is::

    {"format": "dynideal-report/1", "scenario": <echo>, "checks": [...],
     "summary": {"total", "passed", "failed"}, "digest": <sha256 hex>}

Each check record carries ``id``, ``claim``, ``anchor``, ``kind``,
``passed``, ``detail`` and the full ``certificate``.  The digest covers the
canonical JSON of everything except itself.  No timings are stored, so two
runs of one scenario produce identical bytes.
"""

from __future__ import annotations

import copy
import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .checks import CHECKS
from .errors import DynIdealError, ParseError, PreconditionError

FORMAT = "dynideal-report/1"
REPORT_DIR_ENV = "DYNIDEAL_REPORT_DIR"

_BQ = {"instance": "BoundedQ"}
_FS7 = {"instance": "FiniteSym", "N": 7, "k": 3}


def _check(cid, claim, anchor, kind, **params):
    return {"id": cid, "claim": claim, "anchor": anchor, "kind": kind, "params": params}


BUILTIN = [
    {
        "name": "bounded-cofinal-default",
        "description": "Cofinal orbits for bounded sets of rationals, and the cofinal Player II.",
        "seed": 1,
        "checks": [
            _check("cover", "cover witnesses fix a and cover c by the image of b",
                   "cofinal orbits: bounded sets", "cover", instance=_BQ, trials=20),
            _check("transport", "largeness certificates survive conjugation",
                   "cofinal orbits: invariance of largeness", "largeness-conjugation",
                   instance=_BQ, trials=20),
            _check("game", "cofinal Player II keeps the outcome bounded",
                   "DC game: cofinal orbits give Player II a winning strategy", "game",
                   instance=_BQ, player_I={"name": "random"}, player_II={"name": "cofinal"},
                   games=3, horizon=15),
        ],
    },
    {
        "name": "finite-sym-cofinal",
        "description": "Cofinal orbits for the sets of size below k in a finite symmetric group.",
        "seed": 2,
        "checks": [
            _check("cover", "cover witnesses for sets of size below k", "cofinal orbits: size ideal",
                   "cover", instance=_FS7, trials=30),
            _check("transport", "largeness certificates survive conjugation",
                   "cofinal orbits: invariance of largeness", "largeness-conjugation",
                   instance=_FS7, trials=20),
        ],
    },
    {
        "name": "back-and-forth-matching",
        "description": "The finite back-and-forth step: carry d0 onto d1 while fixing a set.",
        "seed": 3,
        "checks": [
            _check("matching", "order-preserving matchings fixing the given set",
                   "back-and-forth claim", "matching", cases=[
                       {"d0": ["1", "2"], "d1": ["1", "2"]},
                       {"d0": ["1", "2"], "d1": ["1", "3"], "fix": "{0}"},
                       {"d0": ["-3", "1/2", "5"], "d1": ["-1", "1/3", "9"], "fix": "[0, 0] U {1}"},
                       {"d0": ["1"], "d1": ["-1"], "fix": "{0}", "expect": "GapMismatch"},
                       {"d0": ["1", "2"], "d1": ["1"], "expect": "SizeMismatch"},
                   ]),
        ],
    },
    {
        "name": "dc-game-finite-sym-obstruction",
        "description": "Cofinal Player II in FiniteSym(20, 4) runs out of room; the fault is expected.",
        "seed": 4,
        "checks": [
            _check("game", "the cofinal strategy cannot keep growing sets below size k",
                   "DC game: cofinal strategy on a finite surrogate", "game",
                   instance={"instance": "FiniteSym", "N": 20, "k": 4},
                   player_I={"name": "random"}, player_II={"name": "cofinal"},
                   games=3, horizon=10, expect="fault-II"),
        ],
    },
    {
        "name": "dc-game-stratified",
        "description": "Stratified Player I forces the accumulated set past every threshold.",
        "seed": 5,
        "checks": [
            _check("game", "accumulated size reaches k_n after round n",
                   "DC game: stratified Player I", "game",
                   instance={"instance": "FiniteSym", "N": 20, "k": 21},
                   player_I={"name": "stratified", "thresholds": [1, 2, 4, 6, 8, 10, 12, 14]},
                   player_II={"name": "random"}, games=3, horizon=8, expect="full-play",
                   thresholds=[1, 2, 4, 6, 8, 10, 12, 14]),
        ],
    },
    {
        "name": "dc-game-interleave",
        "description": "Interleaving Player I on [0, 1] against random Player II.",
        "seed": 6,
        "checks": [
            _check("game", "every move interleaves the accumulated set",
                   "DC game: interleaving Player I on the unit interval", "game",
                   instance={"instance": "CountableClosedQ"},
                   player_I={"name": "interleave"}, player_II={"name": "random"},
                   games=2, horizon=6, expect="full-play"),
        ],
    },
    {
        "name": "sigma-well-ordered",
        "description": "Countable unions of well-ordered sets pushed above per-gap thresholds.",
        "seed": 7,
        "checks": [
            _check("sigma", "union stays well-ordered, thresholds increase per gap",
                   "sigma-completeness: well-ordered subsets of Q", "sigma",
                   mode="well-ordered", trials=5, sets=3),
        ],
    },
    {
        "name": "sigma-bounded-below",
        "description": "The bounded-below variant, thresholds converging to an irrational.",
        "seed": 8,
        "checks": [
            _check("sigma", "union stays well-ordered and bounded below every rational",
                   "sigma-completeness: well-ordered sets bounded below every rational", "sigma",
                   mode="bounded-below", trials=5, sets=3),
        ],
    },
    {
        "name": "cb-rank-obstruction",
        "description": "Closed countable sets: a set of higher rank escapes every orbit.",
        "seed": 9,
        "checks": [
            _check("refute", "refuting set has rank one more; PL images keep rank",
                   "Cantor-Bendixson rank obstruction", "cb-obstruction", trials=8),
        ],
    },
    {
        "name": "simplicity-finite-sym",
        "description": "Normal closures in finite symmetric groups and conjugate factorizations.",
        "seed": 10,
        "checks": [
            _check("closure", "normal closure of pstab(b) in pstab(a) is all of pstab(a)",
                   "simplicity: finite symmetric surrogate", "simplicity", max_N=5),
            _check("factorization", "gamma = delta (delta^-1 alpha delta) delta^-1 (alpha^-1 gamma)",
                   "simplicity: conjugate factorization", "factorization", N=12, trials=10),
        ],
    },
    {
        "name": "stratified-window",
        "description": "One window of k_n points absorbs any number of small sets.",
        "seed": 11,
        "checks": [
            _check("window", "moved sets stay inside a and one window",
                   "stratified ideal: size thresholds", "stratified",
                   N=20, thresholds=[3, 6, 12], n=0, trials=5, sets=5),
        ],
    },
    {
        "name": "support-calculus",
        "description": "Supports move with the group; definable closure laws.",
        "seed": 12,
        "checks": [
            _check("support", "g.b supports g.A whenever b supports A; closure laws",
                   "permutation models: supports and definable closure", "support",
                   N=5, k=3, trials=20),
        ],
    },
    {
        "name": "choice-selector",
        "description": "Selectors for well-orderable families built from a large set.",
        "seed": 13,
        "checks": [
            _check("selector", "the selector is supported by the large set",
                   "well-ordered choice from cofinal orbits", "selector", N=8, k=3, trials=5),
        ],
    },
    {
        "name": "abelian-grid",
        "description": "Orbit decomposition and selector refutation on the parity grid.",
        "seed": 14,
        "checks": [
            _check("small", "all selector candidates refuted with b empty",
                   "abelian groups: refuter", "abelian", m=2, modulus=2, b=[], trials=5),
            _check("wide", "orbits are fixed by the stabilizer of any member's support",
                   "abelian groups: orbit decomposition", "abelian", m=3, modulus=4,
                   b=[[0, 0]], trials=5),
        ],
    },
    {
        "name": "fraisse-pure-set",
        "description": "Pure sets: amalgam laws, chains and conjugation witnesses.",
        "seed": 15,
        "checks": [
            _check("laws", "amalgam laws hold exhaustively", "canonical amalgamation: pure sets",
                   "amalgam-laws", signature="pure-set"),
            _check("chain", "ten steps give ten points and full extension score",
                   "Fraisse limit approximations", "fraisse-chain", signature="pure-set",
                   steps=10, min_score="1"),
            _check("conjugation", "conjugation witnesses recompose exactly",
                   "simplicity of automorphism groups: conjugation witness",
                   "conjugation-witness", signature="pure-set",
                   host={"kind": "pure-set", "size": 12}, trials=5),
        ],
    },
    {
        "name": "fraisse-ultrametric",
        "description": "Rational ultrametric spaces with palette {1, 2, 3}.",
        "seed": 16,
        "checks": [
            _check("laws", "amalgam laws hold exhaustively",
                   "canonical amalgamation: rational ultrametric spaces", "amalgam-laws",
                   signature="ultrametric"),
            _check("chain", "chain grows and its extension score is reported",
                   "Fraisse limit approximations", "fraisse-chain", signature="ultrametric",
                   steps=6),
            _check("conjugation", "conjugation witnesses recompose exactly",
                   "simplicity of automorphism groups: conjugation witness",
                   "conjugation-witness", signature="ultrametric",
                   host={"kind": "ultrametric", "branching": 3}, trials=3),
        ],
    },
    {
        "name": "fraisse-vector-space",
        "description": "Vector spaces over GF(2).",
        "seed": 17,
        "checks": [
            _check("laws", "amalgam laws and the dimension law hold exhaustively",
                   "canonical amalgamation: vector spaces over a finite field", "amalgam-laws",
                   signature="vector-space-q"),
            _check("chain", "eight steps give extension score 1",
                   "Fraisse limit approximations", "fraisse-chain", signature="vector-space-q",
                   steps=8, min_score="1"),
            _check("conjugation", "conjugation witnesses recompose exactly",
                   "simplicity of automorphism groups: conjugation witness",
                   "conjugation-witness", signature="vector-space-q",
                   host={"kind": "vector-space-q", "dim": 6}, trials=3),
        ],
    },
    {
        "name": "quad-selector-no-canonical",
        "description": "Quadruple selectors admit no invariant amalgam of a 3-set and a 1-set.",
        "seed": 18,
        "checks": [
            _check("impossible", "every selector table is broken by some automorphism pair",
                   "no canonical amalgamation: quadruple selectors", "no-canonical",
                   a_size=3, b_size=1, expect="impossible"),
            _check("degenerate", "with one point on each side no quadruple exists",
                   "no canonical amalgamation: degenerate shape", "no-canonical",
                   a_size=1, b_size=1, expect="possible"),
            _check("pure", "pure sets amalgamate by union in the same shape",
                   "no canonical amalgamation: pure-set control", "no-canonical",
                   a_size=3, b_size=1, signature="pure-set", expect="possible"),
        ],
    },
]


def scenario_list() -> list:
    return [s["name"] for s in BUILTIN]


def get_scenario(name: str) -> dict:
    for s in BUILTIN:
        if s["name"] == name:
            return copy.deepcopy(s)
    raise PreconditionError(f"unknown scenario {name!r}")


def load_scenario(path) -> dict:
    """Read a scenario file; JSON syntax errors report line and column."""
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    _validate_scenario(data, str(path))
    return data


def _validate_scenario(data, where="scenario"):
    if not isinstance(data, dict):
        raise ParseError(f"{where}: a scenario must be a JSON object")
    for key in ("name", "checks"):
        if key not in data:
            raise ParseError(f"{where}: missing field {key!r}")
    if not isinstance(data["checks"], list):
        raise ParseError(f"{where}: 'checks' must be a list")
    seen = set()
    for i, c in enumerate(data["checks"]):
        if not isinstance(c, dict) or "kind" not in c or "id" not in c:
            raise ParseError(f"{where}: check {i} needs 'id' and 'kind'")
        if c["kind"] not in CHECKS:
            raise ParseError(f"{where}: check {c['id']!r} has unknown kind {c['kind']!r}")
        if c["id"] in seen:
            raise ParseError(f"{where}: duplicate check id {c['id']!r}")
        seen.add(c["id"])


def resolve_scenario(name_or_path: str) -> dict:
    if name_or_path in scenario_list():
        return get_scenario(name_or_path)
    if os.path.exists(name_or_path):
        return load_scenario(name_or_path)
    raise PreconditionError(f"no scenario named {name_or_path!r} and no such file")


def apply_overrides(scn: dict, seed=None, horizon=None, budget=None) -> dict:
    scn = copy.deepcopy(scn)
    if seed is not None:
        scn["seed"] = seed
    if horizon is not None:
        scn["horizon"] = horizon
    if budget is not None:
        scn["budget"] = budget
    return scn


def _effective_params(scn, check) -> dict:
    params = copy.deepcopy(check.get("params", {}))
    if scn.get("horizon") is not None and check["kind"] == "game":
        params["horizon"] = scn["horizon"]
    if scn.get("budget") is not None:
        for key in ("trials", "games"):
            if key in params:
                params[key] = min(params[key], scn["budget"])
    return params


def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def digest(report: dict) -> str:
    body = {k: v for k, v in report.items() if k != "digest"}
    return hashlib.sha256(canonical(body).encode()).hexdigest()


def scenario_run(scn, seed=None, horizon=None, budget=None) -> dict:
    """Run every check of a scenario (a dict, a builtin name or a file path)."""
    if isinstance(scn, str):
        scn = resolve_scenario(scn)
    else:
        _validate_scenario(scn)
    scn = apply_overrides(scn, seed, horizon, budget)
    base_seed = int(scn.get("seed", 0))
    records = []
    for i, check in enumerate(scn["checks"]):
        run, _ = CHECKS[check["kind"]]
        params = _effective_params(scn, check)
        try:
            res = run(params, base_seed * 100 + i)
            rec = {"passed": bool(res.passed), "certificate": res.certificate, "detail": res.detail}
        except DynIdealError as exc:
            rec = {"passed": False, "certificate": {"error": f"{type(exc).__name__}: {exc}"},
                   "detail": {}}
        rec.update({"id": check["id"], "claim": check.get("claim", ""),
                    "anchor": check.get("anchor", ""), "kind": check["kind"], "params": params})
        records.append(rec)
    records.sort(key=lambda r: r["id"])
    passed = sum(r["passed"] for r in records)
    report = {
        "format": FORMAT,
        "scenario": scn,
        "checks": records,
        "summary": {"total": len(records), "passed": passed, "failed": len(records) - passed},
    }
    # round-trip through JSON so the digest sees exactly what is written
    report = json.loads(canonical(report))
    report["digest"] = digest(report)
    return report


def report_text(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=1, ensure_ascii=True) + "\n"


def write_report(report: dict, path=None) -> Path:
    if path is None:
        root = Path(os.environ.get(REPORT_DIR_ENV, "reports"))
        path = root / f"{report['scenario']['name']}.json"
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(report_text(report))
    return path


@dataclass
class Verification:
    ok: bool
    digest_ok: bool
    checks: list = field(default_factory=list)
    problems: list = field(default_factory=list)


def verify_report_data(report: dict) -> Verification:
    """Recompute the digest and re-decide every check from its certificate."""
    problems = []
    digest_ok = isinstance(report, dict) and report.get("digest") == digest(report)
    if not digest_ok:
        problems.append("digest mismatch")
    rows = []
    for rec in (report.get("checks", []) if isinstance(report, dict) else []):
        kind = rec.get("kind")
        if kind not in CHECKS:
            rows.append((rec.get("id"), False))
            problems.append(f"{rec.get('id')}: unknown kind {kind!r}")
            continue
        _, reverify = CHECKS[kind]
        try:
            again = "error" not in rec["certificate"] and bool(reverify(rec["certificate"]))
        except (DynIdealError, KeyError, TypeError, ValueError, IndexError) as exc:
            again = False
            problems.append(f"{rec.get('id')}: {type(exc).__name__}: {exc}")
        if again != rec.get("passed"):
            problems.append(f"{rec.get('id')}: recorded {rec.get('passed')}, re-verified {again}")
        if not again:
            problems.append(f"{rec.get('id')}: check does not pass")
        rows.append((rec.get("id"), again))
    ok = digest_ok and bool(rows) and all(r[1] for r in rows) and not problems
    return Verification(ok, digest_ok, rows, problems)


def report_verify(path_or_report) -> bool:
    """True iff the report is intact and every check re-verifies as passing."""
    if isinstance(path_or_report, dict):
        data = path_or_report
    else:
        try:
            data = json.loads(Path(path_or_report).read_text())
        except (json.JSONDecodeError, UnicodeDecodeError):
            return False
    return verify_report_data(data).ok
