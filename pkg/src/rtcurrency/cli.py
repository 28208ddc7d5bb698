"""``rtc``: command-line front end.

Every command prints one JSON report on stdout::

    {"command": ..., "inputs": <sha256>, "results": [...], "indeterminate": [...], "exit_code": n}

Exit codes: 0 all checks pass, 1 a violation was found, 2 something could not
be decided, 3 bad input or usage. ``RL_SEED`` seeds random sampling.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .core import CheckReport, IndeterminateError, Truth, UnsupportedRepresentation, load_theory
from .currency import UNAFFORDABLE, DomainError, load_currency
from .locc import SchmidtVector, bell_cost, bell_currency, bell_yield, schmidt
from .suites import SUITES, run_suite
from .thermal import BlockDiagState, Ladder, lorenz, thermo_majorizes, work_cost, work_yield
from .unital import DensityMatrix, QuantumSpec, Stage2Layout, cost_unital, stage2_cost, stage2_yield, yield_unital

EXIT_PASS, EXIT_VIOLATION, EXIT_INDETERMINATE, EXIT_INPUT = 0, 1, 2, 3


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # usage errors exit 3, not argparse's 2
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_INPUT)


# --------------------------------------------------------------------------
# serialization


def _num(x) -> Any:
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, Fraction):
        x = float(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            return "nan"
        return float(f"{x:.12g}")
    return x


def _clean(obj) -> Any:
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_clean(v) for v in obj.tolist()]
    if isinstance(obj, Truth):
        return obj.to_json()
    if obj is UNAFFORDABLE:
        return "unaffordable"
    if isinstance(obj, (str, bool)) or obj is None:
        return obj
    if isinstance(obj, (int, float, Fraction, np.integer, np.floating)):
        return _num(obj)
    return str(obj)


def _dumps(report: dict) -> str:
    return json.dumps(_clean(report), ensure_ascii=False)


class Report:
    def __init__(self, command: str, digest: str):
        self.command = command
        self.digest = digest
        self.results: list[dict] = []
        self.indeterminate: list = []
        self.violation = False
        self.extra: dict = {}

    def value(self, name: str, value) -> None:
        self.results.append({"name": name, "value": value})

    def verdict(self, name: str, passed: bool | None, witnesses=()) -> None:
        self.results.append({"name": name, "verdict": passed, "witnesses": list(witnesses)})
        if passed is False:
            self.violation = True

    def check(self, rep: CheckReport) -> None:
        entry = {"name": rep.check, "verdict": rep.passed, "witnesses": rep.counterexamples}
        if rep.details:
            entry["details"] = rep.details
        self.results.append(entry)
        self.indeterminate.extend(rep.indeterminate)
        if rep.passed is False:
            self.violation = True

    @property
    def exit_code(self) -> int:
        if self.violation:
            return EXIT_VIOLATION
        if self.indeterminate:
            return EXIT_INDETERMINATE
        return EXIT_PASS

    def to_dict(self) -> dict:
        out = {"command": self.command, "inputs": self.digest}
        values = [r for r in self.results if "value" in r]
        if len(self.results) == 1 and values:
            out["value"] = values[0]["value"]
        out.update(self.extra)
        out["results"] = self.results
        out["indeterminate"] = self.indeterminate
        out["exit_code"] = self.exit_code
        return out


def _digest(argv: Sequence[str], files: Sequence[Path]) -> str:
    h = hashlib.sha256()
    h.update("\0".join(argv).encode())
    for f in files:
        h.update(b"\0")
        h.update(Path(f).read_bytes())
    return h.hexdigest()


# --------------------------------------------------------------------------
# file formats


def _load_json(path: str) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}: {exc.msg}") from None


def _entry(x) -> complex:
    if isinstance(x, list) and len(x) == 2 and all(isinstance(v, (int, float)) for v in x):
        return complex(x[0], x[1])
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return complex(x)
    raise InputError(f"matrix entries are numbers or [re, im] pairs, got {x!r}")


def parse_matrix(raw) -> DensityMatrix:
    if isinstance(raw, dict) and "diag" in raw:
        return DensityMatrix.diag(raw["diag"])
    if not isinstance(raw, list) or not raw or not all(isinstance(r, list) for r in raw):
        raise InputError("a density matrix is a list of rows")
    try:
        return DensityMatrix([[_entry(x) for x in row] for row in raw])
    except ValueError as exc:
        raise InputError(str(exc)) from None


def parse_quantum_spec(raw, d: int) -> QuantumSpec:
    if isinstance(raw, dict) and "ball" in raw:
        b = raw["ball"]
        return QuantumSpec.ball(parse_matrix(b["center"]), float(b["eps"]))
    if isinstance(raw, dict) and "hull" in raw:
        return QuantumSpec.hull([parse_matrix(m) for m in raw["hull"]])
    if isinstance(raw, dict) and "states" in raw:
        raw = raw["states"]
    if not isinstance(raw, list) or not raw:
        raise InputError("a specification file lists density matrices, or holds {'ball': ...} or {'hull': [...]}")
    V = QuantumSpec.finite([parse_matrix(m) for m in raw])
    if V.d != d:
        raise InputError(f"specification is {V.d}-dimensional, --dim is {d}")
    return V


def parse_block_state(raw) -> BlockDiagState:
    if not isinstance(raw, dict) or "p" not in raw or "E" not in raw:
        raise InputError("a thermal state file is {'p': [...], 'E': [...]}")
    try:
        return BlockDiagState(raw["p"], raw["E"])
    except ValueError as exc:
        raise InputError(str(exc)) from None


def parse_schmidt(raw) -> SchmidtVector:
    try:
        if isinstance(raw, dict) and "schmidt" in raw:
            return SchmidtVector(raw["schmidt"])
        if isinstance(raw, dict) and "amplitudes" in raw:
            return schmidt([[_entry(x) for x in row] for row in raw["amplitudes"]])
    except ValueError as exc:
        raise InputError(str(exc)) from None
    raise InputError("an LOCC state file holds 'schmidt' or 'amplitudes'")


def _abstract_spec(theory, raw: str):
    raw = raw.strip()
    if raw.lower() in ("omega", "Ω"):
        return theory.omega
    labels = [s.strip() for s in raw.split(",") if s.strip()]
    try:
        return theory.spec(*labels)
    except ValueError as exc:
        raise InputError(str(exc)) from None


# --------------------------------------------------------------------------
# commands


def _abstract(args, rep: Report) -> None:
    try:
        theory = load_theory(args.theory)
        C = load_currency(theory, args.currency)
    except (OSError, KeyError, TypeError) as exc:
        raise InputError(str(exc)) from None
    except ValueError as exc:
        raise InputError(str(exc)) from None
    op = args.op
    if op == "check":
        for r in (
            C.check_order(),
            C.check_value(),
            C.check_universality(),
            C.check_independence(symmetric=args.symmetric),
            C.check_conversion_theorem(),
            C.check_value_operational(),
        ):
            rep.check(r)
    elif op in ("cost", "yield"):
        V = _abstract_spec(theory, args.spec)
        if V not in C.target:
            C.target.append(V)
        rep.value(op, C.cost(V) if op == "cost" else C.yield_(V))
    elif op == "balance":
        V, W, K = (_abstract_spec(theory, s) for s in (args.source, args.dest, args.wallet))
        for X in (V, W):
            if X not in C.target:
                C.target.append(X)
        if K not in C.elements:
            raise InputError(f"wallet {theory.describe(K)} is not a currency element")
        rep.value("balance", C.balance(V, W, K, final=args.final))
    elif op == "fairness":
        cls, r = C.check_fairness()
        rep.extra["classification"] = cls
        rep.results.append({"name": "fairness", "value": cls, "witnesses": r.counterexamples})
        rep.indeterminate.extend(r.indeterminate)
    elif op == "pathology":
        found = C.detect_pathology()
        rep.results.append({"name": "pathology", "value": [p.to_dict(theory) for p in found]})
        for p in found:
            if not all(p.checks.values()):
                rep.violation = True


def _files(args) -> list[Path]:
    out = []
    for name in ("theory", "currency", "spec_file", "state", "other"):
        v = getattr(args, name, None)
        if v:
            out.append(Path(v))
    return out


def _unital(args, rep: Report) -> None:
    V = parse_quantum_spec(_load_json(args.spec_file), args.dim)
    try:
        if args.op == "cost":
            rep.value("cost", cost_unital(V, args.dim))
        elif args.op == "yield":
            rep.value("yield", yield_unital(V, args.dim))
        else:
            dW = args.wallet_dim if args.wallet_dim else 2 * args.dim
            layout = Stage2Layout(dW, args.dim)
            rep.value("cost", stage2_cost(V, layout))
            rep.value("yield", stage2_yield(V, layout))
    except ValueError as exc:
        if isinstance(exc, UnsupportedRepresentation):
            raise
        raise InputError(str(exc)) from None


def _thermal(args, rep: Report) -> None:
    s = parse_block_state(_load_json(args.state))
    if args.op == "lorenz":
        rep.value("lorenz", [list(p) for p in lorenz(s, args.beta).points])
    elif args.op == "tmaj":
        if not args.other:
            raise InputError("tmaj needs --other")
        t = parse_block_state(_load_json(args.other))
        try:
            rep.value("thermo_majorizes", thermo_majorizes(s, t, args.beta))
        except ValueError as exc:
            raise InputError(str(exc)) from None
    else:
        levels = args.levels if args.levels else max(2 * s.d, 2)
        ladder = Ladder(levels, args.spacing, args.beta)
        rep.value("work_cost", work_cost(s, ladder))
        rep.value("work_yield", work_yield(s, ladder))


def _locc(args, rep: Report) -> None:
    psi = parse_schmidt(_load_json(args.state))
    if args.op == "cost":
        rep.value("cost", bell_cost(psi))
    elif args.op == "yield":
        rep.value("yield", bell_yield(psi))
    else:
        N = args.bell if args.bell else max(1, bell_cost(psi))
        try:
            C = bell_currency(N, [psi])
        except ValueError as exc:
            raise InputError(str(exc)) from None
        for r in (C.check_order(), C.check_value(), C.check_universality(), C.check_independence()):
            rep.check(r)
        V = C.target[1]
        rep.value("cost", C.cost(V))
        rep.value("yield", C.yield_(V))


def _verify(args, rep: Report) -> None:
    seed = int(os.environ.get("RL_SEED", "0"))
    rep.extra["suite"] = args.suite
    if args.suite == "properties":
        rep.extra["seed"] = seed
    for case in run_suite(args.suite, seed):
        rep.results.append({"name": case.name, "verdict": case.ok, "expected": case.expected, "value": case.value})
        if not case.ok:
            rep.violation = True


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rtc", description="Currency checks, cost, yield and balance for resource theories.")
    sub = p.add_subparsers(dest="group", required=True, parser_class=_Parser)

    a = sub.add_parser("abstract", help="finite theories from JSON files")
    a.add_argument("op", choices=["check", "cost", "yield", "balance", "fairness", "pathology"])
    a.add_argument("--theory", required=True)
    a.add_argument("--currency", required=True)
    a.add_argument("--spec", help="comma-separated labels or 'omega'")
    a.add_argument("--from", dest="source")
    a.add_argument("--to", dest="dest")
    a.add_argument("--wallet")
    a.add_argument("--final", action="store_true", help="condition on the final wallet")
    a.add_argument("--symmetric", action="store_true", help="also check symmetric independence")

    u = sub.add_parser("unital", help="unital channels on a d-level system")
    u.add_argument("op", choices=["cost", "yield", "stage2"])
    u.add_argument("--dim", type=int, required=True)
    u.add_argument("--spec", dest="spec_file", required=True)
    u.add_argument("--wallet-dim", type=int)

    t = sub.add_parser("thermal", help="block-diagonal states under thermal operations")
    t.add_argument("op", choices=["lorenz", "tmaj", "work-cost"])
    t.add_argument("--state", required=True)
    t.add_argument("--other")
    t.add_argument("--beta", type=float, default=1.0)
    t.add_argument("--levels", type=int)
    t.add_argument("--spacing", type=float, default=1.0)

    lc = sub.add_parser("locc", help="pure bipartite states and Bell pairs")
    lc.add_argument("op", choices=["cost", "yield", "check"])
    lc.add_argument("--state", required=True)
    lc.add_argument("--bell", type=int, help="wallet capacity in Bell pairs")

    v = sub.add_parser("verify-all", help="run a bundled regression suite")
    v.add_argument("--suite", choices=list(SUITES), default="paper")
    return p


def _table(report: dict) -> str:
    lines = [f"{report['command']}  exit={report['exit_code']}"]
    for r in report["results"]:
        shown = r.get("verdict", r.get("value"))
        if isinstance(shown, (list, dict)):
            shown = json.dumps(_clean(shown))[:60]
        lines.append(f"  {r['name']:<40} {shown}")
    if report["indeterminate"]:
        lines.append(f"  indeterminate: {len(report['indeterminate'])}")
    return "\n".join(lines) + "\n"


def run(argv: Sequence[str] | None = None) -> tuple[dict, int]:
    """Parse ``argv``, run the command and return ``(report, exit_code)``."""
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    command = args.group + (f" {args.op}" if hasattr(args, "op") else "")
    for f in _files(args):
        if not f.exists():
            raise InputError(f"{f}: no such file")
    rep = Report(command, _digest(argv, _files(args)))
    handler = {"abstract": _abstract, "unital": _unital, "thermal": _thermal, "locc": _locc, "verify-all": _verify}
    try:
        handler[args.group](args, rep)
    except IndeterminateError as exc:
        rep.indeterminate.append(str(exc))
    out = rep.to_dict()
    return out, rep.exit_code


def main(argv: Sequence[str] | None = None) -> int:
    try:
        report, code = run(argv)
    except (InputError, DomainError, UnsupportedRepresentation) as exc:
        report = {"error": str(exc), "exit_code": EXIT_INPUT}
        code = EXIT_INPUT
        sys.stderr.write(f"rtc: error: {exc}\n")
    except ValueError as exc:
        report = {"error": str(exc), "exit_code": EXIT_INPUT}
        code = EXIT_INPUT
        sys.stderr.write(f"rtc: error: {exc}\n")
    except SystemExit as exc:
        if exc.code != EXIT_INPUT:
            raise
        report = {"error": "usage", "exit_code": EXIT_INPUT}
        code = EXIT_INPUT
    sys.stdout.write(_dumps(report) + "\n")
    if sys.stderr.isatty() and "results" in report:
        sys.stderr.write(_table(report))
    return code


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
