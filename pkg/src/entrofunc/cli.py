"""Command line front end.

Exit codes: 0 success, 1 a bridge or law check failed, 2 the input was
rejected, 3 a resource ceiling was hit.  Diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Optional, Sequence

from entrofunc import __version__
from entrofunc.bridges import load_case, registry, run_bridge
from entrofunc.core.estimate import EntropyEstimate, _jsonable
from entrofunc.errors import (BridgeFailure, ContractivityError, InapplicableError,
                              NotFiniteToOneError, ResourceLimitError, SpecError)
from entrofunc.logvalue import LogValue
from entrofunc.specs import FlowSpec, check_props, evaluate, load_spec

LAWS = ("log_law", "inversion", "product_max", "coproduct_sum")


def _num(x: Fraction):
    return x.numerator if x.denominator == 1 else str(x)


def render_value(v: LogValue) -> Any:
    """``{q, m}`` (plus ``count`` when present), ``{count}``, ``"inf"`` or a float."""
    if v.is_infinite:
        return "inf"
    if not v.is_exact:
        return float(f"{float(v):.12g}")
    if v.is_zero:
        return {"q": 0, "m": 1}
    if v.is_pure_count:
        return {"count": _num(v.count_part)}
    q, m = LogValue(logs=v.log_terms).qm()
    out: dict = {"q": _num(q), "m": _num(m)}
    if v.count_part:
        out["count"] = _num(v.count_part)
    return out


def _float(v: LogValue):
    f = float(v)
    return "inf" if f == float("inf") else float(f"{f:.12g}")


def _entry(v: LogValue) -> dict:
    r = render_value(v)
    out = dict(r) if isinstance(r, dict) else {"value": r}
    out["float"] = _float(v)
    return out


def entropy_report(spec: FlowSpec, est: EntropyEstimate) -> dict:
    return {
        "name": spec.name,
        "kind": spec.kind,
        "value": render_value(est.value),
        "value_float": _float(est.value),
        "classification": est.classification,
        "witness_restricted": est.witness_restricted,
        "certificates": _jsonable(est.certificates),
        "c": [_entry(v) for v in est.c],
        "params": {"n_max": spec.n_max, "window": spec.window},
    }


def trace_rows(est: EntropyEstimate) -> list[tuple[int, str, str]]:
    return [(n, str(v), f"{float(v) / n:.12g}") for n, v in enumerate(est.c, start=1)]


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _spec(args) -> FlowSpec:
    spec = load_spec(args.spec)
    return spec.with_params(n_max=args.n_max, window=args.window, cap_bits=args.cap_bits)


def cmd_entropy(args) -> int:
    spec = _spec(args)
    est = evaluate(spec)
    if args.format == "tsv":
        sys.stdout.write("name\tvalue\tvalue_float\tclassification\twitness_restricted\n")
        sys.stdout.write(f"{spec.name}\t{est.value}\t{_float(est.value)}\t{est.classification}\t"
                         f"{str(est.witness_restricted).lower()}\n")
    else:
        sys.stdout.write(_dump(entropy_report(spec, est)))
    return 0


def cmd_trace(args) -> int:
    spec = _spec(args)
    rows = trace_rows(evaluate(spec))
    if args.format == "json":
        sys.stdout.write(_dump([{"n": n, "c": c, "ratio": float(r)} for n, c, r in rows]))
    else:
        sys.stdout.write("n\tc_n\tc_n/n\n")
        for n, c, r in rows:
            sys.stdout.write(f"{n}\t{c}\t{r}\n")
    return 0


def cmd_bridge(args) -> int:
    if args.action == "list":
        for case in registry():
            sys.stdout.write(f"{case.name}\t{case.kind}\t{case.mode}\n")
        return 0
    if args.all:
        cases = registry()
    elif args.case:
        cases = [load_case(args.case)]
    else:
        raise SpecError("bridge run needs a case name, a case file or --all")
    verdicts = [run_bridge(c, args.n_max).to_json() for c in cases]
    if args.format == "tsv":
        sys.stdout.write("case\tstatus\tn\n")
        for v in verdicts:
            sys.stdout.write(f"{v['case']}\t{v['status']}\t{'' if v['n'] is None else v['n']}\n")
    else:
        sys.stdout.write(_dump(verdicts[0] if len(verdicts) == 1 and not args.all else verdicts))
    return 1 if any(v["status"] == "fail" for v in verdicts) else 0


def cmd_props(args) -> int:
    spec = _spec(args)
    other = load_spec(args.other) if args.other else None
    laws = args.law or ["log_law"]
    out = []
    for law in laws:
        ks = (args.k or [2]) if law == "log_law" else [1]
        for k in ks:
            out.append(check_props(spec, law, k, other).to_json())
    if args.format == "tsv":
        sys.stdout.write("law\tstatus\n")
        for v in out:
            sys.stdout.write(f"{v['law']}\t{v['status']}\n")
    else:
        sys.stdout.write(_dump({"name": spec.name, "laws": out}))
    return 1 if any(v["status"] == "fails" for v in out) else 0


def cmd_validate(args) -> int:
    with open(args.file, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SpecError(f"malformed JSON in {args.file}: {exc}") from exc
    from entrofunc.bridges import KINDS, BridgeCase
    from entrofunc.specs import parse_spec
    if isinstance(data, dict) and data.get("kind") in KINDS:
        BridgeCase.from_json(data)
        what = "bridge_case"
    else:
        parse_spec(data)
        what = "flow_spec"
    sys.stdout.write(_dump({"file": args.file, "valid": True, "schema": what}))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n-max", type=int, help="trajectory length")
    common.add_argument("--window", type=int, help="tail window for slope detection")
    common.add_argument("--cap-bits", type=int, help="ceiling on element size")

    p = argparse.ArgumentParser(prog="entrofunc", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("entropy", parents=[common], help="classify the entropy of a flow spec")
    e.add_argument("spec")
    e.add_argument("--format", choices=("json", "tsv"), default="json")
    e.set_defaults(func=cmd_entropy)

    t = sub.add_parser("trace", parents=[common], help="per-n table of trajectory norms")
    t.add_argument("spec")
    t.add_argument("--format", choices=("json", "tsv"), default="tsv")
    t.set_defaults(func=cmd_trace)

    b = sub.add_parser("bridge", parents=[common], help="run or list bridge cases")
    b.add_argument("action", choices=("run", "list"))
    b.add_argument("case", nargs="?", help="registered case name or path to a case file")
    b.add_argument("--all", action="store_true", help="run every registered case")
    b.add_argument("--format", choices=("json", "tsv"), default="json")
    b.set_defaults(func=cmd_bridge)

    r = sub.add_parser("props", parents=[common], help="check structural laws on a flow spec")
    r.add_argument("spec")
    r.add_argument("--law", action="append", choices=LAWS)
    r.add_argument("--k", action="append", type=int, help="power for log_law (repeatable)")
    r.add_argument("--other", help="second spec for product_max and coproduct_sum")
    r.add_argument("--format", choices=("json", "tsv"), default="json")
    r.set_defaults(func=cmd_props)

    v = sub.add_parser("validate", help="schema-check a flow spec or bridge case")
    v.add_argument("file")
    v.set_defaults(func=cmd_validate)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ResourceLimitError, MemoryError, RecursionError) as exc:
        print(f"entrofunc: resource limit: {exc}", file=sys.stderr)
        return 3
    except BridgeFailure as exc:
        print(f"entrofunc: bridge failed: {exc}", file=sys.stderr)
        return 1
    except (SpecError, NotFiniteToOneError, InapplicableError, ContractivityError,
            FileNotFoundError) as exc:
        print(f"entrofunc: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
