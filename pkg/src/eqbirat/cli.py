"""Command-line front end.

Exit codes: 0 on success, 1 on any error (bad arguments, invalid input,
inadmissible center, invariant drift), and 2 when ``feasible`` decides a
system has no solution.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import serialize as ser
from .atoms import AtomCatalog, InconsistentForcing, catalog_low_dim, feasibility, obstruction_report
from .blowup import BlowupCenter, InadmissibleCenter, admissible_centers, blowup, fuzz_sequence
from .invariants import InvariantKind, InvariantMismatch, breakdown
from .locus import EXAMPLE_FAMILIES, build_example, validate
from .symbols import (
    BudgetExceeded,
    DualGroup,
    SymbolSum,
    UnknownSymbol,
    beta,
    build_presentation,
    class_of,
    format_symbol,
    make_symbol,
)


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits 2 by default; 2 is reserved for "infeasible"
        self.print_usage(sys.stderr)
        raise CliError(message)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise CliError(f"expected comma-separated integers, got {text!r}") from None


def _group_from(args) -> DualGroup:
    if args.cyclic is not None:
        return DualGroup.cyclic(args.cyclic)
    if args.orders is not None:
        return DualGroup(tuple(_int_list(args.orders)))
    raise CliError("give --cyclic M or --orders M1,M2,...")


def _load(path: str):
    c = ser.load_config(path)
    problems = validate(c)
    if problems:
        raise CliError(f"{path}: invalid configuration: " + "; ".join(problems))
    return c


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_group(args) -> int:
    g = _group_from(args)
    pres = build_presentation(g, args.n, args.budget)
    if args.json:
        _emit(ser.dumps({
            "group": list(g.orders),
            "n": args.n,
            "generators": len(pres.symbols),
            "relations": pres.n_relations,
            "free_rank": pres.structure.free_rank,
            "torsion": list(pres.structure.torsion),
            "structure": str(pres.structure),
        }))
    else:
        _emit(str(pres.structure))
    return 0


def _parse_term(text: str, g: DualGroup) -> tuple[int, tuple]:
    coeff, star, body = text.partition("*")
    if not star:
        coeff, body = "1", text
    try:
        k = int(coeff)
    except ValueError:
        raise CliError(f"bad coefficient in {text!r}") from None
    body = body.strip().strip("[]")
    parts = [x for x in body.split(",") if x.strip()]
    try:
        if g.is_cyclic and len(g.orders) == 1:
            entries = [int(x) for x in parts]
        else:
            entries = [tuple(int(y) for y in x.split("/")) for x in parts]
        sym = make_symbol(entries, g)
    except ValueError as e:
        raise CliError(f"bad symbol {text!r}: {e}") from None
    return k, sym


def cmd_symbol_reduce(args) -> int:
    g = _group_from(args)
    terms = [_parse_term(t, g) for t in args.terms]
    lengths = {len(s) for _, s in terms}
    if len(lengths) != 1:
        raise CliError("all symbols must have the same length")
    n = lengths.pop()
    pres = build_presentation(g, n, args.budget)
    total = SymbolSum((s, k) for k, s in terms)
    cls = class_of(total, pres)
    _emit(ser.dumps({
        "group": list(g.orders),
        "n": n,
        "sum": [[k, format_symbol(s)] for s, k in total.items()],
        "structure": str(pres.structure),
        "class": cls.to_json(),
        "zero": cls.is_zero,
    }))
    return 0


def cmd_beta(args) -> int:
    c = _load(args.config)
    pres = build_presentation(DualGroup.cyclic(c.p), c.dim, args.budget)
    cls = beta(c, pres)
    _emit(ser.dumps({"structure": str(pres.structure), "class": cls.to_json(), "zero": cls.is_zero}))
    return 0


def _kind_from(args) -> InvariantKind:
    text = args.kind
    if text == "combined" and args.g is not None:
        text = f"combined:{args.g}"
    elif text == "fine" and args.label is not None:
        text = f"fine:{args.label}"
    try:
        return InvariantKind.parse(text)
    except ValueError as e:
        raise CliError(str(e)) from None


def cmd_invariant(args) -> int:
    c = _load(args.config)
    kind = _kind_from(args)
    if kind.name == "beta":
        return cmd_beta(args)
    terms = breakdown(c, kind)
    value = sum(v for _, v in terms)
    if args.json:
        _emit(ser.dumps({"kind": str(kind), "value": value, "terms": [[d, v] for d, v in terms]}))
    else:
        lines = [f"{kind} = {value}"]
        lines += [f"  {v:+d}  {d}" for d, v in terms]
        _emit("\n".join(lines))
    return 0


def _report_json(rep) -> dict:
    return {
        "case": rep.case_label,
        "center": rep.center.to_json(),
        "subcases": list(rep.subcases),
        "deltas": rep.deltas,
    }


def cmd_blowup(args) -> int:
    c = _load(args.config)
    if args.list:
        _emit(ser.dumps([ctr.to_json() for ctr in admissible_centers(c)]))
        return 0
    if args.center is None:
        raise CliError("give --center JSON or --list")
    try:
        raw = json.loads(args.center)
    except json.JSONDecodeError as e:
        raise CliError(f"--center is not valid JSON: {e}") from None
    rep = blowup(c, BlowupCenter.from_json(raw))
    out = _report_json(rep)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(ser.dumps(ser.config_to_json(rep.after)))
    else:
        out["after"] = ser.config_to_json(rep.after)
    _emit(ser.dumps(out))
    return 0


def _value_json(v) -> object:
    return v.to_json() if hasattr(v, "to_json") else v


def cmd_fuzz(args) -> int:
    c = _load(args.config)
    checks = [x.strip() for x in args.check.split(",") if x.strip()]
    if not checks:
        raise CliError("--check needs at least one invariant kind")
    rep = fuzz_sequence(c, args.steps, args.seed, checks)
    last = rep.values[-1] if rep.values else rep.initial
    out = {
        "format_version": ser.FORMAT_VERSION,
        "seed": rep.seed,
        "steps": rep.steps,
        "steps_done": rep.steps_done,
        "checks": list(rep.checks),
        "ok": rep.ok,
        "histogram": dict(sorted(rep.histogram.items())),
        "initial_values": {k: _value_json(v) for k, v in rep.initial.items()},
        "final_values": {k: _value_json(v) for k, v in last.items()},
    }
    if rep.drift is not None:
        d = rep.drift
        out["drift"] = {
            "step": d.step,
            "kind": d.kind,
            "expected": _value_json(d.expected),
            "found": _value_json(d.found),
            **_report_json(d.report),
        }
    _emit(ser.dumps(out))
    return 0 if rep.ok else 1


def cmd_feasible(args) -> int:
    target = _int_list(args.target)
    basis = [_int_list(b) for b in args.basis or []]
    forced = []
    for f in args.forced or []:
        idx, sep, m = f.partition(":")
        if not sep:
            raise CliError(f"--forced expects INDEX:MIN, got {f!r}")
        forced.append((int(idx), int(m)))
    res = feasibility(target, basis, forced)
    out = {"verdict": res.verdict, "bounds": list(res.bounds)}
    if res.feasible:
        out["witness"] = list(res.witness)
    else:
        out["certificate"] = res.certificate
    _emit(ser.dumps(out))
    return 0 if res.feasible else 2


def cmd_obstruct(args) -> int:
    with open(args.file, encoding="utf-8") as fh:
        data = json.load(fh)
    p = int(data.get("p", 2))
    catalog: AtomCatalog = catalog_low_dim(p)
    atoms = [(a["name"], ser.atom_from_json(a, a["name"])) for a in data["atoms"]]
    forced = [(f["atom"], ser.atom_from_json(f, f"forced {f['atom']}")) for f in data.get("forced", [])]
    rep = obstruction_report(atoms, catalog, forced)
    _emit(ser.dumps({
        "obstructed": rep.obstructed,
        "basis": list(rep.basis_names),
        "atoms": [
            {
                "name": v.name,
                "remainder": list(v.remainder),
                "obstructed": v.obstructed,
                **({"witness": list(v.result.witness)} if v.result.feasible else {"certificate": v.result.certificate}),
            }
            for v in rep.verdicts
        ],
        "narrative": rep.narrative.splitlines(),
    }))
    return 0


def cmd_example(args) -> int:
    params = {}
    if args.k is not None:
        params["k"] = args.k
    if args.variant is not None:
        params["variant"] = args.variant
    if args.g is not None:
        params["g"] = args.g
    if args.p is not None:
        params["p"] = args.p
    if args.line_action is not None:
        params["line_action"] = args.line_action
    c = build_example(args.family, **params)
    text = ser.dumps(ser.config_to_json(c))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        _emit(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="eqbirat", description="Equivariant birational invariants from fixed-locus data.")
    ap.add_argument("--budget", type=int, default=None, help="enumeration cap (default: $EI_BUDGET or 20000)")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def group_flags(p):
        p.add_argument("--cyclic", type=int, help="cyclic group order")
        p.add_argument("--orders", help="comma-separated cyclic factor orders")

    p = sub.add_parser("group", help="structure of B_n(G)")
    group_flags(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("symbol", help="symbol utilities")
    ssub = p.add_subparsers(dest="symbol_command", required=True, parser_class=_Parser)
    r = ssub.add_parser("reduce", help="class of a formal symbol sum")
    group_flags(r)
    r.add_argument("terms", nargs="+", help="terms like 2*1,1 or 1/0,0/1 for product groups")
    r.set_defaults(func=cmd_symbol_reduce)

    p = sub.add_parser("beta", help="class of the fixed-locus symbol sum")
    p.add_argument("config")
    p.set_defaults(func=cmd_beta)

    p = sub.add_parser("invariant", help="evaluate an invariant with its per-term breakdown")
    p.add_argument("config")
    p.add_argument("--kind", required=True, help="I, J, K, combined[:g], fine[:label], beta")
    p.add_argument("--g", type=int)
    p.add_argument("--label")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_invariant)

    p = sub.add_parser("blowup", help="apply one blowup")
    p.add_argument("config")
    p.add_argument("--center", help='JSON, e.g. {"kind": "isolated_fixed_point", "index": 0}')
    p.add_argument("--out", help="write the new configuration here")
    p.add_argument("--list", action="store_true", help="list admissible centers")
    p.set_defaults(func=cmd_blowup)

    p = sub.add_parser("fuzz", help="random blowup sequence with invariant checks")
    p.add_argument("config")
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--check", required=True, help="comma-separated kinds, e.g. J,combined:4,beta")
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("feasible", help="nonnegative integer combination search")
    p.add_argument("--target", required=True)
    p.add_argument("--basis", action="append")
    p.add_argument("--forced", action="append", help="INDEX:MIN")
    p.set_defaults(func=cmd_feasible)

    p = sub.add_parser("obstruct", help="atom obstruction report from a JSON atom table")
    p.add_argument("file")
    p.set_defaults(func=cmd_obstruct)

    p = sub.add_parser("example", help="emit a built-in example configuration")
    p.add_argument("family", choices=EXAMPLE_FAMILIES)
    p.add_argument("--k", type=int)
    p.add_argument("--variant")
    p.add_argument("--g", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--line-action", dest="line_action", choices=("trivial", "nontrivial"))
    p.add_argument("--out")
    p.set_defaults(func=cmd_example)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (CliError, ser.FormatError, InadmissibleCenter, InvariantMismatch, BudgetExceeded,
            UnknownSymbol, InconsistentForcing, ValueError, KeyError, OSError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"eqbirat: error: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
