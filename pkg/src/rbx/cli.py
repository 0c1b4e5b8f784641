"""Command-line front end: ``rbx <command> [--format text|json]``.

Exit status is 0 iff the command's result is green.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import campaigns
from .catalog import build_catalog, get_entry
from .exactlinalg import format_scalar, parse_scalar
from .morphisms import MorphismError, conjugate, parse_morphism_expr
from .operators import export_operator, fingerprint, parse_operator, phi, rb_check


def _emit(args, text: str, data: dict) -> None:
    if args.format == "json":
        print(json.dumps(data, sort_keys=True, indent=2, default=campaigns._jsonable))
    else:
        print(text)


def _campaign(fn):
    def run(args) -> int:
        report = fn()
        if args.format == "json":
            print(report.to_json(with_timing=not args.no_timing))
        else:
            print(report.to_text(verbose=args.verbose))
        return 0 if report.green else 1
    return run


def _operator_data(R, with_fingerprint: bool = True) -> dict:
    res = rb_check(R)
    data = {
        "name": R.name,
        "context": R.context.name,
        "weight": format_scalar(R.weight),
        "images": R.images_text(),
        "rb": res.ok,
    }
    if not res.ok:
        data["witness"] = list(res.witness)
    if with_fingerprint and res.ok and R.context.unit is not None and R.weight == 1:
        data["fingerprint"] = fingerprint(R).summary()
    return data


def _operator_text(data: dict) -> str:
    lines = [f"{data['name']} on {data['context']} (weight {data['weight']})"]
    lines += [f"  {s}" for s in data["images"]]
    lines.append(f"  rb_check: {'ok' if data['rb'] else 'FAILS at ' + str(data.get('witness'))}")
    fp = data.get("fingerprint")
    if fp:
        lines.append(f"  six-tuple: {tuple(fp['six_tuple'])}")
        lines.append(f"  min poly: {fp['min_poly']}")
        lines.append(f"  trace R(1): {fp['trace_R1']}")
        for key in ("ker", "ker_prime", "image"):
            p = fp[key]
            if p:
                lines.append(f"  {key}: dim {p['dim']}, radical {p['radical_dim']}, "
                             f"ann {p['ann_l_dim']}/{p['ann_r_dim']}, unital {p['unital']}")
    return "\n".join(lines)


def cmd_show(args) -> int:
    try:
        entry = get_entry(args.id)
    except KeyError as exc:
        print(exc.args[0], file=sys.stderr)
        return 2
    if entry.is_family:
        items = [_operator_data(R) for _, R in entry.instances()]
        _emit(args, "\n".join(_operator_text(d) for d in items), {"id": entry.id, "instances": items})
        return 0 if all(d["rb"] for d in items) else 1
    data = _operator_data(entry.operator) | {"id": entry.id, "tags": sorted(entry.tags)}
    if entry.note:
        data["note"] = entry.note
    text = _operator_text(data) + (f"\n  note: {entry.note}" if entry.note else "")
    _emit(args, text, data)
    return 0 if data["rb"] else 1


def cmd_export(args) -> int:
    blocks, items = [], []
    for entry in build_catalog():
        for params, R in entry.instances():
            name = entry.id + ("(" + ",".join(format_scalar(p) for p in params) + ")" if params else "")
            blocks.append(export_operator(R, name))
            items.append({"id": name, "operator": export_operator(R, name)})
    _emit(args, "\n".join(blocks).rstrip("\n"), {"entries": items})
    return 0


def cmd_conjugate(args) -> int:
    try:
        entry = get_entry(args.id)
    except KeyError as exc:
        print(exc.args[0], file=sys.stderr)
        return 2
    if entry.is_family:
        print("conjugate needs a fixed entry, not a family", file=sys.stderr)
        return 2
    try:
        psi = parse_morphism_expr(args.morph, entry.context)
    except MorphismError as exc:
        print(f"bad morphism: {exc}", file=sys.stderr)
        return 2
    X = conjugate(entry.operator, psi.inverse() if args.inverse else psi)
    if args.phi:
        X = phi(X)
    X = X.renamed(f"{entry.label}^{args.morph}")
    data = _operator_data(X)
    data["source"] = entry.id
    data["morphism"] = args.morph
    ok = data["rb"]
    text = _operator_text(data)
    if args.expect:
        target = get_entry(args.expect).operator
        data["equals_expected"] = target.matrix == X.matrix
        ok = ok and data["equals_expected"]
        text += f"\n  equals {args.expect}: {data['equals_expected']}"
    _emit(args, text, data)
    return 0 if ok else 1


def cmd_check(args) -> int:
    try:
        R = parse_operator(Path(args.file).read_text())
    except (OSError, ValueError, KeyError) as exc:
        print(f"cannot read operator: {exc}", file=sys.stderr)
        return 2
    data = _operator_data(R)
    _emit(args, _operator_text(data), data)
    return 0 if data["rb"] else 1


def _grid(text: str | None):
    return None if text is None else tuple(parse_scalar(t) for t in text.split(","))


def cmd_search(args) -> int:
    from . import search

    kw = {"weight": parse_scalar(args.weight)}
    if args.grid:
        kw["grid"] = _grid(args.grid)
    if args.algebra == "f3":
        res = search.search_f3(**kw)
    else:
        workers = args.workers or 1
        res = search.search_m2(budget_sec=args.budget_sec, workers=workers, **kw)
    body = res.summary(with_hits=args.hits)
    if args.format == "json":
        out = {"report": body}
        if not args.no_timing:
            out["timing"] = res.timing()
        print(json.dumps(out, sort_keys=True, indent=2))
    else:
        lines = [f"search {res.context}: {'GREEN' if res.green else 'RED'}  candidates={res.candidates} "
                 f"scanned={res.scanned} complete={res.complete} hits={len(res.hits)}  "
                 f"({res.elapsed:.2f}s, {res.backend}, {res.workers} worker(s))",
                 f"  grid {{{','.join(body['grid'])}}}, weight {body['weight']}"]
        lines += [f"  {k}: {v}" for k, v in body["buckets"].items()]
        lines += [f"    {k}: {v}" for k, v in body["labels"].items()]
        lines.append(f"  note: {body['note']}")
        for h in res.unmatched:
            lines.append(f"  unmatched: {h.summary()['matrix']}")
        print("\n".join(lines))
    return 0 if res.green else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    common.add_argument("--no-timing", action="store_true", default=argparse.SUPPRESS,
                        help="omit timing from JSON output")

    p = argparse.ArgumentParser(prog="rbx", description="Verify Rota-Baxter operators on M2, M3 and F3.")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--no-timing", action="store_true", help="omit timing from JSON output")
    sub = p.add_subparsers(dest="command", required=True)

    for name, fn, help_ in (("verify-catalog", campaigns.verify_catalog, "check every catalog entry"),
                            ("replay-conjugations", campaigns.replay_conjugations, "replay explicit conjugations"),
                            ("orbit-report", campaigns.orbit_report, "separate all M3 entry pairs")):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("-v", "--verbose", action="store_true", help="list passing checks too")
        sp.set_defaults(func=_campaign(fn))

    sp = sub.add_parser("search", parents=[common], help="exhaustive grid search")
    sp.add_argument("algebra", choices=("f3", "m2"))
    sp.add_argument("--grid", help="comma-separated rationals, default -1,0,1")
    sp.add_argument("--weight", default="1")
    sp.add_argument("--budget-sec", type=float, default=None, help="m2 only: stop after this many seconds")
    sp.add_argument("--workers", type=int, default=None, help="m2 only: worker processes (default 1)")
    sp.add_argument("--hits", action="store_true", help="include every hit in JSON output")
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("show", parents=[common], help="images and fingerprint of a catalog entry")
    sp.add_argument("id")
    sp.set_defaults(func=cmd_show)

    cat = sub.add_parser("catalog", help="catalog utilities")
    csub = cat.add_subparsers(dest="catalog_command", required=True)
    sp = csub.add_parser("show", parents=[common])
    sp.add_argument("id")
    sp.set_defaults(func=cmd_show)
    sp = csub.add_parser("export", parents=[common])
    sp.set_defaults(func=cmd_export)

    sp = sub.add_parser("conjugate", parents=[common], help="psi^-1 R psi for a catalog entry")
    sp.add_argument("id")
    sp.add_argument("--morph", required=True, help="e.g. 'phi23*rho:a=1,b=1,c=1*phi23'")
    sp.add_argument("--inverse", action="store_true", help="conjugate by the inverse map instead")
    sp.add_argument("--phi", action="store_true", help="apply phi to the result")
    sp.add_argument("--expect", help="catalog id the result should equal")
    sp.set_defaults(func=cmd_conjugate)

    sp = sub.add_parser("check", parents=[common], help="rb_check an operator file")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_check)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    args.verbose = getattr(args, "verbose", False)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
