"""Command line front end.

Exit codes: 0 when every requested check passes, 1 when one fails, 2 on a
usage error (including an unknown entry id).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import cache as gbcache
from .catalog import UnknownEntry, catalog, catalog_hash, catalog_json, expected_singularities, get_entry
from .embed import embed
from .family import discriminant, fiber_analysis, singular_fiber_locus, total_space_smoothness
from .report import SCHEMA, verify_all
from .singular import kernel_analysis, singularities
from .tangent import ledger, verify_cdd, verify_tdd

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--out", metavar="FILE", help="write the report here instead of standard output")
    p.add_argument("--cache-dir", metavar="PATH",
                   help=f"Groebner basis cache directory (default: ${gbcache.ENV_VAR})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dpverify", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="list or export the configurations")
    p.add_argument("action", choices=("list", "export", "hash"), nargs="?", default="list")
    _common(p)
    for name, text in (("embed", "image ideal and invariants"),
                       ("singular", "singular points and their types"),
                       ("jacobian-check", "hyperplanes in the Tjurina ideals"),
                       ("tangent", "h^0/h^1 ledger through the blow-ups")):
        p = sub.add_parser(name, help=text)
        p.add_argument("entry")
        _common(p)
    p = sub.add_parser("family", help="the degree-7 family over the t-line")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--t", dest="t", metavar="RATIONAL")
    mode.add_argument("--locus", action="store_true")
    mode.add_argument("--total-space", action="store_true")
    p.add_argument("--budget", type=float, default=600.0, help="seconds allowed for --total-space")
    _common(p)
    p = sub.add_parser("verify-all", help="run every check")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--heavy", action="store_true", help="include the total-space smoothness check")
    _common(p)
    return parser


# table rendering --------------------------------------------------------------

def _table(headers, rows) -> str:
    rows = [[str(c) for c in r] for r in rows]
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(headers)]
    line = lambda r: "  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip()
    return "\n".join([line(headers), line(["-" * w for w in widths])] + [line(r) for r in rows])


def _types(lams) -> str:
    return " ".join(f"A{lam}" for lam in lams) or "-"


# subcommands ------------------------------------------------------------------

def cmd_catalog(args):
    if args.action == "export":
        return True, json.loads(catalog_json()), catalog_json()
    if args.action == "hash":
        h = catalog_hash()
        return True, {"catalog_hash": h}, h
    rows = [(e.id, e.degree, len(e.points), _types(expected_singularities(e))) for e in catalog()]
    data = [{"id": r[0], "degree": r[1], "points": r[2], "singularities": r[3]} for r in rows]
    return True, data, _table(("id", "degree", "points", "singularities"), rows)


def cmd_embed(args):
    res = embed(get_entry(args.entry))
    data = res.to_json()
    inv = res.invariants
    text = "\n".join([f"{res.entry_id}: dim {inv.dim}, degree {inv.degree}, quadric generated {inv.quadric_generated}",
                      "ideal:"] + [f"  {g}" for g in data["ideal"]] +
                     ["singular points:"] + [f"  [{':'.join(p['point'])}]" for p in data["singular_points"]])
    data["pass"] = inv.ok
    return inv.ok, data, text


def cmd_singular(args):
    entry = get_entry(args.entry)
    reports = [r for r, _ in singularities(entry)]
    types = sorted(r.type for r in reports)
    ok = types == sorted(f"A{lam}" for lam in entry.expected_singularities)
    data = {"id": entry.id, "points": [r.to_json() for r in reports], "expected": list(entry.expected_singularities),
            "pass": ok}
    rows = [("[" + ":".join(str(x) for x in r.point) + "]", r.type, r.tjurina, r.local_equation.poly)
            for r in reports]
    return ok, data, _table(("point", "type", "tjurina", "local equation"), rows)


def cmd_jacobian(args):
    res = kernel_analysis(get_entry(args.entry))
    data = res.to_json()
    text = f"{res.entry_id}: dim_total {res.dim_total}, dim_kernel {res.dim_kernel}, expected {res.expected}"
    return res.passed, data, text


def cmd_tangent(args):
    entry = get_entry(args.entry)
    led = ledger(entry)
    steps = verify_tdd(entry, led)
    ok = all(s.passed for s in steps) and verify_cdd(entry, led)
    data = {"id": entry.id, "steps": [s.to_json() for s in led.steps], "final_h1": led.final_h1,
            "expected_sum_lambda": entry.sum_lambda, "pass": ok}
    rows = [(s.step, s.point, s.type, s.h0, s.h1, "; ".join(s.to_json()["conditions"])) for s in led.steps]
    text = _table(("step", "point", "type", "h0", "h1", "new conditions"), rows)
    return ok, data, text + f"\nfinal h1 = {led.final_h1} (expected {entry.sum_lambda})"


def cmd_family(args):
    if args.t is not None:
        try:
            t0 = Fraction(args.t)
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"not a rational number: {args.t!r}") from None
        rep = fiber_analysis(t0)
        singular = discriminant().evaluate([t0]) == 0
        ok = rep.degree == 7 and rep.status == ("singular" if singular else "smooth") and rep.specialization_ok
        data = rep.to_json()
        data["pass"] = ok
        text = f"t = {t0}: {rep.status}, degree {rep.degree}"
        for r in rep.singularities:
            text += f"\n  [{':'.join(str(x) for x in r.point)}] {r.type}" + (" (derived)" if rep.derived_type else "")
        return ok, data, text
    if args.locus:
        loc = singular_fiber_locus()
        ok = loc.conclusive and [str(v) for v in loc.values] == ["-4", "0"] and not loc.irrational
        data = loc.to_json()
        data["pass"] = ok
        return ok, data, "singular fibers at t in {" + ", ".join(str(v) for v in loc.values) + "}"
    res = total_space_smoothness(True, args.budget)
    data = res.to_json()
    data["pass"] = res.status != "fail"
    return res.status != "fail", data, f"total space: {res.status} ({res.seconds:.1f} s)"


def cmd_verify_all(args):
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    rep = verify_all(args.jobs, args.heavy, args.cache_dir or gbcache.from_environment())
    rows = [(c.id, "pass" if c.passed else "FAIL", c.elapsed_ms) for c in rep.checks]
    summary = f"{sum(c.passed for c in rep.checks)}/{len(rep.checks)} checks passed in {rep.elapsed_ms / 1000:.1f} s"
    return rep.passed, rep.to_json(), _table(("check", "result", "ms"), rows) + "\n" + summary


COMMANDS = {"catalog": cmd_catalog, "embed": cmd_embed, "singular": cmd_singular,
            "jacobian-check": cmd_jacobian, "tangent": cmd_tangent, "family": cmd_family,
            "verify-all": cmd_verify_all}


def _emit(args, data, text) -> None:
    if args.format == "json":
        if isinstance(data, dict) and "schema" not in data:
            data = {"schema": SCHEMA, **data}
        out = json.dumps(data, indent=2)
    else:
        out = text
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out + "\n")
    else:
        print(out)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    gbcache.activate(args.cache_dir or gbcache.from_environment())
    try:
        ok, data, text = COMMANDS[args.command](args)
    except (UnknownEntry, UsageError) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        print(f"dpverify: error: {msg}", file=sys.stderr)
        return EXIT_USAGE
    _emit(args, data, text)
    return EXIT_OK if ok else EXIT_FAIL


def main() -> None:
    sys.exit(run())
