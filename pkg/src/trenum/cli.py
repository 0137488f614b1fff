"""Command line driver: search, merge, verify, tables."""

from __future__ import annotations

import argparse
import logging
import sys
import time
from collections import defaultdict
from fractions import Fraction
from multiprocessing import Pool

from . import polyarith as pa
from .bounds import DELTA_PROFILE, as_fraction
from .orders import maximal_order_discriminant, polred_canonical, subfield_tag
from .polyarith import MonicPolynomial
from .runs import (
    FORMAT_VERSION,
    RunManifest,
    bound_str,
    plan_shards,
    read_records,
    worker_count,
    write_records,
)
from .search import FieldRecord, StageCounters, enumerate_primitive, merge_dedup, sturm_real_root_count

log = logging.getLogger("trenum")

EXIT_OK, EXIT_ERROR, EXIT_REVIEW = 0, 1, 2


class CliError(Exception):
    pass


def _parse_shard(text: str | None) -> tuple[int, int] | None:
    if text is None:
        return None
    try:
        i, n = (int(x) for x in text.split("/"))
    except ValueError:
        raise CliError(f"bad shard '{text}', expected i/N") from None
    if not (n >= 1 and 0 <= i < n):
        raise CliError(f"shard index out of range: {text}")
    return i, n


def _bound(args) -> Fraction:
    if args.bound is not None:
        try:
            return as_fraction(args.bound)
        except (ValueError, ZeroDivisionError):
            raise CliError(f"bad bound '{args.bound}'") from None
    if args.delta_profile == "paper":
        if args.degree not in DELTA_PROFILE:
            raise CliError(f"no profile bound for degree {args.degree}")
        return DELTA_PROFILE[args.degree]
    raise CliError("give --bound or --delta-profile paper")


def _run_unit(unit):
    c = StageCounters()
    recs = enumerate_primitive(unit.degree, Fraction(unit.bound), unit, c)
    return recs, c


def _imprimitive_shard(n, B, bases, shard):
    from .relative import enumerate_imprimitive

    c = StageCounters()
    if shard is not None:
        i, count = shard
        picked = {}
        flat = [(d, r) for d in sorted(bases) for r in sorted(bases[d], key=FieldRecord.sort_key)]
        for j, (d, r) in enumerate(flat):
            picked.setdefault(d, [])
            if j % count == i:
                picked[d].append(r)
        for d in bases:
            picked.setdefault(d, [])
        bases = picked
    recs = enumerate_imprimitive(n, B, bases, counters=c)
    return recs, c


def cmd_search(args) -> int:
    n = args.degree
    if not 2 <= n <= 10:
        raise CliError("degree must be between 2 and 10")
    B = _bound(args)
    shard = _parse_shard(args.shard)
    t0 = time.time()
    counters = StageCounters()
    if args.imprimitive:
        from .relative import base_tabulation

        need = [d for d in range(2, n) if n % d == 0]
        bases: dict = {}
        for path in args.base or []:
            for r in read_records(path):
                bases.setdefault(r.degree, []).append(r)
        for d in need:
            if d not in bases:
                if not args.auto_base:
                    raise CliError(f"missing base tabulation for degree {d} (use --base or --auto-base)")
                bases[d] = base_tabulation(d, B)
        bases = {d: merge_dedup(bases[d]) for d in need}
        recs, counters = _imprimitive_shard(n, B, bases, shard)
        mode = "imprimitive"
    else:
        mode = "primitive"
        if shard is not None:
            units = [plan_shards(n, B, shard[1])[shard[0]]]
        else:
            units = plan_shards(n, B, max(1, worker_count()))
        results = []
        if len(units) > 1:
            with Pool(len(units)) as pool:
                results = pool.map(_run_unit, units)
        else:
            results = [_run_unit(units[0])]
        recs = []
        for r, c in results:
            recs.extend(r)
            counters.merge(c)
        recs = merge_dedup(recs)
    write_records(args.out, recs)
    sh = f"{shard[0]}/{shard[1]}" if shard else "0/1"
    RunManifest(n, bound_str(B), sh, mode, counters.as_dict(), round(time.time() - t0, 3)).write(args.out)
    print(f"degree {n}, bound {bound_str(B)}, {mode} shard {sh}: {len(recs)} fields "
          f"({counters.tested} candidates) -> {args.out}")
    return EXIT_REVIEW if any(r.review for r in recs) else EXIT_OK


def cmd_merge(args) -> int:
    recs = []
    for path in args.files:
        man = RunManifest.read(path)
        if man is not None and man.format_version != FORMAT_VERSION:
            raise CliError(f"{path}: format version {man.format_version}, expected {FORMAT_VERSION}")
        recs.extend(read_records(path))
    merged = merge_dedup(recs)
    write_records(args.out, merged)
    print(f"merged {len(args.files)} files: {len(merged)} fields -> {args.out}")
    return EXIT_REVIEW if any(r.review for r in merged) else EXIT_OK


def verify_polynomial(text: str) -> dict:
    """Invariants of the field defined by a polynomial (or its factorization)."""
    full = pa.parse_polynomial(text)
    if len(full) < 2:
        raise CliError("constant polynomial")
    if full[-1] != 1:
        raise CliError("polynomial must be monic")
    n = len(full) - 1
    out = {"input": pa.format_polynomial(full), "degree": n}
    fac = pa.factor(full)
    if len(fac) > 1 or fac[0][1] > 1:
        out["factorization"] = [(pa.format_polynomial(g), e) for g, e in fac]
        return out
    d = pa.discriminant(full)
    out["real_roots"] = sturm_real_root_count(full) if n > 1 else 1
    if n == 1:
        out.update(disc=1, root_disc="1", canonical="x", subfield_degree=1, subfield_disc=1)
        return out
    mo = maximal_order_discriminant(full, d)
    canon = polred_canonical(full, mo) if out["real_roots"] == n else None
    rec = FieldRecord(n, mo.field_disc, canon or MonicPolynomial.from_full(full))
    out["disc"] = mo.field_disc
    out["root_disc"] = rec.root_disc(20) if mo.field_disc > 0 else None
    out["canonical"] = str(canon) if canon is not None else None
    out["index"] = mo.index
    if canon is not None:
        sd, sdisc, spoly = subfield_tag(canon)
        out["subfield_degree"], out["subfield_disc"] = sd, sdisc
        out["subfield_poly"] = str(spoly) if spoly is not None else None
    return out


def cmd_verify(args) -> int:
    info = verify_polynomial(args.poly)
    if "factorization" in info:
        print(f"reducible: {info['input']}")
        for g, e in info["factorization"]:
            print(f"  ({g})^{e}" if e > 1 else f"  {g}")
        return EXIT_OK
    n = info["degree"]
    print(f"polynomial      {info['input']}")
    print(f"degree          {n}")
    print(f"real roots      {info['real_roots']} of {n}")
    print(f"d_F             {info['disc']}")
    if info.get("root_disc"):
        print(f"delta_F         {info['root_disc']}")
    if info.get("canonical"):
        print(f"canonical       {info['canonical']}")
        if info["subfield_degree"] == 1:
            print("subfield        none (primitive)")
        else:
            print(f"subfield        degree {info['subfield_degree']}, d_E = {info['subfield_disc']}"
                  f"  ({info['subfield_poly']})")
    else:
        print("not totally real")
    return EXIT_OK


def table_summary(recs, max_rd=None) -> list[dict]:
    rows = defaultdict(list)
    for r in recs:
        if max_rd is not None and Fraction(r.disc) > as_fraction(max_rd) ** r.degree:
            continue
        rows[r.degree].append(r)
    out = []
    for n in sorted(rows):
        rs = rows[n]
        best = min(rs, key=lambda r: r.disc)
        out.append({
            "degree": n,
            "count": len(rs),
            "primitive": sum(r.primitive for r in rs),
            "imprimitive": sum(not r.primitive for r in rs),
            "min_disc": best.disc,
            "min_root_disc": best.root_disc(4),
        })
    return out


def cmd_tables(args) -> int:
    recs = read_records(args.db)
    summary = table_summary(recs, args.max_rd)
    print(f"{'n':>3} {'#F':>6} {'prim':>6} {'imprim':>6} {'min d_F':>16} {'min delta_F':>12}")
    total = [0, 0, 0]
    for row in summary:
        print(f"{row['degree']:>3} {row['count']:>6} {row['primitive']:>6} {row['imprimitive']:>6} "
              f"{row['min_disc']:>16} {row['min_root_disc']:>12}")
        total[0] += row["count"]
        total[1] += row["primitive"]
        total[2] += row["imprimitive"]
    print(f"{'all':>3} {total[0]:>6} {total[1]:>6} {total[2]:>6}")
    if args.degree is not None:
        print()
        print(f"{'d_F':>14} {'delta_F':>9} {'[E:Q]':>5} {'d_E':>10}  polynomial (a_{args.degree - 1}, ..., a_0)")
        for r in recs:
            if r.degree != args.degree:
                continue
            if args.max_rd is not None and Fraction(r.disc) > as_fraction(args.max_rd) ** r.degree:
                continue
            coeffs = ", ".join(str(c) for c in reversed(r.poly.coeffs))
            sd = "-" if r.primitive else str(r.subfield_degree)
            se = "-" if r.primitive else str(r.subfield_disc)
            print(f"{r.disc:>14} {r.root_disc(6):>9} {sd:>5} {se:>10}  {coeffs}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="trenum", description="Tabulate totally real number fields of small root discriminant.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("search", help="run the search for one degree")
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--bound", help="root discriminant bound (exact decimal)")
    s.add_argument("--delta-profile", choices=["paper"], help="use the published bound for this degree")
    s.add_argument("--shard", help="i/N: run shard i of N")
    s.add_argument("--imprimitive", action="store_true", help="relative search over subfields")
    s.add_argument("--base", nargs="*", help="result files holding the subfield tabulations")
    s.add_argument("--auto-base", action="store_true", help="compute missing subfield tabulations")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_search)

    m = sub.add_parser("merge", help="merge result files")
    m.add_argument("files", nargs="+")
    m.add_argument("--out", required=True)
    m.set_defaults(func=cmd_merge)

    v = sub.add_parser("verify", help="invariants of one polynomial")
    v.add_argument("--poly", required=True, help='"x^3-3*x+1" or "1,0,-3,1"')
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("tables", help="summaries of a merged database")
    t.add_argument("db")
    t.add_argument("--degree", type=int)
    t.add_argument("--max-rd", help="only fields with root discriminant at most this")
    t.set_defaults(func=cmd_tables)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (CliError, pa.ContractError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
