"""Command-line front end.

Family flags take the group order, except ``SL2`` which takes the prime p:
``--family D 6`` is the dihedral group with 6 elements and ``--family V 24``
is V8k with k = 3.  Strata given to ``optimize``,
``bounds`` and ``simulate --stratum`` are merged strata (a class together with
its inverse class), as listed by ``chartable``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import reproduce as repro
from .characters import (
    CharacterError,
    character_table_numeric,
    eigenmatrices,
    family_character_table,
    intersection_numbers_by_characters,
    intersection_numbers_by_counting,
    zeta_table,
)
from .dynamics import DynamicsError, amplitudes, check_dual_couplings
from .groups import FamilySpec, InvalidGroupError, build_family, conjugacy_classes, load_table
from .optimize import (
    OptimizeError,
    bound_conservation,
    bound_product,
    cross_strata_optimize,
    optimal_amplitude,
    same_stratum_optimum,
)
from .scheme import (
    SchemeError,
    adjacency_matrices,
    bose_mesner_check,
    idempotents,
    spectral_residual,
    verify_axioms,
)

FAMILY_ALIASES = {
    "d": "dihedral", "dihedral": "dihedral",
    "z": "cyclic", "c": "cyclic", "cyclic": "cyclic",
    "v": "v8k", "v8k": "v8k",
    "sl2": "sl2", "sl": "sl2",
}


class CliError(Exception):
    pass


def fmt(x) -> str:
    if isinstance(x, (complex, np.complexfloating)):
        if abs(x.imag) < 1e-12:
            return fmt(x.real)
        return f"{x.real:.12g}{x.imag:+.12g}j"
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.12g}"
    return str(x)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (complex, np.complexfloating)):
        return [float(f"{x.real:.12g}"), float(f"{x.imag:.12g}")]
    if isinstance(x, (float, np.floating)):
        return float(f"{float(x):.12g}")
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


# -- group source -------------------------------------------------------------

def family_spec(name: str, value: str) -> FamilySpec:
    fam = FAMILY_ALIASES.get(name.lower())
    if fam is None:
        raise CliError(f"unknown family {name!r}; use one of D, Z, V, SL2")
    try:
        q = int(value)
    except ValueError:
        raise CliError(f"family parameter must be an integer, got {value!r}") from None
    if fam == "v8k":
        if q % 8:
            raise CliError(f"V needs an order divisible by 8, got {q}")
        q //= 8
    return FamilySpec(fam, q)


def load_group_file(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: malformed JSON ({exc})") from None
    if not isinstance(obj, dict) or "table" not in obj:
        raise CliError(f"{path}: expected an object with fields 'n' and 'table'")
    table = obj["table"]
    if not isinstance(table, list) or any(not isinstance(r, list) or len(r) != len(table) for r in table):
        raise CliError(f"{path}: table is not square")
    if "n" in obj and obj["n"] != len(table):
        raise CliError(f"{path}: n = {obj['n']} but the table has {len(table)} rows")
    return load_table(table, name=Path(path).stem)


def resolve_group(args):
    if args.family and args.table:
        raise CliError("give exactly one of --family and --table")
    if args.family:
        spec = family_spec(*args.family)
        g = build_family(spec)
        p = conjugacy_classes(g)
        ct = family_character_table(spec, g, p)
        return spec.label, g, p, ct
    if args.table:
        g = load_group_file(args.table)
        p = conjugacy_classes(g)
        t = intersection_numbers_by_counting(g, p)
        ct = character_table_numeric(t, p.sizes, g.n, seed=args.seed)
        return g.name, g, p, ct
    raise CliError("a group is required: --family NAME PARAM or --table PATH")


# -- output -------------------------------------------------------------------

def emit(args, record: dict, text: str, table=None):
    """``table`` is ``(header, rows)`` for ``--csv``."""
    if args.json:
        out = json.dumps(_jsonable(record), indent=2) + "\n"
    elif args.csv and table is not None:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        header, rows = table
        w.writerow(header)
        for r in rows:
            w.writerow([fmt(v) for v in r])
        out = buf.getvalue()
    else:
        out = text if text.endswith("\n") else text + "\n"
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)


def aligned(header, rows) -> str:
    cells = [list(map(str, header))] + [[fmt(v) for v in r] for r in rows]
    widths = [max(len(c[i]) for c in cells) for i in range(len(header))]
    return "\n".join("  ".join(c[i].rjust(widths[i]) for i in range(len(header))) for c in cells)


# -- commands -----------------------------------------------------------------

def cmd_group_info(args):
    label, g, p, _ = resolve_group(args)
    rec = {
        "group": label,
        "n": g.n,
        "class_sizes": list(p.sizes),
        "representatives": list(p.representatives),
        "dual": list(p.dual),
        "ambivalent": p.ambivalent,
    }
    text = "\n".join([
        f"group        {label}",
        f"n            {g.n}",
        f"classes      {len(p)}",
        f"class sizes  {' '.join(map(str, p.sizes))}",
        f"dual map     {' '.join(map(str, p.dual))}",
        f"ambivalent   {'yes' if p.ambivalent else 'no'}",
    ])
    header = ["class", "size", "representative", "dual"]
    rows = [[i, p.sizes[i], p.representatives[i], p.dual[i]] for i in range(len(p))]
    emit(args, rec, text, (header, rows))


def cmd_chartable(args):
    label, g, p, ct = resolve_group(args)
    z = zeta_table(ct)
    rec = {
        "group": label,
        "n": g.n,
        "d": ct.d_plus_1 - 1,
        "d_prime": z.d_prime_plus_1 - 1,
        "dims": list(ct.dims),
        "kappa": list(ct.kappa),
        "chi": ct.chi,
        "row_labels": list(ct.row_labels),
        "zeta": z.zeta,
        "coeff": z.coeff,
        "zeta_dims": list(z.dims),
        "merged_kappa": list(z.merged_kappa),
        "merged_columns": [list(c) for c in z.col_members],
        "merged_rows": [list(r) for r in z.row_members],
    }
    ncls = ct.d_plus_1
    head = ["", "d"] + [f"C{m}" for m in range(ncls)]
    rows = [["kappa", ""] + list(ct.kappa)]
    for l in range(ncls):
        name = ct.row_labels[l] if ct.row_labels else f"chi_{l}"
        rows.append([name, ct.dims[l]] + [complex(np.round(v, 12)) for v in ct.chi[l]])
    zhead = ["", "d"] + ["+".join(f"C{i}" for i in c) for c in z.col_members]
    zrows = [["kappa", ""] + list(z.merged_kappa)]
    for l, members in enumerate(z.row_members):
        zrows.append(["+".join(f"r{i}" for i in members), z.dims[l]] + list(np.round(z.zeta[l], 12)))
    text = (f"group {label}: n = {g.n}, d = {ct.d_plus_1 - 1}, d' = {z.d_prime_plus_1 - 1}\n\n"
            f"character table\n{aligned(head, rows)}\n\nmerged real table\n{aligned(zhead, zrows)}")
    csv_rows = [[l, m, ct.chi[l, m].real, ct.chi[l, m].imag] for l in range(ncls) for m in range(ncls)]
    emit(args, rec, text, (["row", "class", "re", "im"], csv_rows))


def cmd_scheme_check(args):
    label, g, p, ct = resolve_group(args)
    A = adjacency_matrices(g, p)
    t_count = intersection_numbers_by_counting(g, p)
    t_char = intersection_numbers_by_characters(ct)
    bm = bose_mesner_check(A, t_count)
    em = eigenmatrices(ct)
    E = idempotents(A, em)
    n = g.n
    pq = float(max(np.abs(em.P @ em.Q - n * np.eye(len(A))).max(),
                   np.abs(em.Q @ em.P - n * np.eye(len(A))).max()))
    ax = verify_axioms(A)
    rec = {
        "group": label,
        "axioms": ax,
        "bose_mesner_residual": bm,
        "pq_residual": pq,
        "intersection_match": bool(np.array_equal(t_count, t_char)),
        "idempotent_traces": [float(np.trace(e).real) for e in E],
        "spectral_residual": spectral_residual(A, em.P, ct.dims),
    }
    if args.edges:
        rec["edges"] = [[int(a), int(b), int(p.class_of[g.mul[a, g.inv[b]]])]
                        for a in range(n) for b in range(n) if a != b]
    lines = [f"group {label}"]
    for k, v in ax.items():
        lines.append(f"{k:<22}{'holds' if v else 'fails'}")
    lines += [
        f"{'Bose-Mesner residual':<22}{bm}",
        f"{'PQ - nI residual':<22}{fmt(pq)}",
        f"{'counting == chars':<22}{rec['intersection_match']}",
        f"{'spectral residual':<22}{fmt(rec['spectral_residual'])}",
        f"{'trace(E_i)':<22}{' '.join(fmt(round(v, 9)) for v in rec['idempotent_traces'])}",
    ]
    text = "\n".join(lines)
    edge_rows = rec.get("edges", [])
    if args.edges and not args.json:
        text += "\n\nalpha beta relation\n" + "\n".join(" ".join(map(str, e)) for e in edge_rows)
    emit(args, rec, text, (["alpha", "beta", "relation"], edge_rows))
    ok = ax["AS1"] and ax["AS2"] and ax["AS3"] and ax["AS4"] and rec["intersection_match"]
    return 0 if ok else 1


def _parse_couplings(text, d1):
    try:
        J = [float(v) for v in text.split(",")]
    except ValueError:
        raise CliError(f"couplings must be comma-separated numbers, got {text!r}") from None
    if len(J) != d1:
        raise CliError(f"expected {d1} couplings (one per class), got {len(J)}")
    return np.array(J)


def cmd_simulate(args):
    label, g, p, ct = resolve_group(args)
    em = eigenmatrices(ct)
    z = zeta_table(ct)
    if (args.couplings is None) == (args.stratum is None):
        raise CliError("give exactly one of --couplings and --stratum")
    if args.couplings is not None:
        J = _parse_couplings(args.couplings, ct.d_plus_1)
        try:
            check_dual_couplings(J, p.dual)
        except DynamicsError as exc:
            raise CliError(str(exc)) from None
    else:
        J = same_stratum_optimum(z, args.stratum, t_star=args.t_star).couplings
    if args.steps < 1:
        raise CliError("--steps must be at least 1")
    if args.t_max < 0:
        raise CliError("--t-max must be non-negative")
    times = [0.0] if args.t_max == 0 else np.linspace(0.0, args.t_max, args.steps)
    header = ["t"] + [f"p{m}" for m in range(ct.d_plus_1)]
    if args.pair:
        header.append(f"C_{args.pair[0]}_{args.pair[1]}")
    header.append("norm_residual")
    rows = []
    for t in times:
        prof = amplitudes(em, J, float(t))
        row = [float(t)] + list(prof.probabilities)
        if args.pair:
            i, j = args.pair
            row.append(2 * abs(prof.alpha[i]) * abs(prof.alpha[j]))
        row.append(prof.norm_residual)
        rows.append(row)
    rec = {"group": label, "couplings": J, "columns": header, "rows": rows}
    emit(args, rec, aligned(header, rows), (header, rows))


def cmd_optimize(args):
    label, g, p, ct = resolve_group(args)
    z = zeta_table(ct)
    dp1 = z.d_prime_plus_1
    for s in ([args.stratum] if args.stratum is not None else []) + list(args.pair or []):
        if not 0 <= s < dp1:
            raise CliError(f"stratum {s} out of range [0, {dp1})")
    if (args.stratum is None) == (args.pair is None):
        raise CliError("give exactly one of --stratum and --pair")
    if args.stratum is not None:
        try:
            res = same_stratum_optimum(z, args.stratum, t_star=args.t_star)
        except OptimizeError as exc:
            raise CliError(str(exc)) from None
        rec = {
            "group": label,
            "pair": [args.stratum, args.stratum],
            "concurrence": res.concurrence_opt,
            "alpha_opt": res.alpha_opt,
            "bounds": None,
            "phases": 2 * (z.xi[args.stratum]),
            "couplings": res.couplings,
            "t_star": res.t_star,
            "converged": True,
        }
    else:
        i, j = args.pair
        if i == j:
            raise CliError("use --stratum for a pair inside one stratum")
        res = cross_strata_optimize(z, i, j, starts=args.starts, seed=args.seed)
        rec = {
            "group": label,
            "pair": [i, j],
            "concurrence": res.concurrence,
            "bounds": {"product": bound_product(z, i, j),
                       "conservation": bound_conservation(z.merged_kappa[i], z.merged_kappa[j])},
            "phases": res.phases,
            "couplings": res.couplings,
            "t_star": 1.0,
            "converged": res.converged,
        }
    lines = [f"{k:<12}{' '.join(fmt(v) for v in np.ravel(val)) if isinstance(val, (list, np.ndarray)) else fmt(val)}"
             for k, val in rec.items() if k != "bounds"]
    if rec["bounds"]:
        lines.insert(3, f"{'bounds':<12}product {fmt(rec['bounds']['product'])}  "
                        f"conservation {fmt(rec['bounds']['conservation'])}")
    emit(args, rec, "\n".join(lines),
         (["key", "value"], [[k, json.dumps(_jsonable(v))] for k, v in rec.items()]))
    return 0 if rec["converged"] else 1


def cmd_bounds(args):
    label, g, p, ct = resolve_group(args)
    z = zeta_table(ct)
    dp1 = z.d_prime_plus_1
    pairs = [tuple(args.pair)] if args.pair else [(i, j) for i in range(dp1) for j in range(i + 1, dp1)]
    rows = []
    for i, j in pairs:
        if not (0 <= i < dp1 and 0 <= j < dp1):
            raise CliError(f"pair ({i}, {j}) out of range [0, {dp1})")
        rows.append([i, j, bound_product(z, i, j), bound_conservation(z.merged_kappa[i], z.merged_kappa[j])])
    header = ["i", "j", "product_bound", "conservation_bound"]
    rec = {"group": label, "bounds": [dict(zip(header, r)) for r in rows]}
    emit(args, rec, aligned(header, rows), (header, rows))


def cmd_reproduce(args):
    if args.table_id not in repro.TABLE_IDS:
        raise CliError(f"unknown table {args.table_id!r}; valid ids: {', '.join(repro.TABLE_IDS)}")
    rows = repro.reproduce(args.table_id, k=args.k, seed=args.seed)
    header = ["entry", "published", "computed", "abs_diff", "tolerance", "status"]
    out = [[r.label, r.published, r.computed, r.diff, r.tol,
            ("ok" if r.ok else "MISMATCH") if r.gating else ("matches" if r.ok else "differs (report only)")]
           for r in rows]
    ok = all(r.ok for r in rows if r.gating)
    rec = {"table": args.table_id, "k": args.k, "all_within_tolerance": ok,
           "rows": [dict(zip(header, r)) for r in out]}
    emit(args, rec, aligned(header, out), (header, out))
    return 0 if ok else 1


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    fmt_group = common.add_mutually_exclusive_group()
    fmt_group.add_argument("--json", action="store_true", help="machine-readable record")
    fmt_group.add_argument("--csv", action="store_true", help="comma-separated rows")
    common.add_argument("--out", metavar="PATH")

    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("--family", nargs=2, metavar=("NAME", "PARAM"),
                        help="D|Z|V ORDER or SL2 P")
    source.add_argument("--table", metavar="PATH", help="JSON file {n, table}")

    parser = argparse.ArgumentParser(prog="ungas", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("group-info", parents=[common, source])
    p.set_defaults(func=cmd_group_info)

    p = sub.add_parser("chartable", parents=[common, source])
    p.set_defaults(func=cmd_chartable)

    p = sub.add_parser("scheme-check", parents=[common, source])
    p.add_argument("--edges", action="store_true", help="also list every (alpha, beta, relation)")
    p.set_defaults(func=cmd_scheme_check)

    p = sub.add_parser("simulate", parents=[common, source])
    p.add_argument("--couplings", help="comma-separated J, one per class")
    p.add_argument("--stratum", type=int, help="use couplings synthesized for this merged stratum")
    p.add_argument("--t-star", type=float, default=1.0)
    p.add_argument("--t-max", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=101)
    p.add_argument("--pair", nargs=2, type=int, metavar=("I", "J"), help="classes of a target pair")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("optimize", parents=[common, source])
    p.add_argument("--stratum", type=int)
    p.add_argument("--pair", nargs=2, type=int, metavar=("I", "J"))
    p.add_argument("--t-star", type=float, default=1.0)
    p.add_argument("--starts", type=int, default=64)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("bounds", parents=[common, source])
    p.add_argument("--pair", nargs=2, type=int, metavar=("I", "J"))
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("reproduce", parents=[common])
    p.add_argument("table_id", metavar="ID", help=", ".join(repro.TABLE_IDS))
    p.add_argument("--k", type=int)
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args) or 0
    except (CliError, InvalidGroupError, CharacterError, SchemeError,
            DynamicsError, OptimizeError) as exc:
        print(f"ungas {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
