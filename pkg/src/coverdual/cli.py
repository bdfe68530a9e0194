"""Command-line entry point: ``coverdual <subcommand> [--json]``.

Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import covers, localarith, realforms, rootdata, torus
from .lattice import LatticeError


class UsageError(Exception):
    pass


def _matrix(text: str) -> list[list[int]]:
    """Parse "1,0;0,1" into [[1, 0], [0, 1]]."""
    try:
        rows = [[int(x) for x in row.split(",")] for row in text.split(";")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad integer matrix {text!r}") from exc
    if any(len(r) != len(rows[0]) for r in rows):
        raise argparse.ArgumentTypeError("matrix rows have different lengths")
    return rows


def _fractions(text: str) -> list[Fraction]:
    try:
        return [Fraction(x) for x in text.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad rational list {text!r}") from exc


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad rational {text!r}") from exc


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


# ---------------------------------------------------------------- handlers

_TABLE_LETTER = {"SL": "A", "Spin-odd": "B", "Sp": "C", "Spin-even": "D"}


def _datum_and_form(args):
    fam = args.family
    if fam.upper() == "GL":
        rd = rootdata.build_root_datum("GL", args.rank)
        q, c = args.gl
        return rd, covers.weyl_invariant_form(rd, gl=(q, c)), "A"
    if fam.upper() == "GSP":
        rd = rootdata.build_root_datum("GSp", args.rank)
        k, nu = args.gsp
        return rd, covers.weyl_invariant_form(rd, gsp=(k, nu)), "C"
    key = fam.upper()
    letter = _TABLE_LETTER.get(covers.FAMILY_ALIASES.get(key, ""), key)
    if letter not in "ABCDEFG" or len(letter) != 1:
        raise UsageError(f"unknown family {fam!r}")
    rd = rootdata.build_root_datum(letter, args.rank, args.form)
    if args.explicit is not None:
        form = covers.weyl_invariant_form(rd, explicit=args.explicit)
    else:
        form = covers.weyl_invariant_form(rd, short_coroot_value=args.short_value)
    return rd, form, letter


def cmd_dual_group(args) -> None:
    rd, form, style = _datum_and_form(args)
    report = covers.center_and_tau(covers.make_cover(rd, form, args.degree), style=args.style or style)
    _emit(args, report.to_json(), report.summary())


def cmd_tables(args) -> None:
    family = covers.canonical_family(args.family)
    rows = covers.generate_table(family, args.max_rank, args.max_degree)
    if args.json:
        print(json.dumps([c.to_json(family) for row in rows for c in row], indent=2))
    elif args.format == "csv":
        sys.stdout.write(covers.table_csv(rows))
    else:
        width = max(len(c.text) for row in rows for c in row) + 2
        print("n".ljust(4) + "".join(c.group.ljust(width) for c in rows[0]))
        for row in rows:
            print(str(row[0].n).ljust(4) + "".join(c.text.ljust(width) for c in row))


def cmd_hilbert(args) -> None:
    place = localarith.Place.parse(args.place)
    u = localarith.LocalElement.from_rational(localarith.parse_rational(args.u), place)
    v = localarith.LocalElement.from_rational(localarith.parse_rational(args.v), place)
    if args.n == 2:
        value = localarith.hilbert2(u, v)
        _emit(args, {"place": str(place), "u": args.u, "v": args.v, "n": 2, "value": value}, str(value))
    else:
        index = localarith.hilbert_n_tame(u, v, args.n)
        _emit(args, {"place": str(place), "u": args.u, "v": args.v, "n": args.n, "index": index},
              f"zeta^{index}")


def cmd_reciprocity(args) -> None:
    u, v = localarith.parse_rational(args.u), localarith.parse_rational(args.v)
    rep = localarith.reciprocity_check(u, v)
    text = "\n".join(f"{k}: {val}" for k, val in rep.values.items()) + f"\nproduct: {rep.product}"
    _emit(args, {"values": rep.values, "product": rep.product}, text)


def cmd_metagalois(args) -> None:
    place = localarith.Place.parse(args.place)
    cert = localarith.metagalois_split_witness(place)
    failures = localarith.cocycle_identity_failures(place) if place.p != 2 else []
    if isinstance(cert, localarith.SplitCertificate):
        payload = {"place": str(place), "split": True, "cochain": list(cert.cochain),
                   "checked_pairs": cert.checked_pairs, "units_trivial": cert.units_trivial}
        text = f"{place}: split, cochain checked on {cert.checked_pairs} pairs"
    else:
        payload = {"place": str(place), "split": False, "reason": cert.reason,
                   "witness_order": cert.witness_order, "parity_consistent": cert.parity_consistent}
        text = f"{place}: not split ({cert.reason}); witness order {cert.witness_order}"
    payload["cocycle_failures"] = len(failures)
    _emit(args, payload, text)


def cmd_torus_center(args) -> None:
    rep = torus.center_of_cover(torus.TorusCover(args.C, args.n, args.p))
    _emit(args, rep.to_json(), f"center order {rep.center_order} of {rep.order}; "
                               f"predicted {rep.predicted_order}; matches: {rep.matches}")


def cmd_basis_change(args) -> None:
    place = localarith.Place(args.p)
    u = localarith.LocalElement.from_rational(localarith.parse_rational(args.u), place)
    rep = torus.basis_change_twist(args.C, args.g, u, args.n)
    _emit(args, rep.to_json(), f"exponents {list(rep.exponents)}, chi(u) index {rep.chi}, "
                               f"twist {list(rep.twist)}, involutive: {rep.involutive}")


def cmd_theta_sharp(args) -> None:
    cover = torus.TorusCover(args.C, args.n, args.p)
    place = cover.place
    u = localarith.LocalElement.from_rational(localarith.parse_rational(args.u), place)
    v = localarith.LocalElement.from_rational(localarith.parse_rational(args.v), place)
    rep = torus.theta_sharp_compare(cover, u, v, args.g)
    _emit(args, {"lhs": list(rep.lhs), "rhs": list(rep.rhs), "equal": rep.equal,
                 "basis_invariant": rep.basis_invariant},
          f"lhs {list(rep.lhs)} rhs {list(rep.rhs)} equal: {rep.equal} basis invariant: {rep.basis_invariant}")


def cmd_orbit_transfer(args) -> None:
    rep = torus.unramified_orbit_transfer(torus.swap_datum_cover(args.case, args.n), args.m, args.search_factor)
    _emit(args, rep.to_json(), f"{rep.source_orbits} -> {rep.target_orbits} orbits; bijective: {rep.bijective}"
                               f" (inconclusive {rep.inconclusive})")


def cmd_real_kappa(args) -> None:
    eta = args.eta if args.eta is not None else [Fraction(0)] * len(args.Q)
    kappa = realforms.kappa_from_invariants(realforms.RealTorusCover(covers.QuadraticForm.from_matrix(args.Q),
                                                                     tuple(eta)))
    _emit(args, {"kappa": [str(k) for k in kappa]}, " ".join(str(k) for k in kappa))


def cmd_discrete_series(args) -> None:
    if args.case == "mp2":
        ds = realforms.mp2_input(args.R)
    elif args.case == "linear":
        ds = realforms.mp2_input(args.R, trivial=True)
    elif args.case == "index2":
        ds = realforms.synthetic_index_two(args.R)
    else:
        rd = rootdata.build_root_datum(args.family, args.rank)
        kappa = args.kappa if args.kappa is not None else [Fraction(0)] * rd.x_rank
        if args.degree > 1:
            form = covers.weyl_invariant_form(rd, short_coroot_value=args.short_value)
            ds = realforms.ds_input_from_cover(covers.make_cover(rd, form, args.degree), kappa, args.R)
        else:
            ds = realforms.ds_input(rd, kappa, args.R)
    rep = realforms.ds_fiber_report(ds)
    lines = [f"{', '.join(map(str, v))}: {len(f)}" for v, f in zip(rep.base, rep.fibers)]
    _emit(args, rep.to_json(ds), "\n".join(lines) if lines else "no regular parameters within R")


def cmd_validate(args) -> None:
    if args.datum_file:
        with open(args.datum_file) as fh:
            rd = rootdata.RootDatum.from_json(fh.read())
    else:
        rd = rootdata.build_root_datum(args.family, args.rank, args.form)
    rep = rootdata.validate(rd)
    payload = {"ok": rep.ok, "violation": rep.violation, "datum": rd.to_json()}
    _emit(args, payload, "valid" if rep.ok else f"invalid: {rep.violation}")
    if not rep.ok:
        raise rootdata.RootDatumError(rep.violation)


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coverdual", description="Dual groups and parameters of covering groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.set_defaults(func=func)
        return p

    p = add("dual-group", cmd_dual_group, "dual group, center and tau of a cover")
    p.add_argument("--family", required=True, help="A..G, SL, Sp, Spin-odd, Spin-even, GL or GSp")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--form", default="simply_connected")
    p.add_argument("--short-value", type=int, default=1, help="Q on short coroots")
    p.add_argument("--explicit", type=_matrix, help="incarnation matrix, rows separated by ';'")
    p.add_argument("--gl", type=int, nargs=2, default=(1, 0), metavar=("Q", "C"))
    p.add_argument("--gsp", type=int, nargs=2, default=(0, 1), metavar=("KAPPA", "NU"))
    p.add_argument("--style", help="Cartan letter preferred for low-rank coincidences")

    p = add("tables", cmd_tables, "dual group tables")
    p.add_argument("--family", required=True, help="SL, Spin-odd, Sp, Spin-even or E")
    p.add_argument("--max-rank", type=int)
    p.add_argument("--max-degree", type=int, default=6)
    p.add_argument("--format", choices=("csv", "text"), default="csv")

    p = add("hilbert", cmd_hilbert, "Hilbert symbol at a place")
    p.add_argument("--place", required=True, help="R or a prime")
    p.add_argument("-u", required=True)
    p.add_argument("-v", required=True)
    p.add_argument("--n", type=int, default=2, help="degree; n > 2 uses the tame symbol")

    p = add("reciprocity", cmd_reciprocity, "product of quadratic symbols over all places")
    p.add_argument("-u", required=True)
    p.add_argument("-v", required=True)

    p = add("metagalois", cmd_metagalois, "splitting of the metaGalois extension at a place")
    p.add_argument("--place", required=True)

    p = add("torus-center", cmd_torus_center, "center of the finite model of a torus cover")
    p.add_argument("--C", type=_matrix, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)

    p = add("basis-change", cmd_basis_change, "basis-change twist of a torus cover")
    p.add_argument("--C", type=_matrix, required=True)
    p.add_argument("--g", type=_matrix, required=True)
    p.add_argument("-u", required=True)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--p", type=int, required=True)

    p = add("theta-sharp", cmd_theta_sharp, "compare the sharp-cover cocycle with tau")
    p.add_argument("--C", type=_matrix, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("-u", required=True)
    p.add_argument("-v", required=True)
    p.add_argument("--g", type=_matrix)

    p = add("orbit-transfer", cmd_orbit_transfer, "unramified parameter orbits versus Frobenius-fixed ones")
    p.add_argument("--case", choices=("split-A1", "A1xA1-swap", "A2-swap"), required=True)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--search-factor", type=int, default=2)

    p = add("real-kappa", cmd_real_kappa, "kappa = eta + Q/2 for a compact real torus")
    p.add_argument("--Q", type=_matrix, required=True)
    p.add_argument("--eta", type=_fractions)

    p = add("discrete-series", cmd_discrete_series, "regular parameter orbits and fibers")
    p.add_argument("--case", choices=("mp2", "linear", "index2", "datum"), default="datum")
    p.add_argument("--family", default="A")
    p.add_argument("--rank", type=int, default=1)
    p.add_argument("--degree", type=int, default=1)
    p.add_argument("--short-value", type=int, default=1)
    p.add_argument("--kappa", type=_fractions)
    p.add_argument("--R", type=_fraction, required=True)

    p = add("validate", cmd_validate, "check root datum axioms")
    p.add_argument("--family", default="A")
    p.add_argument("--rank", type=int, default=1)
    p.add_argument("--form", default="simply_connected")
    p.add_argument("--datum-file", help="JSON root datum")
    return parser


DOMAIN_ERRORS = (covers.CoverError, rootdata.RootDatumError, localarith.LocalArithmeticError,
                 torus.TorusError, realforms.RealFormError, LatticeError)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
