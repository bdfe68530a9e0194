"""Count discrete series parameter orbits and fibers as the norm bound grows."""

import argparse
from dataclasses import dataclass, field
from fractions import Fraction

from coverdual.covers import make_cover, weyl_invariant_form
from coverdual.realforms import ds_fiber_report, ds_input_from_cover, mp2_input, synthetic_index_two
from coverdual.rootdata import build_root_datum


@dataclass
class Config:
    bounds: list[int] = field(default_factory=lambda: [1, 2, 3, 5, 8])
    datum: tuple[str, int] = ("B", 2)
    degree: int = 2


def rank_one(cfg: Config) -> None:
    print("R   Mp2 orbits  linear orbits  index-2 fibers")
    for R in cfg.bounds:
        mp2 = ds_fiber_report(mp2_input(R))
        lin = ds_fiber_report(mp2_input(R, trivial=True))
        idx = ds_fiber_report(synthetic_index_two(R))
        print(f"{R:<3d} {len(mp2.base):<11d} {len(lin.base):<14d} {idx.cardinalities}")


def higher_rank(cfg: Config) -> None:
    rd = build_root_datum(*cfg.datum)
    cs = make_cover(rd, weyl_invariant_form(rd, 1), cfg.degree)
    print(f"\n{cfg.datum[0]}_{cfg.datum[1]}, n={cfg.degree}, kappa=0")
    for R in cfg.bounds:
        rep = ds_fiber_report(ds_input_from_cover(cs, [Fraction(0)] * rd.x_rank, R))
        sizes = sorted(set(rep.cardinalities))
        print(f"R={R:<3d} base orbits={len(rep.base):<4d} fiber sizes={sizes}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--bounds", type=int, nargs="+", default=Config().bounds)
    ap.add_argument("--family", default="B")
    ap.add_argument("--rank", type=int, default=2)
    ap.add_argument("--degree", type=int, default=2)
    args = ap.parse_args()
    cfg = Config(args.bounds, (args.family, args.rank), args.degree)
    rank_one(cfg)
    higher_rank(cfg)
