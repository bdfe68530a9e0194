"""Compare the SL_m degree-n tau pattern with the 2-adic valuation rule.

The rule predicts tau nontrivial exactly when v_2(m) = v_2(n).  Prints the
pattern grid and every disagreement.
"""

import argparse
from dataclasses import dataclass

from coverdual.covers import sl_tau_pattern, two_adic_prediction


@dataclass
class Config:
    max_m: int = 12
    max_n: int = 8


def run(cfg: Config) -> list[tuple[int, int, bool, bool]]:
    pattern = sl_tau_pattern(cfg.max_m, cfg.max_n)
    print("m\\n " + " ".join(f"{n:2d}" for n in range(1, cfg.max_n + 1)))
    for m in range(2, cfg.max_m + 1):
        print(f"{m:3d} " + " ".join(" *" if pattern[(m, n)] else " ." for n in range(1, cfg.max_n + 1)))
    misses = [(m, n, got, two_adic_prediction(m, n)) for (m, n), got in sorted(pattern.items())
              if got != two_adic_prediction(m, n)]
    print(f"\n{len(misses)} disagreements out of {len(pattern)} cells")
    for m, n, got, want in misses:
        print(f"  SL_{m}, n={n}: computed {'nontrivial' if got else 'trivial'}, rule says "
              f"{'nontrivial' if want else 'trivial'}")
    # restricted to even n the rule may still hold
    even = [x for x in misses if x[1] % 2 == 0]
    print(f"{len(even)} disagreements with n even")
    return misses


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-m", type=int, default=Config.max_m)
    ap.add_argument("--max-n", type=int, default=Config.max_n)
    args = ap.parse_args()
    run(Config(args.max_m, args.max_n))
