"""Orbit transfer from unramified characters to the Frobenius-fixed sublattice, per level."""

import argparse
import json
from dataclasses import dataclass

from coverdual.torus import swap_datum_cover, unramified_orbit_transfer


@dataclass
class Config:
    max_level: int = 4
    search_factor: int = 2
    as_json: bool = False


def run(cfg: Config) -> bool:
    rows, ok = [], True
    for kind in ("split-A1", "A1xA1-swap", "A2-swap"):
        for m in range(1, cfg.max_level + 1):
            rep = unramified_orbit_transfer(swap_datum_cover(kind), m, cfg.search_factor)
            ok &= rep.bijective
            rows.append({"case": kind, **rep.to_json()})
    if cfg.as_json:
        print(json.dumps(rows, indent=2))
    else:
        for r in rows:
            print(f"{r['case']:11s} m={r['level']}  orbits {r['source_orbits']} -> {r['target_orbits']}  "
                  f"bijective={r['bijective']}  inconclusive={r['inconclusive']}")
    return ok


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-level", type=int, default=Config.max_level)
    ap.add_argument("--search-factor", type=int, default=Config.search_factor)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    raise SystemExit(0 if run(Config(args.max_level, args.search_factor, args.json)) else 1)
