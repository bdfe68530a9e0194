"""Regenerate the five dual-group tables as CSV files and report timing."""

import argparse
import time
from dataclasses import dataclass
from pathlib import Path

from coverdual.covers import generate_table, table_csv

FILES = {"SL": "table1_SL.csv", "Spin-odd": "table2_Spin-odd.csv", "Sp": "table3_Sp.csv",
         "Spin-even": "table4_Spin-even.csv", "E": "table5_E.csv"}


@dataclass
class Config:
    out_dir: Path = Path("tables_out")
    max_degree: int = 6
    compare_to: Path | None = Path(__file__).resolve().parent.parent / "tests" / "golden"


def run(cfg: Config) -> bool:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    all_ok = True
    for family, fname in FILES.items():
        t0 = time.perf_counter()
        text = table_csv(generate_table(family, max_degree=cfg.max_degree))
        elapsed = time.perf_counter() - t0
        (cfg.out_dir / fname).write_text(text)
        status = ""
        if cfg.compare_to is not None and (cfg.compare_to / fname).exists():
            same = (cfg.compare_to / fname).read_text() == text
            all_ok &= same
            status = "matches golden" if same else "DIFFERS from golden"
        print(f"{family:10s} {elapsed:6.2f}s  {fname}  {status}")
    return all_ok


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", type=Path, default=Config.out_dir)
    ap.add_argument("--max-degree", type=int, default=Config.max_degree)
    args = ap.parse_args()
    raise SystemExit(0 if run(Config(args.out_dir, args.max_degree)) else 1)
