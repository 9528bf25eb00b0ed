"""Write every figure preset to CSV: ``python scripts/reproduce_figures.py --outdir figures``."""

import argparse
import pathlib

from greybody.csvio import render_table
from greybody.sweeps import PRESETS, Settings, run_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="figures")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--points", type=int, default=None, help="override every swept grid size")
    args = ap.parse_args()
    out = pathlib.Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    for fid, preset in PRESETS.items():
        spec = preset.with_points(args.points).spec
        header, columns, rows = run_sweep(spec, Settings(), workers=args.workers)
        path = out / f"{fid}.csv"
        path.write_text(render_table(header, columns, rows))
        errors = sum(1 for r in rows if r.get("error"))
        print(f"{fid}: {len(rows)} rows -> {path}" + (f" ({errors} error rows)" if errors else ""))


if __name__ == "__main__":
    main()
