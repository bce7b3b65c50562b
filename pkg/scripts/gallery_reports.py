"""Run the full analysis on every gallery system and write one JSON report each.

    python scripts/gallery_reports.py --out reports/
"""
import argparse
import json
import time
from pathlib import Path

from d0lbs import gallery
from d0lbs.pipeline import Limits, run_pipeline


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("reports"))
    ap.add_argument("--max-len", type=int, default=60)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    print(f"{'system':16s} {'verdict':28s} {'D':>3s} {'|BL|':>4s} {'|BR|':>4s} {'init':>4s} "
          f"{'BS':>4s} {'LS br':>5s} {'RS br':>5s} {'exp':>6s} {'time':>6s}")
    for name in gallery.names():
        t = time.perf_counter()
        rep = run_pipeline(gallery.system(name), Limits(max_len=args.max_len))
        took = time.perf_counter() - t
        doc = rep.to_json()
        (args.out / f"{name}.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        s = rep.summary()
        d = rep.classification.delay
        print(f"{name:16s} {s['verdict']:28s} {d.value if d and d.certified else '-':>3} "
              f"{s['forky_sizes'].get('L', '-'):>4} {s['forky_sizes'].get('R', '-'):>4} "
              f"{s['initial_count']:>4d} {len(s['bispecial_centers']):>4d} "
              f"{s['branch_count'].get('LS', '-'):>5} {s['branch_count'].get('RS', '-'):>5} "
              f"{s['exponent']:>6s} {took:6.2f}")


if __name__ == "__main__":
    main()
