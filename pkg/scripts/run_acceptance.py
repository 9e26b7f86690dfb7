"""Run the acceptance scenarios and write a JSON summary.

    python3 scripts/run_acceptance.py --out results/acceptance.json
    python3 scripts/run_acceptance.py -c 3 -c 4
"""
import argparse
import json
import sys
import time
from pathlib import Path

from turingtest.acceptance import CRITERIA, run_criterion
from turingtest.config import load_config


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("-c", "--criterion", type=int, action="append", choices=sorted(CRITERIA))
    ap.add_argument("--config")
    ap.add_argument("--out", type=Path)
    args = ap.parse_args()
    cfg = load_config(args.config)
    rows = []
    for n in args.criterion or sorted(CRITERIA):
        t0 = time.perf_counter()
        res = run_criterion(n, cfg)
        dt = time.perf_counter() - t0
        print(f"{res.line()}  [{dt:.1f}s]")
        rows.append({"number": n, "title": res.title, "passed": res.passed, "checked": res.checked,
                     "failures": [str(f) for f in res.failures], "seconds": round(dt, 2)})
    if args.out:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(json.dumps({"config_hash": cfg.hash, "criteria": rows}, indent=1) + "\n")
    return 0 if all(r["passed"] for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
