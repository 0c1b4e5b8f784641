"""Time the exhaustive searches under the numba and numpy backends.

Each run is a fresh subprocess, so the backend is fixed by RBX_DISABLE_NUMBA
before import and numba compilation is timed separately from the scan.

    python3 benchmarks/bench_search.py                 # F3 and M2, both backends
    python3 benchmarks/bench_search.py --only f3 --repeat 3
    python3 benchmarks/bench_search.py --m2-budget 20  # cap each M2 scan
"""

from __future__ import annotations

import argparse
import json
import os
import statistics
import subprocess
import sys

CHILD = r"""
import json, sys, time
t0 = time.perf_counter()
from rbx import search, _kernels
algebra, budget, workers = sys.argv[1], sys.argv[2], int(sys.argv[3])
budget = None if budget == "none" else float(budget)
if algebra == "f3":
    warm = search.search_f3(grid=(-1, 0, 1))  # pays for compilation
    t1 = time.perf_counter()
    res = search.search_f3()
else:
    warm = search.search_f3(grid=(-1, 0, 1))
    t1 = time.perf_counter()
    res = search.search_m2(budget_sec=budget, workers=workers)
t2 = time.perf_counter()
print(json.dumps({
    "backend": _kernels.backend(), "algebra": algebra, "candidates": res.candidates,
    "scanned": res.scanned, "complete": res.complete, "hits": len(res.hits),
    "scan_sec": res.elapsed, "total_sec": t2 - t1, "startup_sec": t1 - t0,
}))
"""


def run_once(algebra: str, disable_numba: bool, budget: float | None, workers: int) -> dict:
    env = dict(os.environ, RBX_DISABLE_NUMBA="1" if disable_numba else "0")
    out = subprocess.run([sys.executable, "-c", CHILD, algebra, "none" if budget is None else str(budget),
                          str(workers)], env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--only", choices=("f3", "m2"))
    p.add_argument("--repeat", type=int, default=1)
    p.add_argument("--m2-budget", type=float, default=None, help="seconds per M2 scan (default: no cap)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--json", action="store_true")
    args = p.parse_args(argv)

    rows = []
    for algebra in ("f3", "m2"):
        if args.only and algebra != args.only:
            continue
        for disable in (False, True):
            runs = [run_once(algebra, disable, args.m2_budget, args.workers) for _ in range(args.repeat)]
            scan = [r["scan_sec"] for r in runs]
            last = runs[-1]
            rows.append({**last, "scan_sec_median": statistics.median(scan),
                         "rate_per_sec": last["scanned"] / max(statistics.median(scan), 1e-9)})
    if args.json:
        print(json.dumps(rows, indent=2, sort_keys=True))
        return 0
    print(f"{'algebra':8}{'backend':9}{'scanned':>12}{'complete':>10}{'hits':>7}{'scan s':>9}{'cand/s':>14}"
          f"{'startup s':>11}")
    for r in rows:
        print(f"{r['algebra']:8}{r['backend']:9}{r['scanned']:>12}{str(r['complete']):>10}{r['hits']:>7}"
              f"{r['scan_sec_median']:>9.2f}{r['rate_per_sec']:>14,.0f}{r['startup_sec']:>11.2f}")
    by = {(r["algebra"], r["backend"]): r for r in rows}
    for algebra in ("f3", "m2"):
        a, b = by.get((algebra, "numba")), by.get((algebra, "numpy"))
        if a and b:
            print(f"{algebra}: numba scans {a['rate_per_sec'] / max(b['rate_per_sec'], 1e-9):.1f}x as many candidates/s as numpy")
    return 0


if __name__ == "__main__":
    sys.exit(main())
