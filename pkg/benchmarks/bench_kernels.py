"""Time the hot kernels with numba and with the interpreted fallback.

Each backend runs in its own interpreter because the choice is fixed at
import time by ``SELCOL_DISABLE_NUMBA``.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--scale 1.0]
"""

import argparse
import json
import os
import subprocess
import sys
import time

WORKER = r"""
import json, sys, time
import numpy as np
from selcol import backend
from selcol.clique import max_clique
from selcol.coloring import chromatic_number
from selcol.graph import random_graph
from selcol.perfect import find_odd_hole
from selcol.perfectgen import GenConfig, build_base_library, generate_perfect

repeat, scale = int(sys.argv[1]), float(sys.argv[2])
rng = np.random.default_rng(0)
size = lambda n: max(5, int(n * scale))
clique_graphs = [random_graph(size(150), 0.5, rng) for _ in range(4)]
color_graphs = [random_graph(size(40), 0.5, rng) for _ in range(4)]
hole_graphs = [random_graph(size(24), 0.2, rng) for _ in range(20)]
library = build_base_library(6)
perfect = [generate_perfect(GenConfig(size(120), 0.5, seed=s), library) for s in range(4)]

workloads = {
    "max_clique": lambda: [max_clique(g).size for g in clique_graphs],
    "chromatic_number": lambda: [chromatic_number(g).num_colors for g in color_graphs],
    "find_odd_hole": lambda: [find_odd_hole(g) is None for g in hole_graphs],
    "max_clique_perfect": lambda: [max_clique(g).size for g in perfect],
}
out = {"backend": backend(), "seconds": {}, "results": {}}
for name, fn in workloads.items():
    out["results"][name] = fn()  # warm-up, also triggers compilation
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    out["seconds"][name] = best
json.dump(out, sys.stdout)
"""


def run(disable: bool, repeat: int, scale: float) -> dict:
    env = dict(os.environ, SELCOL_DISABLE_NUMBA="1" if disable else "0")
    proc = subprocess.run([sys.executable, "-c", WORKER, str(repeat), str(scale)],
                          env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--scale", type=float, default=1.0,
                    help="multiply every workload graph size by this factor")
    args = ap.parse_args(argv)
    start = time.perf_counter()
    fast = run(False, args.repeat, args.scale)
    slow = run(True, args.repeat, args.scale)
    if fast["results"] != slow["results"]:
        print("warning: backends disagree", file=sys.stderr)
    print(f"{'kernel':<20} {'numba s':>10} {'python s':>10} {'speedup':>8}")
    for name in fast["seconds"]:
        a, b = fast["seconds"][name], slow["seconds"][name]
        print(f"{name:<20} {a:>10.4f} {b:>10.4f} {b / a if a > 0 else float('inf'):>7.1f}x")
    print(f"backends: {fast['backend']} / {slow['backend']}, "
          f"best of {args.repeat}, total wall {time.perf_counter() - start:.1f} s")
    return 0 if fast["results"] == slow["results"] else 1


if __name__ == "__main__":
    sys.exit(main())
