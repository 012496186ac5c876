"""Time the hot kernels under numba and under the pure-numpy fallback.

Each backend runs in its own interpreter (the choice is made at import time
from ``WLDIM_PURE``).  The compiled treewidth path is an exhaustive
subset table: it bounds the worst case but can lose to the pruned memo
search on easy graphs.  Usage: ``python benchmarks/bench_kernels.py [--repeat N]``.
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from wldim._accel import backend
from wldim.graph import Graph, count_hom, cycle_graph, complete_bipartite
from wldim.wl import wl_refine
from wldim.width import treewidth
from wldim.query import count_answers
from wldim.quantum import star_query
from wldim.cfi import cfi

repeat = int(sys.argv[1])
rng = np.random.default_rng(7)

def random_graph(n, p):
    iu = np.triu_indices(n, 1)
    keep = rng.random(len(iu[0])) < p
    return Graph(n, tuple(zip(iu[0][keep].tolist(), iu[1][keep].tolist())))

big = random_graph(3000, 0.002)
mid = random_graph(40, 0.15)
chi = cfi(complete_bipartite(3, 4), ()).result
tw_graph = random_graph(18, 0.3)


def cubic(n):
    while True:
        stubs = rng.permutation(np.repeat(np.arange(n), 3)).reshape(-1, 2)
        e = {tuple(sorted(p)) for p in stubs.tolist() if p[0] != p[1]}
        if len(e) == 3 * n // 2:
            return Graph(n, tuple(e))


tw_hard = cubic(20)

cases = {
    "colour refinement (n=3000)": lambda: wl_refine(big, 1),
    "2-WL (n=40)": lambda: wl_refine(mid, 2),
    "hom count C5 -> CFI(K34)": lambda: count_hom(cycle_graph(5), chi),
    "answers 3-star on CFI(K34)": lambda: count_answers(star_query(3), chi),
    "treewidth, random (n=18)": lambda: treewidth(tw_graph),
    "treewidth, cubic (n=20)": lambda: treewidth(tw_hard),
}
out = {"backend": backend(), "results": {}}
for name, fn in cases.items():
    fn()  # warm-up, includes compilation for numba
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    out["results"][name] = best
print(json.dumps(out))
"""


def run_backend(pure: bool, repeat: int) -> dict:
    env = dict(os.environ)
    env.pop("WLDIM_PURE", None)
    if pure:
        env["WLDIM_PURE"] = "1"
    res = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    fast = run_backend(False, args.repeat)
    slow = run_backend(True, args.repeat)
    width = max(len(k) for k in fast["results"])
    print(f"{'kernel':<{width}}  {fast['backend']:>10}  {slow['backend']:>10}  speedup")
    for name, t_fast in fast["results"].items():
        t_slow = slow["results"][name]
        print(f"{name:<{width}}  {t_fast:10.4f}  {t_slow:10.4f}  {t_slow / t_fast:7.1f}x")


if __name__ == "__main__":
    main()
