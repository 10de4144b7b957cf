"""Compare the compiled and pure-Python explicit-state kernels.

    python3 benchmarks/bench_kernels.py --model israeli-jalfon --length 11

Both backends run on the same arena; outputs are compared before timings
are reported.
"""

import argparse
import time

import numpy as np

from rmclive import kernels, oracle
from rmclive.builtins import builtin


def _time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def _same(a, b):
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        return np.allclose(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
    return a == b


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--model", default="israeli-jalfon")
    ap.add_argument("--length", type=int, default=11)
    ap.add_argument("--repeat", type=int, default=3)
    a = ap.parse_args(argv)
    if kernels.compiled is None:
        raise SystemExit("compiled kernels are not built; run pip install -e . first")

    g = builtin(a.model)
    e = oracle.expand(g, a.length)
    K = e.K
    t = g.move2
    table = oracle.transducer_table(t, K)
    acc = oracle._accept_vector(t)
    ip, ix, pp, pi = e.combined()
    fin = e.final.astype(np.uint8)
    src = e.initial.astype(np.uint8)
    allowed = np.ones(e.size, dtype=np.uint8)
    cases = {
        "successors": lambda m: m.successors(e.words, table, acc, t.initial),
        "attractor": lambda m: m.attractor(ip, ix, pp, pi, e.owner, fin),
        "trap": lambda m: m.trap(ip, ix, pp, pi, e.owner, fin),
        "bfs": lambda m: m.bfs(ip, ix, src, allowed),
        "value_iteration": lambda m: m.value_iteration(ip, ix, e.owner, fin, 0.5, 1e-13, 200000),
    }
    print(f"# {a.model} length {a.length}: {e.size} configurations, {len(ix)} edges")
    print("kernel\tcompiled_s\tpython_s\tspeedup\tsame")
    for name, fn in cases.items():
        tc, oc = _time(lambda: fn(kernels.compiled), a.repeat)
        tp, op = _time(lambda: fn(kernels.pure), max(1, a.repeat // 3))
        print(f"{name}\t{tc:.4f}\t{tp:.4f}\t{tp / max(tc, 1e-9):.1f}x\t{_same(oc, op)}")


if __name__ == "__main__":
    main()
