"""Compiled vs pure-Python integer elimination on the workloads the library actually runs.

    python benchmarks/bench_elim.py [--repeat 3]
"""
import argparse
import random
import time

from twistcyc import complexes as cx
from twistcyc.exactfield import _backend
from twistcyc.exactfield._elim_py import echelon_int as echelon_py
from twistcyc.exactfield.linalg import _to_int_rows


def workloads():
    rng = random.Random(0)
    T3 = cx.Torus(3, 3)
    L = T3.system([[[1, 0], [0, 1]], [[1, 0], [0, 1]], [[1, 1], [0, 1]]])
    yield "T3 rank-2 boundary d2", _to_int_rows(L.boundary_rows(2))
    yield "T3 rank-2 boundary d3", _to_int_rows(L.boundary_rows(3))
    T4 = cx.Torus(4, 3)
    yield "T4 trivial boundary d2", _to_int_rows(cx.LocalSystem.trivial(T4.complex, 1).boundary_rows(2))
    yield "random sparse 200x200", [{rng.randrange(200): rng.randint(-9, 9) for _ in range(4)} for _ in range(200)]
    yield "random dense 80x80", [{j: rng.randint(-50, 50) for j in range(80)} for _ in range(80)]


def bench(fn, rows, repeat):
    best = float("inf")
    for _ in range(repeat):
        data = [dict(r) for r in rows]
        t0 = time.perf_counter()
        fn(data, True)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _backend.BACKEND != "compiled":
        print("compiled kernel not built; only the pure-Python timings are meaningful")
    print(f"{'workload':28s} {'rows':>6s} {'pure [s]':>10s} {'compiled [s]':>13s} {'speedup':>8s}")
    for name, rows in workloads():
        tp = bench(echelon_py, rows, args.repeat)
        tc = bench(_backend.echelon_int, rows, args.repeat)
        print(f"{name:28s} {len(rows):6d} {tp:10.3f} {tc:13.3f} {tp / tc:8.2f}")


if __name__ == "__main__":
    main()
