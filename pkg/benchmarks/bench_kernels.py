"""Compare the compiled and pure-Python elimination kernels.

    python benchmarks/bench_kernels.py [--repeat 3]

Runs Smith normal form on bar-complex boundaries and on random sparse
integer matrices with both backends, checks the results agree, and prints
wall times.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from diaghom import _backend
from diaghom import algebra as alg
from diaghom import homology as hom
from diaghom.coeff import ZZ, RingSpec, SparseMatrix, profile, smith_normal_form


def random_matrix(rows: int, cols: int, density: float, seed: int) -> SparseMatrix:
    rng = np.random.default_rng(seed)
    nnz = int(rows * cols * density)
    r = rng.integers(0, rows, nnz)
    c = rng.integers(0, cols, nnz)
    v = rng.choice([-2, -1, 1, 1, 2, 3], nnz)
    return SparseMatrix.from_coo(rows, cols, r, c, v, ZZ)


def cases():
    brauer = hom.bar_complex(hom.AugmentedAlgebra.from_spec(alg.AlgebraSpec.make("brauer", 3, "z", delta=0)), 2)
    prook = hom.bar_complex(hom.AugmentedAlgebra.from_spec(alg.AlgebraSpec.make("planar-rook", 3, "z", epsilon=1)), 2)
    yield "Brauer_3 d_3 over Z", brauer.d(3), ZZ
    big = hom.bar_complex(hom.AugmentedAlgebra.from_spec(alg.AlgebraSpec.make("brauer", 3, "z", delta=0)), 3)
    yield "Brauer_3 d_4 over Z", big.d(4), ZZ
    yield "planar rook_3 d_3 over Z", prook.d(3), ZZ
    yield "Brauer_3 d_3 over Z/2", hom.bar_complex(
        hom.AugmentedAlgebra.from_spec(alg.AlgebraSpec.make("brauer", 3, "z2", delta=0)), 2).d(3), RingSpec.mod(2)
    yield "random 400x600 over Z", random_matrix(400, 600, 0.01, 1), ZZ


def run(label, m, ring, backend, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = smith_normal_form(m, backend) if ring.kind == "Z" else profile(m, ring, backend)
        best = min(best, time.perf_counter() - t)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = ["python"] + (["cython"] if _backend._ckernels is not None else [])
    if len(backends) == 1:
        print("compiled kernel not built; timing the Python fallback only")
    print(f"{'case':32} {'shape':>14} {'nnz':>8} " + " ".join(f"{b:>10}" for b in backends) + "  speedup")
    for label, m, ring in cases():
        times, outs = [], []
        for b in backends:
            t, o = run(label, m, ring, b, args.repeat)
            times.append(t)
            outs.append(o)
        if len(outs) == 2 and outs[0] != outs[1]:
            raise SystemExit(f"backends disagree on {label}")
        speed = f"{times[0] / times[1]:7.1f}x" if len(times) == 2 else ""
        shape = f"{m.nrows}x{m.ncols}"
        print(f"{label:32} {shape:>14} {m.nnz:>8} " + " ".join(f"{t:9.3f}s" for t in times) + "  " + speed)


if __name__ == "__main__":
    main()
