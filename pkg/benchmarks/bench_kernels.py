"""Compare the compiled and numpy kernel backends.

    python benchmarks/bench_kernels.py [--repeat 5] [--end-to-end]

Each kernel runs on shapes taken from the default network on 28x28 inputs
(a 64-instance mini-batch) and on a full 1000-candidate buffer for DBSCAN.
Outputs of the two backends are compared before timing.
"""
from __future__ import annotations

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from owcstream import kernels
from owcstream.ncp import neighbourhoods

END_TO_END = """
import time, numpy as np
from owcstream import owc, kernels
from owcstream.data import make_blobs
from owcstream.network import ArchConfig
ds = make_blobs(3, 200, shape=(1, 28, 28), seed=0)
t0 = time.perf_counter()
owc.train(ArchConfig(), ds.images, ds.labels, owc.TrainConfig(epochs=2), seed=0)
print(kernels.BACKEND, time.perf_counter() - t0)
"""


def cases(rng: np.random.Generator):
    x = rng.uniform(size=(64, 1, 28, 28))
    cols = rng.normal(size=(64 * 24 * 24, 25))
    act = rng.normal(size=(64, 16, 24, 24))
    dout = rng.normal(size=(64, 16, 12, 12))
    centres = rng.normal(size=(12, 64))
    emb = centres[rng.integers(12, size=1000)] + 0.02 * rng.normal(size=(1000, 64))
    emb /= np.linalg.norm(emb, axis=1, keepdims=True)
    indptr, indices = neighbourhoods(emb, 0.3)
    core = (np.diff(indptr) >= 5).astype(np.uint8)
    arg = kernels.backends()["python"].maxpool_forward(act, 2, 2)[1]
    return {
        "im2col 64x1x28x28 k5": lambda m: m.im2col(x, 5, 1),
        "col2im 64x1x28x28 k5": lambda m: m.col2im(cols, x.shape, 5, 1),
        "maxpool fwd 64x16x24x24": lambda m: m.maxpool_forward(act, 2, 2),
        "maxpool bwd 64x16x24x24": lambda m: m.maxpool_backward(dout, arg, act.shape, 2, 2),
        "dbscan labels n=1000": lambda m: m.dbscan_labels(indptr, indices, core),
    }


def _same(a, b) -> bool:
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    return np.array_equal(a, b) or np.allclose(a, b, rtol=0, atol=1e-12)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--end-to-end", action="store_true", help="also time two training epochs per backend")
    args = ap.parse_args(argv)

    found = kernels.backends()
    if "cython" not in found:
        print("compiled backend not built; only the numpy fallback is available", file=sys.stderr)
    names = list(found)
    print(f"{'kernel':<26}" + "".join(f"{n + ' (ms)':>16}" for n in names) + f"{'speed-up':>12}")
    for label, fn in cases(np.random.default_rng(0)).items():
        outs = {n: fn(m) for n, m in found.items()}
        if len(outs) == 2 and not _same(outs["python"], outs["cython"]):
            print(f"{label}: backends disagree", file=sys.stderr)
            return 1
        ms = {n: 1e3 * min(timeit.repeat(lambda: fn(m), number=1, repeat=args.repeat)) for n, m in found.items()}
        ratio = f"{ms['python'] / ms['cython']:.1f}x" if "cython" in ms else "n/a"
        print(f"{label:<26}" + "".join(f"{ms[n]:>16.2f}" for n in names) + f"{ratio:>12}")

    if args.end_to_end:
        print()
        for backend in names:
            env = {**os.environ, "OWCSTREAM_BACKEND": "python" if backend == "python" else "auto"}
            out = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True,
                                 text=True, check=True).stdout.split()
            print(f"two training epochs, 600 instances 28x28, backend {out[0]}: {float(out[1]):.2f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
