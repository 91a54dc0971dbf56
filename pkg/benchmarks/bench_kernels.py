"""Compiled versus numpy displacement kernels.

    python benchmarks/bench_kernels.py [--cutoff 40] [--points 4000] [--repeat 5]

Prints the best-of-N wall time per kernel and backend, the speedup, and the
largest elementwise difference between the two backends.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from omtele.kernels import load_backend


def cases(cutoff: int, points: int):
    rng = np.random.default_rng(7)
    alphas = rng.normal(scale=1.5, size=points) + 1j * rng.normal(scale=1.5, size=points)
    weights = rng.normal(size=points) + 1j * rng.normal(size=points)
    rho = rng.normal(size=(cutoff + 1,) * 2) + 1j * rng.normal(size=(cutoff + 1,) * 2)
    rho = rho @ rho.conj().T
    rho /= np.trace(rho)
    return {
        "displacement_matrix": lambda k: k.displacement_matrix(complex(alphas[0]), cutoff),
        "displacement_trace": lambda k: k.displacement_trace(rho, alphas),
        "displacement_accumulate": lambda k: k.displacement_accumulate(alphas, weights, cutoff),
    }


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--cutoff", type=int, default=40)
    parser.add_argument("--points", type=int, default=4000)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    backends = {"python": load_backend("python")}
    try:
        backends["cython"] = load_backend("cython")
    except ImportError:
        print("compiled extension not built; timing the numpy backend only")

    print(f"cutoff={args.cutoff} points={args.points} best of {args.repeat}")
    print(f"{'kernel':<26}{'backend':<9}{'seconds':>12}{'speedup':>10}{'max |diff|':>13}")
    for name, fn in cases(args.cutoff, args.points).items():
        times, outputs = {}, {}
        for label, module in backends.items():
            outputs[label] = fn(module)
            times[label] = min(timeit.repeat(lambda: fn(module), number=1, repeat=args.repeat))
        diff = float(np.max(np.abs(outputs["python"] - outputs["cython"]))) if "cython" in outputs else float("nan")
        for label in backends:
            speedup = times["python"] / times[label]
            print(f"{name:<26}{label:<9}{times[label]:>12.5f}{speedup:>10.1f}{diff:>13.2e}")


if __name__ == "__main__":
    main()
