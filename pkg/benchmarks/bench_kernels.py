"""Compare the numba and pure-numpy kernels.

    python3 benchmarks/bench_kernels.py [--n 2000] [--d 20] [--steps 20000]

Both backends run on identical inputs; the numba kernels are compiled
(and cached) before timing.
"""
import argparse
import timeit

import numpy as np

from marginpursuit import _kernels


def cases(n, d, steps, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, d))
    y = np.where(rng.random(n) < 0.5, -1.0, 1.0)
    w = rng.normal(size=d) / np.sqrt(d)
    idx = rng.integers(0, n, size=steps)
    q = rng.standard_t(3, size=n)
    return {
        "sgd_margin_steps": lambda nb: _kernels.sgd_margin_steps(
            X, y, w, idx, 0, 1.0, 1.0, 1e-3, 1e3 ** 0.5, use_numba=nb),
        "pegasos_steps": lambda nb: _kernels.pegasos_steps(
            X, y, w, idx, 0, 1e-3, 1e3 ** 0.5, use_numba=nb),
        "catoni_bisect": lambda nb: _kernels.catoni_bisect(q, 2.0, 1e-12, 200, use_numba=nb),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=2000)
    ap.add_argument("--d", type=int, default=20)
    ap.add_argument("--steps", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    print(f"n={args.n} d={args.d} steps={args.steps}; best of {args.repeat}")
    print(f"{'kernel':<18}{'numpy (ms)':>12}{'numba (ms)':>12}{'speedup':>10}")
    for name, fn in cases(args.n, args.d, args.steps).items():
        fn(True)  # compile
        a, b = fn(True), fn(False)
        assert np.allclose(a, b, rtol=1e-9, atol=1e-9), name
        t_np = min(timeit.repeat(lambda: fn(False), number=1, repeat=args.repeat))
        t_nb = min(timeit.repeat(lambda: fn(True), number=1, repeat=args.repeat))
        print(f"{name:<18}{1e3 * t_np:>12.2f}{1e3 * t_nb:>12.2f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
