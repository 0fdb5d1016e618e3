"""Compare the compiled backend against the pure-numpy fallback.

Times the five shared kernel operations on square grids and prints a table.
Run from the repository root:

    python3 benchmarks/bench_backends.py
"""

import time

import numpy as np

from firefront import _kernels_np

try:
    from firefront import _kernels_cy
except ImportError:
    _kernels_cy = None

SIZES = (129, 257)
REPEATS = 5


def _best_of(fn, repeats=REPEATS):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def _cases(mod, n):
    h = 1.0 / (n - 1)
    rng = np.random.default_rng(7)
    u = rng.uniform(-1.0, 1.0, (n, n))
    u[0, :] = u[-1, :] = u[:, 0] = u[:, -1] = 0.0
    win = rng.uniform(0.0, 1.0, (5, 5))
    rhs = u.copy()
    return [
        ("laplacian", lambda: mod.laplacian(u, h, h)),
        ("gradient", lambda: mod.gradient(u, h, h)),
        ("window_correlate", lambda: mod.window_correlate(u, win)),
        ("shift_apply", lambda: mod.shift_apply(u, 0.01, h, h)),
        (
            "cg_shifted_poisson",
            lambda: mod.cg_shifted_poisson(rhs, 0.01, h, h, 1e-10, 10 * n * n),
        ),
    ]


def main():
    if _kernels_cy is None:
        print("compiled backend not built; showing numpy-only timings")
        print("(build it with: pip install -e . --no-build-isolation)")
    header = f"{'operation':<20} {'grid':>6} {'numpy':>12}"
    if _kernels_cy is not None:
        header += f" {'cython':>12} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for n in SIZES:
        np_cases = _cases(_kernels_np, n)
        cy_cases = _cases(_kernels_cy, n) if _kernels_cy is not None else None
        for idx, (name, fn) in enumerate(np_cases):
            t_np = _best_of(fn)
            line = f"{name:<20} {n:>4}^2 {t_np * 1e3:>10.3f}ms"
            if cy_cases is not None:
                t_cy = _best_of(cy_cases[idx][1])
                line += f" {t_cy * 1e3:>10.3f}ms {t_np / t_cy:>7.2f}x"
            print(line)


if __name__ == "__main__":
    main()
