#!/usr/bin/env python3
"""Benchmark the compiled kernel core against the NumPy fallback.

Times the two hot kernels on representative workloads and checks that the
backends agree. Run from the repository root:

    python3 benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import time

import numpy as np

from tracklab._kernels import available_backends


def time_call(fn, repeats):
    best = np.inf
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def lcp_workload(n, n_steps, rng):
    """Implicit-Euler heat steps with an obstacle: the parabolic hot loop."""
    ih2 = float((n + 1) ** 2)
    tau = 1.0 / n_steps
    lower = np.full(n, -ih2)
    lower[0] = 0.0
    upper = np.full(n, -ih2)
    upper[-1] = 0.0
    diag = np.full(n, 1.0 / tau + 2.0 * ih2)
    psi = np.full(n, -0.01)
    x = np.arange(1, n + 1) / (n + 1)
    forcing = -5.0 * np.sin(np.pi * x) + rng.normal(size=n)

    def run(mod):
        y = np.zeros(n)
        sweeps = 0
        for _ in range(n_steps):
            q = -(y / tau + forcing)
            y, s, _ = mod.tridiag_lcp_psor(lower, diag, upper, q, psi,
                                           np.asarray(y), 1e-10, 200_000)
            y = np.asarray(y)
            sweeps += s
        return y, sweeps

    return run


def newton_workload(n, n_solves, rng):
    """Batch of semilinear solves: the FD-gradient hot loop."""
    h = 1.0 / (n + 1)
    controls = rng.normal(size=(n_solves, n)) * 10.0

    def run(mod):
        acc = np.zeros(n)
        for u in controls:
            y, _, _ = mod.semilinear_newton(u, h, 1e-10, 50)
            acc += np.asarray(y)
        return acc, n_solves

    return run


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=3,
                        help="timing repeats (best is reported)")
    args = parser.parse_args()

    backends = available_backends()
    if "cython" not in backends:
        print("compiled backend not built; timing the fallback only")
    rng = np.random.default_rng(0)

    cases = [
        ("lcp-psor n=49  steps=50 ", lcp_workload(49, 50, rng)),
        ("lcp-psor n=99  steps=100", lcp_workload(99, 100, rng)),
        ("newton   n=99  x200     ", newton_workload(99, 200, rng)),
        ("newton   n=999 x20      ", newton_workload(999, 20, rng)),
    ]

    header = f"{'workload':<26} " + "".join(
        f"{name:>12} " for name in sorted(backends)) + f"{'speedup':>9} {'max|dy|':>10}"
    print(header)
    print("-" * len(header))
    for label, work in cases:
        times, outs = {}, {}
        for name, mod in backends.items():
            times[name], outs[name] = time_call(lambda m=mod: work(m),
                                                args.repeats)
        row = f"{label:<26} " + "".join(
            f"{times[name] * 1e3:>10.2f}ms " for name in sorted(backends))
        if len(backends) == 2:
            speedup = times["pure"] / times["cython"]
            gap = float(np.max(np.abs(outs["pure"][0] - outs["cython"][0])))
            row += f"{speedup:>8.1f}x {gap:>10.2e}"
        print(row)


if __name__ == "__main__":
    main()
