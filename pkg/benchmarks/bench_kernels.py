"""Timing comparison of the compiled and pure-Python gate kernels.

Runs the same random gate sequences through every available backend and
prints per-gate timings plus the end-to-end speedup on a full cloning
machine simulation.  Usage:

    python3 benchmarks/bench_kernels.py [--wires N] [--gates N]
"""

import argparse
import time

import numpy as np

from probclone.kernels import available_backends
from probclone.sim import assemble, simulate
from probclone.statesets import symmetric_pair
from probclone.synthesis import Clone, MachineSpec, build_unitary


def bench_kernels(wires, gates, repeats=5):
    rng = np.random.default_rng(1)
    dim = 1 << wires
    base = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    base /= np.linalg.norm(base)

    ops = []
    for _ in range(gates):
        kind = rng.integers(0, 4)
        w = int(rng.integers(0, wires))
        other = int(rng.integers(0, wires - 1))
        if other >= w:
            other += 1
        a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        q, r = np.linalg.qr(a)
        u = q * (np.diag(r) / np.abs(np.diag(r)))
        ops.append((int(kind), w, other, u))

    results = {}
    for name, mod in sorted(available_backends().items()):
        best = float("inf")
        for _ in range(repeats):
            amps = base.copy()
            t0 = time.perf_counter()
            for kind, w, other, u in ops:
                if kind == 0:
                    mod.apply_single(amps, wires, w, u[0, 0], u[0, 1], u[1, 0], u[1, 1])
                elif kind == 1:
                    mod.apply_x(amps, wires, w)
                elif kind == 2:
                    mod.apply_cnot(amps, wires, other, w)
                else:
                    cmask = 1 << (wires - 1 - other)
                    mod.apply_controlled(
                        amps, wires, cmask, w, u[0, 0], u[0, 1], u[1, 0], u[1, 1]
                    )
            best = min(best, time.perf_counter() - t0)
        results[name] = best
    return results


def bench_machine(repeats=3):
    """End-to-end: assemble and simulate a two-qubit 2->3 cloning machine."""
    s = symmetric_pair(np.pi / 6)
    g = (1.0 - np.cos(np.pi / 3) ** 2) / (1.0 - np.cos(np.pi / 3) ** 3)
    spec = MachineSpec.validated(s, Clone(2, 3), (g, g))
    res = build_unitary(s, spec)
    machine = assemble(s, spec, res)

    timings = {}
    for name, mod in sorted(available_backends().items()):
        import probclone.kernels as kernels

        saved = (
            kernels.apply_single,
            kernels.apply_x,
            kernels.apply_cnot,
            kernels.apply_controlled,
        )
        kernels.apply_single = mod.apply_single
        kernels.apply_x = mod.apply_x
        kernels.apply_cnot = mod.apply_cnot
        kernels.apply_controlled = mod.apply_controlled
        try:
            best = float("inf")
            for _ in range(repeats):
                t0 = time.perf_counter()
                simulate(s, spec, res, machine)
                best = min(best, time.perf_counter() - t0)
            timings[name] = best
        finally:
            (
                kernels.apply_single,
                kernels.apply_x,
                kernels.apply_cnot,
                kernels.apply_controlled,
            ) = saved
    return timings


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--wires", type=int, default=12)
    parser.add_argument("--gates", type=int, default=200)
    args = parser.parse_args()

    print("gate kernels: %d wires, %d random gates" % (args.wires, args.gates))
    results = bench_kernels(args.wires, args.gates)
    for name, secs in sorted(results.items()):
        rate = args.gates / secs
        print("  %-9s %8.2f ms   (%9.0f gates/s)" % (name, secs * 1e3, rate))
    if "compiled" in results and "python" in results:
        print(
            "  speedup (compiled vs python): %.1fx"
            % (results["python"] / results["compiled"])
        )

    print("machine simulation: symmetric pair, 2 -> 3 cloning, 4 wires")
    timings = bench_machine()
    for name, secs in sorted(timings.items()):
        print("  %-9s %8.2f ms per simulate()" % (name, secs * 1e3))


if __name__ == "__main__":
    main()
