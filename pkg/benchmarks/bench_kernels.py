"""Compare the compiled and numpy kernels on representative workloads.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Prints wall time per kernel and backend, the speed-up, and the largest
difference between the two outputs.
"""
import argparse
import time

import numpy as np

from hybrid_coherence import _pykernels
from hybrid_coherence.bath import BathParams
from hybrid_coherence.oracle import discretize_bath
from hybrid_coherence.rtn import RtnParams, sample_telegraph

try:
    from hybrid_coherence import _kernels
except ImportError:  # extension not built
    _kernels = None


def best_of(func, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        out = func()
        times.append(time.perf_counter() - start)
    return min(times), out


def star_workload():
    dbath = discretize_bath(BathParams(gamma0=0.02), n_modes=4000, nu_max=10.0)
    detuning = np.ascontiguousarray(0.8 - dbath.nu_k)
    args = (dbath.c_k, detuning, complex(2**-0.5), 0.005, 2000, 100)
    return "star_rk4 (4000 modes, 2000 steps)", args


def telegraph_workload():
    rtn = RtnParams(lam=1.0, g=0.1, n_traj=4096, seed=1)
    t = np.linspace(0.0, 50.0, 101)
    switches, _ = sample_telegraph(rtn, t[-1], 0, rtn.n_traj)
    return "telegraph_on_grid (4096 paths, 101 times)", (switches, t)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)
    if _kernels is None:
        print("compiled extension not available; only the numpy backend can run")
    for name, (label, data) in (("star_rk4", star_workload()),
                                ("telegraph_on_grid", telegraph_workload())):
        t_py, out_py = best_of(lambda: getattr(_pykernels, name)(*data), args.repeat)
        line = f"{label:45s} numpy {t_py * 1e3:9.1f} ms"
        if _kernels is not None:
            t_cy, out_cy = best_of(lambda: getattr(_kernels, name)(*data), args.repeat)
            diff = max(float(np.max(np.abs(np.asarray(a, dtype=complex) - b)))
                       for a, b in zip(out_py, out_cy))
            line += f"   cython {t_cy * 1e3:9.1f} ms   speed-up {t_py / t_cy:5.2f}x   max diff {diff:.1e}"
        print(line)


if __name__ == "__main__":
    main()
