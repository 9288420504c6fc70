"""Structural invariant suite run by the ``selftest`` subcommand.

Each check returns (passed, detail). The suite prints one PASS/FAIL line per
check and reports overall success.
"""
from __future__ import annotations

import math
import sys as _sys
import time
import warnings

import numpy as np

from . import kernels
from .bath import BathParams, RateModel, gamma_rates
from .oracle import discretize_bath, propagate_sector
from .redfield import (
    DensityMatrixError, PositivityWarning, integrate_redfield, solve_kappa, transition_rates,
)
from .rtn import RtnParams, simulate_rtn_ensemble
from .system import SystemParams

_TEMPS = (math.inf, 10.0, 1.0, 0.01)


def check_trace_hermiticity():
    worst = 0.0
    for beta in _TEMPS:
        for model in (RateModel.FULL, RateModel.FLAT):
            sys = SystemParams(g=0.1)
            bath = BathParams(gamma0=0.02, inv_temp=beta)
            try:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", PositivityWarning)
                    traj = integrate_redfield(sys, bath, t_final=200.0, model=model, n_samples=51)
            except DensityMatrixError as exc:
                return False, str(exc)
            tr = np.abs(np.trace(traj.rho, axis1=1, axis2=2) - 1).max()
            herm = np.abs(traj.rho - traj.rho.conj().transpose(0, 2, 1)).max()
            worst = max(worst, tr, herm)
    return worst < 1e-10, f"max trace/Hermiticity drift {worst:.1e}"


def check_detailed_balance():
    worst = 0.0
    for s_exp, xi_c in ((1.0, 1.0), (0.5, 3.0), (2.0, 0.7)):
        for beta in (0.01, 0.5, 3.0):
            bath = BathParams(gamma0=0.02, xi_c=xi_c, s_exp=s_exp, inv_temp=beta)
            for omega in (0.3, 0.8, 1.2):
                pair = gamma_rates(bath, omega, model=RateModel.NO_LAMB_SHIFT)
                ratio = pair.gamma_up.real / pair.gamma_down.real
                worst = max(worst, abs(ratio / math.exp(-beta * omega) - 1))
    return worst < 1e-12, f"max relative violation {worst:.1e}"


def check_kappa_roots():
    worst = 0.0
    rng = np.random.default_rng(12345)
    cases = [(0.1, 0.02 + 0.001j, 0.05 - 0.002j)]
    for _ in range(50):
        g = rng.uniform(0.0, 0.45)
        gu, gd = rng.uniform(0, 5, 2) + 1j * rng.normal(0, 1, 2)
        cases.append((g, complex(gu), complex(gd)))
    for beta in _TEMPS:
        rates = transition_rates(SystemParams(g=0.1), BathParams(inv_temp=beta))
        cases.append((0.1, rates.gamma_up_tot, rates.gamma_down_tot))
    for g, gu, gd in cases:
        kp, km = solve_kappa(g, gu, gd)
        total = gu + gd - 4j * g
        scale = max(abs(total), 1e-300)
        worst = max(worst, abs(kp + km - total) / scale,
                    abs(kp * km + 4j * g * gu) / max(scale**2, abs(4 * g * gu), 1e-300))
    return worst < 1e-12, f"max relative residual {worst:.1e} over {len(cases)} rate sets"


def check_oracle_unitarity():
    sys = SystemParams(g=0.1)
    bath = BathParams(gamma0=0.05)
    dbath = discretize_bath(bath, n_modes=300, nu_max=10.0)
    worst = 0.0
    for sector, amp in ((1, 1 / math.sqrt(2)), (2, 1 / math.sqrt(2))):
        traj = propagate_sector(sys, dbath, sector, amp, t_final=100.0, n_samples=101)
        worst = max(worst, float(np.abs(traj.norm - 0.5).max()))
    return worst < 1e-10, f"max norm drift {worst:.1e} ({kernels.BACKEND} kernel)"


def check_seed_determinism():
    rtn = RtnParams(lam=1.0, g=0.1, n_traj=3000, seed=2024)
    t = np.linspace(0.0, 20.0, 41)
    a = simulate_rtn_ensemble(rtn, t)
    b = simulate_rtn_ensemble(rtn, t)
    c = simulate_rtn_ensemble(RtnParams(lam=1.0, g=0.1, n_traj=3000, seed=2025), t)
    same = np.array_equal(a.coherence, b.coherence) and np.array_equal(a.block_means, b.block_means)
    differs = not np.array_equal(a.coherence, c.coherence)
    return same and differs, "identical seed bit-identical, different seed differs" if same \
        else "repeat run differs"


CHECKS = (
    ("trace and Hermiticity preserved by the master equation", check_trace_hermiticity),
    ("detailed balance of thermal rates", check_detailed_balance),
    ("kappa root sum and product identities", check_kappa_roots),
    ("oracle norm conservation", check_oracle_unitarity),
    ("telegraph ensemble determinism under fixed seed", check_seed_determinism),
)


def run_selftest(stream=None) -> bool:
    stream = stream or _sys.stdout
    all_ok = True
    for name, check in CHECKS:
        start = time.perf_counter()
        try:
            ok, detail = check()
        except Exception as exc:  # a crashing check is a failing check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        all_ok &= ok
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail} "
              f"[{time.perf_counter() - start:.1f}s]", file=stream)
    print(f"selftest: {'all checks passed' if all_ok else 'FAILURES'}", file=stream)
    return all_ok
