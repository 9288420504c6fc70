"""Parameter sweeps behind the figure subcommands, and CSV output.

Each sweep turns a resolved configuration into a header plus rows. Grid
points are independent; they are farmed out to a process pool when more
than one worker is configured, and results are collected in grid order.
"""
from __future__ import annotations

import csv
import io
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import config as cfgmod
from .bath import spectral_width
from .exact import exact_steady_coherence
from .oracle import oracle_coherence
from .redfield import (
    PositivityWarning, coherence_trajectories, integrate_redfield, mqme_coefficients,
    nuclear_coherence, qss_extract,
)
from .rtn import (
    ExpansionWarning, RtnParams, fit_decay_rate, flip_rate, kappa_sc, kappa_telegraph_exact,
    simulate_rtn_ensemble,
)


@dataclass
class Table:
    header: list[str]
    rows: list[list[float]]

    def column(self, name: str) -> np.ndarray:
        i = self.header.index(name)
        return np.array([row[i] for row in self.rows], dtype=float)


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".12g")


def to_csv(table: Table) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.header)
    for row in table.rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def write_csv(table: Table, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(to_csv(table))


def _map(func, items, n_workers: int):
    items = list(items)
    if n_workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ProcessPoolExecutor(max_workers=min(n_workers, len(items))) as pool:
        return list(pool.map(func, items))


# --- fig2: zero-temperature steady coherence versus g ------------------------

def _fig2_point(args):
    cfg, gamma0, g = args
    sys = cfgmod.system_params(cfg, g)
    bath = cfgmod.bath_params(cfg, gamma0=gamma0)
    quad = cfgmod.quad_config(cfg)
    exact = exact_steady_coherence(sys, bath, quad=quad)
    bm = mqme_coefficients(sys, bath, quad=quad, model=cfgmod.rate_model(cfg)).r_lower
    row = [gamma0, g, abs(exact), exact.real, exact.imag, abs(bm), bm.real, bm.imag]
    if cfg["oracle"]["enabled"]:
        o = cfg["oracle"]
        res = oracle_coherence(sys, bath, n_modes=int(o["n_modes"]), nu_max=float(o["nu_max"]),
                               t_final=o["t_final"], dt=o["dt"])
        row += [abs(res.steady), res.steady.real, res.steady.imag]
    return row


def run_fig2(cfg: dict) -> Table:
    """|steady coherence| in the electron ground state: exact and Born-Markov, per gamma0."""
    header = ["gamma0", "g", "exact_abs", "exact_re", "exact_im", "bm_abs", "bm_re", "bm_im"]
    if cfg["oracle"]["enabled"]:
        header += ["oracle_abs", "oracle_re", "oracle_im"]
    gammas = cfgmod.make_grid(cfg["sweep"]["gamma0"], "sweep.gamma0")
    gs = cfgmod.make_grid(cfg["sweep"]["g"], "sweep.g")
    points = [(cfg, float(gm), float(g)) for gm in gammas for g in gs]
    return Table(header, _map(_fig2_point, points, cfgmod.workers(cfg)))


# --- fig3: quasi-steady coherences versus temperature ------------------------

def _fig3_point(args):
    cfg, beta = args
    sys = cfgmod.system_params(cfg)
    bath = cfgmod.bath_params(cfg, inv_temp=beta)
    sol = mqme_coefficients(sys, bath, quad=cfgmod.quad_config(cfg), model=cfgmod.rate_model(cfg))
    qss = qss_extract(sol)
    return [beta, abs(sol.r_lower), abs(sol.r_upper),
            sol.kappa_plus.real, sol.kappa_plus.imag, sol.kappa_minus.real, sol.kappa_minus.imag,
            qss.ratio, qss.meaningful]


def run_fig3(cfg: dict) -> Table:
    """|r_lower|, |r_upper|, kappa_+- and the quasi-steady-state flag versus omega0/kT."""
    header = ["inv_temp", "r_lower_abs", "r_upper_abs",
              "kappa_plus_re", "kappa_plus_im", "kappa_minus_re", "kappa_minus_im",
              "qss_ratio", "qss_meaningful"]
    temps = cfgmod.make_grid(cfg["sweep"]["inv_temp"], "sweep.inv_temp")
    return Table(header, _map(_fig3_point, [(cfg, float(b)) for b in temps], cfgmod.workers(cfg)))


# --- fig4: quantum decay rates against the telegraph-noise rate --------------

def _mc_rate(cfg: dict, lam: float, g: float) -> tuple[float, float]:
    mc = cfg["mc"]
    rtn = RtnParams(lam=lam, g=g, n_traj=int(mc["n_traj"]), seed=int(mc["seed"]))
    t = np.linspace(0.0, 50.0 / lam, int(mc["n_times"]))
    return fit_decay_rate(simulate_rtn_ensemble(rtn, t), lam)


def _fig4_point(args):
    cfg, beta, width, validate = args
    sys = cfgmod.system_params(cfg)
    bath = cfgmod.bath_params(cfg, inv_temp=beta)
    sol = mqme_coefficients(sys, bath, quad=cfgmod.quad_config(cfg), model=cfgmod.rate_model(cfg))
    lam = flip_rate(sys, bath)
    rtn = RtnParams(lam=lam, g=sys.g, n_traj=1)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ExpansionWarning)
        ksc = kappa_sc(rtn)
    ksc_lead = kappa_sc(rtn, corrected=False)
    mc_rate, mc_err = _mc_rate(cfg, lam, sys.g) if validate else (math.nan, math.nan)
    return [beta, sol.kappa_plus.real, sol.kappa_minus.real, lam, ksc, ksc_lead,
            kappa_telegraph_exact(rtn), (sol.kappa_minus.real - ksc_lead) / ksc_lead,
            width, sol.kappa_plus.real / width, mc_rate, mc_err]


def run_fig4(cfg: dict) -> Table:
    """Re kappa_+-, kappa_SC, spectral width W and Re kappa_+ / W versus omega0/kT.

    ``mc.validate_at`` names the grid point (nearest in log omega0/kT) where
    the telegraph Monte Carlo rate is computed; other rows carry NaN there.
    """
    header = ["inv_temp", "kappa_plus_re", "kappa_minus_re", "flip_rate", "kappa_sc",
              "kappa_sc_leading", "kappa_telegraph", "kappa_minus_rel_dev",
              "width", "markov_ratio", "mc_rate", "mc_stderr"]
    temps = cfgmod.make_grid(cfg["sweep"]["inv_temp"], "sweep.inv_temp")
    width = spectral_width(cfgmod.bath_params(cfg), cfgmod.quad_config(cfg))
    target = cfg["mc"].get("validate_at")
    pick = -1 if target is None else int(np.argmin(np.abs(np.log(temps / float(target)))))
    points = [(cfg, float(b), width, i == pick) for i, b in enumerate(temps)]
    return Table(header, _map(_fig4_point, points, cfgmod.workers(cfg)))


# --- evolve: coherence trajectories -------------------------------------------

def run_evolve(cfg: dict) -> Table:
    """Coherence blocks versus time: closed form, integrated master equation, oracle at T=0."""
    sys = cfgmod.system_params(cfg)
    bath = cfgmod.bath_params(cfg)
    quad, model = cfgmod.quad_config(cfg), cfgmod.rate_model(cfg)
    sol = mqme_coefficients(sys, bath, quad=quad, model=model)
    ode = cfg["ode"]
    t_final = ode["t_final"]
    if t_final is None:
        slow = sol.kappa_minus.real if sol.kappa_minus.real > 1e-12 else sol.kappa_plus.real
        t_final = min(12.0 / max(slow, 1e-12), 12.0 / bath.gamma0 if bath.gamma0 else 100.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", PositivityWarning)
        traj = integrate_redfield(sys, bath, None, float(t_final), dt=ode["dt"],
                                  n_samples=int(ode["n_samples"]), quad=quad, model=model)
    t = traj.times
    lower, upper = coherence_trajectories(sol, t)
    nuc = nuclear_coherence(lower, upper, sys.g, t)
    header = ["t", "lower_re", "lower_im", "upper_re", "upper_im", "nuclear_abs",
              "ode_lower_re", "ode_lower_im", "ode_upper_re", "ode_upper_im", "ode_nuclear_abs",
              "ode_min_eigenvalue"]
    cols = [t, lower.real, lower.imag, upper.real, upper.imag, np.abs(nuc),
            traj.lower.real, traj.lower.imag, traj.upper.real, traj.upper.imag,
            np.abs(traj.nuclear), np.full(t.size, traj.min_eigenvalue)]
    o = cfg["oracle"]
    if o["enabled"] and bath.zero_temperature:
        res = oracle_coherence(sys, bath, n_modes=int(o["n_modes"]), nu_max=float(o["nu_max"]),
                               t_final=float(t_final), dt=o["dt"], n_samples=t.size)
        header += ["oracle_lower_re", "oracle_lower_im"]
        oracle_lower = np.interp(t, res.times, res.coherence.real), \
            np.interp(t, res.times, res.coherence.imag)
        cols += list(oracle_lower)
    return Table(header, [list(r) for r in zip(*cols)])


# --- oracle-check: exact quadrature against the discretised bath ------------

def _oracle_point(args):
    cfg, gamma0, g = args
    sys = cfgmod.system_params(cfg, g)
    bath = cfgmod.bath_params(cfg, gamma0=gamma0)
    exact = exact_steady_coherence(sys, bath, quad=cfgmod.quad_config(cfg))
    o = cfg["oracle"]
    res = oracle_coherence(sys, bath, n_modes=int(o["n_modes"]), nu_max=float(o["nu_max"]),
                           t_final=o["t_final"], dt=o["dt"])
    drift = max(float(np.max(np.abs(s.norm - s.norm[0]))) for s in res.sectors if s is not None)
    return [gamma0, g, abs(exact), exact.real, exact.imag, abs(res.steady), res.steady.real,
            res.steady.imag, abs(exact - res.steady), drift]


def run_oracle_check(cfg: dict) -> Table:
    header = ["gamma0", "g", "exact_abs", "exact_re", "exact_im", "oracle_abs", "oracle_re",
              "oracle_im", "abs_diff", "norm_drift"]
    gammas = cfgmod.make_grid(cfg["sweep"]["gamma0"], "sweep.gamma0")
    gs = cfgmod.make_grid(cfg["sweep"]["g"], "sweep.g")
    points = [(cfg, float(gm), float(g)) for gm in gammas for g in gs]
    return Table(header, _map(_oracle_point, points, cfgmod.workers(cfg)))


RUNNERS = {"fig2": run_fig2, "fig3": run_fig3, "fig4": run_fig4, "evolve": run_evolve,
           "oracle-check": run_oracle_check}
