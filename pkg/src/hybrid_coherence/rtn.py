"""Semiclassical model: the electron as a classical telegraph process.

The nuclear splitting jumps between +2g and -2g whenever the electron flips,
at a symmetric rate lambda. Motional narrowing makes the nuclear dephasing
rate fall as 2 g^2 / lambda when the flips are fast.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .bath import BathParams, bose_occupation, spectral_density
from .system import SystemParams


class ExpansionWarning(UserWarning):
    """g / lambda too large for the fourth-order rate to be reliable."""


@dataclass(frozen=True)
class RtnParams:
    lam: float
    g: float
    n_traj: int = 100_000
    seed: int = 0

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError(f"flip rate must be positive, got {self.lam}")
        if self.n_traj < 1:
            raise ValueError("need at least one trajectory")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")


def flip_rate(sys: SystemParams, bath: BathParams) -> float:
    """lambda = 2 J(omega0) n(omega0), the high-temperature symmetric flip rate."""
    if bath.zero_temperature:
        raise ValueError("no thermal flips at T=0; the telegraph model does not apply")
    return 2.0 * spectral_density(bath, sys.omega0) * bose_occupation(bath, sys.omega0)


def kappa_sc(rtn: RtnParams, corrected: bool = True) -> float:
    """Cumulant-expansion decay rate 2 g^2/lambda, optionally times (1 - g^2/lambda^2)."""
    ratio = rtn.g / rtn.lam
    if corrected and ratio > 0.3:
        warnings.warn(f"g/lambda = {ratio:.3g}: fourth-order correction exceeds ~10%",
                      ExpansionWarning, stacklevel=2)
    rate = 2 * rtn.g**2 / rtn.lam
    return rate * (1 - ratio**2) if corrected else rate


def kappa_telegraph_exact(rtn: RtnParams) -> float:
    """Slow eigenvalue lambda - sqrt(lambda^2 - 4 g^2) of the two-state coherence equations.

    For g > lambda / 2 the decay is oscillatory and the rate is lambda.
    """
    disc = rtn.lam**2 - 4 * rtn.g**2
    return rtn.lam - math.sqrt(disc) if disc > 0 else rtn.lam


# --- Monte Carlo ---------------------------------------------------------------

_CHUNK = 4096


def _trajectory_generator(seed: int, index: int) -> np.random.Generator:
    # counter-based stream keyed by (seed, trajectory index)
    return np.random.Generator(np.random.Philox(key=(seed << 64) | index))


def sample_telegraph(rtn: RtnParams, t_max: float, start: int, stop: int):
    """Switch times and initial signs for trajectories start..stop-1.

    Returns (switch_times, first_sign); rows of ``switch_times`` are padded
    with +inf past their last switch.
    """
    mean_switches = rtn.lam * t_max
    block = int(mean_switches + 6 * math.sqrt(mean_switches) + 16)
    rows, signs = [], np.empty(stop - start)
    for i, idx in enumerate(range(start, stop)):
        gen = _trajectory_generator(rtn.seed, idx)
        signs[i] = 1.0 if gen.random() < 0.5 else -1.0
        times = np.cumsum(gen.exponential(1.0 / rtn.lam, block))
        while times[-1] <= t_max:
            more = times[-1] + np.cumsum(gen.exponential(1.0 / rtn.lam, block))
            times = np.concatenate([times, more])
        rows.append(times[: np.searchsorted(times, t_max, side="right") + 1])
    width = max(r.size for r in rows)
    out = np.full((len(rows), width), np.inf)
    for i, r in enumerate(rows):
        out[i, : r.size] = r
    return out, signs


def _telegraph_chunks(rtn: RtnParams, t_grid: np.ndarray):
    """Yield (signed dwell integrals, switch counts, first signs) chunk by chunk."""
    for start in range(0, rtn.n_traj, _CHUNK):
        stop = min(start + _CHUNK, rtn.n_traj)
        switches, signs = sample_telegraph(rtn, float(t_grid[-1]), start, stop)
        integral, counts = kernels.telegraph_on_grid(np.ascontiguousarray(switches), t_grid)
        yield integral, counts, signs


@dataclass
class RtnEnsemble:
    times: np.ndarray
    coherence: np.ndarray        # C_n(t) / C_n(0)
    stderr_re: np.ndarray
    stderr_im: np.ndarray
    n_traj: int
    # per-block means of Re/Im exp(i phase), for jackknife error bars
    block_means: np.ndarray = field(repr=False, default=None)


def simulate_rtn_ensemble(rtn: RtnParams, t_grid, n_blocks: int = 20) -> RtnEnsemble:
    """Ensemble average of exp(i int_0^t omega_n ds) over telegraph paths.

    The phase is accumulated exactly between switches, so there is no
    time-step error; only sampling noise.
    """
    t_grid = np.ascontiguousarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or np.any(np.diff(t_grid) < 0) or t_grid[0] < 0:
        raise ValueError("t_grid must be sorted and non-negative")
    n_blocks = max(1, min(n_blocks, rtn.n_traj))
    edges = np.linspace(0, rtn.n_traj, n_blocks + 1).astype(int)
    block_of = np.searchsorted(edges, np.arange(rtn.n_traj), side="right") - 1
    sums = np.zeros((n_blocks, t_grid.size), dtype=complex)
    s_re = np.zeros(t_grid.size)
    s_im = np.zeros(t_grid.size)
    pos = 0
    for integral, _, signs in _telegraph_chunks(rtn, t_grid):
        z = np.exp(1j * (2 * rtn.g) * signs[:, None] * integral)
        idx = block_of[pos: pos + z.shape[0]]
        np.add.at(sums, idx, z)
        s_re += np.sum(z.real**2, axis=0)
        s_im += np.sum(z.imag**2, axis=0)
        pos += z.shape[0]
    n = rtn.n_traj
    mean = sums.sum(axis=0) / n
    counts = np.diff(edges)[:, None]
    var_re = np.maximum(s_re / n - mean.real**2, 0.0)
    var_im = np.maximum(s_im / n - mean.imag**2, 0.0)
    denom = max(n - 1, 1)
    return RtnEnsemble(
        times=t_grid, coherence=mean,
        stderr_re=np.sqrt(var_re * n / denom / n), stderr_im=np.sqrt(var_im * n / denom / n),
        n_traj=n, block_means=sums / counts,
    )


def _weighted_rate(t, c, se):
    y = -np.log(c)
    w = (c / se) ** 2
    design = np.vstack([t, np.ones_like(t)]).T
    lhs = design.T @ (design * w[:, None])
    rhs = design.T @ (w * y)
    return float(np.linalg.solve(lhs, rhs)[0])


def fit_decay_rate(ens: RtnEnsemble, lam: float, window=(5.0, 50.0)) -> tuple[float, float]:
    """Exponential rate of C_n over lambda t in ``window``, with a jackknife error.

    Inverse-variance weighted straight-line fit of -log C_n. The error bar
    comes from deleting one trajectory block at a time, which accounts for
    the correlation between time points of the same paths.
    """
    sel = (ens.times * lam >= window[0]) & (ens.times * lam <= window[1])
    if sel.sum() < 3:
        raise ValueError("fit window holds fewer than three time points")
    t = ens.times[sel]
    se = np.maximum(ens.stderr_re[sel], 1e-300)
    if np.any(ens.coherence.real[sel] <= 0):
        raise ValueError("coherence not positive inside the fit window")
    rate = _weighted_rate(t, ens.coherence.real[sel], se)
    blocks = ens.block_means.real[:, sel]
    nb = blocks.shape[0]
    if nb < 2:
        return rate, math.nan
    sizes = np.full(nb, ens.n_traj / nb)
    total = (blocks * sizes[:, None]).sum(axis=0)
    jack = np.array([
        _weighted_rate(t, (total - blocks[b] * sizes[b]) / (ens.n_traj - sizes[b]), se)
        for b in range(nb)
    ])
    err = math.sqrt((nb - 1) / nb * np.sum((jack - jack.mean()) ** 2))
    return rate, err


@dataclass
class CorrelatorEstimate:
    lags: np.ndarray
    two_point: np.ndarray
    two_point_se: np.ndarray
    four_point: np.ndarray
    four_point_se: np.ndarray
    quadruples: np.ndarray


def rtn_correlators(rtn: RtnParams, lags, quadruples=()) -> CorrelatorEstimate:
    """Monte Carlo <w(0) w(tau)> on ``lags`` and <w(s1) w(s2) w(s3) w(s4)> on ordered quadruples."""
    lags = np.asarray(lags, dtype=float)
    quads = np.asarray(quadruples, dtype=float).reshape(-1, 4)
    if np.any(np.diff(lags) < 0) or np.any(np.diff(quads, axis=1) < 0):
        raise ValueError("lags and quadruple times must be ordered")
    probe = np.unique(np.concatenate([[0.0], lags, quads.ravel()]))
    where = {v: i for i, v in enumerate(probe)}
    li = np.array([where[v] for v in lags], dtype=int)
    qi = np.array([[where[v] for v in q] for q in quads], dtype=int).reshape(-1, 4)
    amp2, amp4 = 4 * rtn.g**2, 16 * rtn.g**4
    s2 = np.zeros(lags.size)
    q2 = np.zeros(lags.size)
    s4 = np.zeros(len(quads))
    q4 = np.zeros(len(quads))
    for _, counts, _ in _telegraph_chunks(rtn, probe):
        parity = np.where(counts % 2 == 0, 1.0, -1.0)
        # w(s) = 2g s0 (-1)^N(s); the initial sign cancels in even products
        p2 = parity[:, [where[0.0]]] * parity[:, li]
        s2 += p2.sum(axis=0)
        q2 += (p2**2).sum(axis=0)
        if len(quads):
            p4 = np.prod(parity[:, qi], axis=2)
            s4 += p4.sum(axis=0)
            q4 += (p4**2).sum(axis=0)
    n = rtn.n_traj

    def stats(s, q, amp):
        m = s / n
        var = np.maximum(q / n - m**2, 0.0) * n / max(n - 1, 1)
        return amp * m, amp * np.sqrt(var / n)

    m2, e2 = stats(s2, q2, amp2)
    m4, e4 = stats(s4, q4, amp4)
    return CorrelatorEstimate(lags, m2, e2, m4, e4, quads)
