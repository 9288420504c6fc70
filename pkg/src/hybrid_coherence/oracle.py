"""Brute-force zero-temperature oracle: a discretised star bath.

The continuum is replaced by N modes on a midpoint grid and the single
excitation Schroedinger equation is integrated directly. Because the
Hamiltonian conserves the nuclear sigma_z, the two nuclear sectors are
independent emitters at omega1 and omega2 sharing the same modes.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .bath import BathParams, spectral_density
from .system import InitialState, SystemParams


class StepSizeError(RuntimeError):
    """Norm drift of the fixed-step integrator exceeded its bound."""


class RecurrenceWarning(UserWarning):
    """Propagation window reaches the discrete-bath recurrence time."""


@dataclass(frozen=True)
class DiscretizedBath:
    nu_k: np.ndarray
    c_k: np.ndarray
    nu_max: float

    @property
    def n_modes(self) -> int:
        return self.nu_k.size

    @property
    def spacing(self) -> float:
        return self.nu_max / self.n_modes

    @property
    def recurrence_time(self) -> float:
        return 2 * math.pi / self.spacing


@dataclass
class SectorTrajectory:
    """Sampled amplitudes of one nuclear sector."""

    times: np.ndarray
    a: np.ndarray       # electron-excited amplitude a_m(t)
    alpha: np.ndarray   # bath-excited amplitudes, shape (n_times, n_modes)

    @property
    def norm(self) -> np.ndarray:
        return np.abs(self.a) ** 2 + np.sum(np.abs(self.alpha) ** 2, axis=1)


def discretize_bath(bath: BathParams, n_modes: int = 4000, nu_max: float = 10.0) -> DiscretizedBath:
    """Midpoint star discretisation: nu_k = (k - 1/2) dnu, c_k = sqrt(J(nu_k) dnu / pi)."""
    if n_modes < 1 or nu_max <= 0:
        raise ValueError("need n_modes >= 1 and nu_max > 0")
    dnu = nu_max / n_modes
    nu = (np.arange(n_modes) + 0.5) * dnu
    c = np.sqrt(spectral_density(bath, nu) * dnu / math.pi)
    return DiscretizedBath(nu_k=nu, c_k=np.atleast_1d(c), nu_max=nu_max)


def max_stable_step(sys: SystemParams, dbath: DiscretizedBath) -> float:
    return 0.05 / max(dbath.nu_max, sys.omega0)


def propagate_sector(sys: SystemParams, dbath: DiscretizedBath, sector: int, a_m0: complex,
                     t_final: float, dt: float | None = None, n_samples: int = 201,
                     ) -> SectorTrajectory:
    """Integrate one nuclear sector (1: nucleus down, 2: nucleus up) from alpha = 0."""
    if sector not in (1, 2):
        raise ValueError("sector must be 1 or 2")
    if dt is None:
        dt = max_stable_step(sys, dbath)
    if dt > max_stable_step(sys, dbath) * (1 + 1e-12):
        raise ValueError(f"dt={dt} does not resolve the fastest phase; "
                         f"need dt <= {max_stable_step(sys, dbath):.3g}")
    omega = sys.omega1 if sector == 1 else sys.omega2
    n_steps = max(1, int(math.ceil(t_final / dt - 1e-9)))
    sample_every = max(1, n_steps // max(n_samples - 1, 1))
    n_steps = sample_every * (n_steps // sample_every + (n_steps % sample_every > 0))
    a, alpha = kernels.star_rk4(
        np.ascontiguousarray(dbath.c_k, dtype=float),
        np.ascontiguousarray(omega - dbath.nu_k, dtype=float),
        complex(a_m0), float(dt), int(n_steps), int(sample_every),
    )
    times = np.arange(a.size) * sample_every * dt
    traj = SectorTrajectory(times=times, a=a, alpha=alpha)
    drift = np.max(np.abs(traj.norm - abs(a_m0) ** 2))
    if drift > 1e-6:
        raise StepSizeError(f"norm drift {drift:.2e} exceeds 1e-6; reduce dt")
    return traj


@dataclass
class OracleResult:
    times: np.ndarray
    coherence: np.ndarray          # rho_{dd,du}(t) = sum_k alpha_1k alpha_2k*
    sectors: tuple[SectorTrajectory, SectorTrajectory]

    @property
    def steady(self) -> complex:
        return complex(self.coherence[-1])


def default_t_final(bath: BathParams) -> float:
    return 12.0 / bath.gamma0


def oracle_coherence(sys: SystemParams, bath: BathParams, init: InitialState = InitialState(),
                     n_modes: int = 4000, nu_max: float = 10.0, t_final: float | None = None,
                     dt: float | None = None, n_samples: int = 201) -> OracleResult:
    """Ground-state nuclear coherence of the discretised model versus time."""
    if not bath.zero_temperature:
        raise ValueError("the discretised-bath oracle is zero-temperature only")
    if t_final is None:
        t_final = default_t_final(bath)
    dbath = discretize_bath(bath, n_modes, nu_max)
    if t_final > 0.5 * dbath.recurrence_time:
        warnings.warn(f"t_final={t_final:.4g} exceeds half the recurrence time "
                      f"{dbath.recurrence_time:.4g}", RecurrenceWarning, stacklevel=2)
    sectors = []
    for m, amp in ((1, init.a1_0), (2, init.a2_0)):
        if amp == 0:
            sectors.append(None)
        elif m == 2 and sys.omega1 == sys.omega2 and sectors[0] is not None:
            # identical sector Hamiltonians: the propagation is linear in a_m0
            first, scale = sectors[0], amp / init.a1_0
            sectors.append(SectorTrajectory(first.times, first.a * scale, first.alpha * scale))
        else:
            sectors.append(propagate_sector(sys, dbath, m, amp, t_final, dt, n_samples))
    ref = next(s for s in sectors if s is not None)
    if any(s is None for s in sectors):
        coh = np.zeros(ref.times.size, dtype=complex)
    else:
        coh = np.einsum("tk,tk->t", sectors[0].alpha, sectors[1].alpha.conj())
    return OracleResult(times=ref.times, coherence=coh, sectors=tuple(sectors))
