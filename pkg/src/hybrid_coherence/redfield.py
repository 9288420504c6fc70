"""Non-secular Bloch-Redfield treatment of the spin pair at finite temperature.

Basis order is (dd, du, ud, uu) with the electron first. The transition
operators are A1 = |dd><ud| and A2 = |du><uu|, with frequencies
omega1 = omega0 - 2g and omega2 = omega0 + 2g. Everything is written in the
interaction picture, where the only explicit time dependence is the phase
exp(+-4igt) multiplying the cross terms between the two transitions.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .bath import (
    DEFAULT_QUAD, BathParams, ComplexRatePair, QuadratureConfig, RateModel, gamma_rates,
)
from .system import InitialState, SystemParams

DD, DU, UD, UU = range(4)

A1 = np.zeros((4, 4), dtype=complex)
A1[DD, UD] = 1.0
A2 = np.zeros((4, 4), dtype=complex)
A2[DU, UU] = 1.0
_TRANSITIONS = (A1, A2)

QSS_THRESHOLD = 0.1


class DensityMatrixError(RuntimeError):
    """Trace or Hermiticity drifted out of tolerance."""


class PositivityWarning(UserWarning):
    """The non-secular generator drove an eigenvalue of rho below tolerance."""


def paper_initial_state() -> np.ndarray:
    """Electron up, nucleus (|d> + |u>)/sqrt 2."""
    return InitialState().density_matrix()


def lower_coherence(rho: np.ndarray) -> complex:
    return complex(rho[..., DD, DU]) if np.ndim(rho) == 2 else rho[..., DD, DU]


def upper_coherence(rho: np.ndarray) -> complex:
    return complex(rho[..., UD, UU]) if np.ndim(rho) == 2 else rho[..., UD, UU]


@dataclass(frozen=True)
class TransitionRates:
    """Gamma_down, Gamma_up at omega1 and omega2."""

    at_omega1: ComplexRatePair
    at_omega2: ComplexRatePair

    @property
    def gamma_up_tot(self) -> complex:
        return self.at_omega1.gamma_up + self.at_omega2.gamma_up.conjugate()

    @property
    def gamma_down_tot(self) -> complex:
        return self.at_omega1.gamma_down + self.at_omega2.gamma_down.conjugate()


def transition_rates(sys: SystemParams, bath: BathParams, quad: QuadratureConfig = DEFAULT_QUAD,
                     model: RateModel = RateModel.FULL) -> TransitionRates:
    return TransitionRates(gamma_rates(bath, sys.omega1, quad, model),
                           gamma_rates(bath, sys.omega2, quad, model))


@dataclass(frozen=True)
class MqmeSolution:
    g: float
    gamma_up_tot: complex
    gamma_down_tot: complex
    kappa_plus: complex
    kappa_minus: complex
    r_lower: complex
    r_upper: complex
    rho_lower0: complex
    rho_upper0: complex


def solve_kappa(g: float, gamma_up: complex, gamma_down: complex) -> tuple[complex, complex]:
    """Roots of k^2 - (gu + gd - 4ig) k - 4ig gu = 0, ordered Re k+ >= Re k-."""
    total = gamma_up + gamma_down - 4j * g
    root = cmath.sqrt(total * total + 16j * g * gamma_up)
    kp, km = 0.5 * (total + root), 0.5 * (total - root)
    if km.real > kp.real:
        kp, km = km, kp
    if gamma_up == 0:
        # exact zero-temperature limit: one root vanishes identically
        kp, km = total, 0j
    return kp, km


def mqme_from_rates(g: float, gamma_up: complex, gamma_down: complex,
                    rho_lower0: complex, rho_upper0: complex) -> MqmeSolution:
    kp, km = solve_kappa(g, gamma_up, gamma_down)
    if kp == km:
        # degenerate roots only without any bath coupling; no dynamics
        r_low = r_up = 0j
    else:
        r_low = (gamma_down * rho_upper0 - (gamma_up - kp) * rho_lower0) / (kp - km)
        r_up = r_low * (gamma_up - km) / gamma_down if gamma_down != 0 else 0j
    return MqmeSolution(g=g, gamma_up_tot=gamma_up, gamma_down_tot=gamma_down,
                        kappa_plus=kp, kappa_minus=km, r_lower=r_low, r_upper=r_up,
                        rho_lower0=rho_lower0, rho_upper0=rho_upper0)


def mqme_coefficients(sys: SystemParams, bath: BathParams, init: np.ndarray | None = None,
                      quad: QuadratureConfig = DEFAULT_QUAD,
                      model: RateModel = RateModel.FULL) -> MqmeSolution:
    """Decay constants kappa_+- and quasi-steady amplitudes r for a given bath."""
    rho0 = paper_initial_state() if init is None else np.asarray(init)
    rates = transition_rates(sys, bath, quad, model)
    return mqme_from_rates(sys.g, rates.gamma_up_tot, rates.gamma_down_tot,
                           complex(rho0[DD, DU]), complex(rho0[UD, UU]))


def coherence_trajectories(sol: MqmeSolution, t):
    """(rho_{dd,du}(t), rho_{ud,uu}(t)) in the interaction picture."""
    t = np.asarray(t, dtype=float)
    fast = np.exp(-sol.kappa_plus * t)
    slow = np.exp(-sol.kappa_minus * t)
    lower = sol.r_lower * (slow - fast) + sol.rho_lower0 * fast
    upper = (sol.r_upper * (slow - fast) + sol.rho_upper0 * fast) * np.exp(-4j * sol.g * t)
    if t.ndim == 0:
        return complex(lower), complex(upper)
    return lower, upper


def nuclear_coherence(lower, upper, g: float, t):
    """Coherence of the nucleus after tracing out the electron, up to a global phase.

    The upper block carries an extra exp(-4igt) relative to the lower one in
    the interaction picture; undoing it makes the two add in phase.
    """
    return lower + upper * np.exp(4j * g * np.asarray(t, dtype=float))


class QssResult(NamedTuple):
    r_lower: complex
    r_upper: complex
    ratio: float
    meaningful: bool


def qss_extract(sol: MqmeSolution, threshold: float = QSS_THRESHOLD) -> QssResult:
    """Quasi-steady coherences and the slow/fast timescale ratio Re k- / Re k+."""
    ratio = sol.kappa_minus.real / sol.kappa_plus.real if sol.kappa_plus.real else math.inf
    return QssResult(sol.r_lower, sol.r_upper, ratio, ratio < threshold)


def high_temperature_rates(sol: MqmeSolution) -> tuple[float, float]:
    """Leading high-T forms Re k+ ~ gu + gd and Re k- ~ 4 g^2 / (gu + gd)."""
    total = (sol.gamma_up_tot + sol.gamma_down_tot).real
    return total, 4 * sol.g**2 / total


def flat_bath_half_width(gamma0: float) -> float:
    """Half width in g of |r_lower(g)| at T=0 with J = gamma0 and no Lamb shift."""
    return gamma0 * math.sqrt(3) / 2


# --- direct integration of the master equation -------------------------------

def _left(a):
    return np.kron(a, np.eye(4))


def _right(a):
    # row-major vec: vec(rho a) = (I kron a^T) vec(rho)
    return np.kron(np.eye(4), a.T)


def redfield_generators(sys: SystemParams, rates: TransitionRates, secular: bool = False):
    """Superoperators (L0, L_plus, L_minus) with L(t) = L0 + e^{4igt} L_plus + e^{-4igt} L_minus.

    Term (i, j) carries the phase exp(i (omega_i - omega_j) t); the secular
    version keeps only i = j unless the two transitions coincide (g = 0).
    """
    omegas = (sys.omega1, sys.omega2)
    pairs = (rates.at_omega1, rates.at_omega2)
    blocks = {0: np.zeros((16, 16), complex), 1: np.zeros((16, 16), complex),
              -1: np.zeros((16, 16), complex)}
    for i in range(2):
        for j in range(2):
            if secular and i != j and omegas[i] != omegas[j]:
                continue
            ai, aj = _TRANSITIONS[i], _TRANSITIONS[j]
            up_i, up_j = pairs[i].gamma_up, pairs[j].gamma_up
            dn_i, dn_j = pairs[i].gamma_down, pairs[j].gamma_down
            ai_d, aj_d = ai.conj().T, aj.conj().T
            # Gu(w_i) D^up_ij:  A_i^+ rho A_j - A_j A_i^+ rho
            term = up_i * (_left(ai_d) @ _right(aj) - _left(aj @ ai_d))
            # Gu*(w_j) (D^up_ji)^+:  A_i^+ rho A_j - rho A_j A_i^+
            term += np.conj(up_j) * (_left(ai_d) @ _right(aj) - _right(aj @ ai_d))
            # Gd(w_j) D^down_ji:  A_j rho A_i^+ - A_i^+ A_j rho
            term += dn_j * (_left(aj) @ _right(ai_d) - _left(ai_d @ aj))
            # Gd*(w_i) (D^down_ij)^+:  A_j rho A_i^+ - rho A_i^+ A_j
            term += np.conj(dn_i) * (_left(aj) @ _right(ai_d) - _right(ai_d @ aj))
            key = 0 if i == j else (1 if i == 1 else -1)
            blocks[key] += term
    return blocks[0], blocks[1], blocks[-1]


@dataclass
class RedfieldTrajectory:
    times: np.ndarray
    rho: np.ndarray   # (n_times, 4, 4)
    g: float
    min_eigenvalue: float = 0.0

    @property
    def lower(self) -> np.ndarray:
        return self.rho[:, DD, DU]

    @property
    def upper(self) -> np.ndarray:
        return self.rho[:, UD, UU]

    @property
    def nuclear(self) -> np.ndarray:
        return nuclear_coherence(self.lower, self.upper, self.g, self.times)


def check_density_matrix(rho: np.ndarray, t: float, tol: float = 1e-8) -> float:
    """Abort on trace or Hermiticity drift; return the smallest eigenvalue."""
    tr = np.trace(rho)
    if abs(tr - 1) > tol:
        raise DensityMatrixError(f"trace drift {abs(tr - 1):.2e} at t={t:.4g}")
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > tol:
        raise DensityMatrixError(f"Hermiticity drift {herm:.2e} at t={t:.4g}")
    return float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0])


def default_step(sys: SystemParams, rates: TransitionRates) -> float:
    """Step with dt |kappa_+| <= 0.05 and the cross-term phase resolved as well."""
    kp, _ = solve_kappa(sys.g, rates.gamma_up_tot, rates.gamma_down_tot)
    scale = max(abs(kp), 4 * sys.g, abs(rates.gamma_up_tot) + abs(rates.gamma_down_tot), 1e-12)
    return 0.05 / scale


def integrate_redfield(sys: SystemParams, bath: BathParams, init: np.ndarray | None = None,
                       t_final: float = 100.0, dt: float | None = None, n_samples: int = 201,
                       quad: QuadratureConfig = DEFAULT_QUAD, model: RateModel = RateModel.FULL,
                       secular: bool = False, rates: TransitionRates | None = None,
                       check: bool = True, positivity_tol: float = 1e-8) -> RedfieldTrajectory:
    """Fixed-step RK4 integration of the Redfield equation in the interaction picture."""
    rho0 = paper_initial_state() if init is None else np.asarray(init, dtype=complex)
    if rates is None:
        rates = transition_rates(sys, bath, quad, model)
    l0, lp, lm = redfield_generators(sys, rates, secular)
    if dt is None:
        dt = default_step(sys, rates)
    n_steps = max(1, int(math.ceil(t_final / dt - 1e-9)))
    sample_every = max(1, n_steps // max(n_samples - 1, 1))
    n_steps = sample_every * math.ceil(n_steps / sample_every)
    w = 4 * sys.g

    def rhs(t, y):
        return l0 @ y + cmath.exp(1j * w * t) * (lp @ y) + cmath.exp(-1j * w * t) * (lm @ y)

    y = rho0.reshape(16).copy()
    min_eig = 0.0
    times = [0.0]
    out = [rho0.copy()]
    for step in range(n_steps):
        t = step * dt
        k1 = rhs(t, y)
        k2 = rhs(t + 0.5 * dt, y + 0.5 * dt * k1)
        k3 = rhs(t + 0.5 * dt, y + 0.5 * dt * k2)
        k4 = rhs(t + dt, y + dt * k3)
        y = y + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        if (step + 1) % sample_every == 0:
            rho = y.reshape(4, 4)
            if check:
                min_eig = min(min_eig, check_density_matrix(rho, (step + 1) * dt))
            times.append((step + 1) * dt)
            out.append(rho.copy())
    if min_eig < -positivity_tol:
        warnings.warn(f"Redfield state lost positivity: smallest eigenvalue {min_eig:.2e}",
                      PositivityWarning, stacklevel=2)
    return RedfieldTrajectory(times=np.array(times), rho=np.array(out), g=sys.g,
                              min_eigenvalue=min_eig)


def secular_comparator(sys: SystemParams, bath: BathParams, init: np.ndarray | None = None,
                       t_final: float | None = None, quad: QuadratureConfig = DEFAULT_QUAD,
                       model: RateModel = RateModel.FULL) -> complex:
    """Long-time nuclear coherence when the non-secular cross terms are dropped."""
    rates = transition_rates(sys, bath, quad, model)
    if t_final is None:
        slowest = min(r for r in (rates.gamma_down_tot.real, rates.gamma_up_tot.real) if r > 0)
        t_final = 40.0 / slowest
    traj = integrate_redfield(sys, bath, init, t_final, rates=rates, secular=True,
                              n_samples=11, check=False)
    return complex(traj.nuclear[-1])
