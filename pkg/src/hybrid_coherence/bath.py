"""Bosonic bath: spectral density, thermal occupation and complex transition rates.

All frequencies and rates are in units of the electron splitting omega0, with
hbar = k_B = 1. Temperature enters as ``inv_temp = omega0 / k_B T``; the value
``math.inf`` is the zero-temperature bath, for which the absorption rate is
exactly zero.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate, optimize

ZERO_TEMPERATURE = math.inf


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, message: str, error_estimate: float):
        super().__init__(f"{message} (error estimate {error_estimate:.3e})")
        self.error_estimate = error_estimate


@dataclass(frozen=True)
class QuadratureConfig:
    epsabs: float = 1e-9
    epsrel: float = 1e-9
    limit: int = 400
    # half-width of the window excised around the pole; None -> min(omega, xi_c) / 10
    pv_window: float | None = None
    tail_cut: float = 1e-14


DEFAULT_QUAD = QuadratureConfig()


class Weight(enum.Enum):
    """Integrand weight of a Hilbert transform: J, J (n + 1) or J n."""

    PLAIN = "J"
    EMISSION = "J(n+1)"
    ABSORPTION = "Jn"


class RateModel(enum.Enum):
    """How the complex rates Gamma(omega) are evaluated.

    FULL keeps the principal-value (Lamb shift) parts. NO_LAMB_SHIFT keeps the
    real parts J(omega)[n + 1], J(omega) n only. FLAT additionally replaces
    J(omega) by gamma0 at every transition frequency.
    """

    FULL = "full"
    NO_LAMB_SHIFT = "no-lamb"
    FLAT = "flat"


@dataclass(frozen=True)
class BathParams:
    gamma0: float = 0.02
    xi_c: float = 1.0
    s_exp: float = 1.0
    inv_temp: float = ZERO_TEMPERATURE

    def __post_init__(self):
        if not self.gamma0 >= 0:
            raise ValueError(f"gamma0 must be non-negative, got {self.gamma0}")
        if not self.xi_c > 0:
            raise ValueError(f"xi_c must be positive, got {self.xi_c}")
        if not self.s_exp > 0:
            raise ValueError(f"s_exp must be positive, got {self.s_exp}")
        if not self.inv_temp >= 0:
            raise ValueError(f"inv_temp must be >= 0 or inf, got {self.inv_temp}")

    @property
    def zero_temperature(self) -> bool:
        return math.isinf(self.inv_temp)

    @property
    def temperature(self) -> float:
        return 0.0 if self.zero_temperature else 1.0 / self.inv_temp


@dataclass(frozen=True)
class ComplexRatePair:
    gamma_down: complex
    gamma_up: complex


def spectral_density(bath: BathParams, nu):
    """J(nu) = gamma0 (nu/xi_c)^s exp(s - s nu/xi_c); accepts scalars or arrays."""
    nu_arr = np.asarray(nu, dtype=float)
    if np.any(nu_arr < 0):
        raise ValueError("spectral density is defined for nu >= 0 only")
    x = nu_arr / bath.xi_c
    s = bath.s_exp
    with np.errstate(divide="ignore"):
        # log form avoids overflow of x**s * exp(-s x) far in the tail
        logj = s * (np.log(x) + 1.0 - x)
    out = np.where(x > 0, bath.gamma0 * np.exp(logj), 0.0)
    return float(out) if out.ndim == 0 else out


def bose_occupation(bath: BathParams, omega):
    """Bose-Einstein occupation n(omega); exactly zero for the T=0 bath."""
    w = np.asarray(omega, dtype=float)
    if np.any(w <= 0):
        raise ValueError("Bose occupation requires omega > 0")
    if bath.zero_temperature:
        out = np.zeros_like(w)
    else:
        if bath.inv_temp == 0:
            raise ValueError("infinite temperature has divergent occupation")
        x = bath.inv_temp * w
        # e^{-x} / (1 - e^{-x}) stays finite for large x
        out = np.exp(-x) / -np.expm1(-x)
    return float(out) if out.ndim == 0 else out


def upper_cutoff(bath: BathParams, tail_cut: float = 1e-14) -> float:
    """Frequency beyond the peak where J drops to ``tail_cut * gamma0``.

    Capped at xi_c (1 + 40/s).
    """
    s = bath.s_exp
    target = math.log(tail_cut) / s
    # ln x + 1 - x is decreasing for x > 1
    x = optimize.brentq(lambda x: math.log(x) + 1.0 - x - target, 1.0, 1e4)
    return bath.xi_c * min(x, 1.0 + 40.0 / s)


def weight_function(bath: BathParams, weight: Weight) -> Callable[[float], float]:
    if weight is Weight.PLAIN or (bath.zero_temperature and weight is Weight.EMISSION):
        return lambda v: spectral_density(bath, v) if v > 0 else 0.0
    if bath.zero_temperature:
        return lambda v: 0.0
    beta = bath.inv_temp

    def jn(v):
        if v <= 0:
            return 0.0
        x = beta * v
        return spectral_density(bath, v) * math.exp(-x) / -math.expm1(-x)

    if weight is Weight.ABSORPTION:
        return jn
    return lambda v: jn(v) + spectral_density(bath, v) if v > 0 else 0.0


def _quad(f, a, b, quad: QuadratureConfig, points=None) -> float:
    val, err, info, *rest = integrate.quad(
        f, a, b, epsabs=quad.epsabs, epsrel=quad.epsrel, limit=quad.limit,
        points=points, full_output=1,
    )
    tol = max(quad.epsabs, quad.epsrel * abs(val))
    if err > 10 * tol:
        raise QuadratureError(f"quadrature on [{a:.4g}, {b:.4g}] did not converge", err)
    return val


def hilbert_pv(func: Callable[[float], float], omega: float, upper: float,
               window: float, quad: QuadratureConfig = DEFAULT_QUAD) -> float:
    """P int_0^upper func(nu) / (nu - omega) dnu for 0 < omega < upper.

    The pole is removed by folding the window [omega - h, omega + h] onto
    (0, h]: the odd part [f(omega+u) - f(omega-u)] / u is regular at u = 0.
    """
    if not 0 < omega < upper:
        raise ValueError(f"pole omega={omega} must lie inside (0, {upper})")
    h = min(window, omega, upper - omega)
    left = _quad(lambda v: func(v) / (v - omega), 0.0, omega - h, quad) if omega - h > 0 else 0.0
    mid = _quad(lambda u: (func(omega + u) - func(omega - u)) / u, 0.0, h, quad)
    right = _quad(lambda v: func(v) / (v - omega), omega + h, upper, quad)
    return left + mid + right


def principal_value_hilbert(bath: BathParams, weight: Weight, omega: float,
                            quad: QuadratureConfig = DEFAULT_QUAD) -> float:
    """P int_0^inf W(nu) / (nu - omega) dnu for W in {J, J(n+1), Jn}."""
    if omega <= 0:
        raise ValueError("principal value requires omega > 0")
    if weight is Weight.ABSORPTION and bath.zero_temperature:
        return 0.0
    upper = max(upper_cutoff(bath, quad.tail_cut), 2.0 * omega)
    window = quad.pv_window if quad.pv_window is not None else min(omega, bath.xi_c) / 10
    return hilbert_pv(weight_function(bath, weight), omega, upper, window, quad)


def gamma_rates(bath: BathParams, omega: float, quad: QuadratureConfig = DEFAULT_QUAD,
                model: RateModel = RateModel.FULL) -> ComplexRatePair:
    """Complex emission / absorption rates Gamma_down(omega), Gamma_up(omega).

    Gamma_down = J(n+1) - (i/pi) P int J(n+1)/(nu - omega),
    Gamma_up = J n + (i/pi) P int J n/(nu - omega). At T=0 Gamma_down is the
    bare Gamma(omega) and Gamma_up vanishes.
    """
    if omega <= 0:
        raise ValueError("rates require omega > 0")
    n = bose_occupation(bath, omega)
    j = bath.gamma0 if model is RateModel.FLAT else spectral_density(bath, omega)
    down = complex(j * (n + 1.0))
    up = complex(j * n)
    if model is RateModel.FULL and bath.gamma0 > 0:
        down -= 1j / math.pi * principal_value_hilbert(bath, Weight.EMISSION, omega, quad)
        if not bath.zero_temperature:
            up += 1j / math.pi * principal_value_hilbert(bath, Weight.ABSORPTION, omega, quad)
    return ComplexRatePair(gamma_down=down, gamma_up=up)


def spectral_width(bath: BathParams, quad: QuadratureConfig = DEFAULT_QUAD) -> float:
    """Standard deviation of J(nu) read as an unnormalised distribution."""
    if bath.gamma0 <= 0:
        raise ValueError("spectral width undefined for a vanishing spectral density")
    upper = upper_cutoff(bath, quad.tail_cut)
    peak = [bath.xi_c]
    # relative tolerances: the moments are O(gamma0 xi_c^k), far from epsabs
    q = QuadratureConfig(epsabs=0.0, epsrel=1e-12, limit=quad.limit)
    m0, m1, m2 = (
        _quad(lambda v, k=k: v**k * spectral_density(bath, v), 0.0, upper, q, points=peak)
        for k in range(3)
    )
    mean = m1 / m0
    return math.sqrt(m2 / m0 - mean * mean)
