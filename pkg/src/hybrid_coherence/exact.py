"""Exact zero-temperature steady-state nuclear coherence.

At T=0 the single-excitation dynamics is solvable by Laplace transform. The
long-time coherence left in the electron ground state is a single frequency
integral over the emitted excitation, with the complex self-energy
Gamma(nu) evaluated inside the integrand.
"""
from __future__ import annotations

import math

import numpy as np

from .bath import (
    DEFAULT_QUAD, BathParams, QuadratureConfig, _quad, gamma_rates,
    spectral_density, upper_cutoff,
)
from .system import InitialState, SystemParams


def f_laplace(bath: BathParams, s_point: complex,
              quad: QuadratureConfig = DEFAULT_QUAD) -> complex:
    """Memory-kernel transform f(s) = (1/pi) int_0^inf J(nu) / (s + i nu) dnu.

    For Re(s) > 0 the integral is regular. On the imaginary axis s = -i nu
    with nu > 0 the limit from the right half-plane is returned, which is the
    zero-temperature Gamma(nu).
    """
    s_point = complex(s_point)
    if s_point.real < 0:
        raise ValueError("f(s) is only available for Re(s) >= 0")
    if s_point.real == 0 and s_point.imag < 0:
        t0 = BathParams(bath.gamma0, bath.xi_c, bath.s_exp)
        return gamma_rates(t0, -s_point.imag, quad).gamma_down
    if s_point == 0:
        raise ValueError("f(0) requires the 0+ limit; pass a point with Re(s) > 0")
    upper = upper_cutoff(bath, quad.tail_cut)

    def integrand(v):
        return spectral_density(bath, v) / (s_point + 1j * v)

    # near the real axis the kernel is a narrow Lorentzian at nu = Im(s)
    pts = [-s_point.imag] if 0 < -s_point.imag < upper else None
    re = _quad(lambda v: integrand(v).real, 0.0, upper, quad, points=pts)
    im = _quad(lambda v: integrand(v).imag, 0.0, upper, quad, points=pts)
    return (re + 1j * im) / math.pi


def _breakpoints(centres, widths, upper):
    pts = set()
    for c, w in zip(centres, widths):
        for k in (0.0, 3.0, -3.0, 10.0, -10.0):
            p = c + k * w
            if 0 < p < upper:
                pts.add(p)
    return sorted(pts)


def exact_steady_coherence(sys: SystemParams, bath: BathParams,
                           init: InitialState = InitialState(),
                           quad: QuadratureConfig = DEFAULT_QUAD) -> complex:
    """Long-time rho_{dd,du} (interaction picture) of the exact T=0 solution.

    a1(0) a2*(0) / pi * int_0^inf J(nu) / [(w1 - nu - i G(nu)) (w2 - nu + i G*(nu))] dnu
    """
    if not bath.zero_temperature:
        raise ValueError("the exact solution is only available at T=0")
    prefactor = init.coherence
    if prefactor == 0 or bath.gamma0 == 0:
        # no bath: nothing reaches the ground state
        return complex(prefactor) * 0.0
    w1, w2 = sys.omega1, sys.omega2
    upper = upper_cutoff(bath, quad.tail_cut)
    cache: dict[float, complex] = {}

    def self_energy(v: float) -> complex:
        val = cache.get(v)
        if val is None:
            val = gamma_rates(bath, v, quad).gamma_down
            cache[v] = val
        return val

    def integrand(v: float) -> complex:
        if v <= 0:
            return 0j
        gam = self_energy(v)
        den = (w1 - v - 1j * gam) * (w2 - v + 1j * np.conj(gam))
        return spectral_density(bath, v) / den

    widths = [max(spectral_density(bath, w), 1e-12) for w in (w1, w2)]
    pts = _breakpoints((w1, w2), widths, upper)
    q = QuadratureConfig(quad.epsabs, quad.epsrel, max(quad.limit, 2000),
                         quad.pv_window, quad.tail_cut)
    re = _quad(lambda v: integrand(v).real, 0.0, upper, q, points=pts)
    im = _quad(lambda v: integrand(v).imag, 0.0, upper, q, points=pts)
    return prefactor * (re + 1j * im) / math.pi
