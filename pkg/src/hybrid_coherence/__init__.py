"""Nuclear-spin coherence protection in a damped electron-nuclear spin pair.

Modules
-------
bath      spectral density, thermal occupation and complex transition rates
exact     exact zero-temperature steady coherence
oracle    discretised-bath brute-force propagation
redfield  non-secular Born-Markov master equation and its closed-form solution
rtn       classical telegraph-noise model and Monte Carlo ensemble
sweeps    figure sweeps and CSV output (``hybrid-coherence`` CLI)
"""
from .bath import (
    DEFAULT_QUAD, ZERO_TEMPERATURE, BathParams, ComplexRatePair, QuadratureConfig,
    QuadratureError, RateModel, Weight, bose_occupation, gamma_rates, principal_value_hilbert,
    spectral_density, spectral_width,
)
from .exact import exact_steady_coherence
from .kernels import BACKEND
from .oracle import oracle_coherence
from .redfield import (
    integrate_redfield, mqme_coefficients, qss_extract, secular_comparator, solve_kappa,
)
from .rtn import (
    RtnParams, fit_decay_rate, flip_rate, kappa_sc, kappa_telegraph_exact, rtn_correlators,
    simulate_rtn_ensemble,
)
from .system import InitialState, SystemParams

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "BathParams", "ComplexRatePair", "DEFAULT_QUAD", "InitialState",
    "QuadratureConfig", "QuadratureError", "RateModel", "RtnParams", "SystemParams", "Weight",
    "ZERO_TEMPERATURE", "bose_occupation", "exact_steady_coherence", "fit_decay_rate",
    "flip_rate", "gamma_rates", "integrate_redfield", "kappa_sc", "kappa_telegraph_exact",
    "mqme_coefficients", "oracle_coherence", "principal_value_hilbert", "qss_extract",
    "rtn_correlators", "secular_comparator", "simulate_rtn_ensemble", "solve_kappa",
    "spectral_density", "spectral_width",
]
