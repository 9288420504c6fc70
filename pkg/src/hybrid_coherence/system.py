"""Electron-nuclear spin pair parameters and initial states."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# basis order for 4x4 density matrices, electron first
BASIS = ("dd", "du", "ud", "uu")


@dataclass(frozen=True)
class SystemParams:
    omega0: float = 1.0
    g: float = 0.1

    def __post_init__(self):
        if not self.omega0 > 0:
            raise ValueError(f"omega0 must be positive, got {self.omega0}")
        if not self.g >= 0:
            raise ValueError(f"g must be non-negative, got {self.g}")
        if not 2 * self.g < self.omega0:
            raise ValueError(f"require 2g < omega0, got g={self.g}")

    @property
    def omega1(self) -> float:
        """Electron transition with the nucleus down."""
        return self.omega0 - 2 * self.g

    @property
    def omega2(self) -> float:
        """Electron transition with the nucleus up."""
        return self.omega0 + 2 * self.g


@dataclass(frozen=True)
class InitialState:
    """Electron up, nucleus in a1_0 |down> + a2_0 |up>."""

    a1_0: complex = 1 / math.sqrt(2)
    a2_0: complex = 1 / math.sqrt(2)

    def __post_init__(self):
        norm = abs(self.a1_0) ** 2 + abs(self.a2_0) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"initial amplitudes not normalised: |a1|^2+|a2|^2={norm}")

    @property
    def coherence(self) -> complex:
        """a1(0) a2*(0), the initial nuclear coherence."""
        return complex(self.a1_0 * np.conj(self.a2_0))

    def density_matrix(self) -> np.ndarray:
        psi = np.array([0, 0, self.a1_0, self.a2_0], dtype=complex)
        return np.outer(psi, psi.conj())
