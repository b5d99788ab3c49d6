"""Shared problem context: spatial dimension, wavenumber, support-ball radius."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import jn_zeros


@dataclass(frozen=True)
class WaveContext:
    """Ambient configuration threaded through every operation.

    Attributes
    ----------
    dimension : int
        Spatial dimension, 2 or 3.
    kappa : float
        Wavenumber, strictly positive.
    radius : float
        Radius R of the ball containing every source support, strictly positive.
    """

    dimension: int
    kappa: float
    radius: float

    def __post_init__(self):
        if self.dimension not in (2, 3):
            raise ValueError(f"dimension must be 2 or 3, got {self.dimension}")
        if not (np.isfinite(self.kappa) and self.kappa > 0):
            raise ValueError(f"kappa must be positive and finite, got {self.kappa}")
        if not (np.isfinite(self.radius) and self.radius > 0):
            raise ValueError(f"R must be positive and finite, got {self.radius}")

    @classmethod
    def with_root_wavenumber(cls, dimension: int, radius: float, root_index: int = 1) -> "WaveContext":
        """Context whose kappa*R is an exact zero of J_0 (2D) or of sin(z)/z (3D).

        The radially symmetric nonradiating constructors require this zero
        condition; deriving kappa from the requested root index makes the
        condition hold by construction instead of approximately.
        """
        if root_index < 1:
            raise ValueError(f"root_index must be >= 1, got {root_index}")
        if dimension == 2:
            root = float(jn_zeros(0, root_index)[root_index - 1])
        elif dimension == 3:
            root = root_index * np.pi
        else:
            raise ValueError(f"dimension must be 2 or 3, got {dimension}")
        return cls(dimension=dimension, kappa=root / radius, radius=radius)

    @property
    def ball_volume(self) -> float:
        """Volume (2D: area) of the support ball."""
        if self.dimension == 2:
            return float(np.pi * self.radius**2)
        return float(4.0 / 3.0 * np.pi * self.radius**3)

    @property
    def sphere_measure(self) -> float:
        """Surface measure of the boundary sphere (2D: circumference)."""
        if self.dimension == 2:
            return float(2.0 * np.pi * self.radius)
        return float(4.0 * np.pi * self.radius**2)
