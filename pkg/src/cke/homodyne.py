"""Homodyne quadrature selection.

A bank of homodyne detectors measures, per output field component, the real
quadrature cos(angle) Y + sin(angle) Y*.  On the doubled field vector
[Y; Y#] this is the row matrix [diag(cos) | diag(sin)], assembled here.
Angles are degrees at the interface and radians internally.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

__all__ = ["HomodyneScheme", "quadrature_selector"]


@dataclass(frozen=True)
class HomodyneScheme:
    """Detector angles and the quadrature selection matrix they induce.

    ``selector`` is the real ``m x 2m`` matrix with cosines acting on the
    annihilation half and sines on the creation half; its rows are
    orthonormal, so selector @ selector.T is the identity.
    """

    angles_deg: tuple[float, ...]

    def __post_init__(self):
        if not self.angles_deg:
            raise ValueError("need at least one detector angle")
        object.__setattr__(self, "angles_deg", tuple(float(a) for a in self.angles_deg))

    @property
    def angles_rad(self) -> NDArray[np.float64]:
        return np.deg2rad(np.asarray(self.angles_deg, dtype=float))

    @property
    def half_width(self) -> int:
        return len(self.angles_deg)

    @property
    def selector(self) -> NDArray[np.float64]:
        rad = self.angles_rad
        return np.hstack([np.diag(np.cos(rad)), np.diag(np.sin(rad))])


def quadrature_selector(angles_deg: Sequence[float]) -> HomodyneScheme:
    """Build the quadrature selection for one detector angle per channel."""
    return HomodyneScheme(tuple(angles_deg))
