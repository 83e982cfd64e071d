"""Gauss-Hermite rules mapped onto Gaussian envelopes."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np


@lru_cache(maxsize=64)
def _hermgauss(m: int) -> tuple[np.ndarray, np.ndarray]:
    t, w = np.polynomial.hermite.hermgauss(m)
    t.setflags(write=False)
    w.setflags(write=False)
    return t, w


@dataclass(frozen=True)
class QuadratureSpec:
    """Gauss-Hermite rule for integrals ``int exp(-((x-center)/scale)^2) g(x) dx``.

    With ``node_count`` nodes the rule is exact when ``g`` is a polynomial
    of degree below ``2*node_count``.
    """

    node_count: int
    center: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        if self.node_count < 2:
            raise ValueError(f"node_count must be at least 2, got {self.node_count}")
        if not self.scale > 0:
            raise ValueError(f"scale must be positive, got {self.scale}")

    def nodes(self) -> tuple[np.ndarray, np.ndarray]:
        """Physical nodes and weights; weights include the Jacobian ``scale``."""
        t, w = _hermgauss(self.node_count)
        return self.center + self.scale * t, self.scale * w


def default_node_count(n: int) -> int:
    return 2 * n + 16


def minimum_node_count(n: int) -> int:
    return 2 * n + 8
