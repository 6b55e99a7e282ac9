"""Core domain types: spatial grids, the sigmoidal firing rate, and synaptic kernels.

Everything in this module is an immutable value object, safe to share across
concurrent workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np

__all__ = [
    "Interval",
    "UniformGrid",
    "ChebyshevGrid",
    "FiringRate",
    "Kernel",
]


def _frozen(values) -> np.ndarray:
    out = np.asarray(values, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Interval:
    """A 1-D domain [a, b]; ``periodic`` identifies the endpoints (a ring)."""

    a: float
    b: float
    periodic: bool = False

    def __post_init__(self) -> None:
        if not self.a < self.b:
            raise ValueError(f"interval needs a < b, got [{self.a}, {self.b}]")

    @property
    def length(self) -> float:
        return self.b - self.a


@dataclass(frozen=True, eq=False)
class UniformGrid:
    """Evenly spaced nodes a + i*h with spacing h = (b - a) / n.

    Non-periodic grids carry n + 1 nodes and end at b up to machine
    precision; periodic grids drop the right endpoint (n nodes) because it
    is identified with the left one.
    """

    interval: Interval
    n: int
    h: float = field(init=False)
    nodes: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("grid needs n >= 1 elements")
        h = self.interval.length / self.n
        count = self.n if self.interval.periodic else self.n + 1
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "nodes", _frozen(self.interval.a + np.arange(count) * h))


@dataclass(frozen=True, eq=False)
class ChebyshevGrid:
    """Chebyshev points cos(i*pi/n), i = 0..n, ordered from +1 down to -1."""

    n: int
    nodes: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("Chebyshev grid needs degree n >= 1")
        nodes = np.cos(np.pi * np.arange(self.n + 1) / self.n)
        object.__setattr__(self, "nodes", _frozen(nodes))


@dataclass(frozen=True)
class FiringRate:
    """Logistic voltage-to-activity map r(u) = 1 / (1 + exp(gain * (u - threshold))).

    The curve decreases strictly from 1 to 0, maps all of R into (0, 1), and
    satisfies |r'(u)| <= gain/4 with equality at u = threshold. Evaluation
    only ever exponentiates arguments with non-positive real part, so it
    cannot overflow however large the voltage.
    """

    gain: float
    threshold: float

    def __post_init__(self) -> None:
        if not self.gain > 0:
            raise ValueError("gain must be positive")

    def __call__(self, u):
        s = self.gain * (np.asarray(u) - self.threshold)
        if np.iscomplexobj(s):
            # analytic continuation used by the pseudospectral evaluation;
            # branch on the real part to keep |exp| <= 1
            pos = s.real >= 0
            z = np.exp(np.where(pos, -s, s))
            out = np.where(pos, z / (1.0 + z), 1.0 / (1.0 + z))
        else:
            z = np.exp(-np.abs(s))
            out = np.where(s >= 0, z / (1.0 + z), 1.0 / (1.0 + z))
        return out if out.ndim else out[()]

    def derivative(self, u):
        """Slope r'(u) = -gain * e^s / (1 + e^s)^2 with s = gain*(u - threshold)."""
        s = self.gain * (np.asarray(u, dtype=float) - self.threshold)
        z = np.exp(-np.abs(s))
        out = -self.gain * z / (1.0 + z) ** 2
        return out if out.ndim else out[()]

    def inverse(self, r):
        """Exact functional inverse: the voltage u with r(u) = r.

        Only defined for activities strictly inside (0, 1); the manufactured
        solutions keep their argument there by construction.
        """
        r = np.asarray(r, dtype=float)
        if np.any(r <= 0.0) or np.any(r >= 1.0):
            raise ValueError("firing-rate inverse needs an activity strictly inside (0, 1)")
        out = self.threshold + np.log((1.0 - r) / r) / self.gain
        return out if out.ndim else out[()]

    @property
    def sup_value(self) -> float:
        return 1.0

    @property
    def sup_derivative(self) -> float:
        return self.gain / 4.0


@dataclass(frozen=True)
class Kernel:
    """Synaptic weight w(x, y): connection strength from location y to x.

    ``factors = (xpart, ypart)``, when present, records the separable form
    w(x, y) = xpart(x) * ypart(y) that the bundled test problems use; the
    full bivariate ``fn`` stays the single source of truth.
    """

    fn: Callable
    factors: Optional[Tuple[Callable, Callable]] = None

    def __call__(self, x, y):
        return self.fn(x, y)
