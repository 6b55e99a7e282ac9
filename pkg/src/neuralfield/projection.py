"""Basis evaluation and interpolation for the three projector families.

Piecewise-linear tents on a uniform grid, the Chebyshev-Lagrange basis
evaluated with the second barycentric formula, and complex Fourier modes
with square forward/backward transforms of odd length.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .model import ChebyshevGrid, UniformGrid, _frozen

__all__ = [
    "TentBasis",
    "ChebyshevBasis",
    "FourierBasis",
    "dft_forward",
    "dft_backward",
    "dft_forward_direct",
    "dft_backward_direct",
    "fourier_reconstruct",
]


@dataclass(frozen=True, eq=False)
class TentBasis:
    """Lagrange basis of shifted tents on a uniform grid.

    Tent i peaks at node i, vanishes at the neighbouring nodes, and the
    family sums to one everywhere on the interval (the two boundary tents
    have their outward half truncated).
    """

    grid: UniformGrid

    def __post_init__(self) -> None:
        if self.grid.interval.periodic:
            raise ValueError("tent basis needs a compact (non-periodic) grid")

    @property
    def size(self) -> int:
        return self.grid.n + 1

    def eval(self, i: int, x):
        if not 0 <= i <= self.grid.n:
            raise IndexError(f"basis index {i} outside 0..{self.grid.n}")
        x = np.asarray(x, dtype=float)
        out = np.maximum(0.0, 1.0 - np.abs(x - self.grid.nodes[i]) / self.grid.h)
        return out if out.ndim else out[()]

    def interpolate(self, values, x):
        """Continuous piecewise-linear interpolant of nodal values.

        The element index comes from direct arithmetic on (x - a) / h, not
        from a search, so evaluation is O(1) per point.
        """
        values = np.asarray(values, dtype=float)
        if values.shape != (self.size,):
            raise ValueError(f"expected {self.size} nodal values, got {values.shape}")
        iv = self.grid.interval
        xs = np.asarray(x, dtype=float)
        if np.any(xs < iv.a) or np.any(xs > iv.b):
            raise ValueError(f"evaluation point outside [{iv.a}, {iv.b}]")
        idx = np.clip((xs - iv.a) // self.grid.h, 0, self.grid.n - 1).astype(int)
        t = (xs - (iv.a + idx * self.grid.h)) / self.grid.h
        out = values[idx] * (1.0 - t) + values[idx + 1] * t
        return out if out.ndim else out[()]


@dataclass(frozen=True, eq=False)
class ChebyshevBasis:
    """Chebyshev-Lagrange basis evaluated with the second barycentric formula.

    Barycentric evaluation (Berrut & Trefethen, SIAM Rev. 46, 2004) is O(n)
    per point and numerically stable; for these nodes the weights reduce to
    the sign-alternating pattern with halved endpoints.
    """

    grid: ChebyshevGrid
    barycentric_weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        w = np.ones(self.grid.n + 1)
        w[1::2] = -1.0
        w[0] *= 0.5
        w[-1] *= 0.5
        object.__setattr__(self, "barycentric_weights", _frozen(w))

    @property
    def size(self) -> int:
        return self.grid.n + 1

    def interpolation_matrix(self, x) -> np.ndarray:
        """Matrix mapping nodal values to interpolant values at the points x.

        A point that coincides exactly with a node gets a unit row, so nodal
        data is reproduced bitwise.
        """
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        diff = xs[:, None] - self.grid.nodes[None, :]
        hit_row, hit_col = np.nonzero(diff == 0.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = self.barycentric_weights / diff
            mat = ratio / ratio.sum(axis=1, keepdims=True)
        mat[hit_row, :] = 0.0
        mat[hit_row, hit_col] = 1.0
        return mat

    def interpolate(self, values, x):
        values = np.asarray(values, dtype=float)
        if values.shape != (self.size,):
            raise ValueError(f"expected {self.size} nodal values, got {values.shape}")
        out = self.interpolation_matrix(x) @ values
        return out[0] if np.ndim(x) == 0 else out


@dataclass(frozen=True)
class FourierBasis:
    """Complex exponentials exp(i j x) for j = -n..n on the 2*pi ring."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("Fourier basis needs n >= 1")

    @property
    def modes(self) -> np.ndarray:
        return np.arange(-self.n, self.n + 1)

    @property
    def size(self) -> int:
        return 2 * self.n + 1


def _odd_length(values) -> int:
    m = len(values)
    if m % 2 == 0:
        raise ValueError(f"transform length must be odd, got {m}")
    return m


def dft_forward(samples) -> np.ndarray:
    """Coefficients c_j = (1/m) sum_l v_l exp(-i j x_l), j = -n..n.

    Samples live on x_l = 2*pi*l/m with m = 2n + 1 odd; the 1/m factor sits
    here so the coefficients approximate the continuous Fourier coefficients
    directly. Output is ordered by mode, from -n to n.
    """
    v = np.asarray(samples)
    m = _odd_length(v)
    return np.fft.fftshift(np.fft.fft(v)) / m


def dft_backward(coeffs) -> np.ndarray:
    """Inverse of :func:`dft_forward`: samples v_l = sum_j c_j exp(i j x_l)."""
    c = np.asarray(coeffs)
    m = _odd_length(c)
    return np.fft.ifft(np.fft.ifftshift(c)) * m


def dft_forward_direct(samples) -> np.ndarray:
    """O(m^2) summation oracle for :func:`dft_forward`."""
    v = np.asarray(samples, dtype=complex)
    m = _odd_length(v)
    n = (m - 1) // 2
    x = 2.0 * np.pi * np.arange(m) / m
    return np.exp(-1j * np.outer(np.arange(-n, n + 1), x)) @ v / m


def dft_backward_direct(coeffs) -> np.ndarray:
    """O(m^2) summation oracle for :func:`dft_backward`."""
    c = np.asarray(coeffs, dtype=complex)
    m = _odd_length(c)
    n = (m - 1) // 2
    x = 2.0 * np.pi * np.arange(m) / m
    return np.exp(1j * np.outer(x, np.arange(-n, n + 1))) @ c


def fourier_reconstruct(coeffs, x):
    """Real part of sum_j c_j exp(i j x).

    For coefficients that came from real samples this is the trigonometric
    interpolant through those samples.
    """
    c = np.asarray(coeffs, dtype=complex)
    m = _odd_length(c)
    n = (m - 1) // 2
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = (np.exp(1j * np.outer(xs, np.arange(-n, n + 1))) @ c).real
    return out[0] if np.ndim(x) == 0 else out
