"""Assembly of the four semi-discrete systems.

Each builder turns a test problem and a resolution n into a plain ODE
system: state dimension, a pure right-hand side a' = Phi(t, a), the initial
state, and a reconstruction map from states back to functions on the
domain. Systems are immutable and their right-hand sides allocate no shared
scratch, so they are safe to evaluate concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.linalg import cho_solve_banded, cholesky_banded

from .model import ChebyshevGrid, UniformGrid
from .problems import TestProblem
from .projection import (
    ChebyshevBasis,
    TentBasis,
    dft_backward,
    dft_backward_direct,
    dft_forward,
    dft_forward_direct,
    fourier_reconstruct,
)
from .quadrature import clenshaw_curtis, trapezium_rule

__all__ = [
    "SchemeDiagnostics",
    "SemiDiscreteSystem",
    "build_fe_collocation",
    "build_cheb_collocation",
    "build_fe_galerkin",
    "build_spectral_galerkin",
    "rhs_eval",
    "reconstruct_on",
]

_GAUSS_NODES = np.array([-1.0, 1.0]) / np.sqrt(3.0)


@dataclass(frozen=True)
class SchemeDiagnostics:
    """Computable proxies for the operator norms entering the error bounds.

    ``weight_infnorm`` is the maximum absolute row sum of the assembled
    weight matrix, the discrete stand-in for the norm of the projected
    integral operator (for continuous kernels that operator norm equals the
    largest row integral, and the row sum is its quadrature image).
    """

    weight_infnorm: float
    firing_sup: float
    firing_derivative_sup: float
    kappa_omega: float  # 1 in the sup-norm setting, sqrt(|domain|) in L2

    def beta_n(self, duration: float) -> float:
        """Growth exponent duration * ||W_n|| * sup|f'| of the two-sided bound."""
        return duration * self.weight_infnorm * self.firing_derivative_sup

    @property
    def gamma_n(self) -> float:
        """Bound kappa * ||W_n|| * sup|f| on the nonlocal term's size."""
        return self.kappa_omega * self.weight_infnorm * self.firing_sup


@dataclass(frozen=True, eq=False)
class SemiDiscreteSystem:
    """State-space form of one spatial discretization.

    ``rhs(t, a)`` is pure; ``reconstruct(a, xs)`` maps a state and
    evaluation points to function values; ``encode(fn)`` maps a spatial
    function to the state representing it (nodal samples, a Galerkin
    projection, or transformed coefficients depending on the scheme).
    ``norm`` names the scheme's ambient space, "sup" for collocation and
    "l2" for Galerkin, and controls how errors are measured downstream.

    For the spectral Galerkin scheme the state interleaves real and
    imaginary parts of the 2n + 1 mode coefficients, so ``dim`` is
    2 * (2n + 1) there and n + 1 for the nodal schemes.
    """

    dim: int
    rhs: Callable
    initial: np.ndarray
    reconstruct: Callable
    label: str
    diagnostics: SchemeDiagnostics
    norm: str
    encode: Callable


def _require_compact(problem: TestProblem, scheme: str) -> None:
    if problem.interval.periodic:
        raise ValueError(f"{scheme} needs a compact (non-periodic) domain, got a ring")


def _infnorm(matrix: np.ndarray) -> float:
    return float(np.abs(matrix).sum(axis=1).max())


def _diagnostics(problem: TestProblem, weight_infnorm: float, kappa: float) -> SchemeDiagnostics:
    firing = problem.firing
    return SchemeDiagnostics(weight_infnorm, firing.sup_value, firing.sup_derivative, kappa)


def _fe_nodal_parts(problem: TestProblem, n: int):
    grid = UniformGrid(problem.interval, n)
    rule = trapezium_rule(problem.interval, n)
    x = grid.nodes
    weight = np.asarray(problem.kernel(x[:, None], x[None, :]), dtype=float) * rule.weights[None, :]
    return grid, x, weight


def _collocation_rhs(problem: TestProblem, x: np.ndarray, weight: np.ndarray) -> Callable:
    firing, forcing = problem.firing, problem.forcing

    def rhs(t, a):
        return -a + weight @ firing(a) + forcing(x, t)

    return rhs


def build_fe_collocation(problem: TestProblem, n: int) -> SemiDiscreteSystem:
    """Piecewise-linear collocation on a uniform grid.

    The nonlocal term is discretized by the composite trapezium rule on the
    same nodes, whose second order matches the tent basis, giving the dense
    matrix W[i, j] = w(x_i, x_j) * rho_j applied to the fired state.
    """
    _require_compact(problem, "fe-collocation")
    if n < 2:
        raise ValueError("fe-collocation needs n >= 2")
    grid, x, weight = _fe_nodal_parts(problem, n)
    basis = TentBasis(grid)
    return SemiDiscreteSystem(
        dim=n + 1,
        rhs=_collocation_rhs(problem, x, weight),
        initial=np.asarray(problem.initial(x), dtype=float),
        reconstruct=basis.interpolate,
        label="fe-collocation",
        diagnostics=_diagnostics(problem, _infnorm(weight), 1.0),
        norm="sup",
        encode=lambda fn: np.asarray(fn(x), dtype=float),
    )


def build_cheb_collocation(
    problem: TestProblem,
    n: int,
    quadrature: str = "cc",
    m: Optional[int] = None,
) -> SemiDiscreteSystem:
    """Chebyshev-Lagrange collocation on [-1, 1].

    quadrature="cc" pairs the spectral basis with Clenshaw-Curtis weights on
    the collocation nodes themselves, so the fired state enters directly.
    quadrature="trapezium" deliberately mismatches the basis with an m-panel
    composite trapezium rule on separate evenly spaced nodes (m defaults to
    n): the state is interpolated barycentrically onto those nodes first,
    and the rule's second order caps the observable convergence rate however
    accurate the projector is.
    """
    _require_compact(problem, "cheb-collocation")
    if n < 2:
        raise ValueError("cheb-collocation needs n >= 2")
    iv = problem.interval
    if not (iv.a == -1.0 and iv.b == 1.0):
        raise ValueError("cheb-collocation is implemented on [-1, 1] only")
    basis = ChebyshevBasis(ChebyshevGrid(n))
    x = basis.grid.nodes
    firing, forcing = problem.firing, problem.forcing

    if quadrature == "cc":
        rule = clenshaw_curtis(n)
        weight = np.asarray(problem.kernel(x[:, None], x[None, :]), dtype=float) * rule.weights[None, :]
        rhs = _collocation_rhs(problem, x, weight)
    elif quadrature == "trapezium":
        panels = n if m is None else int(m)
        if panels < 1:
            raise ValueError("trapezium variant needs m >= 1 panels")
        rule = trapezium_rule(iv, panels)
        onto_quad = basis.interpolation_matrix(rule.nodes)
        weight = (
            np.asarray(problem.kernel(x[:, None], rule.nodes[None, :]), dtype=float)
            * rule.weights[None, :]
        )

        def rhs(t, a):
            return -a + weight @ firing(onto_quad @ a) + forcing(x, t)

    else:
        raise ValueError(f"unknown quadrature {quadrature!r}; use 'cc' or 'trapezium'")

    return SemiDiscreteSystem(
        dim=n + 1,
        rhs=rhs,
        initial=np.asarray(problem.initial(x), dtype=float),
        reconstruct=basis.interpolate,
        label=f"cheb-collocation/{quadrature}",
        diagnostics=_diagnostics(problem, _infnorm(weight), 1.0),
        norm="sup",
        encode=lambda fn: np.asarray(fn(x), dtype=float),
    )


def build_fe_galerkin(problem: TestProblem, n: int, variant: str = "gauss2") -> SemiDiscreteSystem:
    """Galerkin scheme in the tent basis on a uniform grid.

    variant="lumped" evaluates every inner product with the trapezium rule,
    which diagonalizes the mass matrix; after dividing by the weights the
    equations coincide with fe-collocation, and the right-hand side is
    assembled through that identical path (no inner-product integration at
    run time).

    variant="gauss2" keeps the exact tridiagonal mass matrix (h/3 at the two
    corner diagonal entries, 2h/3 inside, h/6 off the diagonal) and builds
    the load vector by 2-point Gauss per element, both for the forcing inner
    products and for the double kernel integral; every right-hand side
    evaluation performs one banded solve against the mass matrix.
    """
    _require_compact(problem, "fe-galerkin")
    if n < 2:
        raise ValueError("fe-galerkin needs n >= 2")
    kappa = float(np.sqrt(problem.interval.length))

    if variant == "lumped":
        grid, x, weight = _fe_nodal_parts(problem, n)
        basis = TentBasis(grid)
        return SemiDiscreteSystem(
            dim=n + 1,
            rhs=_collocation_rhs(problem, x, weight),
            initial=np.asarray(problem.initial(x), dtype=float),
            reconstruct=basis.interpolate,
            label="fe-galerkin/lumped",
            diagnostics=_diagnostics(problem, _infnorm(weight), kappa),
            norm="l2",
            encode=lambda fn: np.asarray(fn(x), dtype=float),
        )
    if variant != "gauss2":
        raise ValueError(f"unknown variant {variant!r}; use 'lumped' or 'gauss2'")

    grid = UniformGrid(problem.interval, n)
    x, h = grid.nodes, grid.h
    basis = TentBasis(grid)

    # two Gauss points per element, element-major ordering
    gauss_points = (x[:-1, None] + (1.0 + _GAUSS_NODES[None, :]) * (h / 2.0)).ravel()
    hat_left = (1.0 - _GAUSS_NODES) / 2.0  # element's left hat at the two Gauss points
    hat_right = (1.0 + _GAUSS_NODES) / 2.0
    local_interp = np.zeros((2 * n, n + 1))
    rows = 2 * np.arange(n)
    for q in range(2):
        local_interp[rows + q, np.arange(n)] = hat_left[q]
        local_interp[rows + q, np.arange(n) + 1] = hat_right[q]
    load_map = (h / 2.0) * local_interp.T  # integrates Gauss-point values against each hat

    kernel_matrix = (h / 2.0) * np.asarray(
        problem.kernel(gauss_points[:, None], gauss_points[None, :]), dtype=float
    )

    band = np.zeros((2, n + 1))
    band[0, 1:] = h / 6.0
    band[1, :] = 2.0 * h / 3.0
    band[1, 0] = band[1, n] = h / 3.0
    mass_factor = cholesky_banded(band)

    firing, forcing = problem.firing, problem.forcing

    def rhs(t, a):
        load = load_map @ (forcing(gauss_points, t) + kernel_matrix @ firing(local_interp @ a))
        return -a + cho_solve_banded((mass_factor, False), load)

    def encode(fn):
        return cho_solve_banded(
            (mass_factor, False), load_map @ np.asarray(fn(gauss_points), dtype=float)
        )

    weight_nodal = cho_solve_banded((mass_factor, False), load_map @ kernel_matrix @ local_interp)
    return SemiDiscreteSystem(
        dim=n + 1,
        rhs=rhs,
        initial=encode(problem.initial),
        reconstruct=basis.interpolate,
        label="fe-galerkin/gauss2",
        diagnostics=_diagnostics(problem, _infnorm(weight_nodal), kappa),
        norm="l2",
        encode=encode,
    )


def build_spectral_galerkin(
    problem: TestProblem, n: int, transform: str = "fft"
) -> SemiDiscreteSystem:
    """Fourier-Galerkin scheme on the ring with pseudospectral evaluation.

    The 2n + 1 mode coefficients are integrated as interleaved real and
    imaginary parts (state length 2 * (2n + 1)); conjugate symmetry of real
    data is preserved by the dynamics rather than enforced. Each evaluation
    transforms the state back to the m = 2n + 1 sample grid x_l = 2*pi*l/m,
    applies the firing rate pointwise, multiplies by the kernel matrix
    scaled with the uniform trapezium weight 2*pi/m, adds the forcing
    samples, and transforms forward again.

    transform="direct" swaps the FFT for the O(m^2) summation, kept as the
    cross-check oracle for the FFT path.
    """
    if not problem.interval.periodic:
        raise ValueError("spectral-galerkin needs a periodic domain (ring)")
    if n < 1:
        raise ValueError("spectral-galerkin needs n >= 1")
    if transform == "fft":
        forward, backward = dft_forward, dft_backward
    elif transform == "direct":
        forward, backward = dft_forward_direct, dft_backward_direct
    else:
        raise ValueError(f"unknown transform {transform!r}; use 'fft' or 'direct'")

    m = 2 * n + 1
    grid = UniformGrid(problem.interval, m)
    x = grid.nodes
    weight = grid.h * np.asarray(problem.kernel(x[:, None], x[None, :]), dtype=float)
    firing, forcing = problem.firing, problem.forcing

    def rhs(t, a):
        coeffs = np.ascontiguousarray(a, dtype=float).view(np.complex128)
        samples = forcing(x, t) + weight @ firing(backward(coeffs))
        out = -coeffs + forward(samples)
        return np.ascontiguousarray(out, dtype=np.complex128).view(np.float64)

    def encode(fn):
        coeffs = np.asarray(forward(np.asarray(fn(x), dtype=float)), dtype=np.complex128)
        return coeffs.view(np.float64).copy()

    def reconstruct(a, xs):
        coeffs = np.ascontiguousarray(a, dtype=float).view(np.complex128)
        return fourier_reconstruct(coeffs, xs)

    return SemiDiscreteSystem(
        dim=2 * m,
        rhs=rhs,
        initial=encode(problem.initial),
        reconstruct=reconstruct,
        label=f"spectral-galerkin/{transform}",
        diagnostics=_diagnostics(problem, _infnorm(weight), float(np.sqrt(problem.interval.length))),
        norm="l2",
        encode=encode,
    )


def rhs_eval(system: SemiDiscreteSystem, t: float, a) -> np.ndarray:
    """Pure right-hand side evaluation with a state-length check."""
    a = np.asarray(a, dtype=float)
    if a.shape != (system.dim,):
        raise ValueError(f"state of shape {a.shape} does not match dim {system.dim}")
    return np.asarray(system.rhs(float(t), a), dtype=float)


def reconstruct_on(system: SemiDiscreteSystem, a, xs) -> np.ndarray:
    """Function values of the state ``a`` on an arbitrary evaluation grid."""
    a = np.asarray(a, dtype=float)
    if a.shape != (system.dim,):
        raise ValueError(f"state of shape {a.shape} does not match dim {system.dim}")
    return np.asarray(system.reconstruct(a, np.asarray(xs, dtype=float)), dtype=float)
