"""Self-contained property suites behind `nf check`.

Each suite returns (name, passed, detail) triples; the CLI prints one line
per entry and exits nonzero when anything fails. The same functions back
the corresponding acceptance tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .harness import eval_grid, sandwich_check
from .model import ChebyshevGrid, Interval, UniformGrid
from .problems import PROBLEM_IDS, continuum_residual, make_problem
from .projection import (
    ChebyshevBasis,
    TentBasis,
    dft_backward,
    dft_forward,
    dft_forward_direct,
)
from .quadrature import clenshaw_curtis, clenshaw_curtis_direct, gauss_legendre_2, trapezium_rule
from .schemes import SchemeDiagnostics, SemiDiscreteSystem
from .timestep import euler_integrate, rk54_integrate

__all__ = ["CheckResult", "quadrature_suite", "residual_suite", "sandwich_suite", "SUITES"]

_BOX = Interval(-1.0, 1.0)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def scalar_decay_system() -> SemiDiscreteSystem:
    """One-component system a' = -a with a(0) = 1, for stepper checks."""
    return SemiDiscreteSystem(
        dim=1,
        rhs=lambda t, a: -a,
        initial=np.array([1.0]),
        reconstruct=lambda a, xs: a[0] * np.ones(np.shape(xs)),
        label="scalar-decay",
        diagnostics=SchemeDiagnostics(0.0, 1.0, 0.0, 1.0),
        norm="sup",
        encode=lambda fn: np.array([float(fn(0.0))]),
    )


def quadrature_suite() -> list[CheckResult]:
    """Quadrature exactness, projector reproduction, DFT round trips, and
    scalar stepper checks."""
    out: list[CheckResult] = []

    def check(name, passed, detail=""):
        out.append(CheckResult(name, bool(passed), detail))

    rule = trapezium_rule(_BOX, 2)
    check(
        "trapezium n=2 nodes and weights",
        np.allclose(rule.nodes, [-1.0, 0.0, 1.0]) and np.allclose(rule.weights, [0.5, 1.0, 0.5]),
    )
    sums_ok = all(
        abs(trapezium_rule(_BOX, n).weights.sum() - 2.0) <= 1e-12 * 2.0 for n in (1, 3, 7, 64, 513)
    )
    check("trapezium weights sum to the interval length", sums_ok)

    exact_exp = np.exp(1.0) - np.exp(-1.0)
    ns = np.array([8, 16, 32, 64, 128, 256, 512])
    errs = np.array([abs(trapezium_rule(_BOX, n).integrate(np.exp) - exact_exp) for n in ns])
    slope = -np.polyfit(np.log(ns), np.log(errs), 1)[0]
    check("trapezium second-order slope on exp", 1.9 <= slope <= 2.1, f"slope={slope:.3f}")

    cc2 = clenshaw_curtis(2)
    check(
        "clenshaw-curtis n=2 weights 1/3, 4/3, 1/3",
        np.allclose(cc2.weights, [1 / 3, 4 / 3, 1 / 3], atol=1e-15),
    )
    mono_ok = True
    for n in (2, 4, 8, 16):
        rule = clenshaw_curtis(n)
        for p in range(n + 1):
            exact = 0.0 if p % 2 else 2.0 / (p + 1)
            mono_ok &= abs(rule.integrate(lambda y: y**p) - exact) <= 1e-13
    check("clenshaw-curtis exact on monomials up to degree n", mono_ok)
    fft_ok = all(
        np.allclose(clenshaw_curtis(n).weights, clenshaw_curtis_direct(n).weights, atol=1e-14)
        for n in (2, 3, 5, 8, 16, 33, 64)
    )
    check("clenshaw-curtis FFT weights match the direct cosine sum", fft_ok)

    g2 = gauss_legendre_2()
    check(
        "gauss-2 exact on cubics",
        abs(g2.integrate(lambda y: y**3)) <= 1e-15
        and abs(g2.integrate(lambda y: y**2) - 2 / 3) <= 1e-15,
    )

    tent = TentBasis(UniformGrid(_BOX, 10))
    xs = np.linspace(-1.0, 1.0, 257)
    unity = sum(tent.eval(i, xs) for i in range(tent.size))
    check("tent partition of unity", np.allclose(unity, 1.0, atol=1e-14))
    delta_ok = all(
        abs(tent.eval(i, tent.grid.nodes[j]) - (1.0 if i == j else 0.0)) <= 1e-15
        for i in range(tent.size)
        for j in range(tent.size)
    )
    check("tent Lagrange delta property", delta_ok)
    vals = 2.0 * tent.grid.nodes + 1.0
    check(
        "tent interpolation reproduces linears",
        np.allclose(tent.interpolate(vals, xs), 2.0 * xs + 1.0, atol=1e-14),
    )

    cheb = ChebyshevBasis(ChebyshevGrid(9))
    vals = cheb.grid.nodes**3 - 2.0 * cheb.grid.nodes
    check(
        "chebyshev barycentric reproduces cubics",
        np.allclose(cheb.interpolate(vals, xs), xs**3 - 2.0 * xs, atol=1e-13),
    )
    resampled = cheb.interpolate(vals, cheb.grid.nodes)
    check("chebyshev projector idempotence", np.array_equal(resampled, vals))

    rng = np.random.default_rng(7)
    v = rng.standard_normal(9) + 1j * rng.standard_normal(9)
    c = dft_forward(v)
    check("dft round trip", np.allclose(dft_backward(c), v, rtol=1e-13, atol=1e-14))
    check("dft matches the direct summation", np.allclose(c, dft_forward_direct(v), atol=1e-13))
    parseval = abs(np.sum(np.abs(v) ** 2) - 9 * np.sum(np.abs(c) ** 2))
    check("dft Parseval identity", parseval <= 1e-11 * np.sum(np.abs(v) ** 2), f"gap={parseval:.2e}")

    scalar = scalar_decay_system()
    one = euler_integrate(scalar, 0.0, 0.1, 0.1, [0.0, 0.1])
    check("euler single step 1 -> 0.9", abs(one.states[-1][0] - 0.9) <= 1e-15)
    hs = np.array([1e-2, 5e-3, 2.5e-3, 1.25e-3])
    errs = np.array(
        [
            abs(euler_integrate(scalar, 0.0, 1.0, h, [0.0, 1.0]).states[-1][0] - np.exp(-1.0))
            for h in hs
        ]
    )
    slope = np.polyfit(np.log(hs), np.log(errs), 1)[0]
    check("euler first-order slope on the decay problem", 0.95 <= slope <= 1.05, f"slope={slope:.3f}")
    tight = rk54_integrate(scalar, 0.0, 1.0, 1e-8, 1e-10, [0.0, 1.0])
    check(
        "rk54 decay accuracy at rtol=1e-8",
        abs(tight.states[-1][0] - np.exp(-1.0)) <= 1e-7,
        f"err={abs(tight.states[-1][0] - np.exp(-1.0)):.2e}",
    )
    return out


def residual_suite() -> list[CheckResult]:
    """Manufactured-solution defect sweep on a 21 x 11 space-time grid.

    The kinked-modulation problems (P6, P9p) use a doubled reference
    resolution for the nonlocal term.
    """
    out = []
    for pid in PROBLEM_IDS:
        problem = make_problem(pid)
        if problem.interval.periodic:
            panels = 8192 if pid == "P9p" else 4096
            ref = trapezium_rule(problem.interval, panels)
        else:
            panels = 4096 if pid == "P6" else 2048
            ref = clenshaw_curtis(panels)
        xs = eval_grid(problem.interval, 21)
        ts = np.linspace(0.0, 1.0, 11)
        worst = max(
            abs(continuum_residual(problem, float(x), float(t), ref)) for x in xs for t in ts
        )
        out.append(
            CheckResult(f"residual sweep {pid}", worst <= 1e-8, f"max |residual| = {worst:.2e}")
        )
    return out


def sandwich_suite() -> list[CheckResult]:
    """Two-sided bound check on the compact problems for both collocation schemes."""
    out = []
    for pid in ("P1", "P2", "P3", "P4", "P5", "P6"):
        for scheme in ("fe-collocation", "cheb-collocation"):
            for n in (16, 32, 64):
                result = sandwich_check(pid, scheme, n)
                tag = "" if result.conclusive else " (inconclusive: projector error at the temporal floor)"
                out.append(
                    CheckResult(
                        f"sandwich {pid} {scheme} n={n}",
                        result.passed,
                        f"ratio={result.ratio:.3g} in [{result.lower:.3g}, {result.upper:.3g}]{tag}",
                    )
                )
    return out


SUITES = {
    "quadrature": quadrature_suite,
    "residual": residual_suite,
    "sandwich": sandwich_suite,
}
