"""The ten manufactured-solution benchmarks, P1-P6 on [-1, 1] and P7p-P10p on a ring.

Every benchmark combines the logistic firing rate with a kernel of the
separable form xpart(x) * exp(q(y)) * modulation(y), where q is the same
exponent that shapes the solution envelope. Because of that pairing, the
voltage u(x, t) = inverse_rate(amplitude * exp(-decay*t - q(x))) turns the
nonlocal term into a multiple of the envelope itself, and choosing the
forcing accordingly makes u an exact solution. Measured solver error is
then pure discretization error.

The spatial profile q(x) is x^2 on the compact domain and cos(x)^2 on the
ring; a single closure is shared by kernel, solution, and forcing so the
three can never drift apart.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .model import FiringRate, Interval, Kernel
from .quadrature import QuadratureRule, clenshaw_curtis, trapezium_rule

__all__ = [
    "TestProblem",
    "PROBLEM_IDS",
    "canonical_id",
    "make_problem",
    "modulation_integral",
    "exact_time_derivative",
    "continuum_residual",
    "zero_kernel_problem",
    "pure_decay_problem",
]

BOX = Interval(-1.0, 1.0)
RING = Interval(0.0, 2.0 * np.pi, periodic=True)

# shared by every benchmark; only the kernel modulation varies
AMPLITUDE = 0.8
DECAY = 0.5
GAIN = 5.0
THRESHOLD = 0.3

_MODULATIONS: dict[str, tuple[Callable, bool]] = {
    "P1": ((lambda y: np.exp(y) * np.cos(y)), False),
    "P2": ((lambda y: y**20), False),
    "P3": ((lambda y: 1.0 / (1.0 + 16.0 * y**2)), False),
    "P4": ((lambda y: np.exp(-(y**2))), False),
    "P5": ((lambda y: np.exp(-y)), False),
    "P6": ((lambda y: np.abs(y) ** 3), False),
    "P7p": ((lambda y: np.cos(y) ** 2), True),
    "P8p": ((lambda y: 1.0 / (1.0 + 16.0 * np.cos(y) ** 2)), True),
    "P9p": ((lambda y: np.abs(np.cos(y)) ** 3), True),
    "P10p": ((lambda y: np.cos(y) ** 20), True),
}

PROBLEM_IDS = tuple(_MODULATIONS)


@dataclass(frozen=True)
class TestProblem:
    """One benchmark: a closed-form solution plus everything schemes assemble from.

    ``modulation`` is the kernel's y-profile, ``modulation_integral`` its
    integral over the domain (the constant appearing in the forcing), and
    ``envelope_exponent`` the shared spatial profile q. The three optional
    fields are None for the synthetic decay helpers, which are not of the
    manufactured family.
    """

    id: str
    interval: Interval
    kernel: Kernel
    firing: FiringRate
    forcing: Callable
    initial: Callable
    exact: Callable
    amplitude: Optional[float] = None
    decay: Optional[float] = None
    modulation: Optional[Callable] = None
    modulation_integral: Optional[float] = None
    envelope_exponent: Optional[Callable] = None


def canonical_id(token: str) -> str:
    """Resolve a case-insensitive problem token to its canonical id."""
    wanted = token.strip().lower()
    for pid in PROBLEM_IDS:
        if pid.lower() == wanted:
            return pid
    raise ValueError(f"unknown problem id {token!r}; expected one of {', '.join(PROBLEM_IDS)}")


def modulation_integral(problem_id: str) -> float:
    """Reference value of the kernel modulation's integral over the domain.

    Computed once per problem by a high-resolution rule (Clenshaw-Curtis
    with 4096 panels on the box, 8192-point periodic trapezium on the ring)
    and cross-checked against the doubled resolution to 1e-11 relative.
    """
    pid = canonical_id(problem_id)
    mod, periodic = _MODULATIONS[pid]
    if periodic:
        base = trapezium_rule(RING, 8192).integrate(mod)
        fine = trapezium_rule(RING, 16384).integrate(mod)
    else:
        base = clenshaw_curtis(4096).integrate(mod)
        fine = clenshaw_curtis(8192).integrate(mod)
    if abs(base - fine) > 1e-11 * max(1.0, abs(base)):
        raise ArithmeticError(
            f"{pid}: reference integral failed its doubled-resolution cross-check "
            f"({base!r} vs {fine!r})"
        )
    return float(base)


def _manufactured(pid: str, mod: Callable, periodic: bool, mod_integral: float) -> TestProblem:
    firing = FiringRate(gain=GAIN, threshold=THRESHOLD)
    if periodic:
        interval = RING
        exponent = lambda x: np.cos(x) ** 2  # noqa: E731
        kernel = Kernel(
            fn=lambda x, y: np.exp(-np.cos(x) ** 2 + np.cos(y) ** 2) * mod(y),
            factors=(
                lambda x: np.exp(-np.cos(x) ** 2),
                lambda y: np.exp(np.cos(y) ** 2) * mod(y),
            ),
        )
    else:
        interval = BOX
        exponent = lambda x: np.asarray(x) ** 2  # noqa: E731
        kernel = Kernel(
            fn=lambda x, y: np.exp(-(x**2) + y**2) * mod(y),
            factors=(
                lambda x: np.exp(-np.asarray(x) ** 2),
                lambda y: np.exp(np.asarray(y) ** 2) * mod(y),
            ),
        )

    def envelope(x, t):
        return AMPLITUDE * np.exp(-DECAY * t - exponent(x))

    def exact(x, t):
        return firing.inverse(envelope(x, t))

    def forcing(x, t):
        env = envelope(x, t)
        return DECAY / (GAIN * (1.0 - env)) + firing.inverse(env) - mod_integral * env

    def initial(x):
        return exact(x, 0.0)

    return TestProblem(
        id=pid,
        interval=interval,
        kernel=kernel,
        firing=firing,
        forcing=forcing,
        initial=initial,
        exact=exact,
        amplitude=AMPLITUDE,
        decay=DECAY,
        modulation=mod,
        modulation_integral=mod_integral,
        envelope_exponent=exponent,
    )


def make_problem(problem_id: str) -> TestProblem:
    """Build one of the ten benchmarks; ids are case-insensitive."""
    pid = canonical_id(problem_id)
    mod, periodic = _MODULATIONS[pid]
    return _manufactured(pid, mod, periodic, modulation_integral(pid))


def exact_time_derivative(problem: TestProblem, x, t):
    """Closed-form time derivative of the manufactured solution.

    The envelope g = amplitude * exp(-decay*t - q(x)) satisfies
    dg/dt = -decay * g, and the inverse firing rate has slope
    -1 / (gain * g * (1 - g)), so the chain rule collapses to
    decay / (gain * (1 - g)).
    """
    if problem.envelope_exponent is None:
        raise ValueError(f"problem {problem.id!r} has no manufactured envelope")
    env = problem.amplitude * np.exp(-problem.decay * t - problem.envelope_exponent(x))
    return problem.decay / (problem.firing.gain * (1.0 - env))


def continuum_residual(problem: TestProblem, x: float, t: float, ref_quad: QuadratureRule) -> float:
    """Defect of the closed form in the field equation at one point (x, t).

    The nonlocal term is evaluated with the supplied high-resolution rule;
    by construction the true residual is zero, so what comes back is the
    rule's quadrature error on the kernel modulation.
    """
    firing = problem.firing
    integral = ref_quad.integrate(lambda y: problem.kernel(x, y) * firing(problem.exact(y, t)))
    return float(
        exact_time_derivative(problem, x, t) + problem.exact(x, t) - integral - problem.forcing(x, t)
    )


def zero_kernel_problem(periodic: bool = False) -> TestProblem:
    """Manufactured problem with the kernel switched off.

    The closed form still solves it exactly because the forcing drops the
    integral term along with the kernel; the residual is zero with no
    quadrature error at all.
    """
    pid = "zero-kernel-ring" if periodic else "zero-kernel"
    return _manufactured(pid, lambda y: np.asarray(y) * 0.0, periodic, 0.0)


def pure_decay_problem(initial: Optional[Callable] = None, periodic: bool = False) -> TestProblem:
    """Kernel and forcing both identically zero.

    Every scheme reduces to a' = -a and the solution is exp(-t) times the
    initial condition (time origin at zero). Useful as the configuration in
    which right-hand sides must equal -a exactly.
    """
    interval = RING if periodic else BOX
    u0 = initial if initial is not None else (lambda x: 0.4 * np.ones(np.shape(x)))
    return TestProblem(
        id="pure-decay-ring" if periodic else "pure-decay",
        interval=interval,
        kernel=Kernel(fn=lambda x, y: np.zeros(np.broadcast_shapes(np.shape(x), np.shape(y)))),
        firing=FiringRate(gain=GAIN, threshold=THRESHOLD),
        forcing=lambda x, t: np.zeros(np.shape(x)),
        initial=u0,
        exact=lambda x, t: np.exp(-t) * np.asarray(u0(x)),
    )
