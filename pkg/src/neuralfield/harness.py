"""Error measurement, convergence studies, bound diagnostics, and CSV emission.

This is the engine behind the reproduction studies: it builds a scheme per
(problem, n) cell, integrates it, measures the worst-over-time spatial
error against the closed form, and emits deterministic CSV records.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence, Union

import numpy as np

from .model import Interval
from .problems import TestProblem, make_problem
from .schemes import (
    SemiDiscreteSystem,
    build_cheb_collocation,
    build_fe_collocation,
    build_fe_galerkin,
    build_spectral_galerkin,
    reconstruct_on,
)
from .timestep import Trajectory, euler_integrate, rk54_integrate

__all__ = [
    "SCHEMES",
    "StudyConfig",
    "ConvergenceRecord",
    "SandwichResult",
    "EulerSplitResult",
    "CSV_HEADER",
    "build_system",
    "default_checkpoints",
    "eval_grid",
    "trajectory_error",
    "projector_error",
    "observed_order",
    "run_study",
    "estimate_temporal_floor",
    "fitted_order",
    "sandwich_check",
    "euler_split_study",
    "emit_csv",
    "render_csv",
]

SCHEMES = ("fe-collocation", "cheb-collocation", "fe-galerkin", "spectral-galerkin")

CSV_HEADER = "problem,scheme,variant,n,h_x,error,observed_order,beta_n,wall_time_s"


@dataclass
class StudyConfig:
    """Sweep description for a convergence study.

    ``quadrature`` applies to cheb-collocation ("cc" or "trapezium", with
    ``trap_m`` overriding the trapezium panel count), ``variant`` to
    fe-galerkin ("lumped" or "gauss2"). ``ht`` is required when the stepper
    is "euler" and ignored otherwise.
    """

    problems: Sequence[str]
    scheme: str
    n_values: Sequence[int]
    quadrature: str = "cc"
    variant: str = "gauss2"
    trap_m: Optional[int] = None
    t0: float = 0.0
    duration: float = 1.0
    stepper: str = "rk54"
    rtol: float = 1e-6
    atol: float = 1e-9
    ht: Optional[float] = None
    eval_points: int = 2048
    checkpoint_count: int = 51
    out: Optional[str] = None

    def validate(self) -> None:
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}; expected one of {', '.join(SCHEMES)}")
        ns = tuple(self.n_values)
        if any(n < 2 for n in ns):
            raise ValueError("every n must be >= 2")
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise ValueError("n_values must be strictly increasing")
        if ns and self.eval_points < 4 * max(ns):
            raise ValueError(f"eval_points must be >= 4 * max(n) = {4 * max(ns)}")
        if self.checkpoint_count < 2:
            raise ValueError("need at least two checkpoints")
        if self.stepper not in ("rk54", "euler"):
            raise ValueError(f"unknown stepper {self.stepper!r}")
        if self.stepper == "euler" and not (self.ht and self.ht > 0):
            raise ValueError("euler stepping needs a positive ht")
        if not self.duration > 0:
            raise ValueError("duration must be positive")


@dataclass(frozen=True)
class ConvergenceRecord:
    """One row of a study: the measured error at one (problem, n) cell."""

    problem: str
    scheme: str
    variant: str
    n: int
    h_x: float
    error: float
    observed_order: Optional[float]
    beta_n: float
    wall_time_s: float


def build_system(
    problem: TestProblem,
    scheme: str,
    n: int,
    *,
    quadrature: str = "cc",
    variant: str = "gauss2",
    trap_m: Optional[int] = None,
) -> SemiDiscreteSystem:
    """Dispatch to the scheme builders with the study-level selectors."""
    if scheme == "fe-collocation":
        return build_fe_collocation(problem, n)
    if scheme == "cheb-collocation":
        return build_cheb_collocation(problem, n, quadrature=quadrature, m=trap_m)
    if scheme == "fe-galerkin":
        return build_fe_galerkin(problem, n, variant=variant)
    if scheme == "spectral-galerkin":
        return build_spectral_galerkin(problem, n)
    raise ValueError(f"unknown scheme {scheme!r}; expected one of {', '.join(SCHEMES)}")


def default_checkpoints(t0: float, duration: float, count: int) -> np.ndarray:
    return np.linspace(t0, t0 + duration, count)


def eval_grid(interval: Interval, eval_points: int) -> np.ndarray:
    """Uniform evaluation grid; periodic intervals drop the identified endpoint."""
    if interval.periodic:
        return interval.a + interval.length * np.arange(eval_points) / eval_points
    return np.linspace(interval.a, interval.b, eval_points)


def _l2_weights(interval: Interval, eval_points: int) -> np.ndarray:
    if interval.periodic:
        return np.full(eval_points, interval.length / eval_points)
    h = interval.length / (eval_points - 1)
    w = np.full(eval_points, h)
    w[0] = w[-1] = h / 2.0
    return w


def _spatial_error(system, diff: np.ndarray, l2w: Optional[np.ndarray]) -> float:
    if system.norm == "l2":
        return float(np.sqrt(l2w @ (diff * diff)))
    return float(np.abs(diff).max())


def trajectory_error(
    system: SemiDiscreteSystem,
    trajectory: Trajectory,
    problem: TestProblem,
    eval_points: int = 2048,
) -> float:
    """Worst checkpoint error of the reconstruction against the closed form.

    Collocation schemes are measured in the sup norm over a uniform
    evaluation grid; Galerkin schemes in the trapezium-quadrature L2 norm on
    the same grid, following each scheme's ambient space.
    """
    xs = eval_grid(problem.interval, eval_points)
    l2w = _l2_weights(problem.interval, eval_points) if system.norm == "l2" else None
    worst = 0.0
    for t, state in zip(trajectory.checkpoints, trajectory.states):
        diff = reconstruct_on(system, state, xs) - np.asarray(problem.exact(xs, t), dtype=float)
        worst = max(worst, _spatial_error(system, diff, l2w))
    return worst


def projector_error(
    system: SemiDiscreteSystem,
    problem: TestProblem,
    checkpoints,
    eval_points: int = 2048,
) -> float:
    """Worst checkpoint error of projecting the closed form itself.

    No time integration is involved: the exact solution is encoded into the
    scheme's state space at every checkpoint and the reconstruction is
    compared with the original, in the scheme's own norm.
    """
    xs = eval_grid(problem.interval, eval_points)
    l2w = _l2_weights(problem.interval, eval_points) if system.norm == "l2" else None
    worst = 0.0
    for t in np.asarray(checkpoints, dtype=float):
        state = system.encode(lambda x: problem.exact(x, t))
        diff = reconstruct_on(system, state, xs) - np.asarray(problem.exact(xs, t), dtype=float)
        worst = max(worst, _spatial_error(system, diff, l2w))
    return worst


def observed_order(e1: float, e2: float, n1: int, n2: int) -> Optional[float]:
    """Pairwise rate log(e1/e2) / log(n2/n1); None when an error is non-positive."""
    if e1 <= 0.0 or e2 <= 0.0:
        return None
    return float(np.log(e1 / e2) / np.log(n2 / n1))


def _integrate(system, cfg: StudyConfig, checkpoints) -> Trajectory:
    if cfg.stepper == "rk54":
        return rk54_integrate(system, cfg.t0, cfg.duration, cfg.rtol, cfg.atol, checkpoints)
    return euler_integrate(system, cfg.t0, cfg.duration, cfg.ht, checkpoints)


def _variant_label(cfg: StudyConfig) -> str:
    if cfg.scheme == "fe-collocation":
        return "trapezium"
    if cfg.scheme == "cheb-collocation":
        if cfg.quadrature == "trapezium" and cfg.trap_m is not None:
            return f"trapezium;m={cfg.trap_m}"
        return cfg.quadrature
    if cfg.scheme == "fe-galerkin":
        return cfg.variant
    return "fft"


def _mesh_size(problem: TestProblem, scheme: str, n: int) -> float:
    if scheme == "spectral-galerkin":
        return problem.interval.length / (2 * n + 1)
    return problem.interval.length / n


def run_study(cfg: StudyConfig) -> list[ConvergenceRecord]:
    """Run every (problem, n) cell of the sweep, problem-major, n-minor.

    Wall time covers build plus integration (monotonic clock); the error
    measurement is excluded. Output ordering and values are deterministic.
    """
    cfg.validate()
    records: list[ConvergenceRecord] = []
    cps = default_checkpoints(cfg.t0, cfg.duration, cfg.checkpoint_count)
    variant = _variant_label(cfg)
    for pid in cfg.problems:
        problem = make_problem(pid) if isinstance(pid, str) else pid
        previous: Optional[ConvergenceRecord] = None
        for n in cfg.n_values:
            start = time.perf_counter()
            system = build_system(
                problem, cfg.scheme, n,
                quadrature=cfg.quadrature, variant=cfg.variant, trap_m=cfg.trap_m,
            )
            traj = _integrate(system, cfg, cps)
            wall = time.perf_counter() - start
            err = trajectory_error(system, traj, problem, cfg.eval_points)
            order = (
                observed_order(previous.error, err, previous.n, n) if previous is not None else None
            )
            record = ConvergenceRecord(
                problem=problem.id,
                scheme=cfg.scheme,
                variant=variant,
                n=n,
                h_x=_mesh_size(problem, cfg.scheme, n),
                error=err,
                observed_order=order,
                beta_n=system.diagnostics.beta_n(cfg.duration),
                wall_time_s=wall,
            )
            records.append(record)
            previous = record
    return records


def estimate_temporal_floor(cfg: StudyConfig, problem_id: str) -> float:
    """Error of the finest-n cell re-integrated with tolerances tightened 100x.

    Rate fits should ignore sweep points within 10x of this level, where the
    timestepper rather than the projector dominates.
    """
    if cfg.stepper != "rk54":
        raise ValueError("the temporal floor estimate applies to the rk54 stepper")
    tight = replace(
        cfg,
        problems=(problem_id,),
        n_values=(max(cfg.n_values),),
        rtol=cfg.rtol / 100.0,
        atol=cfg.atol / 100.0,
        out=None,
    )
    return run_study(tight)[-1].error


def fitted_order(records: Sequence[ConvergenceRecord], floor: float) -> Optional[float]:
    """Least-squares slope of log error against log n over the points safely
    above the temporal floor (error > 10 * floor); None with < 2 points."""
    pts = [(r.n, r.error) for r in records if r.error > 10.0 * floor and r.error > 0.0]
    if len(pts) < 2:
        return None
    ns, errs = np.array([p[0] for p in pts], float), np.array([p[1] for p in pts], float)
    return float(-np.polyfit(np.log(ns), np.log(errs), 1)[0])


@dataclass(frozen=True)
class SandwichResult:
    """Outcome of the two-sided bound check at one (problem, scheme, n) cell."""

    ratio: float
    lower: float
    upper: float
    passed: bool
    conclusive: bool
    scheme_error: float
    projector_error: float
    beta_n: float


def sandwich_check(
    problem: Union[str, TestProblem],
    scheme: str,
    n: int,
    *,
    quadrature: str = "cc",
    variant: str = "gauss2",
    t0: float = 0.0,
    duration: float = 1.0,
    rtol: float = 1e-6,
    atol: float = 1e-9,
    eval_points: int = 2048,
    checkpoint_count: int = 51,
    slack: float = 0.1,
) -> SandwichResult:
    """Check that the integrated scheme error sits inside the two-sided bound
    [projector_error / (1 + beta_n), projector_error * exp(beta_n)].

    Both bounds are widened by the relative ``slack`` (10% by default) to
    absorb temporal error. When the projector error has sunk below ten times
    the temporal-error scale (rtol * sup|u| + atol) the comparison says
    nothing about the bound; such cells are flagged inconclusive and count
    as not-failed.
    """
    prob = make_problem(problem) if isinstance(problem, str) else problem
    system = build_system(prob, scheme, n, quadrature=quadrature, variant=variant)
    cps = default_checkpoints(t0, duration, checkpoint_count)
    traj = rk54_integrate(system, t0, duration, rtol, atol, cps)
    scheme_err = trajectory_error(system, traj, prob, eval_points)
    proj_err = projector_error(system, prob, cps, eval_points)
    beta = system.diagnostics.beta_n(duration)
    lower, upper = 1.0 / (1.0 + beta), float(np.exp(beta))

    xs = eval_grid(prob.interval, eval_points)
    sup_u = max(float(np.max(np.abs(prob.exact(xs, t)))) for t in cps)
    conclusive = proj_err >= 10.0 * (rtol * sup_u + atol)
    ratio = scheme_err / proj_err if proj_err > 0.0 else float("inf")
    passed = (lower * (1.0 - slack) <= ratio <= upper * (1.0 + slack)) if conclusive else True
    return SandwichResult(ratio, lower, upper, passed, conclusive, scheme_err, proj_err, beta)


@dataclass(frozen=True)
class EulerSplitResult:
    """Outcome of the forward-Euler error split on the fe-collocation scheme."""

    temporal_records: list[ConvergenceRecord]
    spatial_records: list[ConvergenceRecord]
    grid_records: list[ConvergenceRecord]
    temporal_order: float
    spatial_order: float
    spatial_floor: float
    fit_time_coefficient: float
    fit_space_coefficient: float
    fit_residual: float


def euler_split_study(
    problem: Union[str, TestProblem],
    n_fixed: int,
    ht_values: Sequence[float],
    *,
    t0: float = 0.0,
    duration: float = 1.0,
    spatial_n_values: Sequence[int] = (16, 32, 64, 128),
    spatial_ht: float = 1e-4,
    checkpoint_count: int = 51,
    eval_points: int = 2048,
) -> EulerSplitResult:
    """Split the forward-Euler error into its temporal and spatial parts.

    Three sweeps on the fe-collocation scheme: (1) step sizes at the fixed
    large n, measured per checkpoint against a tight Runge-Kutta reference
    of the same semi-discrete system, isolating the temporal error; (2) n at
    the fixed small step, measured against the closed form, recovering the
    spatial order; (3) the full (ht, n) grid measured against the closed
    form and least-squares fitted to err ~ a*ht + b*hx^2.

    Raises when the spatial floor at n_fixed is not below a tenth of the
    coarsest temporal error, reporting the measured floor.
    """
    prob = make_problem(problem) if isinstance(problem, str) else problem
    hts = tuple(float(h) for h in ht_values)
    if not hts or any(h <= 0 for h in hts):
        raise ValueError("ht_values must be positive step sizes")
    cps = default_checkpoints(t0, duration, checkpoint_count)

    fixed = build_fe_collocation(prob, n_fixed)
    reference = rk54_integrate(fixed, t0, duration, 1e-10, 1e-12, cps)
    spatial_floor = trajectory_error(fixed, reference, prob, eval_points)
    hx_fixed = prob.interval.length / n_fixed
    beta_fixed = fixed.diagnostics.beta_n(duration)

    temporal: list[ConvergenceRecord] = []
    for ht in hts:
        start = time.perf_counter()
        traj = euler_integrate(fixed, t0, duration, ht, cps)
        wall = time.perf_counter() - start
        err = float(np.max(np.abs(traj.states - reference.states)))
        temporal.append(
            ConvergenceRecord(
                prob.id, "fe-collocation", f"euler-temporal;ht={ht:.17g}",
                n_fixed, hx_fixed, err, None, beta_fixed, wall,
            )
        )

    coarse = temporal[int(np.argmax(hts))].error
    if spatial_floor >= 0.1 * coarse:
        raise ValueError(
            f"spatial resolution n={n_fixed} leaves a floor of {spatial_floor:.3e}, "
            f"not below a tenth of the coarsest temporal error {coarse:.3e}"
        )
    temporal_order = float(
        np.polyfit(np.log(hts), np.log([r.error for r in temporal]), 1)[0]
    )

    systems = {}
    spatial: list[ConvergenceRecord] = []
    previous = None
    for n in spatial_n_values:
        start = time.perf_counter()
        systems[n] = build_fe_collocation(prob, n)
        traj = euler_integrate(systems[n], t0, duration, spatial_ht, cps)
        wall = time.perf_counter() - start
        err = trajectory_error(systems[n], traj, prob, eval_points)
        order = observed_order(previous.error, err, previous.n, n) if previous else None
        record = ConvergenceRecord(
            prob.id, "fe-collocation", f"euler-spatial;ht={spatial_ht:.17g}",
            n, prob.interval.length / n, err, order,
            systems[n].diagnostics.beta_n(duration), wall,
        )
        spatial.append(record)
        previous = record
    spatial_order = float(
        -np.polyfit(np.log(list(spatial_n_values)), np.log([r.error for r in spatial]), 1)[0]
    )

    grid: list[ConvergenceRecord] = []
    design, measured = [], []
    for ht in hts:
        for n in spatial_n_values:
            start = time.perf_counter()
            traj = euler_integrate(systems[n], t0, duration, ht, cps)
            wall = time.perf_counter() - start
            err = trajectory_error(systems[n], traj, prob, eval_points)
            hx = prob.interval.length / n
            design.append((ht, hx * hx))
            measured.append(err)
            grid.append(
                ConvergenceRecord(
                    prob.id, "fe-collocation", f"euler-grid;ht={ht:.17g}",
                    n, hx, err, None, systems[n].diagnostics.beta_n(duration), wall,
                )
            )
    design = np.asarray(design)
    measured = np.asarray(measured)
    coeffs, *_ = np.linalg.lstsq(design, measured, rcond=None)
    residual = float(np.linalg.norm(design @ coeffs - measured) / np.linalg.norm(measured))

    return EulerSplitResult(
        temporal_records=temporal,
        spatial_records=spatial,
        grid_records=grid,
        temporal_order=temporal_order,
        spatial_order=spatial_order,
        spatial_floor=spatial_floor,
        fit_time_coefficient=float(coeffs[0]),
        fit_space_coefficient=float(coeffs[1]),
        fit_residual=residual,
    )


def _g17(x: float) -> str:
    return format(float(x), ".17g")


def render_csv(records: Sequence[ConvergenceRecord]) -> str:
    """Render records under the fixed header; floats carry 17 significant
    digits so a re-parse reproduces every value bit for bit."""
    lines = [CSV_HEADER]
    for r in records:
        order = "" if r.observed_order is None else _g17(r.observed_order)
        lines.append(
            ",".join(
                (
                    r.problem, r.scheme, r.variant, str(r.n),
                    _g17(r.h_x), _g17(r.error), order, _g17(r.beta_n), _g17(r.wall_time_s),
                )
            )
        )
    return "\n".join(lines) + "\n"


def emit_csv(records: Sequence[ConvergenceRecord], path) -> None:
    """Write the CSV rendering to ``path`` (UTF-8, LF line endings)."""
    text = render_csv(records)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    except OSError as exc:
        raise OSError(f"could not write {path}: {exc}") from exc
