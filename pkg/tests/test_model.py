import numpy as np
import pytest
from hypothesis import given, strategies as st

from neuralfield.model import ChebyshevGrid, FiringRate, Interval, UniformGrid

FR = FiringRate(gain=5.0, threshold=0.3)


def bisect_inverse(fr, target, lo=-100.0, hi=100.0):
    """Independent oracle: solve fr(u) = target by bisection (fr decreasing)."""
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if fr(mid) > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class TestInterval:
    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            Interval(1.0, 1.0)
        with pytest.raises(ValueError):
            Interval(2.0, -1.0)

    def test_length(self):
        assert Interval(-1.0, 1.0).length == 2.0


class TestGrids:
    def test_uniform_nodes(self):
        grid = UniformGrid(Interval(-1.0, 1.0), 8)
        assert grid.h == 0.25
        assert len(grid.nodes) == 9
        assert grid.nodes[0] == -1.0
        assert abs(grid.nodes[-1] - 1.0) < 1e-15
        assert np.all(np.diff(grid.nodes) > 0)

    def test_periodic_uniform_drops_endpoint(self):
        grid = UniformGrid(Interval(0.0, 2.0 * np.pi, periodic=True), 7)
        assert len(grid.nodes) == 7
        assert grid.nodes[-1] < 2.0 * np.pi

    def test_chebyshev_nodes(self):
        grid = ChebyshevGrid(8)
        assert grid.nodes[0] == 1.0
        assert grid.nodes[-1] == -1.0
        assert np.all(np.diff(grid.nodes) < 0)
        assert np.allclose(grid.nodes, np.cos(np.pi * np.arange(9) / 8))

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            UniformGrid(Interval(-1.0, 1.0), 0)
        with pytest.raises(ValueError):
            ChebyshevGrid(0)


class TestFiringRate:
    def test_half_at_threshold(self):
        # zero exponent forces 1/2 (Table-1 parameters)
        assert FR(0.3) == 0.5

    def test_limits_without_overflow(self):
        with np.errstate(over="raise"):
            assert FR(1e6) == 0.0
            assert FR(-1e6) == 1.0
            assert FR(200.0) == pytest.approx(0.0, abs=1e-300)
            assert FR(-200.0) == pytest.approx(1.0, abs=1e-15)

    def test_value_at_one(self):
        # frozen from a high-precision scalar evaluation of 1/(1 + e^3.5)
        assert FR(1.0) == pytest.approx(0.02931223075135632, rel=1e-14)

    @given(st.floats(min_value=-6.0, max_value=6.0))
    def test_range_is_open_unit_interval(self, u):
        # far outside this window the float image saturates to exactly 0 or 1
        assert 0.0 < FR(u) < 1.0

    def test_range_saturates_cleanly(self):
        u = np.linspace(-500.0, 500.0, 2001)
        out = FR(u)
        assert np.all((0.0 <= out) & (out <= 1.0))

    @given(
        st.floats(min_value=-3.0, max_value=3.0),
        st.floats(min_value=-3.0, max_value=3.0),
    )
    def test_strictly_decreasing(self, u1, u2):
        if abs(u2 - u1) >= 1e-6:  # below that the float values can collide
            assert np.sign(FR(u2) - FR(u1)) == -np.sign(u2 - u1)

    def test_derivative_extremum_at_threshold(self):
        assert FR.derivative(0.3) == pytest.approx(-1.25, rel=1e-15)
        assert FR.sup_derivative == 1.25

    def test_derivative_bound_on_dense_sample(self):
        u = np.linspace(-10.0, 10.0, 1_000_000)
        assert np.max(np.abs(FR.derivative(u))) <= 1.25 + 1e-12
        # and the bound is attained at the threshold
        assert np.max(np.abs(FR.derivative(np.array([0.3])))) == pytest.approx(1.25)

    def test_derivative_matches_central_difference(self):
        eps = 1e-5
        fd = (FR(1.0 + eps) - FR(1.0 - eps)) / (2.0 * eps)
        assert FR.derivative(1.0) == pytest.approx(fd, abs=1e-7)

    def test_inverse_at_half_is_threshold(self):
        assert FR.inverse(0.5) == pytest.approx(0.3, abs=1e-16)

    @pytest.mark.parametrize("r", [0.1, 0.5, 0.9])
    def test_inverse_round_trip(self, r):
        assert FR(FR.inverse(r)) == pytest.approx(r, rel=1e-14)

    def test_inverse_of_forward_is_identity(self):
        u = np.linspace(0.3 - 2.0, 0.3 + 2.0, 4001)
        assert np.max(np.abs(FR.inverse(FR(u)) - u)) <= 1e-12

    def test_inverse_against_bisection_oracle(self):
        # the decreasing sigmoid's true inverse: 0.3 + log(0.25)/5
        oracle = bisect_inverse(FR, 0.8)
        value = FR.inverse(0.8)
        assert value == pytest.approx(oracle, abs=1e-13)
        assert value == pytest.approx(0.02274112777602183, rel=1e-14)

    @pytest.mark.parametrize("bad", [0.0, 1.0, -0.2, 1.3])
    def test_inverse_domain_errors(self, bad):
        with pytest.raises(ValueError):
            FR.inverse(bad)

    def test_gain_must_be_positive(self):
        with pytest.raises(ValueError):
            FiringRate(gain=0.0, threshold=0.0)


class TestKernel:
    def test_p1_kernel_values(self, p1):
        assert p1.kernel(0.0, 0.0) == pytest.approx(1.0, rel=1e-15)
        # exp(-1) * exp(0) * cos(0), frozen scalar oracle
        assert p1.kernel(1.0, 0.0) == pytest.approx(0.36787944117144233, rel=1e-14)

    def test_p7p_kernel_at_origin(self, p7p):
        # exp(-1 + 1) * cos(0)^2 = 1 by cancellation
        assert p7p.kernel(0.0, 0.0) == pytest.approx(1.0, rel=1e-15)

    @pytest.mark.parametrize("pid_fixture", ["p1", "p4", "p7p"])
    def test_separable_structure_agrees(self, pid_fixture, request):
        problem = request.getfixturevalue(pid_fixture)
        xpart, ypart = problem.kernel.factors
        xs = np.linspace(problem.interval.a, problem.interval.b, 50)
        full = problem.kernel(xs[:, None], xs[None, :])
        product = np.outer(xpart(xs), ypart(xs))
        assert np.all(np.abs(full - product) <= 1e-14 * (1.0 + np.abs(full)))
