import numpy as np
import pytest

import tracklab as tl
from tracklab.errors import DimensionMismatchError
from tracklab.problem import gradient_fd

from conftest import abs_problem, euclidean_problem


class TestObjective:
    def test_abs_map_hand_value(self):
        # (|0.5| - 1)^2 + 0.5^2 = 0.5
        prob = abs_problem()
        assert prob.objective([0.5]) == pytest.approx(0.5, rel=1e-14)

    def test_abs_map_at_zero(self):
        prob = abs_problem()
        assert prob.objective([0.0]) == pytest.approx(1.0, rel=1e-14)

    def test_perfect_tracking_is_zero(self):
        m = tl.AffineMap(np.eye(2))
        prob = euclidean_problem(m, [0.3, -0.7], [0.3, -0.7])
        assert prob.objective([0.3, -0.7]) == 0.0

    def test_nonnegative_and_value_at_u_d(self, rng):
        m = tl.SquareMap(2)
        prob = euclidean_problem(m, [1.0, 2.0], [0.5, -0.5], p=3.0)
        for _ in range(20):
            assert prob.objective(rng.normal(size=2)) >= 0.0
        expected = prob.state_norm(m(prob.u_d) - prob.y_d) ** 3.0
        assert prob.objective(prob.u_d) == pytest.approx(expected, rel=1e-13)

    def test_dimension_validation(self):
        m = tl.AbsMap(2)
        with pytest.raises(DimensionMismatchError):
            euclidean_problem(m, [1.0], [0.0, 0.0])
        with pytest.raises(DimensionMismatchError):
            euclidean_problem(m, [1.0, 1.0], [0.0])

    def test_exponent_validation(self):
        with pytest.raises(ValueError):
            euclidean_problem(tl.AbsMap(1), [1.0], [0.0], p=1.0)


class TestRescaleNu:
    def test_identity_rescaling(self):
        prob = abs_problem()
        assert prob.rescale_nu(1.0) is prob

    def test_hand_value_nu_3(self):
        # |1|^2 + 3 * 1^2 = 4
        prob = abs_problem(y_d=0.0).rescale_nu(3.0)
        assert prob.objective([1.0]) == pytest.approx(4.0, rel=1e-13)

    def test_pth_power_scaling_general_p(self, rng):
        base = euclidean_problem(tl.SquareMap(1), [0.0], [0.0], p=3.0)
        nu = 2.5
        scaled = base.rescale_nu(nu)
        for _ in range(10):
            u = rng.normal(size=1)
            state_term = base.state_norm(base.map(u) - base.y_d) ** 3.0
            control_term = base.control_norm(u - base.u_d) ** 3.0
            assert scaled.objective(u) == pytest.approx(
                state_term + nu * control_term, rel=1e-12)

    def test_grid_norm_rescaling(self, rng):
        gn = tl.GridNorm(0.01, 2.0)
        m = tl.AbsMap(5)
        base = tl.TrackingProblem(map=m, y_d=np.zeros(5), u_d=np.zeros(5),
                                  p=2.0, state_norm=gn, control_norm=gn)
        nu = 4.0
        scaled = base.rescale_nu(nu)
        u = rng.normal(size=5)
        expected = gn(m(u)) ** 2 + nu * gn(u) ** 2
        assert scaled.objective(u) == pytest.approx(expected, rel=1e-12)

    def test_invalid_nu(self):
        with pytest.raises(ValueError):
            abs_problem().rescale_nu(0.0)

    @pytest.mark.parametrize("nu", [0.5, 1.0, 2.0])
    def test_argmin_matches_analytic_family(self, nu):
        from tracklab.solver import multistart
        report = multistart(abs_problem(nu=nu), 32, 11, [[-2, 2]])
        reps = sorted(float(c.representative[0])
                      for c in report.global_clusters)
        expected = 1.0 / (1.0 + nu)
        assert len(reps) == 2
        assert reps[0] == pytest.approx(-expected, abs=1e-6)
        assert reps[1] == pytest.approx(expected, abs=1e-6)


class TestGradientFd:
    def test_matches_analytic_quadratic(self):
        # S = identity, J = 2 ||u||^2, grad = 4u
        prob = euclidean_problem(tl.AffineMap(np.eye(2)), [0.0, 0.0],
                                 [0.0, 0.0])
        g = gradient_fd(prob, [1.0, 2.0], step=1e-6)
        np.testing.assert_allclose(g, [4.0, 8.0], rtol=1e-5)

    def test_smooth_branch_of_abs(self):
        # on u > 0: d/du[(u-1)^2 + u^2] = 4u - 2, zero at 0.5
        prob = abs_problem()
        g = gradient_fd(prob, [0.5], step=1e-7)
        assert abs(g[0]) <= 1e-6

    def test_symmetric_difference_at_kink(self):
        # at u = 0 the central difference of (|u|-1)^2 + u^2 cancels
        prob = abs_problem()
        g = gradient_fd(prob, [0.0], step=1e-6)
        assert abs(g[0]) <= 1e-9

    def test_relative_accuracy_on_random_quadratics(self, rng):
        m = tl.AffineMap(rng.normal(size=(3, 3)), offset=rng.normal(size=3))
        prob = euclidean_problem(m, rng.normal(size=3), rng.normal(size=3))
        u = rng.normal(size=3)
        g = gradient_fd(prob, u, step=1e-6)
        # independent oracle: analytic gradient of the quadratic objective
        k = m.matrix
        g_exact = 2.0 * k.T @ (m(u) - prob.y_d) + 2.0 * (u - prob.u_d)
        np.testing.assert_allclose(g, g_exact, rtol=1e-5, atol=1e-7)

    def test_rejects_bad_inputs(self):
        prob = abs_problem()
        with pytest.raises(ValueError):
            gradient_fd(prob, [0.5], step=0.0)
        with pytest.raises(ValueError):
            gradient_fd(prob, [np.inf])
