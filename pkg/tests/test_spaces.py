import math

import numpy as np
import pytest

from tracklab.errors import DimensionMismatchError
from tracklab.spaces import GridNorm, WeightedNorm, product_norm


class TestWeightedNorm:
    def test_unit_vector_identity_weight(self):
        n = WeightedNorm(np.eye(2))
        assert n([1.0, 0.0]) == pytest.approx(1.0, abs=1e-15)

    def test_zero_vector(self):
        n = WeightedNorm(np.eye(3))
        assert n(np.zeros(3)) == 0.0

    def test_hand_evaluated_value(self):
        # (1/2 * (2*1 + 8*1))^(1/2) = sqrt(5)
        n = WeightedNorm(np.diag([2.0, 8.0]), scale=0.5)
        assert n([1.0, 1.0]) == pytest.approx(math.sqrt(5.0), rel=1e-14)

    def test_matches_euclidean_norm(self, rng):
        n = WeightedNorm.euclidean(4)
        for _ in range(20):
            x = rng.normal(size=4)
            assert n(x) == pytest.approx(np.linalg.norm(x), rel=1e-12)

    def test_absolute_homogeneity(self, rng):
        n = WeightedNorm(np.array([[2.0, 0.5], [0.5, 1.0]]), scale=0.7)
        for _ in range(50):
            x = rng.normal(size=2)
            a = rng.normal()
            assert n(a * x) == pytest.approx(abs(a) * n(x), rel=1e-12, abs=1e-15)

    def test_triangle_inequality(self, rng):
        n = WeightedNorm(np.array([[3.0, 1.0], [1.0, 2.0]]))
        for _ in range(50):
            x, y = rng.normal(size=2), rng.normal(size=2)
            assert n(x + y) <= n(x) + n(y) + 1e-12

    def test_rejects_asymmetric_weight(self):
        with pytest.raises(ValueError, match="symmetric"):
            WeightedNorm(np.array([[1.0, 0.5], [0.0, 1.0]]))

    def test_rejects_indefinite_weight(self):
        with pytest.raises(ValueError, match="positive definite"):
            WeightedNorm(np.diag([1.0, -1.0]))

    def test_rejects_nonpositive_scale(self):
        with pytest.raises(ValueError):
            WeightedNorm(np.eye(2), scale=0.0)

    def test_dimension_mismatch(self):
        n = WeightedNorm(np.eye(2))
        with pytest.raises(DimensionMismatchError):
            n([1.0, 2.0, 3.0])

    def test_scaled_by_multiplies_values(self, rng):
        n = WeightedNorm(np.diag([2.0, 3.0]), scale=0.5)
        m = n.scaled_by(1.7)
        x = rng.normal(size=2)
        assert m(x) == pytest.approx(1.7 * n(x), rel=1e-13)


class TestGridNorm:
    def test_constant_one_closed_form(self):
        # v = 1 on n interior nodes, h = 1/(n+1): (h*n)^(1/p)
        for n, p in ((9, 2.0), (99, 3.5)):
            g = GridNorm(1.0 / (n + 1), p)
            expected = (n / (n + 1)) ** (1.0 / p)
            assert g(np.ones(n)) == pytest.approx(expected, rel=1e-13)

    def test_zero(self):
        g = GridNorm(0.01)
        assert g(np.zeros(99)) == 0.0

    def test_sine_quadrature(self):
        # Riemann-sum oracle: integral of sin^2 over (0,1) is 1/2
        n = 999
        h = 1.0 / (n + 1)
        x = h * np.arange(1, n + 1)
        g = GridNorm(h, 2.0)
        assert g(np.sin(np.pi * x)) == pytest.approx(math.sqrt(0.5), abs=1e-3)

    def test_empty_grid_rejected(self):
        g = GridNorm(0.1)
        with pytest.raises(DimensionMismatchError):
            g(np.array([]))

    def test_invalid_parameters(self):
        with pytest.raises(ValueError):
            GridNorm(0.0)
        with pytest.raises(ValueError):
            GridNorm(0.1, p=1.0)

    def test_homogeneity_and_triangle(self, rng):
        g = GridNorm(0.02, 2.5)
        for _ in range(30):
            v, w = rng.normal(size=49), rng.normal(size=49)
            a = rng.normal()
            assert g(a * v) == pytest.approx(abs(a) * g(v), rel=1e-12, abs=1e-15)
            assert g(v + w) <= g(v) + g(w) + 1e-12

    def test_scaled_by_multiplies_values(self, rng):
        g = GridNorm(0.02, 3.0)
        v = rng.normal(size=10)
        assert g.scaled_by(2.5)(v) == pytest.approx(2.5 * g(v), rel=1e-13)


class TestProductNorm:
    def test_pythagorean(self):
        assert product_norm(3.0, 4.0, 2.0) == pytest.approx(5.0, rel=1e-15)

    def test_one_factor_vanishes(self):
        for a in (0.0, 0.7, 12.5):
            for p in (1.5, 2.0, 4.0):
                assert product_norm(a, 0.0, p) == pytest.approx(a, rel=1e-14)

    def test_quartic_value(self):
        assert product_norm(1.0, 1.0, 4.0) == pytest.approx(2.0**0.25, rel=1e-14)

    def test_exponent_range(self):
        with pytest.raises(ValueError):
            product_norm(1.0, 1.0, 1.0)
        with pytest.raises(ValueError):
            product_norm(1.0, 1.0, 0.5)

    def test_negative_inputs_rejected(self):
        with pytest.raises(ValueError):
            product_norm(-1.0, 1.0, 2.0)

    def test_monotone_in_each_argument(self, rng):
        for _ in range(40):
            a, b = rng.uniform(0, 5, size=2)
            p = rng.uniform(1.1, 6.0)
            d = rng.uniform(0.01, 1.0)
            assert product_norm(a + d, b, p) > product_norm(a, b, p)
            assert product_norm(a, b + d, p) > product_norm(a, b, p)

    def test_triangle_on_pairs(self, rng):
        # (ny, nu) -> product_norm is a norm on R^2 restricted to the
        # nonnegative quadrant; check subadditivity there
        for _ in range(40):
            a = rng.uniform(0, 3, size=2)
            b = rng.uniform(0, 3, size=2)
            p = rng.uniform(1.1, 5.0)
            lhs = product_norm(a[0] + b[0], a[1] + b[1], p)
            rhs = product_norm(*a, p) + product_norm(*b, p)
            assert lhs <= rhs + 1e-12
