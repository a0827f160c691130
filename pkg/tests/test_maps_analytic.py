import numpy as np
import pytest

import tracklab as tl
from tracklab.errors import DimensionMismatchError


class TestAffineMap:
    def test_identity(self):
        m = tl.AffineMap(np.eye(2))
        np.testing.assert_array_equal(m([1.0, 2.0]), [1.0, 2.0])

    def test_constant_map(self):
        m = tl.AffineMap(np.zeros((1, 3)), offset=[5.0])
        np.testing.assert_array_equal(m([1.0, -2.0, 7.0]), [5.0])

    def test_hand_matrix_vector_product(self):
        m = tl.AffineMap([[2.0, 0.0], [0.0, 3.0]], offset=[1.0, 1.0])
        np.testing.assert_allclose(m([1.0, 1.0]), [3.0, 4.0], rtol=0)

    def test_dimension_mismatch(self):
        m = tl.AffineMap(np.eye(2))
        with pytest.raises(DimensionMismatchError):
            m([1.0, 2.0, 3.0])
        with pytest.raises(DimensionMismatchError):
            tl.AffineMap(np.eye(2), offset=[1.0, 2.0, 3.0])

    def test_declared_affine(self):
        assert tl.AffineMap(np.eye(1)).is_affine

    def test_midpoint_identity_exact(self, rng):
        m = tl.AffineMap(rng.normal(size=(3, 2)), offset=rng.normal(size=3))
        for _ in range(20):
            u1, u2 = rng.normal(size=2), rng.normal(size=2)
            lam = rng.uniform()
            lhs = m(lam * u1 + (1 - lam) * u2)
            rhs = lam * m(u1) + (1 - lam) * m(u2)
            np.testing.assert_allclose(lhs, rhs, atol=1e-12)


class TestAbsSquareMaps:
    def test_abs_values(self):
        m = tl.AbsMap(2)
        np.testing.assert_array_equal(m([0.0, 0.0]), [0.0, 0.0])
        np.testing.assert_array_equal(m([-1.0, 2.0]), [1.0, 2.0])
        assert not m.is_affine

    def test_square_values(self):
        m = tl.SquareMap(1)
        np.testing.assert_array_equal(m([0.0]), [0.0])
        np.testing.assert_array_equal(m([-2.0]), [4.0])

    @pytest.mark.parametrize("map_", [tl.AbsMap(3), tl.SquareMap(3)])
    def test_even_symmetry_exact(self, map_, rng):
        for _ in range(25):
            u = rng.normal(size=3)
            np.testing.assert_array_equal(map_(u), map_(-u))

    @pytest.mark.parametrize(
        "map_", [tl.AbsMap(2), tl.SquareMap(2), tl.AffineMap(np.eye(2))])
    def test_continuity_along_sequences(self, map_, rng):
        # finite-dimensional surrogate for sequential continuity:
        # S(u_n) -> S(u) along u_n -> u, at the local Lipschitz rate
        u = rng.uniform(-2.0, 2.0, size=2)
        d = np.array([0.6, -0.8])
        yu = map_(u)
        for k in range(1, 14):
            un = u + d * 2.0**-k
            gap = np.max(np.abs(map_(un) - yu))
            assert gap <= 8.0 * 2.0**-k
