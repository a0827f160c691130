import numpy as np
import pytest

import tracklab as tl


def euclidean_problem(map_, y_d, u_d, p=2.0, nu=1.0):
    """Tracking problem with plain Euclidean norms on both spaces."""
    prob = tl.TrackingProblem(
        map=map_,
        y_d=y_d,
        u_d=u_d,
        p=p,
        state_norm=tl.WeightedNorm.euclidean(map_.output_dim),
        control_norm=tl.WeightedNorm.euclidean(map_.input_dim),
    )
    return prob.rescale_nu(nu)


def abs_problem(nu=1.0, y_d=1.0, u_d=0.0):
    return euclidean_problem(tl.AbsMap(1), [y_d], [u_d], nu=nu)


def square_problem(nu=1.0, y_d=1.0, u_d=0.0):
    return euclidean_problem(tl.SquareMap(1), [y_d], [u_d], nu=nu)


def semilinear_problem(n=99, nu=1.0, amplitude=-5.0):
    """Eigenmode-target semilinear tracking problem (grid norms)."""
    mesh = tl.Mesh1D(n)
    m = tl.SemilinearMap1D(tl.SemilinearConfig(mesh))
    phi = np.sin(np.pi * mesh.nodes)
    gn = tl.GridNorm(mesh.h)
    prob = tl.TrackingProblem(map=m, y_d=amplitude * phi, u_d=np.zeros(n),
                              p=2.0, state_norm=gn, control_norm=gn)
    return prob.rescale_nu(nu), phi


@pytest.fixture
def rng():
    return np.random.default_rng(20240612)
