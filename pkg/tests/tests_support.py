"""Shared numeric oracles for the test suite."""

import numpy as np

from monogeom.numdiff import deriv1, deriv2_diag, richardson


def hyperbolic_laplacian_fd(f, p, h=1e-3):
    """Laplace-Beltrami operator of the half-space metric applied to a
    scalar sampler, z^2 (f_xx + f_yy + f_zz) - z f_z, by 4th-order
    stencils with step-halving Richardson extrapolation."""
    p = np.asarray(p, dtype=float)

    def at(hh):
        second = sum(deriv2_diag(f, p, i, hh) for i in range(3))
        return p[2] ** 2 * second - p[2] * deriv1(f, p, 2, hh)

    return richardson(at(h), at(h / 2))
