"""Finite-difference and Wirtinger-derivative helpers.

Shared by the curvature engine and the twistor-side derivative checks.
Stencils are 4th-order central unless noted; `richardson` pairs two step
sizes for O(h^6) accuracy on smooth inputs.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "deriv1",
    "deriv2_diag",
    "deriv2_mixed",
    "richardson",
    "wirtinger",
    "holo_partial",
]


def deriv1(f, x, i, h):
    """4th-order central first derivative of f along coordinate i."""
    x = np.asarray(x, dtype=float)
    e = np.zeros_like(x)
    e[i] = 1.0
    return (-f(x + 2 * h * e) + 8 * f(x + h * e)
            - 8 * f(x - h * e) + f(x - 2 * h * e)) / (12 * h)


def deriv2_diag(f, x, i, h, f0=None):
    """4th-order central second derivative along coordinate i."""
    x = np.asarray(x, dtype=float)
    e = np.zeros_like(x)
    e[i] = 1.0
    if f0 is None:
        f0 = f(x)
    return (-f(x + 2 * h * e) + 16 * f(x + h * e) - 30 * f0
            + 16 * f(x - h * e) - f(x - 2 * h * e)) / (12 * h * h)


_W4 = (-1.0, 8.0, -8.0, 1.0)
_S4 = (2, 1, -1, -2)


def deriv2_mixed(f, x, i, j, h):
    """4th-order mixed second derivative d^2 f / dx_i dx_j (i != j)."""
    x = np.asarray(x, dtype=float)
    ei = np.zeros_like(x)
    ej = np.zeros_like(x)
    ei[i] = 1.0
    ej[j] = 1.0
    acc = None
    for wi, si in zip(_W4, _S4):
        for wj, sj in zip(_W4, _S4):
            val = wi * wj * f(x + si * h * ei + sj * h * ej)
            acc = val if acc is None else acc + val
    return acc / (144 * h * h)


def richardson(values_h, values_h2, order: int = 4):
    """Extrapolate two same-shaped results at steps h and h/2."""
    w = 2.0 ** order
    return (w * np.asarray(values_h2) - np.asarray(values_h)) / (w - 1.0)


def wirtinger(f, z, h=1e-4, var="z"):
    """Wirtinger derivative of a smooth (not necessarily holomorphic) map.

    f maps a complex number to a scalar or array; returns df/dz or
    df/dzbar at z via 4th-order stencils in the two real directions,
    Richardson-extrapolated.
    """
    def d_along(direction, step):
        return (-f(z + 2 * step * direction) + 8 * f(z + step * direction)
                - 8 * f(z - step * direction) + f(z - 2 * step * direction)) / (12 * step)

    def at_step(step):
        fx = d_along(1.0, step)
        fy = d_along(1j, step)
        if var == "z":
            return (fx - 1j * fy) / 2.0
        return (fx + 1j * fy) / 2.0

    return richardson(at_step(h), at_step(h / 2))


def holo_partial(f, args, k, h=1e-3):
    """Partial derivative of a holomorphic function of several complex
    variables with respect to argument k, at the given argument tuple.

    Central differences in the complexified variable, Richardson paired;
    accuracy O(h^6) for analytic f.
    """
    args = list(args)

    def central(step):
        hi = list(args)
        lo = list(args)
        hi[k] = hi[k] + step
        lo[k] = lo[k] - step
        return (np.asarray(f(*hi)) - np.asarray(f(*lo))) / (2 * step)

    d_h = central(h)
    d_h2 = central(h / 2)
    return richardson(d_h, d_h2, order=2)
