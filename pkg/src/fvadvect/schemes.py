"""High-order face interpolation stencils and face-flux product rules.

A face value is a weighted sum of cell averages along the face normal:

    q_face(i+1/2) = sum_s  a_s * q(i+s)        (upwind cell on the left)

The coefficient tables below are exact rationals; upwind stencils are given
in the orientation for positive normal velocity and mirrored about the face
(s -> 1-s) when the face velocity is negative.  Centered stencils are
symmetric about the face, so mirroring leaves them unchanged.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np


@dataclass(frozen=True)
class StencilScheme:
    name: str
    offsets: tuple
    numerators: tuple
    denominator: int
    order: int
    is_upwind: bool

    @property
    def coefficients(self):
        return np.array(self.numerators, dtype=float) / self.denominator

    def exact_coefficients(self):
        return [Fraction(n, self.denominator) for n in self.numerators]


_SCHEMES = {
    "c4": StencilScheme("c4", tuple(range(-1, 3)), (-1, 7, 7, -1), 12, 4, False),
    "u5": StencilScheme("u5", tuple(range(-2, 3)), (2, -13, 47, 27, -3), 60, 5, True),
    "c6": StencilScheme("c6", tuple(range(-2, 4)), (1, -8, 37, 37, -8, 1), 60, 6, False),
    "u7": StencilScheme(
        "u7", tuple(range(-3, 4)), (-3, 25, -101, 319, 214, -38, 4), 420, 7, True
    ),
    "u9": StencilScheme(
        "u9",
        tuple(range(-4, 5)),
        (4, -41, 199, -641, 1879, 1375, -305, 55, -5),
        2520,
        9,
        True,
    ),
}

SCHEME_NAMES = tuple(_SCHEMES)


def scheme_coefficients(name):
    """Look up a stencil scheme by name (c4, u5, c6, u7, u9)."""
    try:
        return _SCHEMES[name.lower()]
    except KeyError:
        raise ValueError(
            f"unknown scheme {name!r}; expected one of {', '.join(_SCHEMES)}"
        ) from None


def default_product_order(scheme):
    """Product-rule order paired with a stencil: 4 for c4/u5, 6 for the rest."""
    return 4 if scheme.order <= 5 else 6


def _axis_offset(d, m, dim):
    off = [0] * dim
    off[d] = m
    return tuple(off)


def face_interpolate(q, scheme, d, u_face=None):
    """Face values of the cell field ``q`` along axis ``d``.

    Face index k sits between cells k-1 and k, so the positive-velocity
    stencil reads cells (k-1)+s and the mirrored one reads cells k-s.
    ``u_face`` selects the orientation per face for upwind schemes (ties at
    u == 0 take the positive orientation); centered schemes ignore it.
    """
    dim = q.grid.dim
    coeffs = scheme.coefficients
    plus = np.zeros(q.grid.shape)
    for s, a in zip(scheme.offsets, coeffs):
        plus += a * q.shifted(_axis_offset(d, s - 1, dim))
    if not scheme.is_upwind:
        return plus
    if u_face is None:
        raise ValueError("upwind interpolation needs face velocities")
    minus = np.zeros(q.grid.shape)
    for s, a in zip(scheme.offsets, coeffs):
        minus += a * q.shifted(_axis_offset(d, -s, dim))
    return np.where(u_face >= 0.0, plus, minus)


def _d1_c2(f, axis, h):
    return (np.roll(f, -1, axis) - np.roll(f, 1, axis)) / (2.0 * h)


def _d1_c4(f, axis, h):
    return (
        -np.roll(f, -2, axis)
        + 8.0 * np.roll(f, -1, axis)
        - 8.0 * np.roll(f, 1, axis)
        + np.roll(f, 2, axis)
    ) / (12.0 * h)


def _d2_c2(f, axis, h):
    return (np.roll(f, -1, axis) - 2.0 * f + np.roll(f, 1, axis)) / (h * h)


def _d3_c2(f, axis, h):
    return (
        np.roll(f, -2, axis)
        - 2.0 * np.roll(f, -1, axis)
        + 2.0 * np.roll(f, 1, axis)
        - np.roll(f, 2, axis)
    ) / (2.0 * h ** 3)


def product_rule_flux(q_face, u_face, order, d, grid):
    """Face average of q*u from the face averages of the factors.

    order 2:  plain product.
    order 4:  adds (h^2/12) * sum over transverse axes of dq*du, both
              first derivatives by 2nd-order centered differences.
    order 6:  the h^2 term uses 4th-order first derivatives, plus the h^4
              correction with third/first and second/second derivative
              pairs at 2nd order.

    Transverse differences act on the face arrays, which hold transverse
    AVERAGES: a centered difference of averages converges to the averaged
    derivative, which is offset from the point derivative by h^2 f'''/24.
    For the h^2 term that offset would feed back at O(h^4), so the first
    derivatives there are deconvolved by subtracting h^2/24 times the
    third difference; the h^4-term derivatives only need the point values
    to second order, where the offset is already below the truncation.
    With no transverse axes (1D) every order reduces to the plain product.
    """
    if order not in (2, 4, 6):
        raise ValueError(f"product rule order must be 2, 4 or 6, got {order}")
    flux = q_face * u_face
    if order == 2 or grid.dim == 1:
        return flux
    h = grid.h
    for t in range(grid.dim):
        if t == d:
            continue
        if order == 4:
            flux += (h * h / 12.0) * _d1_c2(q_face, t, h) * _d1_c2(u_face, t, h)
        else:
            dq3 = _d3_c2(q_face, t, h)
            du3 = _d3_c2(u_face, t, h)
            dq1 = _d1_c4(q_face, t, h) - (h * h / 24.0) * dq3
            du1 = _d1_c4(u_face, t, h) - (h * h / 24.0) * du3
            flux += (h * h / 12.0) * dq1 * du1
            flux += (h ** 4 / 1440.0) * (
                3.0 * dq3 * _d1_c2(u_face, t, h)
                + 3.0 * du3 * _d1_c2(q_face, t, h)
                + 2.0 * _d2_c2(u_face, t, h) * _d2_c2(q_face, t, h)
            )
    return flux
