"""Periodic Cartesian grids, cell-averaged fields, and face-indexed arrays.

Index conventions used throughout the package:

  - Cell fields carry a ghost frame of width ``grid.ghost`` on every side.
    Interior cell ``i`` (0 <= i < n) lives at flat index ``ghost + i``.
  - Face arrays are plain ndarrays of shape ``(n,)*dim``.  Along the normal
    axis ``d``, index ``k`` is the face at coordinate ``lo + k*h``, i.e. the
    LEFT face of cell ``k`` (between cells ``k-1`` and ``k``).  There are
    exactly ``n`` distinct faces per transverse row under periodicity, so a
    face value is stored once and shared by both adjacent cells.
  - Cell ``i``'s right face along ``d`` is therefore face index ``(i+1) % n``,
    which is what ``np.roll(F, -1, axis=d)`` lines up with cell ``i``.
"""

import math

import numpy as np


class Grid:
    """Uniform periodic grid on ``[lo, hi]^dim`` with ``n`` cells per axis.

    ghost must be at least 6: the widest face stencil reaches 5 cells past
    the outermost interior face and the limiter bound windows add 2 more
    inside that budget.
    """

    def __init__(self, dim, n, lo=0.0, hi=1.0, ghost=6):
        if dim not in (1, 2):
            raise ValueError(f"dim must be 1 or 2, got {dim}")
        if ghost < 6:
            raise ValueError(f"ghost width must be >= 6, got {ghost}")
        if n < 2 * ghost:
            raise ValueError(f"need n >= {2 * ghost} cells, got {n}")
        if not hi > lo:
            raise ValueError("domain must have hi > lo")
        self.dim = dim
        self.n = int(n)
        self.lo = float(lo)
        self.hi = float(hi)
        self.ghost = int(ghost)
        self.h = (self.hi - self.lo) / self.n

    @property
    def extent(self):
        return self.hi - self.lo

    @property
    def shape(self):
        """Interior shape, one entry per dimension."""
        return (self.n,) * self.dim

    @property
    def padded_shape(self):
        return (self.n + 2 * self.ghost,) * self.dim

    def cell_centers(self, axis=0):
        """1D array of interior cell-center coordinates along ``axis``."""
        return self.lo + (np.arange(self.n) + 0.5) * self.h

    def face_coords(self, axis=0):
        """1D array of face coordinates along ``axis`` (face k at lo + k*h)."""
        return self.lo + np.arange(self.n) * self.h

    def cell_center_mesh(self):
        """Tuple of ``dim`` arrays of shape ``grid.shape`` with center coords."""
        axes = [self.cell_centers(d) for d in range(self.dim)]
        return tuple(np.meshgrid(*axes, indexing="ij")) if self.dim > 1 else (axes[0],)

    def face_center_mesh(self, d):
        """Centroid coordinates of the faces normal to axis ``d``.

        Along axis ``d`` the coordinate is the face position; along the other
        axes it is the cell-center coordinate of the transverse row.
        """
        axes = [
            self.face_coords(ax) if ax == d else self.cell_centers(ax)
            for ax in range(self.dim)
        ]
        return tuple(np.meshgrid(*axes, indexing="ij")) if self.dim > 1 else (axes[0],)

    def __eq__(self, other):
        return (
            isinstance(other, Grid)
            and (self.dim, self.n, self.lo, self.hi, self.ghost)
            == (other.dim, other.n, other.lo, other.hi, other.ghost)
        )

    def __repr__(self):
        return (
            f"Grid(dim={self.dim}, n={self.n}, lo={self.lo}, hi={self.hi}, "
            f"ghost={self.ghost})"
        )


class CellField:
    """Cell-averaged scalar on a grid, stored with its ghost frame."""

    def __init__(self, grid, data=None):
        self.grid = grid
        if data is None:
            data = np.zeros(grid.padded_shape)
        if data.shape != grid.padded_shape:
            raise ValueError(f"expected padded shape {grid.padded_shape}, got {data.shape}")
        self.data = data

    @classmethod
    def from_interior(cls, grid, values, ghosts=True):
        """Wrap interior values in a fresh ghosted field.

        With ``ghosts=True`` the ghost frame is filled immediately.
        """
        values = np.asarray(values, dtype=float)
        if values.shape != grid.shape:
            raise ValueError(f"expected interior shape {grid.shape}, got {values.shape}")
        f = cls(grid)
        f.interior[...] = values
        if ghosts:
            fill_ghosts(f)
        return f

    @property
    def interior(self):
        g = self.grid.ghost
        sl = (slice(g, g + self.grid.n),) * self.grid.dim
        return self.data[sl]

    def shifted(self, offsets):
        """Interior-shaped view displaced by integer ``offsets`` per axis.

        ``shifted((m,))[i] == data value at cell i+m`` (reads ghosts, so the
        result equals the periodic image once ghosts are filled).
        """
        g, n = self.grid.ghost, self.grid.n
        sl = tuple(slice(g + m, g + m + n) for m in offsets)
        return self.data[sl]

    def copy(self):
        return CellField(self.grid, self.data.copy())


def fill_ghosts(f):
    """Fill the ghost frame with periodic images of the interior, in place.

    Axis-by-axis assignment covers edges and corners; repeated application
    is bitwise idempotent because ghosts are plain copies of interior cells.
    """
    g, n = f.grid.ghost, f.grid.n
    data = f.data
    for axis in range(f.grid.dim):
        lo_ghost = tuple(
            slice(0, g) if ax == axis else slice(None) for ax in range(f.grid.dim)
        )
        lo_src = tuple(
            slice(n, n + g) if ax == axis else slice(None) for ax in range(f.grid.dim)
        )
        hi_ghost = tuple(
            slice(g + n, 2 * g + n) if ax == axis else slice(None)
            for ax in range(f.grid.dim)
        )
        hi_src = tuple(
            slice(g, 2 * g) if ax == axis else slice(None) for ax in range(f.grid.dim)
        )
        data[lo_ghost] = data[lo_src]
        data[hi_ghost] = data[hi_src]
    return f


def conserved_sum(f):
    """Total conserved content: sum of interior cell averages times h^dim.

    Uses compensated summation so the diagnostic itself contributes no
    meaningful roundoff.
    """
    return math.fsum(f.interior.ravel().tolist()) * f.grid.h ** f.grid.dim


def flux_divergence(grid, fluxes, dt):
    """Conservative increment ``(dt/h) * sum_d [F_d(right) - F_d(left)]``.

    ``fluxes`` is a tuple of per-dimension face arrays in the shared-face
    layout described in the module docstring.  The result is the interior
    array to SUBTRACT from a cell field; its interior sum telescopes to
    zero under periodicity.
    """
    out = np.zeros(grid.shape)
    for d, F in enumerate(fluxes):
        out += np.roll(F, -1, axis=d) - F
    out *= dt / grid.h
    return out
