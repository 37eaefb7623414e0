"""Uniform Dirichlet box grid and the discrete calculus built on it.

The unbounded domain is truncated to the box [-half_width, half_width]^dim
with homogeneous Dirichlet values on the boundary nodes (ground states decay
exponentially, so a large enough box is an accurate surrogate).  The three
operators here are chosen to be mutually compatible:

* quadrature is the uniform node weight ``spacing**dim`` (equal to the
  trapezoid rule because boundary values vanish),
* the gradient energy sums squared forward differences over edges,
* the Laplacian is the standard second-order central stencil with zero
  ghost values.

With these choices the summation-by-parts identity

    quad_integral(-f * laplacian(f)) == dirichlet_energy(f)

holds exactly (up to rounding), which every functional and gradient in the
energy module relies on.  All reductions use numpy's deterministic pairwise
summation, so results are reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["GridSpec", "Field", "quad_integral", "dirichlet_energy", "laplacian"]


@dataclass(frozen=True)
class GridSpec:
    """Descriptor of the truncated computational box.

    dim             spatial dimension, 1 or 2
    half_width      box is [-half_width, half_width]^dim
    nodes_per_axis  nodes per axis including the two boundary nodes (>= 3)
    """

    dim: int
    half_width: float
    nodes_per_axis: int

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError(f"dim must be 1 or 2, got {self.dim}")
        if not (self.half_width > 0):
            raise ValueError(f"half_width must be positive, got {self.half_width}")
        if self.nodes_per_axis < 3:
            raise ValueError(
                f"nodes_per_axis must be >= 3, got {self.nodes_per_axis}"
            )

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / (self.nodes_per_axis - 1)

    @property
    def shape(self) -> tuple:
        return (self.nodes_per_axis,) * self.dim

    @property
    def num_nodes(self) -> int:
        return self.nodes_per_axis**self.dim

    def axis_coords(self) -> np.ndarray:
        """Node coordinates along one axis."""
        return np.linspace(-self.half_width, self.half_width, self.nodes_per_axis)

    def meshgrid(self) -> tuple:
        """Coordinate arrays of shape ``self.shape`` (ij indexing)."""
        axes = (self.axis_coords(),) * self.dim
        return np.meshgrid(*axes, indexing="ij")

    def boundary_mask(self) -> np.ndarray:
        """Boolean array of shape ``self.shape``, True on boundary nodes."""
        mask = np.zeros(self.shape, dtype=bool)
        for ax in range(self.dim):
            idx_lo = [slice(None)] * self.dim
            idx_hi = [slice(None)] * self.dim
            idx_lo[ax] = 0
            idx_hi[ax] = -1
            mask[tuple(idx_lo)] = True
            mask[tuple(idx_hi)] = True
        return mask


def _zero_boundary(arr: np.ndarray) -> np.ndarray:
    for ax in range(arr.ndim):
        idx_lo = [slice(None)] * arr.ndim
        idx_hi = [slice(None)] * arr.ndim
        idx_lo[ax] = 0
        idx_hi[ax] = -1
        arr[tuple(idx_lo)] = 0
        arr[tuple(idx_hi)] = 0
    return arr


@dataclass(frozen=True)
class Field:
    """Real scalar field sampled on the nodes of a GridSpec.

    Values are stored flat in row-major node order.  Construction copies the
    input, verifies finiteness and imposes the homogeneous Dirichlet boundary
    (boundary samples are forced to zero, which is the truncation rule).
    """

    grid: GridSpec
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.size != self.grid.num_nodes:
            raise ValueError(
                f"field has {vals.size} values, grid has {self.grid.num_nodes} nodes"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("field contains non-finite values")
        vals = _zero_boundary(vals.reshape(self.grid.shape).copy())
        object.__setattr__(self, "values", vals.reshape(-1))
        self.values.setflags(write=False)

    @classmethod
    def zeros(cls, grid: GridSpec) -> "Field":
        return cls(grid, np.zeros(grid.num_nodes))

    def as_grid_array(self) -> np.ndarray:
        """Values reshaped to the grid shape (read-only view)."""
        return self.values.reshape(self.grid.shape)

    def __abs__(self) -> "Field":
        return Field(self.grid, np.abs(self.values))


def _check_field(f: Field) -> np.ndarray:
    vals = f.values
    if not np.all(np.isfinite(vals)):
        raise ValueError("field contains non-finite values")
    return vals.reshape(f.grid.shape)


def quad_integral(f: Field) -> float:
    """Integral of f over the box: uniform node weight spacing**dim.

    Coincides with the trapezoid rule because boundary samples are zero.
    """
    vals = _check_field(f)
    return float(vals.sum()) * f.grid.spacing**f.grid.dim


def dirichlet_energy(f: Field) -> float:
    """Integral of |grad f|^2 from squared forward differences over edges.

    Nonnegative by construction, zero exactly for the zero field, and
    summation-by-parts compatible with :func:`laplacian`.
    """
    vals = _check_field(f)
    h = f.grid.spacing
    total = 0.0
    for ax in range(f.grid.dim):
        d = np.diff(vals, axis=ax)
        total += float((d * d).sum())
    # edges from boundary nodes to zero ghosts contribute nothing
    return total / h**2 * h**f.grid.dim


def laplacian(f: Field) -> Field:
    """Central second-difference Laplacian with zero ghost values.

    Output boundary nodes are zero; on interior nodes the operator is
    symmetric w.r.t. :func:`quad_integral` pairing.
    """
    vals = _check_field(f)
    g = f.grid
    padded = np.pad(vals, 1)
    out = -2.0 * g.dim * padded[(slice(1, -1),) * g.dim].copy()
    for ax in range(g.dim):
        idx_lo = [slice(1, -1)] * g.dim
        idx_hi = [slice(1, -1)] * g.dim
        idx_lo[ax] = slice(0, -2)
        idx_hi[ax] = slice(2, None)
        out += padded[tuple(idx_lo)]
        out += padded[tuple(idx_hi)]
    out /= g.spacing**2
    return Field(g, out.reshape(-1))
