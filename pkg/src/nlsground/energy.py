"""Energy functionals of the coupled steady-state system and their gradient.

The model is the pair of elliptic equations

    -sigma1 * lap(u) + omega * u = |u|**(p-1) * u + lam * v**2 * u
    -sigma2 * lap(v) + omega * v = |v|**(p-1) * v + lam * u**2 * v

whose solutions are critical points of

    I(u, v) = L/2 - Mp/(p+1) - Nlam/2

with the quadratic part L (the squared H-norm), the superlinear part Mp and
the cubic coupling Nlam defined below.  F(u, v) = <I'(u, v), (u, v)> is the
constraint whose zero level set (minus the origin) is the Nehari manifold.

All integrals use the discrete quadrature/edge sums of :mod:`nlsground.grid`,
so the gradient returned by :func:`grad_I` pairs exactly (to rounding) with
finite differences of :func:`eval_I`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Field, GridSpec, dirichlet_energy, laplacian, quad_integral

__all__ = [
    "PhysParams",
    "StatePair",
    "FunctionalBreakdown",
    "eval_L",
    "eval_Mp",
    "eval_Nlam",
    "eval_I",
    "eval_F",
    "breakdown",
    "grad_I",
    "h_inner",
]


@dataclass(frozen=True)
class PhysParams:
    """Model constants.

    sigma1, sigma2   diffusion weights of the two channels (> 0)
    omega            common frequency of the steady-state ansatz (> 0)
    lam              cubic coupling strength (> 0)
    p                superlinear exponent (> 1)
    """

    sigma1: float
    sigma2: float
    omega: float
    lam: float
    p: float

    def __post_init__(self):
        for name in ("sigma1", "sigma2", "omega", "lam"):
            val = getattr(self, name)
            if not (val > 0):
                raise ValueError(f"{name} must be positive, got {val}")
        if not (self.p > 1):
            raise ValueError(f"p must be > 1, got {self.p}")


@dataclass(frozen=True)
class StatePair:
    """Candidate solution pair (u, v) on a shared grid."""

    u: Field
    v: Field

    def __post_init__(self):
        if self.u.grid != self.v.grid:
            raise ValueError("u and v live on different grids")

    @property
    def grid(self) -> GridSpec:
        return self.u.grid

    @classmethod
    def zeros(cls, grid: GridSpec) -> "StatePair":
        return cls(Field.zeros(grid), Field.zeros(grid))

    def scaled(self, t: float) -> "StatePair":
        return StatePair(
            Field(self.grid, t * self.u.values),
            Field(self.grid, t * self.v.values),
        )

    def modulus(self) -> "StatePair":
        return StatePair(abs(self.u), abs(self.v))

    def is_zero(self) -> bool:
        return not (np.any(self.u.values) or np.any(self.v.values))


@dataclass(frozen=True)
class FunctionalBreakdown:
    """Values of the functionals at one state: L, Mp, Nlam, I and F."""

    L: float
    Mp: float
    Nlam: float
    I: float
    F: float


def _require_same_grid(s: StatePair) -> None:
    # StatePair enforces this at construction; re-check for hand-built pairs
    if s.u.grid != s.v.grid:
        raise ValueError("u and v live on different grids")


def eval_L(s: StatePair, prm: PhysParams) -> float:
    """Quadratic part: sigma1*|grad u|^2 + sigma2*|grad v|^2 + omega*(u^2+v^2),
    integrated.  Equals the squared discrete H-norm of the pair."""
    _require_same_grid(s)
    g = s.grid
    mass = quad_integral(Field(g, s.u.values**2 + s.v.values**2))
    return (
        prm.sigma1 * dirichlet_energy(s.u)
        + prm.sigma2 * dirichlet_energy(s.v)
        + prm.omega * mass
    )


def eval_Mp(s: StatePair, prm: PhysParams) -> float:
    """Superlinear part: integral of |u|**(p+1) + |v|**(p+1)."""
    _require_same_grid(s)
    q = prm.p + 1.0
    vals = np.abs(s.u.values) ** q + np.abs(s.v.values) ** q
    return quad_integral(Field(s.grid, vals))


def eval_Nlam(s: StatePair, prm: PhysParams) -> float:
    """Coupling part: lam times the integral of u^2 * v^2."""
    _require_same_grid(s)
    return prm.lam * quad_integral(Field(s.grid, s.u.values**2 * s.v.values**2))


def eval_I(s: StatePair, prm: PhysParams) -> float:
    """Energy I = L/2 - Mp/(p+1) - Nlam/2."""
    b = breakdown(s, prm)
    return b.I


def eval_F(s: StatePair, prm: PhysParams) -> float:
    """Nehari constraint F = <I'(u,v),(u,v)> = L - Mp - 2*Nlam."""
    b = breakdown(s, prm)
    return b.F


def breakdown(s: StatePair, prm: PhysParams) -> FunctionalBreakdown:
    """All functional values at once (single pass over the fields)."""
    L = eval_L(s, prm)
    Mp = eval_Mp(s, prm)
    Nlam = eval_Nlam(s, prm)
    I = 0.5 * L - Mp / (prm.p + 1.0) - 0.5 * Nlam
    F = L - Mp - 2.0 * Nlam
    return FunctionalBreakdown(L=L, Mp=Mp, Nlam=Nlam, I=I, F=F)


def _signed_power(vals: np.ndarray, p: float) -> np.ndarray:
    # |x|**(p-1) * x written as sign(x)*|x|**p so non-integer p stays real
    return np.sign(vals) * np.abs(vals) ** p


def grad_I(s: StatePair, prm: PhysParams) -> StatePair:
    """Strong-form residual pair representing the derivative of I.

    G_u = -sigma1*lap(u) + omega*u - |u|**(p-1)*u - lam*v^2*u  (G_v symmetric),
    zero on the boundary.  For any interior-supported test pair (phi, psi)
    the quadrature pairing quad(G_u*phi + G_v*psi) equals the directional
    derivative of I at (u, v) along (phi, psi).
    """
    _require_same_grid(s)
    g = s.grid
    u, v = s.u.values, s.v.values
    gu = (
        -prm.sigma1 * laplacian(s.u).values
        + prm.omega * u
        - _signed_power(u, prm.p)
        - prm.lam * v**2 * u
    )
    gv = (
        -prm.sigma2 * laplacian(s.v).values
        + prm.omega * v
        - _signed_power(v, prm.p)
        - prm.lam * u**2 * v
    )
    return StatePair(Field(g, gu), Field(g, gv))


def _edge_inner(a: Field, b: Field) -> float:
    grid = a.grid
    av = a.as_grid_array()
    bv = b.as_grid_array()
    h = grid.spacing
    total = 0.0
    for ax in range(grid.dim):
        total += float((np.diff(av, axis=ax) * np.diff(bv, axis=ax)).sum())
    return total / h**2 * h**grid.dim


def h_inner(s1: StatePair, s2: StatePair, prm: PhysParams) -> float:
    """Discrete H inner product of two pairs; h_inner(s, s) == eval_L(s)."""
    if s1.grid != s2.grid:
        raise ValueError("states live on different grids")
    g = s1.grid
    node = quad_integral(
        Field(g, s1.u.values * s2.u.values + s1.v.values * s2.v.values)
    )
    return (
        prm.sigma1 * _edge_inner(s1.u, s2.u)
        + prm.sigma2 * _edge_inner(s1.v, s2.v)
        + prm.omega * node
    )
