"""Scalar fiber analysis and projection onto the Nehari manifold.

For a nonzero state s = (u, v) the fiber energy is H(t) = I(t*s), a scalar
function with H(0) = 0, a single interior maximum and H(t) -> -inf.  Its
critical points are the roots of

    K(t) = L - t**(p-1) * Mp - 2 * t**2 * Nlam,

which is strictly decreasing on (0, inf) with K(0+) = L > 0, so the positive
root t0 exists and is unique whenever Mp + Nlam > 0.  Scaling by t0 places
the state on the Nehari manifold (F = 0).
"""

from __future__ import annotations

from dataclasses import dataclass

from .energy import FunctionalBreakdown, PhysParams, StatePair, breakdown, eval_F

__all__ = ["ProjectionResult", "fiber_K", "fiber_H", "project"]

MAX_BISECTIONS = 60
DEFAULT_TOL = 1e-12


@dataclass(frozen=True)
class ProjectionResult:
    """Outcome of a Nehari projection.

    state       the scaled pair (t0*u, t0*v), on the manifold
    t0          positive scaling root of K
    residual    F evaluated at the projected state
    iterations  bracketing plus bisection steps spent
    """

    state: StatePair
    t0: float
    residual: float
    iterations: int


def fiber_K(t: float, b: FunctionalBreakdown, p: float) -> float:
    """K(t) = L - t**(p-1)*Mp - 2*t^2*Nlam, the fiber derivative over t."""
    return b.L - t ** (p - 1.0) * b.Mp - 2.0 * t * t * b.Nlam


def fiber_H(t: float, b: FunctionalBreakdown, p: float) -> float:
    """H(t) = I(t*u, t*v) = (t^2/2)L - (t**(p+1)/(p+1))Mp - (t^4/2)Nlam."""
    return (
        0.5 * t * t * b.L
        - t ** (p + 1.0) / (p + 1.0) * b.Mp
        - 0.5 * t**4 * b.Nlam
    )


def project(s: StatePair, prm: PhysParams, tol: float = DEFAULT_TOL) -> ProjectionResult:
    """Scale a nonzero state onto the Nehari manifold.

    Brackets the root of K by doubling (or halving) from t = 1, then bisects
    to relative width <= tol.  Raises ValueError for states that are zero
    under the quadrature (the manifold excludes the origin).
    """
    b = breakdown(s, prm)
    if not (b.L > 0):
        raise ValueError("cannot project: state has zero H-norm")
    if not (b.Mp + b.Nlam > 0):
        raise ValueError("cannot project: Mp + Nlam vanishes (zero state)")

    iters = 0
    lo, hi = 1.0, 1.0
    if fiber_K(1.0, b, prm.p) > 0.0:
        hi = 2.0
        while fiber_K(hi, b, prm.p) > 0.0:
            lo = hi
            hi *= 2.0
            iters += 1
    else:
        lo = 0.5
        while fiber_K(lo, b, prm.p) <= 0.0:
            hi = lo
            lo *= 0.5
            iters += 1
            if lo == 0.0:  # cannot happen for finite breakdowns, guard anyway
                raise ValueError("bracketing for the fiber root collapsed to zero")

    for _ in range(MAX_BISECTIONS):
        mid = 0.5 * (lo + hi)
        iters += 1
        if fiber_K(mid, b, prm.p) > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol * mid:
            break
    t0 = 0.5 * (lo + hi)

    projected = s.scaled(t0)
    return ProjectionResult(
        state=projected,
        t0=t0,
        residual=eval_F(projected, prm),
        iterations=iters,
    )
