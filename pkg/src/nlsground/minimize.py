"""Ground-state computation: projected gradient descent on the Nehari manifold.

One iteration does
    1. descent step  w = s - alpha * grad_I(s)
    2. modulus       w = (|w_u|, |w_v|)   (keeps iterates in the positive cone;
                     cannot increase the energy on the lattice)
    3. projection    s' = Nehari projection of w
    4. Armijo test   accept if I(s') <= I(s) - slope * alpha * |grad|^2,
                     otherwise shrink alpha and retry.

The trial step for the next iteration is the Barzilai-Borwein estimate of
the inverse curvature along the last accepted move, clipped and always
safeguarded by the same backtracking test, so accepted steps are monotone in
I regardless of the trial.  Convergence is declared when the quadrature norm
of the gradient drops below grad_tol; stagnation (five consecutive accepted
steps with relative energy change below energy_tol) and the iteration cap
stop the loop without claiming convergence.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field as dc_field, replace

import numpy as np

from .energy import PhysParams, StatePair, breakdown, grad_I
from .evolve import steady_state_residual
from .grid import Field, GridSpec, quad_integral
from .nehari import DEFAULT_TOL, project

__all__ = ["SolveConfig", "SolveReport", "initial_guess", "solve_ground_state", "lambda_sweep"]

STAGNATION_WINDOW = 5


@dataclass(frozen=True)
class SolveConfig:
    """Solver knobs; defaults are the recorded reproducible settings."""

    init_kind: str = "gaussian-pair"  # or "custom-fields"
    center: float = 0.0
    width: float = 1.0
    amp_u: float = 1.0
    amp_v: float = 1.0
    custom_u: Field | None = None
    custom_v: Field | None = None
    rng_seed: int = 0
    step0: float = 1.0
    armijo_shrink: float = 0.5
    armijo_slope: float = 1e-4
    min_step: float = 1e-12
    max_iters: int = 200_000
    grad_tol: float = 1e-6
    energy_tol: float = 1e-15
    restarts: int = 1
    projection_tol: float = DEFAULT_TOL

    def __post_init__(self):
        if self.init_kind not in ("gaussian-pair", "custom-fields"):
            raise ValueError(f"unknown init_kind {self.init_kind!r}")
        for name in ("step0", "grad_tol", "energy_tol", "min_step", "projection_tol"):
            if not (getattr(self, name) > 0):
                raise ValueError(f"{name} must be positive")
        for name in ("armijo_shrink", "armijo_slope"):
            if not (0.0 < getattr(self, name) < 1.0):
                raise ValueError(f"{name} must lie in (0, 1)")
        if self.max_iters < 0:
            raise ValueError("max_iters must be >= 0")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")


@dataclass(frozen=True)
class SolveReport:
    """Convergence diagnostics and certified invariant checks of one solve."""

    converged: bool
    iterations: int
    I0_estimate: float
    grad_norm: float
    nehari_residual: float
    pde_residual_max: float
    t0_history: tuple
    wall_time: float
    stop_reason: str
    trace: tuple = dc_field(repr=False, default=())  # (iter, I, grad_norm, t0, step)
    descent_monotone: bool = True
    positivity_ok: bool = True
    max_manifold_residual_rel: float = 0.0
    restart_index: int = 0


def _gaussian(grid: GridSpec, center, width: float, amp: float) -> np.ndarray:
    coords = grid.meshgrid()
    centers = np.broadcast_to(np.asarray(center, dtype=float), (grid.dim,))
    r2 = sum((c - c0) ** 2 for c, c0 in zip(coords, centers))
    return amp * np.exp(-r2 / (2.0 * width**2)).reshape(-1)


def initial_guess(grid: GridSpec, cfg: SolveConfig, restart_index: int = 0) -> StatePair:
    """Positive interior starting state, deterministic given rng_seed.

    restart_index 0 is the configured Gaussian pair verbatim; higher indices
    jitter center, width and amplitudes with an rng seeded by
    rng_seed + restart_index.
    """
    if cfg.init_kind == "custom-fields":
        if cfg.custom_u is None or cfg.custom_v is None:
            raise ValueError("custom-fields init requires custom_u and custom_v")
        s = StatePair(cfg.custom_u, cfg.custom_v)
        if s.is_zero():
            raise ValueError("initial state must be nonzero")
        return s

    center = np.full(grid.dim, cfg.center)
    width = cfg.width
    amp_u, amp_v = cfg.amp_u, cfg.amp_v
    if restart_index > 0:
        rng = np.random.default_rng(cfg.rng_seed + restart_index)
        center = center + rng.uniform(-0.5, 0.5, size=grid.dim) * width
        width = width * rng.uniform(0.7, 1.4)
        scale_u, scale_v = rng.uniform(0.5, 2.0, size=2)
        amp_u, amp_v = amp_u * scale_u, amp_v * scale_v

    if amp_u == 0.0 and amp_v == 0.0:
        raise ValueError("initial state must be nonzero (both amplitudes are 0)")
    if not (width > 0):
        raise ValueError("gaussian width must be positive")
    u = Field(grid, _gaussian(grid, center, width, amp_u))
    v = Field(grid, _gaussian(grid, center, width, amp_v))
    s = StatePair(u, v)
    if s.is_zero():
        raise ValueError("initial guess vanished on the grid; widen the gaussian")
    return s


def _grad_norm2(g: StatePair) -> float:
    vals = g.u.values**2 + g.v.values**2
    return quad_integral(Field(g.grid, vals))


def _solve_once(
    grid: GridSpec, prm: PhysParams, cfg: SolveConfig, restart_index: int
) -> tuple:
    t_start = time.perf_counter()
    s0 = initial_guess(grid, cfg, restart_index).modulus()
    pr = project(s0, prm, cfg.projection_tol)
    s = pr.state
    b = breakdown(s, prm)
    I_cur = b.I

    t0_history = [pr.t0]
    trace = []
    descent_monotone = True
    positivity_ok = bool(s.u.values.min() >= 0 and s.v.values.min() >= 0)
    max_resid_rel = abs(pr.residual) / b.L if b.L > 0 else 0.0

    alpha = cfg.step0
    stagnant = 0
    converged = False
    stop_reason = "max_iters"
    grad_norm = math.nan
    iters_done = 0
    prev_state = None  # (u_vals, v_vals, gu_vals, gv_vals) of last accepted iterate

    for k in range(cfg.max_iters):
        g = grad_I(s, prm)
        gnorm2 = _grad_norm2(g)
        grad_norm = math.sqrt(gnorm2)
        if grad_norm <= cfg.grad_tol:
            converged = True
            stop_reason = "grad_tol"
            break

        # Barzilai-Borwein trial step from the last accepted move
        if prev_state is not None:
            du = s.u.values - prev_state[0]
            dv = s.v.values - prev_state[1]
            dgu = g.u.values - prev_state[2]
            dgv = g.v.values - prev_state[3]
            num = float(du @ du + dv @ dv)
            den = float(du @ dgu + dv @ dgv)
            if den > 0 and math.isfinite(num / den):
                alpha = min(max(num / den, cfg.min_step), 1e6)

        accepted = False
        while alpha >= cfg.min_step:
            wu = np.abs(s.u.values - alpha * g.u.values)
            wv = np.abs(s.v.values - alpha * g.v.values)
            w = StatePair(Field(grid, wu), Field(grid, wv))
            if w.is_zero():
                alpha *= cfg.armijo_shrink
                continue
            try:
                pr = project(w, prm, cfg.projection_tol)
            except ValueError:
                alpha *= cfg.armijo_shrink
                continue
            b_new = breakdown(pr.state, prm)
            if b_new.I <= I_cur - cfg.armijo_slope * alpha * gnorm2:
                accepted = True
                break
            alpha *= cfg.armijo_shrink

        if not accepted:
            stop_reason = "line_search_failed"
            break

        prev_state = (s.u.values, s.v.values, g.u.values, g.v.values)
        if b_new.I > I_cur:
            descent_monotone = False
        if pr.state.u.values.min() < 0 or pr.state.v.values.min() < 0:
            positivity_ok = False
        if b_new.L > 0:
            max_resid_rel = max(max_resid_rel, abs(b_new.F) / b_new.L)

        rel_drop = abs(I_cur - b_new.I) / max(1.0, abs(I_cur))
        stagnant = stagnant + 1 if rel_drop <= cfg.energy_tol else 0

        s = pr.state
        I_cur = b_new.I
        t0_history.append(pr.t0)
        trace.append((k, I_cur, grad_norm, pr.t0, alpha))
        iters_done = k + 1

        if stagnant >= STAGNATION_WINDOW:
            stop_reason = "stagnation"
            break

    if s.is_zero():
        raise ArithmeticError("iteration collapsed to the zero state")

    b = breakdown(s, prm)
    g = grad_I(s, prm)
    grad_norm = math.sqrt(_grad_norm2(g))
    converged = converged or grad_norm <= cfg.grad_tol
    _, _, rmax = steady_state_residual(s, prm)

    report = SolveReport(
        converged=converged,
        iterations=iters_done,
        I0_estimate=b.I,
        grad_norm=grad_norm,
        nehari_residual=abs(b.F),
        pde_residual_max=rmax,
        t0_history=tuple(t0_history),
        wall_time=time.perf_counter() - t_start,
        stop_reason="grad_tol" if converged else stop_reason,
        trace=tuple(trace),
        descent_monotone=descent_monotone,
        positivity_ok=positivity_ok,
        max_manifold_residual_rel=max_resid_rel,
        restart_index=restart_index,
    )
    return s, report


def solve_ground_state(grid: GridSpec, prm: PhysParams, cfg: SolveConfig):
    """Minimize I over the Nehari manifold; returns (state, report).

    With restarts > 1 the solve is repeated from jittered initial guesses and
    the lowest-energy result is returned (heuristic coverage of the global
    infimum; no global-minimality certificate).
    """
    best = None
    for r in range(cfg.restarts):
        s, report = _solve_once(grid, prm, cfg, r)
        if best is None or report.I0_estimate < best[1].I0_estimate:
            best = (s, report)
    return best


def lambda_sweep(grid: GridSpec, base_prm: PhysParams, lambda_list, cfg: SolveConfig):
    """Solve for each coupling strength, warm-starting from the previous one.

    Returns a list of (lam, report) in input order.  A failed solve yields a
    (lam, exception) entry and the sweep continues from the last good state.
    """
    lams = list(lambda_list)
    if not lams:
        raise ValueError("lambda list must be nonempty")
    if any(not (lam > 0) for lam in lams):
        raise ValueError("all lambda values must be positive")

    results = []
    warm = None
    for lam in lams:
        prm = replace(base_prm, lam=lam)
        run_cfg = cfg
        if warm is not None:
            run_cfg = replace(
                cfg, init_kind="custom-fields", custom_u=warm.u, custom_v=warm.v,
                restarts=1,
            )
        try:
            s, report = solve_ground_state(grid, prm, run_cfg)
        except (ValueError, ArithmeticError) as exc:
            results.append((lam, exc))
            continue
        warm = s
        results.append((lam, report))
    return results
