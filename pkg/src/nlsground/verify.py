"""Invariant suite behind the `verify` subcommand.

Each check returns (name, passed, detail).  The suite covers the discrete
calculus identities, the functional algebra, the Nehari projection
guarantees, and a full audit of a solve on the configured problem
(monotone descent, positivity, manifold residual, positive energy).
"""

from __future__ import annotations

import numpy as np

from .energy import PhysParams, StatePair, breakdown, eval_I, eval_L, grad_I, h_inner
from .grid import Field, GridSpec, dirichlet_energy, laplacian, quad_integral
from .minimize import SolveConfig, solve_ground_state
from .nehari import fiber_H, project

CHECK_GRID = GridSpec(dim=1, half_width=8.0, nodes_per_axis=65)
P_VALUES = (1.5, 2.0, 3.0, 4.0, 5.0)
LAM_VALUES = (0.5, 1.0, 2.0)


def _random_field(grid: GridSpec, rng, positive=False) -> Field:
    vals = rng.uniform(0.2, 1.0, grid.num_nodes) if positive else rng.standard_normal(grid.num_nodes)
    return Field(grid, vals)


def _random_state(grid: GridSpec, rng, positive=False) -> StatePair:
    return StatePair(_random_field(grid, rng, positive), _random_field(grid, rng, positive))


def _params(p=3.0, lam=1.0) -> PhysParams:
    return PhysParams(sigma1=1.0, sigma2=1.0, omega=1.0, lam=lam, p=p)


def check_summation_by_parts(rng) -> tuple:
    worst = 0.0
    for grid in (CHECK_GRID, GridSpec(dim=2, half_width=3.0, nodes_per_axis=17)):
        for _ in range(5):
            f = _random_field(grid, rng)
            lhs = quad_integral(Field(grid, -f.values * laplacian(f).values))
            rhs = dirichlet_energy(f)
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
    return "summation_by_parts", worst <= 1e-12, f"max rel diff {worst:.3e}"


def check_laplacian_symmetry(rng) -> tuple:
    worst = 0.0
    for _ in range(5):
        f = _random_field(CHECK_GRID, rng)
        g = _random_field(CHECK_GRID, rng)
        a = quad_integral(Field(CHECK_GRID, g.values * laplacian(f).values))
        b = quad_integral(Field(CHECK_GRID, f.values * laplacian(g).values))
        worst = max(worst, abs(a - b) / max(1.0, abs(a)))
    return "laplacian_symmetry", worst <= 1e-12, f"max rel diff {worst:.3e}"


def check_modulus_energy(rng) -> tuple:
    ok = True
    for _ in range(10):
        f = _random_field(CHECK_GRID, rng)
        ok = ok and dirichlet_energy(abs(f)) <= dirichlet_energy(f) * (1 + 1e-14)
    return "modulus_dirichlet_energy", ok, "dirichlet_energy(|f|) <= dirichlet_energy(f)"


def check_homogeneity(rng) -> tuple:
    prm = _params()
    s = _random_state(CHECK_GRID, rng, positive=True)
    b = breakdown(s, prm)
    worst = 0.0
    for t in (0.0, 0.5, 1.0, 2.0):
        direct = eval_I(s.scaled(t), prm)
        ladder = fiber_H(t, b, prm.p) if t > 0 else 0.0
        worst = max(worst, abs(direct - ladder) / max(1.0, abs(direct)))
    return "fiber_homogeneity", worst <= 1e-12, f"max rel diff {worst:.3e}"


def check_gradient_consistency(rng) -> tuple:
    h = 1e-6
    worst = 0.0
    for p in (1.5, 3.0):
        prm = _params(p=p)
        for _ in range(5):
            s = _random_state(CHECK_GRID, rng, positive=True)
            d = _random_state(CHECK_GRID, rng)
            g = grad_I(s, prm)
            pairing = quad_integral(
                Field(CHECK_GRID, g.u.values * d.u.values + g.v.values * d.v.values)
            )
            splus = StatePair(
                Field(CHECK_GRID, s.u.values + h * d.u.values),
                Field(CHECK_GRID, s.v.values + h * d.v.values),
            )
            sminus = StatePair(
                Field(CHECK_GRID, s.u.values - h * d.u.values),
                Field(CHECK_GRID, s.v.values - h * d.v.values),
            )
            fd = (eval_I(splus, prm) - eval_I(sminus, prm)) / (2 * h)
            worst = max(worst, abs(pairing - fd) / max(abs(fd), 1e-10))
    return "gradient_vs_finite_difference", worst <= 1e-6, f"max rel err {worst:.3e}"


def check_constraint_derivative(rng) -> tuple:
    h = 1e-6
    worst = 0.0
    negative_on_manifold = True
    for p in P_VALUES:
        prm = _params(p=p)
        s = _random_state(CHECK_GRID, rng, positive=True)
        b = breakdown(s, prm)
        analytic = 2 * b.L - (p + 1) * b.Mp - 8 * b.Nlam
        fd = (
            breakdown(s.scaled(1 + h), prm).F - breakdown(s.scaled(1 - h), prm).F
        ) / (2 * h)
        worst = max(worst, abs(analytic - fd) / max(abs(analytic), 1e-10))
        proj = project(s, prm).state
        bp = breakdown(proj, prm)
        on_manifold = 2 * bp.L - (p + 1) * bp.Mp - 8 * bp.Nlam
        negative_on_manifold = negative_on_manifold and on_manifold < 0
    ok = worst <= 1e-8 and negative_on_manifold
    return "constraint_derivative_audit", ok, f"max rel err {worst:.3e}, negative on manifold: {negative_on_manifold}"


def check_projection(rng) -> tuple:
    worst_resid = 0.0
    worst_idem = 0.0
    worst_decomp = 0.0
    coercive = True
    fiber_max = True
    for p in P_VALUES:
        for lam in LAM_VALUES:
            prm = _params(p=p, lam=lam)
            s = _random_state(CHECK_GRID, rng, positive=True)
            pr = project(s, prm)
            b = breakdown(pr.state, prm)
            worst_resid = max(worst_resid, abs(b.F) / b.L)
            worst_idem = max(worst_idem, abs(project(pr.state, prm).t0 - 1.0))
            decomp = (p - 1) / (2 * (p + 1)) * b.L + (3 - p) / (2 * (p + 1)) * b.Nlam
            worst_decomp = max(worst_decomp, abs(b.I - decomp) / abs(b.I))
            floor = (p - 1) / (2 * (p + 1)) if p <= 3 else 0.25
            coercive = coercive and b.I >= floor * b.L * (1 - 1e-12) and b.I > 0
            b0 = breakdown(s, prm)
            h0 = fiber_H(pr.t0, b0, p)
            fiber_max = fiber_max and h0 >= fiber_H(0.5 * pr.t0, b0, p) and h0 >= fiber_H(2 * pr.t0, b0, p)
    ok = worst_resid <= 1e-10 and worst_idem <= 1e-10 and worst_decomp <= 1e-10 and coercive and fiber_max
    detail = (
        f"|F|/L <= {worst_resid:.3e}, |t0-1| <= {worst_idem:.3e}, "
        f"decomposition rel err <= {worst_decomp:.3e}, coercive: {coercive}, fiber max: {fiber_max}"
    )
    return "nehari_projection", ok, detail


def check_swap_symmetry(rng) -> tuple:
    prm = _params()
    s = _random_state(CHECK_GRID, rng, positive=True)
    swapped = StatePair(s.v, s.u)
    b1, b2 = breakdown(s, prm), breakdown(swapped, prm)
    ok = b1.I == b2.I and b1.F == b2.F
    return "swap_symmetry", ok, "I and F invariant under channel swap when sigma1 == sigma2"


def check_h_inner(rng) -> tuple:
    prm = _params()
    a = _random_state(CHECK_GRID, rng)
    b = _random_state(CHECK_GRID, rng)
    sym = abs(h_inner(a, b, prm) - h_inner(b, a, prm)) / max(1.0, abs(h_inner(a, b, prm)))
    norm = abs(h_inner(a, a, prm) - eval_L(a, prm)) / eval_L(a, prm)
    ok = sym <= 1e-13 and norm <= 1e-13
    return "h_inner_product", ok, f"symmetry rel err {sym:.3e}, norm identity rel err {norm:.3e}"


def check_solve_audit(grid: GridSpec, prm: PhysParams, cfg: SolveConfig) -> tuple:
    state, report = solve_ground_state(grid, prm, cfg)
    energies = [row[1] for row in report.trace]
    positive_energy = report.I0_estimate > 0 and all(e > 0 for e in energies)
    ok = (
        report.descent_monotone
        and report.positivity_ok
        and report.max_manifold_residual_rel <= 1e-10
        and positive_energy
        and state.u.values.min() >= 0
        and state.v.values.min() >= 0
    )
    detail = (
        f"iters {report.iterations}, I0 {report.I0_estimate:.6e}, "
        f"monotone: {report.descent_monotone}, positive: {report.positivity_ok}, "
        f"max |F|/L {report.max_manifold_residual_rel:.3e}"
    )
    return "configured_solve_audit", ok, detail


def run_verification(grid: GridSpec, prm: PhysParams, cfg: SolveConfig, seed: int = 0):
    """Run every check; returns (all_passed, list of (name, passed, detail))."""
    rng = np.random.default_rng(seed)
    checks = [
        check_summation_by_parts(rng),
        check_laplacian_symmetry(rng),
        check_modulus_energy(rng),
        check_homogeneity(rng),
        check_gradient_consistency(rng),
        check_constraint_derivative(rng),
        check_projection(rng),
        check_swap_symmetry(rng),
        check_h_inner(rng),
        check_solve_audit(grid, prm, cfg),
    ]
    return all(ok for _, ok, _ in checks), checks
