import numpy as np
import pytest

from nlsground import (
    Field,
    GridSpec,
    SolveConfig,
    StatePair,
    breakdown,
    initial_guess,
    lambda_sweep,
    project,
    solve_ground_state,
)

from conftest import make_params

GRID = GridSpec(dim=1, half_width=10.0, nodes_per_axis=129)


def test_initial_guess_positive_and_deterministic():
    cfg = SolveConfig(rng_seed=7)
    s1 = initial_guess(GRID, cfg)
    s2 = initial_guess(GRID, cfg)
    interior = ~GRID.boundary_mask().reshape(-1)
    assert np.all(s1.u.values[interior] > 0)
    assert np.all(s1.v.values[interior] > 0)
    assert np.array_equal(s1.u.values, s2.u.values)
    assert np.array_equal(s1.v.values, s2.v.values)
    # peak sits at the configured center
    assert s1.u.values.argmax() == GRID.num_nodes // 2


def test_initial_guess_restart_jitter_is_seeded():
    cfg = SolveConfig(rng_seed=7)
    a = initial_guess(GRID, cfg, restart_index=2)
    b = initial_guess(GRID, cfg, restart_index=2)
    c = initial_guess(GRID, cfg, restart_index=3)
    assert np.array_equal(a.u.values, b.u.values)
    assert not np.array_equal(a.u.values, c.u.values)


def test_initial_guess_rejects_zero_amplitudes():
    with pytest.raises(ValueError):
        initial_guess(GRID, SolveConfig(amp_u=0.0, amp_v=0.0))
    # a single zero channel is a valid nonzero state
    s = initial_guess(GRID, SolveConfig(amp_v=0.0))
    assert np.all(s.v.values == 0)
    assert s.u.values.max() > 0


def test_max_iters_zero_returns_projected_guess():
    prm = make_params()
    cfg = SolveConfig(max_iters=0)
    state, report = solve_ground_state(GRID, prm, cfg)
    assert not report.converged
    assert report.iterations == 0
    expected = project(initial_guess(GRID, cfg).modulus(), prm).state
    assert np.allclose(state.u.values, expected.u.values, rtol=1e-14)
    b = breakdown(state, prm)
    assert abs(b.F) <= 1e-10 * b.L


def test_solve_invariants_small_problem():
    prm = make_params()
    state, report = solve_ground_state(GRID, prm, SolveConfig())
    assert report.descent_monotone
    assert report.positivity_ok
    assert report.max_manifold_residual_rel <= 1e-10
    assert report.I0_estimate > 0
    energies = [row[1] for row in report.trace]
    assert all(e > 0 for e in energies)
    assert all(b <= a for a, b in zip(energies, energies[1:]))
    assert state.u.values.min() >= 0 and state.v.values.min() >= 0
    b = breakdown(state, prm)
    assert abs(b.F) <= 1e-10 * b.L


def test_solve_symmetric_matches_closed_form_energy():
    # u = v = sech(x) at sigma=omega=lam=p-2=1; I = 4/3 in the continuum
    prm = make_params()
    grid = GridSpec(dim=1, half_width=12.0, nodes_per_axis=385)
    state, report = solve_ground_state(grid, prm, SolveConfig())
    assert report.I0_estimate == pytest.approx(4.0 / 3.0, rel=2e-3)
    x = grid.axis_coords()
    assert np.abs(state.u.values - 1 / np.cosh(x)).max() <= 2e-3
    assert np.abs(state.u.values - state.v.values).max() <= 1e-12


def test_restarts_return_lowest_energy():
    prm = make_params()
    state, report = solve_ground_state(GRID, prm, SolveConfig(restarts=3))
    _, single = solve_ground_state(GRID, prm, SolveConfig())
    assert report.I0_estimate <= single.I0_estimate + 1e-9


def test_custom_fields_warm_start():
    prm = make_params()
    state, _ = solve_ground_state(GRID, prm, SolveConfig())
    cfg = SolveConfig(init_kind="custom-fields", custom_u=state.u, custom_v=state.v)
    warm_state, warm_report = solve_ground_state(GRID, prm, cfg)
    assert warm_report.iterations <= 5
    assert warm_report.I0_estimate == pytest.approx(
        breakdown(state, prm).I, rel=1e-12
    )


def test_lambda_sweep_single_matches_solve():
    prm = make_params()
    cfg = SolveConfig()
    [(lam, rep)] = lambda_sweep(GRID, prm, [1.0], cfg)
    _, direct = solve_ground_state(GRID, prm, cfg)
    assert lam == 1.0
    assert rep.I0_estimate == direct.I0_estimate


def test_lambda_sweep_repeated_lambda_is_stable():
    results = lambda_sweep(GRID, make_params(), [1.0, 1.0], SolveConfig())
    i0 = [rep.I0_estimate for _, rep in results]
    assert abs(i0[0] - i0[1]) <= 1e-10


def test_lambda_sweep_energy_decreases_with_coupling():
    # closed form for the symmetric branch: I0 = 8 / (3 (1 + lam))
    grid = GridSpec(dim=1, half_width=12.0, nodes_per_axis=385)
    results = lambda_sweep(grid, make_params(), [0.5, 1.0, 2.0], SolveConfig())
    i0 = [rep.I0_estimate for _, rep in results]
    assert i0[0] > i0[1] > i0[2]
    for (lam, rep), val in zip(results, i0):
        assert val == pytest.approx(8.0 / (3.0 * (1.0 + lam)), rel=2e-3)


def test_lambda_sweep_rejects_bad_lists():
    with pytest.raises(ValueError):
        lambda_sweep(GRID, make_params(), [], SolveConfig())
    with pytest.raises(ValueError):
        lambda_sweep(GRID, make_params(), [1.0, -2.0], SolveConfig())


def test_solveconfig_validation():
    with pytest.raises(ValueError):
        SolveConfig(armijo_shrink=1.5)
    with pytest.raises(ValueError):
        SolveConfig(step0=0.0)
    with pytest.raises(ValueError):
        SolveConfig(max_iters=-1)
    with pytest.raises(ValueError):
        SolveConfig(init_kind="plane-wave")
