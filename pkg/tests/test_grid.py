import numpy as np
import pytest

from nlsground import Field, GridSpec, dirichlet_energy, laplacian, quad_integral

from conftest import random_field


def test_spacing_and_node_count():
    g = GridSpec(dim=1, half_width=2.0, nodes_per_axis=5)
    assert g.spacing == 1.0
    assert g.spacing * (g.nodes_per_axis - 1) == 2 * g.half_width
    assert g.num_nodes == 5
    g2 = GridSpec(dim=2, half_width=1.0, nodes_per_axis=4)
    assert g2.num_nodes == 16


def test_gridspec_rejects_bad_inputs():
    with pytest.raises(ValueError):
        GridSpec(dim=3, half_width=1.0, nodes_per_axis=5)
    with pytest.raises(ValueError):
        GridSpec(dim=1, half_width=-1.0, nodes_per_axis=5)
    with pytest.raises(ValueError):
        GridSpec(dim=1, half_width=1.0, nodes_per_axis=2)


def test_field_enforces_dirichlet_boundary():
    g = GridSpec(dim=1, half_width=1.0, nodes_per_axis=3)
    f = Field(g, [5.0, 1.0, -2.0])
    assert f.values[0] == 0 and f.values[-1] == 0
    g2 = GridSpec(dim=2, half_width=1.0, nodes_per_axis=3)
    f2 = Field(g2, np.ones(9))
    assert f2.as_grid_array()[1, 1] == 1.0
    assert f2.values.sum() == 1.0  # only the center survives


def test_field_rejects_nonfinite():
    g = GridSpec(dim=1, half_width=1.0, nodes_per_axis=3)
    with pytest.raises(ValueError):
        Field(g, [0.0, np.nan, 0.0])
    with pytest.raises(ValueError):
        Field(g, [0.0, np.inf, 0.0])


def test_quad_integral_examples():
    g = GridSpec(dim=1, half_width=1.0, nodes_per_axis=3)
    assert quad_integral(Field.zeros(g)) == 0.0
    assert quad_integral(Field(g, [0, 1, 0])) == 1.0
    g5 = GridSpec(dim=1, half_width=2.0, nodes_per_axis=5)
    assert quad_integral(Field(g5, [0, 1, 1, 1, 0])) == 3.0


def test_dirichlet_energy_examples():
    g = GridSpec(dim=1, half_width=1.0, nodes_per_axis=3)
    assert dirichlet_energy(Field.zeros(g)) == 0.0
    assert dirichlet_energy(Field(g, [0, 1, 0])) == 2.0


def test_dirichlet_energy_modulus_inequality(rng, grid1d, grid2d):
    for grid in (grid1d, grid2d):
        for _ in range(10):
            f = random_field(grid, rng)
            assert dirichlet_energy(abs(f)) <= dirichlet_energy(f) * (1 + 1e-14)


def test_laplacian_examples():
    g = GridSpec(dim=1, half_width=1.0, nodes_per_axis=3)
    assert np.all(laplacian(Field.zeros(g)).values == 0)
    lap = laplacian(Field(g, [0, 1, 0]))
    assert lap.values[1] == -2.0
    assert lap.values[0] == 0.0 and lap.values[2] == 0.0


def test_laplacian_symmetry(rng, grid1d, grid2d):
    for grid in (grid1d, grid2d):
        f = random_field(grid, rng)
        g = random_field(grid, rng)
        a = quad_integral(Field(grid, g.values * laplacian(f).values))
        b = quad_integral(Field(grid, f.values * laplacian(g).values))
        scale = max(1.0, abs(a))
        assert abs(a - b) <= 1e-12 * scale


def test_laplacian_linearity(rng, grid1d):
    f = random_field(grid1d, rng)
    g = random_field(grid1d, rng)
    combo = Field(grid1d, 2.5 * f.values - 0.75 * g.values)
    lhs = laplacian(combo).values
    rhs = 2.5 * laplacian(f).values - 0.75 * laplacian(g).values
    assert np.allclose(lhs, rhs, rtol=1e-13, atol=1e-11)


def test_summation_by_parts(rng, grid1d, grid2d):
    for grid in (grid1d, grid2d):
        for _ in range(5):
            f = random_field(grid, rng)
            lhs = quad_integral(Field(grid, -f.values * laplacian(f).values))
            rhs = dirichlet_energy(f)
            assert abs(lhs - rhs) <= 1e-12 * rhs


@pytest.mark.parametrize("dim", [1, 2])
def test_laplacian_refinement_order(dim):
    # smooth profile vanishing on the box boundary, known Laplacian
    hw = 2.0
    errors = []
    for n in (33, 65, 129):
        g = GridSpec(dim=dim, half_width=hw, nodes_per_axis=n)
        k = np.pi / hw
        coords = g.meshgrid()
        f_vals = np.ones(g.shape)
        for c in coords:
            f_vals = f_vals * np.sin(k * (c + hw))
        f = Field(g, f_vals.reshape(-1))
        exact = -dim * k**2 * f.values
        interior = ~g.boundary_mask().reshape(-1)
        err = np.abs(laplacian(f).values - exact)[interior].max()
        errors.append(err)
    for coarse, fine in zip(errors, errors[1:]):
        assert 3.0 <= coarse / fine <= 5.0  # second order
