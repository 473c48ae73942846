"""
Unit tests for the spherical product quadrature.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pydantic import ValidationError

from bloch_verifier.errors import DomainError, NumericError, ResourceBudgetError
from bloch_verifier.quadrature.sphere import (
    FOUR_PI,
    SphereGrid,
    build_grid,
    check_budget,
    grids_for,
    integrate_sphere,
    integrate_spheres,
    iter_prefix_nodes,
    iter_product_nodes,
    orthogonality_matrix,
    orthogonality_residual,
    project_correlation_tensor,
    scalar_product_numeric,
)
from bloch_verifier.quantum.correlations import correlation_tensor, e_sep, separable_maximum
from bloch_verifier.quantum.states import bell_state, mixed_qubit, product_state

vectors = st.tuples(*[st.floats(min_value=-1.0, max_value=1.0)] * 3)


class TestBuildGrid:
    """Test grid construction."""

    def test_default_grid(self, grid):
        assert grid.n_theta == 4
        assert grid.n_phi == 8
        assert grid.n_nodes == 32
        assert grid.unit_vectors.shape == (32, 3)
        assert abs(grid.total_weight - FOUR_PI) <= 1e-12

    def test_node_order(self, grid):
        """Nodes run theta-major in ascending theta, then phi."""
        thetas = [theta for theta, _ in grid.theta_nodes]

        assert thetas == sorted(thetas)
        assert grid.settings[0].theta == grid.settings[7].theta
        assert grid.settings[1].phi == pytest.approx(2 * math.pi / 8)

    def test_invalid_sizes(self):
        with pytest.raises(DomainError):
            build_grid(0, 4)
        with pytest.raises(DomainError):
            build_grid(4, 0)

    def test_weights_must_cover_sphere(self):
        with pytest.raises(ValidationError):
            SphereGrid(theta_nodes=((1.0, 1.0),), phi_nodes=((0.0, 1.0),))

    def test_grids_for(self):
        grids = grids_for(3, 2, 3)

        assert len(grids) == 3
        assert all(g.n_nodes == 6 for g in grids)


class TestOrthogonality:
    """Test the direction-cosine orthogonality relation on grids."""

    def test_default_grid_is_exact(self, grid):
        np.testing.assert_allclose(orthogonality_matrix(grid), (FOUR_PI / 3) * np.eye(3), atol=1e-12)
        assert orthogonality_residual(grid) <= 1e-12

    def test_single_node_grid(self):
        """One node at the equator puts all 4pi on c_x^2."""
        coarse = build_grid(1, 1)
        matrix = orthogonality_matrix(coarse)

        assert orthogonality_residual(coarse) == pytest.approx(8 * math.pi / 3)
        assert abs(matrix[2, 2] - FOUR_PI / 3) == pytest.approx(4 * math.pi / 3)

    @given(n_theta=st.integers(min_value=2, max_value=8), n_phi=st.integers(min_value=3, max_value=16))
    @settings(max_examples=30, deadline=None)
    def test_small_grids_are_exact(self, n_theta, n_phi):
        """Two theta nodes and three phi nodes already suffice."""
        assert orthogonality_residual(build_grid(n_theta, n_phi)) <= 1e-12


class TestIntegration:
    """Test single- and multi-sphere integration."""

    def test_constant_and_quartic(self, grid):
        assert integrate_sphere(lambda s: 1.0, grid) == pytest.approx(FOUR_PI, abs=1e-12)
        assert integrate_sphere(lambda s: math.cos(s.theta) ** 4, grid) == pytest.approx(FOUR_PI / 5, abs=1e-12)

    @pytest.mark.parametrize(
        "powers, expected",
        [
            ((0, 0, 0), 4.0),
            ((2, 0, 0), 4.0 / 3),
            ((0, 0, 4), 4.0 / 5),
            ((0, 0, 6), 4.0 / 7),
            ((2, 0, 4), 4.0 / 35),
            ((2, 2, 2), 4.0 / 105),
            ((0, 4, 2), 4.0 / 35),
            ((0, 0, 7), 0.0),
            ((3, 1, 2), 0.0),
            ((1, 0, 5), 0.0),
        ],
    )
    def test_low_degree_monomials_exact(self, powers, expected):
        """The 8x16 grid integrates x^a y^b z^c exactly for a + b + c <= 7."""
        fine = build_grid(8, 16)
        a, b, c = powers

        def monomial(s):
            x, y, z = s.unit_vector
            return x**a * y**b * z**c

        assert abs(integrate_sphere(monomial, fine) - expected * math.pi) <= 1e-13

    @given(first=vectors, second=vectors)
    @settings(max_examples=25, deadline=None)
    def test_factorized_integrand(self, first, second):
        """A product of per-sphere functions integrates to the product of integrals."""
        grid = build_grid(4, 8)

        def f1(s):
            return 1.0 + float(np.dot(first, s.unit_vector)) ** 2

        def f2(s):
            return 0.5 - float(np.dot(second, s.unit_vector))

        joint = integrate_spheres(lambda chosen: f1(chosen[0]) * f2(chosen[1]), [grid, grid])

        expected = integrate_sphere(f1, grid) * integrate_sphere(f2, grid)
        assert abs(joint - expected) <= 1e-12 * max(1.0, abs(expected))

    def test_non_finite_integrand(self, grid):
        with pytest.raises(NumericError) as excinfo:
            integrate_sphere(lambda s: math.nan, grid)
        assert excinfo.value.location is not None

    def test_no_grids(self):
        with pytest.raises(DomainError):
            integrate_spheres(lambda chosen: 1.0, [])

    def test_budget(self, grid):
        assert check_budget([grid, grid]) == 32 * 32
        with pytest.raises(ResourceBudgetError):
            check_budget([grid, grid], node_budget=1000)
        with pytest.raises(ResourceBudgetError):
            integrate_spheres(lambda chosen: 1.0, [grid, grid], node_budget=1000)

    def test_product_nodes_order(self):
        """Nodes are visited lexicographically and carry product weights."""
        grids = grids_for(2, 2, 3)
        visited = list(iter_product_nodes(grids))

        assert [indices for indices, _, _ in visited][:3] == [(0, 0), (0, 1), (0, 2)]
        assert len(visited) == 36
        assert math.fsum(w for _, _, w in visited) == pytest.approx(FOUR_PI ** 2)

    def test_prefix_nodes(self):
        grids = grids_for(2, 2, 3)

        assert list(iter_prefix_nodes(grids[:1])) == [((), 1)]
        prefixes = list(iter_prefix_nodes(grids))
        assert len(prefixes) == 6
        assert math.fsum(w for _, w in prefixes) == pytest.approx(FOUR_PI)

    def test_scalar_product_numeric_examples(self, grid):
        """cos theta gives 4pi/3, a constant gives 4pi, cos theta_1 cos theta_2 gives (4pi/3)^2."""
        def cos_theta(s):
            return math.cos(s.theta)

        assert scalar_product_numeric(lambda chosen: cos_theta(chosen[0]), [grid]) == pytest.approx(
            FOUR_PI / 3, abs=1e-12
        )
        assert scalar_product_numeric(lambda chosen: 1.0, [grid]) == pytest.approx(FOUR_PI, abs=1e-12)
        two = scalar_product_numeric(lambda chosen: cos_theta(chosen[0]) * cos_theta(chosen[1]), [grid, grid])
        assert two == pytest.approx((FOUR_PI / 3) ** 2, abs=1e-12)

    def test_bell_scalar_product(self):
        """Integrating E_Sep^2 node by node gives 3 (4pi/3)^2 for the Bell state."""
        state = bell_state()
        value = scalar_product_numeric(lambda chosen: e_sep(state, chosen), grids_for(2))

        assert value == pytest.approx(3 * separable_maximum(2), rel=1e-12)


class TestProjection:
    """Test recovery of T from E by projection."""

    def test_recovers_product_tensor(self):
        state = product_state([mixed_qubit((0.3, 0.4, 0.5)), mixed_qubit((-0.6, 0.0, 0.8))])
        joint = state.joint()
        projected = project_correlation_tensor(lambda chosen: e_sep(joint, chosen), grids_for(2))

        assert np.max(np.abs(projected - correlation_tensor(state).values)) <= 1e-10

    def test_sign_function_exceeds_bloch_ball(self, grid):
        """A +-1 function has a linear part outside the unit ball."""
        projected = project_correlation_tensor(lambda chosen: 1.0 if math.cos(chosen[0].theta) >= 0 else -1.0, [grid])

        assert projected[2] > 1.0
        assert abs(projected[0]) <= 1e-12
