"""Product quadrature over spheres of measurement settings."""

from .sphere import (
    FOUR_PI,
    SphereGrid,
    build_grid,
    check_budget,
    default_grid,
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

__all__ = [
    "FOUR_PI",
    "SphereGrid",
    "build_grid",
    "check_budget",
    "default_grid",
    "grids_for",
    "integrate_sphere",
    "integrate_spheres",
    "iter_prefix_nodes",
    "iter_product_nodes",
    "orthogonality_matrix",
    "orthogonality_residual",
    "project_correlation_tensor",
    "scalar_product_numeric",
]
