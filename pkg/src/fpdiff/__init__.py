"""Finite-difference discretizations of the angular diffusion operator
((1 - mu^2) f'(mu))' on [-1, 1], with Gauss-Legendre based meshes,
type I / type II schemes and convergence diagnostics."""

from fpdiff.gauss_legendre import (
    ConstructionError,
    QuadratureRule,
    RuleMode,
    gl_rule,
    hr_rule,
    legendre_eval,
)
from fpdiff.mesh import (
    CellGeometry,
    Mesh,
    cell_geometry,
    haldy_ligou_mesh,
    lee_mesh,
    shifted_uniform_mesh,
    uniform_mesh,
)
from fpdiff.schemes import (
    FP_DIFFUSIVITY,
    AlphaCoefficients,
    AlphaSource,
    Diffusivity,
    TridiagonalOperator,
    apply,
    assemble_type1,
    assemble_type2,
    morel_alpha,
    rk4_alpha,
)
from fpdiff.analysis import (
    ConvergenceReport,
    MeshDiagnostics,
    SchemeConfig,
    TestFunction,
    convergence_study,
    error_profile,
    estimate_exponent,
    exact_fp_laplacian,
    mesh_diagnostics,
    moment_residuals,
    truncation_error_mid,
    truncation_error_star,
)

__all__ = [
    "ConstructionError", "QuadratureRule", "RuleMode", "gl_rule", "hr_rule",
    "legendre_eval", "CellGeometry", "Mesh", "cell_geometry",
    "haldy_ligou_mesh", "lee_mesh", "shifted_uniform_mesh", "uniform_mesh",
    "FP_DIFFUSIVITY", "AlphaCoefficients", "AlphaSource", "Diffusivity",
    "TridiagonalOperator", "apply", "assemble_type1", "assemble_type2",
    "morel_alpha", "rk4_alpha", "ConvergenceReport", "MeshDiagnostics",
    "SchemeConfig", "TestFunction", "convergence_study", "error_profile",
    "estimate_exponent", "exact_fp_laplacian", "mesh_diagnostics",
    "moment_residuals", "truncation_error_mid", "truncation_error_star",
]
