import csv
import io
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fpdiff.analysis import moment_residuals
from fpdiff.gauss_legendre import ConstructionError, gl_rule, hr_rule
from fpdiff.mesh import Mesh, haldy_ligou_mesh, lee_mesh, shifted_uniform_mesh, uniform_mesh
from fpdiff.schemes import (
    FP_DIFFUSIVITY,
    AlphaCoefficients,
    AlphaSource,
    Diffusivity,
    TridiagonalOperator,
    apply,
    assemble_type1,
    assemble_type2,
    exact_alpha,
    morel_alpha,
    rk4_alpha,
)

S3 = 1 / math.sqrt(3)


def gl_meshes(n):
    return all_meshes(n)[:4]


def all_meshes(n):
    return [lee_mesh(gl_rule(n)), haldy_ligou_mesh(gl_rule(n)),
            lee_mesh(hr_rule(max(n // 2, 1))), haldy_ligou_mesh(hr_rule(max(n // 2, 1))),
            uniform_mesh(max(n, 2)), shifted_uniform_mesh(max(n, 3))]


def dense(op):
    return (np.diag(op.diag) + np.diag(op.sub, -1) + np.diag(op.sup, 1))


class TestDiffusivity:
    def test_default(self):
        mu = np.array([-1.0, 0.0, 0.5, 1.0])
        np.testing.assert_array_equal(FP_DIFFUSIVITY.value(mu), [0.0, 1.0, 0.75, 0.0])
        np.testing.assert_array_equal(FP_DIFFUSIVITY.derivative(mu), [2.0, -0.0, -1.0, -2.0])

    def test_rejects_nonvanishing(self):
        with pytest.raises(ValueError, match="vanish"):
            Diffusivity("one", lambda m: np.ones_like(m), lambda m: np.zeros_like(m))

    def test_type1_refuses_nonvanishing(self):
        one = Diffusivity("one", lambda m: np.ones_like(m), lambda m: np.zeros_like(m),
                          vanishes_at_endpoints=False)
        with pytest.raises(ValueError):
            assemble_type1(uniform_mesh(4), one)


class TestAlpha:
    def test_first_value_must_be_zero(self):
        with pytest.raises(ValueError):
            AlphaCoefficients(np.array([0.1, 0.0]), AlphaSource.MOREL)

    def test_morel_two_nodes(self):
        a = morel_alpha(haldy_ligou_mesh(gl_rule(2)))
        np.testing.assert_allclose(a.values, [0, 2 * S3, 0], atol=1e-15)
        assert a.source is AlphaSource.MOREL

    def test_morel_one_node(self):
        np.testing.assert_array_equal(morel_alpha(haldy_ligou_mesh(gl_rule(1))).values, [0, 0])

    @settings(max_examples=25, deadline=None)
    @given(st.integers(1, 2000), st.booleans())
    def test_morel_symmetric_full_range(self, n, cumulative):
        mesh = (haldy_ligou_mesh if cumulative else lee_mesh)(gl_rule(n))
        a = morel_alpha(mesh).values
        np.testing.assert_allclose(a, a[::-1], rtol=0, atol=1e-13)
        assert abs(a[-1]) <= 1e-13

    def test_morel_general_diffusivity(self):
        # D = (1 - mu^2)(2 + mu): alpha increments use D'(mu_n)
        d = Diffusivity("cubic", lambda m: (1 - m * m) * (2 + m),
                        lambda m: -2 * m * (2 + m) + (1 - m * m))
        mesh = haldy_ligou_mesh(gl_rule(5))
        a = morel_alpha(mesh, d).values
        np.testing.assert_allclose(np.diff(a), d.derivative(mesh.nodes) * mesh.cell_widths)

    def test_rk4_two_nodes(self):
        a = rk4_alpha(haldy_ligou_mesh(gl_rule(2)))
        np.testing.assert_allclose(a.values, [0, 1, 0], atol=1e-15)
        assert a.source is AlphaSource.RK4

    @settings(max_examples=25, deadline=None)
    @given(st.integers(1, 2000))
    def test_rk4_matches_diffusivity(self, n):
        mesh = haldy_ligou_mesh(gl_rule(n))
        a = rk4_alpha(mesh).values
        np.testing.assert_allclose(a, FP_DIFFUSIVITY.value(mesh.points), rtol=0, atol=1e-13)
        np.testing.assert_allclose(a, a[::-1], rtol=0, atol=1e-13)

    def test_rk4_needs_weights(self):
        with pytest.raises(ConstructionError, match="weights"):
            rk4_alpha(shifted_uniform_mesh(5))

    def test_rk4_needs_cumulative_points(self):
        with pytest.raises(ConstructionError, match="cumulative"):
            rk4_alpha(lee_mesh(gl_rule(6)))

    def test_exact_alpha(self):
        mesh = lee_mesh(gl_rule(4))
        np.testing.assert_array_equal(exact_alpha(mesh).values, FP_DIFFUSIVITY.value(mesh.points))


class TestAssembly:
    def test_diagonal_lengths(self):
        op = assemble_type1(lee_mesh(gl_rule(7)))
        assert op.size == 7 and len(op.sub) == len(op.sup) == 6

    def test_single_node(self):
        op = assemble_type1(lee_mesh(gl_rule(1)))
        assert op.diag.tolist() == [0.0]
        np.testing.assert_array_equal(apply(op, [3.0]), [0.0])

    def test_rejects_nonzero_row_sum(self):
        mesh = uniform_mesh(2)
        with pytest.raises(ValueError, match="sum to zero"):
            TridiagonalOperator(np.array([1.0]), np.array([-1.0, 0.0]), np.array([1.0]), mesh)

    def test_rejects_bad_lengths(self):
        with pytest.raises(ValueError, match="N - 1"):
            TridiagonalOperator(np.array([1.0]), np.zeros(3), np.array([1.0]), uniform_mesh(3))

    @pytest.mark.parametrize("mesh", all_meshes(40), ids=lambda m: f"{m.label}-{m.count}")
    def test_row_sums_and_constants(self, mesh):
        for op in (assemble_type1(mesh), assemble_type2(mesh, morel_alpha(mesh))):
            rows = op.diag.copy()
            rows[1:] += op.sub
            rows[:-1] += op.sup
            assert np.max(np.abs(rows)) <= 1e-12 * np.max(np.abs(op.diag))
            assert np.max(np.abs(apply(op, np.full(op.size, 2.5)))) <= 1e-13

    def test_apply_matches_three_term_form(self):
        mesh = haldy_ligou_mesh(gl_rule(30))
        op = assemble_type1(mesh)
        f = np.cos(3 * mesh.nodes)
        np.testing.assert_allclose(apply(op, f), dense(op) @ f, rtol=1e-10, atol=1e-10)
        np.testing.assert_array_equal(op(f), apply(op, f))

    def test_apply_length_mismatch(self):
        op = assemble_type1(uniform_mesh(4))
        with pytest.raises(ValueError):
            apply(op, np.ones(3))

    def test_lee_two_nodes_quadratic(self):
        mesh = lee_mesh(gl_rule(2))
        np.testing.assert_allclose(apply(assemble_type1(mesh), mesh.nodes**2), [0, 0], atol=1e-15)

    def test_uniform_matches_classical_stencil(self):
        n = 16
        mesh = uniform_mesh(n)
        h = 2 / n
        f = np.exp(mesh.nodes)
        dp = FP_DIFFUSIVITY.value(mesh.points)
        ref = (dp[2:-1] * (f[2:] - f[1:-1]) - dp[1:-2] * (f[1:-1] - f[:-2])) / h**2
        np.testing.assert_allclose(apply(assemble_type1(mesh), f)[1:-1], ref, rtol=1e-12)

    def test_boundary_rows(self):
        mesh = haldy_ligou_mesh(gl_rule(5))
        a = morel_alpha(mesh).values
        f = np.sin(mesh.nodes)
        y = apply(assemble_type2(mesh, morel_alpha(mesh)), f)
        x, p = mesh.nodes, mesh.points
        first = a[1] * (f[1] - f[0]) / (x[1] - x[0]) / (p[1] + 1)
        last = -a[-2] * (f[-1] - f[-2]) / (x[-1] - x[-2]) / (1 - p[-2])
        assert y[0] == pytest.approx(first, rel=1e-12)
        assert y[-1] == pytest.approx(last, rel=1e-12)

    def test_type2_ignores_last_alpha(self):
        mesh = haldy_ligou_mesh(gl_rule(6))
        vals = np.array(morel_alpha(mesh).values)
        vals[-1] = 0.3
        a = assemble_type2(mesh, morel_alpha(mesh))
        b = assemble_type2(mesh, AlphaCoefficients(vals, AlphaSource.MOREL))
        np.testing.assert_array_equal(dense(a), dense(b))

    def test_type2_length_mismatch(self):
        with pytest.raises(ValueError, match="N \\+ 1"):
            assemble_type2(uniform_mesh(4), AlphaCoefficients(np.zeros(4), AlphaSource.EXACT))

    @pytest.mark.parametrize("mesh", all_meshes(25), ids=lambda m: f"{m.label}-{m.count}")
    def test_exact_alpha_is_type1(self, mesh):
        np.testing.assert_array_equal(dense(assemble_type2(mesh, exact_alpha(mesh))),
                                      dense(assemble_type1(mesh)))

    def test_morel_two_nodes_linear(self):
        mesh = haldy_ligou_mesh(gl_rule(2))
        y = apply(assemble_type2(mesh, morel_alpha(mesh)), mesh.nodes)
        np.testing.assert_allclose(y, [2 * S3, -2 * S3], atol=1e-15)

    def test_csv_dump(self):
        op = assemble_type1(uniform_mesh(3))
        rows = list(csv.reader(io.StringIO(op.to_csv())))
        assert rows[0] == ["row", "sub", "diag", "sup"]
        assert rows[1][1] == "" and rows[3][3] == ""
        assert [float(v) for v in rows[2][1:]] == pytest.approx([op.sub[0], op.diag[1], op.sup[1]])


class TestExactness:
    @pytest.mark.parametrize("n", [2, 5, 12, 20])
    def test_morel_linear_gl_meshes(self, n):
        # residual of a + b mu against b D'(mu), moderate N
        a, b = 3.0, -2.0
        for mesh in gl_meshes(n):
            y = apply(assemble_type2(mesh, morel_alpha(mesh)), a + b * mesh.nodes)
            resid = np.max(np.abs(y - b * FP_DIFFUSIVITY.derivative(mesh.nodes)))
            assert resid <= 1e-12 * (abs(a) + abs(b)), mesh.label

    @pytest.mark.parametrize("n", [1000, 2000])
    def test_morel_linear_roundoff_scale(self, n):
        # at large N the residual is the roundoff of the data amplified by
        # the largest coefficient, not a defect of the recursion
        for mesh in gl_meshes(n):
            op = assemble_type2(mesh, morel_alpha(mesh))
            y = apply(op, 3.0 - 2.0 * mesh.nodes)
            resid = np.max(np.abs(y - 4.0 * mesh.nodes))
            assert resid <= 100 * np.finfo(float).eps * np.max(np.abs(op.diag)), mesh.label

    @pytest.mark.parametrize("n", [2, 10, 60])
    def test_morel_linear_uniform(self, n):
        mesh = uniform_mesh(n)
        y = apply(assemble_type2(mesh, morel_alpha(mesh)), 3.0 - 2.0 * mesh.nodes)
        assert np.max(np.abs(y - 4.0 * mesh.nodes)) <= 5e-12

    @pytest.mark.parametrize("n", [3, 10, 60])
    def test_morel_linear_shifted_last_row(self, n):
        # alpha_{N+1/2} != 0 on this mesh; the last row alone misses by b X_N
        mesh = shifted_uniform_mesh(n)
        alpha = morel_alpha(mesh)
        y = apply(assemble_type2(mesh, alpha), 3.0 - 2.0 * mesh.nodes)
        resid = y - 4.0 * mesh.nodes
        assert np.max(np.abs(resid[:-1])) <= 5e-12
        x_n = alpha.values[-1] / (1.0 - mesh.points[-2])
        assert resid[-1] == pytest.approx(2.0 * x_n, rel=1e-9)
        assert abs(x_n) > 1e-3

    @pytest.mark.parametrize("build", [lambda n: lee_mesh(gl_rule(n)), uniform_mesh])
    @pytest.mark.parametrize("n", [4, 30, 100])
    def test_inner_differences_exact_on_quadratics(self, build, n):
        from fpdiff.analysis import truncation_error_mid

        mesh = build(n)
        e_mid = truncation_error_mid(mesh.nodes**2, 2 * mesh.points[1:-1], mesh)
        assert np.max(np.abs(e_mid)) <= 1e-13


class TestMoments:
    @settings(max_examples=15, deadline=None)
    @given(st.integers(2, 2000))
    def test_zeroth_moment(self, n):
        mesh = haldy_ligou_mesh(gl_rule(n))
        f = np.exp(mesh.nodes)
        for op in (assemble_type1(mesh), assemble_type2(mesh, morel_alpha(mesh))):
            y = apply(op, f)
            zeroth, _ = moment_residuals(mesh, y, f)
            assert abs(zeroth) <= 1e-12 * np.sum(np.abs(mesh.weights * y))

    @settings(max_examples=15, deadline=None)
    @given(st.integers(2, 2000))
    def test_morel_first_moment(self, n):
        mesh = haldy_ligou_mesh(gl_rule(n))
        f = np.exp(mesh.nodes)
        _, first = moment_residuals(mesh, apply(assemble_type2(mesh, morel_alpha(mesh)), f), f)
        assert abs(first) <= 1e-11

    def test_rk4_breaks_first_moment(self):
        mesh = haldy_ligou_mesh(gl_rule(100))
        f = np.exp(mesh.nodes)
        _, first = moment_residuals(mesh, apply(assemble_type2(mesh, rk4_alpha(mesh)), f), f)
        assert abs(first) > 1e-6

    def test_lee_breaks_zeroth_moment(self):
        mesh = lee_mesh(gl_rule(100))
        f = np.exp(mesh.nodes)
        zeroth, _ = moment_residuals(mesh, apply(assemble_type1(mesh), f), f)
        # regression baseline
        assert zeroth == pytest.approx(-7.6e-4, rel=0.05) or zeroth == pytest.approx(7.6e-4, rel=0.05)
