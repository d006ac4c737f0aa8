"""Exact operator, truncation errors, mesh constants and convergence studies."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from fpdiff.gauss_legendre import ConstructionError, gl_rule, hr_rule
from fpdiff.mesh import (
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
    Diffusivity,
    TridiagonalOperator,
    apply,
    assemble_type1,
    assemble_type2,
    morel_alpha,
    rk4_alpha,
)

FAMILIES = ("lee", "haldy-ligou", "morel", "rk4", "uniform", "uniform-shifted")
GL_FAMILIES = ("lee", "haldy-ligou", "morel", "rk4")
EXPONENTS = ("q", "r", "s", "t", "u", "v")

# diagnostic each exponent column is fitted to
_EXPONENT_SOURCE = {
    "q": "D_star_N",
    "r": "D_N",
    "s": "m_star_N",
    "t": "beta_N",
    "u": "beta_star_N",
    "v": "X_N",
}

# exponent columns printed for each family, following the reference tables
TABLE_COLUMNS = {
    "lee": ("q", "s"),
    "haldy-ligou": ("q", "r", "s", "t"),
    "morel": ("q", "r", "s", "t", "u"),
    "rk4": ("q", "r", "s", "t"),
    "uniform": (),
    "uniform-shifted": ("q",),
}


@dataclass(frozen=True)
class TestFunction:
    name: str
    f: Callable
    d1: Callable
    d2: Callable
    d3: Callable | None = None

    __test__ = False  # not a pytest class


def _monomial(k):
    def deriv(j):
        if j > k:
            return lambda mu: np.zeros_like(np.asarray(mu, dtype=float))
        c = math.perm(k, j)
        return lambda mu: c * np.asarray(mu, dtype=float) ** (k - j)
    return TestFunction(f"mu{k}", deriv(0), deriv(1), deriv(2), deriv(3))


def polynomial(coeffs, name=None):
    """Test function for sum(c_j mu^j), coefficients in increasing degree."""
    p = np.polynomial.Polynomial(coeffs)
    return TestFunction(name or f"poly{list(coeffs)}", p, p.deriv(1), p.deriv(2), p.deriv(3))


TEST_FUNCTIONS = {
    "exp": TestFunction("exp", np.exp, np.exp, np.exp, np.exp),
    "const": polynomial([1.0], "const"),
    **{f"mu{k}": _monomial(k) for k in range(6)},
}


def exact_fp_laplacian(diff: Diffusivity, tf: TestFunction, nodes) -> np.ndarray:
    """(D f')' = D' f' + D f'' at the given nodes."""
    mu = np.asarray(nodes, dtype=float)
    return diff.derivative(mu) * tf.d1(mu) + diff.value(mu) * tf.d2(mu)


def truncation_error_star(phi_at_points, dphi_at_nodes, mesh: Mesh) -> np.ndarray:
    """phi'(mu_n) minus the divided difference of phi over [mu_{n-1/2}, mu_{n+1/2}]."""
    phi = np.asarray(phi_at_points, dtype=float)
    return np.asarray(dphi_at_nodes, dtype=float) - np.diff(phi) / mesh.cell_widths


def truncation_error_mid(phi_at_nodes, dphi_at_points, mesh: Mesh) -> np.ndarray:
    """phi'(mu_{n+1/2}) minus the divided difference of phi over [mu_n, mu_{n+1}],
    for the N - 1 interior points."""
    phi = np.asarray(phi_at_nodes, dtype=float)
    return np.asarray(dphi_at_points, dtype=float) - np.diff(phi) / np.diff(mesh.nodes)


@dataclass(frozen=True)
class MeshDiagnostics:
    M_N: float
    M_tilde_N: float
    M_star_N: float
    m_star_N: float
    D_N: float
    D_star_N: float
    A_N: float
    B_N: float
    C_N: float
    beta_N: float
    mean_value_defect: float
    beta_star_N: float | None = None
    Lambda_N: float | None = None
    X_N: float | None = None


def _max_abs(a):
    return float(np.max(np.abs(a))) if len(a) else 0.0


def mesh_diagnostics(mesh: Mesh, diff: Diffusivity = FP_DIFFUSIVITY,
                     alpha: AlphaCoefficients | None = None) -> MeshDiagnostics:
    """Regularity constants of a mesh, plus the alpha-dependent ones when
    ``alpha`` is given.

    ``mean_value_defect`` is max |(mu_{n-1} + mu_{n+1})/2 - mu_n| over the
    interior nodes.
    """
    geo = cell_geometry(mesh)
    nodes, points = mesh.nodes, mesh.points
    gaps = np.diff(nodes)
    M_N = float(gaps.max()) if len(gaps) else 0.0
    widths = mesh.cell_widths
    D_N = _max_abs(geo.d)
    D_star_N = _max_abs(geo.d_star)

    # interior rows n = 2..N-1 <-> node index i = 1..N-2
    dd = geo.d[:-1] - geo.d[1:]
    inner_widths = widths[1:-1]
    beta_N = _max_abs(dd * diff.value(points[2:-1]) / inner_widths)

    beta_star_N = Lambda_N = X_N = None
    if alpha is not None:
        lam = diff.value(points) - alpha.values
        Lambda_N = _max_abs(lam)
        beta_star_N = _max_abs(dd * lam[2:-1] / inner_widths)
        X_N = abs(alpha.values[-1] / (1.0 - points[-2]))

    return MeshDiagnostics(
        M_N=M_N,
        M_tilde_N=max(nodes[0] + 1.0, M_N, 1.0 - nodes[-1]),
        M_star_N=float(widths.max()),
        m_star_N=float(widths.min()),
        D_N=D_N,
        D_star_N=D_star_N,
        A_N=_max_abs(geo.d + geo.d_star[:-1]),
        B_N=_max_abs(geo.d + geo.d_star[1:]),
        C_N=D_N + D_star_N,
        beta_N=beta_N,
        mean_value_defect=_max_abs(0.5 * (nodes[:-2] + nodes[2:]) - nodes[1:-1]),
        beta_star_N=beta_star_N,
        Lambda_N=Lambda_N,
        X_N=X_N,
    )


def estimate_exponent(pairs):
    """Consecutive log-ratio decay exponents ln(v_i/v_{i+1}) / ln(N_{i+1}/N_i).

    Returns one entry per consecutive pair. When a value is zero or negative
    the exponent is undefined: ``None`` if both values are zero (exact), NaN
    otherwise.
    """
    pairs = list(pairs)
    if len(pairs) < 2:
        raise ValueError("need at least two (N, value) pairs")
    out = []
    for (n0, v0), (n1, v1) in zip(pairs, pairs[1:]):
        if n1 <= n0:
            raise ValueError("N must be strictly increasing")
        if v0 is None or v1 is None:
            out.append(None)
        elif v0 == 0.0 and v1 == 0.0:
            out.append(None)
        elif v0 <= 0.0 or v1 <= 0.0:
            out.append(math.nan)
        else:
            out.append(math.log(v0 / v1) / math.log(n1 / n0))
    return out


@dataclass(frozen=True)
class SchemeConfig:
    family: str
    mode: str = "fr"

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown scheme family {self.family!r}")
        if self.mode not in ("fr", "hr"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "hr" and self.family not in GL_FAMILIES:
            raise ValueError(f"{self.family} has no half-range mode")

    @property
    def label(self):
        return f"{self.family}-{self.mode}"


@dataclass(frozen=True, eq=False)
class Discretization:
    mesh: Mesh
    alpha: AlphaCoefficients | None
    operator: TridiagonalOperator


def build_scheme(config: SchemeConfig, n: int, diff: Diffusivity = FP_DIFFUSIVITY) -> Discretization:
    """Mesh, alpha and operator for ``n`` nodes (``n`` per half in HR mode)."""
    fam = config.family
    if fam in GL_FAMILIES:
        rule = hr_rule(n) if config.mode == "hr" else gl_rule(n)
        mesh = lee_mesh(rule) if fam == "lee" else haldy_ligou_mesh(rule)
    elif fam == "uniform":
        mesh = uniform_mesh(n)
    else:
        mesh = shifted_uniform_mesh(n)
    alpha = None
    if fam == "morel":
        alpha = morel_alpha(mesh, diff)
    elif fam == "rk4":
        if diff is not FP_DIFFUSIVITY:
            raise ValueError("the RK4 alpha recursion is specific to D = 1 - mu^2")
        alpha = rk4_alpha(mesh)
    op = assemble_type1(mesh, diff) if alpha is None else assemble_type2(mesh, alpha)
    return Discretization(mesh, alpha, op)


def nodal_errors(disc: Discretization, tf: TestFunction, diff: Diffusivity = FP_DIFFUSIVITY):
    """Signed errors exact minus approximate at every node."""
    nodes = disc.mesh.nodes
    return exact_fp_laplacian(diff, tf, nodes) - apply(disc.operator, tf.f(nodes))


@dataclass
class ReportRow:
    n: int                      # total node count (2N in HR mode)
    E: float | None
    order: float | None = None
    exponents: dict = field(default_factory=dict)
    diagnostics: MeshDiagnostics | None = None
    failure: str | None = None


@dataclass
class ConvergenceReport:
    scheme: str
    mode: str
    function: str
    rows: list

    @property
    def columns(self):
        family = self.scheme
        return TABLE_COLUMNS[family]

    def to_csv(self):
        """Full-precision CSV: N, E, order, q, r, s, t, u, v."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["N", "E", "order", *EXPONENTS])
        for row in self.rows:
            writer.writerow([row.n, format_full(row.E), format_full(row.order),
                             *(format_full(row.exponents.get(k)) for k in EXPONENTS)])
        return buf.getvalue()

    def to_markdown(self, digits=3):
        """Table laid out like the reference tables, ``digits`` significant digits."""
        show_order = self.mode == "fr"
        cols = self.columns
        head = ["2N" if self.mode == "hr" else "N", "E"]
        if show_order:
            head.append("order")
        head += list(cols)
        lines = ["| " + " | ".join(head) + " |",
                 "|" + "---|" * len(head)]
        for row in self.rows:
            cells = [str(row.n)]
            if row.failure:
                cells.append(f"failed: {row.failure}")
                cells += [""] * (len(head) - 2)
            else:
                cells.append(format_sig(row.E, digits, sci=True))
                if show_order:
                    cells.append(format_sig(row.order, digits))
                cells += [format_sig(row.exponents.get(k), digits) for k in cols]
            lines.append("| " + " | ".join(cells) + " |")
        return "\n".join(lines) + "\n"


def format_full(x):
    """Round-trip repr of a float; empty for missing or undefined values."""
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    return repr(float(x))


def format_sig(x, digits, sci=False):
    """``digits`` significant digits, scientific outside [0.1, 1000)."""
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    if sci or not 0.1 <= abs(x) < 1000:
        return f"{x:.{digits - 1}e}"
    return f"{x:#.{digits}g}"


def convergence_study(config: SchemeConfig, tf: TestFunction, ns,
                      diff: Diffusivity = FP_DIFFUSIVITY) -> ConvergenceReport:
    """Max nodal error for each N in ``ns`` plus fitted order and exponents.

    In HR mode each entry of ``ns`` is the node count per half-interval.
    A construction failure is recorded on its row; the other rows still run.
    """
    ns = list(ns)
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError("ns must be strictly increasing")
    per_half = 2 if config.mode == "hr" else 1
    rows = []
    for n in ns:
        try:
            disc = build_scheme(config, n, diff)
        except ConstructionError as exc:
            rows.append(ReportRow(per_half * n, None, failure=str(exc)))
            continue
        err = nodal_errors(disc, tf, diff)
        diag = mesh_diagnostics(disc.mesh, diff, disc.alpha)
        rows.append(ReportRow(disc.mesh.count, float(np.max(np.abs(err))), diagnostics=diag))

    for prev, row in zip(rows, rows[1:]):
        if prev.failure or row.failure:
            continue
        pair = [(prev.n, prev.E), (row.n, row.E)]
        row.order = estimate_exponent(pair)[0]
        for key, attr in _EXPONENT_SOURCE.items():
            v0 = getattr(prev.diagnostics, attr)
            v1 = getattr(row.diagnostics, attr)
            if v0 is None or v1 is None:
                continue
            row.exponents[key] = estimate_exponent([(prev.n, v0), (row.n, v1)])[0]
    return ConvergenceReport(config.family, config.mode, tf.name, rows)


def moment_residuals(mesh: Mesh, op_output, fvals):
    """(sum w y, sum w mu y + 2 sum w mu f): both vanish for a scheme with
    the discrete zeroth and first moment properties."""
    if mesh.weights is None:
        raise ValueError("moment residuals need a mesh carrying weights")
    w, mu = mesh.weights, mesh.nodes
    y = np.asarray(op_output, dtype=float)
    f = np.asarray(fvals, dtype=float)
    zeroth = float(np.sum(w * y))
    first = float(np.sum(w * mu * y) + 2.0 * np.sum(w * mu * f))
    return zeroth, first


def error_profile(config: SchemeConfig, tf: TestFunction, n: int,
                  diff: Diffusivity = FP_DIFFUSIVITY):
    """Nodes and signed nodal errors (exact minus approximate)."""
    disc = build_scheme(config, n, diff)
    return disc.mesh.nodes.copy(), nodal_errors(disc, tf, diff)
