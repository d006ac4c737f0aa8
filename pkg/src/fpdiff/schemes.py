"""Tridiagonal assembly of the discrete operator on a node/point mesh.

Row n of every scheme reads

    [a_{n+1/2} (f_{n+1} - f_n)/(mu_{n+1} - mu_n)
     - a_{n-1/2} (f_n - f_{n-1})/(mu_n - mu_{n-1})] / (mu_{n+1/2} - mu_{n-1/2})

with a = D at the points (type I) or surrogate values alpha (type II).
The boundary fluxes at mu_{1/2} and mu_{N+1/2} never enter.
"""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass
from typing import Callable

import numpy as np

from fpdiff.gauss_legendre import ConstructionError
from fpdiff.mesh import Mesh


@dataclass(frozen=True)
class Diffusivity:
    name: str
    value: Callable[[np.ndarray], np.ndarray]
    derivative: Callable[[np.ndarray], np.ndarray]
    vanishes_at_endpoints: bool = True

    def __post_init__(self):
        if self.vanishes_at_endpoints:
            ends = np.abs(self.value(np.array([-1.0, 1.0])))
            if np.any(ends > 1e-14):
                raise ValueError(f"diffusivity {self.name!r} does not vanish at +-1")


FP_DIFFUSIVITY = Diffusivity(
    "1-mu^2",
    value=lambda mu: (1.0 - mu) * (1.0 + mu),
    derivative=lambda mu: -2.0 * mu,
)


class AlphaSource(enum.Enum):
    EXACT = "exact"
    MOREL = "morel"
    RK4 = "rk4"


@dataclass(frozen=True, eq=False)
class AlphaCoefficients:
    """Surrogate diffusivities alpha_{1/2}, ..., alpha_{N+1/2}."""

    values: np.ndarray
    source: AlphaSource

    def __post_init__(self):
        if self.values[0] != 0.0:
            raise ValueError("alpha_{1/2} must be exactly 0")
        self.values.setflags(write=False)


@dataclass(frozen=True, eq=False)
class TridiagonalOperator:
    sub: np.ndarray
    diag: np.ndarray
    sup: np.ndarray
    mesh: Mesh

    def __post_init__(self):
        n = len(self.diag)
        if len(self.sub) != n - 1 or len(self.sup) != n - 1:
            raise ValueError("sub and sup need N - 1 entries")
        # apply() uses the flux form, which assumes constants are annihilated
        row_sum = self.diag.copy()
        row_sum[1:] += self.sub
        row_sum[:-1] += self.sup
        scale = max(np.max(np.abs(self.diag)), 1.0) if n else 1.0
        if np.any(np.abs(row_sum) > 1e-12 * scale):
            raise ValueError("operator rows must sum to zero")
        for arr in (self.sub, self.diag, self.sup):
            arr.setflags(write=False)

    @property
    def size(self):
        return len(self.diag)

    def __call__(self, fvals):
        return apply(self, fvals)

    def to_csv(self):
        """CSV dump with columns row, sub, diag, sup (empty where undefined)."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["row", "sub", "diag", "sup"])
        n = self.size
        for i in range(n):
            sub = repr(float(self.sub[i - 1])) if i > 0 else ""
            sup = repr(float(self.sup[i])) if i < n - 1 else ""
            writer.writerow([i + 1, sub, repr(float(self.diag[i])), sup])
        return buf.getvalue()


def exact_alpha(mesh: Mesh, diff: Diffusivity = FP_DIFFUSIVITY) -> AlphaCoefficients:
    """alpha = D at the points, which turns a type II scheme into type I."""
    values = np.asarray(diff.value(mesh.points), dtype=float).copy()
    values[0] = 0.0
    return AlphaCoefficients(values, AlphaSource.EXACT)


def morel_alpha(mesh: Mesh, diff: Diffusivity = FP_DIFFUSIVITY) -> AlphaCoefficients:
    """The unique alpha with alpha_{1/2} = 0 that makes the scheme exact on
    linear functions: alpha_{n+1/2} = alpha_{n-1/2} + D'(mu_n) (mu_{n+1/2} - mu_{n-1/2})."""
    increments = diff.derivative(mesh.nodes) * mesh.cell_widths
    values = np.concatenate([[0.0], np.cumsum(increments)])
    return AlphaCoefficients(values, AlphaSource.MOREL)


def rk4_alpha(mesh: Mesh) -> AlphaCoefficients:
    """alpha_{n+1/2} = alpha_{n-1/2} - w_n (2 mu_{n-1/2} + w_n), for D = 1 - mu^2.

    Needs a mesh whose cells have widths equal to the weights.
    """
    if mesh.weights is None:
        raise ConstructionError("RK4 alpha needs a mesh carrying weights")
    if not np.allclose(mesh.cell_widths, mesh.weights, rtol=1e-10, atol=1e-14):
        raise ConstructionError("RK4 alpha needs points built from cumulative weights")
    w = mesh.weights
    increments = -w * (2.0 * mesh.points[:-1] + w)
    values = np.concatenate([[0.0], np.cumsum(increments)])
    return AlphaCoefficients(values, AlphaSource.RK4)


def _assemble(mesh: Mesh, flux_coeff: np.ndarray) -> TridiagonalOperator:
    # flux_coeff[i] multiplies the interior point mu_{i+3/2}, i = 0..N-2
    n = mesh.count
    widths = mesh.cell_widths
    if n == 1:
        z = np.zeros(0)
        return TridiagonalOperator(z, np.zeros(1), z.copy(), mesh)
    conduct = flux_coeff / np.diff(mesh.nodes)
    sub = conduct / widths[1:]
    sup = conduct / widths[:-1]
    diag = np.zeros(n)
    diag[:-1] -= sup
    diag[1:] -= sub
    return TridiagonalOperator(sub, diag, sup, mesh)


def assemble_type1(mesh: Mesh, diff: Diffusivity = FP_DIFFUSIVITY) -> TridiagonalOperator:
    """Type I scheme: exact diffusivity at the interior points."""
    if not diff.vanishes_at_endpoints:
        raise ValueError("type I schemes need a diffusivity vanishing at -1 and 1")
    return _assemble(mesh, np.asarray(diff.value(mesh.points[1:-1]), dtype=float))


def assemble_type2(mesh: Mesh, alpha: AlphaCoefficients) -> TridiagonalOperator:
    """Type II scheme: alpha in place of D. alpha_{N+1/2} is not used."""
    if len(alpha.values) != mesh.count + 1:
        raise ValueError("alpha must have N + 1 entries")
    return _assemble(mesh, np.array(alpha.values[1:-1]))


def apply(op: TridiagonalOperator, fvals) -> np.ndarray:
    f = np.asarray(fvals, dtype=float)
    if f.shape != (op.size,):
        raise ValueError(f"expected {op.size} values, got shape {f.shape}")
    # flux form, exact for constants: relies on diag = -(sub + sup)
    df = np.diff(f)
    y = np.zeros(op.size)
    y[:-1] += op.sup * df
    y[1:] -= op.sub * df
    return y
