"""Interlaced node/point meshes of [-1, 1] and their cell geometry.

A mesh of N nodes mu_1 < ... < mu_N carries N + 1 points
-1 = mu_{1/2} < mu_1 < mu_{3/2} < ... < mu_N < mu_{N+1/2} = 1.
Arrays are 0-based: ``nodes[i]`` is mu_{i+1} and ``points[j]`` is mu_{j+1/2}.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from fpdiff.gauss_legendre import QuadratureRule, RuleMode


@dataclass(frozen=True, eq=False)
class Mesh:
    nodes: np.ndarray
    points: np.ndarray
    weights: np.ndarray | None = None
    label: str = ""
    widths: np.ndarray | None = None

    def __post_init__(self):
        nodes, points = self.nodes, self.points
        if len(points) != len(nodes) + 1:
            raise ValueError("a mesh of N nodes needs N + 1 points")
        if points[0] != -1.0 or points[-1] != 1.0:
            raise ValueError("first and last points must be -1 and 1")
        merged = np.empty(2 * len(nodes) + 1)
        merged[0::2] = points
        merged[1::2] = nodes
        if not np.all(np.diff(merged) > 0):
            raise ValueError("nodes and points are not strictly interlaced")
        if self.weights is not None and len(self.weights) != len(nodes):
            raise ValueError("weights must match nodes")
        if self.widths is not None and not np.allclose(
                self.widths, np.diff(points), rtol=1e-8, atol=1e-14):
            raise ValueError("cell widths disagree with the points")
        for arr in (self.nodes, self.points, self.weights, self.widths):
            if arr is not None:
                arr.setflags(write=False)

    @property
    def count(self):
        return len(self.nodes)

    @property
    def cell_widths(self):
        """mu_{n+1/2} - mu_{n-1/2}; the exact widths when the mesh was built
        from them, since differencing points near +-1 loses digits."""
        return np.diff(self.points) if self.widths is None else self.widths

    def to_csv(self):
        """CSV dump with columns index, node, point_left, point_right, weight."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["index", "node", "point_left", "point_right", "weight"])
        for i, mu in enumerate(self.nodes):
            w = "" if self.weights is None else repr(float(self.weights[i]))
            writer.writerow([i + 1, repr(float(mu)), repr(float(self.points[i])),
                             repr(float(self.points[i + 1])), w])
        return buf.getvalue()


@dataclass(frozen=True, eq=False)
class CellGeometry:
    """Half-widths and midpoint offsets of both cell families.

    ``h``, ``d`` and ``secondary_points`` have N - 1 entries (cells
    [mu_n, mu_{n+1}]); ``h_star``, ``d_star`` and ``secondary_nodes`` have N
    (cells [mu_{n-1/2}, mu_{n+1/2}]).
    """

    h: np.ndarray
    d: np.ndarray
    h_star: np.ndarray
    d_star: np.ndarray
    secondary_nodes: np.ndarray
    secondary_points: np.ndarray


def _midpoint_points(nodes):
    points = np.empty(len(nodes) + 1)
    points[0] = -1.0
    points[-1] = 1.0
    points[1:-1] = 0.5 * (nodes[:-1] + nodes[1:])
    return points


def _mirrored_cumsum(weights, a, b):
    """Points a, a + w_1, a + w_1 + w_2, ... on [a, b], accumulated only up
    to the middle and reflected about (a + b) / 2 for the rest."""
    n = len(weights)
    points = np.empty(n + 1)
    half = n // 2
    points[0] = a
    points[1:half + 1] = a + np.cumsum(weights[:half])
    if n % 2 == 0:
        points[half] = 0.5 * (a + b)
    # p_{n-k} = a + b - p_k
    upper = n - np.arange(half + 1)
    points[upper] = (a + b) - points[:half + 1]
    points[0], points[n] = a, b
    return points


def lee_mesh(rule: QuadratureRule) -> Mesh:
    """Rule nodes with points at the midpoints of consecutive nodes."""
    nodes = np.array(rule.nodes)
    return Mesh(nodes, _midpoint_points(nodes), np.array(rule.weights), "lee")


def haldy_ligou_mesh(rule: QuadratureRule) -> Mesh:
    """Rule nodes with points from cumulative weights, so that every cell
    [mu_{n-1/2}, mu_{n+1/2}] has width w_n.

    In half-range mode the accumulation restarts at 0, which is then a point.
    """
    nodes = np.array(rule.nodes)
    weights = np.array(rule.weights)
    if rule.mode is RuleMode.HALF_RANGE:
        n = rule.count
        left = _mirrored_cumsum(weights[:n], -1.0, 0.0)
        right = _mirrored_cumsum(weights[n:], 0.0, 1.0)
        points = np.concatenate([left, right[1:]])
    else:
        points = _mirrored_cumsum(weights, -1.0, 1.0)
    return Mesh(nodes, points, weights, "haldy-ligou", widths=weights.copy())


def uniform_mesh(n: int) -> Mesh:
    """Cell-centred uniform mesh, h = 2/n, carrying weights h."""
    if n < 2:
        raise ValueError("uniform mesh needs n >= 2")
    h = 2.0 / n
    nodes = -1.0 + h * (np.arange(n) + 0.5)
    return Mesh(nodes, _midpoint_points(nodes), np.full(n, h), "uniform")


def shifted_uniform_mesh(n: int) -> Mesh:
    """Equally spaced nodes from -1 + 2/n to 1 - 1/n; no quadrature weights."""
    if n < 3:
        raise ValueError("shifted uniform mesh needs n >= 3")
    nodes = np.linspace(-1.0 + 2.0 / n, 1.0 - 1.0 / n, n)
    return Mesh(nodes, _midpoint_points(nodes), None, "uniform-shifted")


def cell_geometry(mesh: Mesh) -> CellGeometry:
    nodes, points = mesh.nodes, mesh.points
    secondary_nodes = 0.5 * (points[:-1] + points[1:])
    secondary_points = 0.5 * (nodes[:-1] + nodes[1:])
    return CellGeometry(
        h=0.5 * np.diff(nodes),
        d=secondary_points - points[1:-1],
        h_star=0.5 * mesh.cell_widths,
        d_star=secondary_nodes - nodes,
        secondary_nodes=secondary_nodes,
        secondary_points=secondary_points,
    )
