"""Gauss-Legendre rules on (-1, 1) and the half-range variant on
(-1, 0) U (0, 1)."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

_EPS = np.finfo(float).eps
NEWTON_TOL = 4.0 * _EPS
NEWTON_MAXITER = 20


class ConstructionError(RuntimeError):
    """A numerical construction (rule, mesh, coefficients) failed."""


class RuleMode(enum.Enum):
    FULL_RANGE = "fr"
    HALF_RANGE = "hr"


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes in increasing order with their positive weights.

    ``count`` is the N the rule was built from; a half-range rule holds
    ``2 * count`` nodes.
    """

    count: int
    nodes: np.ndarray
    weights: np.ndarray
    mode: RuleMode = RuleMode.FULL_RANGE

    def __post_init__(self):
        for arr in (self.nodes, self.weights):
            arr.setflags(write=False)

    def __len__(self):
        return len(self.nodes)


def legendre_eval(n, x):
    """Return ``(P_n(x), P_n'(x))`` by the three-term recurrence.

    ``x`` may be a scalar or an array with entries in [-1, 1].
    """
    if n < 0:
        raise ValueError("degree must be non-negative")
    x = np.asarray(x, dtype=float)
    p_prev = np.zeros_like(x)
    p = np.ones_like(x)
    if n == 0:
        return _unwrap(p), _unwrap(np.zeros_like(x))
    for k in range(1, n + 1):
        p_prev, p = p, ((2 * k - 1) * x * p - (k - 1) * p_prev) / k
    # P_n' = n (x P_n - P_{n-1}) / (x^2 - 1) away from the endpoints
    with np.errstate(divide="ignore", invalid="ignore"):
        dp = n * (x * p - p_prev) / ((x - 1.0) * (x + 1.0))
    at_end = np.abs(x) == 1.0
    if np.any(at_end):
        end_val = 0.5 * n * (n + 1) * np.where(x > 0, 1.0, (-1.0) ** (n - 1))
        dp = np.where(at_end, end_val, dp)
    return _unwrap(p), _unwrap(dp)


def _unwrap(a):
    return float(a) if a.ndim == 0 else a


def _positive_roots(n):
    """Newton iteration for the roots of P_n in (0, 1), largest first."""
    m = n // 2
    k = np.arange(1, m + 1)
    x = np.cos(np.pi * (4 * k - 1) / (4 * n + 2))
    active = np.ones(m, dtype=bool)
    for _ in range(NEWTON_MAXITER):
        p, dp = legendre_eval(n, x[active])
        step = p / dp
        x[active] -= step
        done = np.abs(step) <= NEWTON_TOL
        idx = np.flatnonzero(active)
        active[idx[done]] = False
        if not active.any():
            return x
    raise ConstructionError(
        f"Newton iteration for the {n}-point Gauss-Legendre rule did not "
        f"converge in {NEWTON_MAXITER} iterations ({active.sum()} nodes left)"
    )


def gl_rule(n):
    """Gauss-Legendre rule of ``n`` points on (-1, 1).

    Only the positive roots are iterated; the negative half is the exact
    mirror image, so nodes are antisymmetric and weights symmetric
    bit for bit. For odd ``n`` the middle node is exactly 0.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    pos = _positive_roots(n)
    if n % 2:
        pos = np.append(pos, 0.0)
    _, dp = legendre_eval(n, pos)
    w_pos = 2.0 / ((1.0 - pos) * (1.0 + pos) * dp**2)
    # pos is in decreasing order: negate for the left half, reverse for the right
    m = n // 2
    nodes = np.concatenate([-pos, pos[:m][::-1]])
    if n % 2:
        nodes[m] = 0.0
    weights = np.concatenate([w_pos, w_pos[:m][::-1]])
    return QuadratureRule(n, nodes, weights, RuleMode.FULL_RANGE)


def hr_rule(n):
    """Half-range rule: the ``n``-point rule mapped onto (-1, 0) and (0, 1),
    weights halved, ``2 * n`` nodes in total."""
    base = gl_rule(n)
    left = 0.5 * (base.nodes - 1.0)
    right = 0.5 * (base.nodes + 1.0)
    half_w = 0.5 * base.weights
    return QuadratureRule(
        n,
        np.concatenate([left, right]),
        np.concatenate([half_w, half_w]),
        RuleMode.HALF_RANGE,
    )
