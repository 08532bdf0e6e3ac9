"""Trapezoid quadrature on circles and Cauchy determinant checks.

Every contour integral in the package is normalized as ``(2 pi i)^{-1} oint``
per variable. With nodes ``z_k = r e^{2 pi i k / M}`` this is the plain mean
of ``z f(z)`` over the nodes, times the orientation sign.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import (
    BudgetExceededError,
    NonFiniteError,
    SingularPairError,
)

DEFAULT_BUDGET = 2**22


@dataclass(frozen=True)
class ContourSpec:
    """Circle ``|z| = radius`` with ``nodes`` equispaced points.

    ``offset`` rotates the grid by that fraction of one step; 0.5 gives the
    half-step grid used for pole-alignment checks.
    """

    radius: float
    orientation: int = 1
    nodes: int = 256
    offset: float = 0.0

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"radius must be positive, got {self.radius}")
        if self.orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")
        m = self.nodes
        if m < 8 or m & (m - 1):
            raise ValueError(f"nodes must be a power of two >= 8, got {m}")

    def with_nodes(self, nodes: int) -> "ContourSpec":
        return ContourSpec(self.radius, self.orientation, nodes, self.offset)


def nodes_weights(spec: ContourSpec):
    """Arrays ``(z, w)`` with ``sum(w * f(z)) ~ (2 pi i)^{-1} oint f``."""
    k = np.arange(spec.nodes) + spec.offset
    z = spec.radius * np.exp(2j * np.pi * k / spec.nodes)
    w = spec.orientation * z / spec.nodes
    return z, w


def circle_quadrature(spec: ContourSpec) -> list[tuple[complex, complex]]:
    z, w = nodes_weights(spec)
    return list(zip(z.tolist(), w.tolist()))


def tensor_sum(fn, contours, vectorized: bool = True):
    """One tensor-product quadrature pass at the given node counts."""
    grids = [nodes_weights(c) for c in contours]
    if vectorized:
        mesh = np.meshgrid(*[g[0] for g in grids], indexing="ij", sparse=True)
        vals = np.asarray(fn(*mesh), dtype=complex)
        vals = np.broadcast_to(vals, tuple(c.nodes for c in contours))
        if not np.all(np.isfinite(vals)):
            raise NonFiniteError("integrand returned a non-finite value at a node")
        out = vals
        # contract one axis at a time, last axis first
        for z, w in reversed(grids):
            out = out @ w
        return complex(out)
    total = 0j
    for combo in itertools.product(*[list(zip(*g)) for g in grids]):
        zs = [c[0] for c in combo]
        weight = np.prod([c[1] for c in combo])
        v = complex(fn(*zs))
        if not np.isfinite(v):
            raise NonFiniteError("integrand returned a non-finite value at a node")
        total += weight * v
    return total


def integrate(fn, contours, convergence_tol: float = 1e-10, *,
              budget: int = DEFAULT_BUDGET, vectorized: bool = True):
    """Tensor-product circle quadrature with node doubling.

    ``fn`` takes one argument per contour. With ``vectorized=True`` it must
    accept broadcastable numpy arrays. Returns ``(value, est_error)`` where
    ``est_error`` is the last successive difference.
    """
    contours = list(contours)
    if not contours:
        return complex(fn()), 0.0
    current = contours
    prev = tensor_sum(fn, current, vectorized)
    while True:
        doubled = [c.with_nodes(2 * c.nodes) for c in current]
        cost = int(np.prod([c.nodes for c in doubled]))
        if cost > budget:
            raise BudgetExceededError(
                f"quadrature budget {budget} exceeded before reaching tol {convergence_tol}",
                value=prev, est_error=None)
        val = tensor_sum(fn, doubled, vectorized)
        err = abs(val - prev)
        if err < convergence_tol:
            return val, err
        prev, current = val, doubled


def _check_pairs(a, b):
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if np.any(np.abs(a[:, None] - b[None, :]) <= 1e-12):
        raise SingularPairError("some a_i coincides with some b_j")
    return a, b


def cauchy_product(a, b) -> complex:
    """Closed form ``prod 1/(a_k-b_k) prod_{j<k} (a_k-a_j)(b_k-b_j)/((a_k-b_j)(b_k-a_j))``."""
    n = len(a)
    out = 1 + 0j
    for k in range(n):
        out /= a[k] - b[k]
        for j in range(k):
            out *= (a[k] - a[j]) * (b[k] - b[j]) / ((a[k] - b[j]) * (b[k] - a[j]))
    return out


def cauchy_determinant_check(a, b):
    """``(det [1/(a_i - b_j)], closed-form product)``."""
    if len(a) != len(b):
        raise ValueError("a and b must have equal length")
    a, b = _check_pairs(a, b)
    det = complex(np.linalg.det(1.0 / (a[:, None] - b[None, :]))) if len(a) else 1 + 0j
    return det, cauchy_product(a, b)


def lexicographic_labels(sizes) -> list[tuple[int, int]]:
    """Labels ``(level, j)`` in lexicographic order for per-level counts ``sizes``."""
    return [(h, j) for h, d in enumerate(sizes, start=1) for j in range(1, d + 1)]


def process_determinant_check(z: dict, q: dict):
    """Lexicographic process matrix ``[1/(z_a - q_b z_b)]`` versus its product form.

    ``z`` and ``q`` map labels ``(level, j)`` to complex numbers. The product
    side is ``prod_a 1/(z_a - q_a z_a)`` times the within-level and the
    cross-level ratio products, taken over lexicographically ordered pairs.
    """
    labels = sorted(z)
    zs = np.array([z[k] for k in labels], dtype=complex)
    ws = np.array([q[k] * z[k] for k in labels], dtype=complex)
    _check_pairs(zs, ws)
    det = complex(np.linalg.det(1.0 / (zs[:, None] - ws[None, :])))
    prod = 1 + 0j
    for a in range(len(labels)):
        prod /= zs[a] - ws[a]
    for a, b in itertools.combinations(range(len(labels)), 2):
        za, zb, wa, wb = zs[a], zs[b], ws[a], ws[b]
        if labels[a][0] == labels[b][0]:
            prod *= (wb - wa) * (zb - za) / ((wb - za) * (zb - wa))
        else:
            prod *= (za - zb) * (wa - wb) / ((wa - zb) * (za - wb))
    return det, prod
