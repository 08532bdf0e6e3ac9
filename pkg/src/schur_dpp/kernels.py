"""Correlation kernels L and K, determinant correlations, default radii,
and the joint (q, z) contour representations used to cross-check them.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DimensionTooLargeError,
    NonRealResultError,
    RadiusChainInfeasibleError,
    RadiusWindowError,
)
from .measures import ProcessSpec
from .operators import c_series_terms
from .quadrature import ContourSpec, nodes_weights
from .symmetric import as_specialization

# contour nestings: Z_OUTER has |w| = r2 < |z| = r1, Z_INNER the reverse
Z_OUTER = "z_outer"
Z_INNER = "z_inner"
_ORDERING_ALIASES = {"s_ge_t": Z_OUTER, "s_lt_t": Z_INNER, Z_OUTER: Z_OUTER, Z_INNER: Z_INNER}
IMAG_TOL = 1e-8
MAX_QZ_DIM = 2


def thread_count() -> int:
    raw = os.environ.get("SCHUR_DPP_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return min(8, os.cpu_count() or 1)


@dataclass(frozen=True)
class KernelRequest:
    """Point set plus numerical knobs for a kernel evaluation.

    ``points`` holds integers (measure) or ``(level, position)`` pairs
    (process). ``radii`` is an explicit ``(r1, r2)`` or ``None`` for
    :func:`default_radii`.
    """

    points: tuple = ()
    radii: tuple | None = None
    nodes: int = 256

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if self.radii is not None:
            r1, r2 = self.radii
            if not (r1 > 0 and r2 > 0):
                raise RadiusWindowError("radii must be positive")
            object.__setattr__(self, "radii", (float(r1), float(r2)))
        ContourSpec(1.0, 1, self.nodes)  # validates the node count


def _max_value(spec) -> float:
    if isinstance(spec, ProcessSpec):
        vals = [v for s in spec.X_levels + spec.Y_levels for v in s]
    else:
        X, Y = spec
        vals = list(X) + list(Y)
    return float(max(vals, default=0))


def radius_window(spec) -> tuple[float, float]:
    """``(a, 1/a)`` with ``a`` the largest specialization value, clamped to (0.1, 10)."""
    a = _max_value(spec)
    lo = max(a, 0.1)
    hi = min(1 / a, 10.0) if a > 0 else 10.0
    return lo, hi


def _nesting(ordering: str) -> str:
    try:
        return _ORDERING_ALIASES[ordering]
    except KeyError:
        raise ValueError(f"unknown ordering {ordering!r}") from None


def process_nesting(s: int, t: int) -> str:
    """Contour nesting for ``K(s, .; t, .)``: the z circle is inside iff ``s > t``."""
    return Z_INNER if s > t else Z_OUTER


def default_radii(spec, ordering: str = Z_OUTER) -> tuple[float, float]:
    """``(r1, r2)`` at the log-thirds of the admissible window.

    ``"z_outer"`` (alias ``"s_ge_t"``) gives ``r2 < r1`` as in the measure
    kernel. ``"z_inner"`` (alias ``"s_lt_t"``) swaps the two values.
    """
    lo, hi = radius_window(spec)
    ratio = hi / lo
    inner = lo * ratio ** (1 / 3)
    outer = lo * ratio ** (2 / 3)
    if _nesting(ordering) == Z_OUTER:
        return outer, inner
    return inner, outer


def _validate_radii(spec, r1, r2, ordering):
    a = _max_value(spec)
    hi = 1 / a if a > 0 else math.inf
    inner, outer = (r2, r1) if _nesting(ordering) == Z_OUTER else (r1, r2)
    if not (a < inner < outer < hi):
        raise RadiusWindowError(
            f"radii (r1={r1}, r2={r2}) violate {a} < inner < outer < {hi} for ordering {ordering}")


def _F_point(S, z):
    # F(S; {z}) on arrays
    out = np.ones_like(z)
    for v in S:
        out = out / (1 - v * z)
    return out


def _kernel_grid(num_w_Y, num_z_X, den_z_Y, den_w_X, r1, r2, M, rows, cols):
    """Matrix of ``(2 pi i)^{-2} oint oint (...) w^j z^{-i-1} / (z - w)``.

    The four lists hold the specializations entering the F-factors; rows
    and cols are the integer positions i and j.
    """
    z, wz = nodes_weights(ContourSpec(r1, 1, M))
    w, ww = nodes_weights(ContourSpec(r2, 1, M))
    A = np.ones(M, dtype=complex)
    B = np.ones(M, dtype=complex)
    for S in num_z_X:
        A = A * _F_point(S, z)
    for S in den_z_Y:
        A = A / _F_point(S, 1 / z)
    for S in num_w_Y:
        B = B * _F_point(S, 1 / w)
    for S in den_w_X:
        B = B / _F_point(S, w)
    G = (A[:, None] * B[None, :]) / (z[:, None] - w[None, :])
    rows = np.asarray(rows)
    cols = np.asarray(cols)
    Zp = wz[None, :] * z[None, :] ** (-rows[:, None] - 1)
    Wp = ww[None, :] * w[None, :] ** cols[:, None]
    return Zp @ G @ Wp.T


def _measure_block(X, Y, r1, r2, M, rows, cols):
    return _kernel_grid([Y], [X], [Y], [X], r1, r2, M, rows, cols)


def _with_error(fn, M):
    """Run ``fn(M)``; estimate the error from the half grid."""
    full = fn(M)
    half = fn(M // 2) if M >= 16 else full
    return full, float(np.max(np.abs(full - half))) if np.size(full) else 0.0


def kernel_L(i: int, j: int, X, Y, req: KernelRequest | None = None) -> complex:
    """``L(i, j)`` with (2 pi i)^{-1} per contour, ``|w| = r2 < |z| = r1``."""
    req = req or KernelRequest()
    X, Y = as_specialization(X), as_specialization(Y)
    r1, r2 = req.radii or default_radii((X, Y), Z_OUTER)
    _validate_radii((X, Y), r1, r2, Z_OUTER)
    return complex(_measure_block(X, Y, r1, r2, req.nodes, [i], [j])[0, 0])


def kernel_L_matrix(T: Sequence[int], X, Y, req: KernelRequest | None = None):
    """``(L_T, est_error, (r1, r2))`` for all entries at once."""
    req = req or KernelRequest()
    X, Y = as_specialization(X), as_specialization(Y)
    r1, r2 = req.radii or default_radii((X, Y), Z_OUTER)
    _validate_radii((X, Y), r1, r2, Z_OUTER)
    T = list(T)
    mat, err = _with_error(lambda M: _measure_block(X, Y, r1, r2, M, T, T), req.nodes)
    return mat, err, (r1, r2)


def _process_factors(s, t, spec: ProcessSpec):
    X, Y = spec.X_levels, spec.Y_levels
    m = spec.m
    num_w_Y = [Y[k - 1] for k in range(t, m + 1)]
    num_z_X = [X[k - 1] for k in range(1, s + 1)]
    den_z_Y = [Y[k - 1] for k in range(s, m + 1)]
    den_w_X = [X[k - 1] for k in range(1, t + 1)]
    return num_w_Y, num_z_X, den_z_Y, den_w_X


def _process_radii(s, t, spec, req):
    ordering = process_nesting(s, t)
    if req.radii is None:
        r1, r2 = default_radii(spec, ordering)
    else:
        # explicit radii supply the two circle sizes; the entry picks the nesting
        a, b = sorted(req.radii)
        r1, r2 = (a, b) if ordering == Z_INNER else (b, a)
    _validate_radii(spec, r1, r2, ordering)
    return r1, r2


def kernel_K(s: int, i: int, t: int, j: int, spec: ProcessSpec,
             req: KernelRequest | None = None) -> complex:
    """``K(s, i; t, j)``; the z circle is inside the w circle iff ``s > t``."""
    req = req or KernelRequest()
    for lv in (s, t):
        if not 1 <= lv <= spec.m:
            raise ValueError(f"level {lv} outside 1..{spec.m}")
    r1, r2 = _process_radii(s, t, spec, req)
    f = _process_factors(s, t, spec)
    return complex(_kernel_grid(*f, r1, r2, req.nodes, [i], [j])[0, 0])


def kernel_K_matrix(T, spec: ProcessSpec, req: KernelRequest | None = None):
    """``(K_T, est_error, radii_by_block)`` grouping entries by level pair."""
    req = req or KernelRequest()
    T = [(int(a), int(b)) for a, b in T]
    d = len(T)
    mat = np.zeros((d, d), dtype=complex)
    err = 0.0
    radii = {}
    pairs = sorted({(a, c) for a, _ in T for c, _ in T})

    def block(pair):
        s, t = pair
        rows = [r for r, (a, _) in enumerate(T) if a == s]
        cols = [c for c, (a, _) in enumerate(T) if a == t]
        r1, r2 = _process_radii(s, t, spec, req)
        f = _process_factors(s, t, spec)
        pos_r = [T[r][1] for r in rows]
        pos_c = [T[c][1] for c in cols]
        vals, e = _with_error(lambda M: _kernel_grid(*f, r1, r2, M, pos_r, pos_c), req.nodes)
        return pair, rows, cols, vals, e, (r1, r2)

    workers = min(thread_count(), max(1, len(pairs)))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(block, pairs))
    else:
        results = [block(p) for p in pairs]
    for pair, rows, cols, vals, e, rr in results:
        mat[np.ix_(rows, cols)] = vals
        err = max(err, e)
        radii[pair] = rr
    return mat, err, radii


def _real_det(mat) -> float:
    if mat.shape[0] == 0:
        return 1.0
    val = complex(np.linalg.det(mat))
    if abs(val.imag) > IMAG_TOL:
        raise NonRealResultError(f"determinant has imaginary part {val.imag:.3e}")
    return val.real


@dataclass
class KernelResult:
    T: list
    det: float
    entries: np.ndarray
    radii: object
    nodes: int
    est_error: float

    def to_json_dict(self) -> dict:
        radii = self.radii
        if isinstance(radii, dict):
            radii = {f"{s},{t}": list(v) for (s, t), v in sorted(radii.items())}
        else:
            radii = list(radii)
        return {
            "T": [list(p) if isinstance(p, tuple) else p for p in self.T],
            "det": self.det,
            "entries": [[float(v.real), float(v.imag)] for v in self.entries.ravel()],
            "radii": radii,
            "nodes": self.nodes,
            "est_error": self.est_error,
        }


def det_correlation_measure(T: Sequence[int], X, Y, req: KernelRequest | None = None) -> float:
    """``det [L(t_r, t_c)]``."""
    return det_correlation_measure_result(T, X, Y, req).det


def det_correlation_measure_result(T, X, Y, req=None) -> KernelResult:
    req = req or KernelRequest()
    T = [int(t) for t in T]
    mat, err, radii = kernel_L_matrix(T, X, Y, req)
    return KernelResult(T, _real_det(mat), mat, radii, req.nodes, err)


def det_correlation_process(T, spec: ProcessSpec, req: KernelRequest | None = None) -> float:
    """``det [K(a_r, b_r; a_c, b_c)]``."""
    return det_correlation_process_result(T, spec, req).det


def det_correlation_process_result(T, spec, req=None) -> KernelResult:
    req = req or KernelRequest()
    T = [(int(a), int(b)) for a, b in T]
    mat, err, radii = kernel_K_matrix(T, spec, req)
    return KernelResult(T, _real_det(mat), mat, radii, req.nodes, err)


# -- joint (q, z) representations ---------------------------------------------


def _H_X(q, z, X):
    out = 1
    for x in X:
        out = out * (1 - q * x * z) / (1 - x * z)
    return out


def _H_Y_inv(q, z, Y):
    # H_q(Y; {1/(q z)})
    out = 1
    for y in Y:
        out = out * (1 - y / z) / (1 - y / (q * z))
    return out


def _qz_integral(zgrids, qgrids, label_factor):
    """``(2 pi i)^{-2d}`` torus integral of ``det [1/(z_a - q_b z_b)] prod_a g_a``.

    ``label_factor(a, z, q)`` gives ``g_a`` on arrays. Each ``g_a`` is
    tabulated once on its own (z_a, q_a) grid and the sum is chunked over
    the first z axis.
    """
    d = len(zgrids)
    G = [label_factor(a, zgrids[a][0][:, None], qgrids[a][0][None, :]) for a in range(d)]
    dims = 2 * d

    def place(arr, axes):
        shape = [1] * dims
        for ax, n in zip(axes, arr.shape):
            shape[ax] = n
        return arr.reshape(shape)

    weights = [g[1] for g in zgrids] + [g[1] for g in qgrids]
    total = 0j
    M0 = len(zgrids[0][0])
    for k in range(M0):
        zs = [place(zgrids[0][0][k:k + 1], [0])] + [place(zgrids[a][0], [a]) for a in range(1, d)]
        qs = [place(qgrids[a][0], [d + a]) for a in range(d)]
        rows = [[1 / (zs[a] - qs[b] * zs[b]) for b in range(d)] for a in range(d)]
        val = _det_stack(rows)
        val = val * place(G[0][k:k + 1], [0, d])
        for a in range(1, d):
            val = val * place(G[a], [a, d + a])
        val = np.broadcast_to(val, (1,) + tuple(len(w) for w in weights[1:]))[0]
        for w in reversed(weights[1:]):
            val = val @ w
        total += weights[0][k] * complex(val)
    return total


def _det_stack(rows):
    """Determinant of a small matrix whose entries are broadcast arrays."""
    d = len(rows)
    if d == 1:
        return rows[0][0]
    if d == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    shape = np.broadcast_shapes(*[np.shape(e) for r in rows for e in r])
    stacked = np.stack([np.stack([np.broadcast_to(e, shape) for e in r], -1) for r in rows], -2)
    return np.linalg.det(stacked)


def qz_measure_q_radius(Y) -> float:
    ymax = float(max(Y, default=0))
    return math.sqrt(ymax) if ymax > 0 else 0.5


def rho_measure_qz_contour(T: Sequence[int], X, Y, M: int = 64, *, q_radius=None) -> float:
    """``rho_SM(T)`` as the 2d-fold integral over ``|z_j| = 1`` and ``|q_j| = r``.

    The integrand does not depend on zero entries of X and Y, so padding
    with zeros meets the size hypothesis for any T without changing the
    value. The q radius defaults to ``sqrt(max Y)``, the log-midpoint of the
    annulus ``(max Y, 1)`` where the integrand is analytic in each q.
    """
    T = [int(t) for t in T]
    d = len(T)
    if d > MAX_QZ_DIM:
        raise DimensionTooLargeError(f"|T| = {d} exceeds {MAX_QZ_DIM}")
    if d == 0:
        return 1.0
    if len(set(T)) < d:
        return 0.0
    X = [x for x in X if x != 0]
    Y = [y for y in Y if y != 0]
    rq = q_radius if q_radius is not None else qz_measure_q_radius(Y)
    gz = nodes_weights(ContourSpec(1.0, 1, M))
    gq = nodes_weights(ContourSpec(rq, 1, M))

    def factor(a, z, q):
        return _H_X(q, z, X) * _H_Y_inv(q, z, Y) * q ** T[a]

    val = _qz_integral([gz] * d, [gq] * d, factor)
    if abs(val.imag) > 1e-6:
        raise NonRealResultError(f"qz integral has imaginary part {val.imag:.3e}")
    return val.real


def rho_measure_series_coefficient(T: Sequence[int], X, Y, N: int = 40, M: int | None = None) -> float:
    """Coefficient of ``Q^{-T}`` in the truncated ``C(X;Y;Q)`` by q-contour quadrature.

    With ``n`` padded past ``max(d, d - min T)`` the coefficient is
    ``rho_SM(T)``. The truncated series is a Laurent polynomial in each q,
    so ``M`` above its exponent span makes the extraction exact.
    """
    T = [int(t) for t in T]
    d = len(T)
    if d > MAX_QZ_DIM:
        raise DimensionTooLargeError(f"|T| = {d} exceeds {MAX_QZ_DIM}")
    if d == 0:
        return 1.0
    if len(set(T)) < d:
        return 0.0
    n = max(len(X), len(Y), max(d, d - min(T)) + 1)
    span = N + n + 1 + max(abs(t) for t in T)
    if M is None:
        M = 8
        while M <= span:
            M *= 2
    ymax = float(max(Y, default=0))
    rq = ymax ** (1 / (d + 1)) if ymax > 0 else 0.5
    gq = nodes_weights(ContourSpec(rq, 1, M))
    terms = c_series_terms(list(X), list(Y), N)
    mesh = np.meshgrid(*[gq[0]] * d, indexing="ij", sparse=True)
    total = 0
    for lam, w in terms:
        prod = w
        for a in range(d):
            q = mesh[a]
            prod = prod * sum(q ** (j - lam.part(j)) for j in range(1, n + 1))
        total = total + prod
    for a in range(d):
        # the weights carry one factor of q, so q^{t-1} dq becomes q^t here
        total = total * mesh[a] ** (T[a] - 1)
    out = np.broadcast_to(total, (M,) * d)
    for _ in range(d):
        out = out @ gq[1]
    return complex(out).real


def process_qz_constraints(levels: Sequence[int], spec: ProcessSpec):
    """Log-space inequalities on ``v = (ln r_h, ln s_h)`` for the occupied levels.

    Per level: ``r_h < 1/x`` for X at levels <= h, ``y / s_h < r_h`` for Y at
    levels >= h, ``s_h < 1``. For occupied ``h < i``: ``r_i < s_h r_h`` and
    ``s_i r_i < r_h``.
    """
    L = len(levels)
    rows = []

    def row(coef, b):
        a = [0.0] * (2 * L)
        for idx, c in coef:
            a[idx] += c
        rows.append((a, b))

    for a, h in enumerate(levels):
        ra, sa = a, L + a
        xs = [x for lv in spec.X_levels[:h] for x in lv if x > 0]
        ys = [y for lv in spec.Y_levels[h - 1:] for y in lv if y > 0]
        if xs:
            row([(ra, 1)], -math.log(max(xs)))
        if ys:
            row([(ra, -1), (sa, -1)], -math.log(max(ys)))
        row([(sa, 1)], 0.0)
        for b in range(a + 1, L):
            rb, sb = b, L + b
            row([(rb, 1), (sa, -1), (ra, -1)], 0.0)
            row([(sb, 1), (rb, 1), (ra, -1)], 0.0)
    return rows


def process_qz_radii(levels: Sequence[int], spec: ProcessSpec):
    """Radii ``{h: (r_h, s_h)}`` maximizing the minimum log-clearance."""
    from scipy.optimize import linprog

    levels = sorted(set(levels))
    L = len(levels)
    rows = process_qz_constraints(levels, spec)
    A = [a + [1.0] for a, _ in rows]
    b = [bb for _, bb in rows]
    c = [0.0] * (2 * L) + [-1.0]
    bounds = [(math.log(0.05), math.log(20.0))] * L + [(math.log(0.01), 0.0)] * L + [(None, 1.0)]
    res = linprog(c, A_ub=A, b_ub=b, bounds=bounds, method="highs")
    if not res.success or res.x[-1] <= 1e-9:
        raise RadiusChainInfeasibleError("no admissible (r_h, s_h) chain for this process")
    v = res.x
    return {h: (math.exp(v[a]), math.exp(v[L + a])) for a, h in enumerate(levels)}


def _check_process_radii(levels, spec, radii):
    levels = sorted(set(levels))
    v = [math.log(radii[h][0]) for h in levels] + [math.log(radii[h][1]) for h in levels]
    for a, b in process_qz_constraints(levels, spec):
        if not sum(x * y for x, y in zip(a, v)) < b:
            raise RadiusChainInfeasibleError("explicit radii violate the process window")


def rho_process_qz_contour(T, spec: ProcessSpec, M: int = 64, *, radii=None) -> float:
    """``rho_S(T)`` as the 2d-fold joint (q, z) integral.

    The integrand is ``prod H_{q_a}(X^(h); z_a)`` over ``h <= level(a)``,
    ``prod H_{q_a}(Y^(h); 1/(q_a z_a))`` over ``h >= level(a)``,
    ``det [1/(z_a - q_b z_b)]`` over lexicographically ordered labels, and
    ``prod q_a^{t_a}``.
    """
    T = sorted((int(a), int(b)) for a, b in T)
    d = len(T)
    if d > MAX_QZ_DIM:
        raise DimensionTooLargeError(f"|T| = {d} exceeds {MAX_QZ_DIM}")
    if d == 0:
        return 1.0
    if len(set(T)) < d:
        return 0.0
    levels = [a for a, _ in T]
    if radii is None:
        radii = process_qz_radii(levels, spec)
    else:
        _check_process_radii(levels, spec, radii)
    Xs = [[x for x in lv if x != 0] for lv in spec.X_levels]
    Ys = [[y for y in lv if y != 0] for lv in spec.Y_levels]
    zgrids = [nodes_weights(ContourSpec(radii[h][0], 1, M)) for h in levels]
    qgrids = [nodes_weights(ContourSpec(radii[h][1], 1, M)) for h in levels]

    def factor(a, z, q):
        h, t = T[a]
        val = q ** t
        for k in range(1, h + 1):
            val = val * _H_X(q, z, Xs[k - 1])
        for k in range(h, spec.m + 1):
            val = val * _H_Y_inv(q, z, Ys[k - 1])
        return val

    val = _qz_integral(zgrids, qgrids, factor)
    if abs(val.imag) > 1e-6:
        raise NonRealResultError(f"qz integral has imaginary part {val.imag:.3e}")
    return val.real
