"""q-difference operators at q = t, their Schur eigenvalues, and the
generating function C(X;Y;Q) in series and contour form.

Contour forms use two circles per variable: the inner radius ``r`` is
integrated counterclockwise and the outer radius ``s`` (or ``R``)
clockwise. This is the orientation under which the contour value equals the
operator value; the residue at each ``z = 1/x_k`` then enters with the sign
the operator sum dictates.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (
    CoincidentPointsError,
    RadiusChainInfeasibleError,
    ParameterWindowError,
    PoleError,
    RadiusWindowError,
)
from .partitions import as_partition, enumerate_partitions
from .quadrature import ContourSpec, nodes_weights
from .symmetric import cauchy_F, schur

COINCIDENT_TOL = 1e-12
CROSS_POLE_TOL = 1e-10


@dataclass(frozen=True)
class QParameterSet:
    """Ordered complex parameters ``q_1..q_m`` with ``|q_j| < 1``."""

    qs: tuple

    def __post_init__(self):
        qs = tuple(complex(q) if isinstance(q, complex) else q for q in self.qs)
        object.__setattr__(self, "qs", qs)
        for q in qs:
            if not abs(q) < 1:
                raise ParameterWindowError(f"|q| must be < 1, got {q!r}")

    def __len__(self):
        return len(self.qs)

    def __iter__(self):
        return iter(self.qs)

    def series_window_ok(self, Y: Sequence) -> bool:
        """``max Y < |q_j|^m < 1`` for every j."""
        m = len(self.qs)
        ymax = max(Y) if len(Y) else 0
        return all(ymax < abs(q) ** m < 1 for q in self.qs)


def as_qset(Q) -> QParameterSet:
    return Q if isinstance(Q, QParameterSet) else QParameterSet(tuple(Q))


def apply_tilde_d1(q, f: Callable, X: Sequence):
    """``(D~^1_{n;q} f)(X)`` by direct summation.

    ``D~^1 = q^{-binom(n,2)} D^{n-1} T_{q^{-1}}``. Choosing the complement
    index ``j`` of the shifted set, each term is
    ``q^{1-n} prod_{i != j} (q x_i - x_j)/(x_i - x_j) f(x with x_j -> x_j/q)``.
    """
    X = list(X)
    n = len(X)
    for i, j in itertools.combinations(range(n), 2):
        if abs(X[i] - X[j]) <= COINCIDENT_TOL:
            raise CoincidentPointsError(f"x_{i+1} and x_{j+1} coincide")
    total = 0
    for j in range(n):
        coeff = 1
        for i in range(n):
            if i != j:
                coeff = coeff * (q * X[i] - X[j]) / (X[i] - X[j])
        shifted = list(X)
        shifted[j] = X[j] / q
        total = total + coeff * f(shifted)
    return total * q ** (1 - n)


def elementary_symmetric(r: int, values: Sequence):
    """``e_r`` of the values via the product-expansion recursion."""
    e = [1] + [0] * r
    for v in values:
        for k in range(r, 0, -1):
            e[k] = e[k] + e[k - 1] * v
    return e[r]


def eigenvalue_er(r: int, lam, n: int, q):
    """``e_r(q^{1-lam_1-n}, q^{2-lam_2-n}, ..., q^{-lam_n})``."""
    lam = as_partition(lam)
    if not 0 <= r <= n:
        raise ValueError("need 0 <= r <= n")
    if len(lam) > n:
        raise ValueError("partition longer than the number of variables")
    vals = [q ** (i - lam.part(i) - n) for i in range(1, n + 1)]
    return elementary_symmetric(r, vals)


def _cauchy_ratio(z, q, Y):
    # g(1/(qz)) / g(1/z) for g(u) = F({u}; Y)
    out = 1
    for y in Y:
        out = out * (1 - y / z) / (1 - y / (q * z))
    return out


def _x_ratio(z, q, X):
    out = 1
    for x in X:
        out = out * (1 - q * z * x) / (1 - z * x)
    return out


def _check_annulus(q, X, Y, r, s):
    if not 1 <= r < s:
        raise RadiusWindowError(f"need 1 <= r < s, got r={r}, s={s}")
    for x in X:
        if not (1 / s < x < 1 / r):
            raise RadiusWindowError(f"x={x} outside (1/s, 1/r) = ({1/s}, {1/r})")
    for y in Y:
        # 1/(q z) must not hit the pole u = 1/y of g on r <= |z| <= s, and
        # y/|q| must stay strictly inside the inner circle
        if not y / abs(q) < r:
            raise RadiusWindowError(f"pole |z| = y/|q| = {y/abs(q)} not inside r = {r}")


def _two_circle(r, s, M):
    zi, wi = nodes_weights(ContourSpec(r, 1, M))
    zo, wo = nodes_weights(ContourSpec(s, -1, M))
    return np.concatenate([zi, zo]), np.concatenate([wi, wo])


def apply_tilde_d1_contour(q, X: Sequence, Y: Sequence, r: float, s: float, M: int = 256):
    """``q^n (D~^1_{n;q} G)(X)`` for ``G = F(.;Y)`` as a two-circle integral."""
    X, Y = list(X), list(Y)
    _check_annulus(q, X, Y, r, s)
    z, w = _two_circle(r, s, M)
    vals = q / (z - z * q) * _x_ratio(z, q, X) * _cauchy_ratio(z, q, Y)
    return cauchy_F(X, Y) * complex(np.sum(w * vals))


def _cross_ratio(zj, zk, qj, qk):
    return ((qk * zk - qj * zj) * (zk - zj)) / ((zk - qj * zj) * (qk * zk - zj))


def chain_constraints(qs: Sequence, X: Sequence, Y: Sequence):
    """Log-space inequalities ``a . v + margin <= b`` on ``v = (ln r, ln s)``.

    Operator ``j`` is applied before operator ``k`` when ``j < k``. The
    circle pair ``(r_j, s_j)`` must contain every ``1/x``, keep ``y/|q_j|``
    inside ``r_j``, and for ``j < k`` contain the image ``q_k * (circles of
    z_k)`` while ``q_j * (circles of z_j)`` stays inside ``r_k``.
    """
    m = len(qs)
    xs = [abs(x) for x in X if x != 0]
    ymax = max((abs(y) for y in Y), default=0)
    lq = [math.log(abs(q)) for q in qs]
    rows = []

    def row(coef, b):
        a = [0.0] * (2 * m)
        for idx, c in coef:
            a[idx] += c
        rows.append((a, b))

    for j in range(m):
        rj, sj = j, m + j
        if xs:
            row([(rj, 1)], -math.log(max(xs)))
            row([(sj, -1)], math.log(min(xs)))
        if ymax:
            row([(rj, -1)], -(math.log(ymax) - lq[j]))
        row([(rj, 1), (sj, -1)], 0.0)
        for k in range(j + 1, m):
            rk, sk = k, m + k
            row([(rj, 1), (rk, -1)], lq[k])
            row([(sk, 1), (sj, -1)], -lq[k])
            row([(sj, 1), (rk, -1)], -lq[j])
    return rows


def check_chain(qs, X, Y, rs, ss, margin: float = 0.0) -> bool:
    v = [math.log(r) for r in rs] + [math.log(s) for s in ss]
    return all(sum(a_i * v_i for a_i, v_i in zip(a, v)) + margin < b
               for a, b in chain_constraints(qs, X, Y))


def operator_radius_chain(qs: Sequence, X: Sequence, Y: Sequence,
                          bounds=(0.05, 20.0)):
    """Radii ``(rs, ss)`` maximizing the smallest log-gap to every pole set.

    Solved as a linear program in ``(ln r, ln s, margin)``. Raises
    :class:`RadiusChainInfeasibleError` when no admissible chain exists.
    """
    from scipy.optimize import linprog

    m = len(qs)
    rows = chain_constraints(qs, X, Y)
    A = [a + [1.0] for a, _ in rows]
    b = [bb for _, bb in rows]
    c = [0.0] * (2 * m) + [-1.0]
    lo, hi = math.log(bounds[0]), math.log(bounds[1])
    res = linprog(c, A_ub=A, b_ub=b, bounds=[(lo, hi)] * (2 * m) + [(None, 1.0)],
                  method="highs")
    if not res.success or res.x[-1] <= 1e-9:
        raise RadiusChainInfeasibleError("no admissible nested radius chain for these q, X, Y")
    v = res.x
    return [math.exp(t) for t in v[:m]], [math.exp(t) for t in v[m:2 * m]]


def _nested_integral(qs, X, Y, rs, ss, M):
    m = len(qs)
    grids = [_two_circle(r, s, M) for r, s in zip(rs, ss)]
    mesh = np.meshgrid(*[g[0] for g in grids], indexing="ij", sparse=True)
    vals = 1
    for j in range(m):
        zj, qj = mesh[j], qs[j]
        vals = vals * qj / (zj - qj * zj) * _x_ratio(zj, qj, X) * _cauchy_ratio(zj, qj, Y)
    for j, k in itertools.combinations(range(m), 2):
        zj, zk, qj, qk = mesh[j], mesh[k], qs[j], qs[k]
        if (np.any(np.abs(zk - qj * zj) < CROSS_POLE_TOL)
                or np.any(np.abs(qk * zk - zj) < CROSS_POLE_TOL)):
            raise PoleError("a cross-ratio denominator vanishes at a node pair")
        vals = vals * _cross_ratio(zj, zk, qj, qk)
    out = np.broadcast_to(vals, tuple(2 * M for _ in range(m)))
    for _, w in reversed(grids):
        out = out @ w
    return complex(out)


def nested_operator_contour(qs: Sequence, X: Sequence, Y: Sequence,
                            rs: Sequence[float] | None = None,
                            ss: Sequence[float] | None = None, M: int = 256):
    """``(prod_j q_j^n D~^1_{n;q_j}) G(X)`` for ``G = F(.;Y)``, as an m-fold integral.

    Radii default to :func:`operator_radius_chain`; explicit radii are
    validated against the same inequalities.
    """
    qs, X, Y = list(qs), list(X), list(Y)
    m = len(qs)
    if rs is None or ss is None:
        rs, ss = operator_radius_chain(qs, X, Y)
    if not (len(rs) == len(ss) == m):
        raise ValueError("need one (r, s) pair per q")
    if not check_chain(qs, X, Y, rs, ss):
        if m > 1 and len(set(rs)) == 1 and len(set(ss)) == 1:
            raise RadiusChainInfeasibleError(
                "shared circles cannot nest q_k z_k inside the z_j annulus; use a radius chain")
        raise RadiusWindowError("radii violate the nested window for these q, X, Y")
    return cauchy_F(X, Y) * _nested_integral(qs, X, Y, rs, ss, M)


def nested_operator_direct(qs: Sequence, X: Sequence, Y: Sequence):
    """Same quantity by composing :func:`apply_tilde_d1` on ``F(.;Y)``."""
    n = len(X)

    def build(k):
        if k == 0:
            return lambda xs: cauchy_F(xs, Y, check=False)
        inner = build(k - 1)
        q = qs[k - 1]
        return lambda xs: q**n * apply_tilde_d1(q, inner, xs)

    return build(len(qs))(list(X))


# -- generating function C(X;Y;Q) --------------------------------------------


def _binomial_tail(P: int, rho: float, N: int) -> float:
    """``sum_{j>N} binom(P+j-1, j) rho^j`` with a geometric remainder bound."""
    if P == 0 or rho == 0:
        return 0.0
    if rho >= 1:
        return math.inf
    total = 0.0
    j = N + 1
    log_term = math.lgamma(P + j) - math.lgamma(j + 1) - math.lgamma(P) + j * math.log(rho)
    term = math.exp(log_term)
    for _ in range(10_000):
        total += term
        ratio = (P + j) / (j + 1) * rho
        if ratio < 1 and term * ratio / (1 - ratio) < 1e-3 * total + 1e-300:
            # terms decrease at ratio <= current ratio from here on
            return total + term * ratio / (1 - ratio)
        term *= ratio
        j += 1
    return total + term / (1 - rho)


def _measure_terms(X, Y, N):
    nx = [x for x in X if x != 0]
    ny = [y for y in Y if y != 0]
    cap = min(len(nx), len(ny))
    out = []
    for lam in enumerate_partitions(N, cap):
        w = schur(lam, nx) * schur(lam, ny)
        if w != 0:
            out.append((lam, w))
    return out


def c_series_terms(X: Sequence, Y: Sequence, N: int):
    """Weights ``s_lam(X) s_lam(Y) / F(X;Y)`` for ``|lam| <= N``."""
    F = cauchy_F(X, Y)
    return [(lam, float(w) / F) for lam, w in _measure_terms(X, Y, N)]


def c_series(X: Sequence, Y: Sequence, Q, N: int, *, n: int | None = None,
             check_window: bool = True):
    """Truncated ``C(X;Y;Q)`` with its tail estimate, as ``(value, tail)``.

    ``n`` defaults to ``|X| = |Y|``; passing a larger ``n`` is the same as
    padding both sets with zeros. Entries of ``Q`` may be numpy arrays, in
    which case the value is an array (used for coefficient extraction).
    """
    X, Y = list(X), list(Y)
    if n is None:
        if len(X) != len(Y) or not X:
            raise ValueError("c_series needs |X| = |Y| = n >= 1")
        n = len(X)
    if n < max(len(X), len(Y)):
        raise ValueError("n cannot be smaller than the specialization sizes")
    qs = list(Q.qs if isinstance(Q, QParameterSet) else Q)
    m = len(qs)
    ymax = max(Y) if Y else 0
    if check_window:
        for q in qs:
            aq = np.abs(q)
            if not np.all((ymax < aq**m) & (aq**m < 1)):
                raise ParameterWindowError("need max Y < |q_i|^m < 1 for every q_i")
    total = 0
    for lam, w in c_series_terms(X, Y, N):
        prod = w
        for q in qs:
            prod = prod * sum(q ** (j - lam.part(j)) for j in range(1, n + 1))
        total = total + prod
    xmax = max(X) if X else 0
    qmin = min(float(np.min(np.abs(q))) for q in qs) if qs else 1.0
    pref = 1.0
    for q in qs:
        a = float(np.max(np.abs(q)))
        pref *= a / (1 - a)
    P = sum(1 for x in X if x) * sum(1 for y in Y if y)
    rho = xmax * ymax / qmin**m if qs else xmax * ymax
    tail = pref * _binomial_tail(P, rho, N) / float(cauchy_F(X, Y))
    return total, tail


def c_contour(X: Sequence, Y: Sequence, Q, r: float | None = None, R: float | None = None,
              M: int = 256, *, radii=None):
    """``C(X;Y;Q)`` as the m-fold two-circle integral of the cross-ratio form.

    For ``m = 1`` the circles are ``r`` (inner) and ``R`` (outer). For
    ``m >= 2`` each variable needs its own circle pair; pass
    ``radii=(rs, ss)`` or leave everything unset to solve for a chain.
    """
    X, Y = list(X), list(Y)
    qs = list(as_qset(Q).qs)
    m = len(qs)
    ymax = max(Y) if Y else 0
    for q in qs:
        if not ymax < abs(q) ** m < 1:
            raise ParameterWindowError("need max Y < |q_k|^m < 1")
    if radii is not None:
        rs, ss = radii
    elif r is not None and R is not None:
        if not r < R:
            raise RadiusWindowError(f"need R > r, got r={r}, R={R}")
        rs, ss = [r] * m, [R] * m
    else:
        rs, ss = operator_radius_chain(qs, X, Y)
    if not check_chain(qs, X, Y, rs, ss):
        if m > 1 and len(set(rs)) == 1 and len(set(ss)) == 1:
            raise RadiusChainInfeasibleError(
                "shared circles cannot nest q_k z_k inside the z_j annulus; use a radius chain")
        raise RadiusWindowError("radii violate the window for these q, X, Y")
    return _nested_integral(qs, X, Y, rs, ss, M)
