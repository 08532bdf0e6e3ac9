"""Schur measure and Schur process weights, brute-force correlation oracles,
normalization checks and the process generating function.

Correlations use the full configuration ``{lam_j - j : j >= 1}`` (zero parts
included), see :func:`schur_dpp.partitions.occupies`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import ParameterWindowError
from .operators import _binomial_tail
from .partitions import (
    EMPTY,
    Partition,
    as_partition,
    contains,
    enumerate_partitions,
    occupies,
    subpartitions,
)
from .symmetric import (
    as_specialization,
    cauchy_F,
    expand_in_power_basis,
    schur,
    skew_schur,
    truncated_scalar_product,
)


@dataclass(frozen=True)
class ProcessSpec:
    """Specializations ``X^(1..m)`` and ``Y^(1..m)`` of a Schur process."""

    X_levels: tuple
    Y_levels: tuple

    def __init__(self, X_levels, Y_levels):
        X_levels = tuple(as_specialization(x) for x in X_levels)
        Y_levels = tuple(as_specialization(y) for y in Y_levels)
        if len(X_levels) != len(Y_levels) or not X_levels:
            raise ValueError("need m >= 1 levels of X and Y")
        object.__setattr__(self, "X_levels", X_levels)
        object.__setattr__(self, "Y_levels", Y_levels)

    @property
    def m(self) -> int:
        return len(self.X_levels)

    @classmethod
    def uniform(cls, m: int, X, Y=None) -> "ProcessSpec":
        Y = X if Y is None else Y
        return cls([X] * m, [Y] * m)

    def partition_function(self):
        """``Z = prod_{i <= j} F(X^(i); Y^(j))``."""
        Z = 1
        for i in range(self.m):
            for j in range(i, self.m):
                Z = Z * cauchy_F(self.X_levels[i], self.Y_levels[j])
        return Z

    def length_caps(self) -> tuple[list[int], list[int]]:
        """Max lengths of ``lam^(h)`` and ``mu^(h)`` with nonzero weight."""
        nx = [len(x.nonzero()) for x in self.X_levels]
        ny = [len(y.nonzero()) for y in self.Y_levels]
        lam = [min(sum(nx[:h + 1]), sum(ny[h:])) for h in range(self.m)]
        mu = [min(sum(nx[:h + 1]), sum(ny[h + 1:])) for h in range(self.m - 1)]
        return lam, mu

    def to_json_dict(self) -> dict:
        return {"m": self.m, "X_levels": [list(x) for x in self.X_levels],
                "Y_levels": [list(y) for y in self.Y_levels]}


@dataclass
class MeasureWeightReport:
    weight: float
    normalization: float
    tail_bound: float


@dataclass
class OracleReport:
    """Result of a brute-force sum, with enumeration bookkeeping."""

    value: float
    tail_bound: float
    N: int
    count: int = 0
    extra: dict = field(default_factory=dict)

    def __iter__(self):
        # unpacks as (value, tail_bound)
        return iter((self.value, self.tail_bound))

    def to_json_dict(self) -> dict:
        return {"value": self.value, "tail_bound": self.tail_bound, "N": self.N,
                "count": self.count, **self.extra}


# -- Schur measure -------------------------------------------------------------


def schur_measure_weight(lam, X, Y):
    """``SM(lam) = s_lam(X) s_lam(Y) / F(X;Y)``."""
    lam = as_partition(lam)
    return schur(lam, X) * schur(lam, Y) / cauchy_F(X, Y)


def measure_tail_bound(X, Y, N: int) -> float:
    """Rigorous bound on ``SM(|lam| > N)``.

    Each Schur polynomial is monotone in its (nonnegative) arguments, so
    ``sum_{|lam|=j} s_lam(X) s_lam(Y)`` is at most the degree-j part of
    ``(1 - ab)^{-|X||Y|}`` with ``a = max X``, ``b = max Y``.
    """
    X, Y = as_specialization(X), as_specialization(Y)
    P = len(X.nonzero()) * len(Y.nonzero())
    return _binomial_tail(P, float(X.max()) * float(Y.max()), N) / float(cauchy_F(X, Y))


def measure_support(X, Y, N: int) -> list[Partition]:
    X, Y = as_specialization(X), as_specialization(Y)
    cap = min(len(X.nonzero()), len(Y.nonzero()))
    return enumerate_partitions(N, cap)


def rho_measure_bruteforce(T: Sequence[int], X, Y, N: int) -> OracleReport:
    """``sum_{|lam| <= N} 1{T in config(lam)} SM(lam)`` with its tail bound."""
    T = list(T)
    tail = measure_tail_bound(X, Y, N)
    if len(set(T)) < len(T):
        return OracleReport(0.0, tail, N, 0)
    total = 0.0
    count = 0
    F = cauchy_F(X, Y)
    for lam in measure_support(X, Y, N):
        count += 1
        if all(occupies(lam, t) for t in T):
            total += float(schur(lam, X) * schur(lam, Y))
    return OracleReport(total / float(F), tail, N, count)


def measure_weight_reports(X, Y, N: int) -> list[tuple[Partition, MeasureWeightReport]]:
    """Weights in enumeration order with the running normalization."""
    tail = measure_tail_bound(X, Y, N)
    out = []
    running = 0.0
    for lam in measure_support(X, Y, N):
        w = float(schur_measure_weight(lam, X, Y))
        running += w
        out.append((lam, MeasureWeightReport(w, running, tail)))
    return out


# -- Schur process -------------------------------------------------------------


def process_weight_unnormalized(lams, mus, spec: ProcessSpec):
    """The weight ``W(lam, mu)`` before dividing by ``Z``."""
    m = spec.m
    lams = [as_partition(l) for l in lams]
    mus = [as_partition(u) for u in mus]
    if len(lams) != m or len(mus) != m - 1:
        raise ValueError("need m partitions lam and m-1 partitions mu")
    X, Y = spec.X_levels, spec.Y_levels
    w = schur(lams[0], X[0])
    for i in range(m - 1):
        if w == 0:
            return 0
        w = w * skew_schur(lams[i + 1], mus[i], X[i + 1]) * skew_schur(lams[i], mus[i], Y[i])
    return w * schur(lams[-1], Y[-1])


def schur_process_weight(lams, mus, spec: ProcessSpec):
    """``(W / Z, Z)``."""
    Z = spec.partition_function()
    return process_weight_unnormalized(lams, mus, spec) / Z, Z


def process_tail_bound(spec: ProcessSpec, N: int) -> float:
    """Bound on the mass of chains with some ``|lam^(h)| > N``.

    Every ``|lam^(h)|`` is at most the total X-degree of the weight, whose
    generating function ``prod_{i<=j} F(t X^(i); Y^(j))`` is dominated
    coefficientwise by ``(1 - t a b)^{-P}`` with ``P = sum_{i<=j} |X^(i)||Y^(j)|``.
    """
    nx = [len(x.nonzero()) for x in spec.X_levels]
    ny = [len(y.nonzero()) for y in spec.Y_levels]
    P = sum(nx[i] * ny[j] for i in range(spec.m) for j in range(i, spec.m))
    a = max(float(x.max()) for x in spec.X_levels)
    b = max(float(y.max()) for y in spec.Y_levels)
    return _binomial_tail(P, a * b, N) / float(spec.partition_function())


def process_supports(spec: ProcessSpec, N: int):
    """Yield ``(lams, mus, W)`` over chains with ``|lam^(h)| <= N`` and ``W != 0``."""
    m = spec.m
    lam_caps, mu_caps = spec.length_caps()
    X, Y = spec.X_levels, spec.Y_levels
    levels = [enumerate_partitions(N, c) for c in lam_caps]
    # ups[h][mu] lists (lam, s_{lam/mu}(X^(h+1))) with a nonzero value, in enumeration order
    ups = [None]
    for h in range(1, m):
        table: dict = {}
        for lam in levels[h]:
            for mu in subpartitions(lam):
                if len(mu) > mu_caps[h - 1]:
                    continue
                wx = skew_schur(lam, mu, X[h])
                if wx != 0:
                    table.setdefault(mu, []).append((lam, wx))
        ups.append(table)

    last_y: dict = {}
    down_y: dict = {}

    def rec(h, lams, mus, w):
        if h == m:
            prev = lams[-1]
            if prev not in last_y:
                last_y[prev] = schur(prev, Y[-1])
            wf = w * last_y[prev]
            if wf != 0:
                yield tuple(lams), tuple(mus), wf
            return
        prev = lams[-1]
        for mu in subpartitions(prev):
            choices = ups[h].get(mu)
            if not choices:
                continue
            key = (h, prev, mu)
            if key not in down_y:
                down_y[key] = skew_schur(prev, mu, Y[h - 1])
            wy = down_y[key]
            if wy == 0:
                continue
            for lam, wx in choices:
                yield from rec(h + 1, lams + [lam], mus + [mu], w * wy * wx)

    for lam in levels[0]:
        w0 = schur(lam, X[0])
        if w0 != 0:
            yield from rec(1, [lam], [], w0)


def projected_process_weight(lams, spec: ProcessSpec, N: int | None = None):
    """``S(lam) = sum_mu S(lam, mu)`` by explicit summation over ``mu``."""
    lams = [as_partition(l) for l in lams]
    Z = spec.partition_function()
    total = 0

    def rec(h, mus):
        nonlocal total
        if h == spec.m - 1:
            total = total + process_weight_unnormalized(lams, mus, spec)
            return
        for mu in subpartitions(lams[h], lams[h + 1]):
            rec(h + 1, mus + [mu])

    rec(0, [])
    return total / Z


def rho_process_bruteforce(T, spec: ProcessSpec, N: int) -> OracleReport:
    """``sum 1{T in config(lams)} S(lams, mus)`` over the truncated support."""
    T = [(int(a), int(b)) for a, b in T]
    for a, _ in T:
        if not 1 <= a <= spec.m:
            raise ValueError(f"level {a} outside 1..{spec.m}")
    tail = process_tail_bound(spec, N)
    if len(set(T)) < len(T):
        return OracleReport(0.0, tail, N, 0)
    Z = float(spec.partition_function())
    total = 0.0
    count = 0
    hit: dict = {}
    for lams, mus, w in process_supports(spec, N):
        count += 1
        ok = True
        for a, b in T:
            key = (lams[a - 1], b)
            if key not in hit:
                hit[key] = occupies(lams[a - 1], b)
            if not hit[key]:
                ok = False
                break
        if ok:
            total += float(w)
    return OracleReport(total / Z, tail, N, count)


@dataclass
class NormalizationResult:
    residual: float
    tail_bound: float
    count: int

    def ok(self) -> bool:
        return self.residual <= self.tail_bound + 1e-13


def verify_normalization(spec, N: int) -> NormalizationResult:
    """``|1 - sum of weights|`` over the truncated support with its tail bound.

    ``spec`` is a :class:`ProcessSpec` or a pair ``(X, Y)`` for the measure.
    """
    if isinstance(spec, ProcessSpec):
        Z = spec.partition_function()
        total = 0
        count = 0
        for _, _, w in process_supports(spec, N):
            total = total + w
            count += 1
        tail = process_tail_bound(spec, N)
    else:
        X, Y = spec
        Z = cauchy_F(X, Y)
        total = 0
        count = 0
        for lam in measure_support(X, Y, N):
            total = total + schur(lam, X) * schur(lam, Y)
            count += 1
        tail = measure_tail_bound(X, Y, N)
    return NormalizationResult(abs(1 - total / Z), tail, count)


# -- process generating function ----------------------------------------------


def _level_sum(q, lam: Partition, upper):
    """``sum_{k=1}^{upper} q^{k - lam_k}``; ``upper = None`` sums to infinity."""
    ell = len(lam)
    if upper is None:
        head = sum(q ** (k - lam.part(k)) for k in range(1, ell + 1))
        return head + q ** (ell + 1) / (1 - q)
    return sum(q ** (k - lam.part(k)) for k in range(1, upper + 1))


def c_process_series(spec: ProcessSpec, Q: Mapping[int, Sequence], u, N: int, *,
                     n: int | None = None, check_window: bool = True):
    """Truncated ``C(X;Y;Q;u)`` over chains with every ``|lam^(h)| <= N``.

    ``Q`` maps a level ``i`` to its list of parameters ``q_{i,1..d_i}``
    (scalars or numpy arrays). ``u = None`` or ``math.inf`` means no
    ``mu``-size indicator and infinite inner sums. ``n`` defaults to the
    common level size; a larger value is equivalent to zero padding.
    """
    m = spec.m
    if n is None:
        sizes = {len(x) for x in spec.X_levels} | {len(y) for y in spec.Y_levels}
        if len(sizes) != 1:
            raise ValueError("all levels must have the same size n (or pass n)")
        n = sizes.pop()
    infinite = u is None or u == math.inf
    all_q = [q for qs in Q.values() for q in qs]
    d = len(all_q)
    ymax = max(float(y.max()) for y in spec.Y_levels)
    if check_window:
        for q in all_q:
            aq = np.abs(q) ** (d * m * m)
            if not np.all((ymax < aq) & (aq < 1)):
                raise ParameterWindowError("need max Y < |q|^{d m^2} < 1 for every q")
    Z = spec.partition_function()
    total = 0
    for lams, mus, w in process_supports(spec, N):
        if not infinite and any(sum(mu) > u for mu in mus):
            continue
        term = w
        for i in range(1, m + 1):
            upper = n if i == 1 else (None if infinite else n + u)
            for q in Q.get(i, ()):
                term = term * _level_sum(q, lams[i - 1], upper)
        total = total + term
    return total / Z


def weight_scalar_form(lams, mus, spec: ProcessSpec, u: int):
    """Right side of the scalar-product form of ``W(lam, mu) prod 1{|mu| <= u}``.

    Each skew factor ``s_{kappa/mu}(V)`` is written as
    ``<s_kappa(V, A), s_mu(A)>`` in ``u`` auxiliary variables.
    """
    m = spec.m
    lams = [as_partition(l) for l in lams]
    mus = [as_partition(x) for x in mus]
    X, Y = spec.X_levels, spec.Y_levels
    out = schur(lams[0], X[0])
    for i in range(m - 1):
        mu = mus[i]
        cap_a = max(sum(lams[i + 1]), sum(mu), 1)
        cap_b = max(sum(lams[i]), sum(mu), 1)
        a = truncated_scalar_product(expand_in_power_basis(lams[i + 1], X[i + 1], u, cap_a),
                                     expand_in_power_basis(mu, (), u, cap_a), u)
        b = truncated_scalar_product(expand_in_power_basis(lams[i], Y[i], u, cap_b),
                                     expand_in_power_basis(mu, (), u, cap_b), u)
        out = out * a * b
    return out * schur(lams[-1], Y[-1])


def weight_with_indicator(lams, mus, spec: ProcessSpec, u: int):
    mus = [as_partition(x) for x in mus]
    if any(sum(mu) > u for mu in mus):
        return 0
    return process_weight_unnormalized(lams, mus, spec)
