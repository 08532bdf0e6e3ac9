"""Schur functions, Cauchy products and the truncated power-sum scalar product.

Schur and skew-Schur polynomials are evaluated by single-variable
horizontal-strip branching. Arithmetic is generic: ``Fraction`` inputs give
exact ``Fraction`` outputs, floats and complex numbers propagate as usual.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from .errors import CapExceededError, DivergenceError, PoleError
from .partitions import (
    EMPTY,
    Partition,
    as_partition,
    enumerate_partitions,
    horizontal_strips_below,
    partitions_of,
)

MAX_EXPANSION_DEGREE = 8
POLE_TOL = 1e-14


class Specialization(tuple):
    """Finite ordered list of values in ``[0, 1)`` substituted for variables."""

    __slots__ = ()

    def __new__(cls, values: Sequence = ()):
        values = tuple(values)
        for v in values:
            if not (0 <= v < 1):
                raise ValueError(f"specialization values must lie in [0, 1), got {v!r}")
        return super().__new__(cls, values)

    def max(self):
        return max(self) if self else 0

    def nonzero(self) -> tuple:
        return tuple(v for v in self if v != 0)


def as_specialization(obj) -> Specialization:
    return obj if isinstance(obj, Specialization) else Specialization(obj)


def power_sum(k: int, X: Sequence):
    """``p_k(X)``, with ``p_0 = 1``."""
    if k == 0:
        return 1
    return sum((x**k for x in X), 0)


def power_sum_product(mu: Sequence[int], X: Sequence):
    out = 1
    for part in mu:
        out = out * power_sum(part, X)
    return out


@lru_cache(maxsize=200_000)
def _skew(lam: Partition, mu: Partition, xs: tuple, kinds: tuple = ()):
    # kinds keeps Fraction(1, 2) and 0.5 apart in the cache; they hash equal
    n = len(xs)
    if n == 0:
        return 1 if lam == mu else 0
    # each horizontal strip adds at most one row
    if len(lam) > len(mu) + n:
        return 0
    x = xs[-1]
    rest = xs[:-1]
    rest_kinds = kinds[:-1]
    lam_size = sum(lam)
    total = 0
    for nu in horizontal_strips_below(lam, mu):
        inner = _skew(nu, mu, rest, rest_kinds)
        if inner:
            total = total + inner * x ** (lam_size - sum(nu))
    return total


def skew_schur(lam, mu, X: Sequence):
    """``s_{lam/mu}(X)``; zero when ``mu`` is not contained in ``lam``."""
    lam, mu = as_partition(lam), as_partition(mu)
    if len(mu) > len(lam) or any(m > l for m, l in zip(mu, lam)):
        return 0
    # zero variables contribute only the empty strip
    xs = tuple(x for x in X if x != 0)
    return _skew(lam, mu, xs, tuple(type(x) for x in xs))


def schur(lam, X: Sequence):
    """``s_lam(X)``; zero whenever ``len(lam) > len(X)``."""
    return skew_schur(lam, EMPTY, X)


def _check_convergent(X, Y):
    for x in X:
        for y in Y:
            if np.any(np.abs(x * y) >= 1):
                raise DivergenceError("Cauchy product requires |x*y| < 1 for every pair")


def cauchy_F(X: Sequence, Y: Sequence, *, check: bool = True):
    """``F(X;Y) = prod_{x,y} 1/(1 - x y)``.

    Elements may be numbers or numpy arrays; arrays broadcast elementwise.
    """
    if check:
        _check_convergent(X, Y)
    out = 1
    for x in X:
        for y in Y:
            out = out / (1 - x * y)
    return out


def cauchy_F_log(X: Sequence, Y: Sequence, terms: int = 200):
    """``exp(sum_{j<=terms} p_j(X) p_j(Y) / j)``, the series side of ``F``."""
    _check_convergent(X, Y)
    s = sum(power_sum(j, X) * power_sum(j, Y) / j for j in range(1, terms + 1))
    return np.exp(s) if isinstance(s, np.ndarray) else math.exp(s) if isinstance(s, float) else np.exp(complex(s))


def h_q(X: Sequence, Y: Sequence, q):
    """``H_q(X;Y) = F(X;Y) / F(qX;Y) = prod (1 - q x y) / (1 - x y)``.

    Accepts complex singleton sets such as ``[z]`` or ``[1/(q z)]``.
    """
    out = 1
    for x in X:
        for y in Y:
            xy = x * y
            if np.any(np.abs(1 - xy) <= POLE_TOL) or np.any(np.abs(1 - q * xy) <= POLE_TOL):
                raise PoleError("H_q evaluated at a pole of one of its Cauchy factors")
            out = out * (1 - q * xy) / (1 - xy)
    return out


# -- power-sum basis ---------------------------------------------------------


class PowerBasisPolynomial:
    """Finite power-sum expansion ``sum_mu c_mu p_mu(Z)`` with a degree cap."""

    __slots__ = ("coefficients", "degree_cap")

    def __init__(self, coefficients: Mapping, degree_cap: int):
        coeffs = {}
        for mu, c in coefficients.items():
            mu = as_partition(mu)
            if sum(mu) > degree_cap:
                raise CapExceededError(f"{mu} exceeds degree cap {degree_cap}")
            if c != 0:
                coeffs[mu] = c
        self.coefficients = coeffs
        self.degree_cap = degree_cap

    def __getitem__(self, mu):
        return self.coefficients.get(as_partition(mu), 0)

    def __eq__(self, other):
        if not isinstance(other, PowerBasisPolynomial):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __repr__(self):
        return f"PowerBasisPolynomial({self.coefficients!r}, degree_cap={self.degree_cap})"

    def __add__(self, other):
        cap = max(self.degree_cap, other.degree_cap)
        out = dict(self.coefficients)
        for mu, c in other.coefficients.items():
            out[mu] = out.get(mu, 0) + c
        return PowerBasisPolynomial(out, cap)

    def scale(self, alpha):
        return PowerBasisPolynomial({mu: alpha * c for mu, c in self.coefficients.items()},
                                    self.degree_cap)

    def evaluate(self, Z: Sequence):
        return sum((c * power_sum_product(mu, Z) for mu, c in self.coefficients.items()), 0)

    def to_json_dict(self) -> dict:
        out = {}
        for mu in sorted(self.coefficients, key=lambda p: (sum(p), tuple(-x for x in p))):
            c = self.coefficients[mu]
            if isinstance(c, (int, Fraction)):
                c = Fraction(c)
                text = f"{c.numerator}/{c.denominator}"
            else:
                text = repr(c)
            out[",".join(map(str, mu))] = text
        return out

    @classmethod
    def from_json_dict(cls, data: Mapping, degree_cap: int) -> "PowerBasisPolynomial":
        coeffs = {}
        for key, text in data.items():
            mu = Partition(int(k) for k in key.split(",")) if key else EMPTY
            coeffs[mu] = Fraction(text) if "/" in text else complex(text) if "j" in text else float(text)
        return cls(coeffs, degree_cap)


def truncated_scalar_product(a: PowerBasisPolynomial, b: PowerBasisPolynomial, k: int):
    """``sum_{|mu| <= k} a_mu b_mu z_mu`` with ``z_mu = prod_i i^{m_i} m_i!``."""
    total = 0
    for mu, c in a.coefficients.items():
        if sum(mu) <= k and mu in b.coefficients:
            total = total + c * b.coefficients[mu] * mu.z_factor()
    return total


@lru_cache(maxsize=None)
def _power_to_monomial(d: int) -> tuple:
    """Rows ``mu``, columns ``beta``: coefficient of ``m_beta`` in ``p_mu`` at degree d."""
    parts = partitions_of(d)

    def count(mu, beta):
        @lru_cache(maxsize=None)
        def rec(i, remaining):
            if i == len(mu):
                return 1 if not any(remaining) else 0
            total = 0
            for k, r in enumerate(remaining):
                if r >= mu[i]:
                    nxt = list(remaining)
                    nxt[k] -= mu[i]
                    total += rec(i + 1, tuple(nxt))
            return total
        return rec(0, tuple(beta))

    return parts, [[count(mu, beta) for beta in parts] for mu in parts]


def _invert_exact(matrix: list) -> list:
    n = len(matrix)
    aug = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pv = aug[col][col]
        aug[col] = [v / pv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


@lru_cache(maxsize=None)
def monomial_to_power(d: int) -> dict:
    """``m_beta = sum_mu c_{beta,mu} p_mu`` in the ring of symmetric functions."""
    parts, mat = _power_to_monomial(d)
    inv = _invert_exact(mat)
    # p = A m  =>  m = A^{-1} p
    return {beta: {mu: inv[b][k] for k, mu in enumerate(parts) if inv[b][k] != 0}
            for b, beta in enumerate(parts)}


@lru_cache(maxsize=None)
def skew_kostka(lam: Partition, kappa: Partition, content: tuple) -> int:
    """Number of semistandard fillings of ``lam / kappa`` with the given content."""
    if not content:
        return 1 if lam == kappa else 0
    first, rest = content[0], content[1:]
    total = 0
    # grow kappa by a horizontal strip of size `first`
    for nu in _strips_above(kappa, lam, first):
        total += skew_kostka(lam, nu, rest)
    return total


def _strips_above(kappa: Partition, bound: Partition, size: int) -> list[Partition]:
    # nu with kappa <= nu <= bound, nu / kappa a horizontal strip of the given size
    out = []
    rows = len(bound)

    def rec(i, acc, used):
        if i == rows:
            if used == size:
                out.append(Partition(acc))
            return
        lo = kappa.part(i + 1)
        hi = bound[i] if i == 0 else min(bound[i], kappa.part(i))
        for v in range(lo, hi + 1):
            if used + v - lo > size:
                break
            acc.append(v)
            rec(i + 1, acc, used + v - lo)
            acc.pop()

    if len(kappa) > len(bound) or any(k > b for k, b in zip(kappa, bound)):
        return out
    rec(0, [], 0)
    return out


def expand_in_power_basis(lam, X: Sequence, u: int, degree_cap: int) -> PowerBasisPolynomial:
    """Power-sum expansion in ``Z`` of ``s_lam(X, Z)`` with ``X`` specialized.

    Uses ``s_lam(X, Z) = sum_kappa s_kappa(X) s_{lam/kappa}(Z)`` with the
    skew factor written through skew Kostka numbers in the monomial basis and
    converted to power sums. The expansion is the one in the full ring of
    symmetric functions; restricted to ``u`` variables it differs only in
    degrees above ``u``, which the ``u``-truncated scalar product discards.
    """
    lam = as_partition(lam)
    if degree_cap > MAX_EXPANSION_DEGREE:
        raise CapExceededError(f"degree_cap {degree_cap} exceeds {MAX_EXPANSION_DEGREE}")
    if sum(lam) > degree_cap:
        raise CapExceededError(f"|{list(lam)}| = {sum(lam)} exceeds degree cap {degree_cap}")
    if u < 1:
        raise ValueError("u must be >= 1")
    coeffs: dict = {}
    for kappa in enumerate_partitions(sum(lam)):
        if len(kappa) > len(lam) or any(k > l for k, l in zip(kappa, lam)):
            continue
        sx = schur(kappa, X)
        if sx == 0:
            continue
        d = sum(lam) - sum(kappa)
        for beta, row in monomial_to_power(d).items():
            kost = skew_kostka(lam, kappa, tuple(beta))
            if kost == 0:
                continue
            for mu, c in row.items():
                coeffs[mu] = coeffs.get(mu, 0) + sx * kost * c
    return PowerBasisPolynomial(coeffs, degree_cap)


def verify_skew_scalar_identity(lam, mu, X: Sequence, u: int):
    """``|1{|mu|<=u} s_{lam/mu}(X) - <s_lam(X,Z), s_mu(Z)>_Z|`` with ``k = u``."""
    lam, mu = as_partition(lam), as_partition(mu)
    if sum(lam) > 6 or u > 6:
        raise CapExceededError("identity check is capped at |lam| <= 6, u <= 6")
    lhs = skew_schur(lam, mu, X) if sum(mu) <= u else 0
    cap = max(sum(lam), sum(mu), 1)
    a = expand_in_power_basis(lam, X, u, cap)
    b = expand_in_power_basis(mu, (), u, cap)
    return abs(lhs - truncated_scalar_product(a, b, u))


def verify_cauchy_truncation(X: Sequence, Y: Sequence, N: int):
    """Partial Cauchy sum over ``|lam| <= N`` against the product ``F(X;Y)``."""
    X, Y = as_specialization(X), as_specialization(Y)
    max_len = min(len(X.nonzero()), len(Y.nonzero()))
    partial = 0
    for lam in enumerate_partitions(N, max_len):
        partial = partial + schur(lam, X) * schur(lam, Y)
    return partial, cauchy_F(X, Y)


def exponential_scalar_series(q_coeffs: Sequence, r_coeffs: Sequence, u: int, degree_cap: int):
    """Finite-``u`` scalar product of the two power-sum exponentials.

    Sum over ``|lam| <= min(u, degree_cap)`` of
    ``prod_i q_{lam_i} r_{lam_i} / z_lam``; coefficient lists are 1-indexed
    (``q_coeffs[0]`` is ``q_1``) and read zero past their end.
    """
    def coeff(seq, i):
        return seq[i - 1] if i - 1 < len(seq) else 0

    total = 0
    for lam in enumerate_partitions(min(u, degree_cap)):
        term = Fraction(1) if all(isinstance(c, (int, Fraction)) for c in (*q_coeffs, *r_coeffs)) else 1.0
        for part in lam:
            term = term * coeff(q_coeffs, part) * coeff(r_coeffs, part)
        total = total + term / lam.z_factor()
    return total


def verify_scalar_product_limit(q_coeffs: Sequence, r_coeffs: Sequence, u: int, degree_cap: int):
    """``(finite_value, limit_value)``; the limit is ``exp(sum_i q_i r_i / i)``."""
    if degree_cap > MAX_EXPANSION_DEGREE:
        raise CapExceededError(f"degree_cap {degree_cap} exceeds {MAX_EXPANSION_DEGREE}")
    finite = exponential_scalar_series(q_coeffs, r_coeffs, u, degree_cap)
    n = max(len(q_coeffs), len(r_coeffs))
    s = sum(float(q_coeffs[i - 1] if i <= len(q_coeffs) else 0)
            * float(r_coeffs[i - 1] if i <= len(r_coeffs) else 0) / i
            for i in range(1, n + 1))
    return finite, math.exp(s)
