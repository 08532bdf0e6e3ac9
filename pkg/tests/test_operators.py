import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from schur_dpp.errors import (
    CoincidentPointsError,
    ParameterWindowError,
    RadiusChainInfeasibleError,
    RadiusWindowError,
)
from schur_dpp.operators import (
    QParameterSet,
    apply_tilde_d1,
    apply_tilde_d1_contour,
    c_contour,
    c_series,
    check_chain,
    eigenvalue_er,
    elementary_symmetric,
    nested_operator_contour,
    nested_operator_direct,
    operator_radius_chain,
)
from schur_dpp.partitions import EMPTY, enumerate_partitions
from schur_dpp.symmetric import cauchy_F, schur

X1 = Y1 = [0.5]


def test_qparameter_window():
    assert len(QParameterSet((0.5, 0.3j))) == 2
    with pytest.raises(ParameterWindowError):
        QParameterSet((1.0,))
    assert QParameterSet((0.9,)).series_window_ok([0.5])
    assert not QParameterSet((0.6, 0.6)).series_window_ok([0.5])


def test_apply_tilde_d1_examples():
    f = lambda xs: xs[0] ** 3 + 1
    assert apply_tilde_d1(0.5, f, [0.3]) == pytest.approx(f([0.6]))
    s2 = lambda xs: schur([2], xs)
    assert apply_tilde_d1(0.5, s2, [0.3]) == pytest.approx(0.36, abs=1e-15)
    q, X = 0.7, [0.2, 0.45]
    got = apply_tilde_d1(q, lambda xs: schur([1], xs), X)
    assert got == pytest.approx((q**-2 + 1) * sum(X), rel=1e-13)
    with pytest.raises(CoincidentPointsError):
        apply_tilde_d1(0.5, f, [0.3, 0.3])


def test_eigenvalue_examples():
    q = 0.6
    for n in (1, 2, 4):
        assert eigenvalue_er(1, EMPTY, n, q) == pytest.approx(sum(q ** (k - n) for k in range(1, n + 1)))
    assert eigenvalue_er(1, [1], 2, q) == pytest.approx(q**-2 + 1)
    assert eigenvalue_er(0, [3, 1], 3, q) == 1
    assert elementary_symmetric(2, [1, 2, 3]) == 11
    with pytest.raises(ValueError):
        eigenvalue_er(1, [1, 1, 1], 2, q)


@pytest.mark.parametrize("q", [0.3, 0.8, 0.5 + 0.2j])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_eigenfunction_identity_grid(q, n):
    X = [0.15, 0.4, 0.7][:n]
    for lam in enumerate_partitions(4, n):
        lhs = apply_tilde_d1(q, lambda xs: schur(lam, xs), X)
        rhs = eigenvalue_er(1, lam, n, q) * schur(lam, X)
        assert abs(lhs - rhs) <= 1e-12 * abs(schur(lam, X))


distinct_points = st.lists(st.floats(0.05, 0.95), min_size=1, max_size=3, unique=True).filter(
    lambda xs: all(abs(a - b) > 0.05 for i, a in enumerate(xs) for b in xs[i + 1:]))


@settings(max_examples=40, deadline=None)
@given(distinct_points, st.floats(0.2, 0.9), st.sampled_from(enumerate_partitions(3)))
def test_eigenfunction_property(X, q, lam):
    if lam.length() > len(X):
        return
    lhs = apply_tilde_d1(q, lambda xs: schur(lam, xs), X)
    rhs = eigenvalue_er(1, lam, len(X), q) * schur(lam, X)
    assert abs(lhs - rhs) <= 1e-10 * max(abs(rhs), 1e-300)


@settings(max_examples=30, deadline=None)
@given(distinct_points, st.floats(0.2, 0.9), st.floats(-2, 2), st.floats(-2, 2))
def test_operator_linearity(X, q, a, b):
    f = lambda xs: schur([2], xs) + 0.5 * schur([1], xs)
    g = lambda xs: schur([1, 1], xs) - schur([3], xs)
    lhs = apply_tilde_d1(q, lambda xs: a * f(xs) + b * g(xs), X)
    rhs = a * apply_tilde_d1(q, f, X) + b * apply_tilde_d1(q, g, X)
    assert abs(lhs - rhs) <= 1e-12 * (1 + abs(lhs))


def test_contour_matches_operator_m1():
    direct = nested_operator_direct([0.4], X1, Y1)
    val = apply_tilde_d1_contour(0.4, X1, Y1, 1.6, 2.5, 256)
    assert abs(val - direct) < 1e-9
    # doubling M changes nothing visible
    assert abs(apply_tilde_d1_contour(0.4, X1, Y1, 1.6, 2.5, 128) - val) < 1e-10


def test_contour_with_empty_y():
    q, X = 0.6, [0.3, 0.55]
    n = len(X)
    got = apply_tilde_d1_contour(q, X, [], 1.2, 4.0, 256)
    want = q**n * eigenvalue_er(1, EMPTY, n, q)
    assert abs(got - want) < 1e-10


def test_contour_window_errors():
    with pytest.raises(RadiusWindowError):
        apply_tilde_d1_contour(0.4, X1, Y1, 1.2, 2.5, 256)  # pole y/q = 1.25 outside r
    with pytest.raises(RadiusWindowError):
        apply_tilde_d1_contour(0.4, X1, Y1, 1.6, 1.9, 256)  # 1/x = 2 not inside the annulus


def test_nested_operator_contour_m2():
    for qs in ([0.7, 0.8], [0.8, 0.85]):
        direct = nested_operator_direct(qs, X1, Y1)
        val = nested_operator_contour(qs, X1, Y1, M=512)
        assert abs(val - direct) < 1e-8


def test_nested_shared_circles_rejected():
    with pytest.raises(RadiusChainInfeasibleError):
        nested_operator_contour([0.8, 0.85], X1, Y1, [1.5, 1.5], [2.5, 2.5])


def test_nested_chain_infeasible():
    # needs x*y < q1*q2
    with pytest.raises(RadiusChainInfeasibleError):
        operator_radius_chain([0.4, 0.45], X1, Y1)


def test_operator_series_identity():
    X, Y = [0.5, 0.3], [0.4, 0.2]
    for qs in ([0.7], [0.8, 0.9]):
        n = len(X)
        direct = nested_operator_direct(qs, X, Y)
        series, tail = c_series(X, Y, qs, 60)
        assert tail < 1e-12
        assert abs(direct - cauchy_F(X, Y) * series) < 1e-9


def test_c_series_examples():
    assert c_series([0], [0], [0.7], 10)[0] == pytest.approx(0.7)
    assert c_series([0], [0], [0.7, 0.8], 10)[0] == pytest.approx(0.56)
    qs = [0.9]
    a, _ = c_series(X1, Y1, qs, 60)
    b, _ = c_series(X1, Y1, qs, 70)
    assert abs(a - b) < 1e-10
    # Y = 0 leaves only the empty partition
    val, _ = c_series([0.5, 0.2], [0, 0], [0.6, 0.7], 20)
    want = math.prod(sum(q**j for j in (1, 2)) for q in (0.6, 0.7))
    assert val == pytest.approx(want, rel=1e-14)
    with pytest.raises(ParameterWindowError):
        c_series(X1, Y1, [0.6, 0.6], 20)


def test_c_contour_m1_and_m2():
    s1, _ = c_series(X1, Y1, [0.9], 80)
    assert abs(c_contour(X1, Y1, [0.9], 1.4, 2.8, 256) - s1) < 1e-8
    s2, _ = c_series(X1, Y1, [0.9, 0.9], 80)
    assert abs(c_contour(X1, Y1, [0.9, 0.9], M=1024) - s2) < 1e-7
    with pytest.raises(RadiusChainInfeasibleError):
        c_contour(X1, Y1, [0.9, 0.9], 1.4, 2.8, 256)


def test_c_contour_zero_y():
    got = c_contour(X1, [0.0], [0.9], 1.4, 2.8, 256)
    want, _ = c_series(X1, [0.0], [0.9], 10)
    assert abs(got - want) < 1e-10


@pytest.mark.parametrize("fr, fR", [(0.9, 0.9), (1.1, 1.1), (0.9, 1.1), (1.1, 0.9)])
def test_c_contour_radius_perturbation_m1(fr, fR):
    base = c_contour(X1, Y1, [0.9], 1.4, 2.8, 512)
    assert abs(c_contour(X1, Y1, [0.9], 1.4 * fr, 2.8 * fR, 512) - base) < 1e-8


def test_c_contour_chain_perturbation_m2():
    qs = [0.9, 0.9]
    rs, ss = operator_radius_chain(qs, X1, Y1)
    base = c_contour(X1, Y1, qs, M=1024, radii=(rs, ss))
    rng = np.random.default_rng(1)
    for _ in range(3):
        jitter = 1 + rng.uniform(-0.01, 0.01, 4)
        r2 = [rs[0] * jitter[0], rs[1] * jitter[1]]
        s2 = [ss[0] * jitter[2], ss[1] * jitter[3]]
        if not check_chain(qs, X1, Y1, r2, s2):
            continue
        assert abs(c_contour(X1, Y1, qs, M=1024, radii=(r2, s2)) - base) < 1e-7


def test_c_contour_window():
    with pytest.raises(ParameterWindowError):
        c_contour(X1, Y1, [0.6, 0.6])
