import cmath

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from schur_dpp.errors import BudgetExceededError, NonFiniteError, SingularPairError
from schur_dpp.quadrature import (
    ContourSpec,
    cauchy_determinant_check,
    cauchy_product,
    circle_quadrature,
    integrate,
    lexicographic_labels,
    nodes_weights,
    process_determinant_check,
    tensor_sum,
)


def test_contour_spec_validation():
    with pytest.raises(ValueError):
        ContourSpec(1.0, 1, 100)
    with pytest.raises(ValueError):
        ContourSpec(-1.0)
    with pytest.raises(ValueError):
        ContourSpec(1.0, 0)
    assert ContourSpec(2.0).with_nodes(64).nodes == 64


def test_residue_normalization():
    # (2 pi i)^{-1} oint dz / z = 1 counterclockwise, -1 clockwise
    val = tensor_sum(lambda z: 1 / z, [ContourSpec(0.7, 1, 16)])
    assert abs(val - 1) < 1e-14
    val = tensor_sum(lambda z: 1 / z, [ContourSpec(0.7, -1, 16)])
    assert abs(val + 1) < 1e-14
    # other monomials vanish
    for k in (-3, -2, 0, 1, 4):
        assert abs(tensor_sum(lambda z: z**k, [ContourSpec(1.3, 1, 16)])) < 1e-14


def test_circle_quadrature_pairs():
    pts = circle_quadrature(ContourSpec(2.0, 1, 8))
    assert len(pts) == 8
    assert abs(pts[0][0] - 2) < 1e-15 and abs(pts[0][1] - 0.25) < 1e-15


def test_offset_grid_still_exact_for_laurent_polynomials():
    z, w = nodes_weights(ContourSpec(1.0, 1, 32, offset=0.5))
    assert abs(np.sum(w / z) - 1) < 1e-14


def test_integrate_pole_inside():
    f = lambda z: 1 / (z - 0.3)
    val, err = integrate(f, [ContourSpec(1.0, 1, 16)], 1e-12)
    assert abs(val - 1) < 1e-12 and err < 1e-12


def test_integrate_two_dimensional():
    # Cauchy formula twice: residues at z = 0.2, w = -0.1
    f = lambda z, w: np.exp(z * w) / ((z - 0.2) * (w + 0.1))
    val, _ = integrate(f, [ContourSpec(1.0), ContourSpec(0.5)], 1e-12)
    assert abs(val - cmath.exp(-0.02)) < 1e-12
    slow = tensor_sum(lambda z, w: complex(f(z, w)), [ContourSpec(1.0, 1, 16), ContourSpec(0.5, 1, 16)],
                      vectorized=False)
    fast = tensor_sum(f, [ContourSpec(1.0, 1, 16), ContourSpec(0.5, 1, 16)])
    assert abs(slow - fast) < 1e-13


def test_integrate_budget():
    # pole very close to the circle converges slowly
    f = lambda z: 1 / (z - 0.999)
    with pytest.raises(BudgetExceededError) as info:
        integrate(f, [ContourSpec(1.0, 1, 8)], 1e-14, budget=64)
    assert info.value.value is not None


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_integrate_non_finite():
    with pytest.raises(NonFiniteError):
        tensor_sum(lambda z: 1 / (z - 1.0), [ContourSpec(1.0, 1, 8)])


def test_cauchy_determinant_small():
    det, prod = cauchy_determinant_check([1.0], [0.0])
    assert det == pytest.approx(1.0) and prod == pytest.approx(1.0)
    with pytest.raises(SingularPairError):
        cauchy_determinant_check([1.0, 2.0], [2.0, 3.0])
    with pytest.raises(ValueError):
        cauchy_determinant_check([1.0], [2.0, 3.0])


def _circle(rng, n, radius):
    k = np.arange(n) + rng.uniform(-0.3, 0.3, n)
    return radius * np.exp(2j * np.pi * k / n)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_cauchy_determinant_property(n, seed):
    rng = np.random.default_rng(seed)
    a, b = _circle(rng, n, 1.0), _circle(rng, n, 2.0)
    det, prod = cauchy_determinant_check(a, b)
    assert abs(det - prod) <= 1e-10 * abs(prod)


def test_lexicographic_labels():
    assert lexicographic_labels([2, 0, 1]) == [(1, 1), (1, 2), (3, 1)]


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=1, max_size=3).filter(lambda s: 1 <= sum(s) <= 4),
       st.integers(0, 2**32 - 1))
def test_process_determinant_property(sizes, seed):
    rng = np.random.default_rng(seed)
    labels = lexicographic_labels(sizes)
    z = {lab: complex(*rng.uniform(-1, 1, 2)) + 1.5 * np.exp(1j * i) for i, lab in enumerate(labels)}
    q = {lab: 0.6 * complex(*rng.uniform(-1, 1, 2)) for lab in labels}
    try:
        det, prod = process_determinant_check(z, q)
    except SingularPairError:
        return
    assert abs(det - prod) <= 1e-8 * max(abs(prod), 1e-300)


def test_process_determinant_one_level_is_cauchy():
    z = {(1, 1): 1.0 + 0.2j, (1, 2): -0.5 + 1j}
    q = {(1, 1): 0.3, (1, 2): 0.4j}
    det, prod = process_determinant_check(z, q)
    zs = [z[(1, 1)], z[(1, 2)]]
    ws = [q[k] * z[k] for k in sorted(z)]
    assert abs(prod - cauchy_product(zs, ws)) < 1e-13
    assert abs(det - prod) < 1e-13


def test_aliasing_examples():
    assert abs(tensor_sum(lambda z: z**-9, [ContourSpec(1.0, 1, 8)]) - 1) < 1e-14
    assert abs(tensor_sum(lambda z: z**-9, [ContourSpec(1.0, 1, 16)])) < 1e-14
    assert abs(tensor_sum(lambda z: z**2, [ContourSpec(1.0, 1, 8)])) < 1e-14


@pytest.mark.parametrize("p", range(-14, 15))
def test_laurent_monomials_exact(p):
    M = 16
    val = tensor_sum(lambda z: z**p, [ContourSpec(1.0, 1, M)])
    assert abs(val - (1 if p == -1 else 0)) < 1e-14


def test_two_dimensional_residue_examples():
    val, _ = integrate(lambda z, w: 1 / (z * w), [ContourSpec(1.0), ContourSpec(1.0)], 1e-12)
    assert abs(val - 1) < 1e-14
    val, _ = integrate(lambda z, w: 1 / ((z - w) * w), [ContourSpec(2.0, 1, 32), ContourSpec(1.0, 1, 32)],
                       1e-12)
    assert abs(val - 1) < 1e-12


def test_half_step_rotation_invariance():
    f = lambda z, w: 1 / ((z - w) * (1 - 0.5 * z)) * (1 - 0.2 / z)
    base = [ContourSpec(1.3, 1, 64), ContourSpec(0.8, 1, 64)]
    rot = [ContourSpec(1.3, 1, 64, 0.5), ContourSpec(0.8, 1, 64, 0.5)]
    assert abs(tensor_sum(f, base) - tensor_sum(f, rot)) < 1e-10


def test_cauchy_determinant_degenerate_rows():
    det, prod = cauchy_determinant_check([1.0, 1.0], [0.0, 3.0])
    assert abs(det) < 1e-14 and abs(prod) < 1e-14
    det, prod = cauchy_determinant_check([2.0 + 1j], [0.5])
    assert abs(det - 1 / (1.5 + 1j)) < 1e-15 and abs(prod - det) < 1e-15
