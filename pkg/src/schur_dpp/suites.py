"""Named batches of numerical checks surfaced by ``schur-dpp verify``.

Each suite returns a list of :class:`Check` rows. A row fails when its
``diff`` exceeds ``tol``; the CLI maps any failure to exit status 1.
"""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass

import numpy as np

from .kernels import (
    KernelRequest,
    det_correlation_measure,
    det_correlation_process,
    rho_measure_qz_contour,
    rho_measure_series_coefficient,
)
from .measures import (
    ProcessSpec,
    rho_measure_bruteforce,
    rho_process_bruteforce,
    verify_normalization,
)
from .operators import (
    apply_tilde_d1,
    apply_tilde_d1_contour,
    c_contour,
    c_series,
    eigenvalue_er,
    nested_operator_contour,
    nested_operator_direct,
)
from .partitions import enumerate_partitions
from .quadrature import cauchy_determinant_check, process_determinant_check
from .symmetric import schur


@dataclass
class Check:
    name: str
    diff: float
    tol: float

    @property
    def ok(self) -> bool:
        return bool(self.diff <= self.tol)

    def to_json_dict(self) -> dict:
        out = asdict(self)
        out["ok"] = self.ok
        return out


def eigenfunction_suite(tol: float = 1e-12, seed: int = 0) -> list[Check]:
    rng = np.random.default_rng(seed)
    checks = []
    for n in (1, 2, 3):
        X = list(np.sort(rng.uniform(0.1, 0.9, n)))
        for q in (0.3, 0.8, 0.5 + 0.2j):
            for lam in enumerate_partitions(4, n):
                lhs = apply_tilde_d1(q, lambda xs, lam=lam: schur(lam, xs), X)
                base = schur(lam, X)
                rhs = eigenvalue_er(1, lam, n, q) * base
                checks.append(Check(f"n={n} q={q} lam={tuple(lam)}",
                                    float(abs(lhs - rhs) / abs(base)), tol))
    return checks


def jittered_circle(rng, n: int, radius: float, jitter: float = 0.3):
    """``n`` points near the n-th roots of unity scaled by ``radius``.

    Cauchy matrices on such families stay well conditioned, so the LU
    determinant is accurate enough to test the closed form at 1e-10.
    """
    k = np.arange(n) + rng.uniform(-jitter, jitter, n)
    return radius * np.exp(2j * np.pi * k / n)


def cauchy_determinant_suite(tol: float = 1e-10, seed: int = 0, instances: int = 100) -> list[Check]:
    rng = np.random.default_rng(seed)
    checks = []
    for k in range(instances):
        n = int(rng.integers(1, 7))
        a = jittered_circle(rng, n, 1.0)
        b = jittered_circle(rng, n, 2.0)
        det, prod = cauchy_determinant_check(a, b)
        checks.append(Check(f"cauchy #{k} n={n}", float(abs(det - prod) / abs(prod)), tol))
    for k in range(20):
        sizes = [int(s) for s in rng.integers(0, 3, size=2)]
        if sum(sizes) == 0 or sum(sizes) > 4:
            continue
        labels = [(h, j) for h, d in enumerate(sizes, 1) for j in range(1, d + 1)]
        z = {lab: complex(*rng.normal(size=2)) for lab in labels}
        q = {lab: 0.5 * complex(*rng.normal(size=2)) for lab in labels}
        det, prod = process_determinant_check(z, q)
        checks.append(Check(f"process #{k} sizes={sizes}", float(abs(det - prod) / abs(prod)), tol))
    return checks


def normalization_suite(N: int = 40) -> list[Check]:
    configs = [
        ("measure X=Y={0.5}", ([0.5], [0.5])),
        ("measure X={0.5,0.3} Y={0.4,0.2}", ([0.5, 0.3], [0.4, 0.2])),
        ("process m=2 {0.3}", ProcessSpec.uniform(2, [0.3], [0.3])),
    ]
    checks = []
    for name, spec in configs:
        res = verify_normalization(spec, N)
        # the residual is a tail mass, so it is bounded by the tail bound up to roundoff
        checks.append(Check(name, res.residual, res.tail_bound + 1e-12))
    return checks


def oracle_measure_suite(tol: float = 1e-6, N: int = 60, nodes: int = 256) -> list[Check]:
    X = Y = [0.5]
    req = KernelRequest(nodes=nodes)
    checks = []
    for d in range(0, 4):
        for T in itertools.combinations(range(-4, 3), d):
            bf = rho_measure_bruteforce(T, X, Y, N).value
            det = det_correlation_measure(T, X, Y, req)
            checks.append(Check(f"T={list(T)}", abs(det - bf), tol))
    return checks


def oracle_process_suite(tol: float = 1e-6, N: int = 30, nodes: int = 256) -> list[Check]:
    spec = ProcessSpec.uniform(2, [0.3], [0.3])
    req = KernelRequest(nodes=nodes)
    pts = [(h, t) for h in (1, 2) for t in range(-3, 2)]
    checks = []
    for d in (1, 2):
        for T in itertools.combinations(pts, d):
            bf = rho_process_bruteforce(T, spec, N).value
            det = det_correlation_process(T, spec, req)
            checks.append(Check(f"T={list(T)}", abs(det - bf), tol))
    return checks


def operators_suite(tol: float = 1e-8) -> list[Check]:
    X = Y = [0.5]
    checks = []
    direct = nested_operator_direct([0.4], X, Y)
    contour = apply_tilde_d1_contour(0.4, X, Y, 1.6, 2.5, 256)
    checks.append(Check("m=1 q=0.4", float(abs(contour - direct)), tol))
    qs = [0.7, 0.8]
    direct = nested_operator_direct(qs, X, Y)
    contour = nested_operator_contour(qs, X, Y, M=256)
    checks.append(Check("m=2 q=(0.7,0.8)", float(abs(contour - direct)), tol))
    return checks


def series_suite(tol: float = 1e-7, N: int = 80) -> list[Check]:
    X = Y = [0.5]
    checks = []
    for m, M in ((1, 256), (2, 1024)):
        qs = [0.9] * m
        series, _ = c_series(X, Y, qs, N)
        contour = c_contour(X, Y, qs, M=M)
        checks.append(Check(f"m={m} q=0.9", float(abs(contour - series)), tol))
    return checks


def qz_suite(tol: float = 1e-5, nodes: int = 64) -> list[Check]:
    X, Y = [0.5, 0.4], [0.5, 0.3]
    checks = []
    for T in ([0], [-2], [1], [-1, 0], [-2, 1]):
        qz = rho_measure_qz_contour(T, X, Y, nodes)
        coef = rho_measure_series_coefficient(T, X, Y, 40)
        det = det_correlation_measure(T, X, Y)
        checks.append(Check(f"T={T} qz-vs-coefficient", abs(qz - coef), tol))
        checks.append(Check(f"T={T} qz-vs-det", abs(qz - det), tol))
    return checks


SUITES = {
    "eigenfunction": eigenfunction_suite,
    "cauchy-determinant": cauchy_determinant_suite,
    "normalization": normalization_suite,
    "oracle-measure": oracle_measure_suite,
    "oracle-process": oracle_process_suite,
    "operators": operators_suite,
    "series": series_suite,
    "qz": qz_suite,
}
