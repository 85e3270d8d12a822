"""Acceptance criteria, one test per criterion, each with its time budget.

Run ``pytest tests/test_acceptance.py``; the terminal summary lists one
PASS/FAIL line per criterion.
"""

import itertools
import math
import time
from contextlib import contextmanager
from fractions import Fraction

import numpy as np
import pytest

from osserman.checks import Outcome, check_jordan_osserman
from osserman.curvature import assemble
from osserman.duality import (
    build_theta_matrix,
    check_condition_10,
    check_jacobi_dual,
    check_pair,
    check_total_jacobi_dual,
    construct_total_duality_counterwitness,
    dependence_in_F,
    isotropic_supplement,
    theta_quadratic,
)
from osserman.fixtures import example_s3_jk, example_s3_single_j, example_s5_m1, example_s5_m2
from osserman.generators import random_clifford_family, random_family, random_isotropic
from osserman.linalg import (
    Q,
    Poly,
    ScalarSpace,
    VectorType,
    arrays_equal,
    as_rng,
    det,
    identity,
    is_zero_array,
    kernel_basis,
    random_rational,
    random_vector,
    rank,
    sample_vector,
)
from osserman.spectral import char_poly, jacobi, jacobi_apply, jacobi_of, jacobi_structured, spectral
from oracles import jordan_blocks_by_powers

pytestmark = pytest.mark.acceptance


@contextmanager
def budget(seconds):
    start = time.perf_counter()
    yield
    elapsed = time.perf_counter() - start
    assert elapsed < seconds, f"took {elapsed:.1f}s, budget {seconds}s"


def _nonnull(space, rng):
    kinds = [k for k in (VectorType.SPACELIKE, VectorType.TIMELIKE) if space.achievable(k)]
    return sample_vector(space, rng, rng.choice(kinds))


def test_01_quasi_clifford_charpoly():
    with budget(30):
        seen_c = set()
        for seed in range(50):
            f = random_family(("acc1", seed), max_n=10, max_m=3)
            seen_c |= set(f.cs)
            n, k, mu0 = f.space.n, f.k, f.mu0
            lam = Poly.x()
            expected = lam * (lam - mu0) ** (n - k - 1)
            for t in f.terms:
                if t.c != 0:
                    expected = expected * (lam - (mu0 + 3 * t.c * t.mu))
            rng = as_rng(("acc1-x", seed))
            for _ in range(8):
                assert char_poly(jacobi_of(f, _nonnull(f.space, rng))) == expected
        assert seen_c == {-1, 0, 1}


def test_02_s3_counterexample():
    with budget(1):
        ex = example_s3_jk(4, 5)
        s, f = ex.space, ex.family
        T1, T2 = s.named("T1"), s.named("T2")
        assert is_zero_array(jacobi_of(f, T1).matrix)

        fs, ff = s.to_float(), f.with_backend(False)
        got = jacobi_apply(ff, fs.named("T2") + math.sqrt(2) * fs.named("S4"), fs.named("T1"))
        want = -3 * math.sqrt(2) * (fs.named("T3") + fs.named("S3"))
        nz = want != 0
        assert np.all(got[~nz] == 0)
        assert np.max(np.abs(got[nz] - want[nz]) / np.abs(want[nz])) <= 1e-9

        assert check_jacobi_dual(f, samples=8, seed=1).outcome is Outcome.FALSE

        exact = jacobi_apply(f, s.combo(T2=1, S4=1), T1)
        assert arrays_equal(exact, s.combo(T3=-3, S3=-3)) and rank(np.stack([exact, T1])) == 2

        # the literal clause: rank([J_{T2}(T1), T1]) = 2 in exact arithmetic
        image = jacobi_apply(f, T2, T1)
        assert rank(np.stack([image, T1])) == 2, f"J_T2(T1) = {list(map(str, image))}"


def test_03_jordan_osserman_asymmetry():
    with budget(10):
        ex = example_s3_single_j(4, 5)
        f, s = ex.family, ex.space
        assert check_jordan_osserman(f, "timelike", 64, 1).outcome is Outcome.CONSISTENT
        v = check_jordan_osserman(f, "spacelike", 64, 1)
        assert v.outcome is Outcome.FALSE
        x, y = v.witnesses
        assert s.classify(x) is VectorType.SPACELIKE and s.classify(y) is VectorType.SPACELIKE

        def structure(w):
            a = jacobi_of(f, w).normalized()
            values = [e for e, _ in spectral(jacobi_of(f, w)).eigenvalues]
            return {str(e): jordan_blocks_by_powers(a.tolist(), e) for e in values}

        sx, sy = structure(x), structure(y)
        for st in (sx, sy):
            assert sum(sum(b) for b in st.values()) == s.n
        assert sx != sy


def test_04_theta_matrix_identities():
    with budget(30):
        rng = as_rng("acc4")
        for m in (1, 2, 3, 4):
            for _ in range(200):
                theta = [random_rational(rng) for _ in range(m + 1)]
                c = [Q(rng.choice([-1, 0, 1])) if rng.random() < 0.5 else random_rational(rng) for _ in range(m)]
                M = build_theta_matrix(theta, c)
                assert M.shape == (2 ** m, 2 ** m)
                qv = theta[0] ** 2 - sum(ci * t ** 2 for ci, t in zip(c, theta[1:]))
                assert arrays_equal(M @ M, identity(2 ** m) * qv)
                assert det(M) ** 2 == qv ** (2 ** m)


def test_05_isotropic_supplement():
    with budget(10):
        rng = as_rng("acc5")
        sigs = [(p, q) for p in range(1, 5) for q in range(1, 5)]
        for trial in range(100):
            p, q = rng.choice(sigs)
            k = rng.randint(0, min(p, q, 4))
            s = ScalarSpace.canonical(p, q)
            N = random_isotropic(s, k, ("acc5", trial))
            M = isotropic_supplement(s, N)
            assert len(M) == k
            for i, j in itertools.product(range(k), repeat=2):
                assert s.inner(N[i], M[j]) == (1 if i == j else 0)
                assert s.inner(M[i], M[j]) == 0


def test_06_clifford_total_duality():
    with budget(60):
        for i in range(20):
            sig = ((4, 4), (0, 8))[i % 2]
            f = random_clifford_family(sig, ("acc6", i))
            assert all(c == -1 for c in f.cs)
            rng = as_rng(("acc6-x", i))
            for _ in range(100):
                x = random_vector(rng, f.space.n)
                if is_zero_array(x):
                    continue
                assert dependence_in_F(f, x) is None
            assert check_total_jacobi_dual(f, samples=32, seed=i).outcome is Outcome.CONSISTENT


def test_07_s5_m1_not_totally_dual():
    with budget(5):
        ex = example_s5_m1(t=2, mu=1)
        f, s = ex.family, ex.space
        X = s.combo(S1=1, T1=1)
        (J,) = f.Js
        assert arrays_equal(J @ X, X)
        theta = dependence_in_F(f, X)
        assert list(theta.theta) == [1, -1]
        assert check_condition_10(f, theta)
        w = construct_total_duality_counterwitness(f, X, theta)
        assert w is not None
        again = check_pair(f, w.X, w.Y)
        assert not again.proportional and arrays_equal(again.jY_of_X, jacobi_apply(f, w.Y, w.X))
        assert check_total_jacobi_dual(f, samples=32, seed=7).outcome is Outcome.FALSE


def test_08_s5_m2_not_totally_dual():
    with budget(10):
        mu0, mu1, mu2 = Fraction(-75, 7), Fraction(1), Fraction(-1)
        tan2 = -((mu0 + 3 * mu1) / (mu0 + 3 * mu2)) * (mu2 / mu1)
        assert tan2 == Fraction(9, 16)
        assert Fraction(4, 5) ** 2 + Fraction(3, 5) ** 2 == 1 and Fraction(3, 5) / Fraction(4, 5) == Fraction(3, 4)

        ex = example_s5_m2()
        f, s = ex.family, ex.space
        assert s.n == 8 and f.mu0 == Q(-75, 7) and f.mus == [1, -1]
        J, K = f.Js
        X = ex.vectors["X"]
        assert arrays_equal(X, Q(4, 5) * (J @ X) + Q(3, 5) * (K @ X))
        w = construct_total_duality_counterwitness(f, X, dependence_in_F(f, X))
        assert w is not None
        assert not check_pair(f, w.X, w.Y).proportional


def test_09_structured_matches_dense():
    with budget(10):
        for seed in range(100):
            f = random_family(("acc9", seed), frame=seed % 2 == 1)
            rng = as_rng(("acc9-x", seed))
            x = random_vector(rng, f.space.n)
            assert arrays_equal(jacobi_structured(f, x).matrix, jacobi(assemble(f), x).matrix)


def _dependent_vector(f, rng):
    """A vector with a dependence in {X, J_1 X, ...}, when one is easy to build."""
    s = f.space
    i = rng.randrange(f.m)
    t = f.terms[i]
    v = random_vector(rng, s.n)
    if t.c == 1:
        return v + t.J @ v          # J X = X
    if t.c == 0:
        return t.J @ v              # J X = 0
    return sample_vector(s, rng, VectorType.NULL) if s.achievable(VectorType.NULL) else v


def test_10_property_suites():
    hits = 0
    for trial in range(100):
        f = random_family(("acc10-dep", trial))
        x = _dependent_vector(f, as_rng(("acc10-dep-x", trial)))
        if is_zero_array(x):
            continue
        theta = dependence_in_F(f, x)
        if theta is not None:
            hits += 1
            assert theta_quadratic(theta.theta, f.cs) == 0
    assert hits >= 50

    for trial in range(100):
        f = random_family(("acc10-nil", trial))
        s = f.space
        x = _nonnull(s, as_rng(("acc10-nil-x", trial)))
        shifted = jacobi_of(f, x).matrix - identity(s.n) * (s.norm2(x) * f.mu0)
        Fk = [x] + [t.J @ x for t in f.terms if t.c != 0]
        for z in kernel_basis(np.stack([s.lower(v) for v in Fk])):
            assert is_zero_array(shifted @ (shifted @ z))

    for trial in range(100):
        f = random_family(("acc10-orth", trial))
        s = f.space
        x = _nonnull(s, as_rng(("acc10-orth-x", trial)))
        eps = s.norm2(x)
        for (i, a), (j, b) in itertools.product(enumerate(f.terms), repeat=2):
            assert s.inner(a.J @ x, b.J @ x) == (-a.c * eps if i == j else 0)
