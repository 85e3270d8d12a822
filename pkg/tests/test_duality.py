import math
import random

import numpy as np
import pytest

from osserman.checks import Outcome
from osserman.curvature import CliffordFamily, FamilyTerm
from osserman.duality import (
    PreconditionError,
    SemiCliffordCondition,
    YNotEigenvector,
    build_theta_matrix,
    certify_total_jacobi_dual,
    check_condition_10,
    check_jacobi_dual,
    check_pair,
    check_semic_condition,
    check_total_jacobi_dual,
    construct_total_duality_counterwitness,
    dependence_in_F,
    dual_factor_closed_form,
    isotropic_supplement,
    theta_quadratic,
)
from osserman.fixtures import example_s3_jk, example_s5_m1, example_s5_m2
from osserman.generators import random_clifford_family, random_family, random_isotropic
from osserman.linalg import Q, ScalarSpace, VectorType, arrays_equal, as_rng, det, matrix, random_vector, rank, \
    sample_vector
from osserman.spectral import jacobi_of, eigenvectors
from oracles import leibniz_det


def test_theta_matrix_m1():
    t0, t1, c1 = Q(2), Q(3), Q(5)
    M = build_theta_matrix([t0, t1], [c1])
    assert arrays_equal(M, matrix([[t0, t1], [-c1 * t1, -t0]]))
    assert det(M) == -t0 ** 2 + c1 * t1 ** 2


def test_theta_matrix_m2_example():
    M = build_theta_matrix([1, 1, 1], [Q(1), Q(1)])
    assert det(M) ** 2 == 1 == leibniz_det(M.tolist()) ** 2


def test_theta_matrix_size_mismatch():
    with pytest.raises(ValueError):
        build_theta_matrix([1, 2, 3], [1])


def test_theta_quadratic_examples():
    assert theta_quadratic([1, -1], [1]) == 0
    assert theta_quadratic([0, 0, 0], [-1, -1]) == 0
    rng = random.Random(0)
    for _ in range(20):
        th = [Q(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(4)]
        if any(th):
            assert theta_quadratic(th, [-1, -1, -1]) > 0


def test_condition_10_examples():
    ex = example_s5_m1()
    assert check_condition_10(ex.family, [1, -1])
    assert not check_condition_10(ex.family, [1, 2])
    f = random_clifford_family((0, 8), 0)
    assert not check_condition_10(f, [1] + [0] * f.m)


def test_semic_condition():
    s = ScalarSpace.canonical(0, 2)
    rot = matrix([[0, -1], [1, 0]])
    f = CliffordFamily(s, 0, (FamilyTerm(1, -1, rot),))
    assert check_semic_condition(f) is SemiCliffordCondition.NEGATIVE
    assert check_semic_condition(example_s5_m1().family) is SemiCliffordCondition.INCONCLUSIVE
    assert check_semic_condition(example_s5_m2().family) is SemiCliffordCondition.INCONCLUSIVE
    with pytest.raises(ValueError):
        check_semic_condition(CliffordFamily(ScalarSpace.canonical(1, 1), 0,
                                             (FamilyTerm(1, 0, matrix([[0, 0], [0, 0]])),)))


def test_certify_total():
    assert certify_total_jacobi_dual(random_clifford_family((4, 4), 1)).outcome is Outcome.CERTIFIED
    with pytest.raises(ValueError):
        certify_total_jacobi_dual(example_s5_m1().family)


def test_check_pair_trivial_and_errors():
    ex = example_s5_m2()
    s = ex.space
    x = s.named("S3")
    w = check_pair(ex.family, x, x)
    assert w.proportional
    with pytest.raises(YNotEigenvector):
        check_pair(ex.family, x, s.named("S3") + s.named("T1") + s.named("S1"))


def test_check_pair_float_s3_witness():
    ex = example_s3_jk()
    f = ex.family.with_backend(False)
    s = f.space
    y = s.named("T2") + math.sqrt(2) * s.named("S4")
    w = check_pair(f, s.named("T1"), y)
    assert not w.proportional
    assert np.allclose(w.jY_of_X, -3 * math.sqrt(2) * (s.named("T3") + s.named("S3")), rtol=1e-9, atol=0)


@pytest.mark.parametrize("seed", range(25))
def test_closed_form_dual_factor(seed):
    f = random_family(("closed", seed), allow_zero_c=seed % 2 == 0)
    s = f.space
    rng = as_rng(("closed-x", seed))
    kinds = [k for k in (VectorType.SPACELIKE, VectorType.TIMELIKE) if s.achievable(k)]
    x = sample_vector(s, rng, kinds[seed % len(kinds)])
    eps = s.norm2(x)
    for lam, basis in eigenvectors(jacobi_of(f, x)).items():
        if lam == f.mu0:
            continue
        y = sum((b * Q(rng.randint(1, 5)) for b in basis), basis[0] * 0)
        w = check_pair(f, x, y)
        assert w.lam == lam
        if w.proportional and any(v != 0 for v in x):
            ratio = next(a / b for a, b in zip(w.jY_of_X, x) if b != 0)
            assert ratio == dual_factor_closed_form(f, x, y, lam)
        assert eps != 0


def test_dependence_examples():
    ex = example_s5_m1()
    th = dependence_in_F(ex.family, ex.vectors["X"])
    assert list(th.theta) == [1, -1]
    f = random_clifford_family((0, 8), 2)
    rng = random.Random(0)
    for _ in range(20):
        assert dependence_in_F(f, random_vector(rng, 8)) is None


@pytest.mark.parametrize("seed", range(40))
def test_dependence_forces_theta_quadratic_zero(seed):
    f = random_family(("dep", seed))
    s = f.space
    rng = as_rng(("dep-x", seed))
    kind = VectorType.NULL if s.achievable(VectorType.NULL) else VectorType.SPACELIKE if s.q else VectorType.TIMELIKE
    for _ in range(10):
        x = sample_vector(s, rng, kind)
        th = dependence_in_F(f, x)
        if th is not None:
            assert theta_quadratic(th.theta, f.cs) == 0


def test_semi_clifford_nonnull_has_no_dependence():
    for seed in range(10):
        f = random_family(("nodep", seed), allow_zero_c=False)
        s = f.space
        rng = as_rng(("nodep-x", seed))
        for _ in range(10):
            x = random_vector(rng, s.n)
            if s.norm2(x) != 0:
                assert dependence_in_F(f, x) is None


def test_anti_clifford_null_dependence_spans_jx():
    for ex in (example_s5_m1(), example_s5_m2()):
        x = ex.vectors["X"]
        th = dependence_in_F(ex.family, x)
        assert th is not None and th.theta[0] != 0
        assert rank(np.stack([J @ x for J in ex.family.Js])) == ex.family.m


def test_isotropic_supplement_examples():
    s = ScalarSpace.canonical(1, 1)
    assert isotropic_supplement(s, []) == []
    n1 = s.vector([1, 1])
    (m1,) = isotropic_supplement(s, [n1])
    assert s.inner(n1, m1) == 1 and s.norm2(m1) == 0
    assert arrays_equal(m1, s.vector([Q(-1, 2), Q(1, 2)]))


@pytest.mark.parametrize("seed", range(20))
def test_isotropic_supplement_random(seed):
    s = ScalarSpace.canonical(4, 4)
    N = random_isotropic(s, 3, ("iso", seed))
    M = isotropic_supplement(s, N)
    for i in range(3):
        for j in range(3):
            assert s.inner(N[i], M[j]) == (1 if i == j else 0)
            assert s.inner(M[i], M[j]) == 0


def test_isotropic_supplement_preconditions():
    s = ScalarSpace.canonical(2, 2)
    with pytest.raises(PreconditionError, match="N1"):
        isotropic_supplement(s, [s.named("T1")])
    n = s.named("T1") + s.named("S1")
    with pytest.raises(PreconditionError, match="dependent"):
        isotropic_supplement(s, [n, 2 * n])


def test_counterwitness_examples():
    for ex in (example_s5_m1(), example_s5_m2()):
        x = ex.vectors["X"]
        w = construct_total_duality_counterwitness(ex.family, x, dependence_in_F(ex.family, x))
        assert w is not None and not w.proportional
        again = check_pair(ex.family, w.X, w.Y)
        assert not again.proportional and arrays_equal(again.jY_of_X, w.jY_of_X)


def test_counterwitness_preconditions():
    f = random_clifford_family((4, 4), 0)
    x = f.space.named("T1") + f.space.named("S1")
    with pytest.raises(PreconditionError):
        construct_total_duality_counterwitness(f, x, [1] + [0] * f.m)
    ex = example_s5_m1()
    with pytest.raises(PreconditionError):
        construct_total_duality_counterwitness(ex.family, ex.space.named("S1"), [1, -1])


def test_jacobi_dual_s3_false():
    ex = example_s3_jk()
    v = check_jacobi_dual(ex.family, samples=8, seed=1)
    assert v.outcome is Outcome.FALSE
    w = v.witnesses[0]
    assert not check_pair(ex.family, w.X, w.Y).proportional


@pytest.mark.parametrize("seed", range(6))
def test_at_most_one_zero_c_is_jacobi_dual(seed):
    for attempt in range(50):
        f = random_family(("dual", seed, attempt), max_n=8)
        if sum(1 for c in f.cs if c == 0) <= 1:
            break
    assert check_jacobi_dual(f, samples=4, seed=seed).outcome is Outcome.CONSISTENT


def test_total_dual_clifford_and_s5():
    assert check_total_jacobi_dual(random_clifford_family((4, 4), 3), samples=8, seed=0).outcome \
        is Outcome.CONSISTENT
    v = check_total_jacobi_dual(example_s5_m1().family, samples=32, seed=7)
    assert v.outcome is Outcome.FALSE
    w = v.witnesses[0]
    assert example_s5_m1().space.classify(w.X) is VectorType.NULL
