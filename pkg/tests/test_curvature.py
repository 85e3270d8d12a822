import itertools
import random
from fractions import Fraction

import numpy as np
import pytest

from osserman.curvature import (
    CliffordFamily,
    DenseCurvature,
    FamilyTerm,
    assemble,
    r0,
    rescale_family,
    rJ,
    validate_family,
    validate_tensor,
)
from osserman.generators import random_family, random_isometry
from osserman.linalg import Q, ScalarSpace, arrays_equal, as_rng, identity, matrix, random_vector, zeros
from oracles import curvature_entry_r0


def _fr(x):
    return Fraction(str(x))


def rj_oracle(space, J, a, b, c, d):
    """The three-term definition evaluated on basis vectors with Fractions."""
    n = space.n
    g = [[_fr(space.g[i, j]) for j in range(n)] for i in range(n)]
    Jf = [[_fr(J[i, j]) for j in range(n)] for i in range(n)]

    def inner(u, v):
        return sum(g[i][j] * u[i] * v[j] for i in range(n) for j in range(n))

    def e(i):
        return [Fraction(int(k == i)) for k in range(n)]

    def Jv(v):
        return [sum(Jf[i][k] * v[k] for k in range(n)) for i in range(n)]

    X, Y, Z, W = e(a), e(b), e(c), e(d)
    return (inner(Jv(X), Z) * inner(Jv(Y), W) - inner(Jv(Y), Z) * inner(Jv(X), W)
            + 2 * inner(Jv(X), Y) * inner(Jv(Z), W))


def random_skew(space, rng):
    n = space.n
    S = zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            v = Q(rng.randint(-3, 3), rng.randint(1, 3))
            S[i, j], S[j, i] = v, -v
    return space.ginv @ S


def test_r0_examples():
    e = ScalarSpace.canonical(0, 2)
    assert r0(e).entries[0, 1, 1, 0] == 1
    l = ScalarSpace.canonical(1, 1)
    assert r0(l).entries[0, 1, 1, 0] == -1
    s = ScalarSpace.canonical(2, 3)
    assert not np.any(r0(s).entries[np.arange(5), np.arange(5)])


def test_r0_matches_definition_in_general_frame():
    g = matrix([[0, 1, 0], [1, 0, 0], [0, 0, 3]])
    s = ScalarSpace(g)
    R = r0(s)
    basis = [s.basis(i) for i in range(3)]
    for a, b, c, d in itertools.product(range(3), repeat=4):
        assert R.entries[a, b, c, d] == curvature_entry_r0(g.tolist(), basis[a], basis[b], basis[c], basis[d])


def test_rj_rotation_example():
    s = ScalarSpace.canonical(0, 2)
    J = matrix([[0, -1], [1, 0]])
    R = rJ(s, J)
    # g(JE1,E2)^2 * (1 + 2): the two terms add rather than cancel
    assert R.entries[0, 1, 1, 0] == -3 == rj_oracle(s, J, 0, 1, 1, 0)
    assert R.entries[0, 1, 0, 1] == 3


def test_rj_zero_and_rejects_non_skew():
    s = ScalarSpace.canonical(2, 2)
    assert not np.any(rJ(s, zeros((4, 4))).entries)
    with pytest.raises(ValueError):
        rJ(s, identity(4))


@pytest.mark.parametrize("seed", range(5))
def test_rj_matches_definition_and_symmetries(seed):
    rng = random.Random(seed)
    s = ScalarSpace(matrix([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, -1, 0], [0, 0, 0, 2]])) if seed % 2 else \
        ScalarSpace.canonical(2, 2)
    J = random_skew(s, rng)
    R = rJ(s, J)
    for a, b, c, d in [tuple(rng.randrange(4) for _ in range(4)) for _ in range(30)]:
        assert R.entries[a, b, c, d] == rj_oracle(s, J, a, b, c, d)
    assert validate_tensor(R).ok


def test_inner_jx_x_vanishes():
    rng = random.Random(1)
    for p, q in [(2, 2), (1, 3), (0, 4)]:
        s = ScalarSpace.canonical(p, q)
        J = random_skew(s, rng)
        for _ in range(20):
            x = random_vector(rng, s.n)
            assert s.inner(J @ x, x) == 0


def test_validate_tensor_reports_perturbed_index():
    s = ScalarSpace.canonical(1, 2)
    R = r0(s)
    entries = R.entries.copy()
    entries[0, 1, 2, 1] += 1
    rep = validate_tensor(DenseCurvature(s, entries))
    assert not rep.ok
    names = {c.name for c in rep.failures}
    assert any(n.startswith("pair symmetry") for n in names)
    pair = next(c for c in rep.failures if c.name.startswith("pair symmetry"))
    assert pair.where in {(0, 1, 2, 1), (2, 1, 0, 1)}


@pytest.mark.parametrize("seed", range(100))
def test_assemble_validates_and_is_linear(seed):
    f = random_family(("assemble", seed), max_n=6)
    R = assemble(f)
    assert validate_tensor(R).ok
    doubled = CliffordFamily(f.space, 2 * f.mu0, tuple(FamilyTerm(2 * t.mu, t.c, t.J) for t in f.terms))
    assert arrays_equal(assemble(doubled).entries, 2 * R.entries)


def test_assemble_trivial_family():
    s = ScalarSpace.canonical(1, 2)
    assert assemble(CliffordFamily(s, 1)).equals(r0(s))


def test_zero_mu_rejected():
    s = ScalarSpace.canonical(0, 2)
    with pytest.raises(ValueError):
        CliffordFamily(s, 1, (FamilyTerm(0, -1, matrix([[0, -1], [1, 0]])),))


def test_validate_family_classification():
    s = ScalarSpace.canonical(2, 2)
    swap = matrix([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]])
    rep = validate_family(CliffordFamily(s, 3, (FamilyTerm(-1, 1, swap),)))
    assert rep.ok and (rep.kind, rep.k, rep.m) == ("anti-Clifford", 1, 1)
    rot = matrix([[0, -1], [1, 0]])
    e = ScalarSpace.canonical(0, 2)
    assert validate_family(CliffordFamily(e, 1, (FamilyTerm(1, -1, rot),))).kind == "Clifford"


def test_validate_family_names_failing_pair():
    s = ScalarSpace.canonical(0, 2)
    rot = matrix([[0, -1], [1, 0]])
    rep = validate_family(CliffordFamily(s, 1, (FamilyTerm(1, -1, rot), FamilyTerm(2, -1, rot))))
    assert not rep.ok
    bad = [c for c in rep.failures]
    assert [c.where for c in bad] == [(1, 2)]
    assert "anticommute" in bad[0].detail


def test_validate_family_wrong_c_and_non_skew():
    s = ScalarSpace.canonical(0, 2)
    rot = matrix([[0, -1], [1, 0]])
    rep = validate_family(CliffordFamily(s, 1, (FamilyTerm(1, 1, rot),)))
    assert [c.name for c in rep.failures] == ["J1^2 = c1·id"]
    rep = validate_family(CliffordFamily(s, 1, (FamilyTerm(1, 1, identity(2)),)))
    assert "J1 skew-adjoint" in [c.name for c in rep.failures]


@pytest.mark.parametrize("seed", range(30))
def test_orthogonality_relations(seed):
    f = random_family(("orth", seed))
    s = f.space
    rng = as_rng(("orth-x", seed))
    for _ in range(4):
        x = random_vector(rng, s.n)
        if s.norm2(x) == 0:
            continue
        for (i, a), (j, b) in itertools.product(enumerate(f.terms), repeat=2):
            val = s.inner(a.J @ x, b.J @ x)
            assert val == (-a.c * s.norm2(x) if i == j else 0)


def test_rescale_family():
    s = ScalarSpace.canonical(0, 2)
    rot = matrix([[0, -1], [1, 0]])
    f = CliffordFamily(s, 1, (FamilyTerm(1, -4, 2 * rot),))
    g = rescale_family(f)
    assert g.terms[0].c == -1 and g.terms[0].mu == 4
    assert arrays_equal(g.terms[0].J, rot)
    assert assemble(g).equals(assemble(f))
    assert validate_family(g).ok


def test_rescale_identity_and_zero_c():
    f = random_family(("rescale", 2))
    g = rescale_family(f)
    assert all(arrays_equal(a.J, b.J) and a.mu == b.mu for a, b in zip(f.terms, g.terms))
    s = ScalarSpace.canonical(1, 1)
    f0 = CliffordFamily(s, 0, (FamilyTerm(1, 0, zeros((2, 2))),))
    assert rescale_family(f0).terms[0].c == 0


def test_rescale_rejects_non_square():
    s = ScalarSpace.canonical(0, 2)
    rot = matrix([[0, -1], [1, 0]])
    with pytest.raises(ValueError):
        rescale_family(CliffordFamily(s, 1, (FamilyTerm(1, -2, rot),)))


@pytest.mark.parametrize("seed", range(10))
def test_rescale_preserves_tensor_random(seed):
    f = random_family(("rescale-r", seed), max_n=6, allow_zero_c=True)
    rng = random.Random(seed)
    scaled = CliffordFamily(f.space, f.mu0, tuple(
        FamilyTerm(t.mu, t.c * r * r, t.J * r) for t, r in
        zip(f.terms, [Q(rng.randint(1, 4), rng.randint(1, 3)) for _ in f.terms])))
    assert validate_family(scaled).ok
    assert assemble(rescale_family(scaled)).equals(assemble(scaled))


def test_isometry_is_isometry():
    s = ScalarSpace.canonical(2, 3)
    U = random_isometry(s, random.Random(3))
    assert arrays_equal(U.T @ s.g @ U, s.g)
