"""Named constructions with their expected facts.

Each builder returns a :class:`NamedExample`; :meth:`NamedExample.reproduce`
re-derives every fact from scratch.
"""

from __future__ import annotations

import math
from importlib import resources
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .checks import Outcome, check_jordan_osserman, check_osserman, certify_osserman
from .curvature import CliffordFamily, FamilyTerm, validate_family
from .duality import (
    check_condition_10,
    check_jacobi_dual,
    check_pair,
    check_semic_condition,
    check_total_jacobi_dual,
    construct_total_duality_counterwitness,
    dependence_in_F,
)
from .linalg import Q, Poly, ScalarSpace, arrays_equal, identity, is_zero_array, rational, zeros
from .spectral import char_poly, jacobi_apply, jacobi_of

FLOAT_FACT_RTOL = 1e-9


@dataclass
class Fact:
    name: str
    expected: object
    evaluate: Callable[[], object]
    compare: Callable[[object, object], bool] = lambda a, b: a == b

    def verify(self) -> "FactResult":
        try:
            observed = self.evaluate()
            ok = bool(self.compare(observed, self.expected))
        except Exception as exc:  # a fact that raises is a failed fact, with the reason kept
            observed, ok = f"error: {exc}", False
        return FactResult(self.name, self.expected, observed, ok)


@dataclass
class FactResult:
    name: str
    expected: object
    observed: object
    passed: bool


@dataclass
class NamedExample:
    key: str
    space: ScalarSpace
    family: CliffordFamily
    vectors: dict = field(default_factory=dict)
    facts: list[Fact] = field(default_factory=list)

    def reproduce(self) -> list[FactResult]:
        return [f.verify() for f in self.facts]


def _endo(space: ScalarSpace, images: dict) -> np.ndarray:
    """Matrix from basis images, e.g. {"T1": {"T2": 1, "S2": 1}}; unlisted vectors map to 0."""
    A = zeros((space.n, space.n), space.exact)
    for src, img in images.items():
        col = int(np.flatnonzero([x != 0 for x in space.named(src)])[0])
        A[:, col] = space.combo(**img)
    return A


def _neg(d: dict) -> dict:
    return {k: -v for k, v in d.items()}


def s3_operators(space: ScalarSpace, swap: bool) -> np.ndarray:
    """The nilpotent J (swap=False) or K (swap=True: roles of S4 and S5 exchanged)."""
    s4, s5 = ("S5", "S4") if swap else ("S4", "S5")
    t2s2, t1s1 = {"T2": 1, "S2": 1}, {"T1": 1, "S1": 1}
    t4s, t3s3 = {"T4": 1, s4: 1}, {"T3": 1, "S3": 1}
    return _endo(space, {
        "T1": t2s2, "S1": _neg(t2s2), "T2": _neg(t1s1), "S2": t1s1,
        "T3": t4s, "S3": _neg(t4s), "T4": _neg(t3s3), s4: t3s3,
    })


def _vec_close(a, b, rtol=FLOAT_FACT_RTOL) -> bool:
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    scale = np.maximum(np.abs(b), 1.0)
    return bool(np.all(np.abs(a - b) <= rtol * scale))


def _class_of(family: CliffordFamily) -> str:
    r = validate_family(family)
    if r.ok:
        return f"{r.kind}, k={r.k}, m={r.m}"
    return "invalid: " + "; ".join(c.detail for c in r.failures)


def example_s3_jk(p: int = 4, q: int = 5) -> NamedExample:
    """R^J - R^K with the nilpotent J, K above: not Jacobi-dual.

    J and K do not anticommute (JK + KJ sends T3 to -2(T3+S3)), so the
    family is not quasi-Clifford, and the tensor is not Osserman either:
    J_{T1} = 0 while J_{T3} has the eigenvalues ±3i.
    """
    if p < 4 or q < 5:
        raise ValueError("needs p >= 4 and q >= 5")
    space = ScalarSpace.canonical(p, q)
    J, K = s3_operators(space, False), s3_operators(space, True)
    family = CliffordFamily(space, 0, (FamilyTerm(1, 0, J), FamilyTerm(-1, 0, K)))
    n = space.n
    T1, T3 = space.named("T1"), space.named("T3")
    Y_exact = space.combo(T2=1, S4=1)

    fspace = space.to_float()
    ffamily = family.with_backend(False)
    fT1 = fspace.named("T1")
    fY = fspace.named("T2") + math.sqrt(2) * fspace.named("S4")
    expected_float = -3 * math.sqrt(2) * (fspace.named("T3") + fspace.named("S3"))
    lam = Poly.x()

    facts = [
        Fact("J^2 = 0", True, lambda: is_zero_array(J @ J)),
        Fact("K^2 = 0", True, lambda: is_zero_array(K @ K)),
        Fact("JK + KJ = 0", False, lambda: is_zero_array(J @ K + K @ J)),
        Fact("(JK + KJ)T3 = -2(T3+S3)", True,
             lambda: arrays_equal((J @ K + K @ J) @ T3, space.combo(T3=-2, S3=-2))),
        Fact("family class", "invalid: J1 and J2 do not anticommute", lambda: _class_of(family)),
        Fact("J_{T1} = 0", True, lambda: is_zero_array(jacobi_of(family, T1).matrix)),
        Fact("J_{T2+√2 S4}(T1) = -3√2(T3+S3) [float]", True,
             lambda: _vec_close(jacobi_apply(ffamily, fY, fT1), expected_float)),
        Fact("(T1, T2+√2 S4) breaks duality [float]", False,
             lambda: check_pair(ffamily, fT1, fY).proportional),
        Fact("J_{T2+S4}(T1) = -3(T3+S3) [exact]", True,
             lambda: arrays_equal(jacobi_apply(family, Y_exact, T1), space.combo(T3=-3, S3=-3))),
        Fact("(T1, T2+S4) breaks duality [exact]", False,
             lambda: check_pair(family, T1, Y_exact).proportional),
        Fact("charpoly at T1", str(lam ** n), lambda: str(char_poly(jacobi_of(family, T1)))),
        Fact("charpoly at T3", str(lam ** n + lam ** (n - 2) * 9), lambda: str(char_poly(jacobi_of(family, T3)))),
        Fact("osserman (64 samples, seed 1)", "false",
             lambda: check_osserman(family, samples=64, seed=1).outcome.value),
        Fact("jacobi-dual (seed 1)", "false", lambda: check_jacobi_dual(family, samples=8, seed=1).outcome.value),
    ]
    return NamedExample("s3-counterexample", space, family,
                        {"T1": T1, "T2": space.named("T2"), "T3": T3, "Y": Y_exact}, facts)


def example_s3_anticommuting(p: int = 4, q: int = 5) -> NamedExample:
    """R^J - R^K' with K' = J on span(T1,T2,S1,S2) and -J on span(T3,T4,S3,S4).

    J and K' anticommute, so this is quasi-Clifford with c = (0, 0) and hence
    Osserman, while J_{T1} = 0 and J_{T2+S4}(T1) = -6(T3+S3) keep it from
    being Jacobi-dual.
    """
    if p < 4 or q < 5:
        raise ValueError("needs p >= 4 and q >= 5")
    space = ScalarSpace.canonical(p, q)
    J = s3_operators(space, False)
    flip = identity(space.n, True)
    for name in ("T3", "T4", "S3", "S4"):
        i = int(np.flatnonzero([x != 0 for x in space.named(name)])[0])
        flip[i, i] = Q(-1)
    K = J @ flip
    family = CliffordFamily(space, 0, (FamilyTerm(1, 0, J), FamilyTerm(-1, 0, K)))
    n = space.n
    T1 = space.named("T1")
    Y = space.combo(T2=1, S4=1)
    lam = Poly.x()
    facts = [
        Fact("K^2 = 0", True, lambda: is_zero_array(K @ K)),
        Fact("JK + KJ = 0", True, lambda: is_zero_array(J @ K + K @ J)),
        Fact("family class", "quasi-Clifford, k=0, m=2", lambda: _class_of(family)),
        Fact("osserman", "certified-true", lambda: certify_osserman(family).outcome.value),
        Fact("osserman (64 samples, seed 1)", f"consistent, charpoly {lam ** n}",
             lambda: (lambda v: f"{v.outcome.value}, charpoly {v.charpoly}")(check_osserman(family, samples=64, seed=1))),
        Fact("J_{T1} = 0", True, lambda: is_zero_array(jacobi_of(family, T1).matrix)),
        Fact("J_{T2+S4}(T1) = -6(T3+S3)", True,
             lambda: arrays_equal(jacobi_apply(family, Y, T1), space.combo(T3=-6, S3=-6))),
        Fact("jacobi-dual (seed 1)", "false", lambda: check_jacobi_dual(family, samples=8, seed=1).outcome.value),
    ]
    return NamedExample("s3-anticommuting", space, family, {"T1": T1, "Y": Y}, facts)


def example_s3_single_j(p: int = 4, q: int = 5) -> NamedExample:
    """R^J alone with 4 = p < q: timelike but not spacelike Jordan-Osserman."""
    if p != 4 or q <= p:
        raise ValueError("needs p = 4 < q")
    space = ScalarSpace.canonical(p, q)
    J = s3_operators(space, False)
    family = CliffordFamily(space, 0, (FamilyTerm(1, 0, J),))
    facts = [
        Fact("J^2 = 0", True, lambda: is_zero_array(J @ J)),
        Fact("timelike jordan-osserman (64 samples, seed 1)", "consistent",
             lambda: check_jordan_osserman(family, "timelike", 64, 1).outcome.value),
        Fact("spacelike jordan-osserman (64 samples, seed 1)", "false",
             lambda: check_jordan_osserman(family, "spacelike", 64, 1).outcome.value),
    ]
    return NamedExample("s3-single-j", space, family, {}, facts)


def product_structure(space: ScalarSpace, pairs) -> np.ndarray:
    """J with J T = ±S and J S = ±T for the given (T, S, sign) pairs, so J^2 = id."""
    images = {}
    for t, s, sg in pairs:
        images[t] = {s: sg}
        images[s] = {t: sg}
    return _endo(space, images)


def example_s5_m1(t: int = 2, mu=1) -> NamedExample:
    """3μ R^0 − μ R^J with the product structure J T_i = S_i: not totally Jacobi-dual."""
    mu = rational(mu)
    if t < 2 or mu == 0:
        raise ValueError("needs t >= 2 and mu != 0")
    space = ScalarSpace.canonical(t, t)
    J = product_structure(space, [(f"T{i}", f"S{i}", 1) for i in range(1, t + 1)])
    family = CliffordFamily(space, 3 * mu, (FamilyTerm(-mu, 1, J),))
    X = space.combo(S1=1, T1=1)
    theta = lambda: dependence_in_F(family, X)

    facts = [
        Fact("family class", "anti-Clifford, k=1, m=1",
             lambda: _class_of(family)),
        Fact("X = JX at X = S1+T1", True, lambda: arrays_equal(J @ X, X)),
        Fact("μ0 + 3μ1 = 0", True, lambda: family.mu0 + 3 * family.mus[0] == 0),
        Fact("semi-Clifford sign test", "inconclusive", lambda: check_semic_condition(family).value),
        Fact("osserman", "certified-true", lambda: certify_osserman(family).outcome.value),
        Fact("jacobi-dual (32 samples, seed 7)", "consistent",
             lambda: check_jacobi_dual(family, samples=32, seed=7).outcome.value),
        Fact("dependence θ at X", ["1", "-1"], lambda: [str(v) for v in theta().theta]),
        Fact("condition on θ", True, lambda: check_condition_10(family, theta())),
        Fact("counterwitness found", True,
             lambda: (lambda w: w is not None and not w.proportional)(
                 construct_total_duality_counterwitness(family, X, theta()))),
        Fact("total-jacobi-dual (32 samples, seed 7)", "false",
             lambda: check_total_jacobi_dual(family, samples=32, seed=7).outcome.value),
    ]
    return NamedExample("s5-m1", space, family, {"X": X}, facts)


def tan_squared(mu0, mu1, mu2):
    """tan²(β−α) = −((μ0+3μ1)/(μ0+3μ2))·(μ2/μ1)."""
    mu0, mu1, mu2 = rational(mu0), rational(mu1), rational(mu2)
    if mu0 + 3 * mu2 == 0:
        raise ValueError("μ0 + 3μ2 = 0")
    return -((mu0 + 3 * mu1) / (mu0 + 3 * mu2)) * (mu2 / mu1)


def _rational_sqrt(x):
    from .curvature import _rational_sqrt as root

    return root(x)


def example_s5_m2(t: int = 2, mu0="-75/7", mu1=1, mu2=-1) -> NamedExample:
    """μ0 R^0 + μ1 R^J + μ2 R^K with two anticommuting product structures."""
    if t < 2:
        raise ValueError("needs t >= 2 (n = 4t >= 8)")
    mu0, mu1, mu2 = rational(mu0), rational(mu1), rational(mu2)
    ratio = tan_squared(mu0, mu1, mu2)
    if ratio < 0:
        raise ValueError(f"tan² = {ratio} is negative")
    tan = _rational_sqrt(ratio)
    if tan is None:
        raise ValueError(f"tan² = {ratio} is not a rational square")
    sec = _rational_sqrt(1 + tan * tan)
    if sec is None:
        raise ValueError(f"1 + tan² = {1 + tan * tan} is not a rational square; cos/sin would be irrational")
    cos, sin = 1 / sec, tan / sec
    space = ScalarSpace.canonical(2 * t, 2 * t)
    J = product_structure(space, [(f"T{i}", f"S{i}", 1) for i in range(1, 2 * t + 1)])
    kpairs = []
    for i in range(1, t + 1):
        kpairs += [(f"T{2 * i - 1}", f"S{2 * i}", 1), (f"T{2 * i}", f"S{2 * i - 1}", -1)]
    K = product_structure(space, kpairs)
    family = CliffordFamily(space, mu0, (FamilyTerm(mu1, 1, J), FamilyTerm(mu2, 1, K)))
    X = space.combo(T1=1, S1=cos, S2=sin)
    theta = lambda: dependence_in_F(family, X)

    facts = [
        Fact("family class", "anti-Clifford, k=2, m=2",
             lambda: _class_of(family)),
        Fact("tan²(β−α)", str(ratio), lambda: str(tan_squared(mu0, mu1, mu2))),
        Fact("X = cos·JX + sin·KX", True, lambda: arrays_equal(cos * (J @ X) + sin * (K @ X), X)),
        Fact("dependence θ at X", [str(Q(1)), str(-cos), str(-sin)], lambda: [str(v) for v in theta().theta]),
        Fact("condition on θ", True, lambda: check_condition_10(family, theta())),
        Fact("counterwitness found", True,
             lambda: (lambda w: w is not None and not w.proportional)(
                 construct_total_duality_counterwitness(family, X, theta()))),
    ]
    return NamedExample("s5-m2", space, family, {"X": X}, facts)


EXAMPLES: dict[str, Callable[[], NamedExample]] = {
    "s3-counterexample": example_s3_jk,
    "s3-anticommuting": example_s3_anticommuting,
    "s3-single-j": example_s3_single_j,
    "s5-m1": example_s5_m1,
    "s5-m2": example_s5_m2,
}


DATA_FILES = {
    "s3-counterexample": "s3_jk.json",
    "s3-anticommuting": "s3_anticommuting.json",
    "s3-single-j": "s3_single_j.json",
    "s5-m1": "s5_m1.json",
    "s5-m2": "s5_m2.json",
}


def build(key: str) -> NamedExample:
    try:
        return EXAMPLES[key]()
    except KeyError:
        raise KeyError(f"unknown example {key!r}; known: {', '.join(EXAMPLES)}") from None


def as_problem(example: NamedExample):
    from .problem import Problem

    return Problem(example.space, example.family, None, dict(example.vectors))


def pinned_text(key: str) -> str:
    """The version-controlled problem file of an example."""
    if key not in DATA_FILES:
        raise KeyError(f"unknown example {key!r}; known: {', '.join(DATA_FILES)}")
    return resources.files("osserman").joinpath("data", DATA_FILES[key]).read_text(encoding="utf-8")
