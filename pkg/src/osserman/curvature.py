"""Algebraic curvature tensors built from the constant-curvature tensor and
skew-adjoint endomorphisms, plus validators for the tensor symmetries and
for Hurwitz-type families ``J_i J_j + J_j J_i = 2 c_i δ_ij id``."""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import gmpy2
import numpy as np

from .linalg import (
    DEFAULT_TOL,
    Q,
    ScalarSpace,
    Tolerance,
    arrays_equal,
    first_nonzero,
    identity,
    is_exact,
    is_zero_array,
    like,
    max_abs,
    rational,
    scalar_is_zero,
    zeros,
)


def is_skew_adjoint(space: ScalarSpace, a, tol: Tolerance = DEFAULT_TOL) -> bool:
    ga = space.g @ np.asarray(a)
    return is_zero_array(ga + ga.T, tol, scale=max(1.0, max_abs(ga)))


def is_self_adjoint(space: ScalarSpace, a, tol: Tolerance = DEFAULT_TOL) -> bool:
    ga = space.g @ np.asarray(a)
    return is_zero_array(ga - ga.T, tol, scale=max(1.0, max_abs(ga)))


def _coerce(x, exact: bool):
    if exact:
        return rational(x)
    return float(x)


@dataclass(frozen=True, eq=False)
class DenseCurvature:
    """Components ``R(E_a, E_b, E_c, E_d)`` in the basis of ``space``."""

    space: ScalarSpace
    entries: np.ndarray

    def __post_init__(self):
        n = self.space.n
        if self.entries.shape != (n, n, n, n):
            raise ValueError(f"expected a ({n},{n},{n},{n}) array, got {self.entries.shape}")

    @property
    def exact(self) -> bool:
        return is_exact(self.entries)

    def __call__(self, x, y, z, w):
        return np.einsum("abcd,a,b,c,d->", self.entries, x, y, z, w)

    def __add__(self, other: "DenseCurvature") -> "DenseCurvature":
        return DenseCurvature(self.space, self.entries + other.entries)

    def __sub__(self, other: "DenseCurvature") -> "DenseCurvature":
        return DenseCurvature(self.space, self.entries - other.entries)

    def __mul__(self, k) -> "DenseCurvature":
        return DenseCurvature(self.space, self.entries * k)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def equals(self, other: "DenseCurvature", tol: Tolerance = DEFAULT_TOL) -> bool:
        return arrays_equal(self.entries, other.entries, tol)

    def with_backend(self, exact: bool) -> "DenseCurvature":
        if exact == self.exact:
            return self
        return DenseCurvature(self.space.with_backend(exact), like(self.entries, exact))


def r0(space: ScalarSpace) -> DenseCurvature:
    """Constant sectional curvature 1: g(Y,Z)g(X,W) - g(X,Z)g(Y,W)."""
    g = space.g
    entries = np.einsum("bc,ad->abcd", g, g) - np.einsum("ac,bd->abcd", g, g)
    return DenseCurvature(space, entries)


def rJ(space: ScalarSpace, J, check: bool = True) -> DenseCurvature:
    """g(JX,Z)g(JY,W) - g(JY,Z)g(JX,W) + 2g(JX,Y)g(JZ,W) for skew-adjoint J."""
    J = np.asarray(J)
    if check and not is_skew_adjoint(space, J, space.tol):
        raise ValueError("J is not skew-adjoint")
    b = J.T @ space.g  # b[a, c] = g(J E_a, E_c)
    entries = (
        np.einsum("ac,bd->abcd", b, b)
        - np.einsum("bc,ad->abcd", b, b)
        + 2 * np.einsum("ab,cd->abcd", b, b)
    )
    return DenseCurvature(space, entries)


# ---------------------------------------------------------------- families

@dataclass(frozen=True, eq=False)
class FamilyTerm:
    mu: object
    c: object
    J: np.ndarray


@dataclass(frozen=True, eq=False)
class CliffordFamily:
    """Generator data for ``mu0 R^0 + Σ mu_i R^{J_i}`` with ``J_i^2 = c_i id``.

    Construction only checks shapes and rejects zero coefficients; the
    skew-adjointness and the Hurwitz relations are checked by
    :func:`validate_family` so that a broken family can still be reported on.
    """

    space: ScalarSpace
    mu0: object
    terms: tuple[FamilyTerm, ...] = ()

    def __post_init__(self):
        exact = self.space.exact
        object.__setattr__(self, "mu0", _coerce(self.mu0, exact))
        terms = []
        for i, t in enumerate(self.terms):
            if not isinstance(t, FamilyTerm):
                t = FamilyTerm(*t)
            J = like(np.asarray(t.J), exact)
            if J.shape != (self.space.n, self.space.n):
                raise ValueError(f"J{i + 1} has shape {J.shape}, expected {(self.space.n,) * 2}")
            mu = _coerce(t.mu, exact)
            if scalar_is_zero(mu, self.space.tol):
                raise ValueError(f"term {i + 1} has a zero coefficient; drop it instead")
            terms.append(FamilyTerm(mu, _coerce(t.c, exact), J))
        object.__setattr__(self, "terms", tuple(terms))

    @property
    def m(self) -> int:
        return len(self.terms)

    @property
    def k(self) -> int:
        return sum(1 for t in self.terms if not scalar_is_zero(t.c, self.space.tol))

    @property
    def mus(self) -> list:
        return [t.mu for t in self.terms]

    @property
    def cs(self) -> list:
        return [t.c for t in self.terms]

    @property
    def Js(self) -> list[np.ndarray]:
        return [t.J for t in self.terms]

    @property
    def exact(self) -> bool:
        return self.space.exact

    @functools.cached_property
    def report(self) -> "ValidationReport":
        return validate_family(self)

    def require_valid(self) -> None:
        if not self.report.ok:
            raise ValueError("invalid family: " + "; ".join(c.describe() for c in self.report.failures))

    def require_skew(self) -> None:
        """The closed-form Jacobi operator only needs skew-adjoint generators."""
        bad = [c for c in self.report.failures if c.name.endswith("skew-adjoint")]
        if bad:
            raise ValueError("invalid family: " + "; ".join(c.describe() for c in bad))

    @property
    def hurwitz(self) -> bool:
        """True when every J_i^2 = c_i id and distinct generators anticommute."""
        return all(c.passed for c in self.report.checks if not c.name.endswith("skew-adjoint"))

    def with_backend(self, exact: bool) -> "CliffordFamily":
        if exact == self.exact:
            return self
        space = self.space.with_backend(exact)
        conv = (lambda x: float(x)) if not exact else (lambda x: Q(float(x)))
        return CliffordFamily(space, conv(self.mu0),
                              tuple(FamilyTerm(conv(t.mu), conv(t.c), like(t.J, exact)) for t in self.terms))

    def predicted_charpoly(self):
        """λ(λ-μ0)^(n-k-1) Π(λ-(μ0+3c_iμ_i)) over the terms with c_i ≠ 0."""
        from .linalg import Poly

        n, k = self.space.n, self.k
        p = Poly.from_roots([0] + [self.mu0] * (n - k - 1))
        for t in self.terms:
            if not scalar_is_zero(t.c, self.space.tol):
                p = p * Poly.from_roots([self.mu0 + 3 * t.c * t.mu])
        return p


def assemble(family: CliffordFamily) -> DenseCurvature:
    out = r0(family.space) * family.mu0
    for t in family.terms:
        out = out + rJ(family.space, t.J) * t.mu
    return out


# ---------------------------------------------------------------- validation

@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    where: tuple | None = None

    def describe(self) -> str:
        s = f"{self.name}: {'ok' if self.passed else 'FAILED'}"
        if self.detail:
            s += f" ({self.detail})"
        return s


@dataclass
class ValidationReport:
    checks: list[CheckResult] = field(default_factory=list)
    kind: str | None = None
    k: int | None = None
    m: int | None = None

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def summary(self) -> str:
        lines = [c.describe() for c in self.checks]
        if self.kind is not None:
            lines.append(f"{self.kind}, k={self.k}, m={self.m}")
        return "\n".join(lines)


_TENSOR_IDENTITIES = (
    ("antisymmetry R(X,Y,Z,W) = -R(Y,X,Z,W)", "abcd->abcd", "bacd->abcd", 1),
    ("antisymmetry R(X,Y,Z,W) = -R(X,Y,W,Z)", "abcd->abcd", "abdc->abcd", 1),
    ("pair symmetry R(X,Y,Z,W) = R(Z,W,X,Y)", "abcd->abcd", "cdab->abcd", -1),
)


def validate_tensor(R: DenseCurvature, tol: Tolerance | None = None) -> ValidationReport:
    tol = tol or R.space.tol
    e = R.entries
    scale = max(1.0, max_abs(e))
    report = ValidationReport()

    def record(name, residual):
        if is_zero_array(residual, tol, scale):
            report.checks.append(CheckResult(name, True))
        else:
            idx = first_nonzero(residual, Tolerance(tol.rtol, max(tol.atol, tol.rtol * scale)))
            report.checks.append(CheckResult(name, False, f"violated at index {tuple(int(i) for i in idx)}",
                                             tuple(int(i) for i in idx)))

    for name, _, perm, s in _TENSOR_IDENTITIES:
        record(name, e + s * np.einsum(perm, e))
    bianchi = e + np.einsum("bcad->abcd", e) + np.einsum("cabd->abcd", e)
    record("first Bianchi identity", bianchi)
    return report


def _family_kind(cs: Sequence, tol: Tolerance) -> str:
    def is_(c, v):
        return scalar_is_zero(c - v, tol)

    if all(is_(c, -1) for c in cs):
        return "Clifford"
    if all(is_(c, 1) for c in cs):
        return "anti-Clifford"
    if all(is_(c, -1) or is_(c, 1) for c in cs):
        return "semi-Clifford"
    return "quasi-Clifford"


def validate_family(family: CliffordFamily, tol: Tolerance | None = None) -> ValidationReport:
    space = family.space
    tol = tol or space.tol
    eye = identity(space.n, space.exact)
    report = ValidationReport(kind=_family_kind(family.cs, tol), k=family.k, m=family.m)
    for i, t in enumerate(family.terms, 1):
        ok = is_skew_adjoint(space, t.J, tol)
        report.checks.append(CheckResult(f"J{i} skew-adjoint", ok, "" if ok else f"g·J{i} is not antisymmetric",
                                         (i,)))
    for (i, a), (j, b) in itertools.combinations_with_replacement(enumerate(family.terms, 1), 2):
        lhs = a.J @ b.J + b.J @ a.J
        rhs = eye * (2 * a.c) if i == j else eye * 0
        resid = lhs - rhs
        ok = is_zero_array(resid, tol, scale=max(1.0, max_abs(lhs)))
        if i == j:
            name, detail = f"J{i}^2 = c{i}·id", f"J{i}^2 != {a.c}·id"
        else:
            name, detail = f"J{i}J{j} + J{j}J{i} = 0", f"J{i} and J{j} do not anticommute"
        report.checks.append(CheckResult(name, ok, "" if ok else detail, (i, j)))
    return report


def _rational_sqrt(x):
    x = Q(x)
    if x < 0 or not (gmpy2.is_square(x.numerator) and gmpy2.is_square(x.denominator)):
        return None
    return Q(gmpy2.isqrt(x.numerator), gmpy2.isqrt(x.denominator))


def rescale_family(family: CliffordFamily) -> CliffordFamily:
    """Normalise every nonzero ``c_i`` to ±1 without changing the tensor.

    ``J_i -> J_i/s`` with ``s = sqrt|c_i|`` and ``mu_i -> mu_i s^2``; on the
    exact path ``|c_i|`` must be the square of a rational.
    """
    terms = []
    for i, t in enumerate(family.terms, 1):
        if scalar_is_zero(t.c, family.space.tol):
            terms.append(t)
            continue
        mag = abs(t.c)
        if family.exact:
            s = _rational_sqrt(mag)
            if s is None:
                raise ValueError(f"|c{i}| = {mag} is not the square of a rational")
        else:
            s = math.sqrt(mag)
        terms.append(FamilyTerm(t.mu * mag, t.c / mag, t.J / s))
    return CliffordFamily(family.space, family.mu0, tuple(terms))
