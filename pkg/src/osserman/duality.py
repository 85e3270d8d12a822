"""Jacobi duality: "Y eigenvector of J_X  =>  X eigenvector of J_Y".

Sampling checks for the nonnull (Jacobi-dual) and the nonzero (totally
Jacobi-dual) versions, the linear-dependence machinery for the set
``{X, J_1 X, ..., J_m X}``, the 2^m x 2^m sign matrix built from a
dependence, isotropic supplements, and the explicit counterwitness
construction for anti-Clifford tensors.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .checks import DEFAULT_SAMPLES, Outcome, Verdict, nonnull_kinds, sample_plan
from .curvature import CliffordFamily
from .linalg import (
    Q,
    ScalarSpace,
    VectorType,
    as_rng,
    column_stack,
    eigen_ratio,
    first_nonzero,
    is_zero_array,
    kernel_basis,
    proportional,
    random_rational,
    rank,
    scalar_is_zero,
    zeros,
)
from .spectral import Model, eigenvectors, jacobi_apply, jacobi_of

COMBINATIONS_PER_EIGENSPACE = 8


class YNotEigenvector(ValueError):
    pass


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class DualityWitness:
    X: np.ndarray
    Y: np.ndarray
    lam: object              # J_X(Y) = ε_X·lam·Y for nonnull X, lam·Y for null X
    jY_of_X: np.ndarray
    proportional: bool

    def is_counterexample(self) -> bool:
        return not self.proportional


@dataclass(frozen=True, eq=False)
class ThetaVector:
    """Coefficients with θ0 X + θ1 J1 X + ... + θm Jm X = 0."""

    theta: tuple
    family: CliffordFamily
    X: np.ndarray

    def __post_init__(self):
        if len(self.theta) != self.family.m + 1:
            raise ValueError("theta must have m+1 entries")
        if not is_zero_array(_f_matrix(self.family, self.X) @ np.array(self.theta, dtype=object
                                                                         if self.family.exact else float),
                             self.family.space.tol, scale=1.0):
            raise ValueError("theta does not annihilate {X, J_1 X, ..., J_m X}")


def _f_matrix(family: CliffordFamily, x) -> np.ndarray:
    return column_stack([x] + [J @ x for J in family.Js])


# ---------------------------------------------------------------- pairs

def check_pair(model: Model, x, y) -> DualityWitness:
    space = model.space
    x, y = space.check_vector(x), space.check_vector(y)
    tol = space.tol
    image = jacobi_apply(model, x, y)
    if is_zero_array(y, tol, 1.0) or not proportional(image, y, tol):
        raise YNotEigenvector("Y is not an eigenvector of J_X")
    kappa = eigen_ratio(image, y, tol)
    eps = space.norm2(x)
    lam = kappa / eps if not scalar_is_zero(eps, tol) else kappa
    jy = jacobi_apply(model, y, x)
    return DualityWitness(x, y, lam, jy, proportional(jy, x, tol))


def dual_factor_closed_form(family: CliffordFamily, x, y, lam):
    """Predicted J_Y(X)/X for nonnull X and J_X(Y) = ε_X λ Y with λ ≠ μ0."""
    space = family.space
    ex, ey, gxy = space.norm2(x), space.norm2(y), space.inner(x, y)
    d = ex * (lam - family.mu0)
    s = sum(t.mu ** 2 * space.inner(y, t.J @ x) ** 2 * t.c for t in family.terms)
    return family.mu0 * ey + family.mu0 ** 2 * gxy ** 2 / d - 9 * s / d


def _eigen_candidates(space: ScalarSpace, basis: list, rng, per_space: int):
    yield from basis
    if len(basis) < 2:
        return
    for _ in range(per_space):
        y = zeros(space.n, space.exact)
        for b in basis:
            y = y + random_rational(rng, space.exact) * b
        if not is_zero_array(y, space.tol, 1.0):
            yield y


def _dual_failure(model: Model, x, rng, per_space: int) -> DualityWitness | None:
    space = model.space
    for basis in eigenvectors(jacobi_of(model, x)).values():
        for y in _eigen_candidates(space, basis, rng, per_space):
            jy = jacobi_apply(model, y, x)
            if not proportional(jy, x, space.tol):
                return check_pair(model, x, y)
    return None


def check_jacobi_dual(model: Model, samples: int = DEFAULT_SAMPLES, seed=0, *, probes: bool = True,
                      extra: Sequence[np.ndarray] = (),
                      per_eigenspace: int = COMBINATIONS_PER_EIGENSPACE) -> Verdict:
    """Duality for nonnull X, tested on eigenspace bases and random combinations."""
    return _duality_sweep(model, nonnull_kinds(model.space), "jacobi-dual", samples, seed,
                          probes, extra, per_eigenspace)


def check_total_jacobi_dual(model: Model, samples: int = DEFAULT_SAMPLES, seed=0, *, probes: bool = True,
                            extra: Sequence[np.ndarray] = (),
                            per_eigenspace: int = COMBINATIONS_PER_EIGENSPACE) -> Verdict:
    """Duality for every nonzero X, null vectors included.

    For an anti-Clifford family each null sample with a dependence in
    ``{X, J_i X}`` also runs the explicit counterwitness construction.
    """
    kinds = nonnull_kinds(model.space)
    if model.space.achievable(VectorType.NULL):
        kinds.append(VectorType.NULL)
    return _duality_sweep(model, kinds, "total-jacobi-dual", samples, seed, probes, extra, per_eigenspace)


def _duality_sweep(model, kinds, name, samples, seed, probes, extra, per_space) -> Verdict:
    space = model.space
    count = 0
    rng = as_rng((seed, name, "combinations"))
    structured = isinstance(model, CliffordFamily) and model.report.ok and model.report.kind == "anti-Clifford"
    for kind in kinds:
        for x in sample_plan(space, kind, samples, (seed, kind.value), probes=probes, extra=extra):
            count += 1
            if structured and kind is VectorType.NULL:
                theta = dependence_in_F(model, x)
                if theta is not None:
                    try:
                        w = construct_total_duality_counterwitness(model, x, theta)
                    except PreconditionError:
                        w = None
                    if w is not None:
                        return Verdict(name, Outcome.FALSE, reason="counterwitness from a dependence in F_m",
                                       witnesses=[w], samples=count, seed=seed,
                                       details={"theta": list(theta.theta)})
            w = _dual_failure(model, x, rng, per_space)
            if w is not None:
                return Verdict(name, Outcome.FALSE,
                               reason=f"Y is an eigenvector of J_X ({kind.value} X) but J_Y(X) is not ∝ X",
                               witnesses=[w], samples=count, seed=seed)
    return Verdict(name, Outcome.CONSISTENT, samples=count, seed=seed)


class SemiCliffordCondition(str, enum.Enum):
    POSITIVE = "sufficient-positive"
    NEGATIVE = "sufficient-negative"
    INCONCLUSIVE = "inconclusive"


def check_semic_condition(family: CliffordFamily) -> SemiCliffordCondition:
    """Sign test on (3 c_i μ_i + μ0) μ_i; a uniform strict sign gives total duality."""
    if family.report.kind not in ("Clifford", "anti-Clifford", "semi-Clifford"):
        raise ValueError("family is not semi-Clifford (some c_i is not ±1)")
    products = [(3 * t.c * t.mu + family.mu0) * t.mu for t in family.terms]
    if all(p > 0 for p in products):
        return SemiCliffordCondition.POSITIVE
    if all(p < 0 for p in products):
        return SemiCliffordCondition.NEGATIVE
    return SemiCliffordCondition.INCONCLUSIVE


def certify_total_jacobi_dual(family: CliffordFamily) -> Verdict:
    """Structural certificate: Clifford families, or semi-Clifford with the sign condition."""
    family.require_valid()
    kind = family.report.kind
    if kind == "Clifford":
        return Verdict("total-jacobi-dual", Outcome.CERTIFIED,
                       reason="Clifford family: {X, J_i X} is independent for every X != 0")
    if kind in ("anti-Clifford", "semi-Clifford"):
        cond = check_semic_condition(family)
        if cond is not SemiCliffordCondition.INCONCLUSIVE:
            return Verdict("total-jacobi-dual", Outcome.CERTIFIED, reason=f"semi-Clifford sign condition: {cond.value}")
    raise ValueError(f"no certificate available for a {kind} family")


# ---------------------------------------------------------------- dependence in F_m

def dependence_in_F(family: CliffordFamily, x) -> ThetaVector | None:
    """A nonzero θ with θ0 X + Σ θ_i J_i X = 0, normalised so its first nonzero entry is 1."""
    x = family.space.check_vector(x)
    ker = kernel_basis(_f_matrix(family, x), family.space.tol)
    if not ker:
        return None
    theta = ker[0]
    theta = theta / theta[first_nonzero(theta, family.space.tol)]
    return ThetaVector(tuple(theta), family, x)


def build_theta_matrix(theta: Sequence, c: Sequence, m: int | None = None) -> np.ndarray:
    """The 2^m x 2^m coefficient matrix obtained by applying ±J^α to a dependence.

    Rows and columns are indexed by α ∈ {0,1}^m in lexicographic order.
    ``M[α,α] = (-1)^{|α|} θ0`` and, with β equal to α with slot i flipped,
    ``M[α,β] = (-1)^{α_i + ... + α_m} c_i^{α_i} θ_i``.
    """
    m = len(c) if m is None else m
    if len(theta) != m + 1 or len(c) != m:
        raise ValueError(f"need |theta| = m+1 and |c| = m, got {len(theta)}, {len(c)} for m={m}")
    exact = not any(isinstance(v, float) for v in list(theta) + list(c))
    alphas = list(itertools.product((0, 1), repeat=m))
    index = {a: i for i, a in enumerate(alphas)}
    M = zeros((2 ** m, 2 ** m), exact)
    for a in alphas:
        row = index[a]
        M[row, row] = (-1) ** sum(a) * theta[0]
        for i in range(m):
            beta = a[:i] + (1 - a[i],) + a[i + 1:]
            M[row, index[beta]] = (-1) ** sum(a[i:]) * (c[i] if a[i] else 1) * theta[i + 1]
    return M


def theta_quadratic(theta: Sequence, c: Sequence):
    """θ0² − Σ c_i θ_i², which vanishes whenever θ is a dependence for some X ≠ 0."""
    if len(theta) != len(c) + 1:
        raise ValueError("need |theta| = |c| + 1")
    return theta[0] ** 2 - sum(ci * t ** 2 for ci, t in zip(c, theta[1:]))


def check_condition_10(family: CliffordFamily, theta: Sequence) -> bool:
    """θ0² = Σ c_i θ_i² = −μ0 Σ θ_i² / (3 μ_i), tested exactly."""
    theta = list(theta.theta if isinstance(theta, ThetaVector) else theta)
    if len(theta) != family.m + 1:
        raise ValueError("need |theta| = m+1")
    tol = family.space.tol
    middle = sum(t.c * th ** 2 for t, th in zip(family.terms, theta[1:]))
    right = -family.mu0 * sum(th ** 2 / (3 * t.mu) for t, th in zip(family.terms, theta[1:]))
    return scalar_is_zero(theta[0] ** 2 - middle, tol) and scalar_is_zero(middle - right, tol)


# ---------------------------------------------------------------- isotropic supplements

def isotropic_supplement(space: ScalarSpace, N: Sequence[np.ndarray]) -> list[np.ndarray]:
    """M_1..M_k spanning a totally isotropic space with g(N_i, M_j) = δ_ij.

    Works down from N_k: pick X orthogonal to N_1..N_{k-1} (and to the
    pairs already built) with g(X, N_k) ≠ 0, set
    M_k = -ε_X/(2 g(X,N_k)^2) N_k + X/g(X,N_k), then continue inside
    Span{N_k, M_k}^⊥.  X is the first kernel-basis vector (in index order)
    of the orthogonality constraints that pairs nontrivially with N_k.
    """
    N = [space.check_vector(v) for v in N]
    tol = space.tol
    for i, j in itertools.combinations_with_replacement(range(len(N)), 2):
        if not scalar_is_zero(space.inner(N[i], N[j]), tol):
            raise PreconditionError(f"not totally isotropic: g(N{i + 1}, N{j + 1}) != 0")
    if N and rank(column_stack(N), tol) < len(N):
        raise PreconditionError("input vectors are linearly dependent")
    M: list = [None] * len(N)
    done: list[np.ndarray] = []
    for idx in reversed(range(len(N))):
        nk = N[idx]
        constraints = N[:idx] + done
        if constraints:
            candidates = kernel_basis(np.stack([space.lower(v) for v in constraints]), tol)
        else:
            candidates = [space.basis(i) for i in range(space.n)]
        x = next(v for v in candidates if not scalar_is_zero(space.inner(v, nk), tol))
        a = space.inner(x, nk)
        mk = nk * (-space.norm2(x) / (2 * a * a)) + x / a
        M[idx] = mk
        done += [nk, mk]
    return M


# ---------------------------------------------------------------- counterwitnesses

CANDIDATE_BUDGET = 8
H_CHOICES = 4


def _nonnull_complement_vectors(space: ScalarSpace, vectors: Sequence[np.ndarray], limit: int) -> list:
    basis = kernel_basis(np.stack([space.lower(v) for v in vectors]), space.tol)
    out = []
    pool = itertools.chain(basis, (a + b for a, b in itertools.combinations(basis, 2)),
                           (a - b for a, b in itertools.combinations(basis, 2)))
    for h in pool:
        if not scalar_is_zero(space.norm2(h), space.tol):
            out.append(h)
            if len(out) == limit:
                break
    return out


def construct_total_duality_counterwitness(family: CliffordFamily, x, theta: ThetaVector | Sequence,
                                           budget: int = CANDIDATE_BUDGET,
                                           h_choices: int = H_CHOICES) -> DualityWitness | None:
    """Search Y = Z + j·H for a failure of duality at a null X with a dependence.

    Z = Σ θ_i/(3 μ_i) M_i where the M_i are an isotropic supplement of the
    J_i X, and H runs over nonnull vectors orthogonal to all J_i X and M_i.
    Returns None if the bounded search finds nothing; that does not certify
    duality.
    """
    space = family.space
    tol = space.tol
    x = space.check_vector(x)
    family.require_valid()
    if family.report.kind != "anti-Clifford":
        raise PreconditionError(f"family must be anti-Clifford, got {family.report.kind}")
    if space.classify(x) is not VectorType.NULL:
        raise PreconditionError("X must be a nonzero null vector")
    if not isinstance(theta, ThetaVector):
        theta = ThetaVector(tuple(theta), family, x)
    if not check_condition_10(family, theta):
        raise PreconditionError("the dependence does not satisfy θ0² = Σc_iθ_i² = −μ0 Σθ_i²/(3μ_i)")
    if space.n <= 2 * family.m:
        raise PreconditionError(f"need n > 2m, got n={space.n}, m={family.m}")
    th = theta.theta
    jx = [J @ x for J in family.Js]
    ms = isotropic_supplement(space, jx)
    z = zeros(space.n, space.exact)
    for t, ti, mi in zip(family.terms, th[1:], ms):
        z = z + mi * (ti / (3 * t.mu))
    for h in _nonnull_complement_vectors(space, jx + ms, h_choices):
        for j in range(budget):
            y = z + h * j
            if is_zero_array(y, tol, 1.0):
                continue
            try:
                w = check_pair(family, x, y)
            except YNotEigenvector:
                continue
            if not w.proportional:
                return w
    return None
