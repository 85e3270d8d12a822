"""Jacobi operators, their characteristic polynomials and Jordan structure."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .curvature import CliffordFamily, DenseCurvature
from .linalg import (
    DEFAULT_TOL,
    Poly,
    ScalarSpace,
    Tolerance,
    charpoly,
    identity,
    kernel_basis,
    rank,
    rational_roots,
    scalar_is_zero,
)

Model = Union[DenseCurvature, CliffordFamily]


class IrrationalSpectrum(ArithmeticError):
    """The characteristic polynomial does not split over the rationals."""

    def __init__(self, message: str, partial: "SpectralData | None" = None):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True, eq=False)
class JacobiOperator:
    base: np.ndarray
    matrix: np.ndarray
    space: ScalarSpace
    source: Model

    @property
    def norm2(self):
        return self.space.norm2(self.base)

    @property
    def nonnull(self) -> bool:
        return not scalar_is_zero(self.norm2, self.space.tol)

    def __call__(self, y) -> np.ndarray:
        return self.matrix @ y

    def normalized(self) -> np.ndarray:
        """``J_X / ε_X`` for nonnull X, else ``J_X`` itself."""
        return self.matrix / self.norm2 if self.nonnull else self.matrix


def _dense_matrix(R: DenseCurvature, x) -> np.ndarray:
    # t[j, k] = R(E_j, X, X, E_k); raise the last index with g^-1
    t = np.einsum("jabk,a,b->jk", R.entries, x, x)
    return R.space.ginv @ t.T


def _structured_matrix(family: CliffordFamily, x) -> np.ndarray:
    space = family.space
    eps = space.norm2(x)
    a = (identity(space.n, space.exact) * eps - np.outer(x, space.lower(x))) * family.mu0
    for t in family.terms:
        jx = t.J @ x
        a = a - np.outer(jx, space.lower(jx)) * (3 * t.mu)
    return a


def jacobi(R: DenseCurvature, x) -> JacobiOperator:
    """Y -> Σ ε_i R(Y, X, X, E_i) E_i, computed with g^-1 for arbitrary frames."""
    x = R.space.check_vector(x)
    return JacobiOperator(x, _dense_matrix(R, x), R.space, R)


def jacobi_structured(family: CliffordFamily, x) -> JacobiOperator:
    """Closed form μ0(ε_X Y - g(Y,X)X) - 3 Σ μ_i g(Y, J_i X) J_i X.

    Valid for any skew-adjoint generators; the Hurwitz relations are not used.
    """
    family.require_skew()
    x = family.space.check_vector(x)
    return JacobiOperator(x, _structured_matrix(family, x), family.space, family)


def jacobi_of(model: Model, x) -> JacobiOperator:
    if isinstance(model, CliffordFamily):
        return jacobi_structured(model, x)
    return jacobi(model, x)


def jacobi_apply(model: Model, x, y) -> np.ndarray:
    """J_X(Y) without materialising the full operator."""
    if isinstance(model, CliffordFamily):
        model.require_skew()
        space = model.space
        out = (y * space.norm2(x) - x * space.inner(y, x)) * model.mu0
        for t in model.terms:
            jx = t.J @ x
            out = out - jx * (3 * t.mu * space.inner(y, jx))
        return out
    v = np.einsum("jabk,j,a,b->k", model.entries, y, x, x)
    return model.space.ginv @ v


def char_poly(op: JacobiOperator) -> Poly:
    """Monic det(ε_X λ id - J_X)/ε_X^n for nonnull X; det(λ id - J_X) for null X."""
    return charpoly(op.normalized())


@dataclass
class SpectralData:
    charpoly: Poly
    eigenvalues: list                   # [(value, algebraic multiplicity)]
    eigenspaces: dict                   # value -> list of basis vectors
    jordan: dict                        # value -> tuple of block sizes, descending
    residual: Poly
    diagonalizable: bool | None
    scale: object = 1                   # ε_X for nonnull X (eigenvalues are of J_X/ε_X)
    ranks: dict = field(default_factory=dict)

    def signature(self) -> tuple:
        """Hashable summary of the Jordan structure, for comparisons across X."""
        return tuple(sorted((v, self.jordan[v]) for v in self.jordan))


def jordan_blocks(a, value, multiplicity: int, tol: Tolerance = DEFAULT_TOL) -> tuple[tuple[int, ...], list[int]]:
    """Block sizes for one eigenvalue from the rank sequence of (A - value I)^s."""
    n = a.shape[0]
    shifted = a - identity(n, a.dtype == object) * value
    ranks = [n]
    power = identity(n, a.dtype == object)
    while ranks[-1] > n - multiplicity and len(ranks) <= multiplicity + 1:
        power = power @ shifted
        ranks.append(rank(power, tol))
    at_least = [ranks[s - 1] - ranks[s] for s in range(1, len(ranks))]
    at_least.append(0)
    blocks: list[int] = []
    for s in range(1, len(at_least)):
        exactly = at_least[s - 1] - at_least[s]
        blocks.extend([s] * exactly)
    return tuple(sorted(blocks, reverse=True)), ranks


def spectral(op: JacobiOperator, strict: bool = True) -> SpectralData:
    """Eigenvalues, eigenspaces and Jordan block sizes of J_X (normalised by ε_X).

    On the exact path the characteristic polynomial must split over the
    rationals; otherwise :class:`IrrationalSpectrum` is raised carrying the
    partial data (``strict=False`` returns the partial data instead).
    """
    a = op.normalized()
    tol = op.space.tol
    scale = op.norm2 if op.nonnull else 1
    if a.dtype != object:
        return _float_spectral(a, tol, scale)
    cp = charpoly(a)
    roots, residual = rational_roots(cp)
    eigenspaces, jordan, ranks = {}, {}, {}
    for value, mult in roots:
        eigenspaces[value] = kernel_basis(a - identity(a.shape[0]) * value)
        jordan[value], ranks[value] = jordan_blocks(a, value, mult)
    split = residual.degree == 0
    diag = all(max(b) == 1 for b in jordan.values()) if split else None
    data = SpectralData(cp, roots, eigenspaces, jordan, residual, diag, scale, ranks)
    if not split and strict:
        raise IrrationalSpectrum(f"characteristic polynomial has the irrational factor {residual}", data)
    return data


def _float_spectral(a, tol: Tolerance, scale) -> SpectralData:
    # report-only path: eigenvalues are clustered, never certified
    n = a.shape[0]
    ev = np.linalg.eigvals(a)
    cluster_tol = 1e-6 * max(1.0, float(np.max(np.abs(ev))) if n else 1.0)
    clusters: list[list[complex]] = []
    for v in sorted(ev, key=lambda z: (z.real, z.imag)):
        for c in clusters:
            if abs(c[0] - v) <= cluster_tol:
                c.append(v)
                break
        else:
            clusters.append([v])
    roots, eigenspaces, jordan, ranks = [], {}, {}, {}
    complex_part = []
    rank_tol = Tolerance(rtol=1e-7, atol=1e-9)
    for c in clusters:
        mean = complex(np.mean(c))
        if abs(mean.imag) > cluster_tol:
            complex_part.extend(c)
            continue
        value = float(mean.real)
        roots.append((value, len(c)))
        eigenspaces[value] = kernel_basis(a - np.eye(n) * value, rank_tol)
        jordan[value], ranks[value] = jordan_blocks(a, value, len(c), rank_tol)
    roots.sort(key=lambda r: r[0], reverse=True)
    residual = Poly([1.0])
    for z in complex_part:
        residual = residual * Poly([-z, 1.0])
    residual = Poly([float(np.real(c)) for c in residual.coeffs])
    diag = all(max(b) == 1 for b in jordan.values()) if not complex_part else None
    return SpectralData(charpoly(a), roots, eigenspaces, jordan, residual, diag, scale, ranks)


def eigenvectors(op: JacobiOperator) -> dict:
    """Eigenspace bases keyed by eigenvalue of J_X/ε_X (J_X for null X); no Jordan work."""
    a = op.normalized()
    if a.dtype != object:
        return _float_spectral(a, op.space.tol, 1).eigenspaces
    roots, residual = rational_roots(charpoly(a))
    if residual.degree > 0:
        raise IrrationalSpectrum(f"characteristic polynomial has the irrational factor {residual}")
    return {v: kernel_basis(a - identity(a.shape[0]) * v) for v, _ in roots}

