"""Exact rational (and mirrored float64) linear algebra.

Exact arrays are numpy ``object`` arrays holding :class:`gmpy2.mpq` scalars;
approximate arrays are plain ``float64`` arrays.  Every routine here accepts
either kind and dispatches on the dtype, so the downstream modules are
written once for both backends.
"""

from __future__ import annotations

import enum
import functools
import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import gmpy2
import numpy as np

Q = gmpy2.mpq

_RATIONAL_RE = re.compile(r"-?\d+(/\d+)?")


@dataclass(frozen=True)
class Tolerance:
    rtol: float = 1e-9
    atol: float = 1e-12


DEFAULT_TOL = Tolerance()


# ---------------------------------------------------------------- scalars

def parse_rational(text: str):
    """Parse ``"a"`` or ``"a/b"`` into an exact rational."""
    if not isinstance(text, str) or not _RATIONAL_RE.fullmatch(text.strip()):
        raise ValueError(f"malformed rational {text!r}")
    text = text.strip()
    if "/" in text and int(text.split("/")[1]) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Q(text)


def format_rational(x) -> str:
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(Q(x))


def rational(x):
    """Coerce ints, strings, Fractions and mpq values to mpq."""
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, Fraction):
        return Q(x.numerator, x.denominator)
    if isinstance(x, (float, np.floating)):
        raise TypeError("refusing to convert a float to an exact rational")
    return Q(x)


def is_exact(a) -> bool:
    return np.asarray(a).dtype == object


def scalar_is_zero(x, tol: Tolerance = DEFAULT_TOL, scale: float = 1.0) -> bool:
    if isinstance(x, (float, np.floating)):
        return abs(x) <= max(tol.atol, tol.rtol * scale)
    return x == 0


def sign(x, tol: Tolerance = DEFAULT_TOL) -> int:
    if scalar_is_zero(x, tol):
        return 0
    return 1 if x > 0 else -1


# ---------------------------------------------------------------- arrays

def vector(entries: Iterable, exact: bool = True) -> np.ndarray:
    entries = list(entries)
    if exact:
        return np.array([rational(e) for e in entries] or [], dtype=object)
    return np.array([float(e) for e in entries], dtype=float)


def matrix(rows: Iterable[Iterable], exact: bool = True) -> np.ndarray:
    rows = [list(r) for r in rows]
    if exact:
        out = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=object)
        for i, r in enumerate(rows):
            for j, e in enumerate(r):
                out[i, j] = rational(e)
        return out
    return np.array(rows, dtype=float)


def zeros(shape, exact: bool = True) -> np.ndarray:
    if exact:
        out = np.empty(shape, dtype=object)
        out.fill(Q(0))
        return out
    return np.zeros(shape)


def identity(n: int, exact: bool = True) -> np.ndarray:
    out = zeros((n, n), exact)
    for i in range(n):
        out[i, i] = Q(1) if exact else 1.0
    return out


def basis_vector(n: int, i: int, exact: bool = True) -> np.ndarray:
    v = zeros(n, exact)
    v[i] = Q(1) if exact else 1.0
    return v


def to_float(a) -> np.ndarray:
    a = np.asarray(a)
    if a.dtype == object:
        return np.vectorize(float, otypes=[float])(a) if a.size else np.zeros(a.shape)
    return a.astype(float)


def to_exact(a) -> np.ndarray:
    a = np.asarray(a)
    if a.dtype == object:
        return a
    out = np.empty(a.shape, dtype=object)
    for idx, x in np.ndenumerate(a):
        out[idx] = Q(float(x))
    return out


def like(a, exact: bool) -> np.ndarray:
    return to_exact(a) if exact else to_float(a)


def max_abs(a) -> float:
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(to_float(a))))


def is_zero_array(a, tol: Tolerance = DEFAULT_TOL, scale: float | None = None) -> bool:
    a = np.asarray(a)
    if a.dtype == object:
        return all(x == 0 for x in a.flat)
    scale = max_abs(a) if scale is None else scale
    return max_abs(a) <= max(tol.atol, tol.rtol * scale)


def arrays_equal(a, b, tol: Tolerance = DEFAULT_TOL) -> bool:
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        return False
    if a.dtype == object and b.dtype == object:
        return bool(np.all(a == b))
    return bool(np.allclose(to_float(a), to_float(b), rtol=tol.rtol, atol=tol.atol))


def first_nonzero(a, tol: Tolerance = DEFAULT_TOL):
    """Index of the first entry that is not (numerically) zero, else None."""
    a = np.asarray(a)
    scale = max_abs(a)
    for idx, x in np.ndenumerate(a):
        if not scalar_is_zero(x, tol, scale):
            return idx
    return None


# ---------------------------------------------------------------- elimination

def _rows(m) -> list[list]:
    return [list(r) for r in np.asarray(m)]


def _bareiss(rows: list[list]) -> tuple[list[list], int, int]:
    """Fraction-free forward elimination; returns (echelon rows, rank, row-swap sign)."""
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    prev = Q(1)
    r = 0
    swaps = 1
    for c in range(nc):
        piv = next((i for i in range(r, nr) if rows[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
            swaps = -swaps
        p = rows[r][c]
        for i in range(r + 1, nr):
            a = rows[i][c]
            for j in range(c + 1, nc):
                rows[i][j] = (p * rows[i][j] - a * rows[r][j]) / prev
            rows[i][c] = Q(0)
        prev = p
        r += 1
        if r == nr:
            break
    return rows, r, swaps


def rank(m, tol: Tolerance = DEFAULT_TOL) -> int:
    m = np.asarray(m)
    if m.size == 0:
        return 0
    if m.dtype == object:
        return _bareiss(_rows(m))[1]
    s = np.linalg.svd(m, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > max(tol.atol, tol.rtol * s[0])))


def det(m):
    m = np.asarray(m)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return Q(1) if m.dtype == object else 1.0
    if m.dtype != object:
        return float(np.linalg.det(m))
    rows, r, swaps = _bareiss(_rows(m))
    if r < n:
        return Q(0)
    return swaps * rows[n - 1][n - 1]


def rref(m) -> tuple[list[list], list[int]]:
    """Reduced row echelon form over the rationals, with pivot columns."""
    rows = _rows(m)
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    pivots: list[int] = []
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        rows[r] = [x / p for x in rows[r]]
        for i in range(nr):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    return rows[:r], pivots


def kernel_basis(m, tol: Tolerance = DEFAULT_TOL, ncols: int | None = None) -> list[np.ndarray]:
    """Basis of the right null space.  ``ncols`` is needed only for 0-row input."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] == 0:
        n = ncols if ncols is not None else (m.shape[1] if m.ndim == 2 else 0)
        return [basis_vector(n, i, m.dtype == object) for i in range(n)]
    nc = m.shape[1]
    if m.dtype != object:
        u, s, vh = np.linalg.svd(m)
        cut = max(tol.atol, tol.rtol * (s[0] if s.size else 0.0))
        r = int(np.sum(s > cut))
        return [vh[i].copy() for i in range(r, nc)]
    rows, pivots = rref(m)
    free = [c for c in range(nc) if c not in pivots]
    basis = []
    for f in free:
        v = zeros(nc)
        v[f] = Q(1)
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][f]
        basis.append(v)
    return basis


def inverse(m) -> np.ndarray:
    m = np.asarray(m)
    n = m.shape[0]
    if m.dtype != object:
        return np.linalg.inv(m)
    aug = np.concatenate([m, identity(n)], axis=1)
    rows, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(rows) < n:
        raise ValueError("matrix is singular")
    return np.array([r[n:] for r in rows], dtype=object)


def matrix_power(m, k: int) -> np.ndarray:
    m = np.asarray(m)
    result = identity(m.shape[0], m.dtype == object)
    base = m
    while k:
        if k & 1:
            result = result @ base
        base = base @ base
        k >>= 1
    return result


def column_stack(vectors: Sequence[np.ndarray]) -> np.ndarray:
    return np.stack(list(vectors), axis=1)


def proportional(u, v, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff rank([u, v]) <= 1 (so a zero vector is proportional to anything)."""
    return rank(column_stack([u, v]), tol) <= 1


def eigen_ratio(image, v, tol: Tolerance = DEFAULT_TOL):
    """Scalar k with image == k*v, assuming v != 0 and the two are proportional."""
    idx = first_nonzero(v, tol)
    if idx is None:
        raise ValueError("zero vector has no eigenvalue")
    return image[idx] / v[idx]


# ---------------------------------------------------------------- polynomials

def _div(a, b):
    # int / int would silently become a float
    if isinstance(a, int) and isinstance(b, int):
        return Q(a, b)
    return a / b


class Poly:
    """Univariate polynomial, coefficients lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        cs = list(coeffs)
        while cs and (cs[-1] == 0):
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def x(cls):
        return cls([Q(0), Q(1)])

    @classmethod
    def constant(cls, c):
        return cls([c])

    @classmethod
    def from_roots(cls, roots: Iterable):
        p = cls([1])
        for r in roots:
            p = p * cls([-r, 1])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def exact(self) -> bool:
        return not any(isinstance(c, (float, np.floating)) for c in self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else Q(0)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def _binary(self, other, op):
        other = other if isinstance(other, Poly) else Poly([other])
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return Poly(op(x, y) for x, y in zip(a, b))

    def __add__(self, other):
        return self._binary(other, lambda x, y: x + y)

    def __sub__(self, other):
        return self._binary(other, lambda x, y: x - y)

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly(c * other for c in self.coeffs)
        if self.is_zero() or other.is_zero():
            return Poly([])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly([1])
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def close_to(self, other: "Poly", tol: Tolerance = DEFAULT_TOL) -> bool:
        if self.exact and other.exact:
            return self == other
        n = max(len(self.coeffs), len(other.coeffs))
        a = [float(c) for c in self.coeffs] + [0.0] * (n - len(self.coeffs))
        b = [float(c) for c in other.coeffs] + [0.0] * (n - len(other.coeffs))
        return bool(np.allclose(a, b, rtol=tol.rtol, atol=max(tol.atol, 1e-9 * max(map(abs, a + b), default=0))))

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly([]), Poly(rem)
        quot = [0] * (dq + 1)
        lead = other.leading
        for k in range(dq, -1, -1):
            f = _div(rem[k + len(other.coeffs) - 1], lead)
            quot[k] = f
            for j, c in enumerate(other.coeffs):
                rem[k + j] = rem[k + j] - f * c
        return Poly(quot), Poly(rem[: len(other.coeffs) - 1])

    def derivative(self) -> "Poly":
        return Poly(i * c for i, c in enumerate(self.coeffs) if i)

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return Poly(_div(c, self.leading) for c in self.coeffs)

    def strings(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            neg = c < 0
            mag = -c if neg else c
            mono = "" if i == 0 else ("λ" if i == 1 else f"λ^{i}")
            if mono and mag == 1:
                body = mono
            else:
                body = format_rational(mag) + (f"·{mono}" if mono else "")
            terms.append(("- " if neg else "+ ") + body)
        s = " ".join(terms)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic()


def charpoly(a) -> Poly:
    """det(λ·I − A) by Faddeev–LeVerrier (exact) or numpy.poly (float)."""
    a = np.asarray(a)
    n = a.shape[0]
    if a.dtype != object:
        return Poly(reversed(np.real_if_close(np.poly(a)).astype(float).tolist()))
    coeffs = [Q(0)] * (n + 1)
    coeffs[n] = Q(1)
    eye = identity(n)
    m = zeros((n, n))
    for k in range(1, n + 1):
        m = a @ m + coeffs[n - k + 1] * eye
        am = a @ m
        coeffs[n - k] = -sum(am[i, i] for i in range(n)) / k
    return Poly(coeffs)


class RootFactorization(NamedTuple):
    roots: list            # [(root, multiplicity)], descending by root
    residual: Poly         # monic factor without rational roots


def _integer_coeffs(p: Poly) -> list:
    den = functools.reduce(gmpy2.lcm, (Q(c).denominator for c in p.coeffs), gmpy2.mpz(1))
    ints = [gmpy2.mpz(Q(c) * den) for c in p.coeffs]
    g = functools.reduce(gmpy2.gcd, ints, gmpy2.mpz(0))
    return [i // g for i in ints]


def _divisors(n: int, limit: int) -> list[int] | None:
    n = abs(int(n))
    if n > limit:
        return None
    small, large = [], []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
    return small + large[::-1]


def _candidate_roots(p: Poly) -> set:
    """Rational candidates: exact for degree <= 2, numeric + rounding otherwise."""
    cands = set()
    if p.degree == 1:
        cands.add(-p.coeffs[0] / p.coeffs[1])
        return cands
    if p.degree == 2:
        c, b, a = p.coeffs
        disc = b * b - 4 * a * c
        if disc >= 0 and gmpy2.is_square(disc.numerator) and gmpy2.is_square(disc.denominator):
            s = Q(gmpy2.isqrt(disc.numerator), gmpy2.isqrt(disc.denominator))
            cands.update({(-b + s) / (2 * a), (-b - s) / (2 * a)})
        return cands
    monic = p.monic()
    fl = [float(c) for c in reversed(monic.coeffs)]
    for r in np.roots(fl):
        if abs(r.imag) > 1e-6 * max(1.0, abs(r)):
            continue
        f = Fraction(float(r.real))
        for bound in (1, 10, 100, 10**3, 10**4, 10**6, 10**9):
            cands.add(rational(f.limit_denominator(bound)))
    return cands


def rational_roots(p: Poly, exhaustive_limit: int = 10**10) -> RootFactorization:
    """All rational roots of an exact polynomial, with multiplicities.

    Candidates come from the square-free part (exactly for degree <= 2,
    otherwise from numeric roots snapped to nearby rationals) and are
    verified exactly.  When the remaining factor has integer coefficients
    small enough for divisor enumeration, the rational root theorem is used
    to make the search exhaustive.
    """
    if not p.exact:
        raise TypeError("rational_roots needs exact coefficients")
    if p.is_zero():
        raise ValueError("the zero polynomial has no finite root set")
    work = p.monic()
    found: dict = {}
    zero_mult = 0
    while work.degree > 0 and work.coeffs[0] == 0:
        work = Poly(work.coeffs[1:])
        zero_mult += 1
    if zero_mult:
        found[Q(0)] = zero_mult

    def strip(r):
        nonlocal work
        mult = 0
        while work.degree > 0 and work(r) == 0:
            work = work.divmod(Poly([-r, Q(1)]))[0]
            mult += 1
        if mult:
            found[r] = found.get(r, 0) + mult

    if work.degree > 0:
        squarefree = work.divmod(poly_gcd(work, work.derivative()))[0]
        for r in sorted(_candidate_roots(squarefree)):
            if squarefree(r) == 0:
                strip(r)
    if work.degree > 0:
        ints = _integer_coeffs(work)
        lead = _divisors(ints[-1], exhaustive_limit)
        const = _divisors(ints[0], exhaustive_limit)
        if lead is not None and const is not None:
            for a in const:
                for b in lead:
                    for r in (Q(a, b), Q(-a, b)):
                        strip(r)
    roots = sorted(found.items(), key=lambda kv: kv[0], reverse=True)
    return RootFactorization(roots, work.monic())


# ---------------------------------------------------------------- scalar product spaces

class VectorType(str, enum.Enum):
    SPACELIKE = "spacelike"
    TIMELIKE = "timelike"
    NULL = "null"
    ZERO = "zero"


class ScalarSpace:
    """A real vector space with a nondegenerate symmetric bilinear form.

    ``signature`` is ``(p, q)`` with ``p`` negative and ``q`` positive
    directions.  The canonical space of signature ``(p, q)`` has metric
    ``diag(-1,...,-1, +1,...,+1)`` with basis ``T1..Tp, S1..Sq``.
    """

    def __init__(self, g, tol: Tolerance = DEFAULT_TOL):
        g = np.asarray(g)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise ValueError("metric must be a square matrix")
        if not arrays_equal(g, g.T, tol):
            raise ValueError("metric must be symmetric")
        self.g = g
        self.tol = tol
        if scalar_is_zero(det(g), tol, max_abs(g) ** max(1, g.shape[0])):
            raise ValueError("metric is degenerate")
        self.signature = self._signature()

    @classmethod
    def canonical(cls, p: int, q: int, exact: bool = True) -> "ScalarSpace":
        if p < 0 or q < 0 or p + q == 0:
            raise ValueError(f"bad signature ({p}, {q})")
        g = zeros((p + q, p + q), exact)
        for i in range(p + q):
            g[i, i] = (-1 if i < p else 1) * (Q(1) if exact else 1.0)
        return cls(g)

    def _signature(self) -> tuple[int, int]:
        if not self.exact:
            ev = np.linalg.eigvalsh(self.g)
            return int(np.sum(ev < 0)), int(np.sum(ev > 0))
        # all roots are real, so Descartes' rule of signs is exact
        cp = charpoly(self.g)
        pos = _sign_changes(cp.coeffs)
        neg = _sign_changes([c * (-1) ** i for i, c in enumerate(cp.coeffs)])
        return neg, pos

    @property
    def n(self) -> int:
        return self.g.shape[0]

    @property
    def p(self) -> int:
        return self.signature[0]

    @property
    def q(self) -> int:
        return self.signature[1]

    @property
    def exact(self) -> bool:
        return is_exact(self.g)

    @functools.cached_property
    def ginv(self) -> np.ndarray:
        return inverse(self.g)

    @functools.cached_property
    def is_canonical(self) -> bool:
        return arrays_equal(self.g, ScalarSpace.canonical(self.p, self.q, self.exact).g)

    def to_float(self) -> "ScalarSpace":
        return ScalarSpace(to_float(self.g), self.tol)

    def with_backend(self, exact: bool) -> "ScalarSpace":
        return self if exact == self.exact else (self.to_float() if not exact else ScalarSpace(to_exact(self.g)))

    def check_vector(self, x) -> np.ndarray:
        x = np.asarray(x)
        if x.shape != (self.n,):
            raise ValueError(f"vector of shape {x.shape} in a space of dimension {self.n}")
        return x

    def inner(self, x, y):
        x, y = self.check_vector(x), self.check_vector(y)
        return x @ self.g @ y

    def norm2(self, x):
        return self.inner(x, x)

    def lower(self, x) -> np.ndarray:
        """The covector g(x, .) as a row of components."""
        return self.g @ self.check_vector(x)

    def classify(self, x) -> VectorType:
        x = self.check_vector(x)
        if is_zero_array(x, self.tol, scale=1.0):
            return VectorType.ZERO
        s = sign(self.norm2(x), self.tol)
        return {1: VectorType.SPACELIKE, -1: VectorType.TIMELIKE, 0: VectorType.NULL}[s]

    def vector(self, entries) -> np.ndarray:
        return self.check_vector(vector(entries, self.exact))

    def basis(self, i: int) -> np.ndarray:
        return basis_vector(self.n, i, self.exact)

    def named(self, name: str) -> np.ndarray:
        """Basis vector ``T<i>`` or ``S<j>`` of a canonical space (1-based)."""
        m = re.fullmatch(r"([TS])(\d+)", name)
        if not m:
            raise KeyError(name)
        idx = int(m.group(2)) - 1
        if m.group(1) == "T":
            if not 0 <= idx < self.p:
                raise KeyError(name)
            return self.basis(idx)
        if not 0 <= idx < self.q:
            raise KeyError(name)
        return self.basis(self.p + idx)

    def combo(self, **coeffs) -> np.ndarray:
        """``space.combo(T1=1, S1=1)`` -> T1 + S1."""
        out = zeros(self.n, self.exact)
        for name, c in coeffs.items():
            out = out + (rational(c) if self.exact else float(c)) * self.named(name)
        return out

    def achievable(self, kind: VectorType) -> bool:
        if kind is VectorType.SPACELIKE:
            return self.q > 0
        if kind is VectorType.TIMELIKE:
            return self.p > 0
        if kind is VectorType.NULL:
            return self.p > 0 and self.q > 0
        return True

    @functools.cached_property
    def reference_null_vector(self) -> np.ndarray:
        return _rational_null_vector(self)

    def __repr__(self):
        return f"ScalarSpace(signature={self.signature}, exact={self.exact})"


def _sign_changes(coeffs) -> int:
    signs = [1 if c > 0 else -1 for c in coeffs if c != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def orthogonal_basis(space: ScalarSpace, vectors: Sequence[np.ndarray] | None = None):
    """g-orthogonal basis via indefinite Gram–Schmidt.

    Returns ``(basis, null)`` where ``null`` is a nonzero null vector met on
    the way (then ``basis`` is incomplete), else ``None``.
    """
    vectors = [space.basis(i) for i in range(space.n)] if vectors is None else list(vectors)
    basis: list[np.ndarray] = []
    norms = []
    for v in vectors:
        w = v
        for b, d in zip(basis, norms):
            w = w - (space.inner(v, b) / d) * b
        d = space.norm2(w)
        if not scalar_is_zero(d, space.tol):
            basis.append(w)
            norms.append(d)
        elif not is_zero_array(w, space.tol, 1.0):
            return basis, w
    return basis, None


def _rational_square_root(x):
    x = Q(x)
    if x < 0 or not (gmpy2.is_square(x.numerator) and gmpy2.is_square(x.denominator)):
        return None
    return Q(gmpy2.isqrt(x.numerator), gmpy2.isqrt(x.denominator))


def _rational_null_vector(space: ScalarSpace) -> np.ndarray:
    if not space.achievable(VectorType.NULL):
        raise ValueError(f"no null vectors in signature {space.signature}")
    for i in range(space.n):
        for j in range(i + 1, space.n):
            for s in (1, -1):
                v = space.basis(i) + s * space.basis(j)
                if space.classify(v) is VectorType.NULL:
                    return v
    basis, null = orthogonal_basis(space)
    if null is not None:
        return null
    norms = [space.norm2(b) for b in basis]
    if not space.exact:
        i = next(k for k, d in enumerate(norms) if d < 0)
        j = next(k for k, d in enumerate(norms) if d > 0)
        return math.sqrt(-norms[j] / norms[i]) * basis[i] + basis[j]
    for i, di in enumerate(norms):
        for j, dj in enumerate(norms):
            if di < 0 < dj:
                s = _rational_square_root(-dj / di)
                if s is not None:
                    return s * basis[i] + basis[j]
    raise ValueError("no rational null vector found for this metric")


# ---------------------------------------------------------------- sampling

MAX_DRAWS = 1000


def as_rng(seed_or_rng) -> random.Random:
    if isinstance(seed_or_rng, random.Random):
        return seed_or_rng
    if isinstance(seed_or_rng, tuple):
        # str seeds hash deterministically; tuple hashes vary per process
        seed_or_rng = "|".join(map(str, seed_or_rng))
    return random.Random(seed_or_rng)


def random_rational(rng: random.Random, exact: bool = True):
    x = Q(rng.randint(-9, 9), rng.randint(1, 9))
    return x if exact else float(x)


def random_vector(rng: random.Random, n: int, exact: bool = True) -> np.ndarray:
    return np.array([random_rational(rng, exact) for _ in range(n)], dtype=object if exact else float)


def sample_vector(space: ScalarSpace, seed_or_rng, constraint: VectorType) -> np.ndarray:
    """Random rational vector of the requested causal type.

    Non-null types are rejection sampled from entries ``a/b`` with
    ``a in [-9, 9]``, ``b in [1, 9]``.  Null vectors are almost never hit by
    rejection in dimension > 2, so they are produced from a random draw ``u``
    and a fixed rational null vector ``n0`` as ``u - g(u,u)/(2 g(u,n0)) n0``.
    """
    constraint = VectorType(constraint)
    if not space.achievable(constraint):
        raise ValueError(f"{constraint.value} vectors are unachievable in signature {space.signature}")
    rng = as_rng(seed_or_rng)
    if constraint is VectorType.ZERO:
        return zeros(space.n, space.exact)
    if constraint is VectorType.NULL:
        n0 = space.reference_null_vector
        for _ in range(MAX_DRAWS):
            u = random_vector(rng, space.n, space.exact)
            a = space.inner(u, n0)
            if scalar_is_zero(a, space.tol):
                continue
            x = u - (space.norm2(u) / (2 * a)) * n0
            if space.classify(x) is VectorType.NULL:
                return x
        raise RuntimeError("null sampling budget exceeded")
    for _ in range(MAX_DRAWS):
        x = random_vector(rng, space.n, space.exact)
        if space.classify(x) is constraint:
            return x
    raise RuntimeError(f"rejection budget of {MAX_DRAWS} draws exceeded for {constraint.value}")
