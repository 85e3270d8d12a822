"""Random valid families, isometries and isotropic subspaces for property tests.

Families are grown from small blocks with a few closure rules, each of which
keeps the generators skew-adjoint, squaring to ``c_i id`` and pairwise
anticommuting:

* tensoring with a 2-dimensional factor ``W``: ``J_i -> J_i ⊗ A`` plus one new
  generator ``id ⊗ B`` (A self-adjoint, A^2 = id, B skew-adjoint, AB = -BA);
* tensoring with a split plane and a nilpotent self-adjoint ``N`` to turn
  chosen generators into ``c = 0`` ones: ``J_i -> J_i ⊗ N``;
* direct sums of families with the same list of ``c_i``, possibly with the
  metric negated on one summand.

The result is conjugated by a random rational isometry so that the
generators are not block-structured in the standard frame.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .curvature import CliffordFamily, FamilyTerm
from .linalg import Q, ScalarSpace, as_rng, identity, inverse, matrix, random_rational, rank, zeros


@dataclass
class Block:
    g: np.ndarray                 # diagonal ±1 metric
    gens: list                    # [(c, J)]

    @property
    def n(self) -> int:
        return self.g.shape[0]

    @property
    def cs(self) -> list:
        return [c for c, _ in self.gens]


def _m(rows) -> np.ndarray:
    return matrix(rows)


_ROT = _m([[0, -1], [1, 0]])
_SWAP = _m([[0, 1], [1, 0]])
_DIAG = _m([[1, 0], [0, -1]])
_NIL = _m([[1, 1], [-1, -1]])           # self-adjoint for diag(-1, 1), squares to 0
_EUCLID = _m([[1, 0], [0, 1]])
_SPLIT = _m([[-1, 0], [0, 1]])


def _quaternions() -> list:
    # left multiplication by i, j, k on R^4
    i = _m([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])
    j = _m([[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]])
    return [(Q(-1), i), (Q(-1), j), (Q(-1), i @ j)]


def atom(kind: str, negate: bool = False) -> Block:
    """Starting blocks: 'point' (n=1, no generators), 'complex', 'product', 'quaternion'."""
    if kind == "point":
        b = Block(_m([[1]]), [])
    elif kind == "complex":
        b = Block(_EUCLID.copy(), [(Q(-1), _ROT.copy())])
    elif kind == "product":
        return Block(_SPLIT.copy(), [(Q(1), _SWAP.copy())])
    elif kind == "quaternion":
        b = Block(identity(4), _quaternions())
    else:
        raise ValueError(kind)
    if negate:
        b.g = -b.g
    return b


def double(b: Block, split: bool) -> Block:
    """Tensor with a plane; adds one generator with c = +1 (split) or -1 (euclidean)."""
    eta, B, cB = (_SPLIT, _SWAP, Q(1)) if split else (_EUCLID, _ROT, Q(-1))
    gens = [(c, np.kron(J, _DIAG)) for c, J in b.gens]
    gens.append((cB, np.kron(identity(b.n), B)))
    return Block(np.kron(b.g, eta), gens)


def nilpotent(b: Block, nil: list[int]) -> Block:
    """Tensor with a split plane; generators listed in ``nil`` get c = 0."""
    gens = [(Q(0), np.kron(J, _NIL)) if i in nil else (c, np.kron(J, identity(2)))
            for i, (c, J) in enumerate(b.gens)]
    return Block(np.kron(b.g, _SPLIT), gens)


def direct_sum(a: Block, b: Block) -> Block:
    if a.cs != b.cs:
        raise ValueError("direct sums need equal c lists")
    n = a.n + b.n

    def blockdiag(x, y):
        out = zeros((n, n))
        out[:a.n, :a.n] = x
        out[a.n:, a.n:] = y
        return out

    return Block(blockdiag(a.g, b.g), [(c, blockdiag(x, y)) for (c, x), (_, y) in zip(a.gens, b.gens)])


def negated(b: Block) -> Block:
    return Block(-b.g, [(c, J.copy()) for c, J in b.gens])


def _canonical_order(b: Block) -> Block:
    diag = [b.g[i, i] for i in range(b.n)]
    order = [i for i in range(b.n) if diag[i] < 0] + [i for i in range(b.n) if diag[i] > 0]
    P = zeros((b.n, b.n))
    for new, old in enumerate(order):
        P[old, new] = Q(1)
    return Block(P.T @ b.g @ P, [(c, P.T @ J @ P) for c, J in b.gens])


def random_isometry(space: ScalarSpace, rng, scale: int = 2) -> np.ndarray:
    """Cayley transform (I - A)^-1 (I + A) of a small g-skew A; rational and g-orthogonal."""
    n = space.n
    for _ in range(100):
        S = zeros((n, n))
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.5:
                    v = Q(rng.randint(-scale, scale), rng.randint(1, 3))
                    S[i, j], S[j, i] = v, -v
        A = space.ginv @ S
        eye = identity(n)
        if rank(eye - A) == n:
            return inverse(eye - A) @ (eye + A)
    raise RuntimeError("no invertible Cayley transform found")


def _align(a: Block, b: Block) -> tuple[Block, Block] | None:
    """Restrict two blocks to generator subsets with the same c list."""
    ga, gb, keep_a, keep_b = list(a.gens), list(b.gens), [], []
    for c, J in ga:
        for idx, (c2, J2) in enumerate(gb):
            if c2 == c:
                keep_a.append((c, J))
                keep_b.append(gb.pop(idx))
                break
    if not keep_a:
        return None
    return Block(a.g, keep_a), Block(b.g, keep_b)


def pad(b: Block, g_diag: list) -> Block:
    """Direct sum with a summand on which every generator vanishes; needs all c = 0."""
    if any(c != 0 for c in b.cs):
        raise ValueError("padding with a zero summand needs all c = 0")
    extra = Block(matrix([[Q(d) if i == j else Q(0) for j in range(len(g_diag))] for i, d in enumerate(g_diag)]),
                  [(Q(0), zeros((len(g_diag),) * 2)) for _ in b.gens])
    return direct_sum(b, extra)


def random_block(rng: random.Random, max_n: int = 10, max_m: int = 3, allow_zero_c: bool = True) -> Block:
    """A random block with 1 <= m <= max_m generators and n <= max_n."""
    for _ in range(200):
        b = _grow(rng, max_n, allow_zero_c)
        if not b.gens or b.n > max_n:
            continue
        if rng.random() < 0.4 and b.n < max_n:
            other = _grow(rng, max_n - b.n, allow_zero_c)
            pair = _align(b, other) if other.gens and other.n <= max_n - b.n else None
            if pair:
                b = direct_sum(*pair)
        if all(c == 0 for c in b.cs) and b.n < max_n and rng.random() < 0.5:
            b = pad(b, [rng.choice([-1, 1]) for _ in range(rng.randint(1, max_n - b.n))])
        if len(b.gens) > max_m:
            keep = sorted(rng.sample(range(len(b.gens)), max_m))
            b = Block(b.g, [b.gens[i] for i in keep])
        return b
    raise RuntimeError("could not build a block within the size limits")


def _grow(rng: random.Random, max_n: int, allow_zero_c: bool) -> Block:
    b = atom(rng.choice(["point", "point", "complex", "product", "quaternion"]), rng.random() < 0.3)
    steps = rng.randint(0, 3)
    for _ in range(steps):
        options = []
        if 2 * b.n <= max_n:
            options += ["double-split", "double-euclid"]
            if allow_zero_c and b.gens:
                options.append("nil")
            options.append("sum")
        if not options:
            break
        op = rng.choice(options)
        if op.startswith("double"):
            b = double(b, op == "double-split")
        elif op == "nil":
            k = rng.randint(1, len(b.gens))
            b = nilpotent(b, rng.sample(range(len(b.gens)), k))
        else:
            b = direct_sum(b, negated(b) if rng.random() < 0.5 else b)
    return b


def family_from_block(b: Block, rng: random.Random, *, conjugate: bool = True,
                      mu0=None, frame: bool = False) -> CliffordFamily:
    """Canonical-order family with random nonzero μ_i, conjugated by a random isometry.

    ``frame=True`` further moves to a random non-orthonormal frame, so the
    metric is no longer diagonal.
    """
    b = _canonical_order(b)
    p = sum(1 for i in range(b.n) if b.g[i, i] < 0)
    space = ScalarSpace.canonical(p, b.n - p)
    Js = [J for _, J in b.gens]
    if conjugate:
        U = random_isometry(space, rng)
        Uinv = inverse(U)
        Js = [Uinv @ J @ U for J in Js]
    if frame:
        while True:
            P = zeros((b.n, b.n))
            for i in range(b.n):
                for j in range(b.n):
                    P[i, j] = Q(rng.randint(-2, 2)) if i != j and rng.random() < 0.3 else (Q(1) if i == j else Q(0))
            if rank(P) == b.n:
                break
        Pinv = inverse(P)
        space = ScalarSpace(P.T @ space.g @ P)
        Js = [Pinv @ J @ P for J in Js]
    if mu0 is None:
        mu0 = random_rational(rng)
    terms = []
    for (c, _), J in zip(b.gens, Js):
        mu = Q(0)
        while mu == 0:
            mu = random_rational(rng)
        terms.append(FamilyTerm(mu, c, J))
    return CliffordFamily(space, mu0, tuple(terms))


def random_family(seed, *, max_n: int = 10, max_m: int = 3, allow_zero_c: bool = True,
                  conjugate: bool = True, frame: bool = False) -> CliffordFamily:
    """A random valid quasi-Clifford family (validated before it is returned)."""
    rng = as_rng(seed)
    b = random_block(rng, max_n, max_m, allow_zero_c)
    family = family_from_block(b, rng, conjugate=conjugate, frame=frame)
    family.require_valid()
    return family


def clifford_block(signature: tuple[int, int], rng: random.Random) -> Block:
    """A block with all c_i = -1 in signature (4, 4) or (0, 8)."""
    if signature == (0, 8):
        choices = [lambda: double(atom("quaternion"), split=False),
                   lambda: direct_sum(atom("quaternion"), atom("quaternion")),
                   lambda: double(double(atom("complex"), split=False), split=False)]
    elif signature == (4, 4):
        choices = [lambda: direct_sum(atom("quaternion"), atom("quaternion", negate=True)),
                   lambda: double(direct_sum(atom("complex"), atom("complex", negate=True)), split=False),
                   lambda: double(double(direct_sum(atom("point"), atom("point", negate=True)), split=False),
                                  split=False)]
    else:
        raise ValueError(f"no Clifford recipe for signature {signature}")
    b = rng.choice(choices)()
    if len(b.gens) > 1 and rng.random() < 0.3:
        b = Block(b.g, b.gens[:rng.randint(1, len(b.gens))])
    return b


def random_clifford_family(signature: tuple[int, int], seed) -> CliffordFamily:
    rng = as_rng(seed)
    family = family_from_block(clifford_block(signature, rng), rng)
    family.require_valid()
    return family


def random_isotropic(space: ScalarSpace, k: int, seed) -> list[np.ndarray]:
    """A random basis of a k-dimensional totally isotropic subspace."""
    if k > min(space.p, space.q):
        raise ValueError(f"no {k}-dimensional isotropic subspace in signature {space.signature}")
    if not space.is_canonical:
        raise ValueError("needs a canonical space")
    rng = as_rng(seed)
    base = [space.named(f"T{i + 1}") + space.named(f"S{i + 1}") * rng.choice([1, -1]) for i in range(k)]
    U = random_isometry(space, rng)
    vecs = [U @ v for v in base]
    while k:
        C = matrix([[rng.randint(-3, 3) for _ in range(k)] for _ in range(k)])
        if rank(C) == k:
            break
    return [sum((vecs[j] * C[i, j] for j in range(k)), zeros(space.n)) for i in range(k)]
