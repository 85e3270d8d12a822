"""Osserman and Jordan-Osserman decisions.

A structured family can be *certified* (quasi-Clifford tensors are Osserman).
Anything else is decided by exact sampling, which can refute a property with
a witness pair but only accumulates evidence for it.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .curvature import CliffordFamily
from .linalg import Poly, ScalarSpace, VectorType, as_rng, sample_vector
from .spectral import Model, char_poly, jacobi_of, spectral

DEFAULT_SAMPLES = 64


class Outcome(str, enum.Enum):
    CERTIFIED = "certified-true"
    CONSISTENT = "consistent"
    FALSE = "false"


@dataclass
class Verdict:
    property: str
    outcome: Outcome
    reason: str = ""
    witnesses: list = field(default_factory=list)
    samples: int = 0
    seed: int | None = None
    charpoly: Poly | None = None
    details: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.outcome is not Outcome.FALSE

    def __str__(self):
        s = f"{self.property}: {self.outcome.value}"
        if self.outcome is Outcome.CONSISTENT:
            s += f" ({self.samples} samples, seed {self.seed})"
        if self.reason:
            s += f" - {self.reason}"
        return s


def probe_vectors(space: ScalarSpace, kind: VectorType, limit: int | None = None) -> list[np.ndarray]:
    """Deterministic structured vectors of one causal type: e_i, then e_i ± e_j.

    Random rational draws almost never land in special subspaces (kernels of
    the generating endomorphisms, eigenspaces of product structures), which
    is exactly where the interesting behaviour of these tensors sits.
    """
    limit = 2 * space.n if limit is None else limit
    out = []
    singles = (space.basis(i) for i in range(space.n))
    pairs = (space.basis(i) + s * space.basis(j)
             for i, j in itertools.combinations(range(space.n), 2) for s in (1, -1))
    for v in itertools.chain(singles, pairs):
        if len(out) >= limit:
            break
        if space.classify(v) is kind:
            out.append(v)
    return out


def sample_plan(space: ScalarSpace, kind: VectorType, samples: int, seed, *,
                probes: bool = True, extra: Sequence[np.ndarray] = ()) -> Iterator[np.ndarray]:
    """Extra vectors of the right type, probes, then ``samples`` seeded random draws."""
    if not space.achievable(kind):
        return
    for v in extra:
        if space.classify(v) is kind:
            yield v
    if probes:
        yield from probe_vectors(space, kind)
    rng = as_rng(seed)
    for _ in range(samples):
        yield sample_vector(space, rng, kind)


def nonnull_kinds(space: ScalarSpace) -> list[VectorType]:
    return [k for k in (VectorType.SPACELIKE, VectorType.TIMELIKE) if space.achievable(k)]


def _space(model: Model) -> ScalarSpace:
    return model.space


def certify_osserman(family: CliffordFamily) -> Verdict:
    report = family.report
    if not report.ok:
        raise ValueError("cannot certify: " + "; ".join(c.describe() for c in report.failures))
    return Verdict(
        "osserman", Outcome.CERTIFIED,
        reason=f"{report.kind} family (k={family.k}, m={family.m}) satisfies the Hurwitz relations",
        charpoly=family.predicted_charpoly(),
    )


def check_osserman(model: Model, mode: str = "sample", samples: int = DEFAULT_SAMPLES, seed=0, *,
                   probes: bool = True, extra: Sequence[np.ndarray] = ()) -> Verdict:
    """Osserman: the normalised characteristic polynomial is the same for all nonnull X."""
    if mode == "certify":
        if not isinstance(model, CliffordFamily):
            raise TypeError("certify mode needs a CliffordFamily")
        return certify_osserman(model)
    if mode != "sample":
        raise ValueError(f"unknown mode {mode!r}")
    space = _space(model)
    ref = ref_x = None
    count = 0
    for kind in nonnull_kinds(space):
        for x in sample_plan(space, kind, samples, (seed, kind.value), probes=probes, extra=extra):
            count += 1
            p = char_poly(jacobi_of(model, x))
            if ref is None:
                ref, ref_x = p, x
            elif not p.close_to(ref, space.tol):
                return Verdict("osserman", Outcome.FALSE, reason="characteristic polynomials differ",
                               witnesses=[ref_x, x], samples=count, seed=seed,
                               details={"charpolys": [ref, p]})
    return Verdict("osserman", Outcome.CONSISTENT, samples=count, seed=seed, charpoly=ref)


def _charpoly_set(model: Model, kind: VectorType, samples: int, seed, probes: bool):
    space = _space(model)
    out = []
    for x in sample_plan(space, kind, samples, (seed, kind.value), probes=probes):
        out.append((x, char_poly(jacobi_of(model, x))))
    return out


def check_osserman_equivalence(model: Model, samples: int = DEFAULT_SAMPLES, seed=0, *,
                               probes: bool = True) -> Verdict:
    """Compare the spacelike and the timelike characteristic polynomials."""
    space = _space(model)
    if space.p == 0 or space.q == 0:
        raise ValueError(f"signature {space.signature} is one-sided; both vector types are needed")
    tol = space.tol
    sets = {k: _charpoly_set(model, k, samples, seed, probes) for k in (VectorType.SPACELIKE, VectorType.TIMELIKE)}
    count = sum(len(v) for v in sets.values())
    for kind, entries in sets.items():
        x0, p0 = entries[0]
        for x, p in entries[1:]:
            if not p.close_to(p0, tol):
                return Verdict("osserman-equivalence", Outcome.FALSE,
                               reason=f"mismatch within the {kind.value} set", witnesses=[x0, x],
                               samples=count, seed=seed, details={"side": kind.value, "charpolys": [p0, p]})
    (xs, ps), (xt, pt) = sets[VectorType.SPACELIKE][0], sets[VectorType.TIMELIKE][0]
    if not ps.close_to(pt, tol):
        return Verdict("osserman-equivalence", Outcome.FALSE, reason="spacelike and timelike sets disagree",
                       witnesses=[xs, xt], samples=count, seed=seed, details={"charpolys": [ps, pt]})
    return Verdict("osserman-equivalence", Outcome.CONSISTENT, reason="spacelike and timelike sets agree",
                   samples=count, seed=seed, charpoly=ps)


def check_jordan_osserman(model: Model, side: str | VectorType, samples: int = DEFAULT_SAMPLES, seed=0, *,
                          probes: bool = True, extra: Sequence[np.ndarray] = ()) -> Verdict:
    """Jordan-Osserman on one side: the Jordan structure of J_X/ε_X is constant.

    Raises :class:`~osserman.spectral.IrrationalSpectrum` when a sampled
    operator has eigenvalues outside the rationals.
    """
    side = VectorType(side)
    if side not in (VectorType.SPACELIKE, VectorType.TIMELIKE):
        raise ValueError("side must be spacelike or timelike")
    space = _space(model)
    if not space.achievable(side):
        raise ValueError(f"no {side.value} vectors in signature {space.signature}")
    name = f"{side.value} jordan-osserman"
    ref = ref_x = None
    count = 0
    for x in sample_plan(space, side, samples, (seed, side.value), probes=probes, extra=extra):
        count += 1
        sig = spectral(jacobi_of(model, x)).signature()
        if ref is None:
            ref, ref_x = sig, x
        elif sig != ref:
            return Verdict(name, Outcome.FALSE, reason="Jordan structures differ", witnesses=[ref_x, x],
                           samples=count, seed=seed, details={"jordan": [dict(ref), dict(sig)]})
    return Verdict(name, Outcome.CONSISTENT, samples=count, seed=seed, details={"jordan": dict(ref or ())})
