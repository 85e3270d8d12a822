"""JSON problem files.

A problem file describes either a family ``mu0 R^0 + Σ mu_i R^{J_i}`` or a
dense tensor, plus optional named vectors::

    {
      "signature": [4, 5],
      "metric": [["-1", "0", ...], ...],          # optional, default canonical
      "mu0": "0",
      "terms": [{"mu": "1", "c": "0", "J": [["0", ...], ...]}],
      "tensor": [[[["0", ...]]]],                  # optional dense override
      "vectors": {"T1": ["1", "0", ...]}
    }

Every scalar is a rational string ``a`` or ``a/b``; floats are rejected so
that a file always means the same exact object.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .curvature import CliffordFamily, DenseCurvature, FamilyTerm
from .linalg import ScalarSpace, format_rational, parse_rational
from .spectral import Model


class ProblemError(ValueError):
    """The file does not parse into a well-formed problem."""


@dataclass
class Problem:
    space: ScalarSpace
    family: CliffordFamily | None = None
    dense: DenseCurvature | None = None
    vectors: dict = field(default_factory=dict)

    @property
    def model(self) -> Model:
        return self.dense if self.dense is not None else self.family

    def with_backend(self, exact: bool) -> "Problem":
        if exact:
            return self
        space = self.space.to_float()
        return Problem(
            space,
            self.family.with_backend(False) if self.family is not None else None,
            DenseCurvature(space, self.dense.entries.astype(float)) if self.dense is not None else None,
            {k: v.astype(float) for k, v in self.vectors.items()},
        )


def _scalar(value, where: str):
    if not isinstance(value, str):
        raise ProblemError(f"{where}: expected a rational string, got {json.dumps(value)}")
    try:
        return parse_rational(value)
    except ValueError as exc:
        raise ProblemError(f"{where}: {exc}") from None


def _grid(value, shape: tuple, where: str) -> np.ndarray:
    arr = np.empty(shape, dtype=object)

    def fill(v, idx):
        depth = len(idx)
        if depth == len(shape):
            arr[idx] = _scalar(v, f"{where}{list(idx)}")
            return
        if not isinstance(v, list) or len(v) != shape[depth]:
            raise ProblemError(f"{where}: expected shape {shape}")
        for i, item in enumerate(v):
            fill(item, idx + (i,))

    fill(value, ())
    return arr


def _int_pair(value) -> tuple[int, int]:
    if (not isinstance(value, list) or len(value) != 2
            or not all(isinstance(v, int) and not isinstance(v, bool) and v >= 0 for v in value)):
        raise ProblemError("signature: expected [p, q] with non-negative integers")
    return value[0], value[1]


def parse_problem(data: dict) -> Problem:
    if not isinstance(data, dict):
        raise ProblemError("top level must be an object")
    unknown = set(data) - {"signature", "metric", "mu0", "terms", "tensor", "vectors"}
    if unknown:
        raise ProblemError(f"unknown keys: {', '.join(sorted(unknown))}")
    if "signature" not in data:
        raise ProblemError("missing signature")
    p, q = _int_pair(data["signature"])
    n = p + q
    if n == 0:
        raise ProblemError("signature (0, 0) has no vectors")
    try:
        if "metric" in data:
            space = ScalarSpace(_grid(data["metric"], (n, n), "metric"))
            if space.signature != (p, q):
                raise ProblemError(f"metric has signature {space.signature}, file says {(p, q)}")
        else:
            space = ScalarSpace.canonical(p, q)
    except ProblemError:
        raise
    except ValueError as exc:
        raise ProblemError(f"metric: {exc}") from None

    family = dense = None
    if "tensor" in data:
        dense = DenseCurvature(space, _grid(data["tensor"], (n,) * 4, "tensor"))
    if "mu0" in data or "terms" in data:
        terms = data.get("terms", [])
        if not isinstance(terms, list):
            raise ProblemError("terms must be a list")
        parsed = []
        for i, t in enumerate(terms):
            where = f"terms[{i}]"
            if not isinstance(t, dict) or set(t) != {"mu", "c", "J"}:
                raise ProblemError(f"{where}: expected an object with keys mu, c, J")
            parsed.append(FamilyTerm(_scalar(t["mu"], f"{where}.mu"), _scalar(t["c"], f"{where}.c"),
                                     _grid(t["J"], (n, n), f"{where}.J")))
        try:
            family = CliffordFamily(space, _scalar(data.get("mu0", "0"), "mu0"), tuple(parsed))
        except ValueError as exc:
            raise ProblemError(str(exc)) from None
    if family is None and dense is None:
        raise ProblemError("need terms/mu0 or a tensor")

    vectors = {}
    raw = data.get("vectors", {})
    if not isinstance(raw, dict):
        raise ProblemError("vectors must be an object")
    for name, v in raw.items():
        vectors[name] = _grid(v, (n,), f"vectors.{name}")
    return Problem(space, family, dense, vectors)


def load_problem(path) -> Problem:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ProblemError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    return parse_problem(data)


def strings(a) -> list:
    """Nested lists of rational strings."""
    a = np.asarray(a)
    if a.ndim == 0:
        return format_rational(a.item())
    return [strings(x) for x in a]


def serialize_problem(problem: Problem) -> dict:
    space = problem.space
    out: dict = {"signature": list(space.signature)}
    if not space.is_canonical:
        out["metric"] = strings(space.g)
    if problem.family is not None:
        f = problem.family
        out["mu0"] = format_rational(f.mu0)
        out["terms"] = [{"mu": format_rational(t.mu), "c": format_rational(t.c), "J": strings(t.J)}
                        for t in f.terms]
    if problem.dense is not None:
        out["tensor"] = strings(problem.dense.entries)
    if problem.vectors:
        out["vectors"] = {k: strings(v) for k, v in problem.vectors.items()}
    return out


def format_json(obj, level: int = 0) -> str:
    # innermost lists stay on one line, so matrices read row by row
    pad, inner = "  " * level, "  " * (level + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(k, ensure_ascii=False)}: {format_json(v, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list) and any(isinstance(x, (list, dict)) for x in obj):
        return "[\n" + ",\n".join(inner + format_json(x, level + 1) for x in obj) + "\n" + pad + "]"
    return json.dumps(obj, ensure_ascii=False)


def dumps(problem: Problem) -> str:
    return format_json(serialize_problem(problem)) + "\n"


def save_problem(problem: Problem, path) -> None:
    Path(path).write_text(dumps(problem), encoding="utf-8")
