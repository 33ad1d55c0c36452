"""Infinite tensor products of matrix algebras, at desk scale.

Infinite tensor product vectors are described by a finite explicit prefix
plus a symbolic tail; equivalence of two such representations is decided by
the summability of the overlap deficits 1 - |<v_n, w_n>|, which the term
rule grammar makes exact.  Product states on the 2x2 sites are described by
their diagonal parameters, eventually constant, and classified into the
three factor types the theory pins down; everything else is answered
``unknown`` rather than guessed.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .errors import DimensionMismatch, DuplicateSite, NotUnit, SchemaError
from .series import (
    Const,
    TermRule,
    Verdict,
    decide_sum,
    require_bounded,
    rule_from_json,
    rule_to_json,
)

UNIT_TOL = 1e-9


def _as_complex_vector(v: Sequence) -> np.ndarray:
    return np.asarray([complex(x) for x in v], dtype=complex)


@dataclass(frozen=True)
class ConstantTail:
    """All sites beyond the prefix carry the same unit vector."""

    vector: Tuple[complex, ...]

    def __post_init__(self):
        vec = tuple(complex(x) for x in self.vector)
        norm = math.sqrt(sum(abs(x) ** 2 for x in vec))
        if abs(norm - 1.0) > 1e-12:
            raise NotUnit(f"tail vector has norm {norm}")
        object.__setattr__(self, "vector", vec)

    @property
    def dim(self) -> int:
        return len(self.vector)


@dataclass(frozen=True)
class DeficitTail:
    """Tail described by the overlap deficit 1 - |<v_n, w_n>| against the
    reference sequence it is paired with."""

    rule: TermRule
    dim: int


Tail = Union[ConstantTail, DeficitTail]


@dataclass(frozen=True)
class VectorSequence:
    """Unit vector per site: explicit prefix, symbolic tail."""

    prefix: Tuple[Tuple[complex, ...], ...]
    tail: Tail

    def __post_init__(self):
        rows = []
        for v in self.prefix:
            vec = tuple(complex(x) for x in v)
            norm = math.sqrt(sum(abs(x) ** 2 for x in vec))
            if abs(norm - 1.0) > 1e-12:
                raise NotUnit(f"prefix vector {v!r} has norm {norm}")
            rows.append(vec)
        object.__setattr__(self, "prefix", tuple(rows))

    @property
    def tail_dim(self) -> int:
        return self.tail.dim


def projective_distance(v: Sequence, w: Sequence) -> float:
    """Distance between the rays of two unit vectors.

    The square is twice the overlap deficit: d([v],[w])^2 = 2(1 - |<v,w>|).
    """
    va, wa = _as_complex_vector(v), _as_complex_vector(w)
    if va.shape != wa.shape:
        raise DimensionMismatch(f"vector dimensions differ: {va.shape} vs {wa.shape}")
    for name, x in (("first", va), ("second", wa)):
        norm = float(np.linalg.norm(x))
        if abs(norm - 1.0) > UNIT_TOL:
            raise NotUnit(f"{name} vector has norm {norm}")
    deficit = max(0.0, 1.0 - abs(complex(np.vdot(va, wa))))
    return math.sqrt(2.0 * deficit)


def itp_equivalent(v: VectorSequence, w: VectorSequence) -> Verdict:
    """Unitary equivalence of the two infinite tensor product representations.

    Holds exactly when the overlap deficits are summable; the finite prefix
    contributes exactly, the tails symbolically.  Two rule-described tails
    with no common reference escape the grammar and give ``unknown``.
    """
    if len(v.prefix) != len(w.prefix):
        raise DimensionMismatch("prefix lengths differ")
    for a, b in zip(v.prefix, w.prefix):
        if len(a) != len(b):
            raise DimensionMismatch("site dimensions differ in the prefix")
    if v.tail_dim != w.tail_dim:
        raise DimensionMismatch("tail dimensions differ")

    prefix_deficits = [
        max(0.0, 1.0 - abs(complex(np.vdot(_as_complex_vector(a), _as_complex_vector(b)))))
        for a, b in zip(v.prefix, w.prefix)
    ]
    prefix_sum = float(sum(prefix_deficits))

    if v == w:
        return Verdict("holds", bound=prefix_sum)
    if isinstance(v.tail, ConstantTail) and isinstance(w.tail, ConstantTail):
        overlap = abs(
            complex(np.vdot(_as_complex_vector(v.tail.vector), _as_complex_vector(w.tail.vector)))
        )
        tail_rule: TermRule = Const(max(0.0, 1.0 - overlap))
    elif isinstance(v.tail, DeficitTail) and isinstance(w.tail, ConstantTail):
        tail_rule = v.tail.rule
    elif isinstance(v.tail, ConstantTail) and isinstance(w.tail, DeficitTail):
        tail_rule = w.tail.rule
    else:
        assert isinstance(v.tail, DeficitTail) and isinstance(w.tail, DeficitTail)
        if v.tail.rule == w.tail.rule and not v.prefix and not w.prefix:
            return Verdict("holds", bound=0.0)
        return Verdict(
            "unknown",
            partial_sum=prefix_sum,
            terms_examined=len(v.prefix),
        )
    return decide_sum(tail_rule, extra_terms=prefix_sum)


class FactorType(enum.Enum):
    TYPE_I = "I"
    TYPE_II1 = "II1"
    TYPE_III = "III"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class ProductState:
    """Diagonal parameters p_n in [0, 1/2]: explicit prefix, constant tail."""

    prefix: Tuple[float, ...]
    tail: float

    def __post_init__(self):
        prefix = tuple(float(x) for x in self.prefix)
        tail = float(self.tail)
        for x in prefix + (tail,):
            if not 0.0 <= x <= 0.5:
                raise SchemaError(f"diagonal parameter {x} outside [0, 1/2]")
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "tail", tail)

    @staticmethod
    def constant(value: float) -> "ProductState":
        return ProductState((), value)

    def parameter(self, n: int) -> float:
        if n < 1:
            raise ValueError("sites are indexed from 1")
        return self.prefix[n - 1] if n <= len(self.prefix) else self.tail


def powers_factor_type(state: ProductState) -> FactorType:
    """Factor type of the infinite product state.

    Decided by the eventual parameter only: 0 gives type I (pure up to a
    finite factor), 1/2 gives the type II_1 trace, a constant strictly
    between them satisfies the separation condition for type III.  The
    grammar admits no other tails, so ``unknown`` is never produced for a
    valid state; the member exists because the classification outside these
    three regimes is not decided here.
    """
    if state.tail == 0.0:
        return FactorType.TYPE_I
    if state.tail == 0.5:
        return FactorType.TYPE_II1
    if 0.0 < state.tail < 0.5:
        return FactorType.TYPE_III
    return FactorType.UNKNOWN


def state_eval(state: ProductState, ops: Sequence[Tuple[int, Sequence[Sequence[complex]]]]) -> complex:
    """Value of the product state on a finitely supported operator.

    Each listed site contributes p_n * a + (1 - p_n) * d for its 2x2 matrix
    [[a, b], [c, d]]; unlisted sites contribute phi_n(identity) = 1.
    """
    seen = set()
    result = complex(1.0)
    for site, mat in ops:
        if site in seen:
            raise DuplicateSite(f"site {site} listed twice")
        seen.add(site)
        m = np.asarray(mat, dtype=complex)
        if m.shape != (2, 2):
            raise DimensionMismatch(f"site operators must be 2x2, got {m.shape}")
        p = state.parameter(site)
        result *= p * m[0, 0] + (1.0 - p) * m[1, 1]
    return result


def l1_embedding_bound(norm_rule: TermRule) -> Verdict:
    """Boundedness certificate for the summable-tail embedding.

    The embedding norm is at most the sup of the per-site representation
    norms, so any rule in the grammar with bounded terms certifies
    boundedness; rules with unbounded terms are rejected outright since they
    leave the hypothesis sup-norm < infinity.
    """
    return Verdict("holds", bound=require_bounded(norm_rule))


# ---------------------------------------------------------------------------
# serialization


def _vec_to_json(v: Sequence[complex]) -> list:
    return [[x.real, x.imag] for x in (complex(y) for y in v)]


def _vec_from_json(data) -> Tuple[complex, ...]:
    out = []
    for item in data:
        if isinstance(item, (int, float)):
            out.append(complex(item))
        elif isinstance(item, (list, tuple)) and len(item) == 2:
            out.append(complex(item[0], item[1]))
        else:
            raise SchemaError(f"bad vector entry {item!r}")
    return tuple(out)


def vector_sequence_to_json(seq: VectorSequence) -> dict:
    if isinstance(seq.tail, ConstantTail):
        tail = {"kind": "constant", "vector": _vec_to_json(seq.tail.vector)}
    else:
        tail = {"kind": "deficit", "rule": rule_to_json(seq.tail.rule), "dim": seq.tail.dim}
    return {"prefix": [_vec_to_json(v) for v in seq.prefix], "tail": tail}


def vector_sequence_from_json(data: dict) -> VectorSequence:
    if not isinstance(data, dict):
        raise SchemaError("vector sequence must be a JSON object")
    try:
        prefix = tuple(_vec_from_json(v) for v in data.get("prefix", []))
        tail_data = data["tail"]
        kind = tail_data["kind"]
        if kind == "constant":
            tail: Tail = ConstantTail(_vec_from_json(tail_data["vector"]))
        elif kind == "deficit":
            tail = DeficitTail(rule_from_json(tail_data["rule"]), int(tail_data["dim"]))
        else:
            raise SchemaError(f"unknown tail kind {kind!r}")
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad vector sequence: {exc}") from exc
    return VectorSequence(prefix, tail)


def product_state_to_json(state: ProductState) -> dict:
    return {"prefix": list(state.prefix), "tail": state.tail}


def product_state_from_json(data: dict) -> ProductState:
    if not isinstance(data, dict) or "tail" not in data:
        raise SchemaError("product state needs a 'tail' parameter")
    try:
        return ProductState(tuple(float(x) for x in data.get("prefix", [])), float(data["tail"]))
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"bad product state: {exc}") from exc
