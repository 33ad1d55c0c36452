"""Closed-form nonnegative sequences with decidable summability.

Summability of a black-box sequence is undecidable, so every sequence that
feeds a convergence decision is spelled in a small closed-form grammar:
constants, powers c*n^(-p), geometric terms c*q^n with 0 <= q < 1, finite
prefixes followed by zeros, and finite modifications of any of these.  On
this grammar the comparison facts are classical (a p-series converges
exactly when p > 1, a geometric series always, finitely many terms never
matter), which makes the decisions exact rather than numeric.

Decisions are reported as a :class:`Verdict`: ``holds`` carries a certified
upper bound for the sum, ``fails`` carries the divergence class, and
``unknown`` is reserved for inputs that escape the grammar, with the partial
evidence inspected so far.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple, Union

from .errors import SchemaError, UnboundedRule


@dataclass(frozen=True)
class Const:
    c: float

    def __post_init__(self):
        if self.c < 0:
            raise SchemaError(f"constant term {self.c} is negative")


@dataclass(frozen=True)
class Power:
    """Terms c * n**(-p); p may be negative, giving polynomial growth."""

    c: float
    p: float

    def __post_init__(self):
        if self.c < 0:
            raise SchemaError(f"power coefficient {self.c} is negative")


@dataclass(frozen=True)
class Geometric:
    """Terms c * q**n with 0 <= q < 1."""

    c: float
    q: float

    def __post_init__(self):
        if self.c < 0:
            raise SchemaError(f"geometric coefficient {self.c} is negative")
        if not 0 <= self.q < 1:
            raise SchemaError(f"geometric ratio must be in [0, 1), got {self.q}")


@dataclass(frozen=True)
class EventuallyZero:
    prefix: Tuple[float, ...]

    def __post_init__(self):
        prefix = tuple(float(x) for x in self.prefix)
        if any(x < 0 for x in prefix):
            raise SchemaError("prefix terms must be nonnegative")
        object.__setattr__(self, "prefix", prefix)


@dataclass(frozen=True)
class FinitelyModified:
    base: "TermRule"
    overrides: Tuple[Tuple[int, float], ...]

    def __post_init__(self):
        ov = tuple(sorted((int(n), float(v)) for n, v in dict(self.overrides).items()))
        if any(n < 1 for n, _ in ov):
            raise SchemaError("override positions are 1-based")
        if any(v < 0 for _, v in ov):
            raise SchemaError("override values must be nonnegative")
        object.__setattr__(self, "overrides", ov)


TermRule = Union[Const, Power, Geometric, EventuallyZero, FinitelyModified]


def term(rule: TermRule, n: int) -> float:
    """Value of the n-th term, n >= 1."""
    if n < 1:
        raise ValueError("terms are indexed from 1")
    if isinstance(rule, Const):
        return rule.c
    if isinstance(rule, Power):
        return rule.c * float(n) ** (-rule.p)
    if isinstance(rule, Geometric):
        return rule.c * rule.q**n
    if isinstance(rule, EventuallyZero):
        return rule.prefix[n - 1] if n <= len(rule.prefix) else 0.0
    if isinstance(rule, FinitelyModified):
        for pos, val in rule.overrides:
            if pos == n:
                return val
        return term(rule.base, n)
    raise TypeError(f"not a term rule: {rule!r}")


@dataclass(frozen=True)
class _Tail:
    """Eventual behavior c * q**n * n**(-p) from some cutoff on."""

    c: float
    q: float
    p: float
    cutoff: int  # tail formula valid for n > cutoff


def _tail(rule: TermRule) -> _Tail:
    if isinstance(rule, Const):
        return _Tail(rule.c, 1.0, 0.0, 0)
    if isinstance(rule, Power):
        return _Tail(rule.c, 1.0, rule.p, 0)
    if isinstance(rule, Geometric):
        return _Tail(rule.c, rule.q, 0.0, 0)
    if isinstance(rule, EventuallyZero):
        return _Tail(0.0, 1.0, 0.0, len(rule.prefix))
    if isinstance(rule, FinitelyModified):
        base = _tail(rule.base)
        last = max((n for n, _ in rule.overrides), default=0)
        return _Tail(base.c, base.q, base.p, max(base.cutoff, last))
    raise TypeError(f"not a term rule: {rule!r}")


def _tail_converges(t: _Tail) -> bool:
    if t.c == 0 or t.q == 0:
        return True
    if t.q < 1:
        return True
    return t.p > 1


def _tail_divergence_class(t: _Tail) -> str:
    if t.p <= 0:
        return "terms do not tend to zero"
    return f"p-series with exponent {t.p} <= 1"


def _tail_sum_bound(t: _Tail) -> float:
    """Certified upper bound for the tail sum over n > cutoff."""
    if t.c == 0 or t.q == 0:
        return 0.0
    start = t.cutoff + 1
    if t.q == 1:
        # integral comparison for the p-series, p > 1
        return t.c * (start ** (-t.p) + start ** (1 - t.p) / (t.p - 1))
    if t.p >= 0:
        # n**(-p) <= start**(-p) for n >= start
        return t.c * (start ** (-t.p)) * t.q**start / (1 - t.q)
    # geometric with polynomial growth: find where the ratio drops below
    # (1 + q) / 2 < 1, sum the head exactly and bound the rest geometrically
    m = -t.p
    ratio_cap = (1 + t.q) / 2
    n0 = start
    while t.q * ((n0 + 1) / n0) ** m >= ratio_cap:
        n0 *= 2
    head = sum(t.c * t.q**n * n**m for n in range(start, n0 + 1))
    last = t.c * t.q**n0 * n0**m
    return head + last * ratio_cap / (1 - ratio_cap)


def sum_converges(rule: TermRule) -> bool:
    return _tail_converges(_tail(rule))


def divergence_class(rule: TermRule) -> str:
    return _tail_divergence_class(_tail(rule))


def sum_upper_bound(rule: TermRule) -> float:
    """Upper bound for the full sum; only meaningful when it converges."""
    t = _tail(rule)
    head = sum(term(rule, n) for n in range(1, t.cutoff + 1))
    return head + _tail_sum_bound(t)


def sup_bound(rule: TermRule) -> Optional[float]:
    """Upper bound for sup of the terms, or None when unbounded."""
    t = _tail(rule)
    if t.c > 0 and t.q >= 1 and t.p < 0:
        return None
    head = max((term(rule, n) for n in range(1, t.cutoff + 1)), default=0.0)
    if t.c == 0 or t.q == 0:
        tail_sup = 0.0
    elif t.q < 1:
        if t.p >= 0:
            tail_sup = t.c * t.q ** (t.cutoff + 1) * (t.cutoff + 1) ** (-t.p)
        else:
            m = -t.p
            # maximize q**n * n**m at n ~ m / ln(1/q)
            n_star = max(t.cutoff + 1, int(math.ceil(m / math.log(1 / t.q))) if t.q > 0 else t.cutoff + 1)
            tail_sup = max(
                t.c * t.q**n * n**m for n in range(t.cutoff + 1, n_star + 2)
            )
    else:
        tail_sup = t.c * (t.cutoff + 1) ** (-t.p)
    return max(head, tail_sup)


def always_positive(rule: TermRule) -> bool:
    """Whether every term of the rule is strictly positive."""
    if isinstance(rule, (Const, Power)):
        return rule.c > 0
    if isinstance(rule, Geometric):
        return rule.c > 0 and rule.q > 0
    if isinstance(rule, EventuallyZero):
        return False
    if isinstance(rule, FinitelyModified):
        return always_positive(rule.base) and all(v > 0 for _, v in rule.overrides)
    raise TypeError(f"not a term rule: {rule!r}")


def scaled(rule: TermRule, factor: float) -> TermRule:
    """The rule with every term multiplied by a nonnegative factor."""
    if factor < 0:
        raise SchemaError("scale factor must be nonnegative")
    if isinstance(rule, Const):
        return Const(rule.c * factor)
    if isinstance(rule, Power):
        return Power(rule.c * factor, rule.p)
    if isinstance(rule, Geometric):
        return Geometric(rule.c * factor, rule.q)
    if isinstance(rule, EventuallyZero):
        return EventuallyZero(tuple(x * factor for x in rule.prefix))
    if isinstance(rule, FinitelyModified):
        return FinitelyModified(
            scaled(rule.base, factor),
            tuple((n, v * factor) for n, v in rule.overrides),
        )
    raise TypeError(f"not a term rule: {rule!r}")


def decide_product_sum(a: TermRule, b: TermRule, k: int) -> "Verdict":
    """Verdict on the summability of the termwise product a_n * b_n**k.

    The eventual behaviors multiply inside the grammar: powers add their
    exponents k-fold, geometric ratios multiply, and a geometric factor with
    ratio below one dominates any polynomial part.  Finite prefixes
    contribute exactly.
    """
    if k < 0:
        raise SchemaError("power k must be nonnegative")
    ta, tb = _tail(a), _tail(b)
    cutoff = max(ta.cutoff, tb.cutoff)
    tail = _Tail(ta.c * tb.c**k, ta.q * tb.q**k, ta.p + k * tb.p, cutoff)
    prefix = sum(term(a, n) * term(b, n) ** k for n in range(1, cutoff + 1))
    if _tail_converges(tail):
        return Verdict("holds", bound=prefix + _tail_sum_bound(tail))
    return Verdict("fails", witness=_tail_divergence_class(tail))


@dataclass(frozen=True)
class Verdict:
    """Three-valued outcome of a series decision."""

    status: str  # "holds" | "fails" | "unknown"
    bound: Optional[float] = None
    witness: Optional[str] = None
    partial_sum: Optional[float] = None
    terms_examined: Optional[int] = None

    def __post_init__(self):
        if self.status not in ("holds", "fails", "unknown"):
            raise ValueError(f"bad verdict status {self.status!r}")

    @property
    def holds(self) -> bool:
        return self.status == "holds"

    @property
    def fails(self) -> bool:
        return self.status == "fails"

    @property
    def unknown(self) -> bool:
        return self.status == "unknown"

    def to_json(self) -> dict:
        out: dict = {"verdict": self.status}
        if self.bound is not None:
            out["bound"] = self.bound
        if self.witness is not None:
            out["witness"] = self.witness
        if self.partial_sum is not None:
            out["partial_sum"] = self.partial_sum
        if self.terms_examined is not None:
            out["terms_examined"] = self.terms_examined
        return out


def decide_sum(rule: TermRule, extra_terms: float = 0.0) -> Verdict:
    """Verdict on summability of the rule plus an exact extra contribution."""
    if sum_converges(rule):
        return Verdict("holds", bound=sum_upper_bound(rule) + extra_terms)
    return Verdict("fails", witness=divergence_class(rule))


# ---------------------------------------------------------------------------
# serialization


def rule_to_json(rule: TermRule) -> dict:
    if isinstance(rule, Const):
        return {"kind": "const", "c": rule.c}
    if isinstance(rule, Power):
        return {"kind": "power", "c": rule.c, "p": rule.p}
    if isinstance(rule, Geometric):
        return {"kind": "geometric", "c": rule.c, "q": rule.q}
    if isinstance(rule, EventuallyZero):
        return {"kind": "eventually_zero", "prefix": list(rule.prefix)}
    if isinstance(rule, FinitelyModified):
        return {
            "kind": "finitely_modified",
            "base": rule_to_json(rule.base),
            "overrides": {str(n): v for n, v in rule.overrides},
        }
    raise TypeError(f"not a term rule: {rule!r}")


def rule_from_json(data: dict) -> TermRule:
    if not isinstance(data, dict) or "kind" not in data:
        raise SchemaError(f"term rule must be an object with a 'kind': {data!r}")
    kind = data["kind"]
    try:
        if kind == "const":
            return Const(float(data["c"]))
        if kind == "power":
            return Power(float(data["c"]), float(data["p"]))
        if kind == "geometric":
            return Geometric(float(data["c"]), float(data["q"]))
        if kind == "eventually_zero":
            return EventuallyZero(tuple(float(x) for x in data["prefix"]))
        if kind == "finitely_modified":
            overrides = tuple(
                (int(n), float(v)) for n, v in data["overrides"].items()
            )
            return FinitelyModified(rule_from_json(data["base"]), overrides)
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad {kind} rule: {exc}") from exc
    raise SchemaError(f"unknown term rule kind {kind!r}")


def parse_rule(text: str) -> TermRule:
    """Compact command line syntax, e.g. power:1,2 or const:0.5."""
    kind, _, rest = text.partition(":")
    args = [x for x in rest.split(",") if x] if rest else []
    try:
        if kind == "const":
            return Const(float(args[0]))
        if kind == "power":
            return Power(float(args[0]), float(args[1]))
        if kind == "geometric":
            return Geometric(float(args[0]), float(args[1]))
        if kind == "zeros" or kind == "eventually_zero":
            return EventuallyZero(tuple(float(x) for x in args))
    except (IndexError, ValueError) as exc:
        raise SchemaError(f"bad rule shorthand {text!r}: {exc}") from exc
    raise SchemaError(f"unknown rule shorthand {text!r}")


def require_bounded(rule: TermRule) -> float:
    """Sup bound of the rule, rejecting rules with unbounded terms."""
    sup = sup_bound(rule)
    if sup is None:
        raise UnboundedRule(f"rule {rule!r} has unbounded terms")
    return sup
