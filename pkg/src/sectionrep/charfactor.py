"""Factor multiplicative polynomial functionals on C^m into characters.

The characters of C^m are exactly the coordinate projections, so a
multiplicative polynomial of degree N factors as a product of N coordinate
projections with multiplicities, and recovering the multiset is a matter of
reading off exponents.  Evaluating at 1 + e_i gives 2^(multiplicity of i)
for a genuine character product, which recovers each exponent from one
evaluation; everything is then verified on random samples so that black-box
evaluators are handled honestly (polynomial identity testing: a nonzero
polynomial vanishes on random points with negligible probability).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Mapping, Optional, Sequence, Tuple

import numpy as np

from . import DEFAULT_SEED
from .errors import (
    DimensionMismatch,
    InconsistentDegree,
    NonIntegerExponent,
    NotMultiplicative,
    SchemaError,
)
from .evalrep import FiniteInvolutiveAlgebra

RELATIVE_TOL = 1e-9
EXPONENT_TOL = 1e-6

CharacterMultiset = Dict[int, int]


@dataclass
class MultiplicativePolynomial:
    """Polynomial map C^m -> C, claimed to be multiplicative of degree N."""

    m: int
    degree: int
    evaluator: Callable[[Sequence[complex]], complex]
    monomials: Optional[Tuple[Tuple[Tuple[int, ...], complex], ...]] = None

    def __call__(self, a: Sequence[complex]) -> complex:
        if len(a) != self.m:
            raise DimensionMismatch(f"expected {self.m} coordinates, got {len(a)}")
        return complex(self.evaluator(a))

    @staticmethod
    def from_monomials(
        m: int,
        monomials: Sequence[Tuple[Sequence[int], complex]],
        degree: Optional[int] = None,
    ) -> "MultiplicativePolynomial":
        table = tuple(
            (tuple(int(e) for e in exps), complex(coeff)) for exps, coeff in monomials
        )
        for exps, _ in table:
            if len(exps) != m or any(e < 0 for e in exps):
                raise SchemaError(f"bad exponent vector {exps}")
        if degree is None:
            degree = max((sum(exps) for exps, _ in table), default=0)

        def evaluate(a: Sequence[complex]) -> complex:
            total = 0j
            for exps, coeff in table:
                value = coeff
                for x, e in zip(a, exps):
                    if e:
                        value *= complex(x) ** e
                total += value
            return total

        return MultiplicativePolynomial(m, int(degree), evaluate, monomials=table)

    @staticmethod
    def from_characters(m: int, multiset: Mapping[int, int]) -> "MultiplicativePolynomial":
        exps = [0] * m
        for idx, mult in multiset.items():
            if not 0 <= int(idx) < m or int(mult) < 0:
                raise SchemaError(f"bad character multiset entry {idx}: {mult}")
            exps[int(idx)] += int(mult)
        return MultiplicativePolynomial.from_monomials(m, [(exps, 1.0)])


def _sample_disk(rng: np.random.Generator, m: int) -> np.ndarray:
    radii = np.sqrt(rng.uniform(0.0, 1.0, size=m))
    angles = rng.uniform(0.0, 2.0 * math.pi, size=m)
    return radii * np.exp(1j * angles)


def verify_factorization(
    phi: MultiplicativePolynomial,
    multiset: Mapping[int, int],
    trials: int,
    rng: Optional[np.random.Generator] = None,
) -> bool:
    """Check phi against the character product on random unit-disk points."""
    rng = rng or np.random.default_rng(DEFAULT_SEED)
    for _ in range(trials):
        a = _sample_disk(rng, phi.m)
        expected = 1.0 + 0j
        for idx, mult in multiset.items():
            expected *= a[idx] ** mult
        got = phi(a)
        if abs(got - expected) > RELATIVE_TOL * (1.0 + abs(got)):
            return False
    return True


def factor_characters(
    phi: MultiplicativePolynomial,
    rng: Optional[np.random.Generator] = None,
    multiplicativity_trials: int = 50,
    verification_trials: int = 1000,
) -> CharacterMultiset:
    """Recover the character multiset of a multiplicative polynomial.

    Raises NotMultiplicative when random pairs witness a failure of
    phi(ab) = phi(a) phi(b) or when the recovered product fails the final
    sample verification; NonIntegerExponent when an evaluation at 1 + e_i is
    not a clean power of two; InconsistentDegree when the exponents do not
    sum to the declared degree.
    """
    rng = rng or np.random.default_rng(DEFAULT_SEED)
    for _ in range(multiplicativity_trials):
        a = _sample_disk(rng, phi.m)
        b = _sample_disk(rng, phi.m)
        lhs = phi(a * b)
        rhs = phi(a) * phi(b)
        if abs(lhs - rhs) > RELATIVE_TOL * (1.0 + abs(lhs) + abs(rhs)):
            raise NotMultiplicative(
                f"phi(ab) != phi(a)phi(b) at a random sample (|diff| = {abs(lhs - rhs):.3g})"
            )

    multiset: CharacterMultiset = {}
    for i in range(phi.m):
        probe = np.ones(phi.m, dtype=complex)
        probe[i] = 2.0
        value = phi(probe)
        if abs(value.imag) > EXPONENT_TOL * (1.0 + abs(value)) or value.real <= 0:
            raise NonIntegerExponent(
                f"phi(1 + e_{i}) = {value} is not a positive real power of two"
            )
        exponent = math.log2(value.real)
        rounded = round(exponent)
        if abs(exponent - rounded) > EXPONENT_TOL or rounded < 0:
            raise NonIntegerExponent(
                f"phi(1 + e_{i}) = {value.real} gives exponent {exponent}, not a nonnegative integer"
            )
        if rounded:
            multiset[i] = int(rounded)

    total = sum(multiset.values())
    if total != phi.degree:
        raise InconsistentDegree(
            f"exponents sum to {total}, declared degree is {phi.degree}"
        )
    if not verify_factorization(phi, multiset, verification_trials, rng):
        raise NotMultiplicative("recovered character product fails sample verification")
    return multiset


def involutive_support(multiset: Mapping[int, int], alg: FiniteInvolutiveAlgebra) -> bool:
    """Whether every character in the multiset is fixed by the involution."""
    if any(not 0 <= int(idx) < alg.m for idx in multiset):
        raise DimensionMismatch("character index outside the algebra")
    fixed = set(alg.fixed_points())
    return all(int(idx) in fixed for idx, mult in multiset.items() if mult > 0)


# ---------------------------------------------------------------------------
# serialization


def polynomial_from_json(data: dict) -> MultiplicativePolynomial:
    if not isinstance(data, dict):
        raise SchemaError("polynomial must be a JSON object")
    try:
        monomials = []
        for item in data["monomials"]:
            exps = [int(e) for e in item["exponents"]]
            raw = item.get("coefficient", 1.0)
            if isinstance(raw, (list, tuple)):
                coeff = complex(raw[0], raw[1])
            else:
                coeff = complex(raw)
            monomials.append((exps, coeff))
        m = int(data.get("m", len(monomials[0][0]) if monomials else 0))
        degree = data.get("degree")
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise SchemaError(f"bad polynomial table: {exc}") from exc
    if m < 1:
        raise SchemaError("polynomial needs at least one coordinate")
    return MultiplicativePolynomial.from_monomials(
        m, monomials, None if degree is None else int(degree)
    )


def multiset_to_json(multiset: Mapping[int, int]) -> dict:
    return {str(k): int(v) for k, v in sorted(multiset.items())}


def multiset_from_json(data: Mapping) -> CharacterMultiset:
    try:
        return {int(k): int(v) for k, v in data.items()}
    except (TypeError, ValueError, AttributeError) as exc:
        raise SchemaError(f"bad character multiset: {exc}") from exc
