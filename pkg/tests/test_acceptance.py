"""Acceptance suite: one test per criterion, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines and the
reported constants.  Tolerances are pinned here, not configurable.
"""

import itertools
import math
import time
from contextlib import contextmanager

import numpy as np
import pytest

from sectionrep.boundary import GrowthSpec, SampledSection, ck_norm, extends_to_ck
from sectionrep.charfactor import (
    MultiplicativePolynomial,
    factor_characters,
    verify_factorization,
)
from sectionrep.errors import NotMultiplicative
from sectionrep.evalrep import (
    EvalRepSpec,
    FiniteInvolutiveAlgebra,
    Functional,
    Point,
    classify_inducible,
    commutant_dim,
    commutant_singular_values,
    direct_sum,
    extract_highest_weight,
    realize,
)
from sectionrep.irrep import (
    CompactElement,
    build_irrep,
    compact_kappa_norm,
    operator_norm,
    torus_norm,
)
from sectionrep.rootdata import build_root_system, kappa_norm, weyl_dim
from sectionrep.series import Const, Geometric, Power, sum_converges
from sectionrep.uhf import (
    ConstantTail,
    DeficitTail,
    FactorType,
    ProductState,
    VectorSequence,
    itp_equivalent,
    powers_factor_type,
    projective_distance,
)

SEED = 20260809


@contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        print(f"FAIL {name}")
        raise
    print(f"PASS {name}")


def _dominant_weights_with_dim_cap(rs, cap):
    """All dominant integral weights with Weyl dimension at most cap."""
    out = []

    def rec(prefix):
        if len(prefix) == rs.rank:
            d = weyl_dim(rs, tuple(prefix))
            if d <= cap:
                out.append((tuple(prefix), d))
            return
        v = 0
        while True:
            padded = tuple(prefix + [v] + [0] * (rs.rank - len(prefix) - 1))
            if weyl_dim(rs, padded) > cap:
                break
            rec(prefix + [v])
            v += 1

    rec([])
    return out


def test_criterion_1_dimension_oracle():
    with criterion("criterion-1 dimension-oracle"):
        start = time.monotonic()
        verified = 0
        for rank in (1, 2, 3):
            rs = build_root_system("A", rank)
            for weight, dim in _dominant_weights_with_dim_cap(rs, 200):
                assert build_irrep(rs, weight).dim == dim
                verified += 1
        elapsed = time.monotonic() - start
        assert verified >= 300
        assert elapsed < 30.0, f"took {elapsed:.1f}s"
        print(f"  {verified} weights verified in {elapsed:.1f}s", end=" ")


def test_criterion_2_norm_estimates():
    with criterion("criterion-2 norm-estimates"):
        start = time.monotonic()
        rng = np.random.default_rng(SEED)
        reps = {
            1: [(1,), (3,), (6,)],
            2: [(1, 0), (1, 1), (2, 1)],
            3: [(1, 0, 0), (0, 1, 0), (1, 0, 1)],
        }
        # torus formula: operator norm equals the Weyl orbit pairing sup
        for rank, weights in reps.items():
            rs = build_root_system("A", rank)
            built = [build_irrep(rs, w) for w in weights]
            for _ in range(50):
                rep = built[int(rng.integers(0, len(built)))]
                coords = tuple(rng.normal(size=rank))
                exact = float(torus_norm(rep, coords))
                numeric = operator_norm(rep, CompactElement.torus(rs, coords))
                assert abs(numeric - exact) <= 1e-9 * (1.0 + exact)
        # two-sided estimate on random compact elements
        ratios = []
        for rank, weights in reps.items():
            rs = build_root_system("A", rank)
            for w in weights:
                rep = build_irrep(rs, w)
                wn = kappa_norm(rs, w, "killing")
                for _ in range(200):
                    x = CompactElement.random(rs, rng)
                    xn = compact_kappa_norm(rs, x, "killing")
                    if xn < 1e-12:
                        continue
                    value = operator_norm(rep, x)
                    assert value <= wn * xn * (1 + 1e-9) + 1e-9
                    ratios.append(value / (wn * xn))
        constant_estimate = min(ratios)
        assert constant_estimate > 0.0
        elapsed = time.monotonic() - start
        assert elapsed < 60.0, f"took {elapsed:.1f}s"
        print(
            f"  empirical lower-constant estimate {constant_estimate:.4f} "
            f"({len(ratios)} samples, {elapsed:.1f}s)",
            end=" ",
        )


def _random_spec(rng):
    rank = int(rng.integers(1, 3))
    rs = build_root_system("A", rank)
    while True:
        npoints = int(rng.integers(1, 4))
        entries = []
        for j in range(npoints):
            while True:
                w = tuple(int(rng.integers(0, 3)) for _ in range(rank))
                if any(w):
                    break
            entries.append((Point(f"x{j + 1}"), w))
        spec = EvalRepSpec(rs, tuple(entries))
        if spec.total_dim() <= 200:
            return spec


def test_criterion_3_classification_round_trip():
    with criterion("criterion-3 classification-round-trip"):
        start = time.monotonic()
        rng = np.random.default_rng(SEED)
        for _ in range(100):
            spec = _random_spec(rng)
            data = extract_highest_weight(realize(spec))
            assert data.e_dim == 1
            result = classify_inducible(data.functional)
            assert result.inducible
            assert tuple(w for _, w in result.spec.entries) == spec.weights
        elapsed = time.monotonic() - start
        assert elapsed < 120.0, f"took {elapsed:.1f}s"
        print(f"  100 specs in {elapsed:.1f}s", end=" ")


def test_criterion_4_commutant_pattern():
    with criterion("criterion-4 commutant-pattern"):
        a1 = build_root_system("A", 1)
        a2 = build_root_system("A", 2)
        cases = [
            realize(EvalRepSpec(a1, ((Point("x"), (2,)),))),
            realize(EvalRepSpec(a2, ((Point("x"), (1, 1)),))),
            realize(EvalRepSpec(a1, ((Point("x"), (1,)), (Point("y"), (2,))))),
        ]
        checked = 0

        def gap_ok(rep):
            svals = commutant_singular_values(rep)
            kept = svals[svals >= 1e-8]
            discarded = svals[svals < 1e-8]
            if discarded.size == 0 or float(discarded.max()) == 0.0:
                return True
            return float(kept.min()) >= 1e3 * float(discarded.max())

        for rep in cases:
            assert commutant_dim(rep) == 1
            assert gap_ok(rep)
            doubled = direct_sum(rep, rep)
            assert commutant_dim(doubled) == 4
            assert gap_ok(doubled)
            checked += 2
        pairs = [
            (cases[0], realize(EvalRepSpec(a1, ((Point("x"), (1,)),)))),
            (cases[1], realize(EvalRepSpec(a2, ((Point("x"), (1, 0)),)))),
        ]
        for rep, other in pairs:
            mixed = direct_sum(rep, other)
            assert commutant_dim(mixed) == 2
            assert gap_ok(mixed)
            checked += 1
        print(f"  {checked} commutants with clean spectral gaps", end=" ")


def _involutions(m):
    if m == 0:
        return [()]
    out = []
    for sub in _involutions(m - 1):
        # element m-1 fixed
        out.append(tuple(sub) + (m - 1,))
        # element m-1 swapped with some earlier j
        for j in range(m - 1):
            lifted = list(sub)
            # re-embed sub on {0..m-2} minus nothing: swap j and m-1 on identity-extended sub
            new = list(tuple(sub) + (m - 1,))
            if new[j] == j:
                new[j], new[m - 1] = m - 1, j
                out.append(tuple(new))
    return out


def test_criterion_5_involutivity_obstruction():
    with criterion("criterion-5 involutivity-obstruction"):
        rng = np.random.default_rng(SEED)
        rs_choices = [build_root_system("A", 1), build_root_system("A", 2)]
        total = 0
        for m in range(1, 5):
            for sigma in sorted(set(_involutions(m))):
                alg = FiniteInvolutiveAlgebra(m, sigma)
                cycle_cols = {j for pair in alg.two_cycles() for j in pair}
                for _ in range(50):
                    rs = rs_choices[int(rng.integers(0, 2))]
                    values = []
                    for _ in range(rs.rank):
                        row = []
                        for _ in range(m):
                            kind = rng.integers(0, 4)
                            if kind == 0:
                                row.append(0)
                            elif kind == 1:
                                row.append(int(rng.integers(1, 4)))
                            elif kind == 2:
                                row.append(-int(rng.integers(1, 3)))
                            else:
                                from fractions import Fraction

                                row.append(Fraction(int(rng.integers(1, 4)), 2))
                        values.append(tuple(row))
                    functional = Functional(alg, rs, tuple(values))
                    result = classify_inducible(functional)
                    on_cycle = any(
                        functional.values[i][j] != 0
                        for j in cycle_cols
                        for i in range(rs.rank)
                    )
                    dominant = all(
                        functional.values[i][j] >= 0
                        and functional.values[i][j].denominator == 1
                        for j in alg.fixed_points()
                        for i in range(rs.rank)
                    )
                    if on_cycle:
                        assert not result.inducible
                        assert result.reason == "NonInvolutiveSupport"
                    else:
                        assert result.inducible == dominant
                    total += 1
        print(f"  {total} functionals across all involutions with m <= 4", end=" ")


def test_criterion_6_uhf_criteria():
    with criterion("criterion-6 uhf-criteria"):
        assert powers_factor_type(ProductState.constant(0.0)) is FactorType.TYPE_I
        assert powers_factor_type(ProductState.constant(0.5)) is FactorType.TYPE_II1
        assert powers_factor_type(ProductState.constant(0.25)) is FactorType.TYPE_III

        rng = np.random.default_rng(SEED)
        ref = VectorSequence((), ConstantTail((1.0, 0.0)))
        rules = []
        for _ in range(30):
            kind = rng.integers(0, 3)
            if kind == 0:
                rules.append(Power(float(rng.uniform(0.1, 2.0)), float(rng.uniform(0.2, 3.0))))
            elif kind == 1:
                rules.append(Const(float(rng.uniform(0.0, 0.9))))
            else:
                rules.append(
                    Geometric(float(rng.uniform(0.1, 2.0)), float(rng.uniform(0.0, 0.9)))
                )
        for rule in rules:
            verdict = itp_equivalent(VectorSequence((), DeficitTail(rule, 2)), ref)
            assert verdict.holds == sum_converges(rule)
            assert verdict.fails == (not sum_converges(rule))

        for _ in range(500):
            d = int(rng.integers(2, 5))
            v = rng.normal(size=d) + 1j * rng.normal(size=d)
            w = rng.normal(size=d) + 1j * rng.normal(size=d)
            v /= np.linalg.norm(v)
            w /= np.linalg.norm(w)
            dist = projective_distance(v, w)
            assert abs(dist**2 - 2.0 * (1.0 - abs(np.vdot(v, w)))) < 1e-12
        print("  3 factor types, 30 series verdicts, 500 distance identities", end=" ")


def test_criterion_7_growth_condition():
    with criterion("criterion-7 growth-condition"):
        for k in range(5):
            verdict = extends_to_ck(GrowthSpec(k, Power(1, 2), Const(1)))
            assert verdict.holds == (k >= 1)
            assert verdict.fails == (k == 0)

        h = 1e-4
        xs = h * np.arange(10001)
        delta = 1.0
        checked = 0
        for k in range(4):
            for gamma in (0.1, 0.5, 0.9):
                section = SampledSection(grid_step=h, values=delta * xs ** (k + gamma))
                bound = math.e * math.factorial(k + 1) * delta
                assert ck_norm(section, k) <= bound * 1.05
                checked += 1
        print(f"  growth verdicts plus {checked} critical-norm bounds", end=" ")


def test_criterion_8_character_factorization():
    with criterion("criterion-8 character-factorization"):
        rng = np.random.default_rng(SEED)
        for _ in range(200):
            m = int(rng.integers(1, 7))
            multiset = {}
            for _ in range(int(rng.integers(0, 9))):
                idx = int(rng.integers(0, m))
                multiset[idx] = multiset.get(idx, 0) + 1
            phi = MultiplicativePolynomial.from_characters(m, multiset)
            recovered = factor_characters(phi, rng=rng, verification_trials=1000)
            assert recovered == {k: v for k, v in multiset.items() if v}

        rejected = 0
        planted = 100
        for _ in range(planted):
            m = int(rng.integers(2, 7))
            e1 = [int(rng.integers(0, 3)) for _ in range(m)]
            e2 = [int(rng.integers(0, 3)) for _ in range(m)]
            if e1 == e2:
                e2[0] += 1
            phi = MultiplicativePolynomial.from_monomials(m, [(e1, 1.0), (e2, 1.0)])
            try:
                factor_characters(phi, rng=rng, verification_trials=200)
            except NotMultiplicative:
                rejected += 1
            except Exception:
                pass
        assert rejected >= math.ceil(0.99 * planted)
        print(f"  200 recoveries, {rejected}/{planted} planted rejections", end=" ")
