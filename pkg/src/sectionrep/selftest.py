"""Deterministic invariant suite behind the ``selftest`` subcommand.

Each check exercises one family of properties on a fixed budget and reports
how many instances it verified.  The whole suite is a function of the seed,
so reruns are reproducible.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np

from . import DEFAULT_SEED
from .boundary import GrowthSpec, SampledSection, ck_norm, extends_to_ck
from .charfactor import MultiplicativePolynomial, factor_characters, verify_factorization
from .errors import NotMultiplicative, SectionRepError
from .evalrep import (
    EvalRepSpec,
    FiniteInvolutiveAlgebra,
    Functional,
    Point,
    classify_inducible,
    commutant_dim,
    direct_sum,
    extract_highest_weight,
    realize,
    spec_from_json,
    spec_to_json,
)
from .irrep import CompactElement, build_irrep, compact_kappa_norm, operator_norm, torus_norm
from .rootdata import (
    build_root_system,
    is_dominant_integral,
    kappa_norm,
    kappa_norm_sq,
    weyl_dim,
    weyl_orbit,
)
from .series import Const, Power
from .uhf import (
    ConstantTail,
    DeficitTail,
    FactorType,
    ProductState,
    VectorSequence,
    itp_equivalent,
    powers_factor_type,
    projective_distance,
    state_eval,
)


@dataclass
class CheckResult:
    name: str
    count: int
    passed: bool
    detail: str = ""


def _check_orbit_norms(rng: np.random.Generator) -> Tuple[int, str]:
    count = 0
    for rank in (1, 2, 3):
        rs = build_root_system("A", rank)
        for _ in range(6):
            w = tuple(int(rng.integers(0, 4)) for _ in range(rank))
            orbit = weyl_orbit(rs, w)
            assert rs.weyl_group_order() % len(orbit) == 0
            sq = kappa_norm_sq(rs, w, "short2")
            assert all(kappa_norm_sq(rs, v, "short2") == sq for v in orbit)
            assert sum(1 for v in orbit if is_dominant_integral(rs, v)) == 1
            count += 1
    return count, ""


def _check_dimension_oracle(rng: np.random.Generator) -> Tuple[int, str]:
    count = 0
    for rank, weights in [
        (1, [(m,) for m in range(0, 25, 3)]),
        (2, [(a, b) for a in range(3) for b in range(3)]),
        (3, [(1, 0, 0), (0, 1, 0), (1, 0, 1)]),
    ]:
        rs = build_root_system("A", rank)
        for w in weights:
            assert build_irrep(rs, w).dim == weyl_dim(rs, w)
            count += 1
    return count, ""


def _check_torus_identity(rng: np.random.Generator) -> Tuple[int, str]:
    count = 0
    for rank, weight in [(1, (4,)), (2, (2, 1))]:
        rs = build_root_system("A", rank)
        rep = build_irrep(rs, weight)
        for _ in range(10):
            coords = tuple(rng.normal(size=rank))
            exact = float(torus_norm(rep, coords))
            numeric = operator_norm(rep, CompactElement.torus(rs, coords))
            assert abs(exact - numeric) <= 1e-9 * (1 + exact)
            count += 1
    return count, ""


def _check_norm_bounds(rng: np.random.Generator) -> Tuple[int, str]:
    count = 0
    worst_ratio = math.inf
    for rank, weight in [(1, (3,)), (2, (1, 1))]:
        rs = build_root_system("A", rank)
        rep = build_irrep(rs, weight)
        wn = kappa_norm(rs, weight, "killing")
        for _ in range(30):
            x = CompactElement.random(rs, rng)
            xn = compact_kappa_norm(rs, x, "killing")
            if xn < 1e-12:
                continue
            value = operator_norm(rep, x)
            assert value <= wn * xn * (1 + 1e-9) + 1e-9
            worst_ratio = min(worst_ratio, value / (wn * xn))
            count += 1
    assert worst_ratio > 0
    return count, f"lower-ratio estimate {worst_ratio:.4f}"


def _random_spec(rng: np.random.Generator) -> EvalRepSpec:
    rank = int(rng.integers(1, 3))
    rs = build_root_system("A", rank)
    npoints = int(rng.integers(1, 4))
    while True:
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


def _check_round_trip(rng: np.random.Generator) -> Tuple[int, str]:
    count = 0
    for _ in range(15):
        spec = _random_spec(rng)
        data = extract_highest_weight(realize(spec))
        assert data.e_dim == 1
        result = classify_inducible(data.functional)
        assert result.inducible
        assert tuple(w for _, w in result.spec.entries) == spec.weights
        count += 1
    return count, ""


def _check_commutant(rng: np.random.Generator) -> Tuple[int, str]:
    rs = build_root_system("A", 1)
    single = realize(EvalRepSpec(rs, ((Point("x"), (2,)),)))
    other = realize(EvalRepSpec(rs, ((Point("x"), (1,)),)))
    assert commutant_dim(single) == 1
    assert commutant_dim(direct_sum(single, single)) == 4
    assert commutant_dim(direct_sum(single, other)) == 2
    return 3, ""


def _check_involutivity(rng: np.random.Generator) -> Tuple[int, str]:
    count = 0
    rs = build_root_system("A", 1)
    involutions = [(0,), (0, 1), (1, 0), (0, 1, 2), (1, 0, 2), (0, 2, 1), (2, 1, 0)]
    for sigma in involutions:
        alg = FiniteInvolutiveAlgebra(len(sigma), sigma)
        for _ in range(15):
            values = tuple(
                tuple(int(rng.integers(-2, 4)) for _ in range(alg.m))
                for _ in range(rs.rank)
            )
            functional = Functional(alg, rs, values)
            result = classify_inducible(functional)
            on_cycle = any(
                functional.values[i][j] != 0
                for pair in alg.two_cycles()
                for j in pair
                for i in range(rs.rank)
            )
            dominant = all(
                functional.values[i][j] >= 0
                for j in alg.fixed_points()
                for i in range(rs.rank)
            )
            assert result.inducible == (not on_cycle and dominant)
            count += 1
    return count, ""


def _check_uhf(rng: np.random.Generator) -> Tuple[int, str]:
    assert powers_factor_type(ProductState.constant(0.0)) is FactorType.TYPE_I
    assert powers_factor_type(ProductState.constant(0.5)) is FactorType.TYPE_II1
    assert powers_factor_type(ProductState.constant(0.25)) is FactorType.TYPE_III
    ref = VectorSequence((), ConstantTail((1.0, 0.0)))
    assert itp_equivalent(VectorSequence((), DeficitTail(Power(1.0, 2.0), 2)), ref).holds
    assert itp_equivalent(VectorSequence((), DeficitTail(Const(0.5), 2)), ref).fails
    count = 5
    for _ in range(100):
        v = rng.normal(size=3) + 1j * rng.normal(size=3)
        w = rng.normal(size=3) + 1j * rng.normal(size=3)
        v /= np.linalg.norm(v)
        w /= np.linalg.norm(w)
        d = projective_distance(v, w)
        assert abs(d**2 - 2 * (1 - abs(np.vdot(v, w)))) < 1e-12
        count += 1
    value = state_eval(ProductState.constant(0.25), [(1, [[1, 0], [0, 0]])])
    assert abs(value - 0.25) < 1e-12
    count += 1
    return count, ""


def _check_growth(rng: np.random.Generator) -> Tuple[int, str]:
    assert extends_to_ck(GrowthSpec(1, Power(1, 2), Const(1))).holds
    assert extends_to_ck(GrowthSpec(0, Power(1, 2), Const(1))).fails
    assert extends_to_ck(GrowthSpec(2, Power(1, 1), Power(1, -1))).fails
    count = 3
    h, n = 1e-3, 1001
    xs = h * np.arange(n)
    for k in range(3):
        for gamma in (0.1, 0.5, 0.9):
            section = SampledSection(grid_step=h, values=xs ** (k + gamma))
            assert ck_norm(section, k) <= math.e * math.factorial(k + 1) * 1.05
            count += 1
    return count, ""


def _check_factorization(rng: np.random.Generator) -> Tuple[int, str]:
    count = 0
    for _ in range(20):
        m = int(rng.integers(1, 7))
        multiset = {}
        for _ in range(int(rng.integers(0, 9))):
            idx = int(rng.integers(0, m))
            multiset[idx] = multiset.get(idx, 0) + 1
        phi = MultiplicativePolynomial.from_characters(m, multiset)
        recovered = factor_characters(phi, rng=rng, verification_trials=200)
        assert recovered == {k: v for k, v in multiset.items() if v}
        assert verify_factorization(phi, recovered, 100, rng)
        count += 1
    rejected = 0
    for _ in range(5):
        phi = MultiplicativePolynomial.from_monomials(
            3, [((1, 1, 0), 1.0), ((0, 0, int(rng.integers(1, 3))), 1.0)]
        )
        try:
            factor_characters(phi, rng=rng, verification_trials=100)
        except NotMultiplicative:
            rejected += 1
        count += 1
    assert rejected == 5
    return count, ""


def _check_json_stability(rng: np.random.Generator) -> Tuple[int, str]:
    spec_data = {
        "series": "A",
        "rank": 1,
        "entries": [
            {"point": "y", "weight": [1]},
            {"point": "x", "weight": [2], "boundary_distance": 0.5},
        ],
    }

    def canonical(d):
        return json.dumps(d, sort_keys=True, separators=(",", ":"))

    once = canonical(spec_to_json(spec_from_json(spec_data)))
    twice = canonical(spec_to_json(spec_from_json(json.loads(once))))
    assert once == twice
    return 1, ""


CHECKS: List[Tuple[str, Callable[[np.random.Generator], Tuple[int, str]]]] = [
    ("root-orbit-invariants", _check_orbit_norms),
    ("dimension-oracle", _check_dimension_oracle),
    ("torus-norm-identity", _check_torus_identity),
    ("representation-norm-bounds", _check_norm_bounds),
    ("classification-round-trip", _check_round_trip),
    ("commutant-pattern", _check_commutant),
    ("involutivity-obstruction", _check_involutivity),
    ("uhf-criteria", _check_uhf),
    ("growth-condition", _check_growth),
    ("character-factorization", _check_factorization),
    ("json-canonical-round-trip", _check_json_stability),
]


def run_selftest(seed: Optional[int] = None) -> List[CheckResult]:
    seed = DEFAULT_SEED if seed is None else seed
    results: List[CheckResult] = []
    for name, check in CHECKS:
        rng = np.random.default_rng(seed)
        try:
            count, detail = check(rng)
            results.append(CheckResult(name, count, True, detail))
        except (AssertionError, SectionRepError) as exc:
            results.append(CheckResult(name, 0, False, str(exc)))
    return results
