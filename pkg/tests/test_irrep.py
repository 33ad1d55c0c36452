"""Highest weight construction: exact identities, dimensions, norms."""

import math
from fractions import Fraction

import numpy as np
import pytest

from sectionrep.errors import DimensionCap, NotDominant
from sectionrep.irrep import (
    CompactElement,
    build_irrep,
    compact_kappa_norm,
    irrep_to_json,
    lie_matrix,
    operator_norm,
    torus_norm,
    weight_multiplicities,
)
from sectionrep.linalg import mat_add, mat_commutator, mat_mul, mat_scaled, mat_transpose
from sectionrep.rootdata import build_root_system, kappa_norm, torus_kappa_norm, weyl_dim

A1 = build_root_system("A", 1)
A2 = build_root_system("A", 2)
A3 = build_root_system("A", 3)


def _h_eigenvalues(rep, i=0):
    col = rep.h_mats[i]
    return sorted(int(col.get(j, {}).get(j, 0)) for j in range(rep.dim))


def test_defining_rep():
    rep = build_irrep(A1, (1,))
    assert rep.dim == 2
    assert _h_eigenvalues(rep) == [-1, 1]


def test_a1_spin_one():
    rep = build_irrep(A1, (2,))
    assert rep.dim == 3
    assert _h_eigenvalues(rep) == [-2, 0, 2]
    assert rep.dim == weyl_dim(A1, (2,))


def test_a2_adjoint_multiplicity():
    rep = build_irrep(A2, (1, 1))
    assert rep.dim == 8
    mults = weight_multiplicities(rep)
    assert mults[(0, 0)] == 2
    assert sum(mults.values()) == rep.dim
    assert mults[rep.highest_weight] == 1


def test_build_errors():
    with pytest.raises(NotDominant):
        build_irrep(A1, (-1,))
    with pytest.raises(DimensionCap):
        build_irrep(A1, (5000,))


@pytest.mark.parametrize(
    "rs,weight",
    [
        (A1, (3,)),
        (A2, (1, 0)),
        (A2, (2, 1)),
        (A2, (1, 1)),
        (A3, (1, 0, 1)),
        (A3, (0, 2, 0)),
    ],
)
def test_exact_structure(rs, weight):
    rep = build_irrep(rs, weight)
    assert rep.dim == weyl_dim(rs, weight)
    r = rs.rank
    for i in range(r):
        # E_i kills the highest weight vector; H_i scales it by the weight
        assert rep.hw_vector_index not in rep.e_mats[i]
        hw_col = rep.h_mats[i].get(rep.hw_vector_index, {})
        assert hw_col.get(rep.hw_vector_index, Fraction(0)) == weight[i]
        for j in range(r):
            lhs = mat_commutator(rep.h_mats[i], rep.e_mats[j])
            rhs = mat_scaled(rep.e_mats[j], Fraction(rs.cartan_matrix[i][j]))
            assert mat_add(lhs, rhs, sign=-1) == {}
            lhs = mat_commutator(rep.h_mats[i], rep.f_mats[j])
            rhs = mat_scaled(rep.f_mats[j], Fraction(-rs.cartan_matrix[i][j]))
            assert mat_add(lhs, rhs, sign=-1) == {}
            bracket = mat_commutator(rep.e_mats[i], rep.f_mats[j])
            expected = rep.h_mats[i] if i == j else {}
            assert mat_add(bracket, expected, sign=-1) == {}
        # gram * E_i == F_i^T * gram encodes unitarity of the compact form
        assert mat_add(
            mat_mul(rep.gram, rep.e_mats[i]),
            mat_mul(mat_transpose(rep.f_mats[i]), rep.gram),
            sign=-1,
        ) == {}


def test_weight_multiplicities_match_numeric_eigenspaces():
    rep = build_irrep(A2, (2, 1))
    mults = weight_multiplicities(rep)
    # oracle: joint eigenspaces of the dense commuting H matrices
    gens = rep.dense_generators(orthonormal=True)
    h0, h1 = gens["h"][0], gens["h"][1]
    d0 = np.diag(h0).real.round().astype(int)
    d1 = np.diag(h1).real.round().astype(int)
    assert np.allclose(h0, np.diag(np.diag(h0)), atol=1e-9)
    counted = {}
    for a, b in zip(d0, d1):
        counted[(int(a), int(b))] = counted.get((int(a), int(b)), 0) + 1
    assert counted == mults


def test_operator_norm_examples():
    rep = build_irrep(A1, (3,))
    assert operator_norm(rep, CompactElement.zero(A1)) == 0.0
    x = CompactElement.torus(A1, (1.0,))
    assert operator_norm(rep, x) == pytest.approx(3.0, abs=1e-9)
    rep1 = build_irrep(A1, (1,))
    ef = CompactElement.from_simple(A1, a=(1.0,))
    assert operator_norm(rep1, ef) == pytest.approx(1.0, abs=1e-9)


def test_torus_norm_examples():
    rep = build_irrep(A1, (3,))
    assert torus_norm(rep, (0,)) == 0
    assert torus_norm(rep, (1,)) == 3
    rep2 = build_irrep(A2, (1, 1))
    val = torus_norm(rep2, (1, 1))
    x = CompactElement.torus(A2, (1.0, 1.0))
    assert operator_norm(rep2, x) == pytest.approx(float(val), abs=1e-9)


def test_torus_norm_matches_operator_norm_randomized():
    rng = np.random.default_rng(11)
    for rs, weight in [(A1, (4,)), (A2, (2, 1)), (A3, (1, 1, 0))]:
        rep = build_irrep(rs, weight)
        for _ in range(15):
            coords = tuple(rng.normal(size=rs.rank))
            exact = float(torus_norm(rep, coords))
            numeric = operator_norm(rep, CompactElement.torus(rs, coords))
            assert numeric == pytest.approx(exact, abs=1e-9 * (1 + exact))


@pytest.mark.parametrize("normalization", ["killing", "short2"])
def test_norm_upper_bound(normalization):
    rng = np.random.default_rng(7)
    for rs, weight in [(A1, (3,)), (A2, (1, 1)), (A2, (2, 0))]:
        rep = build_irrep(rs, weight)
        wnorm = kappa_norm(rs, weight, normalization)
        for _ in range(40):
            x = CompactElement.random(rs, rng)
            lhs = operator_norm(rep, x)
            rhs = wnorm * compact_kappa_norm(rs, x, normalization)
            assert lhs <= rhs * (1 + 1e-9) + 1e-9


def test_lower_bound_ratio_positive():
    rng = np.random.default_rng(3)
    ratios = []
    for rs, weight in [(A1, (2,)), (A2, (1, 0)), (A2, (1, 1))]:
        rep = build_irrep(rs, weight)
        wn = kappa_norm(rs, weight, "killing")
        for _ in range(25):
            x = CompactElement.random(rs, rng)
            xn = compact_kappa_norm(rs, x, "killing")
            if xn < 1e-9:
                continue
            ratios.append(operator_norm(rep, x.scaled(1.0 / xn)) / wn)
    assert min(ratios) > 0.0


def test_compact_kappa_norm_consistent_with_torus_gram():
    for rs in (A1, A2, A3):
        coords = tuple(range(1, rs.rank + 1))
        x = CompactElement.torus(rs, coords)
        for normalization in ("killing", "short2"):
            via_trace = compact_kappa_norm(rs, x, normalization)
            via_gram = torus_kappa_norm(rs, coords, normalization)
            assert via_trace == pytest.approx(via_gram, rel=1e-12)


def test_dimension_oracle_sample():
    for rs, weights in [
        (A1, [(m,) for m in range(12)]),
        (A2, [(a, b) for a in range(4) for b in range(4)]),
        (A3, [(1, 0, 0), (0, 1, 0), (1, 0, 1), (1, 1, 1)]),
    ]:
        for w in weights:
            assert build_irrep(rs, w).dim == weyl_dim(rs, w)


def test_root_direction_norm():
    # E - F along a non-simple root of A2 still has norm |lambda| * |x| at most
    rep = build_irrep(A2, (1, 0))
    x = CompactElement.from_simple(A2, a=(0.0, 0.0, 1.0))
    got = operator_norm(rep, x)
    bound = kappa_norm(A2, (1, 0), "short2") * compact_kappa_norm(A2, x, "short2")
    assert got <= bound * (1 + 1e-9)
    assert got == pytest.approx(1.0, abs=1e-9)


def test_json_export_roundtrip_values():
    rep = build_irrep(A1, (2,))
    data = irrep_to_json(rep)
    assert data["dimension"] == 3
    assert data["highest_weight"] == [2]
    h = data["generators"][0]["h"]
    assert h[0][0] == "2"
    gram = data["gram"]
    assert gram[0][0] == "1"


def test_killing_form_example_ratio():
    # the (A1, weight 2) norms in the two normalizations differ by sqrt(4)
    v_short = kappa_norm(A1, (2,), "short2")
    v_kill = kappa_norm(A1, (2,), "killing")
    assert v_short == pytest.approx(math.sqrt(2))
    assert v_kill == pytest.approx(v_short / math.sqrt(4))
