"""Root data: Cartan matrices, orbits, norms, dimension formula."""

import math
from fractions import Fraction

import pytest

from sectionrep.errors import NonIntegralWeight, NotDominant, RankTooLarge, UnsupportedSeries
from sectionrep.rootdata import (
    build_root_system,
    is_dominant_integral,
    kappa_norm,
    kappa_norm_sq,
    torus_kappa_norm_sq,
    weyl_dim,
    weyl_orbit,
)


def test_a1_cartan_and_root_count():
    rs = build_root_system("A", 1)
    assert rs.cartan_matrix == ((2,),)
    assert rs.num_positive_roots == 1


def test_a2_closure_matches_hand_count():
    rs = build_root_system("A", 2)
    assert rs.cartan_matrix == ((2, -1), (-1, 2))
    assert rs.num_positive_roots == 3
    assert set(rs.positive_root_coeffs) == {(1, 0), (0, 1), (1, 1)}


@pytest.mark.parametrize("rank", [1, 2, 3, 4])
def test_positive_root_count_formula(rank):
    rs = build_root_system("A", rank)
    assert rs.num_positive_roots == rank * (rank + 1) // 2


def test_build_errors():
    with pytest.raises(UnsupportedSeries):
        build_root_system("B", 2)
    with pytest.raises(RankTooLarge):
        build_root_system("A", 5)
    with pytest.raises(RankTooLarge):
        build_root_system("A", 0)


def test_weyl_orbit_examples():
    a1 = build_root_system("A", 1)
    assert weyl_orbit(a1, (3,)) == ((-3,), (3,))
    a2 = build_root_system("A", 2)
    assert set(weyl_orbit(a2, (1, 0))) == {(1, 0), (-1, 1), (0, -1)}
    assert weyl_orbit(a2, (0, 0)) == ((0, 0),)
    with pytest.raises(NonIntegralWeight):
        weyl_orbit(a1, (0.5,))


def test_dominance():
    a2 = build_root_system("A", 2)
    assert is_dominant_integral(a2, (2, 0))
    assert not is_dominant_integral(a2, (-1, 2))
    a1 = build_root_system("A", 1)
    assert not is_dominant_integral(a1, (Fraction(1, 2),))


def test_kappa_norm_examples():
    a1 = build_root_system("A", 1)
    assert kappa_norm(a1, (0,), "killing") == 0.0
    # 2*w1 is the root alpha, whose squared length is 2 in "short2"
    assert kappa_norm_sq(a1, (2,), "short2") == 2
    assert kappa_norm(a1, (2,), "short2") == pytest.approx(math.sqrt(2))
    ratio = kappa_norm(a1, (2,), "short2") / kappa_norm(a1, (2,), "killing")
    assert ratio == pytest.approx(math.sqrt(2 * (1 + 1)))


def _adjoint_killing_gram(rank):
    """Oracle: Killing form kappa(c_i, c_j) = tr(ad c_i ad c_j) on sl(r+1).

    Works directly on the gl basis of matrix units, no root data involved.
    """
    n = rank + 1
    units = [(i, j) for i in range(n) for j in range(n) if i != j]
    basis = units + [("h", k) for k in range(rank)]

    def bracket_with_coroot(k, elem):
        # ad(E_kk - E_{k+1,k+1}) acting on a basis element, as coefficients
        out = {}
        if elem[0] == "h":
            return out
        i, j = elem
        coeff = (int(i == k) - int(i == k + 1)) - (int(j == k) - int(j == k + 1))
        if coeff:
            out[elem] = coeff
        return out

    gram = [[0] * rank for _ in range(rank)]
    for a in range(rank):
        for b in range(rank):
            tr = 0
            for elem in basis:
                once = bracket_with_coroot(b, elem)
                for mid, c1 in once.items():
                    twice = bracket_with_coroot(a, mid)
                    tr += c1 * twice.get(elem, 0)
            gram[a][b] = tr
    return gram


@pytest.mark.parametrize("rank", [1, 2, 3, 4])
def test_killing_normalization_against_adjoint_trace(rank):
    rs = build_root_system("A", rank)
    oracle = _adjoint_killing_gram(rank)
    got = rs.kappa_gram("killing")
    for i in range(rank):
        for j in range(rank):
            assert got[i][j] == oracle[i][j]


def test_weyl_dim_examples():
    a1 = build_root_system("A", 1)
    for m in range(8):
        assert weyl_dim(a1, (m,)) == m + 1
    a2 = build_root_system("A", 2)
    assert weyl_dim(a2, (1, 0)) == 3
    assert weyl_dim(a2, (1, 1)) == 8
    with pytest.raises(NotDominant):
        weyl_dim(a2, (-1, 0))


def _sample_weights(rank, bound=3):
    if rank == 1:
        return [(m,) for m in range(bound + 1)]
    if rank == 2:
        return [(a, b) for a in range(bound) for b in range(bound)]
    return [
        w
        for w in [(1, 0, 0), (0, 1, 0), (1, 1, 0), (2, 0, 1), (1, 1, 1)]
        if len(w) == rank
    ]


@pytest.mark.parametrize("rank", [1, 2, 3])
def test_orbit_invariants(rank):
    rs = build_root_system("A", rank)
    group_order = rs.weyl_group_order()
    for w in _sample_weights(rank):
        orbit = weyl_orbit(rs, w)
        assert group_order % len(orbit) == 0
        wsq = kappa_norm_sq(rs, w, "short2")
        for v in orbit:
            assert kappa_norm_sq(rs, v, "short2") == wsq
        assert sum(1 for v in orbit if is_dominant_integral(rs, v)) == 1


@pytest.mark.parametrize("rank", [1, 2, 3, 4])
def test_normalization_ratio_constant(rank):
    rs = build_root_system("A", rank)
    expected = Fraction(1, 2 * (rank + 1))
    for w in _sample_weights(rank):
        if all(x == 0 for x in w):
            continue
        assert kappa_norm_sq(rs, w, "killing") / kappa_norm_sq(rs, w, "short2") == expected
    # torus side scales the other way
    x = tuple(1 for _ in range(rank))
    assert torus_kappa_norm_sq(rs, x, "killing") / torus_kappa_norm_sq(rs, x, "short2") == 1 / expected
