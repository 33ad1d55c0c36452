"""Root-system combinatorics for the special linear series (type A).

Weights are tuples of coordinates in the fundamental-weight basis, torus
elements are coordinate tuples in the coroot basis, so that the pairing of a
weight with a simple coroot is a plain coordinate read.  Two normalizations
of the invariant form are carried side by side:

* ``"short2"``: every root has squared length 2 (the trace form of the
  defining representation);
* ``"killing"``: the Killing form of sl(r+1), which is 2(r+1) times the
  trace form.

Norms of weights and of torus elements scale inversely between the two, so
products ``|weight| * |torus element|`` are normalization independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Sequence, Tuple

from .errors import NonIntegralWeight, NotDominant, RankTooLarge, UnsupportedSeries

Weight = Tuple[int, ...]

MAX_RANK = 4
NORMALIZATIONS = ("killing", "short2")


def _as_exact(x):
    """Coerce a coordinate to int or Fraction; floats must be exact."""
    if isinstance(x, bool):
        raise NonIntegralWeight(f"bad coordinate {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else x
    if isinstance(x, float):
        if x != int(x):
            return Fraction(x).limit_denominator(10**6)
        return int(x)
    raise NonIntegralWeight(f"bad coordinate {x!r}")


@dataclass(frozen=True)
class RootSystem:
    """Cartan data for type A_r, with exact Gram matrices of the form."""

    series: str
    rank: int
    cartan_matrix: Tuple[Tuple[int, ...], ...]
    simple_roots: Tuple[Weight, ...]            # fundamental-basis coordinates
    positive_roots: Tuple[Weight, ...]          # fundamental-basis coordinates
    positive_root_coeffs: Tuple[Tuple[int, ...], ...]  # simple-root coordinates
    # for non-simple roots: (simple index i, index of beta) with root = alpha_i + beta
    positive_root_parents: Tuple[Tuple[int, int] | None, ...]
    fundamental_weights: Tuple[str, ...]
    inverse_cartan: Tuple[Tuple[Fraction, ...], ...]

    @property
    def num_positive_roots(self) -> int:
        return len(self.positive_roots)

    def kappa_gram(self, normalization: str = "killing") -> Tuple[Tuple[Fraction, ...], ...]:
        """Gram matrix of the form on the coroot basis of the torus."""
        scale = _form_scale(self, normalization)
        return tuple(
            tuple(Fraction(v) * scale for v in row) for row in self.cartan_matrix
        )

    def dual_gram(self, normalization: str = "killing") -> Tuple[Tuple[Fraction, ...], ...]:
        """Gram matrix of the induced form on the fundamental-weight basis."""
        scale = _form_scale(self, normalization)
        return tuple(tuple(v / scale for v in row) for row in self.inverse_cartan)

    def weyl_group_order(self) -> int:
        return math.factorial(self.rank + 1)


def _form_scale(rs: RootSystem, normalization: str) -> Fraction:
    if normalization == "short2":
        return Fraction(1)
    if normalization == "killing":
        return Fraction(2 * (rs.rank + 1))
    raise ValueError(f"unknown normalization {normalization!r}")


def _invert_rational(mat: Sequence[Sequence[int]]) -> Tuple[Tuple[Fraction, ...], ...]:
    n = len(mat)
    aug = [[Fraction(mat[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
           for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                c = aug[r][col]
                aug[r] = [x - c * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


@lru_cache(maxsize=None)
def build_root_system(series: str, rank: int) -> RootSystem:
    """Construct the type A_r root system, 1 <= r <= 4.

    Positive roots are generated from the simple ones by closure under
    simple-root addition, using root strings read off the Cartan matrix.
    """
    if series != "A":
        raise UnsupportedSeries(f"only series 'A' is supported, got {series!r}")
    if rank < 1:
        raise RankTooLarge(f"rank must be >= 1, got {rank}")
    if rank > MAX_RANK:
        raise RankTooLarge(f"rank capped at {MAX_RANK}, got {rank}")

    r = rank
    cartan = tuple(
        tuple(2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(r))
        for i in range(r)
    )
    # column j of the Cartan matrix = coordinates of alpha_j over the
    # fundamental weights, since cartan[i][j] = alpha_j(coroot_i)
    simple = tuple(tuple(cartan[i][j] for i in range(r)) for j in range(r))

    coords = list(simple)
    coeffs = [tuple(int(i == j) for i in range(r)) for j in range(r)]
    parents: list = [None] * r
    seen: Dict[Tuple[int, ...], int] = {c: idx for idx, c in enumerate(coeffs)}
    frontier = list(range(r))
    while frontier:
        new_frontier = []
        for idx in frontier:
            beta_coeffs = coeffs[idx]
            beta_coords = coords[idx]
            for i in range(r):
                # alpha_i-string through beta: q = p - <beta, coroot_i>
                p = 0
                probe = list(beta_coeffs)
                while True:
                    probe[i] -= 1
                    key = tuple(probe)
                    if min(key) < 0 or key not in seen:
                        break
                    p += 1
                if p - beta_coords[i] >= 1:
                    new_coeffs = tuple(
                        c + (1 if k == i else 0) for k, c in enumerate(beta_coeffs)
                    )
                    if new_coeffs in seen:
                        continue
                    new_coords = tuple(
                        beta_coords[k] + cartan[k][i] for k in range(r)
                    )
                    seen[new_coeffs] = len(coords)
                    coords.append(new_coords)
                    coeffs.append(new_coeffs)
                    parents.append((i, idx))
                    new_frontier.append(len(coords) - 1)
        frontier = new_frontier

    return RootSystem(
        series=series,
        rank=r,
        cartan_matrix=cartan,
        simple_roots=simple,
        positive_roots=tuple(coords),
        positive_root_coeffs=tuple(coeffs),
        positive_root_parents=tuple(parents),
        fundamental_weights=tuple(f"w{i + 1}" for i in range(r)),
        inverse_cartan=_invert_rational(cartan),
    )


def _check_weight(rs: RootSystem, w: Sequence) -> Tuple:
    if len(w) != rs.rank:
        raise NonIntegralWeight(
            f"weight has {len(w)} coordinates, expected {rs.rank}"
        )
    return tuple(_as_exact(x) for x in w)


def simple_reflection(rs: RootSystem, i: int, w: Sequence) -> Weight:
    w = tuple(w)
    c = w[i]
    return tuple(w[k] - c * rs.cartan_matrix[k][i] for k in range(rs.rank))


def weyl_orbit(rs: RootSystem, w: Sequence) -> Tuple[Weight, ...]:
    """Closure of ``w`` under simple reflections, in sorted order."""
    w = _check_weight(rs, w)
    if any(not isinstance(x, int) for x in w):
        raise NonIntegralWeight(f"weyl_orbit needs integer coordinates, got {w}")
    seen = {w}
    frontier = [w]
    while frontier:
        nxt = []
        for v in frontier:
            for i in range(rs.rank):
                u = simple_reflection(rs, i, v)
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
        frontier = nxt
    return tuple(sorted(seen))


def is_dominant_integral(rs: RootSystem, w: Sequence) -> bool:
    try:
        w = _check_weight(rs, w)
    except NonIntegralWeight:
        return False
    return all(isinstance(x, int) and x >= 0 for x in w)


def kappa_norm_sq(rs: RootSystem, w: Sequence, normalization: str = "killing") -> Fraction:
    """Exact squared norm of a weight in the chosen normalization."""
    w = _check_weight(rs, w)
    gram = rs.dual_gram(normalization)
    total = Fraction(0)
    for i, wi in enumerate(w):
        if not wi:
            continue
        for j, wj in enumerate(w):
            if wj:
                total += Fraction(wi) * gram[i][j] * Fraction(wj)
    return total


def kappa_norm(rs: RootSystem, w: Sequence, normalization: str = "killing") -> float:
    return math.sqrt(float(kappa_norm_sq(rs, w, normalization)))


def torus_kappa_norm_sq(rs: RootSystem, x: Sequence, normalization: str = "killing") -> Fraction:
    """Exact squared norm of a torus element given in coroot coordinates."""
    x = tuple(_as_exact(v) for v in x)
    if len(x) != rs.rank:
        raise NonIntegralWeight(f"torus element has {len(x)} coordinates, expected {rs.rank}")
    gram = rs.kappa_gram(normalization)
    total = Fraction(0)
    for i, xi in enumerate(x):
        if not xi:
            continue
        for j, xj in enumerate(x):
            if xj:
                total += Fraction(xi) * gram[i][j] * Fraction(xj)
    return total


def torus_kappa_norm(rs: RootSystem, x: Sequence, normalization: str = "killing") -> float:
    return math.sqrt(float(torus_kappa_norm_sq(rs, x, normalization)))


def pairing(w: Sequence, x: Sequence):
    """Pairing of a weight (fundamental basis) with a torus element (coroot basis)."""
    return sum(a * b for a, b in zip(w, x))


def weyl_dim(rs: RootSystem, w: Sequence) -> int:
    """Weyl dimension formula, evaluated exactly.

    Serves as the independent dimension oracle for the matrix construction
    of irreducibles.
    """
    w = _check_weight(rs, w)
    if not is_dominant_integral(rs, w):
        raise NotDominant(f"weight {w} is not dominant integral")
    num = Fraction(1)
    for coeff in rs.positive_root_coeffs:
        top = sum((wi + 1) * c for wi, c in zip(w, coeff))
        bot = sum(coeff)
        num *= Fraction(top, bot)
    assert num.denominator == 1
    return int(num)
