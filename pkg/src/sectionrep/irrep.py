"""Finite-dimensional irreducibles of sl(r+1) with exact invariant Gram data.

The module of highest weight ``lambda`` is built by cyclic lowering inside
tensor products of exterior-power fundamentals: each fundamental weight is
realized on a wedge power of the defining representation (integer matrices,
orthonormal standard basis), factors are tensored on one at a time, and
after every factor the module is cut down to the span of the lowering
operators applied to the top vector.  Restricting one factor at a time keeps
every ambient space at most ``dim * (fundamental dim)`` instead of the full
tensor power.

Because wedge bases are orthonormal and raising/lowering generators are
transposes of each other there, the inherited inner product is exact and
makes the compact real form act by skew-hermitian matrices.  All structure
(kernels, Gram matrices, generator matrices) is exact rational; floating
point appears only in the spectral-norm routines at the end.

Basis vectors are rescaled by powers of two so that Gram entries stay inside
the float64 range no matter how long the lowering chains get.
"""

from __future__ import annotations

import itertools
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import linalg
from .errors import DimensionCap, NotDominant, NumericalFailure
from .linalg import Echelon, Mat, Vec, mat_commutator, mat_mul, mat_scaled, mat_to_dense
from .rootdata import (
    RootSystem,
    Weight,
    build_root_system,
    is_dominant_integral,
    kappa_norm,
    pairing,
    weyl_dim,
    weyl_orbit,
)

DIMENSION_CAP = 2000

ONE = Fraction(1)


# ---------------------------------------------------------------------------
# exact module data


@dataclass(eq=False)
class Irrep:
    """Irreducible module with exact Chevalley generators and Gram matrix.

    ``e_mats[i] / f_mats[i] / h_mats[i]`` are the matrices of the i-th simple
    raising, lowering and Cartan generator, column-major sparse over
    ``Fraction``.  ``gram`` is the invariant inner product on the stored
    basis; it is block diagonal over the weight grading recorded in
    ``basis_weights``.  The highest weight vector is basis vector 0.
    """

    rs: RootSystem
    highest_weight: Weight
    dim: int
    e_mats: List[Mat]
    f_mats: List[Mat]
    h_mats: List[Mat]
    gram: Mat
    basis_weights: List[Weight]
    hw_vector_index: int = 0
    _cache: dict = field(default_factory=dict, repr=False)

    # -- float views -------------------------------------------------------

    def gram_dense(self) -> np.ndarray:
        if "gram" not in self._cache:
            self._cache["gram"] = mat_to_dense(self.gram, self.dim)
        return self._cache["gram"]

    def _cholesky(self) -> Tuple[np.ndarray, np.ndarray]:
        if "chol" not in self._cache:
            try:
                L = np.linalg.cholesky(self.gram_dense())
                Linv = np.linalg.inv(L)
            except np.linalg.LinAlgError as exc:
                raise NumericalFailure(f"Cholesky of Gram matrix failed: {exc}") from exc
            self._cache["chol"] = (L, Linv)
        return self._cache["chol"]

    def orthonormalize(self, mat: np.ndarray) -> np.ndarray:
        """Matrix of the same operator in an orthonormalized basis."""
        L, Linv = self._cholesky()
        return L.T @ mat @ Linv.T

    def root_generators(self) -> Tuple[List[Mat], List[Mat]]:
        """Exact raising/lowering matrices for every positive root."""
        if "roots" not in self._cache:
            self._cache["roots"] = extend_to_all_roots(self.rs, self.e_mats, self.f_mats)
        return self._cache["roots"]

    def dense_generators(self, orthonormal: bool = True) -> dict:
        key = ("dense", orthonormal)
        if key not in self._cache:
            e_all, f_all = self.root_generators()
            conv = self.orthonormalize if orthonormal else (lambda m: m)
            self._cache[key] = {
                "e": [conv(mat_to_dense(m, self.dim)) for m in e_all],
                "f": [conv(mat_to_dense(m, self.dim)) for m in f_all],
                "h": [conv(mat_to_dense(m, self.dim)) for m in self.h_mats],
            }
        return self._cache[key]


@dataclass(frozen=True)
class _WedgeModule:
    """Fundamental representation on a wedge power of the defining one."""

    dim: int
    weights: Tuple[Weight, ...]
    e_mats: Tuple[Mat, ...]
    f_mats: Tuple[Mat, ...]
    hw_index: int


@lru_cache(maxsize=None)
def _fundamental(rank: int, k: int) -> _WedgeModule:
    """Wedge power k of the defining representation of sl(rank+1)."""
    n = rank + 1
    subsets = list(itertools.combinations(range(n), k))
    index = {s: i for i, s in enumerate(subsets)}
    weights = tuple(
        tuple(int(i in s) - int(i + 1 in s) for i in range(rank)) for s in subsets
    )
    e_mats: List[Mat] = []
    f_mats: List[Mat] = []
    for i in range(rank):
        e: Mat = {}
        f: Mat = {}
        for s in subsets:
            if i + 1 in s and i not in s:
                t = tuple(sorted(x if x != i + 1 else i for x in s))
                e[index[s]] = {index[t]: ONE}
            if i in s and i + 1 not in s:
                t = tuple(sorted(x if x != i else i + 1 for x in s))
                f[index[s]] = {index[t]: ONE}
        e_mats.append(e)
        f_mats.append(f)
    return _WedgeModule(
        dim=len(subsets),
        weights=weights,
        e_mats=tuple(e_mats),
        f_mats=tuple(f_mats),
        hw_index=index[tuple(range(k))],
    )


def extend_to_all_roots(
    rs: RootSystem, e_simple: Sequence[Mat], f_simple: Sequence[Mat]
) -> Tuple[List[Mat], List[Mat]]:
    """Raising/lowering matrices for all positive roots via commutators.

    For a non-simple root recorded as alpha_i + beta the raising matrix is
    [E_i, E_beta] and the lowering one is -[F_i, F_beta]; with that sign the
    lowering matrix is the Gram adjoint of the raising one, so both recipes
    produce the same Lie algebra element in every representation.
    """
    e_all = list(e_simple)
    f_all = list(f_simple)
    for idx in range(rs.rank, rs.num_positive_roots):
        parent = rs.positive_root_parents[idx]
        assert parent is not None
        i, b = parent
        e_all.append(mat_commutator(e_simple[i], e_all[b]))
        f_all.append(mat_scaled(mat_commutator(f_simple[i], f_all[b]), Fraction(-1)))
    return e_all, f_all


# ---------------------------------------------------------------------------
# construction


class _Space:
    __slots__ = ("echelon", "basis")

    def __init__(self) -> None:
        self.echelon = Echelon()
        self.basis: List[dict] = []


def _tensor_step(rs: RootSystem, left: Irrep, right: _WedgeModule) -> Irrep:
    """Cut the highest-weight cyclic submodule out of ``left (x) right``.

    Ambient vectors are sparse over pair indices ``(a, b)``; the ambient
    inner product is ``gram_left (x) identity``.  Closure under the lowering
    operators proceeds weight space by weight space, which keeps every
    elimination local and small.
    """
    r = rs.rank
    gram_left = left.gram

    def apply_pair(mats_left: Sequence[Mat], mats_right: Sequence[Mat], i: int, v: dict) -> dict:
        out: dict = {}
        ml = mats_left[i]
        mr = mats_right[i]
        for (a, b), c in v.items():
            col = ml.get(a)
            if col:
                for a2, val in col.items():
                    key = (a2, b)
                    new = out.get(key, 0) + c * val
                    if new:
                        out[key] = new
                    else:
                        out.pop(key, None)
            col = mr.get(b)
            if col:
                for b2, val in col.items():
                    key = (a, b2)
                    new = out.get(key, 0) + c * val
                    if new:
                        out[key] = new
                    else:
                        out.pop(key, None)
        return out

    def amb_dot(u: dict, v: dict) -> Fraction:
        total = Fraction(0)
        for (a, b), cu in u.items():
            col = gram_left.get(a)
            if not col:
                continue
            for a2, g in col.items():
                cv = v.get((a2, b))
                if cv:
                    total += cu * g * cv
        return total

    top_weight = tuple(
        x + y for x, y in zip(left.basis_weights[left.hw_vector_index], right.weights[right.hw_index])
    )
    spaces: Dict[Weight, _Space] = {}

    def accept(vec: dict, wt: Weight) -> Optional[dict]:
        space = spaces.setdefault(wt, _Space())
        rem = space.echelon.residual(vec)
        if not rem:
            return None
        scale = linalg.pow2_unit_scale(amb_dot(rem, rem))
        b = linalg.vec_scaled(rem, scale)
        local = len(space.basis)
        space.basis.append(b)
        space.echelon.add(b, {local: ONE})
        return b

    hw_vec = {(left.hw_vector_index, right.hw_index): ONE}
    accept(hw_vec, top_weight)
    queue = deque([(hw_vec, top_weight)])
    while queue:
        vec, wt = queue.popleft()
        for i in range(r):
            img = apply_pair(left.f_mats, right.f_mats, i, vec)
            if not img:
                continue
            wt2 = tuple(wt[k] - rs.cartan_matrix[k][i] for k in range(r))
            added = accept(img, wt2)
            if added is not None:
                queue.append((added, wt2))

    # deterministic global order: by depth below the top weight, then lex
    inv_cartan = rs.inverse_cartan

    def level(wt: Weight) -> int:
        val = Fraction(0)
        for i in range(r):
            for j in range(r):
                val += inv_cartan[i][j] * (top_weight[j] - wt[j])
        assert val.denominator == 1
        return int(val)

    ordered = sorted(spaces.keys(), key=lambda wt: (level(wt), wt))
    offsets: Dict[Weight, int] = {}
    basis_weights: List[Weight] = []
    pos = 0
    for wt in ordered:
        offsets[wt] = pos
        k = len(spaces[wt].basis)
        basis_weights.extend([wt] * k)
        pos += k
    dim = pos
    assert ordered[0] == top_weight and len(spaces[top_weight].basis) == 1

    e_mats: List[Mat] = [{} for _ in range(r)]
    f_mats: List[Mat] = [{} for _ in range(r)]
    h_mats: List[Mat] = [{} for _ in range(r)]
    gram: Mat = {}
    for wt in ordered:
        space = spaces[wt]
        off = offsets[wt]
        for i in range(r):
            hval = Fraction(wt[i])
            if hval:
                for s in range(len(space.basis)):
                    h_mats[i][off + s] = {off + s: hval}
        for s, b in enumerate(space.basis):
            for i in range(r):
                img = apply_pair(left.e_mats, right.e_mats, i, b)
                if img:
                    wt2 = tuple(wt[k] + rs.cartan_matrix[k][i] for k in range(r))
                    combo = spaces[wt2].echelon.solve(img)
                    assert combo is not None, "raising image left the module"
                    off2 = offsets[wt2]
                    e_mats[i][off + s] = {off2 + t: c for t, c in combo.items()}
                img = apply_pair(left.f_mats, right.f_mats, i, b)
                if img:
                    wt2 = tuple(wt[k] - rs.cartan_matrix[k][i] for k in range(r))
                    combo = spaces[wt2].echelon.solve(img)
                    assert combo is not None, "lowering image left the module"
                    off2 = offsets[wt2]
                    f_mats[i][off + s] = {off2 + t: c for t, c in combo.items()}
            for t in range(s, len(space.basis)):
                val = amb_dot(b, space.basis[t])
                if val:
                    gram.setdefault(off + s, {})[off + t] = val
                    if t != s:
                        gram.setdefault(off + t, {})[off + s] = val

    return Irrep(
        rs=rs,
        highest_weight=top_weight,
        dim=dim,
        e_mats=e_mats,
        f_mats=f_mats,
        h_mats=h_mats,
        gram=gram,
        basis_weights=basis_weights,
    )


def _trivial(rs: RootSystem) -> Irrep:
    r = rs.rank
    return Irrep(
        rs=rs,
        highest_weight=tuple(0 for _ in range(r)),
        dim=1,
        e_mats=[{} for _ in range(r)],
        f_mats=[{} for _ in range(r)],
        h_mats=[{} for _ in range(r)],
        gram={0: {0: ONE}},
        basis_weights=[tuple(0 for _ in range(r))],
    )


_BUILD_CACHE: Dict[Tuple[int, Weight], Irrep] = {}


def _build_chain(rs: RootSystem, weight: Weight) -> Irrep:
    key = (rs.rank, weight)
    hit = _BUILD_CACHE.get(key)
    if hit is not None:
        return hit
    if all(x == 0 for x in weight):
        result = _trivial(rs)
    else:
        k = max(i for i, x in enumerate(weight) if x > 0)
        lower = tuple(x - 1 if i == k else x for i, x in enumerate(weight))
        result = _tensor_step(rs, _build_chain(rs, lower), _fundamental(rs.rank, k + 1))
    _BUILD_CACHE[key] = result
    return result


def build_irrep(rs: RootSystem, weight: Sequence[int]) -> Irrep:
    """Irreducible module of the given dominant integral highest weight.

    The returned dimension always matches the Weyl dimension formula; the
    formula is also used up front to reject oversized requests.
    """
    weight = tuple(int(x) for x in weight)
    if not is_dominant_integral(rs, weight):
        raise NotDominant(f"{weight} is not dominant integral")
    target = weyl_dim(rs, weight)
    if target > DIMENSION_CAP:
        raise DimensionCap(f"dimension {target} exceeds cap {DIMENSION_CAP}")
    result = _build_chain(rs, weight)
    assert result.dim == target, (result.dim, target)
    return result


def weight_multiplicities(rep: Irrep) -> Dict[Weight, int]:
    """Dimensions of the joint Cartan eigenspaces, exactly."""
    return dict(Counter(rep.basis_weights))


# ---------------------------------------------------------------------------
# Lie algebra elements and norms


@dataclass(frozen=True)
class LieElement:
    """Complex combination over the Chevalley basis.

    ``cartan[i]`` multiplies H_i; ``raising[a]`` and ``lowering[a]`` multiply
    the raising/lowering generators of the a-th positive root (the first
    ``rank`` indices are the simple roots, in root-system order).
    """

    cartan: Tuple[complex, ...]
    raising: Tuple[complex, ...]
    lowering: Tuple[complex, ...]


@dataclass(frozen=True)
class CompactElement:
    """Element of the compact real form su(r+1).

    Represents ``sum c_i iH_i + sum a_g (E_g - F_g) + sum b_g i(E_g + F_g)``
    with real coefficients, ``g`` running over the positive roots.  Such
    combinations span the compact form, and every representation built here
    maps them to Gram-skew-hermitian matrices.
    """

    cartan: Tuple[float, ...]
    real_root: Tuple[float, ...]
    imag_root: Tuple[float, ...]

    @staticmethod
    def zero(rs: RootSystem) -> "CompactElement":
        return CompactElement(
            (0.0,) * rs.rank,
            (0.0,) * rs.num_positive_roots,
            (0.0,) * rs.num_positive_roots,
        )

    @staticmethod
    def torus(rs: RootSystem, coords: Sequence[float]) -> "CompactElement":
        """The torus element with the given coroot coordinates."""
        if len(coords) != rs.rank:
            raise ValueError("coordinate count does not match the rank")
        return CompactElement(
            tuple(float(c) for c in coords),
            (0.0,) * rs.num_positive_roots,
            (0.0,) * rs.num_positive_roots,
        )

    @staticmethod
    def from_simple(
        rs: RootSystem,
        c: Sequence[float] = (),
        a: Sequence[float] = (),
        b: Sequence[float] = (),
    ) -> "CompactElement":
        """Element supported on the Cartan and the simple-root directions."""
        npos = rs.num_positive_roots

        def pad(xs, n):
            xs = tuple(float(x) for x in xs)
            if len(xs) > n:
                raise ValueError("too many coefficients")
            return xs + (0.0,) * (n - len(xs))

        return CompactElement(pad(c, rs.rank), pad(a, npos), pad(b, npos))

    @staticmethod
    def random(rs: RootSystem, rng: np.random.Generator, scale: float = 1.0) -> "CompactElement":
        npos = rs.num_positive_roots
        return CompactElement(
            tuple(rng.normal(0.0, scale) for _ in range(rs.rank)),
            tuple(rng.normal(0.0, scale) for _ in range(npos)),
            tuple(rng.normal(0.0, scale) for _ in range(npos)),
        )

    def scaled(self, t: float) -> "CompactElement":
        return CompactElement(
            tuple(t * x for x in self.cartan),
            tuple(t * x for x in self.real_root),
            tuple(t * x for x in self.imag_root),
        )

    def as_lie_element(self) -> LieElement:
        return LieElement(
            cartan=tuple(1j * c for c in self.cartan),
            raising=tuple(a + 1j * b for a, b in zip(self.real_root, self.imag_root)),
            lowering=tuple(-a + 1j * b for a, b in zip(self.real_root, self.imag_root)),
        )


def lie_matrix(rep: Irrep, elem: LieElement, orthonormal: bool = True) -> np.ndarray:
    """Complex matrix of a Lie algebra element in the representation."""
    gens = rep.dense_generators(orthonormal=orthonormal)
    out = np.zeros((rep.dim, rep.dim), dtype=complex)
    for i, c in enumerate(elem.cartan):
        if c:
            out += c * gens["h"][i]
    for a, c in enumerate(elem.raising):
        if c:
            out += c * gens["e"][a]
    for a, c in enumerate(elem.lowering):
        if c:
            out += c * gens["f"][a]
    return out


def operator_norm(rep: Irrep, x: CompactElement) -> float:
    """Spectral norm of the represented compact element.

    The basis is orthonormalized through a floating-point Cholesky factor of
    the exact Gram matrix, after which the matrix is skew-hermitian and the
    norm is its largest absolute eigenvalue (documented tolerance 1e-9).
    """
    mat = lie_matrix(rep, x.as_lie_element(), orthonormal=True)
    scale = np.linalg.norm(mat)
    herm = 1j * mat
    resid = np.linalg.norm(herm - herm.conj().T)
    if resid > 1e-7 * max(1.0, scale):
        raise NumericalFailure(f"represented element is not skew-hermitian (residual {resid:.2e})")
    try:
        eigs = np.linalg.eigvalsh(0.5 * (herm + herm.conj().T))
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigenvalue solve failed: {exc}") from exc
    return float(np.max(np.abs(eigs))) if eigs.size else 0.0


def torus_norm(rep: Irrep, coords: Sequence) -> object:
    """Norm of a torus element: max pairing against the Weyl orbit.

    Exact (int or Fraction) whenever the coordinates are exact.
    """
    orbit = weyl_orbit(rep.rs, rep.highest_weight)
    return max(abs(pairing(w, coords)) for w in orbit)


def compact_kappa_norm(rs: RootSystem, x: CompactElement, normalization: str = "killing") -> float:
    """Norm of a compact element, computed in the defining representation.

    The trace form of the defining representation realizes the squared-
    length-2 normalization; the Killing form is 2(r+1) times it.
    """
    mat = _defining_matrix(rs, x.as_lie_element())
    nsq = -np.trace(mat @ mat).real
    if normalization == "killing":
        nsq *= 2 * (rs.rank + 1)
    elif normalization != "short2":
        raise ValueError(f"unknown normalization {normalization!r}")
    return float(np.sqrt(max(nsq, 0.0)))


@lru_cache(maxsize=None)
def compact_coefficient_gram(rank: int, normalization: str = "killing") -> np.ndarray:
    """Quadratic form of the squared norm on compact coefficient vectors.

    Coefficients are laid out as (cartan, real_root, imag_root); the entry
    G[a][b] is minus the defining-representation trace of the product of the
    corresponding basis elements, scaled per the normalization.
    """
    rs = build_root_system("A", rank)
    npos = rs.num_positive_roots
    size = rank + 2 * npos
    basis = []
    for i in range(rank):
        e = CompactElement.zero(rs)
        basis.append(
            CompactElement(
                tuple(1.0 if k == i else 0.0 for k in range(rank)), e.real_root, e.imag_root
            )
        )
    for a in range(npos):
        z = CompactElement.zero(rs)
        basis.append(
            CompactElement(z.cartan, tuple(1.0 if k == a else 0.0 for k in range(npos)), z.imag_root)
        )
    for a in range(npos):
        z = CompactElement.zero(rs)
        basis.append(
            CompactElement(z.cartan, z.real_root, tuple(1.0 if k == a else 0.0 for k in range(npos)))
        )
    mats = [_defining_matrix(rs, x.as_lie_element()) for x in basis]
    gram = np.zeros((size, size))
    for a in range(size):
        for b in range(size):
            gram[a, b] = -np.trace(mats[a] @ mats[b]).real
    if normalization == "killing":
        gram *= 2 * (rank + 1)
    elif normalization != "short2":
        raise ValueError(f"unknown normalization {normalization!r}")
    return gram


@lru_cache(maxsize=None)
def _defining_dense(rank: int) -> dict:
    n = rank + 1
    e_simple: List[Mat] = [{i + 1: {i: ONE}} for i in range(rank)]
    f_simple: List[Mat] = [{i: {i + 1: ONE}} for i in range(rank)]
    h_mats: List[Mat] = [
        {i: {i: ONE}, i + 1: {i + 1: -ONE}} for i in range(rank)
    ]
    rs = build_root_system("A", rank)
    e_all, f_all = extend_to_all_roots(rs, e_simple, f_simple)
    return {
        "e": [mat_to_dense(m, n) for m in e_all],
        "f": [mat_to_dense(m, n) for m in f_all],
        "h": [mat_to_dense(m, n) for m in h_mats],
    }


def _defining_matrix(rs: RootSystem, elem: LieElement) -> np.ndarray:
    gens = _defining_dense(rs.rank)
    n = rs.rank + 1
    out = np.zeros((n, n), dtype=complex)
    for i, c in enumerate(elem.cartan):
        if c:
            out += c * gens["h"][i]
    for a, c in enumerate(elem.raising):
        if c:
            out += c * gens["e"][a]
    for a, c in enumerate(elem.lowering):
        if c:
            out += c * gens["f"][a]
    return out


# ---------------------------------------------------------------------------
# serialization


def _frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _mat_strings(mat: Mat, n: int) -> List[List[str]]:
    rows = linalg.mat_to_fraction_rows(mat, n)
    return [[_frac_str(v) for v in row] for row in rows]


def irrep_to_json(rep: Irrep, include_matrices: bool = True) -> dict:
    out = {
        "series": rep.rs.series,
        "rank": rep.rs.rank,
        "highest_weight": list(rep.highest_weight),
        "dimension": rep.dim,
        "hw_vector_index": rep.hw_vector_index,
    }
    if include_matrices:
        n = rep.dim
        out["generators"] = [
            {
                "e": _mat_strings(rep.e_mats[i], n),
                "f": _mat_strings(rep.f_mats[i], n),
                "h": _mat_strings(rep.h_mats[i], n),
            }
            for i in range(rep.rs.rank)
        ]
        out["gram"] = _mat_strings(rep.gram, n)
    return out
