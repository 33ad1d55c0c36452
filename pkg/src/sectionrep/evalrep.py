"""Evaluation representations over a finite point set and their classification.

A representation datum is a finite list of (point, dominant weight) pairs
with pairwise distinct points.  ``realize`` turns the datum into concrete
matrices on the tensor product of the per-point irreducibles, ``extract``
recovers the datum from matrices by reading the highest weight functional
off the joint kernel of the raising operators, and ``classify_inducible``
decides which functionals on the abelian part arise this way when the
coefficient algebra is C^m with a permutation involution.

The coefficient algebra story: every finite family of characters of a
commutative involutive algebra surjects onto C^m, so C^m with an involution
permuting the coordinates is the universal finite model.  Coordinates fixed
by the involution carry involutive characters and may support dominant
integral weights; coordinates swapped in pairs behave like the
two-dimensional algebra with exchanged conjugation, whose real form is a
complex simple Lie algebra without nonzero bounded unitary representations,
so any support there is an obstruction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import (
    DimensionCap,
    DimensionMismatch,
    EmptyKernel,
    NonScalarAction,
    NotDominant,
    NumericalFailure,
    PointCollision,
)
from .irrep import CompactElement, Irrep, LieElement, build_irrep, lie_matrix
from .rootdata import RootSystem, Weight, is_dominant_integral, weyl_dim

REALIZE_DIMENSION_CAP = 2000
COMMUTANT_DIMENSION_CAP = 200
SINGULAR_VALUE_TOL = 1e-8
EIGENVALUE_ROUNDING_TOL = 1e-6
DENOMINATOR_CAP = 64

NON_INVOLUTIVE_SUPPORT = "NonInvolutiveSupport"
NEGATIVE_COEFFICIENT = "NegativeCoefficient"
NON_INTEGRAL_COEFFICIENT = "NonIntegralCoefficient"


@dataclass(frozen=True)
class Point:
    """An evaluation point; ``boundary_distance`` feeds the growth module."""

    id: str
    boundary_distance: Optional[float] = None


@dataclass(frozen=True)
class FiniteInvolutiveAlgebra:
    """C^m with pointwise product and a coordinate-permuting involution."""

    m: int
    involution: Tuple[int, ...]

    def __post_init__(self) -> None:
        if self.m < 1:
            raise DimensionMismatch(f"algebra dimension must be positive, got {self.m}")
        sigma = tuple(self.involution)
        if sorted(sigma) != list(range(self.m)):
            raise DimensionMismatch(f"{sigma} is not a permutation of 0..{self.m - 1}")
        if any(sigma[sigma[j]] != j for j in range(self.m)):
            raise DimensionMismatch(f"{sigma} is not an involution")
        object.__setattr__(self, "involution", sigma)

    @staticmethod
    def trivial(m: int) -> "FiniteInvolutiveAlgebra":
        return FiniteInvolutiveAlgebra(m, tuple(range(m)))

    def fixed_points(self) -> Tuple[int, ...]:
        return tuple(j for j in range(self.m) if self.involution[j] == j)

    def two_cycles(self) -> Tuple[Tuple[int, int], ...]:
        return tuple(
            (j, self.involution[j])
            for j in range(self.m)
            if self.involution[j] > j
        )


@dataclass(frozen=True)
class EvalRepSpec:
    """Classification datum: distinct points with dominant integral weights."""

    rs: RootSystem
    entries: Tuple[Tuple[Point, Weight], ...]
    involution: Optional[Tuple[int, ...]] = None

    def __post_init__(self) -> None:
        normalized = []
        for point, weight in self.entries:
            weight = tuple(int(x) for x in weight)
            if not is_dominant_integral(self.rs, weight):
                raise NotDominant(f"weight {weight} at point {point.id!r} is not dominant integral")
            normalized.append((point, weight))
        normalized.sort(key=lambda pw: pw[0].id)
        ids = [p.id for p, _ in normalized]
        if len(set(ids)) != len(ids):
            dup = sorted({x for x in ids if ids.count(x) > 1})
            raise PointCollision(f"duplicate evaluation points {dup}")
        object.__setattr__(self, "entries", tuple(normalized))

    @property
    def points(self) -> Tuple[Point, ...]:
        return tuple(p for p, _ in self.entries)

    @property
    def weights(self) -> Tuple[Weight, ...]:
        return tuple(w for _, w in self.entries)

    def as_dict(self) -> Dict[str, Weight]:
        return {p.id: w for p, w in self.entries}

    def total_dim(self) -> int:
        total = 1
        for _, w in self.entries:
            total *= weyl_dim(self.rs, w)
        return total


def tensor(a: EvalRepSpec, b: EvalRepSpec) -> EvalRepSpec:
    """Concatenate two data; the tensor product at a shared point is reducible
    and falls outside the classification data model."""
    if a.rs.rank != b.rs.rank:
        raise DimensionMismatch("root systems differ")
    shared = {p.id for p in a.points} & {p.id for p in b.points}
    if shared:
        raise PointCollision(f"points {sorted(shared)} occur in both factors")
    return EvalRepSpec(a.rs, a.entries + b.entries)


def equivalent(a: EvalRepSpec, b: EvalRepSpec) -> bool:
    if a.rs.rank != b.rs.rank:
        raise DimensionMismatch("root systems differ")
    return a.as_dict() == b.as_dict()


@dataclass(eq=False)
class RepMatrices:
    """Concrete generator matrices of a multi-site representation.

    ``e[i][j]``, ``f[i][j]``, ``h[i][j]`` are the matrices of the i-th simple
    raising/lowering/Cartan generator acting at site j, all on the full
    tensor product space in an orthonormal basis.
    """

    rs: RootSystem
    site_labels: Tuple[str, ...]
    site_dims: Tuple[int, ...]
    e: List[List[np.ndarray]]
    f: List[List[np.ndarray]]
    h: List[List[np.ndarray]]
    total_dim: int

    @property
    def num_sites(self) -> int:
        return len(self.site_labels)

    def generators(self) -> List[np.ndarray]:
        out: List[np.ndarray] = []
        for fam in (self.e, self.f, self.h):
            for row in fam:
                out.extend(row)
        return out

    def validate(self) -> float:
        """Max residual over the defining relations; small means healthy."""
        worst = 0.0
        r, m = self.rs.rank, self.num_sites
        cartan = self.rs.cartan_matrix

        def upd(x):
            nonlocal worst
            worst = max(worst, float(np.max(np.abs(x))) if x.size else 0.0)

        for j in range(m):
            for i in range(r):
                for k in range(r):
                    upd(_comm(self.h[i][j], self.e[k][j]) - cartan[i][k] * self.e[k][j])
                    upd(_comm(self.h[i][j], self.f[k][j]) + cartan[i][k] * self.f[k][j])
                    expected = self.h[i][j] if i == k else 0.0
                    upd(_comm(self.e[i][j], self.f[k][j]) - expected)
        for j, j2 in itertools.combinations(range(m), 2):
            for i in range(r):
                for k in range(r):
                    upd(_comm(self.e[i][j], self.e[k][j2]))
                    upd(_comm(self.e[i][j], self.f[k][j2]))
                    upd(_comm(self.h[i][j], self.h[k][j2]))
        return worst


def _comm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def _embed(mat: np.ndarray, dims: Sequence[int], site: int) -> np.ndarray:
    before = int(np.prod(dims[:site], dtype=np.int64)) if site else 1
    after = int(np.prod(dims[site + 1:], dtype=np.int64)) if site + 1 < len(dims) else 1
    out = mat
    if before > 1:
        out = np.kron(np.eye(before), out)
    if after > 1:
        out = np.kron(out, np.eye(after))
    return out


def realize(spec: EvalRepSpec) -> RepMatrices:
    """Concrete matrices: site j carries the irreducible of its weight and a
    generator at site j acts as identity everywhere else."""
    total = spec.total_dim()
    if total > REALIZE_DIMENSION_CAP:
        raise DimensionCap(f"total dimension {total} exceeds cap {REALIZE_DIMENSION_CAP}")
    r = spec.rs.rank
    site_reps = [build_irrep(spec.rs, w) for w in spec.weights]
    dims = tuple(rep.dim for rep in site_reps)
    gens: Dict[str, List[List[np.ndarray]]] = {"e": [], "f": [], "h": []}
    for i in range(r):
        rows: Dict[str, List[np.ndarray]] = {"e": [], "f": [], "h": []}
        for j, rep in enumerate(site_reps):
            dense = rep.dense_generators(orthonormal=True)
            for kind in ("e", "f", "h"):
                rows[kind].append(_embed(dense[kind][i].astype(complex), dims, j))
        for kind in ("e", "f", "h"):
            gens[kind].append(rows[kind])
    return RepMatrices(
        rs=spec.rs,
        site_labels=tuple(p.id for p in spec.points),
        site_dims=dims,
        e=gens["e"],
        f=gens["f"],
        h=gens["h"],
        total_dim=total,
    )


def direct_sum(a: RepMatrices, b: RepMatrices) -> RepMatrices:
    """Block-diagonal sum of two representations of the same site structure."""
    if a.rs.rank != b.rs.rank or a.num_sites != b.num_sites:
        raise DimensionMismatch("representations have incompatible shapes")

    def blk(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        out = np.zeros((x.shape[0] + y.shape[0],) * 2, dtype=complex)
        out[: x.shape[0], : x.shape[0]] = x
        out[x.shape[0]:, x.shape[0]:] = y
        return out

    r, m = a.rs.rank, a.num_sites
    return RepMatrices(
        rs=a.rs,
        site_labels=a.site_labels,
        site_dims=a.site_dims,
        e=[[blk(a.e[i][j], b.e[i][j]) for j in range(m)] for i in range(r)],
        f=[[blk(a.f[i][j], b.f[i][j]) for j in range(m)] for i in range(r)],
        h=[[blk(a.h[i][j], b.h[i][j]) for j in range(m)] for i in range(r)],
        total_dim=a.total_dim + b.total_dim,
    )


SectionValue = Union[LieElement, CompactElement]


def apply(spec: EvalRepSpec, section: Mapping[str, SectionValue]) -> np.ndarray:
    """Evaluate a section: sum over the spec's points of the site operator.

    Section values at points outside the spec are ignored (evaluation kills
    them); missing points contribute zero.
    """
    site_reps = [build_irrep(spec.rs, w) for w in spec.weights]
    dims = tuple(rep.dim for rep in site_reps)
    total = spec.total_dim()
    out = np.zeros((total, total), dtype=complex)
    for j, (point, _) in enumerate(spec.entries):
        value = section.get(point.id)
        if value is None:
            continue
        if isinstance(value, CompactElement):
            value = value.as_lie_element()
        local = lie_matrix(site_reps[j], value, orthonormal=True)
        out += _embed(local, dims, j)
    return out


# ---------------------------------------------------------------------------
# commutant


def _weight_blocks(rep: RepMatrices) -> List[List[int]]:
    n = rep.total_dim
    labels = np.zeros((n, 0), dtype=np.int64)
    cols = []
    for i in range(rep.rs.rank):
        for j in range(rep.num_sites):
            h = rep.h[i][j]
            off = float(np.max(np.abs(h - np.diag(np.diag(h))))) if n > 1 else 0.0
            if off > 1e-9:
                raise NumericalFailure("Cartan generators are not diagonal in this basis")
            cols.append(np.round(np.diag(h).real).astype(np.int64))
    labels = np.stack(cols, axis=1) if cols else np.zeros((n, 1), dtype=np.int64)
    groups: Dict[Tuple[int, ...], List[int]] = {}
    for idx in range(n):
        groups.setdefault(tuple(labels[idx]), []).append(idx)
    return list(groups.values())


def commutant_singular_values(rep: RepMatrices) -> np.ndarray:
    """Singular values of the commutator constraint system.

    Unknowns are restricted to matrices preserving the joint Cartan
    eigenspaces, which is exactly the condition of commuting with all the
    (diagonal) Cartan generators; commuting with the raising and lowering
    generators then implies commuting with everything, by the Jacobi
    identity.  Singular values below 1e-8 count as zero.
    """
    if rep.total_dim > COMMUTANT_DIMENSION_CAP:
        raise DimensionCap(
            f"total dimension {rep.total_dim} exceeds commutant cap {COMMUTANT_DIMENSION_CAP}"
        )
    blocks = _weight_blocks(rep)
    unknowns: List[Tuple[int, int]] = []
    for block in blocks:
        unknowns.extend(itertools.product(block, block))
    gens = [g for fam in (rep.e, rep.f) for row in fam for g in row]

    row_index: Dict[Tuple[int, int, int], int] = {}
    cols: List[Dict[int, complex]] = []
    for (p, q) in unknowns:
        col: Dict[int, complex] = {}
        for gi, g in enumerate(gens):
            for c in range(rep.total_dim):
                v = g[q, c]
                if v != 0:
                    key = (gi, p, c)
                    pos = row_index.setdefault(key, len(row_index))
                    col[pos] = col.get(pos, 0.0) + v
            for rrow in range(rep.total_dim):
                v = g[rrow, p]
                if v != 0:
                    key = (gi, rrow, q)
                    pos = row_index.setdefault(key, len(row_index))
                    col[pos] = col.get(pos, 0.0) - v
        cols.append(col)

    mat = np.zeros((len(row_index), len(unknowns)), dtype=complex)
    for u, col in enumerate(cols):
        for pos, v in col.items():
            mat[pos, u] = v
    if mat.size == 0:
        return np.zeros(0)
    try:
        return np.linalg.svd(mat, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD of the commutant system failed: {exc}") from exc


def commutant_dim(rep: RepMatrices) -> int:
    """Dimension of the space of matrices commuting with all generators."""
    blocks = _weight_blocks(rep)
    num_unknowns = sum(len(b) ** 2 for b in blocks)
    svals = commutant_singular_values(rep)
    rank = int(np.sum(svals >= SINGULAR_VALUE_TOL))
    return num_unknowns - rank


# ---------------------------------------------------------------------------
# highest weight extraction and classification


@dataclass(frozen=True)
class Functional:
    """Linear functional on the abelian part: values[i][j] on coroot i at site j."""

    alg: FiniteInvolutiveAlgebra
    rs: RootSystem
    values: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        vals = tuple(tuple(Fraction(x) for x in row) for row in self.values)
        if len(vals) != self.rs.rank or any(len(row) != self.alg.m for row in vals):
            raise DimensionMismatch(
                f"functional must be {self.rs.rank} x {self.alg.m}"
            )
        object.__setattr__(self, "values", vals)

    def column(self, j: int) -> Tuple[Fraction, ...]:
        return tuple(self.values[i][j] for i in range(self.rs.rank))


@dataclass(frozen=True)
class HighestWeightData:
    e_dim: int
    functional: Optional[Functional]


def extract_highest_weight(rep: RepMatrices) -> HighestWeightData:
    """Dimension of the joint kernel of the raising operators, and the
    functional the Cartan part acts by when that kernel is a line.

    Only the simple raising operators enter: every other positive-root
    operator is an iterated commutator of simple ones, so anything they all
    kill is killed by the whole raising half as well.
    """
    n = rep.total_dim
    mats = [rep.e[i][j] for i in range(rep.rs.rank) for j in range(rep.num_sites)]
    if mats:
        stacked = np.vstack(mats)
        try:
            _, svals, vh = np.linalg.svd(stacked)
        except np.linalg.LinAlgError as exc:
            raise NumericalFailure(f"SVD of raising operators failed: {exc}") from exc
        rank = int(np.sum(svals >= SINGULAR_VALUE_TOL))
        null = vh[rank:].conj().T
    else:
        null = np.eye(n, dtype=complex)
    e_dim = null.shape[1]
    if e_dim == 0:
        raise EmptyKernel("raising operators have trivial joint kernel")
    if e_dim != 1:
        return HighestWeightData(e_dim=e_dim, functional=None)

    if rep.num_sites == 0:
        # empty point set: the trivial representation, zero functional on C^1
        zero = tuple(tuple([Fraction(0)]) for _ in range(rep.rs.rank))
        return HighestWeightData(1, Functional(FiniteInvolutiveAlgebra.trivial(1), rep.rs, zero))

    v = null[:, 0]
    values: List[List[Fraction]] = []
    for i in range(rep.rs.rank):
        row: List[Fraction] = []
        for j in range(rep.num_sites):
            h = rep.h[i][j]
            image = h @ v
            val = complex(np.vdot(v, image))
            resid = float(np.linalg.norm(image - val * v))
            if resid > EIGENVALUE_ROUNDING_TOL * (1.0 + abs(val)):
                raise NonScalarAction(
                    f"Cartan action on the kernel line is not scalar (residual {resid:.2e})"
                )
            if abs(val.imag) > EIGENVALUE_ROUNDING_TOL:
                raise NonScalarAction(f"Cartan eigenvalue {val} is not real")
            frac = Fraction(val.real).limit_denominator(DENOMINATOR_CAP)
            if abs(float(frac) - val.real) > EIGENVALUE_ROUNDING_TOL:
                raise NonScalarAction(
                    f"Cartan eigenvalue {val.real} is not rational within tolerance"
                )
            row.append(frac)
        values.append(row)
    functional = Functional(
        alg=FiniteInvolutiveAlgebra.trivial(rep.num_sites),
        rs=rep.rs,
        values=tuple(tuple(row) for row in values),
    )
    return HighestWeightData(e_dim=1, functional=functional)


@dataclass(frozen=True)
class ClassifyResult:
    """Outcome of the inducibility decision; a total function of the input."""

    spec: Optional[EvalRepSpec]
    reason: Optional[str] = None

    @property
    def inducible(self) -> bool:
        return self.spec is not None


def classify_inducible(functional: Functional) -> ClassifyResult:
    """Decide whether the functional is a highest weight of a bounded
    irreducible representation over its coefficient algebra.

    Inducible iff the functional vanishes on every coordinate swapped by the
    involution and each fixed coordinate carries a dominant integral weight;
    the representation datum then has one evaluation point per fixed
    coordinate with a nonzero column.
    """
    alg = functional.alg
    for j, j2 in alg.two_cycles():
        for col in (j, j2):
            if any(functional.values[i][col] != 0 for i in range(functional.rs.rank)):
                return ClassifyResult(None, NON_INVOLUTIVE_SUPPORT)
    fixed = alg.fixed_points()
    for j in fixed:
        if any(functional.values[i][j] < 0 for i in range(functional.rs.rank)):
            return ClassifyResult(None, NEGATIVE_COEFFICIENT)
    for j in fixed:
        if any(functional.values[i][j].denominator != 1 for i in range(functional.rs.rank)):
            return ClassifyResult(None, NON_INTEGRAL_COEFFICIENT)
    entries = []
    for j in fixed:
        column = functional.column(j)
        if any(column):
            weight = tuple(int(x) for x in column)
            entries.append((Point(f"p{j + 1}"), weight))
    return ClassifyResult(EvalRepSpec(functional.rs, tuple(entries)))


# ---------------------------------------------------------------------------
# serialization


def spec_to_json(spec: EvalRepSpec) -> dict:
    entries = []
    for point, weight in spec.entries:
        item: dict = {"point": point.id, "weight": list(weight)}
        if point.boundary_distance is not None:
            item["boundary_distance"] = point.boundary_distance
        entries.append(item)
    out = {"series": spec.rs.series, "rank": spec.rs.rank, "entries": entries}
    if spec.involution is not None:
        out["involution"] = list(spec.involution)
    return out


def spec_from_json(data: dict) -> EvalRepSpec:
    from .errors import SchemaError
    from .rootdata import build_root_system

    if not isinstance(data, dict):
        raise SchemaError("spec must be a JSON object")
    try:
        series = data.get("series", "A")
        rank = int(data["rank"])
        raw_entries = data["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad spec fields: {exc}") from exc
    rs = build_root_system(series, rank)
    entries = []
    if not isinstance(raw_entries, list):
        raise SchemaError("entries must be a list")
    for item in raw_entries:
        try:
            point = Point(str(item["point"]), item.get("boundary_distance"))
            weight = tuple(int(x) for x in item["weight"])
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad entry {item!r}: {exc}") from exc
        entries.append((point, weight))
    involution = data.get("involution")
    if involution is not None:
        involution = tuple(int(x) for x in involution)
        FiniteInvolutiveAlgebra(len(involution), involution)
    return EvalRepSpec(rs, tuple(entries), involution=involution)


def _parse_fraction(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, (int, float)):
        return Fraction(x).limit_denominator(10**9)
    from .errors import SchemaError

    raise SchemaError(f"bad rational value {x!r}")


def functional_to_json(functional: Functional) -> dict:
    def frac(x: Fraction) -> str:
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    return {
        "series": functional.rs.series,
        "rank": functional.rs.rank,
        "m": functional.alg.m,
        "involution": list(functional.alg.involution),
        "values": [[frac(v) for v in row] for row in functional.values],
    }


def functional_from_json(data: dict) -> Functional:
    from .errors import SchemaError
    from .rootdata import build_root_system

    if not isinstance(data, dict):
        raise SchemaError("functional must be a JSON object")
    try:
        rs = build_root_system(data.get("series", "A"), int(data["rank"]))
        m = int(data["m"])
        involution = tuple(int(x) for x in data.get("involution", range(m)))
        values = tuple(tuple(_parse_fraction(v) for v in row) for row in data["values"])
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad functional fields: {exc}") from exc
    return Functional(FiniteInvolutiveAlgebra(m, involution), rs, values)
