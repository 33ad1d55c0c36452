"""Boundary growth condition on the one-dimensional model X = [0, 1].

The boundary is the single point 0, so the distance of an interior point to
the boundary is just its coordinate.  Sections arrive sampled on a uniform
grid; their C^k norms are computed by order-2 central finite differences,
with the documented O(h^2) derivative error plus an O(h) granularity error
in the supremum.  The extension decision itself is symbolic: a family of
evaluation points with weight norms w_n at distances d_n extends to
C^k-sections vanishing to order k at the boundary exactly when
sum w_n * d_n^k is finite, which the term rule grammar decides.

In this flat one-dimensional model the connection-trivialization constant
of the general estimate equals 1, so it never appears explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .errors import GridTooCoarse, InputError, OrderViolation, SchemaError
from .evalrep import EvalRepSpec
from .irrep import (
    CompactElement,
    Irrep,
    build_irrep,
    compact_coefficient_gram,
    compact_kappa_norm,
    operator_norm,
)
from .rootdata import RootSystem, kappa_norm
from .series import TermRule, Verdict, always_positive, decide_product_sum

ORDER_CHECK_TOL = 0.5


@dataclass(frozen=True)
class GrowthSpec:
    """Decision data: order k, boundary distances d_n, weight norms w_n."""

    k: int
    distance_rule: TermRule
    weight_norm_rule: TermRule

    def __post_init__(self):
        if self.k < 0:
            raise SchemaError(f"order k must be nonnegative, got {self.k}")
        if not always_positive(self.distance_rule):
            raise SchemaError("distance rule must be strictly positive (interior points)")


def extends_to_ck(spec: GrowthSpec) -> Verdict:
    """Does the family extend to C^k sections with vanishing k-jet?

    Holds exactly when sum over n of w_n * d_n^k converges.
    """
    return decide_product_sum(spec.weight_norm_rule, spec.distance_rule, spec.k)


@dataclass(frozen=True, eq=False)
class SampledSection:
    """Section of the trivial bundle over [0, 1], sampled on a uniform grid.

    ``values`` is either a 1-d array of scalars multiplying a fixed compact
    direction of unit norm, or a 2-d array whose rows are compact-element
    coefficient vectors (cartan, real roots, imaginary roots) at the grid
    points; the latter needs ``rs``.
    """

    grid_step: float
    values: np.ndarray
    rs: Optional[RootSystem] = None
    direction: Optional[CompactElement] = None
    normalization: str = "killing"

    def __post_init__(self):
        if self.grid_step <= 0:
            raise SchemaError(f"grid step must be positive, got {self.grid_step}")
        values = np.asarray(self.values, dtype=float)
        if values.ndim not in (1, 2):
            raise SchemaError("values must be scalars or coefficient rows")
        if values.ndim == 2 and self.rs is None:
            raise SchemaError("coefficient-valued sections need a root system")
        object.__setattr__(self, "values", values)

    @property
    def num_points(self) -> int:
        return self.values.shape[0]

    def grid(self) -> np.ndarray:
        return self.grid_step * np.arange(self.num_points)

    def _index_of(self, x: float) -> int:
        idx = int(round(x / self.grid_step))
        if not 0 <= idx < self.num_points:
            raise InputError(f"point {x} falls outside the sampled grid")
        return idx

    def value_at(self, x: float) -> float:
        if self.values.ndim != 1:
            raise InputError("value_at is defined for scalar sections")
        return float(self.values[self._index_of(x)])

    def element_at(self, x: float) -> CompactElement:
        """Compact element at the nearest grid point of a coefficient section."""
        if self.values.ndim != 2 or self.rs is None:
            raise InputError("element_at is defined for coefficient-valued sections")
        row = self.values[self._index_of(x)]
        r = self.rs.rank
        npos = self.rs.num_positive_roots
        if row.shape[0] != r + 2 * npos:
            raise SchemaError(
                f"coefficient rows have length {row.shape[0]}, expected {r + 2 * npos}"
            )
        return CompactElement(
            tuple(float(v) for v in row[:r]),
            tuple(float(v) for v in row[r : r + npos]),
            tuple(float(v) for v in row[r + npos :]),
        )

    def unit_direction(self, rs: RootSystem, normalization: str) -> CompactElement:
        base = self.direction
        if base is None:
            base = CompactElement.torus(rs, (1.0,) + (0.0,) * (rs.rank - 1))
        scale = compact_kappa_norm(rs, base, normalization)
        if scale <= 0:
            raise InputError("section direction has zero norm")
        return base.scaled(1.0 / scale)


def _derivative_tables(values: np.ndarray, h: float, k: int) -> list:
    """values and its first k central-difference derivatives.

    Entry j is an array aligned so index i corresponds to grid index i + j;
    each differentiation consumes one point at both ends.
    """
    tables = [values]
    cur = values
    for _ in range(k):
        cur = (cur[2:] - cur[:-2]) / (2.0 * h)
        tables.append(cur)
    return tables


def ck_norm(section: SampledSection, k: int) -> float:
    """Sup over the grid of the sum of the norms of the first k derivatives.

    Central differences of order 2; the supremum runs over the grid points
    where all stencils fit, so the k outermost points on each side are not
    inspected.
    """
    n = section.num_points
    if n < max(k + 2, 2 * k + 1):
        raise GridTooCoarse(
            f"grid with {n} points cannot support order-{k} central differences"
        )
    values = section.values
    scalar = values.ndim == 1
    tables = _derivative_tables(values, section.grid_step, k)
    lo, hi = k, n - k  # common valid grid indices
    total = np.zeros(hi - lo)
    if scalar:
        for j, table in enumerate(tables):
            total += np.abs(table[lo - j : hi - j])
    else:
        gram = compact_coefficient_gram(section.rs.rank, section.normalization)
        if values.shape[1] != gram.shape[0]:
            raise SchemaError(
                f"coefficient rows have length {values.shape[1]}, expected {gram.shape[0]}"
            )
        for j, table in enumerate(tables):
            rows = table[lo - j : hi - j]
            total += np.sqrt(np.maximum(np.einsum("ni,ij,nj->n", rows, gram, rows), 0.0))
    return float(np.max(total)) if total.size else 0.0


def _check_vanishing_order(section: SampledSection, k: int) -> None:
    """Forward-difference estimate of the Taylor coefficients at 0.

    The j-th estimated coefficient of a section vanishing to order k decays
    like h^(k - j) (fractional leftover exponents included), while a genuine
    order violation leaves a coefficient of size about 1; the cut is made at
    0.5 relative to the section's sup norm.
    """
    values = section.values
    scalar = values.ndim == 1
    sup = float(np.max(np.abs(values))) if values.size else 0.0
    threshold = ORDER_CHECK_TOL * max(1.0, sup)
    h = section.grid_step
    for j in range(k + 1):
        acc = values[0] * 0.0
        for t in range(j + 1):
            acc = acc + ((-1.0) ** (j - t)) * math.comb(j, t) * values[t]
        coeff = acc / (h**j * math.factorial(j))
        size = abs(float(coeff)) if scalar else float(np.linalg.norm(coeff))
        if size >= threshold:
            raise OrderViolation(
                f"section does not vanish to order {k} at the boundary "
                f"(estimated coefficient {size:.3g} at order {j})"
            )


def eval_norm_chain(
    rep: Irrep,
    section: SampledSection,
    x: float,
    k: int,
    normalization: str = "killing",
) -> Tuple[float, float]:
    """Both sides of the evaluation-norm estimate at an interior point.

    Left: the spectral norm of the represented section value.  Right: the
    Taylor bound (1/k!) * |weight| * x^k * (C^k norm of the section).  The
    left side never exceeds the right beyond the finite-difference budget.
    """
    if section.values.ndim != 1:
        raise InputError("the norm chain works on scalar sections times a unit direction")
    _check_vanishing_order(section, k)
    rs = rep.rs
    xi = section.unit_direction(rs, normalization)
    lhs = operator_norm(rep, xi.scaled(section.value_at(x)))
    rhs = (
        kappa_norm(rs, rep.highest_weight, normalization)
        * x**k
        * ck_norm(section, k)
        / math.factorial(k)
    )
    return lhs, rhs


def eta_norm(spec: EvalRepSpec, section: SampledSection, normalization: str = "killing") -> float:
    """Norm of the evaluated section: the exact finite sum of the per-point
    operator norms (the site inclusions are isometric).

    Scalar sections multiply a unit direction; coefficient-valued sections
    are evaluated as they stand.
    """
    scalar = section.values.ndim == 1
    xi = section.unit_direction(spec.rs, normalization) if scalar else None
    total = 0.0
    for point, weight in spec.entries:
        if point.boundary_distance is None:
            raise InputError(f"point {point.id!r} has no boundary distance")
        rep = build_irrep(spec.rs, weight)
        if scalar:
            elem = xi.scaled(section.value_at(point.boundary_distance))
        else:
            elem = section.element_at(point.boundary_distance)
        total += operator_norm(rep, elem)
    return total


def section_to_json(section: SampledSection) -> dict:
    out: dict = {"grid_step": section.grid_step}
    if section.values.ndim == 1:
        out["values"] = [float(x) for x in section.values]
    else:
        out["values"] = [[float(x) for x in row] for row in section.values]
    if section.rs is not None:
        out["series"] = section.rs.series
        out["rank"] = section.rs.rank
    if section.normalization != "killing":
        out["normalization"] = section.normalization
    return out


def section_from_json(data: dict) -> SampledSection:
    from .rootdata import build_root_system

    if not isinstance(data, dict):
        raise SchemaError("section must be a JSON object")
    try:
        h = float(data["grid_step"])
        values = np.asarray(data["values"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad section fields: {exc}") from exc
    rs = None
    if "rank" in data:
        rs = build_root_system(data.get("series", "A"), int(data["rank"]))
    return SampledSection(
        grid_step=h,
        values=values,
        rs=rs,
        normalization=data.get("normalization", "killing"),
    )
