"""Sparse exact-rational vectors, matrices and echelon bookkeeping.

All structural linear algebra in the representation constructions (span
closure, change of basis, Gram matrices, commutators) runs over
``fractions.Fraction`` so algebraic identities can be asserted exactly.
Floating point only enters in the spectral routines, which convert through
:func:`mat_to_dense`.

Conventions: a vector is a dict ``index -> Fraction`` with zero entries
absent; a matrix is stored column-major as ``col_index -> column vector``,
so ``A e_j`` is ``A[j]``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Optional, Tuple

import numpy as np

Vec = Dict[int, Fraction]
Mat = Dict[int, Vec]

ZERO = Fraction(0)


def vec_iadd_scaled(dst: Vec, coeff: Fraction, src: Vec) -> None:
    """dst += coeff * src, dropping entries that cancel to zero."""
    if not coeff:
        return
    for k, v in src.items():
        new = dst.get(k, ZERO) + coeff * v
        if new:
            dst[k] = new
        else:
            dst.pop(k, None)


def vec_scaled(v: Vec, coeff: Fraction) -> Vec:
    if not coeff:
        return {}
    return {k: coeff * x for k, x in v.items()}


def vec_dot(u: Vec, v: Vec) -> Fraction:
    if len(u) > len(v):
        u, v = v, u
    total = ZERO
    for k, x in u.items():
        y = v.get(k)
        if y is not None:
            total += x * y
    return total


def mat_vec(m: Mat, v: Vec) -> Vec:
    out: Vec = {}
    for j, c in v.items():
        col = m.get(j)
        if col:
            vec_iadd_scaled(out, c, col)
    return out


def mat_mul(a: Mat, b: Mat) -> Mat:
    out: Mat = {}
    for j, col in b.items():
        image = mat_vec(a, col)
        if image:
            out[j] = image
    return out


def mat_add(a: Mat, b: Mat, sign: int = 1) -> Mat:
    out: Mat = {j: dict(col) for j, col in a.items()}
    s = Fraction(sign)
    for j, col in b.items():
        dst = out.setdefault(j, {})
        vec_iadd_scaled(dst, s, col)
        if not dst:
            del out[j]
    return out


def mat_scaled(a: Mat, coeff: Fraction) -> Mat:
    if not coeff:
        return {}
    return {j: vec_scaled(col, coeff) for j, col in a.items()}


def mat_commutator(a: Mat, b: Mat) -> Mat:
    return mat_add(mat_mul(a, b), mat_mul(b, a), sign=-1)


def mat_transpose(a: Mat) -> Mat:
    out: Mat = {}
    for j, col in a.items():
        for i, v in col.items():
            out.setdefault(i, {})[j] = v
    return out


def mat_equal(a: Mat, b: Mat) -> bool:
    return mat_add(a, b, sign=-1) == {}


def mat_to_dense(a: Mat, n: int, dtype=np.float64) -> np.ndarray:
    out = np.zeros((n, n), dtype=dtype)
    for j, col in a.items():
        for i, v in col.items():
            out[i, j] = float(v)
    return out


def mat_to_fraction_rows(a: Mat, n: int) -> list:
    rows = [[ZERO] * n for _ in range(n)]
    for j, col in a.items():
        for i, v in col.items():
            rows[i][j] = v
    return rows


def pow2_unit_scale(norm_sq: Fraction) -> Fraction:
    """Power of two ``t`` with ``t**2 * norm_sq`` in ``[1, 4)``.

    Used to renormalize basis vectors so exact Gram matrices stay inside the
    float64 range regardless of how many lowering steps produced them.
    """
    if norm_sq <= 0:
        raise ValueError("norm_sq must be positive")
    # coarse step from bit lengths, then fix up
    e = (norm_sq.denominator.bit_length() - norm_sq.numerator.bit_length()) // 2
    t = Fraction(2) ** e
    s = t * t * norm_sq
    while s < 1:
        s *= 4
        t *= 2
    while s >= 4:
        s /= 4
        t /= 2
    return t


class Echelon:
    """Reduced row echelon basis with deterministic pivoting.

    Rows are kept fully reduced against each other (pivot columns are the
    smallest surviving coordinate; pivot entries are 1; no other row touches
    a pivot column).  For every stored row the decomposition over the raw
    vectors fed to :meth:`add` is tracked, so :meth:`solve` doubles as a
    change-of-basis solve.
    """

    def __init__(self) -> None:
        self.rows: list[Tuple[int, Vec, Vec]] = []  # (pivot, row, raw combo)

    def __len__(self) -> int:
        return len(self.rows)

    def _reduce(self, v: Vec) -> Tuple[Vec, Vec]:
        """Remainder of v after elimination, plus the row coefficients used."""
        v = dict(v)
        used: Vec = {}
        for idx, (pivot, row, _) in enumerate(self.rows):
            c = v.get(pivot)
            if c:
                vec_iadd_scaled(v, -c, row)
                used[idx] = c
        return v, used

    def residual(self, v: Vec) -> Vec:
        return self._reduce(v)[0]

    def add(self, v: Vec, raw: Vec) -> Optional[Vec]:
        """Insert ``v`` (a vector equal to ``raw`` over the raw index set).

        Returns the reduced remainder if ``v`` enlarged the span, else None.
        """
        rem, used = self._reduce(v)
        if not rem:
            return None
        pivot = min(rem.keys())
        inv = 1 / rem[pivot]
        row = vec_scaled(rem, inv)
        combo = dict(raw)
        for idx, c in used.items():
            vec_iadd_scaled(combo, -c, self.rows[idx][2])
        combo = vec_scaled(combo, inv)
        # keep earlier rows clear of the new pivot column
        for idx, (p, r, cb) in enumerate(self.rows):
            c = r.get(pivot)
            if c:
                vec_iadd_scaled(r, -c, row)
                vec_iadd_scaled(cb, -c, combo)
        self.rows.append((pivot, row, combo))
        self.rows.sort(key=lambda t: t[0])
        return rem

    def solve(self, v: Vec) -> Optional[Vec]:
        """Coefficients over the raw vectors reproducing ``v``, or None."""
        rem, used = self._reduce(v)
        if rem:
            return None
        out: Vec = {}
        for idx, c in used.items():
            vec_iadd_scaled(out, c, self.rows[idx][2])
        return out
