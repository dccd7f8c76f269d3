"""Exact linear algebra over the rationals.

Rank and nullspace go through fraction-free (Bareiss) elimination on an
integer copy of the matrix.  :func:`is_consistent` uses plain rational
Gauss-Jordan elimination instead, so certificates can be re-checked by a
second route.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Any, List, Sequence, Tuple

from .errors import InvariantError


def _to_fraction_rows(rows: Sequence[Sequence[Any]]) -> List[List[Fraction]]:
    return [[Fraction(x) for x in row] for row in rows]


def primitive(vec: Sequence[Fraction]) -> List[Fraction]:
    """Scale to coprime integers with the first nonzero entry positive."""
    den = math.lcm(*(x.denominator for x in vec)) if vec else 1
    ints = [int(x * den) for x in vec]
    g = math.gcd(*ints) if any(ints) else 1
    ints = [x // g for x in ints]
    lead = next((x for x in ints if x), 1)
    if lead < 0:
        ints = [-x for x in ints]
    return [Fraction(x) for x in ints]


class ExactMatrix:
    """Dense matrix of Fractions with a fixed column count (rows may be empty)."""

    def __init__(self, rows: Sequence[Sequence[Any]], ncols: int | None = None):
        self.rows = _to_fraction_rows(rows)
        if ncols is None:
            if not self.rows:
                raise ValueError("ncols is required for an empty matrix")
            ncols = len(self.rows[0])
        if any(len(r) != ncols for r in self.rows):
            raise ValueError("ragged matrix")
        self.ncols = ncols

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.rows), self.ncols

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ExactMatrix) and self.shape == other.shape and self.rows == other.rows

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows)
        return f"ExactMatrix([{body}])"

    def tolist(self) -> List[List[Fraction]]:
        return [list(r) for r in self.rows]

    def apply(self, vec: Sequence[Fraction]) -> List[Fraction]:
        return [sum((a * b for a, b in zip(row, vec)), Fraction(0)) for row in self.rows]

    def stack(self, extra: Sequence[Sequence[Any]]) -> "ExactMatrix":
        return ExactMatrix(self.rows + _to_fraction_rows(extra), self.ncols)

    def _integer_rows(self) -> List[List[int]]:
        out = []
        for row in self.rows:
            den = math.lcm(*(x.denominator for x in row)) if row else 1
            out.append([int(x * den) for x in row])
        return out

    def echelon(self) -> Tuple[List[List[int]], List[int]]:
        """Fraction-free row echelon form and pivot columns."""
        m = [r for r in self._integer_rows() if any(r)]
        nr, nc = len(m), self.ncols
        prev, r, pivots = 1, 0, []
        for c in range(nc):
            if r == nr:
                break
            piv = next((i for i in range(r, nr) if m[i][c]), None)
            if piv is None:
                continue
            m[r], m[piv] = m[piv], m[r]
            top = m[r]
            for i in range(r + 1, nr):
                row = m[i]
                a = row[c]
                for j in range(c + 1, nc):
                    q, rem = divmod(top[c] * row[j] - a * top[j], prev)
                    if rem:
                        raise InvariantError("Bareiss step produced a non-integer quotient")
                    row[j] = q
                row[c] = 0
            prev = top[c]
            pivots.append(c)
            r += 1
        return m[:r], pivots

    def rank(self) -> int:
        return len(self.echelon()[1])

    def nullspace(self) -> List[List[Fraction]]:
        """Basis of ``{v : M v = 0}``, one vector per free column, primitive-scaled."""
        ech, pivots = self.echelon()
        nc = self.ncols
        # back-substitute the small echelon form into reduced form
        red = [[Fraction(x) for x in row] for row in ech]
        for r in range(len(red) - 1, -1, -1):
            c = pivots[r]
            lead = red[r][c]
            red[r] = [x / lead for x in red[r]]
            for up in range(r):
                factor = red[up][c]
                if factor:
                    red[up] = [a - factor * b for a, b in zip(red[up], red[r])]
        free = [c for c in range(nc) if c not in set(pivots)]
        basis = []
        for f in free:
            v = [Fraction(0)] * nc
            v[f] = Fraction(1)
            for r, c in enumerate(pivots):
                v[c] = -red[r][f]
            basis.append(primitive(v))
        if len(pivots) + len(basis) != nc:
            raise InvariantError("rank + nullity != number of columns")
        for v in basis:
            if any(self.apply(v)):
                raise InvariantError("nullspace vector is not annihilated")
        return basis


def nullspace(m: ExactMatrix) -> List[List[Fraction]]:
    return m.nullspace()


def is_consistent(m: ExactMatrix, rhs: Sequence[Any]) -> bool:
    """Whether ``M v = rhs`` has a rational solution (Gauss-Jordan on the augmented matrix)."""
    aug = [list(row) + [Fraction(b)] for row, b in zip(m.rows, rhs)]
    nc = m.ncols
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, len(aug)) if aug[i][c]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        lead = aug[r][c]
        aug[r] = [x / lead for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c]:
                factor = aug[i][c]
                aug[i] = [a - factor * b for a, b in zip(aug[i], aug[r])]
        r += 1
    return all(row[nc] == 0 for row in aug[r:])
