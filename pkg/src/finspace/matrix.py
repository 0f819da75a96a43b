"""Sparse integer matrices and Smith normal form invariant factors.

Entries are Python ints, so arithmetic never wraps. ``checked=True`` bounds
every intermediate value by 2**63 and raises OverflowDetected beyond it,
mirroring what a fixed-width implementation would have to do.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import OverflowDetected

INT64_LIMIT = 1 << 63


class IntegerMatrix:
    """rows x cols integer matrix stored as a list of sparse columns."""

    __slots__ = ("rows", "cols", "columns")

    def __init__(self, rows: int, cols: int, columns=None):
        self.rows = rows
        self.cols = cols
        if columns is None:
            columns = [{} for _ in range(cols)]
        if len(columns) != cols:
            raise ValueError(f"expected {cols} columns, got {len(columns)}")
        self.columns = [{i: v for i, v in c.items() if v} for c in columns]
        for c in self.columns:
            for i in c:
                if not 0 <= i < rows:
                    raise ValueError(f"row index {i} out of range for {rows} rows")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntegerMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        return cls(n, n, [{i: 1} for i in range(n)])

    @classmethod
    def from_dense(cls, data, cols: int | None = None) -> "IntegerMatrix":
        data = [list(r) for r in data]
        rows = len(data)
        if cols is None:
            cols = len(data[0]) if rows else 0
        columns = [{} for _ in range(cols)]
        for i, r in enumerate(data):
            if len(r) != cols:
                raise ValueError("ragged matrix")
            for j, v in enumerate(r):
                if v:
                    columns[j][i] = int(v)
        return cls(rows, cols, columns)

    def to_dense(self) -> list:
        out = [[0] * self.cols for _ in range(self.rows)]
        for j, c in enumerate(self.columns):
            for i, v in c.items():
                out[i][j] = v
        return out

    @property
    def shape(self) -> tuple:
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.columns[j].get(i, 0)

    def __eq__(self, other):
        if not isinstance(other, IntegerMatrix):
            return NotImplemented
        return self.shape == other.shape and self.columns == other.columns

    def __repr__(self):
        return f"IntegerMatrix({self.rows}x{self.cols}, {self.to_dense()})"

    def nnz(self) -> int:
        return sum(len(c) for c in self.columns)

    def is_zero(self) -> bool:
        return all(not c for c in self.columns)

    def transpose(self) -> "IntegerMatrix":
        cols = [{} for _ in range(self.rows)]
        for j, c in enumerate(self.columns):
            for i, v in c.items():
                cols[i][j] = v
        return IntegerMatrix(self.cols, self.rows, cols)

    def apply(self, vec: dict) -> dict:
        """Matrix times a sparse column vector ``{index: value}``."""
        out = {}
        for j, a in vec.items():
            for i, v in self.columns[j].items():
                out[i] = out.get(i, 0) + a * v
        return {i: v for i, v in out.items() if v}

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return IntegerMatrix(self.rows, other.cols, [self.apply(c) for c in other.columns])

    def select_rows(self, keep) -> "IntegerMatrix":
        """Submatrix on the given rows, renumbered in the given order."""
        pos = {r: k for k, r in enumerate(keep)}
        cols = [{pos[i]: v for i, v in c.items() if i in pos} for c in self.columns]
        return IntegerMatrix(len(pos), self.cols, cols)

    def select_cols(self, keep) -> "IntegerMatrix":
        keep = list(keep)
        return IntegerMatrix(self.rows, len(keep), [dict(self.columns[j]) for j in keep])


@dataclass(frozen=True)
class SmithResult:
    factors: tuple  # nonzero invariant factors d_1 | d_2 | ...
    rank: int


def _normalize_diagonal(diag: list) -> list:
    d = [abs(x) for x in diag if x]
    k = len(d)
    for i in range(k):
        for j in range(i + 1, k):
            g = gcd(d[i], d[j])
            if g != d[i]:
                d[i], d[j] = g, d[i] * d[j] // g
    return d


def _dense_diagonal(A: list, checked: bool) -> list:
    """Diagonalize by unimodular row/column operations; returns the diagonal."""
    diag = []
    while A and A[0]:
        best = None
        for i, r in enumerate(A):
            for j, v in enumerate(r):
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, pi, pj = best
        A[0], A[pi] = A[pi], A[0]
        for r in A:
            r[0], r[pj] = r[pj], r[0]
        while True:
            p = A[0][0]
            moved = False
            for k in range(1, len(A)):
                if A[k][0]:
                    q = A[k][0] // p
                    rk, r0 = A[k], A[0]
                    for j in range(len(r0)):
                        rk[j] -= q * r0[j]
                        if checked and abs(rk[j]) >= INT64_LIMIT:
                            raise OverflowDetected("entry exceeds 64-bit range")
                    if rk[0]:
                        A[0], A[k] = A[k], A[0]
                        moved = True
                        break
            if moved:
                continue
            r0 = A[0]
            for j in range(1, len(r0)):
                if r0[j]:
                    q = r0[j] // p
                    for r in A:
                        r[j] -= q * r[0]
                        if checked and abs(r[j]) >= INT64_LIMIT:
                            raise OverflowDetected("entry exceeds 64-bit range")
                    if r0[j]:
                        for r in A:
                            r[0], r[j] = r[j], r[0]
                        moved = True
                        break
            if not moved:
                break
        diag.append(A[0][0])
        A = [r[1:] for r in A[1:]]
    return diag


def smith_normal_form(M: IntegerMatrix, checked: bool = False) -> SmithResult:
    """Invariant factors and rank of an integer matrix.

    Unit pivots are eliminated sparsely first (boundary matrices are mostly
    +-1), preferring short rows; whatever is left is diagonalized densely
    with smallest-magnitude pivots and the diagonal normalized by gcd/lcm.
    """
    rows: dict = {}
    col_rows: dict = {}
    for j, c in enumerate(M.columns):
        for i, v in c.items():
            if checked and abs(v) >= INT64_LIMIT:
                raise OverflowDetected("entry exceeds 64-bit range")
            rows.setdefault(i, {})[j] = v
            col_rows.setdefault(j, set()).add(i)

    units = 0
    progress = True
    while progress:
        progress = False
        for c in sorted(col_rows, key=lambda c: len(col_rows[c])):
            if c not in col_rows:
                continue
            cands = [r for r in col_rows[c] if rows[r][c] in (1, -1)]
            if not cands:
                continue
            p = min(cands, key=lambda r: (len(rows[r]), r))
            prow = rows.pop(p)
            u = prow[c]
            for r in list(col_rows[c]):
                if r == p:
                    continue
                row = rows[r]
                q = row[c] * u
                for j, v in prow.items():
                    nv = row.get(j, 0) - q * v
                    if nv:
                        if checked and abs(nv) >= INT64_LIMIT:
                            raise OverflowDetected("entry exceeds 64-bit range")
                        if j not in row:
                            col_rows.setdefault(j, set()).add(r)
                        row[j] = nv
                    elif j in row:
                        del row[j]
                        col_rows[j].discard(r)
                if not row:
                    del rows[r]
            for j in prow:
                s = col_rows.get(j)
                if s is not None:
                    s.discard(p)
            del col_rows[c]
            for j in [j for j, s in col_rows.items() if not s]:
                del col_rows[j]
            units += 1
            progress = True

    rest = []
    if rows:
        cols = sorted({j for r in rows.values() for j in r})
        cpos = {j: k for k, j in enumerate(cols)}
        for r in sorted(rows):
            dense = [0] * len(cols)
            for j, v in rows[r].items():
                dense[cpos[j]] = v
            rest.append(dense)
    diag = _normalize_diagonal(_dense_diagonal(rest, checked))
    factors = tuple([1] * units + diag)
    return SmithResult(factors, len(factors))


def rank(M: IntegerMatrix) -> int:
    return smith_normal_form(M).rank
