"""Sparse exact linear algebra over Q and F_p.

Matrices are stored column-wise as ``{row: value}`` dicts, which is how the
chain complexes produce them (one column per basis element of the source).
Ranks use dynamic Markowitz pivoting after peeling singleton rows and
columns.  Solving reduces columns against a pivot table keyed by row, with
the row order fixed up front (sparsest rows first).  Every tie is broken by
lowest index, so results never depend on dict iteration order.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
import heapq
from typing import Iterable

from .field import Field


class DimensionError(ValueError):
    pass


@dataclass
class SparseMatrix:
    nrows: int
    ncols: int
    field: Field
    cols: list[dict] = dc_field(default_factory=list)

    def __post_init__(self):
        if not self.cols:
            self.cols = [{} for _ in range(self.ncols)]
        if len(self.cols) != self.ncols:
            raise DimensionError("column count mismatch")
        for c, col in enumerate(self.cols):
            for r, v in list(col.items()):
                if not 0 <= r < self.nrows:
                    raise DimensionError(f"row {r} out of range in column {c}")
                if not v:
                    del col[r]

    @classmethod
    def from_triples(cls, nrows, ncols, field, triples: Iterable) -> "SparseMatrix":
        cols = [{} for _ in range(ncols)]
        for r, c, v in triples:
            v = field(v)
            if v:
                cols[c][r] = field.add(cols[c].get(r, field.zero), v)
        return cls(nrows, ncols, field, cols)

    @classmethod
    def from_dense(cls, rows, field) -> "SparseMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        return cls.from_triples(
            nrows, ncols, field,
            ((i, j, x) for i, row in enumerate(rows) for j, x in enumerate(row) if x),
        )

    def triples(self):
        """Nonzero entries as sorted ``(row, col, value)`` triples."""
        out = [(r, c, v) for c, col in enumerate(self.cols) for r, v in col.items()]
        out.sort()
        return out

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols)

    def to_dense(self):
        F = self.field
        rows = [[F.zero] * self.ncols for _ in range(self.nrows)]
        for r, c, v in self.triples():
            rows[r][c] = v
        return rows

    def apply(self, vec: dict) -> dict:
        """Matrix times a sparse vector ``{col: value}``."""
        F = self.field
        out: dict = {}
        for c, a in vec.items():
            for r, v in self.cols[c].items():
                s = F.add(out.get(r, F.zero), F.mul(a, v))
                if s:
                    out[r] = s
                else:
                    out.pop(r, None)
        return out

    def matmul(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        return SparseMatrix(self.nrows, other.ncols, self.field,
                            [self.apply(col) for col in other.cols])

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def is_zero(self) -> bool:
        return all(not c for c in self.cols)

    def to_text(self) -> str:
        """Triple format: header line ``nrows ncols char`` then ``row col value`` lines."""
        lines = [f"{self.nrows} {self.ncols} {self.field.char}"]
        lines += [f"{r} {c} {self.field.to_str(v)}" for r, c, v in self.triples()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SparseMatrix":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        nrows, ncols, char = (int(x) for x in lines[0].split())
        F = Field(char)
        triples = []
        for ln in lines[1:]:
            r, c, v = ln.split()
            triples.append((int(r), int(c), F.parse(v)))
        return cls.from_triples(nrows, ncols, F, triples)


def transpose_cols(M: SparseMatrix) -> list:
    """Rows of M as a list of ``{col: value}`` dicts."""
    rows = [{} for _ in range(M.nrows)]
    for c, col in enumerate(M.cols):
        for r, v in col.items():
            rows[r][c] = v
    return rows


def _row_order(cols, nrows) -> dict:
    counts = [0] * nrows
    for col in cols:
        for r in col:
            counts[r] += 1
    order = sorted(range(nrows), key=lambda r: (counts[r], r))
    return {r: i for i, r in enumerate(order)}


class Eliminator:
    """Incremental column echelon form with optional combination tracking."""

    def __init__(self, field: Field, rank_of_row: dict | None = None, track: bool = False):
        self.field = field
        self.rank_of_row = rank_of_row
        self.track = track
        self.pivots: dict = {}  # row -> (vector, combination)

    def _lead(self, v):
        rk = self.rank_of_row
        if rk is None:
            return min(v)
        return min(v, key=rk.__getitem__)

    def reduce(self, v: dict, combo: dict | None = None):
        """Reduce ``v`` in place against the pivots; returns ``(v, combo)``."""
        F = self.field
        p = F.char
        pivots = self.pivots
        while v:
            r = self._lead(v)
            piv = pivots.get(r)
            if piv is None:
                break
            pv, pc = piv
            # pivot vectors are normalised to 1 at their lead row
            f = v[r]
            if p:
                for k, x in pv.items():
                    y = (v.get(k, 0) - f * x) % p
                    if y:
                        v[k] = y
                    else:
                        v.pop(k, None)
                if combo is not None:
                    for k, x in pc.items():
                        y = (combo.get(k, 0) - f * x) % p
                        if y:
                            combo[k] = y
                        else:
                            combo.pop(k, None)
            else:
                for k, x in pv.items():
                    y = v.get(k, 0) - f * x
                    if y:
                        v[k] = y
                    else:
                        v.pop(k, None)
                if combo is not None:
                    for k, x in pc.items():
                        y = combo.get(k, 0) - f * x
                        if y:
                            combo[k] = y
                        else:
                            combo.pop(k, None)
        return v, combo

    def add(self, v: dict, tag=None) -> bool:
        """Insert a vector; returns True if it raised the rank."""
        F = self.field
        v = dict(v)
        combo = {tag: F.one} if self.track else None
        v, combo = self.reduce(v, combo)
        if not v:
            return False
        r = self._lead(v)
        inv = F.inv(v[r])
        v = {k: F.mul(x, inv) for k, x in v.items()}
        if combo is not None:
            combo = {k: F.mul(x, inv) for k, x in combo.items()}
        self.pivots[r] = (v, combo)
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)


def _peel_singletons(cols: list, nrows: int):
    """Strip pivots that cause no fill-in; returns ``(rank_found, remaining_cols)``.

    A column with one entry pivots on its row, which can then be deleted
    everywhere.  A row met by one column pivots on that column, which can
    then be deleted.  Both steps leave the rank of the rest unchanged.
    """
    cols = {c: dict(col) for c, col in enumerate(cols) if col}
    rows: dict = {}
    for c, col in cols.items():
        for r in col:
            rows.setdefault(r, set()).add(c)
    found = 0
    stack_c = sorted(c for c, col in cols.items() if len(col) == 1)
    stack_r = sorted(r for r, cs in rows.items() if len(cs) == 1)

    def drop_col(c):
        for r in cols.pop(c):
            cs = rows[r]
            cs.discard(c)
            if len(cs) == 1:
                stack_r.append(r)
            elif not cs:
                del rows[r]

    def drop_row(r):
        for c in rows.pop(r, ()):
            col = cols[c]
            del col[r]
            if len(col) == 1:
                stack_c.append(c)
            elif not col:
                del cols[c]

    while stack_c or stack_r:
        if stack_c:
            c = stack_c.pop()
            col = cols.get(c)
            if col is None or len(col) != 1:
                continue
            (r,) = col
            found += 1
            cols[c] = {}
            rows[r].discard(c)
            del cols[c]
            drop_row(r)
        else:
            r = stack_r.pop()
            cs = rows.get(r)
            if cs is None or len(cs) != 1:
                continue
            (c,) = cs
            found += 1
            drop_col(c)
            rows.pop(r, None)
    return found, [cols[c] for c in sorted(cols)]


def markowitz_rank(cols: list, field: Field) -> int:
    """Rank by dynamic Markowitz pivoting.

    Repeatedly pivots on the shortest live column, choosing its shortest row
    (lowest index on ties), and eliminates that column from the other rows.
    """
    F = field
    p = F.char
    rows: dict = {}
    colsets: dict = {}
    for c, col in enumerate(cols):
        if col:
            colsets[c] = set(col)
            for r, v in col.items():
                rows.setdefault(r, {})[c] = v
    heap = [(len(s), c) for c, s in colsets.items()]
    heapq.heapify(heap)
    rk = 0
    while heap:
        k, c = heapq.heappop(heap)
        s = colsets.get(c)
        if s is None:
            continue
        if len(s) != k:
            heapq.heappush(heap, (len(s), c))
            continue
        if not s:
            del colsets[c]
            continue
        r = min(s, key=lambda r: (len(rows[r]), r))
        prow = rows.pop(r)
        rk += 1
        for c2 in prow:
            colsets[c2].discard(r)
        inv = F.inv(prow[c])
        touched = set()
        for r2 in sorted(s):
            row = rows[r2]
            f = F.mul(row[c], inv)
            for c2, v in prow.items():
                if p:
                    y = (row.get(c2, 0) - f * v) % p
                else:
                    y = row.get(c2, 0) - f * v
                if y:
                    if c2 not in row:
                        colsets[c2].add(r2)
                    row[c2] = y
                else:
                    if c2 in row:
                        del row[c2]
                        colsets[c2].discard(r2)
            touched.update(prow)
            if not row:
                del rows[r2]
        del colsets[c]
        touched.discard(c)
        for c2 in touched:
            if c2 in colsets:
                heapq.heappush(heap, (len(colsets[c2]), c2))
    return rk


def rank(M: SparseMatrix) -> int:
    """Exact rank of a sparse matrix."""
    if M.nrows == 0 or M.ncols == 0:
        return 0
    found, rest = _peel_singletons(M.cols, M.nrows)
    if not rest:
        return found
    return found + markowitz_rank(rest, M.field)


def solve(M: SparseMatrix, b: dict):
    """Return ``z`` (a sparse vector over the columns) with ``M z = b``, or None."""
    F = M.field
    b = {r: F(x) for r, x in b.items() if x}
    if not b:
        return {}
    E = Eliminator(F, _row_order(M.cols + [b], M.nrows), track=True)
    for c in sorted(range(M.ncols), key=lambda c: (len(M.cols[c]), c)):
        if M.cols[c]:
            E.add(M.cols[c], tag=c)
    residual, combo = E.reduce(dict(b), {})
    if residual:
        return None
    # b - M(-combo) reduced to zero, so M(-combo) = b
    return {k: F.neg(x) for k, x in combo.items() if x}


def dense_rank(rows, field: Field) -> int:
    """Plain Gaussian elimination on a list of lists; the reference oracle."""
    F = field
    A = [[F(x) for x in row] for row in rows]
    if not A:
        return 0
    m, n = len(A), len(A[0])
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = F.inv(A[r][c])
        A[r] = [F.mul(x, inv) for x in A[r]]
        for i in range(m):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(A[i], A[r])]
        r += 1
        if r == m:
            break
    return r
