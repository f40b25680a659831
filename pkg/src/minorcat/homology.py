"""Exact integer linear algebra: Smith normal form and homology of integer chain complexes."""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

_CHECK_SNF = os.environ.get("MINORCAT_CHECK_SNF", "") not in ("", "0")


def set_snf_checks(enabled: bool) -> None:
    """Verify every factorization returned by :func:`snf` (unimodularity, divisibility, U M V = D)."""
    global _CHECK_SNF
    _CHECK_SNF = enabled


class SNFCheckError(AssertionError):
    pass


class ComposabilityError(ValueError):
    pass


class IntMatrix:
    """Sparse integer matrix; each row is a dict from column index to nonzero entry."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: Sequence[dict[int, int]] | None = None):
        self.rows, self.cols = rows, cols
        if data is None:
            data = [{} for _ in range(rows)]
        if len(data) != rows:
            raise ValueError("row count does not match data")
        self.data = [{c: v for c, v in r.items() if v} for r in data]
        for r in self.data:
            if any(not 0 <= c < cols for c in r):
                raise ValueError("column index out of range")

    @classmethod
    def _trusted(cls, rows: int, cols: int, data: list[dict[int, int]]) -> "IntMatrix":
        # internal results: zeros already dropped, indices in range
        m = cls.__new__(cls)
        m.rows, m.cols, m.data = rows, cols, data
        return m

    @classmethod
    def from_dense(cls, entries: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        entries = [list(r) for r in entries]
        if cols is None:
            cols = len(entries[0]) if entries else 0
        if any(len(r) != cols for r in entries):
            raise ValueError("ragged matrix")
        return cls(len(entries), cols, [{c: int(v) for c, v in enumerate(r) if v} for r in entries])

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, [{k: 1} for k in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols)

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for r, row in enumerate(self.data):
            for c, v in row.items():
                out[r][c] = v
        return out

    def __getitem__(self, rc: tuple[int, int]) -> int:
        r, c = rc
        return self.data[r].get(c, 0)

    def __eq__(self, other):
        return (isinstance(other, IntMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.data == other.data)

    def __repr__(self):
        return f"IntMatrix({self.rows}x{self.cols}, nnz={self.nnz})"

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self.data)

    def is_zero(self) -> bool:
        return not any(self.data)

    def transpose(self) -> "IntMatrix":
        data = [{} for _ in range(self.cols)]
        for r, row in enumerate(self.data):
            for c, v in row.items():
                data[c][r] = v
        return IntMatrix._trusted(self.cols, self.rows, data)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = []
        for row in self.data:
            acc: dict[int, int] = {}
            for k, v in row.items():
                for c, w in other.data[k].items():
                    acc[c] = acc.get(c, 0) + v * w
            out.append({c: x for c, x in acc.items() if x})
        return IntMatrix._trusted(self.rows, other.cols, out)

    def __neg__(self):
        return IntMatrix._trusted(self.rows, self.cols, [{c: -v for c, v in r.items()} for r in self.data])

    def __sub__(self, other):
        return self + (-other)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        out = []
        for a, b in zip(self.data, other.data):
            acc = dict(a)
            for c, v in b.items():
                acc[c] = acc.get(c, 0) + v
            out.append(acc)
        return IntMatrix(self.rows, self.cols, out)

    @staticmethod
    def hstack(blocks: Iterable["IntMatrix"], rows: int) -> "IntMatrix":
        data = [{} for _ in range(rows)]
        offset = 0
        for b in blocks:
            if b.rows != rows:
                raise ValueError("row count mismatch in hstack")
            for r, row in enumerate(b.data):
                for c, v in row.items():
                    data[r][offset + c] = v
            offset += b.cols
        return IntMatrix(rows, offset, data)


# Smith normal form ----------------------------------------------------------

def _min_nonzero(A, t, rows, cols):
    best = None
    for i in range(t, rows):
        for j in range(t, cols):
            v = A[i][j]
            if v and (best is None or abs(v) < best[0]):
                best = (abs(v), i, j)
                if best[0] == 1:
                    return best
    return best


def snf(M: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, D, V)`` with ``U @ M @ V == D``, U and V unimodular, D a divisibility chain.

    Dense elimination with minimal-absolute-value pivoting; Python integers
    keep every intermediate exact.
    """
    m, n = M.shape
    A = M.to_dense()
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, k):
        A[i], A[k] = A[k], A[i]
        U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for row in A:
            row[j], row[k] = row[k], row[j]
        for row in V:
            row[j], row[k] = row[k], row[j]

    def add_row(dst, src, q):  # row dst -= q * row src
        A[dst] = [x - q * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x - q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col dst -= q * col src
        for row in A:
            row[dst] -= q * row[src]
        for row in V:
            row[dst] -= q * row[src]

    for t in range(min(m, n)):
        found = _min_nonzero(A, t, m, n)
        if found is None:
            break
        _, i, j = found
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, A[i][t] // p)
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, A[t][j] // p)
            rem = [(abs(A[i][t]), i, None) for i in range(t + 1, m) if A[i][t]]
            rem += [(abs(A[t][j]), None, j) for j in range(t + 1, n) if A[t][j]]
            if rem:
                _, i, j = min(rem, key=lambda x: x[0])
                if i is not None:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % p), None)
            if bad is None:
                break
            # pull an entry not divisible by the pivot into the pivot row
            add_row(t, bad[0], -1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    out = IntMatrix.from_dense(U, m), IntMatrix.from_dense(A, n), IntMatrix.from_dense(V, n)
    if _CHECK_SNF:
        check_snf(M, *out)
    return out


def determinant(M: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = M.rows
    if n != M.cols:
        raise ValueError("determinant of a non-square matrix")
    A = M.to_dense()
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1] if n else 1


def diagonal(D: IntMatrix) -> list[int]:
    return [D[k, k] for k in range(min(D.shape))]


def check_snf(M: IntMatrix, U: IntMatrix, D: IntMatrix, V: IntMatrix) -> None:
    if U @ M @ V != D:
        raise SNFCheckError("U M V != D")
    if abs(determinant(U)) != 1 or abs(determinant(V)) != 1:
        raise SNFCheckError("transform is not unimodular")
    for r, row in enumerate(D.data):
        if any(c != r for c in row):
            raise SNFCheckError("D is not diagonal")
    diag = diagonal(D)
    nz = [d for d in diag if d]
    if any(d < 0 for d in diag) or diag[:len(nz)] != nz:
        raise SNFCheckError("diagonal entries not nonnegative with zeros last")
    if any(b % a for a, b in zip(nz, nz[1:])):
        raise SNFCheckError("divisibility chain broken")


def _chain(values: list[int]) -> list[int]:
    vals = sorted(values)
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            g = math.gcd(vals[i], vals[j])
            vals[i], vals[j] = g, vals[i] * vals[j] // g
    return vals


def elementary_divisors(M: IntMatrix) -> list[int]:
    """Nonzero invariant factors of ``M`` (including 1s) as a divisibility chain.

    Sparse elimination without transforms, for homology computations where
    the matrices are large and very sparse.
    """
    rows = {r: dict(row) for r, row in enumerate(M.data) if row}
    cols: dict[int, set[int]] = {}
    for r, row in rows.items():
        for c in row:
            cols.setdefault(c, set()).add(r)
    found: list[int] = []

    def set_entry(r, c, v):
        if v:
            rows[r][c] = v
            cols.setdefault(c, set()).add(r)
        else:
            rows[r].pop(c, None)
            s = cols.get(c)
            if s is not None:
                s.discard(r)
                if not s:
                    del cols[c]

    def row_sub(dst, src, q):
        for c, v in list(rows[src].items()):
            set_entry(dst, c, rows[dst].get(c, 0) - q * v)
        if not rows[dst]:
            del rows[dst]

    def drop(r, c):
        for cc in list(rows[r]):
            set_entry(r, cc, 0)
        rows.pop(r, None)

    while rows:
        pivot = None
        for r in sorted(rows, key=lambda r: len(rows[r])):
            units = [c for c, v in rows[r].items() if abs(v) == 1]
            if units:
                c = min(units, key=lambda c: len(cols[c]))
                pivot = (r, c)
                break
        if pivot is not None:
            r, c = pivot
            p = rows[r][c]
            for k in list(cols[c] - {r}):
                row_sub(k, r, rows[k][c] * p)
            found.append(1)
            drop(r, c)
            continue
        # no unit entry: Euclidean steps around the smallest entry
        r, c, p = min(((r, c, v) for r, row in rows.items() for c, v in row.items()),
                      key=lambda x: (abs(x[2]), x[0], x[1]))
        for k in list(cols[c] - {r}):
            row_sub(k, r, rows[k][c] // p)
        if cols[c] != {r}:
            continue
        # column c is clear below/above: column operations only touch row r
        for cc, v in list(rows[r].items()):
            if cc != c:
                set_entry(r, cc, v - (v // p) * p)
        if len(rows[r]) == 1:
            found.append(abs(p))
            drop(r, c)
    return _chain(found)


def matrix_rank(M: IntMatrix) -> int:
    return len(elementary_divisors(M))


# homology -------------------------------------------------------------------

@dataclass(frozen=True)
class HomologyGroup:
    """``Z^rank`` plus cyclic torsion summands ``Z/d`` with ``d1 | d2 | ...``, each ``d >= 2``."""

    rank: int
    torsion: tuple[int, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(self.torsion))
        if self.rank < 0 or any(d < 2 for d in self.torsion):
            raise ValueError("invalid homology group data")
        if any(b % a for a, b in zip(self.torsion, self.torsion[1:])):
            raise ValueError("torsion divisors must form a divisibility chain")

    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    def __str__(self):
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) or "0"

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, obj) -> "HomologyGroup":
        return cls(obj["rank"], tuple(obj["torsion"]))


def homology(d_i: IntMatrix, d_iplus1: IntMatrix) -> HomologyGroup:
    """Homology ``ker(d_i) / im(d_iplus1)`` at the middle term.

    The kernel of ``d_i`` is a direct summand, so the torsion equals the
    nontrivial elementary divisors of ``d_iplus1``.
    """
    if d_i.cols != d_iplus1.rows:
        raise ComposabilityError(f"shapes {d_i.shape} and {d_iplus1.shape} are not composable")
    if not (d_i @ d_iplus1).is_zero():
        raise ComposabilityError("boundary of boundary is not zero")
    img = elementary_divisors(d_iplus1)
    rank = d_i.cols - matrix_rank(d_i) - len(img)
    return HomologyGroup(rank, tuple(d for d in img if d > 1))
