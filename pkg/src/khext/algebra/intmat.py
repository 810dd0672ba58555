"""Sparse integer matrices.

A deliberately small matrix type: dict-of-nonzeros with explicit shape,
exact arbitrary-precision arithmetic, and only the operations the rest of
the package needs.  Row/column conventions: ``m[r, c]``, vectors are
tuples, and a matrix of shape ``(R, C)`` maps column vectors of length
``C`` to column vectors of length ``R``.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

__all__ = ["IntMat"]


class IntMat:
    __slots__ = ("nrows", "ncols", "data")

    def __init__(self, nrows: int, ncols: int, entries=None):
        if nrows < 0 or ncols < 0:
            raise ValueError("negative matrix dimension")
        self.nrows = nrows
        self.ncols = ncols
        self.data: dict[tuple[int, int], int] = {}
        if entries:
            for (r, c), v in (
                entries.items() if isinstance(entries, dict) else entries
            ):
                self[r, c] = v

    # -- construction -------------------------------------------------

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "IntMat":
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "IntMat":
        m = cls(n, n)
        for i in range(n):
            m.data[i, i] = 1
        return m

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> "IntMat":
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
        m = cls(len(rows), ncols)
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                if v:
                    m.data[i, j] = int(v)
        return m

    def copy(self) -> "IntMat":
        m = IntMat(self.nrows, self.ncols)
        m.data = dict(self.data)
        return m

    # -- element access -------------------------------------------------

    def __getitem__(self, rc: tuple[int, int]) -> int:
        return self.data.get(rc, 0)

    def __setitem__(self, rc: tuple[int, int], v: int) -> None:
        r, c = rc
        if not (0 <= r < self.nrows and 0 <= c < self.ncols):
            raise IndexError(f"index {rc} out of bounds for {self.shape}")
        if v:
            self.data[rc] = int(v)
        else:
            self.data.pop(rc, None)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def items(self) -> Iterator[tuple[tuple[int, int], int]]:
        return iter(self.data.items())

    def row(self, r: int) -> tuple[int, ...]:
        return tuple(self.data.get((r, c), 0) for c in range(self.ncols))

    def col(self, c: int) -> tuple[int, ...]:
        return tuple(self.data.get((r, c), 0) for r in range(self.nrows))

    def to_rows(self) -> list[list[int]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for (r, c), v in self.data.items():
            out[r][c] = v
        return out

    def is_zero(self) -> bool:
        return not self.data

    # -- arithmetic -------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMat):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    def __hash__(self):
        raise TypeError("IntMat is mutable and unhashable")

    def __neg__(self) -> "IntMat":
        m = IntMat(self.nrows, self.ncols)
        m.data = {rc: -v for rc, v in self.data.items()}
        return m

    def __add__(self, other: "IntMat") -> "IntMat":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        m = self.copy()
        for rc, v in other.data.items():
            w = m.data.get(rc, 0) + v
            if w:
                m.data[rc] = w
            else:
                m.data.pop(rc, None)
        return m

    def __sub__(self, other: "IntMat") -> "IntMat":
        return self + (-other)

    def scale(self, k: int) -> "IntMat":
        m = IntMat(self.nrows, self.ncols)
        if k:
            m.data = {rc: k * v for rc, v in self.data.items()}
        return m

    def __matmul__(self, other: "IntMat") -> "IntMat":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        # index other by row for sparse accumulation
        rows_of_other: dict[int, list[tuple[int, int]]] = {}
        for (r, c), v in other.data.items():
            rows_of_other.setdefault(r, []).append((c, v))
        acc: dict[tuple[int, int], int] = {}
        for (r, k), v in self.data.items():
            for c, w in rows_of_other.get(k, ()):
                rc = (r, c)
                acc[rc] = acc.get(rc, 0) + v * w
        m = IntMat(self.nrows, other.ncols)
        m.data = {rc: v for rc, v in acc.items() if v}
        return m

    def mul_vec(self, x: Sequence[int]) -> tuple[int, ...]:
        if len(x) != self.ncols:
            raise ValueError("vector length mismatch")
        out = [0] * self.nrows
        for (r, c), v in self.data.items():
            xv = x[c]
            if xv:
                out[r] += v * xv
        return tuple(out)

    def t(self) -> "IntMat":
        m = IntMat(self.ncols, self.nrows)
        m.data = {(c, r): v for (r, c), v in self.data.items()}
        return m

    # -- block/selection helpers ----------------------------------------

    def hstack(self, other: "IntMat") -> "IntMat":
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch in hstack")
        m = IntMat(self.nrows, self.ncols + other.ncols)
        m.data = dict(self.data)
        for (r, c), v in other.data.items():
            m.data[r, c + self.ncols] = v
        return m

    def vstack(self, other: "IntMat") -> "IntMat":
        if self.ncols != other.ncols:
            raise ValueError("column count mismatch in vstack")
        m = IntMat(self.nrows + other.nrows, self.ncols)
        m.data = dict(self.data)
        for (r, c), v in other.data.items():
            m.data[r + self.nrows, c] = v
        return m

    def take_rows(self, rows: Iterable[int]) -> "IntMat":
        rows = list(rows)
        pos = {r: i for i, r in enumerate(rows)}
        m = IntMat(len(rows), self.ncols)
        for (r, c), v in self.data.items():
            if r in pos:
                m.data[pos[r], c] = v
        return m

    def take_cols(self, cols: Iterable[int]) -> "IntMat":
        cols = list(cols)
        pos = {c: i for i, c in enumerate(cols)}
        m = IntMat(self.nrows, len(cols))
        for (r, c), v in self.data.items():
            if c in pos:
                m.data[r, pos[c]] = v
        return m

    def __repr__(self) -> str:
        return f"IntMat({self.nrows}x{self.ncols}, {len(self.data)} nonzero)"

    def pretty(self) -> str:
        return "\n".join(" ".join(f"{v:4d}" for v in row) for row in self.to_rows())
