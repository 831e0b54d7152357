"""Column-oriented sparse matrices over RatFunc."""

from __future__ import annotations

from typing import Callable, Iterable, Iterator, Mapping

from ..field import ONE, ZERO, RatFunc, to_string


class SparseMatrix:
    """cols[j] = {i: value}; zero entries are never stored."""

    __slots__ = ("nrows", "ncols", "cols")

    def __init__(self, nrows: int, ncols: int, cols: Mapping[int, Mapping[int, RatFunc]] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        self.cols: dict[int, dict[int, RatFunc]] = {}
        if cols:
            for j, col in cols.items():
                clean = {i: v for i, v in col.items() if not v.is_zero()}
                if clean:
                    self.cols[j] = clean

    @staticmethod
    def zeros(nrows: int, ncols: int) -> "SparseMatrix":
        return SparseMatrix(nrows, ncols)

    @staticmethod
    def identity(n: int) -> "SparseMatrix":
        return SparseMatrix(n, n, {j: {j: ONE} for j in range(n)})

    @staticmethod
    def diag(values: Iterable[RatFunc]) -> "SparseMatrix":
        vals = list(values)
        return SparseMatrix(len(vals), len(vals), {j: {j: v} for j, v in enumerate(vals)})

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def get(self, i: int, j: int) -> RatFunc:
        return self.cols.get(j, {}).get(i, ZERO)

    def entries(self) -> Iterator[tuple[int, int, RatFunc]]:
        for j in sorted(self.cols):
            col = self.cols[j]
            for i in sorted(col):
                yield i, j, col[i]

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols.values())

    def column(self, j: int) -> dict[int, RatFunc]:
        return self.cols.get(j, {})

    def apply(self, vec: Mapping[int, RatFunc]) -> dict[int, RatFunc]:
        out: dict[int, RatFunc] = {}
        for j, x in vec.items():
            col = self.cols.get(j)
            if not col:
                continue
            for i, a in col.items():
                out[i] = out[i] + a * x if i in out else a * x
        return {i: v for i, v in out.items() if not v.is_zero()}

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = SparseMatrix(self.nrows, other.ncols)
        for j, col in other.cols.items():
            res = self.apply(col)
            if res:
                out.cols[j] = res
        return out

    def _combine(self, other: "SparseMatrix", sign: int) -> "SparseMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        out = SparseMatrix(self.nrows, self.ncols)
        for j in set(self.cols) | set(other.cols):
            a = self.cols.get(j, {})
            b = other.cols.get(j, {})
            col = dict(a)
            for i, v in b.items():
                v = v if sign > 0 else -v
                col[i] = col[i] + v if i in col else v
            col = {i: v for i, v in col.items() if not v.is_zero()}
            if col:
                out.cols[j] = col
        return out

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self._combine(other, 1)

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self._combine(other, -1)

    def scale(self, s) -> "SparseMatrix":
        s = RatFunc.coerce(s)
        if s.is_zero():
            return SparseMatrix(self.nrows, self.ncols)
        return SparseMatrix(self.nrows, self.ncols, {j: {i: s * v for i, v in col.items()} for j, col in self.cols.items()})

    __rmul__ = scale

    def __neg__(self) -> "SparseMatrix":
        return self.scale(-1)

    def map_entries(self, f: Callable[[RatFunc], RatFunc]) -> "SparseMatrix":
        return SparseMatrix(self.nrows, self.ncols, {j: {i: f(v) for i, v in col.items()} for j, col in self.cols.items()})

    def transpose(self) -> "SparseMatrix":
        out: dict[int, dict[int, RatFunc]] = {}
        for j, col in self.cols.items():
            for i, v in col.items():
                out.setdefault(i, {})[j] = v
        return SparseMatrix(self.ncols, self.nrows, out)

    def conjugate_diag(self, left: list[RatFunc], right: list[RatFunc]) -> "SparseMatrix":
        """diag(left) @ self @ diag(right)."""
        return SparseMatrix(self.nrows, self.ncols,
                            {j: {i: left[i] * v * right[j] for i, v in col.items()} for j, col in self.cols.items()})

    def is_zero(self) -> bool:
        return not self.cols

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self.cols == other.cols

    def first_difference(self, other: "SparseMatrix") -> tuple[int, int, RatFunc] | None:
        d = self - other
        for i, j, v in d.entries():
            return i, j, v
        return None

    def to_json(self) -> dict:
        return {"shape": list(self.shape),
                "entries": [[i, j, to_string(v)] for i, j, v in self.entries()]}

    def __repr__(self) -> str:
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"


def power(M: SparseMatrix, n: int) -> SparseMatrix:
    out = SparseMatrix.identity(M.nrows)
    for _ in range(n):
        out = M @ out
    return out


class Subspace:
    """Row-reduced basis of a subspace of coordinate space, kept in pivot form."""

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: dict[int, dict[int, RatFunc]] = {}  # pivot -> vector with vector[pivot] = 1

    def reduce(self, vec: Mapping[int, RatFunc]) -> dict[int, RatFunc]:
        v = {i: x for i, x in vec.items() if not x.is_zero()}
        changed = True
        while v and changed:
            changed = False
            for p in sorted(v):
                r = self.rows.get(p)
                if r is None:
                    continue
                s = v[p]
                for i, x in r.items():
                    nv = v.get(i, ZERO) - s * x
                    if nv.is_zero():
                        v.pop(i, None)
                    else:
                        v[i] = nv
                changed = True
                break
        return v

    def add(self, vec: Mapping[int, RatFunc]) -> dict[int, RatFunc] | None:
        """Insert vec; returns the reduced new vector if it enlarged the space."""
        v = self.reduce(vec)
        if not v:
            return None
        p = min(v)
        s = v[p].inverse()
        v = {i: x * s for i, x in v.items()}
        for q_, r in self.rows.items():
            if p in r:
                f = r[p]
                for i, x in v.items():
                    nv = r.get(i, ZERO) - f * x
                    if nv.is_zero():
                        r.pop(i, None)
                    else:
                        r[i] = nv
        self.rows[p] = v
        return v

    def __len__(self) -> int:
        return len(self.rows)

    def contains(self, vec: Mapping[int, RatFunc]) -> bool:
        return not self.reduce(vec)

    def support(self) -> set[int]:
        out: set[int] = set()
        for r in self.rows.values():
            out |= set(r)
        return out

    def is_coordinate(self) -> bool:
        """True if the space is spanned by standard basis vectors."""
        return all(len(r) == 1 for r in self.rows.values())


def nullspace(M: SparseMatrix) -> list[dict[int, RatFunc]]:
    """Basis of {x : M x = 0} by Gaussian elimination on the rows."""
    rows = M.transpose()  # cols of rows == rows of M
    pivots: dict[int, dict[int, RatFunc]] = {}  # pivot column -> reduced row
    for i in range(M.nrows):
        r = dict(rows.cols.get(i, {}))
        for p in sorted(pivots):
            if p in r:
                f = r[p]
                for j, x in pivots[p].items():
                    nv = r.get(j, ZERO) - f * x
                    if nv.is_zero():
                        r.pop(j, None)
                    else:
                        r[j] = nv
        if not r:
            continue
        p = min(r)
        s = r[p].inverse()
        r = {j: x * s for j, x in r.items()}
        for pp, other in pivots.items():
            if p in other:
                f = other[p]
                for j, x in r.items():
                    nv = other.get(j, ZERO) - f * x
                    if nv.is_zero():
                        other.pop(j, None)
                    else:
                        other[j] = nv
        pivots[p] = r
    free = [j for j in range(M.ncols) if j not in pivots]
    basis = []
    for f in free:
        vec = {f: ONE}
        for p, r in pivots.items():
            if f in r:
                vec[p] = -r[f]
        basis.append(vec)
    return basis
