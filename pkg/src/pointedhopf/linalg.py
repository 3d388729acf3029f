"""Sparse exact linear algebra over K.

Vectors are dicts ``key -> Scalar`` with zero entries pruned; keys must be
mutually comparable so pivots can be chosen deterministically (smallest key).
"""
from __future__ import annotations

from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from .scalars import FieldSpec, Scalar

Vec = Dict[Hashable, Scalar]

__all__ = ["EchelonBasis", "SparseMatrix", "vec_add", "vec_scale", "vec_axpy", "rank", "nullspace"]


def vec_axpy(target: Vec, coeff: Scalar, src: Vec) -> None:
    """target += coeff * src, in place."""
    if coeff.is_zero():
        return
    for k, v in src.items():
        cur = target.get(k)
        new = coeff * v if cur is None else cur + coeff * v
        if new.is_zero():
            target.pop(k, None)
        else:
            target[k] = new


def vec_add(a: Vec, b: Vec) -> Vec:
    out = dict(a)
    for k, v in b.items():
        cur = out.get(k)
        new = v if cur is None else cur + v
        if new.is_zero():
            out.pop(k, None)
        else:
            out[k] = new
    return out


def vec_scale(a: Vec, c: Scalar) -> Vec:
    if c.is_zero():
        return {}
    return {k: c * v for k, v in a.items()}


class EchelonBasis:
    """Incrementally maintained reduced row echelon form.

    Each stored row remembers which combination of the inserted vectors
    (identified by their tags) produced it, so membership queries can also
    return coordinates with respect to the independent inserted vectors.
    """

    def __init__(self):
        self.rows: Dict[Hashable, Tuple[Vec, Vec]] = {}  # pivot -> (row, combo)
        self.tags: List[Hashable] = []

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Vec) -> Tuple[Vec, Vec]:
        """Return (residual, combo) with vec = residual + sum combo[tag] * inserted[tag]."""
        res = dict(vec)
        combo: Vec = {}
        for p in [k for k in vec if k in self.rows]:
            c = res.get(p)
            if c is None:
                continue
            row, rcombo = self.rows[p]
            vec_axpy(res, -c, row)
            vec_axpy(combo, c, rcombo)
        return res, combo

    def add(self, vec: Vec, tag: Hashable) -> bool:
        """Insert ``vec``; return False (and change nothing) if it is dependent."""
        res, combo = self.reduce(vec)
        if not res:
            return False
        pivot = min(res)
        inv = res[pivot].inverse()
        # res = vec - sum combo[t] * inserted[t]
        new_combo = vec_scale(combo, -inv)
        new_combo[tag] = inv
        row = vec_scale(res, inv)
        for p, (r, rc) in list(self.rows.items()):
            c = r.get(pivot)
            if c is not None:
                r, rc = dict(r), dict(rc)
                vec_axpy(r, -c, row)
                vec_axpy(rc, -c, new_combo)
                self.rows[p] = (r, rc)
        self.rows[pivot] = (row, new_combo)
        self.tags.append(tag)
        return True

    def coordinates(self, vec: Vec) -> Optional[Vec]:
        """Coordinates of ``vec`` in terms of inserted tags, or None if not in the span."""
        res, combo = self.reduce(vec)
        if res:
            return None
        return combo

    def contains(self, vec: Vec) -> bool:
        res, _ = self.reduce(vec)
        return not res


def rank(vectors: Iterable[Vec]) -> int:
    eb = EchelonBasis()
    for k, v in enumerate(vectors):
        eb.add(v, k)
    return len(eb)


def nullspace(vectors: Sequence[Vec], field: FieldSpec) -> List[Vec]:
    """Basis of {c : sum_k c_k vectors[k] = 0}, as dicts index -> Scalar."""
    eb = EchelonBasis()
    out = []
    for k, v in enumerate(vectors):
        res, combo = eb.reduce(v)
        if res:
            eb.add(v, k)
        else:
            rel = vec_scale(combo, -field.one())
            rel[k] = field.one()
            out.append(rel)
    return out


class SparseMatrix:
    """Square or rectangular matrix stored by columns: ``cols[j][i] = M[i, j]``.

    The column convention matches left actions on column vectors: column j
    holds the image of basis vector j.
    """

    __slots__ = ("nrows", "ncols", "field", "cols")

    def __init__(self, nrows: int, ncols: int, field: FieldSpec, cols=None):
        self.nrows = nrows
        self.ncols = ncols
        self.field = field
        self.cols: Dict[int, Vec] = {}
        if cols:
            for j, col in cols.items():
                col = {i: v for i, v in col.items() if not v.is_zero()}
                if col:
                    self.cols[j] = col

    @classmethod
    def zero(cls, n: int, field: FieldSpec, m: Optional[int] = None) -> "SparseMatrix":
        return cls(n, n if m is None else m, field)

    @classmethod
    def identity(cls, n: int, field: FieldSpec) -> "SparseMatrix":
        one = field.one()
        return cls(n, n, field, {j: {j: one} for j in range(n)})

    @classmethod
    def diagonal(cls, entries: Sequence[Scalar], field: FieldSpec) -> "SparseMatrix":
        return cls(len(entries), len(entries), field,
                   {j: {j: v} for j, v in enumerate(entries)})

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Scalar]], field: FieldSpec) -> "SparseMatrix":
        n = len(rows)
        m = len(rows[0]) if rows else 0
        cols: Dict[int, Vec] = {}
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                v = field.coerce(v)
                if not v.is_zero():
                    cols.setdefault(j, {})[i] = v
        return cls(n, m, field, cols)

    def entry(self, i: int, j: int) -> Scalar:
        return self.cols.get(j, {}).get(i, self.field.zero())

    def to_rows(self) -> List[List[Scalar]]:
        z = self.field.zero()
        out = [[z] * self.ncols for _ in range(self.nrows)]
        for j, col in self.cols.items():
            for i, v in col.items():
                out[i][j] = v
        return out

    def apply(self, vec: Vec) -> Vec:
        out: Vec = {}
        for j, c in vec.items():
            col = self.cols.get(j)
            if col:
                vec_axpy(out, c, col)
        return out

    def column(self, j: int) -> Vec:
        return dict(self.cols.get(j, {}))

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        cols = {}
        for j, col in other.cols.items():
            img = self.apply(col)
            if img:
                cols[j] = img
        return SparseMatrix(self.nrows, other.ncols, self.field, cols)

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")
        cols = {j: dict(c) for j, c in self.cols.items()}
        for j, col in other.cols.items():
            tgt = cols.setdefault(j, {})
            vec_axpy(tgt, self.field.one(), col)
        return SparseMatrix(self.nrows, self.ncols, self.field, cols)

    def __neg__(self) -> "SparseMatrix":
        return self.scale(-self.field.one())

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self + (-other)

    def scale(self, c: Scalar) -> "SparseMatrix":
        if c.is_zero():
            return SparseMatrix(self.nrows, self.ncols, self.field)
        return SparseMatrix(self.nrows, self.ncols, self.field,
                            {j: vec_scale(col, c) for j, col in self.cols.items()})

    def __pow__(self, k: int) -> "SparseMatrix":
        if k < 0:
            raise ValueError("use inverse() for negative powers")
        out = SparseMatrix.identity(self.nrows, self.field)
        for _ in range(k):
            out = out @ self
        return out

    def is_zero(self) -> bool:
        return not self.cols

    def is_diagonal(self) -> bool:
        return all(set(col) <= {j} for j, col in self.cols.items())

    def diagonal_entries(self) -> List[Scalar]:
        return [self.entry(j, j) for j in range(self.ncols)]

    def inverse_diagonal(self) -> "SparseMatrix":
        if not self.is_diagonal():
            raise ValueError("not diagonal")
        return SparseMatrix.diagonal([v.inverse() for v in self.diagonal_entries()], self.field)

    def transpose(self) -> "SparseMatrix":
        cols: Dict[int, Vec] = {}
        for j, col in self.cols.items():
            for i, v in col.items():
                cols.setdefault(i, {})[j] = v
        return SparseMatrix(self.ncols, self.nrows, self.field, cols)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.nrows, self.ncols) == (other.nrows, other.ncols) and self.cols == other.cols

    def first_nonzero(self) -> Optional[Tuple[int, int, Scalar]]:
        for j in sorted(self.cols):
            col = self.cols[j]
            i = min(col)
            return i, j, col[i]
        return None

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols.values())
