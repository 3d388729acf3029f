"""Braided vector spaces of diagonal type, free-algebra words and Nichols algebra normal forms.

Words are tuples of 0-based letter indices.  The Nichols algebra is realized
degree by degree as the image of the quantum symmetrizer; since the braiding
is diagonal, the symmetrizer preserves the Z^n multidegree, so all linear
algebra happens inside a single multidegree at a time.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .abgroup import Character, GroupElement
from .errors import DegreeBudgetExceeded, PositionOutOfRange
from .linalg import EchelonBasis, SparseMatrix, vec_axpy
from .scalars import FieldSpec, Scalar, gaussian_binomial

Word = Tuple[int, ...]

__all__ = [
    "BraidedVectorSpace", "TensorPoly", "NicholsEngine", "NicholsElement", "braid_op",
    "quantum_symmetrizer", "braided_adjoint", "serre_expand", "serre_coefficients",
    "operator_matrix", "words_of_length",
]


@dataclass(frozen=True)
class BraidedVectorSpace:
    """Basis x_0..x_{n-1} with c(x_i (x) x_j) = q_ij x_j (x) x_i."""

    field: FieldSpec
    q: Tuple[Tuple[Scalar, ...], ...]
    labels: Tuple[str, ...] = ()
    degrees: Optional[Tuple[GroupElement, ...]] = None
    characters: Optional[Tuple[Character, ...]] = None

    def __post_init__(self):
        n = len(self.q)
        if any(len(row) != n for row in self.q):
            raise ValueError("braiding matrix must be square")
        if any(v.is_zero() for row in self.q for v in row):
            raise ValueError("braiding entries must be nonzero")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"x{i + 1}" for i in range(n)))

    @property
    def dim(self) -> int:
        return len(self.q)

    @classmethod
    def from_characters(cls, degrees: Sequence[GroupElement], characters: Sequence[Character],
                        labels: Sequence[str] = (), field: Optional[FieldSpec] = None
                        ) -> "BraidedVectorSpace":
        q = tuple(tuple(c(g) for c in characters) for g in degrees)
        field = field or characters[0].field
        return cls(field, q, tuple(labels), tuple(degrees), tuple(characters))

    @classmethod
    def from_matrix(cls, q: Sequence[Sequence], field: FieldSpec,
                    labels: Sequence[str] = ()) -> "BraidedVectorSpace":
        return cls(field, tuple(tuple(field.coerce(v) for v in row) for row in q), tuple(labels))

    def multidegree(self, word: Word) -> Tuple[int, ...]:
        out = [0] * self.dim
        for a in word:
            out[a] += 1
        return tuple(out)

    def factor(self, letter: int, word: Word) -> Scalar:
        """prod_r q_{letter, word_r}: the cost of moving ``letter`` past ``word`` from the left."""
        out = self.field.one()
        for b in word:
            out = out * self.q[letter][b]
        return out


class TensorPoly:
    """Finite K-linear combination of words; zero coefficients are pruned."""

    __slots__ = ("field", "terms")

    def __init__(self, field: FieldSpec, terms: Optional[Mapping[Word, Scalar]] = None):
        self.field = field
        self.terms: Dict[Word, Scalar] = {}
        if terms:
            for w, c in terms.items():
                c = field.coerce(c)
                if not c.is_zero():
                    self.terms[tuple(w)] = c

    @classmethod
    def word(cls, field: FieldSpec, word: Iterable[int], coeff=1) -> "TensorPoly":
        return cls(field, {tuple(word): field.coerce(coeff)})

    @classmethod
    def one(cls, field: FieldSpec) -> "TensorPoly":
        return cls(field, {(): field.one()})

    def copy(self) -> "TensorPoly":
        out = TensorPoly(self.field)
        out.terms = dict(self.terms)
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def items(self) -> List[Tuple[Word, Scalar]]:
        return sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def __iter__(self):
        return iter(self.items())

    def __add__(self, other: "TensorPoly") -> "TensorPoly":
        out = self.copy()
        vec_axpy(out.terms, self.field.one(), other.terms)
        return out

    def __neg__(self) -> "TensorPoly":
        return self.scale(-self.field.one())

    def __sub__(self, other: "TensorPoly") -> "TensorPoly":
        out = self.copy()
        vec_axpy(out.terms, -self.field.one(), other.terms)
        return out

    def scale(self, c) -> "TensorPoly":
        c = self.field.coerce(c)
        if c.is_zero():
            return TensorPoly(self.field)
        out = TensorPoly(self.field)
        out.terms = {w: c * v for w, v in self.terms.items()}
        return out

    def __mul__(self, other) -> "TensorPoly":
        if not isinstance(other, TensorPoly):
            return self.scale(other)
        out: Dict[Word, Scalar] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                vec_axpy(out, c1 * c2, {w1 + w2: self.field.one()})
        res = TensorPoly(self.field)
        res.terms = out
        return res

    def __rmul__(self, other) -> "TensorPoly":
        return self.scale(other)

    def __pow__(self, k: int) -> "TensorPoly":
        out = TensorPoly.one(self.field)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorPoly):
            return NotImplemented
        return self.terms == other.terms

    def lengths(self) -> List[int]:
        return sorted({len(w) for w in self.terms})

    def homogeneous_parts(self, v: BraidedVectorSpace) -> Dict[Tuple[int, ...], "TensorPoly"]:
        parts: Dict[Tuple[int, ...], TensorPoly] = {}
        for w, c in self.terms.items():
            parts.setdefault(v.multidegree(w), TensorPoly(self.field)).terms[w] = c
        return parts

    def to_string(self, labels: Sequence[str]) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for w, c in self.items():
            mono = "*".join(labels[a] for a in w) if w else "1"
            if c.is_one():
                pieces.append(mono)
            elif (-c).is_one():
                pieces.append(f"-{mono}")
            else:
                pieces.append(f"({c})*{mono}")
        return " + ".join(pieces)

    def __repr__(self) -> str:
        return f"TensorPoly({self.to_string([f'x{i + 1}' for i in range(64)])})"


def words_of_length(n: int, d: int) -> List[Word]:
    out: List[Word] = [()]
    for _ in range(d):
        out = [w + (a,) for w in out for a in range(n)]
    return out


# ---------------------------------------------------------------- braid operators

def braid_op(v: BraidedVectorSpace, d: int, i: int) -> Callable[[TensorPoly], TensorPoly]:
    """c acting at tensor positions (i, i+1), 1 <= i < d, on degree-d words."""
    if not 1 <= i < d:
        raise PositionOutOfRange(f"position {i} is not in 1..{d - 1}", detail=[i, d])
    k = i - 1

    def op(p: TensorPoly) -> TensorPoly:
        out: Dict[Word, Scalar] = {}
        for w, c in p.terms.items():
            if len(w) != d:
                raise PositionOutOfRange(f"word of length {len(w)} passed to a degree-{d} operator")
            a, b = w[k], w[k + 1]
            nw = w[:k] + (b, a) + w[k + 2:]
            vec_axpy(out, c * v.q[a][b], {nw: v.field.one()})
        res = TensorPoly(v.field)
        res.terms = out
        return res

    return op


def operator_matrix(op: Callable[[TensorPoly], TensorPoly], v: BraidedVectorSpace,
                    d: int) -> SparseMatrix:
    """Matrix of a linear operator on degree-d words, basis in lexicographic order."""
    words = words_of_length(v.dim, d)
    index = {w: k for k, w in enumerate(words)}
    cols = {}
    for j, w in enumerate(words):
        img = op(TensorPoly.word(v.field, w))
        cols[j] = {index[u]: c for u, c in img.terms.items()}
    return SparseMatrix(len(words), len(words), v.field, cols)


class _Symmetrizer:
    """S_d(w) = sum_k (prod_{r>k} q_{w_k w_r}) S_{d-1}(w without position k) w_k, memoized per word."""

    def __init__(self, v: BraidedVectorSpace):
        self.v = v
        self.cache: Dict[Word, Dict[Word, Scalar]] = {(): {(): v.field.one()}}

    def __call__(self, w: Word) -> Dict[Word, Scalar]:
        got = self.cache.get(w)
        if got is not None:
            return got
        v = self.v
        out: Dict[Word, Scalar] = {}
        d = len(w)
        for k in range(d):
            coeff = v.factor(w[k], w[k + 1:])
            rest = self(w[:k] + w[k + 1:])
            for u, c in rest.items():
                vec_axpy(out, coeff * c, {u + (w[k],): v.field.one()})
        self.cache[w] = out
        return out


def quantum_symmetrizer(v: BraidedVectorSpace, d: int) -> Callable[[TensorPoly], TensorPoly]:
    """The operator S_d = sum over Sym(d) of the positive braid lifts."""
    sym = _Symmetrizer(v)

    def op(p: TensorPoly) -> TensorPoly:
        out: Dict[Word, Scalar] = {}
        for w, c in p.terms.items():
            if len(w) != d:
                raise ValueError(f"word of length {len(w)} passed to S_{d}")
            vec_axpy(out, c, sym(w))
        res = TensorPoly(v.field)
        res.terms = out
        return res

    return op


# ---------------------------------------------------------------- Nichols engine

def _multinomial(md: Sequence[int]) -> int:
    out = factorial(sum(md))
    for k in md:
        out //= factorial(k)
    return out


def _words_with_multidegree(md: Tuple[int, ...]) -> List[Word]:
    """All words with the given letter counts, in lexicographic order."""
    out: List[Word] = []
    counts = list(md)
    total = sum(md)
    cur: List[int] = []

    def rec():
        if len(cur) == total:
            out.append(tuple(cur))
            return
        for a, c in enumerate(counts):
            if c:
                counts[a] -= 1
                cur.append(a)
                rec()
                cur.pop()
                counts[a] += 1

    rec()
    return out


class NicholsEngine:
    """Normal forms in B(V): per multidegree, a basis of lexicographically earliest words
    whose symmetrizer images are independent; coordinates are read off those images."""

    def __init__(self, v: BraidedVectorSpace, max_length: int = 10, max_words: int = 200_000):
        self.v = v
        self.field = v.field
        self.max_length = max_length
        self.max_words = max_words
        self._sym = _Symmetrizer(v)
        self._bases: Dict[Tuple[int, ...], Tuple[EchelonBasis, List[Word]]] = {}

    def _check_budget(self, md: Tuple[int, ...]):
        d = sum(md)
        if d > self.max_length:
            raise DegreeBudgetExceeded(f"degree {d} exceeds the length budget {self.max_length}",
                                       detail={"degree": d, "max_length": self.max_length})
        count = _multinomial(md)
        if count > self.max_words:
            raise DegreeBudgetExceeded(f"{count} words in multidegree {md} exceed the budget",
                                       detail={"words": count, "max_words": self.max_words})

    def _basis_for(self, md: Tuple[int, ...]) -> Tuple[EchelonBasis, List[Word]]:
        got = self._bases.get(md)
        if got is not None:
            return got
        self._check_budget(md)
        eb = EchelonBasis()
        basis: List[Word] = []
        for w in _words_with_multidegree(md):
            if eb.add(self._sym(w), w):
                basis.append(w)
        self._bases[md] = (eb, basis)
        return eb, basis

    def multidegrees(self, d: int) -> List[Tuple[int, ...]]:
        out: List[Tuple[int, ...]] = []

        def rec(prefix, left, slots):
            if slots == 1:
                out.append(tuple(prefix + [left]))
                return
            for k in range(left, -1, -1):
                rec(prefix + [k], left - k, slots - 1)

        if self.v.dim == 0:
            return [()] if d == 0 else []
        rec([], d, self.v.dim)
        return out

    def nichols_basis(self, d: int) -> List[Word]:
        """Basis words of B(V)(d), ordered by multidegree (descending) then lexicographically."""
        if d > self.max_length:
            raise DegreeBudgetExceeded(f"degree {d} exceeds the length budget {self.max_length}",
                                       detail={"degree": d, "max_length": self.max_length})
        out: List[Word] = []
        for md in self.multidegrees(d):
            out.extend(self._basis_for(md)[1])
        return out

    def graded_dimension(self, d: int) -> int:
        return len(self.nichols_basis(d))

    def basis_in_multidegree(self, md: Tuple[int, ...]) -> List[Word]:
        return list(self._basis_for(tuple(md))[1])

    def coordinates(self, p: TensorPoly) -> Dict[Word, Scalar]:
        """Coordinates of the class of p with respect to the basis words."""
        out: Dict[Word, Scalar] = {}
        for md, part in p.homogeneous_parts(self.v).items():
            eb, _ = self._basis_for(md)
            image: Dict[Word, Scalar] = {}
            for w, c in part.terms.items():
                vec_axpy(image, c, self._sym(w))
            coords = eb.coordinates(image)
            if coords is None:  # pragma: no cover - the basis spans the image
                raise AssertionError("symmetrizer image outside the span of the basis")
            for w, c in coords.items():
                out[w] = c
        return out

    def reduce(self, p: TensorPoly) -> "NicholsElement":
        return NicholsElement(self, self.coordinates(p))

    def element(self, word: Iterable[int], coeff=1) -> "NicholsElement":
        return self.reduce(TensorPoly.word(self.field, word, coeff))

    def one(self) -> "NicholsElement":
        return NicholsElement(self, {(): self.field.one()})

    def is_zero(self, p: TensorPoly) -> bool:
        return not self.coordinates(p)

    def multiply(self, a: "NicholsElement", b: "NicholsElement") -> "NicholsElement":
        if a.engine is not self or b.engine is not self:
            raise ValueError("elements of different Nichols algebras")
        return self.reduce(a.representative() * b.representative())


class NicholsElement:
    """An element of B(V) stored by its coordinates on the canonical basis words."""

    __slots__ = ("engine", "coords")

    def __init__(self, engine: NicholsEngine, coords: Mapping[Word, Scalar]):
        self.engine = engine
        self.coords = {w: c for w, c in coords.items() if not c.is_zero()}

    def representative(self) -> TensorPoly:
        return TensorPoly(self.engine.field, self.coords)

    def is_zero(self) -> bool:
        return not self.coords

    def __add__(self, other: "NicholsElement") -> "NicholsElement":
        out = dict(self.coords)
        vec_axpy(out, self.engine.field.one(), other.coords)
        return NicholsElement(self.engine, out)

    def __sub__(self, other: "NicholsElement") -> "NicholsElement":
        out = dict(self.coords)
        vec_axpy(out, -self.engine.field.one(), other.coords)
        return NicholsElement(self.engine, out)

    def scale(self, c) -> "NicholsElement":
        c = self.engine.field.coerce(c)
        return NicholsElement(self.engine, {w: c * v for w, v in self.coords.items()})

    def __mul__(self, other) -> "NicholsElement":
        if isinstance(other, NicholsElement):
            return self.engine.multiply(self, other)
        return self.scale(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NicholsElement):
            return NotImplemented
        return self.engine is other.engine and self.coords == other.coords

    def degrees(self) -> List[int]:
        return sorted({len(w) for w in self.coords})

    def __repr__(self) -> str:
        return f"NicholsElement({self.representative().to_string(self.engine.v.labels)})"


# ---------------------------------------------------------------- adjoint action and Serre

def braided_adjoint(v: BraidedVectorSpace, i: int, y: TensorPoly) -> TensorPoly:
    """ad_c(x_i)(y) = x_i y - (prod_r q_{i y_r}) y x_i, word by word."""
    out: Dict[Word, Scalar] = {}
    one = v.field.one()
    for w, c in y.terms.items():
        vec_axpy(out, c, {(i,) + w: one})
        vec_axpy(out, -c * v.factor(i, w), {w + (i,): one})
    res = TensorPoly(v.field)
    res.terms = out
    return res


def serre_coefficients(qii: Scalar, qij: Scalar, a: int) -> List[Scalar]:
    """c_s with ad_c(x_i)^a(x_j) = sum_s c_s x_i^{a-s} x_j x_i^s.

    c_s = (-q_ij)^s q_ii^{s(s-1)/2} (a choose s)_{q_ii}; with v = q_J^{d_i} this equals
    (-v^{a-1} q_ij)^s [a choose s]_v, but needs only q_ii, so it stays in K even
    when q_J does not.
    """
    return [(-qij) ** s * qii ** (s * (s - 1) // 2) * gaussian_binomial(a, s, qii)
            for s in range(a + 1)]


def serre_expand(v: BraidedVectorSpace, i: int, j: int, a: int) -> TensorPoly:
    coeffs = serre_coefficients(v.q[i][i], v.q[i][j], a)
    out: Dict[Word, Scalar] = {}
    for s, c in enumerate(coeffs):
        vec_axpy(out, c, {(i,) * (a - s) + (j,) + (i,) * s: v.field.one()})
    res = TensorPoly(v.field)
    res.terms = out
    return res
