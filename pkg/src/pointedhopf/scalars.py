"""Exact arithmetic in K = Q(zeta_N)(t_1, ..., t_m) and balanced q-integers.

An element of K is stored as ``num / den`` where ``num`` is a polynomial with
integer coefficients in ``z, t_1, ..., t_m`` of z-degree below phi(N), reduced
modulo the N-th cyclotomic polynomial, and ``den`` is a polynomial in the
``t``'s only.  The pair is normalized so that the gcd of ``den`` with all
z-coefficients of ``num`` is 1 (including integer content) and ``den`` has a
positive leading coefficient.  That makes the representation unique, so
equality is structural.

When phi(N) == 1 (N = 1 or 2) the variable ``z`` is not materialized; zeta
is the constant 1 or -1.
"""
from __future__ import annotations

import ast
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple, Union

from flint import fmpz, fmpz_mpoly_ctx

from .errors import DivisionByZero, ParseError, SpecializationPole, ZeroInput

__all__ = [
    "FieldSpec",
    "Scalar",
    "QBinomialTable",
    "q_int",
    "q_factorial",
    "q_binomial",
    "gaussian_binomial",
    "is_root_of_unity",
]

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
ZETA_NAME = "z"


def _euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


class _Backend:
    """Polynomial context and cyclotomic data shared by all Scalars of a field."""

    def __init__(self, order: int, names: Tuple[str, ...]):
        self.order = order
        self.names = names
        self.phi = _euler_phi(order)
        self.uses_z = self.phi > 1
        varnames = ((ZETA_NAME,) if self.uses_z else ()) + names
        self.ctx = fmpz_mpoly_ctx.get(varnames, "lex")
        gens = self.ctx.gens()
        self.offset = 1 if self.uses_z else 0
        self.tgens = gens[self.offset:]
        self.nvars = len(varnames)
        self.zero = self.ctx.constant(0)
        self.one = self.ctx.constant(1)
        if self.uses_z:
            self.z = gens[0]
            self.cyclo = self._cyclotomic()
            self.units = [k for k in range(2, order) if math.gcd(k, order) == 1]
        else:
            self.z = self.ctx.constant(-1 if order == 2 else 1)
            self.cyclo = None
            self.units = []

    def _cyclotomic(self):
        z = self.ctx.gens()[0]
        cache = {}

        def cyclo(n):
            # Phi_n(z) = (z^n - 1) / prod_{d | n, d < n} Phi_d(z)
            if n not in cache:
                poly = z ** n - 1
                for d in range(1, n):
                    if n % d == 0:
                        poly = poly / cyclo(d)
                cache[n] = poly
            return cache[n]

        return cyclo(self.order)

    def reduce(self, p):
        if self.uses_z and not p.is_zero() and p.degrees()[0] >= self.phi:
            _, p = divmod(p, self.cyclo)
        return p

    def conjugate(self, p, k: int):
        """Apply the Galois automorphism z -> z^k."""
        data = {}
        for mono, c in p.to_dict().items():
            key = (mono[0] * k,) + tuple(mono[1:])
            data[key] = data.get(key, 0) + int(c)
        return self.reduce(self.ctx.from_dict(data))


@lru_cache(maxsize=None)
def _backend(order: int, names: Tuple[str, ...]) -> _Backend:
    return _Backend(order, names)


@dataclass(frozen=True)
class FieldSpec:
    """The field Q(zeta_N)(t_1, ..., t_m)."""

    cyclotomic_order: int = 1
    indeterminate_names: Tuple[str, ...] = ()

    def __post_init__(self):
        names = tuple(self.indeterminate_names)
        object.__setattr__(self, "indeterminate_names", names)
        if not isinstance(self.cyclotomic_order, int) or self.cyclotomic_order < 1:
            raise ValueError("cyclotomic order must be a positive integer")
        if len(set(names)) != len(names):
            raise ValueError("indeterminate names must be distinct")
        for name in names:
            if not isinstance(name, str) or not _NAME_RE.match(name):
                raise ValueError(f"invalid indeterminate name {name!r}")
            if name == ZETA_NAME:
                raise ValueError("'z' is reserved for the root of unity")

    @property
    def _b(self) -> _Backend:
        return _backend(self.cyclotomic_order, self.indeterminate_names)

    # constructors
    def zero(self) -> "Scalar":
        b = self._b
        return Scalar._raw(self, b.zero, b.one)

    def one(self) -> "Scalar":
        b = self._b
        return Scalar._raw(self, b.one, b.one)

    def zeta(self) -> "Scalar":
        b = self._b
        return Scalar._raw(self, b.z if b.uses_z else b.z, b.one)

    def var(self, name: str) -> "Scalar":
        b = self._b
        if name == ZETA_NAME:
            return self.zeta()
        try:
            idx = self.indeterminate_names.index(name)
        except ValueError:
            raise ValueError(f"unknown indeterminate {name!r}") from None
        return Scalar._raw(self, b.tgens[idx], b.one)

    def gens(self) -> List["Scalar"]:
        return [self.var(n) for n in self.indeterminate_names]

    def __call__(self, value) -> "Scalar":
        return self.coerce(value)

    def coerce(self, value) -> "Scalar":
        if isinstance(value, Scalar):
            if value.field != self:
                raise ValueError("scalar belongs to a different field")
            return value
        if isinstance(value, bool):
            raise TypeError("booleans are not scalars")
        if isinstance(value, (int, fmpz)):
            b = self._b
            return Scalar._raw(self, b.ctx.constant(int(value)), b.one)
        if isinstance(value, Fraction):
            b = self._b
            return Scalar(self, b.ctx.constant(value.numerator),
                          b.ctx.constant(value.denominator))
        if isinstance(value, str):
            return self.parse(value)
        raise TypeError(f"cannot convert {type(value).__name__} to Scalar")

    def monomial(self, coeff: "Scalar", exponents: Sequence[int]) -> "Scalar":
        """``coeff * t^exponents`` for a constant ``coeff``; exponents may be negative."""
        out = self.coerce(coeff)
        for name, e in zip(self.indeterminate_names, exponents):
            if e:
                out = out * self.var(name) ** e
        return out

    def roots_of_unity(self) -> List["Scalar"]:
        """All roots of unity of K, as powers of the generator of the torsion group."""
        N = self.cyclotomic_order
        order = N if N % 2 == 0 else 2 * N
        gen = self.zeta() if N % 2 == 0 else -self.zeta()
        out = [self.one()]
        for _ in range(order - 1):
            out.append(out[-1] * gen)
        return out

    def torsion_order(self) -> int:
        N = self.cyclotomic_order
        return N if N % 2 == 0 else 2 * N

    def parse(self, text: str) -> "Scalar":
        return _parse(self, text)

    def describe(self) -> dict:
        return {"cyclotomic_order": self.cyclotomic_order,
                "indeterminates": list(self.indeterminate_names)}


def _normalize(b: _Backend, num, den):
    if den.is_zero():
        raise DivisionByZero("zero denominator")
    if num.is_zero():
        return b.zero, b.one
    g = num.gcd(den)
    if not g.is_one():
        num = num / g
        den = den / g
    if den.leading_coefficient() < 0:
        num = -num
        den = -den
    return num, den


class Scalar:
    """Immutable element of a :class:`FieldSpec`."""

    __slots__ = ("field", "num", "den", "_hash")

    def __init__(self, field: FieldSpec, num, den=None):
        b = field._b
        if den is None:
            den = b.one
        num = b.reduce(num)
        num, den = _normalize(b, num, den)
        self.field = field
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def _raw(cls, field, num, den):
        obj = cls.__new__(cls)
        obj.field = field
        obj.num = num
        obj.den = den
        obj._hash = None
        return obj

    # predicates
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def is_constant(self) -> bool:
        """True when no indeterminate occurs (the value lies in Q(zeta_N))."""
        b = self.field._b
        if not self.den.is_constant():
            return False
        off = b.offset
        return all(not any(m[off:]) for m in self.num.monoms())

    def is_rational(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(int(self.num.leading_coefficient()) if not self.num.is_zero() else 0,
                        int(self.den.leading_coefficient()))

    # arithmetic
    def _other(self, other) -> Optional["Scalar"]:
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise ValueError("scalars from different fields")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.field.coerce(other)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if o.num.is_zero():
            return self
        if self.num.is_zero():
            return o
        if self.den == o.den:
            return Scalar(self.field, self.num + o.num, self.den)
        return Scalar(self.field, self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw(self.field, -self.num, self.den)

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if self.num.is_zero() or o.num.is_zero():
            return self.field.zero()
        if o.is_one():
            return self
        if self.is_one():
            return o
        b = self.field._b
        num = b.reduce(self.num * o.num)
        den = self.den * o.den
        if den.is_one():
            return Scalar._raw(self.field, num, den)
        return Scalar._raw(self.field, *_normalize(b, num, den))

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.num.is_zero():
            raise DivisionByZero("inverse of zero")
        b = self.field._b
        if not b.uses_z or self.num.degrees()[0] == 0:
            return Scalar(self.field, self.den, self.num)
        # multiply by all nontrivial Galois conjugates to land in Q(t)
        conj = b.one
        for k in b.units:
            conj = b.reduce(conj * b.conjugate(self.num, k))
        norm = b.reduce(self.num * conj)
        assert norm.degrees()[0] == 0, "norm must be free of z"
        return Scalar(self.field, b.reduce(self.den * conj), norm)

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if o.num.is_zero():
            raise DivisionByZero("division by zero")
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return self.field.one()
        b = self.field._b
        if not b.uses_z:
            return Scalar._raw(self.field, self.num ** k, self.den ** k)
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # comparison / hashing
    def __eq__(self, other):
        if isinstance(other, Scalar):
            return (self.field == other.field and self.num == other.num
                    and self.den == other.den)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self == self.field.coerce(other)
        return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((tuple(sorted(self.num.to_dict().items())),
                               tuple(sorted(self.den.to_dict().items()))))
        return self._hash

    # structure
    def as_monomial(self) -> Optional[Tuple["Scalar", Tuple[int, ...]]]:
        """Split as ``c * t^e`` with ``c`` constant, or return None."""
        if self.num.is_zero():
            return None
        b = self.field._b
        off = b.offset
        den_terms = list(self.den.terms())
        if len(den_terms) != 1:
            return None
        dmono, dcoef = den_terms[0]
        texp = None
        const = {}
        for mono, c in self.num.terms():
            te = tuple(mono[off:])
            if texp is None:
                texp = te
            elif te != texp:
                return None
            key = (mono[0],) + (0,) * (b.nvars - 1) if off else (0,) * b.nvars
            const[key] = int(c)
        exps = tuple(int(a - d) for a, d in zip(texp, dmono[off:]))
        cnum = b.ctx.from_dict(const)
        return Scalar(self.field, cnum, b.ctx.constant(int(dcoef))), exps

    def substitute(self, values: Dict[str, "Scalar"]) -> "Scalar":
        """Substitute indeterminates by scalars (of the same field)."""
        out = self.field.zero()
        for part, sign in ((self.num, 1), (self.den, -1)):
            val = self.field.zero()
            for mono, c in part.terms():
                term = self.field.coerce(int(c))
                b = self.field._b
                if b.uses_z and mono[0]:
                    term = term * self.field.zeta() ** mono[0]
                for name, e in zip(self.field.indeterminate_names, mono[b.offset:]):
                    if e:
                        term = term * values.get(name, self.field.var(name)) ** e
                val = val + term
            if sign == 1:
                out = val
            else:
                if val.is_zero():
                    raise SpecializationPole("denominator vanishes under substitution")
                out = out / val
        return out

    # printing
    def __str__(self) -> str:
        b = self.field._b
        names = ((ZETA_NAME,) if b.uses_z else ()) + self.field.indeterminate_names
        num_s, num_terms = _poly_str(self.num, names)
        if self.den.is_one():
            return num_s
        den_s, den_terms = _poly_str(self.den, names)
        if num_terms > 1:
            num_s = f"({num_s})"
        if den_terms > 1 or not _is_atom(self.den):
            den_s = f"({den_s})"
        return f"{num_s}/{den_s}"

    def __repr__(self) -> str:
        return f"Scalar({self})"


def _is_atom(p) -> bool:
    terms = list(p.terms())
    if len(terms) != 1:
        return False
    mono, c = terms[0]
    nonzero = sum(1 for e in mono if e)
    if nonzero == 0:
        return True
    return c == 1 and nonzero == 1


def _poly_str(p, names: Sequence[str]) -> Tuple[str, int]:
    terms = list(p.terms())
    if not terms:
        return "0", 1
    parts = []
    for idx, (mono, c) in enumerate(terms):
        c = int(c)
        factors = []
        for name, e in zip(names, mono):
            if e == 1:
                factors.append(name)
            elif e:
                factors.append(f"{name}^{e}")
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = f"{mag}*" + "*".join(factors)
        if idx == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts), len(terms)


# ---------------------------------------------------------------- parsing

_ALLOWED_BIN = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)


def _parse(field: FieldSpec, text: str) -> Scalar:
    if not isinstance(text, str):
        raise ParseError("scalar literal must be a string", detail={"column": 0})
    # '^' is the exponent operator of the literal grammar; map it to Python's
    # '**' and keep a map from translated columns back to the original text.
    pieces, colmap = [], []
    for idx, ch in enumerate(text):
        piece = "**" if ch == "^" else ch
        pieces.append(piece)
        colmap.extend([idx] * len(piece))
    colmap.append(len(text))
    pysrc = "".join(pieces)
    lead = len(pysrc) - len(pysrc.lstrip())

    def original_col(col: int) -> int:
        col = min(max(col + lead, 0), len(colmap) - 1)
        return colmap[col]

    if not text.strip():
        raise ParseError("empty scalar literal", detail={"column": 0})
    try:
        tree = ast.parse(pysrc.strip(), mode="eval")
    except SyntaxError as exc:
        col = (exc.offset or 1) - 1
        raise ParseError(f"syntax error in {text!r}", detail={"column": original_col(col)}) from None

    def fail(node, msg):
        raise ParseError(f"{msg} in {text!r}",
                         detail={"column": original_col(getattr(node, "col_offset", 0))})

    def int_value(node) -> int:
        if isinstance(node, ast.Constant) and type(node.value) is int:
            return node.value
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = int_value(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        fail(node, "exponent must be an integer")

    def walk(node) -> Scalar:
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant):
            if type(node.value) is int:
                return field.coerce(node.value)
            fail(node, "only integer constants are allowed")
        if isinstance(node, ast.Name):
            if node.id == ZETA_NAME or node.id in field.indeterminate_names:
                return field.var(node.id)
            fail(node, f"unknown symbol {node.id!r}")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and isinstance(node.op, _ALLOWED_BIN):
            if isinstance(node.op, ast.Pow):
                base = walk(node.left)
                k = int_value(node.right)
                if k < 0 and base.is_zero():
                    fail(node, "negative power of zero")
                return base ** k
            left, right = walk(node.left), walk(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if right.is_zero():
                fail(node, "division by zero")
            return left / right
        fail(node, "unsupported syntax")

    return walk(tree)


# ---------------------------------------------------------------- roots of unity

def is_root_of_unity(a: Scalar) -> Optional[int]:
    """Multiplicative order of ``a`` if it is a root of unity in K, else None."""
    if a.is_zero():
        raise ZeroInput("zero is not a unit")
    if not a.is_constant():
        return None
    M = a.field.torsion_order()
    if not (a ** M).is_one():
        return None
    for k in sorted(d for d in range(1, M + 1) if M % d == 0):
        if (a ** k).is_one():
            return k
    return M  # pragma: no cover


# ---------------------------------------------------------------- q-integers

def q_int(n: int, v: Scalar) -> Scalar:
    """Balanced q-integer [n]_v = (v^n - v^-n)/(v - v^-1), as a Laurent sum."""
    if n < 0:
        return -q_int(-n, v)
    out = v.field.zero()
    for k in range(n):
        out = out + v ** (n - 1 - 2 * k)
    return out


def q_factorial(n: int, v: Scalar) -> Scalar:
    out = v.field.one()
    for k in range(1, n + 1):
        out = out * q_int(k, v)
    return out


def q_binomial(n: int, i: int, v: Scalar) -> Scalar:
    """Balanced q-binomial [n choose i]_v = [n]! / ([i]! [n-i]!)."""
    return QBinomialTable(v).binomial(n, i)


def gaussian_binomial(n: int, i: int, x: Scalar) -> Scalar:
    """Unbalanced Gaussian binomial (n choose i)_x, a polynomial in x (no poles).

    Related to the balanced one by [n choose i]_v = v^{-i(n-i)} (n choose i)_{v^2}.
    """
    if n < 0 or i < 0 or i > n:
        raise ValueError("need 0 <= i <= n")
    one = x.field.one()
    row = [one]
    for m in range(1, n + 1):
        new = [one]
        for k in range(1, m):
            new.append(row[k - 1] + x ** k * row[k])
        new.append(one)
        row = new
    return row[i]


class QBinomialTable:
    """Cached balanced q-integers, q-factorials and q-binomials at a fixed base."""

    def __init__(self, v: Scalar):
        if v.is_zero():
            raise ZeroInput("q-base must be nonzero")
        self.v = v
        self._ints: Dict[int, Scalar] = {}
        self._facts: List[Scalar] = [v.field.one()]

    def integer(self, n: int) -> Scalar:
        if n not in self._ints:
            self._ints[n] = q_int(n, self.v)
        return self._ints[n]

    def factorial(self, n: int) -> Scalar:
        while len(self._facts) <= n:
            k = len(self._facts)
            self._facts.append(self._facts[-1] * self.integer(k))
        return self._facts[n]

    def binomial(self, n: int, i: int) -> Scalar:
        if n < 0 or i < 0 or i > n:
            raise ValueError("need 0 <= i <= n")
        den = self.factorial(i) * self.factorial(n - i)
        if den.is_zero():
            raise SpecializationPole(f"q-factorial vanishes at v = {self.v}")
        return self.factorial(n) / den


def scalar_from_json(field: FieldSpec, value: Union[str, int]) -> Scalar:
    if isinstance(value, bool):
        raise ParseError("boolean where scalar expected")
    if isinstance(value, int):
        return field.coerce(value)
    return field.parse(value)
