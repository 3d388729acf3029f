"""Finitely generated abelian groups in invariant-factor shape and their characters."""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

from .errors import GroupMismatch
from .scalars import FieldSpec, Scalar

__all__ = ["FgAbelianGroup", "GroupElement", "Character"]


@dataclass(frozen=True)
class FgAbelianGroup:
    """Z^free_rank x Z/(d_1) x ... x Z/(d_k)."""

    free_rank: int = 0
    torsion_orders: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion_orders", tuple(int(d) for d in self.torsion_orders))
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        if any(d < 2 for d in self.torsion_orders):
            raise ValueError("torsion orders must be >= 2")

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.torsion_orders)

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def order(self) -> int | None:
        if self.free_rank:
            return None
        out = 1
        for d in self.torsion_orders:
            out *= d
        return out

    def generator_order(self, k: int) -> int | None:
        """Order of the k-th generator (None for free generators)."""
        if k < self.free_rank:
            return None
        return self.torsion_orders[k - self.free_rank]

    def element(self, exponents: Sequence[int]) -> "GroupElement":
        exps = [int(e) for e in exponents]
        if len(exps) != self.ngens:
            raise GroupMismatch(f"expected {self.ngens} exponents, got {len(exps)}")
        for k, d in enumerate(self.torsion_orders):
            exps[self.free_rank + k] %= d
        return GroupElement(self, tuple(exps))

    def identity(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.ngens)

    def gen(self, k: int) -> "GroupElement":
        exps = [0] * self.ngens
        exps[k] = 1
        return self.element(exps)

    def gens(self) -> List["GroupElement"]:
        return [self.gen(k) for k in range(self.ngens)]

    def elements(self) -> List["GroupElement"]:
        """All elements of a finite group, in lexicographic exponent order."""
        if self.free_rank:
            raise ValueError("group is infinite")
        out = [()]
        for d in self.torsion_orders:
            out = [e + (r,) for e in out for r in range(d)]
        return [GroupElement(self, e) for e in out]

    def describe(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion_orders)}


@dataclass(frozen=True)
class GroupElement:
    group: FgAbelianGroup
    exponents: Tuple[int, ...]

    def _check(self, other: "GroupElement"):
        if not isinstance(other, GroupElement) or other.group != self.group:
            raise GroupMismatch("group elements from different groups")

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return self.group.element([a + b for a, b in zip(self.exponents, other.exponents)])

    def inverse(self) -> "GroupElement":
        return self.group.element([-a for a in self.exponents])

    def __pow__(self, k: int) -> "GroupElement":
        return self.group.element([a * k for a in self.exponents])

    def is_identity(self) -> bool:
        return not any(self.exponents)

    def order(self) -> int | None:
        from math import gcd

        if any(self.exponents[: self.group.free_rank]):
            return None
        out = 1
        for e, d in zip(self.exponents[self.group.free_rank:], self.group.torsion_orders):
            o = d // gcd(e, d)
            out = out * o // gcd(out, o)
        return out

    def __str__(self) -> str:
        return "(" + ",".join(str(e) for e in self.exponents) + ")"


class Character:
    """A homomorphism Gamma -> K^*, given by its values on the generators."""

    __slots__ = ("group", "values")

    def __init__(self, group: FgAbelianGroup, values: Sequence[Scalar]):
        values = tuple(values)
        if len(values) != group.ngens:
            raise GroupMismatch(f"expected {group.ngens} character values, got {len(values)}")
        for k, v in enumerate(values):
            if v.is_zero():
                raise ValueError(f"character value on generator {k} is zero")
            d = group.generator_order(k)
            if d is not None and not (v ** d).is_one():
                raise ValueError(f"value {v} on a generator of order {d} is not a {d}-th root of 1")
        self.group = group
        self.values = values

    @property
    def field(self) -> FieldSpec:
        return self.values[0].field if self.values else None

    @classmethod
    def trivial(cls, group: FgAbelianGroup, field: FieldSpec) -> "Character":
        return cls(group, [field.one()] * group.ngens)

    def __call__(self, x: GroupElement) -> Scalar:
        return self.evaluate(x)

    def evaluate(self, x: GroupElement) -> Scalar:
        if not isinstance(x, GroupElement) or x.group != self.group:
            raise GroupMismatch("element does not belong to the character's group")
        if not self.values:
            raise ValueError("character on the trivial group needs an explicit field")
        out = self.values[0].field.one()
        for v, e in zip(self.values, x.exponents):
            if e:
                out = out * v ** e
        return out

    def _check(self, other: "Character"):
        if not isinstance(other, Character) or other.group != self.group:
            raise GroupMismatch("characters of different groups")

    def __mul__(self, other: "Character") -> "Character":
        self._check(other)
        return Character(self.group, [a * b for a, b in zip(self.values, other.values)])

    def inverse(self) -> "Character":
        return Character(self.group, [v.inverse() for v in self.values])

    def __pow__(self, k: int) -> "Character":
        return Character(self.group, [v ** k for v in self.values])

    def __truediv__(self, other: "Character") -> "Character":
        return self * other.inverse()

    def is_trivial(self) -> bool:
        return all(v.is_one() for v in self.values)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Character):
            return NotImplemented
        self._check(other)
        return self.values == other.values

    def __hash__(self):
        return hash((self.group, self.values))

    def __str__(self) -> str:
        return "[" + ", ".join(str(v) for v in self.values) + "]"

    __repr__ = __str__

    def literals(self) -> List[str]:
        return [str(v) for v in self.values]


def char_eval(c: Character, x: GroupElement) -> Scalar:
    return c.evaluate(x)


def char_ops(a: Character, b: Character | None, op: str):
    """Dispatch for mul / inverse / equals / is_trivial."""
    if op == "mul":
        return a * b
    if op == "inverse":
        return a.inverse()
    if op == "equals":
        return a == b
    if op == "is_trivial":
        return a.is_trivial()
    raise ValueError(f"unknown character operation {op!r}")
