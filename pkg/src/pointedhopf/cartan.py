"""Cartan matrices of finite type: validation, connected components, symmetrizers.

Finite type is recognized by matching each connected component of the Dynkin
graph against the classification (A-G), which also yields the type tag.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, List, Sequence, Tuple

from .errors import NotFiniteType, NotGeneralizedCartan

__all__ = ["CartanMatrix", "ComponentData", "validate_cartan", "components"]

# number of positive roots and height of the highest root, per family
_POSITIVE_ROOTS = {
    "A": lambda n: n * (n + 1) // 2,
    "B": lambda n: n * n,
    "C": lambda n: n * n,
    "D": lambda n: n * (n - 1),
    "E": lambda n: {6: 36, 7: 63, 8: 120}[n],
    "F": lambda n: 24,
    "G": lambda n: 6,
}
_HIGHEST_HEIGHT = {
    "A": lambda n: n,
    "B": lambda n: 2 * n - 1,
    "C": lambda n: 2 * n - 1,
    "D": lambda n: 2 * n - 3,
    "E": lambda n: {6: 11, 7: 17, 8: 29}[n],
    "F": lambda n: 11,
    "G": lambda n: 5,
}


@dataclass(frozen=True)
class ComponentData:
    """Partition of the index set into components, with symmetrizers and type tags."""

    parts: Tuple[Tuple[int, ...], ...]
    symmetrizer: Tuple[int, ...]
    types: Tuple[str, ...]

    def component_of(self, i: int) -> int:
        for k, part in enumerate(self.parts):
            if i in part:
                return k
        raise IndexError(i)

    def type_of(self, i: int) -> str:
        return self.types[self.component_of(i)]

    def positive_roots(self, k: int) -> int:
        tag = self.types[k]
        return _POSITIVE_ROOTS[tag[0]](int(tag[1:]))

    def highest_root_height(self, k: int) -> int:
        tag = self.types[k]
        return _HIGHEST_HEIGHT[tag[0]](int(tag[1:]))


@dataclass(frozen=True)
class CartanMatrix:
    entries: Tuple[Tuple[int, ...], ...]
    data: ComponentData

    @property
    def rank(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: Tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def same_component(self, i: int, j: int) -> bool:
        return self.data.component_of(i) == self.data.component_of(j)

    def d(self, i: int) -> int:
        return self.data.symmetrizer[i]

    def is_diagonal(self) -> bool:
        return all(self.entries[i][j] == 0 for i in range(self.rank)
                   for j in range(self.rank) if i != j)

    def as_lists(self) -> List[List[int]]:
        return [list(r) for r in self.entries]

    def submatrix(self, indices: Sequence[int]) -> "CartanMatrix":
        return validate_cartan([[self.entries[i][j] for j in indices] for i in indices])

    def dot(self) -> str:
        """Dynkin graph in DOT format; double/triple bonds labelled by a_ij a_ji."""
        lines = ["graph dynkin {"]
        for i in range(self.rank):
            lines.append(f'  {i + 1} [label="{i + 1} (d={self.d(i)})"];')
        for i in range(self.rank):
            for j in range(i + 1, self.rank):
                if self.entries[i][j]:
                    mult = self.entries[i][j] * self.entries[j][i]
                    lines.append(f'  {i + 1} -- {j + 1} [label="{mult}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _check_generalized(m: Sequence[Sequence[int]]) -> Tuple[Tuple[int, ...], ...]:
    n = len(m)
    rows = []
    for i, row in enumerate(m):
        if len(row) != n:
            raise NotGeneralizedCartan("matrix is not square")
        try:
            r = tuple(int(x) for x in row)
        except (TypeError, ValueError):
            raise NotGeneralizedCartan("entries must be integers") from None
        if any(int(x) != x for x in row):
            raise NotGeneralizedCartan("entries must be integers")
        rows.append(r)
    for i in range(n):
        if rows[i][i] != 2:
            raise NotGeneralizedCartan(f"a[{i + 1},{i + 1}] must be 2", detail=[i + 1, i + 1])
        for j in range(n):
            if i == j:
                continue
            if rows[i][j] > 0:
                raise NotGeneralizedCartan(f"a[{i + 1},{j + 1}] must be <= 0", detail=[i + 1, j + 1])
            if (rows[i][j] == 0) != (rows[j][i] == 0):
                raise NotGeneralizedCartan(
                    f"a[{i + 1},{j + 1}] = 0 iff a[{j + 1},{i + 1}] = 0 fails", detail=[i + 1, j + 1])
    return tuple(rows)


def _connected_parts(rows) -> List[Tuple[int, ...]]:
    n = len(rows)
    seen = [False] * n
    parts = []
    for s in range(n):
        if seen[s]:
            continue
        stack, part = [s], []
        seen[s] = True
        while stack:
            i = stack.pop()
            part.append(i)
            for j in range(n):
                if j != i and rows[i][j] and not seen[j]:
                    seen[j] = True
                    stack.append(j)
        parts.append(tuple(sorted(part)))
    return parts


def _symmetrize(rows, part) -> Dict[int, int]:
    """Smallest positive integers d with d_i a_ij = d_j a_ji on the component."""
    d: Dict[int, Fraction] = {part[0]: Fraction(1)}
    stack = [part[0]]
    while stack:
        i = stack.pop()
        for j in part:
            if j == i or not rows[i][j]:
                continue
            val = d[i] * rows[i][j] / rows[j][i]
            if j in d:
                if d[j] != val:
                    raise NotFiniteType("component is not symmetrizable")
            else:
                d[j] = val
                stack.append(j)
    lcm_den = 1
    for v in d.values():
        lcm_den = lcm_den * v.denominator // gcd(lcm_den, v.denominator)
    ints = {i: int(v * lcm_den) for i, v in d.items()}
    g = 0
    for v in ints.values():
        g = gcd(g, v)
    return {i: v // g for i, v in ints.items()}


def _classify(rows, part, d: Dict[int, int]) -> str:
    n = len(part)
    edges = []
    for a in range(n):
        for b in range(a + 1, n):
            i, j = part[a], part[b]
            if rows[i][j]:
                mult = rows[i][j] * rows[j][i]
                if mult > 3 or (mult > 1 and min(-rows[i][j], -rows[j][i]) != 1):
                    raise NotFiniteType(f"bond between {i + 1} and {j + 1} is not of finite type")
                edges.append((i, j, mult))
    if len(edges) != n - 1:
        raise NotFiniteType("Dynkin graph of a component contains a cycle")
    if n == 1:
        return "A1"
    deg = {i: 0 for i in part}
    for i, j, _ in edges:
        deg[i] += 1
        deg[j] += 1
    mults = sorted(m for _, _, m in edges)
    branch = [i for i in part if deg[i] >= 3]
    if mults[-1] == 3:
        if n == 2:
            return "G2"
        raise NotFiniteType("triple bond only occurs in G2")
    if mults[-1] == 2:
        if mults.count(2) > 1 or branch:
            raise NotFiniteType("not a finite-type diagram")
        if n == 2:
            return "B2"
        (i, j, _), = [e for e in edges if e[2] == 2]
        end = i if deg[i] == 1 else (j if deg[j] == 1 else None)
        if end is None:
            if n == 4:
                return "F4"
            raise NotFiniteType("double bond in the interior only occurs in F4")
        other = j if end == i else i
        # B_n: the end vertex is the unique short root; C_n: the unique long one
        return f"B{n}" if d[end] < d[other] else f"C{n}"
    # simply laced
    if not branch:
        return f"A{n}"
    if len(branch) > 1 or deg[branch[0]] != 3:
        raise NotFiniteType("not a finite-type diagram")
    c = branch[0]
    adj = {i: [] for i in part}
    for i, j, _ in edges:
        adj[i].append(j)
        adj[j].append(i)
    arms = []
    for start in adj[c]:
        length, prev, cur = 1, c, start
        while True:
            nxt = [k for k in adj[cur] if k != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return f"D{n}"
    if arms[0] == 1 and arms[1] == 2 and arms[2] in (2, 3, 4):
        return f"E{n}"
    raise NotFiniteType("not a finite-type diagram")


def validate_cartan(m: Sequence[Sequence[int]]) -> CartanMatrix:
    """Validate a Cartan matrix of finite type and compute its component data."""
    rows = _check_generalized(m)
    parts = _connected_parts(rows)
    sym = [0] * len(rows)
    types = []
    for part in parts:
        d = _symmetrize(rows, part)
        types.append(_classify(rows, part, d))
        for i, v in d.items():
            sym[i] = v
    data = ComponentData(tuple(parts), tuple(sym), tuple(types))
    return CartanMatrix(rows, data)


def components(cm: CartanMatrix) -> ComponentData:
    return cm.data


def cartan_of_type(tag: str) -> List[List[int]]:
    """Standard Cartan matrix for a type tag (Bourbaki numbering)."""
    fam, n = tag[0], int(tag[1:])
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    if fam in "ABCD" or fam == "E":
        for i in range(n - 1):
            a[i][i + 1] = a[i + 1][i] = -1
    if fam == "B" and n >= 2:
        a[n - 1][n - 2] = -2
    elif fam == "C" and n >= 2:
        a[n - 2][n - 1] = -2
    elif fam == "D":
        a[n - 2][n - 1] = a[n - 1][n - 2] = 0
        a[n - 3][n - 1] = a[n - 1][n - 3] = -1
    elif fam == "E":
        a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
        for i, j in [(0, 2), (2, 3), (3, 4), (1, 3)] + [(k, k + 1) for k in range(4, n - 1)]:
            a[i][j] = a[j][i] = -1
    elif fam == "F":
        a = [[2, -1, 0, 0], [-1, 2, -2, 0], [0, -1, 2, -1], [0, 0, -1, 2]]
    elif fam == "G":
        a = [[2, -1], [-3, 2]]
    return a


def block_diagonal(*blocks: Sequence[Sequence[int]]) -> List[List[int]]:
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, v in enumerate(row):
                out[off + i][off + j] = v
        off += len(b)
    return out
