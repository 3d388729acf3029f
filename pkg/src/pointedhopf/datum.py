"""Data of finite Cartan type, linking parameters, linking graph, reduction.

Indices are 0-based internally; error details and serialized output use
1-based vertex numbers.
"""
from __future__ import annotations

from collections import deque
from math import gcd
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .abgroup import Character, FgAbelianGroup, GroupElement
from .cartan import CartanMatrix, block_diagonal, cartan_of_type, validate_cartan
from .errors import (CartanConditionViolated, GroupMismatch, InconsistentSymmetry,
                     MultipleLinksFromVertex, NoCharacterExists, NoQJ, NonLinkablePair, OddCycle, ParseError,
                     QiiIsOne, ReducedInvariantViolated)
from .scalars import FieldSpec, Scalar, is_root_of_unity

__all__ = [
    "CartanDatum", "LinkingData", "BipartitePartition", "ReducedDatum", "PiSpec",
    "build_datum", "is_generic", "twist_matrix", "linkable", "validate_linking",
    "linking_graph", "bipartite_partition", "project_datum", "to_reduced", "root_candidates",
    "make_reduced", "ab_exponents", "braiding_exponents", "datum_from_exponents", "uqsl",
    "benkart_gl", "qls_reduced", "dj_datum", "excircle", "b2_circle", "a1_triangle",
    "finite_qls_example", "PRESETS", "preset", "datum_to_json", "reduced_to_json", "load_json",
]


# ---------------------------------------------------------------- roots in K

def _rational_root(x: Fraction, k: int) -> Optional[Fraction]:
    from flint import fmpz

    if x == 0:
        return Fraction(0)
    sign = 1
    if x < 0:
        if k % 2 == 0:
            return None
        sign, x = -1, -x
    p = fmpz(x.numerator).root(k)
    q = fmpz(x.denominator).root(k)
    if p ** k != x.numerator or q ** k != x.denominator:
        return None
    return Fraction(sign * int(p), int(q))


def _polynomial_root_part(a: Scalar, k: int) -> Optional[Scalar]:
    """An element R with a / R^k constant, or None if none is found."""
    mono = a.as_monomial()
    F = a.field
    if mono is not None:
        _, exps = mono
        if any(e % k for e in exps):
            return None
        return F.monomial(F.one(), [e // k for e in exps])
    if F._b.uses_z:
        return None
    out = F.one()
    for part, sign in ((a.num, 1), (a.den, -1)):
        _, factors = part.factor()
        for f, e in factors:
            if e % k:
                return None
            out = out * Scalar(F, f) ** (sign * (e // k))
    return out


def root_candidates(a: Scalar, k: int) -> List[Scalar]:
    """k-th roots of ``a`` in K that can be found by monomial/factor extraction.

    For a constant c the roots found are rho*w with w a root of unity of K and
    rho rational; this covers every value produced by the presets.
    """
    if k == 1:
        return [a]
    F = a.field
    base = _polynomial_root_part(a, k)
    if base is None:
        return []
    c = a / base ** k
    if not c.is_constant():
        return []
    found = []
    for w in F.roots_of_unity():
        c2 = c / w ** k
        if c2.is_rational():
            r = _rational_root(c2.to_fraction(), k)
            if r is not None:
                cand = base * w * F.coerce(r)
                if cand not in found:
                    found.append(cand)
    return found


def _positive_lead(a: Scalar) -> bool:
    return a.num.leading_coefficient() > 0


# ---------------------------------------------------------------- datum

@dataclass(frozen=True)
class CartanDatum:
    field: FieldSpec
    group: FgAbelianGroup
    g: Tuple[GroupElement, ...]
    chi: Tuple[Character, ...]
    cartan: CartanMatrix
    q: Tuple[Tuple[Scalar, ...], ...]
    qJ: Tuple[Optional[Scalar], ...]

    @property
    def theta(self) -> int:
        return len(self.g)

    def component(self, i: int) -> int:
        return self.cartan.data.component_of(i)

    def same_component(self, i: int, j: int) -> bool:
        return self.cartan.same_component(i, j)

    def q_J(self, i: int) -> Scalar:
        out = self.qJ[self.component(i)]
        if out is None:
            raise NoQJ(f"no q_J in K for the component of vertex {i + 1}", detail=[i + 1])
        return out

    def orders(self) -> List[Optional[int]]:
        return [is_root_of_unity(self.q[i][i]) for i in range(self.theta)]


def build_datum(group: FgAbelianGroup, g: Sequence[GroupElement], chi: Sequence[Character],
                cartan, field: Optional[FieldSpec] = None, require_qJ: bool = True) -> CartanDatum:
    """Validate the Cartan condition and choose q_J for each component.

    With ``require_qJ=False`` a component without a root q_J in K is kept with
    q_J = None; only operations that need an odd power of q_J then fail.
    """
    cm = cartan if isinstance(cartan, CartanMatrix) else validate_cartan(cartan)
    theta = cm.rank
    if len(g) != theta or len(chi) != theta:
        raise ValueError(f"need {theta} group elements and characters")
    if field is None:
        field = chi[0].field
    q = tuple(tuple(chi[j](g[i]) for j in range(theta)) for i in range(theta))
    for i in range(theta):
        if q[i][i].is_one():
            raise QiiIsOne(f"q_{i + 1}{i + 1} = 1", detail=[i + 1])
    for i in range(theta):
        for j in range(theta):
            if q[i][j] * q[j][i] != q[i][i] ** cm[i, j]:
                raise CartanConditionViolated(
                    f"q_{i + 1}{j + 1} q_{j + 1}{i + 1} != q_{i + 1}{i + 1}^{cm[i, j]}",
                    detail=[i + 1, j + 1])
    qJ = []
    for k, part in enumerate(cm.data.parts):
        qJ.append(_choose_qJ(q, cm, part, require_qJ))
    return CartanDatum(field, group, tuple(g), tuple(chi), cm, q, tuple(qJ))


def _choose_qJ(q, cm: CartanMatrix, part, required: bool = True) -> Optional[Scalar]:
    i0 = min(part, key=lambda i: (cm.d(i), i))
    cands = root_candidates(q[i0][i0], 2 * cm.d(i0))
    good = [c for c in cands if all(c ** (2 * cm.d(i)) == q[i][i] for i in part)]
    if not good:
        if not required:
            return None
        raise NoQJ(f"no q_J in K for component {[i + 1 for i in part]}",
                   detail=[i + 1 for i in part])
    good.sort(key=lambda c: (not _positive_lead(c), str(c)))
    return good[0]


def is_generic(d: CartanDatum) -> Tuple[bool, Optional[int]]:
    """(True, None) if no q_ii is a root of unity, else (False, first offending i)."""
    for i in range(d.theta):
        if is_root_of_unity(d.q[i][i]) is not None:
            return False, i
    return True, None


def twist_matrix(d: CartanDatum) -> List[List[Scalar]]:
    """q'_ij = q_J^{d_i a_ij} on components, 0 across components."""
    F = d.field
    out = []
    for i in range(d.theta):
        row = []
        for j in range(d.theta):
            if i == j:
                row.append(d.q[i][i])
            elif d.same_component(i, j):
                row.append(d.q_J(i) ** (d.cartan.d(i) * d.cartan[i, j]))
            else:
                row.append(F.zero())
        out.append(row)
    return out


def linkable(d: CartanDatum, i: int, j: int) -> bool:
    if d.same_component(i, j):
        return False
    if (d.g[i] * d.g[j]).is_identity():
        return False
    if not (d.chi[i] * d.chi[j]).is_trivial():
        return False
    assert (d.q[i][i] * d.q[j][j]).is_one(), "linkable vertices must satisfy q_ii q_jj = 1"
    return True


@dataclass(frozen=True)
class LinkingData:
    """Linking parameters, stored for both orders (i, j) and (j, i)."""

    values: Mapping[Tuple[int, int], Scalar]
    warnings: Tuple[str, ...] = ()

    def get(self, i: int, j: int, field: FieldSpec) -> Scalar:
        return self.values.get((i, j), field.zero())

    def linked_pairs(self) -> List[Tuple[int, int]]:
        return sorted({(min(i, j), max(i, j)) for (i, j) in self.values})

    def partners(self, i: int) -> List[int]:
        return sorted({b for (a, b) in self.values if a == i})

    def is_zero(self) -> bool:
        return not self.values


def validate_linking(d: CartanDatum, lam: Mapping[Tuple[int, int], Scalar]) -> LinkingData:
    """Check linkability, complete by lambda_ji = -q_ji lambda_ij, check uniqueness of links."""
    values: Dict[Tuple[int, int], Scalar] = {}
    for (i, j), v in lam.items():
        v = d.field.coerce(v)
        if v.is_zero():
            continue
        if i == j or not linkable(d, i, j):
            raise NonLinkablePair(f"vertices {i + 1} and {j + 1} are not linkable",
                                  detail=[i + 1, j + 1])
        values[(i, j)] = v
    for (i, j), v in list(values.items()):
        implied = -d.q[j][i] * v
        other = values.get((j, i))
        if other is None:
            values[(j, i)] = implied
        elif other != implied:
            raise InconsistentSymmetry(
                f"lambda_{j + 1}{i + 1} must equal -q_{j + 1}{i + 1} lambda_{i + 1}{j + 1}",
                detail=[i + 1, j + 1])
    data = LinkingData(dict(sorted(values.items())))
    orders = d.orders()
    hypothesis = all(o is None or o > 3 for o in orders)
    warnings = []
    for i in range(d.theta):
        if len(data.partners(i)) > 1:
            if hypothesis:
                raise MultipleLinksFromVertex(
                    f"vertex {i + 1} is linked to {[p + 1 for p in data.partners(i)]}",
                    detail=[i + 1])
            warnings.append(f"vertex {i + 1} is linked to several vertices "
                            "(allowed since some ord(q_ii) <= 3)")
    if not hypothesis:
        warnings.append("some ord(q_ii) <= 3: uniqueness of links is not guaranteed")
    return LinkingData(data.values, tuple(warnings))


# ---------------------------------------------------------------- linking graph

@dataclass(frozen=True)
class LinkingGraph:
    components: Tuple[Tuple[int, ...], ...]
    edges: Tuple[Tuple[int, int], ...]  # pairs of component indices, sorted

    def neighbours(self, k: int) -> List[int]:
        out = set()
        for a, b in self.edges:
            if a == k:
                out.add(b)
            if b == k:
                out.add(a)
        return sorted(out)

    def dot(self, coloring: Optional[Mapping[int, str]] = None) -> str:
        lines = ["graph linking {"]
        for k, part in enumerate(self.components):
            label = ",".join(str(i + 1) for i in part)
            attrs = [f'label="{{{label}}}"']
            if coloring is not None and k in coloring:
                side = coloring[k]
                attrs.append(f'side="{side}"')
                attrs.append('style=filled')
                attrs.append(f'fillcolor="{"lightblue" if side == "-" else "salmon"}"')
            lines.append(f"  J{k + 1} [{', '.join(attrs)}];")
        for a, b in self.edges:
            lines.append(f"  J{a + 1} -- J{b + 1};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def linking_graph(d: CartanDatum, lam: LinkingData) -> LinkingGraph:
    edges = set()
    for i, j in lam.linked_pairs():
        a, b = d.component(i), d.component(j)
        edges.add((min(a, b), max(a, b)))
    return LinkingGraph(d.cartan.data.parts, tuple(sorted(edges)))


@dataclass(frozen=True)
class BipartitePartition:
    minus: Tuple[int, ...]
    plus: Tuple[int, ...]
    t: Tuple[int, ...]  # t[0..n-1] in I^-, t[n..2n-1] in I^+
    minus_components: Tuple[int, ...]
    plus_components: Tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.t) // 2

    def describe(self) -> dict:
        return {
            "I_minus": [i + 1 for i in self.minus],
            "I_plus": [i + 1 for i in self.plus],
            "t": [i + 1 for i in self.t],
            "n": self.n,
        }


def _odd_cycle(graph: LinkingGraph, color: Dict[int, int], parent: Dict[int, int],
               a: int, b: int) -> List[int]:
    def path(x):
        out = [x]
        while parent[x] != x:
            x = parent[x]
            out.append(x)
        return out

    pa, pb = path(a), path(b)
    common = next(x for x in pa if x in set(pb))
    cyc = pa[: pa.index(common) + 1] + list(reversed(pb[: pb.index(common)]))
    return cyc


def bipartite_partition(d: CartanDatum, lam: LinkingData,
                        side_override: Optional[Iterable[int]] = None) -> BipartitePartition:
    """Two-colour the linking graph; the smallest component of each piece goes to I^-.

    ``side_override`` lists vertices whose components must lie in I^-.
    """
    graph = linking_graph(d, lam)
    ncomp = len(graph.components)
    color: Dict[int, int] = {}
    parent: Dict[int, int] = {}
    pieces: List[List[int]] = []
    for s in range(ncomp):
        if s in color:
            continue
        color[s], parent[s] = 0, s
        piece = [s]
        queue = deque([s])
        while queue:
            a = queue.popleft()
            for b in graph.neighbours(a):
                if b not in color:
                    color[b], parent[b] = 1 - color[a], a
                    piece.append(b)
                    queue.append(b)
                elif color[b] == color[a]:
                    cyc = _odd_cycle(graph, color, parent, a, b)
                    generic, _ = is_generic(d)
                    comps = [[i + 1 for i in graph.components[k]] for k in cyc]
                    if generic:
                        msg = ("generic datum with an odd linking cycle: the input is invalid "
                               "(linking graphs of generic data are bipartite)")
                    else:
                        msg = ("linking graph has an odd cycle; accepted as a datum but the "
                               "module constructions need a bipartite linking graph")
                    raise OddCycle(msg, detail={"cycle": comps, "generic": generic})
        pieces.append(piece)
    if side_override:
        forced = {d.component(i) for i in side_override}
        for piece in pieces:
            want = [k for k in piece if k in forced]
            if not want:
                continue
            if len({color[k] for k in want}) > 1:
                raise ValueError("side override puts adjacent components on the same side")
            if color[want[0]] == 1:
                for k in piece:
                    color[k] = 1 - color[k]
    minus_c = tuple(k for k in range(ncomp) if color[k] == 0)
    plus_c = tuple(k for k in range(ncomp) if color[k] == 1)
    minus = tuple(sorted(i for k in minus_c for i in graph.components[k]))
    plus = tuple(sorted(i for k in plus_c for i in graph.components[k]))
    pairs = []
    for i, j in lam.linked_pairs():
        a, b = (i, j) if i in minus else (j, i)
        pairs.append((a, b))
    for v in range(d.theta):
        if sum(1 for a, b in pairs if v in (a, b)) > 1:
            raise MultipleLinksFromVertex(f"vertex {v + 1} is linked twice; the pairing t "
                                          "would not be injective", detail=[v + 1])
    t = tuple(a for a, _ in pairs) + tuple(b for _, b in pairs)
    return BipartitePartition(minus, plus, t, minus_c, plus_c)


# ---------------------------------------------------------------- projection D -> D'

@dataclass(frozen=True)
class PiSpec:
    """The projection U(D, lambda) -> U(D', lambda'): x_{t(i)} -> x_i, other x_k -> 0."""

    theta: int
    t: Tuple[int, ...]

    def image(self, k: int) -> Optional[int]:
        return self.t.index(k) if k in self.t else None

    def killed(self) -> List[int]:
        return [k for k in range(self.theta) if k not in self.t]

    def describe(self) -> dict:
        return {"t": [i + 1 for i in self.t], "killed": [k + 1 for k in self.killed()]}


def project_datum(d: CartanDatum, lam: LinkingData,
                  part: Optional[BipartitePartition] = None):
    """(D', lambda', PiSpec) on the linked vertices, ordered by the pairing t."""
    if part is None:
        part = bipartite_partition(d, lam)
    t = part.t
    cart = [[d.cartan[a, b] for b in t] for a in t]
    dp = build_datum(d.group, [d.g[a] for a in t], [d.chi[a] for a in t], cart, d.field,
                     require_qJ=False)
    lamp = {}
    for x, a in enumerate(t):
        for y, b in enumerate(t):
            if x != y and not dp.same_component(x, y) and not d.same_component(a, b):
                v = lam.values.get((a, b))
                if v is not None and (x < y):
                    lamp[(x, y)] = v
    return dp, validate_linking(dp, lamp), PiSpec(d.theta, t)


# ---------------------------------------------------------------- reduced data

@dataclass(frozen=True)
class ReducedDatum:
    """D_red(Gamma, (L_i), (K_i), (chi_i), (a_ij)) together with the l_i."""

    field: FieldSpec
    group: FgAbelianGroup
    L: Tuple[GroupElement, ...]
    K: Tuple[GroupElement, ...]
    chi: Tuple[Character, ...]
    cartan: CartanMatrix
    l: Tuple[Scalar, ...]
    qJ: Tuple[Optional[Scalar], ...]
    name: Optional[str] = None
    params: Tuple[Tuple[str, object], ...] = ()

    @property
    def n(self) -> int:
        return len(self.K)

    def qij(self, i: int, j: int) -> Scalar:
        return self.chi[j](self.K[i])

    def q_J(self, i: int) -> Optional[Scalar]:
        return self.qJ[self.cartan.data.component_of(i)]

    def is_generic(self) -> bool:
        return all(is_root_of_unity(self.qij(i, i)) is None for i in range(self.n))

    def doubled(self) -> Tuple[CartanDatum, LinkingData]:
        """The datum on 2n vertices: g_i = L_i, g_{n+i} = K_i, chi_i^{-1}, chi_i; lambda_{i,n+i} = l_i."""
        n = self.n
        g = list(self.L) + list(self.K)
        chi = [c.inverse() for c in self.chi] + list(self.chi)
        cart = block_diagonal(self.cartan.as_lists(), self.cartan.as_lists())
        d = build_datum(self.group, g, chi, cart, self.field, require_qJ=False)
        lam = validate_linking(d, {(i, n + i): self.l[i] for i in range(n)})
        return d, lam


def make_reduced(group: FgAbelianGroup, L, K, chi, cartan, l, field: Optional[FieldSpec] = None,
                 name: Optional[str] = None, params=()) -> ReducedDatum:
    cm = cartan if isinstance(cartan, CartanMatrix) else validate_cartan(cartan)
    n = cm.rank
    if not (len(L) == len(K) == len(chi) == len(l) == n):
        raise ReducedInvariantViolated("lengths of L, K, chi, l must equal the rank")
    if field is None:
        field = chi[0].field
    l = tuple(field.coerce(x) for x in l)
    for i in range(n):
        for j in range(n):
            if chi[i](K[j]) * chi[j](K[i]) != chi[i](K[i]) ** cm[i, j]:
                raise ReducedInvariantViolated(
                    f"chi_{i + 1}(K_{j + 1}) chi_{j + 1}(K_{i + 1}) != chi_{i + 1}(K_{i + 1})^a",
                    detail=[i + 1, j + 1])
            if chi[i](L[j]) != chi[j](K[i]):
                raise ReducedInvariantViolated(
                    f"chi_{i + 1}(L_{j + 1}) != chi_{j + 1}(K_{i + 1})", detail=[i + 1, j + 1])
        if (K[i] * L[i]).is_identity():
            raise ReducedInvariantViolated(f"K_{i + 1} L_{i + 1} = 1", detail=[i + 1])
        if chi[i](K[i]).is_one():
            raise ReducedInvariantViolated(f"chi_{i + 1}(K_{i + 1}) = 1", detail=[i + 1])
        if l[i].is_zero():
            raise ReducedInvariantViolated(f"l_{i + 1} = 0", detail=[i + 1])
    q = [[chi[j](K[i]) for j in range(n)] for i in range(n)]
    qJ = tuple(_choose_qJ(q, cm, part, required=False) for part in cm.data.parts)
    return ReducedDatum(field, group, tuple(L), tuple(K), tuple(chi), cm, l, qJ, name,
                        tuple(params))


def to_reduced(dp: CartanDatum, lamp: LinkingData) -> ReducedDatum:
    """Read off D_red from D' in paired form: L_i = g'_i, K_i = g'_{n+i}, chi_i = chi'_{n+i}."""
    theta = dp.theta
    if theta % 2:
        raise ReducedInvariantViolated("paired datum must have an even number of vertices")
    n = theta // 2
    for i in range(n):
        for j in range(n):
            if dp.cartan[i, j] != dp.cartan[n + i, n + j] or dp.cartan[i, n + j] != 0:
                raise ReducedInvariantViolated("a'_ij = a'_{n+i,n+j} and a'_{i,n+j} = 0 required",
                                               detail=[i + 1, j + 1])
    l = []
    for i in range(n):
        v = lamp.values.get((i, n + i))
        if v is None:
            raise ReducedInvariantViolated(f"vertices {i + 1} and {n + i + 1} are not linked",
                                           detail=[i + 1])
        l.append(v)
    cart = [[dp.cartan[i, j] for j in range(n)] for i in range(n)]
    return make_reduced(dp.group, dp.g[:n], dp.g[n:], dp.chi[n:], cart, l, dp.field)


# ---------------------------------------------------------------- path exponents

def ab_exponents(cm: CartanMatrix, i: int, j: int) -> Tuple[int, int]:
    """(a, b) with q_ii^a = q_jj^b, read off a shortest Dynkin path from i to j."""
    if not cm.same_component(i, j):
        raise ValueError("vertices lie in different components")
    prev = {i: i}
    queue = deque([i])
    while queue:
        x = queue.popleft()
        for y in range(cm.rank):
            if y != x and cm[x, y] and y not in prev:
                prev[y] = x
                queue.append(y)
    path = [j]
    while path[-1] != i:
        path.append(prev[path[-1]])
    path.reverse()
    a = b = 1
    for x, y in zip(path, path[1:]):
        # q_xx^{a_xy} = q_xy q_yx = q_yy^{a_yx}
        a *= -cm[x, y]
        b *= -cm[y, x]
    return a, b


# ---------------------------------------------------------------- braiding solver

def braiding_exponents(cartan: Sequence[Sequence[int]], diag: Sequence[int],
                       links: Sequence[Tuple[int, int]], modulus: Optional[int] = None
                       ) -> List[List[int]]:
    """Integer matrix B with q_ij = base^{B_ij} satisfying the Cartan condition and
    chi_i chi_j = eps on each linked pair, for g_i the canonical basis.

    ``diag`` fixes B_ii.  Over Q (``modulus=None``) free parameters are set to 0
    and the whole matrix, diagonal included, is scaled to clear denominators.
    For a prime ``modulus`` the system is solved over Z/p.
    """
    from sympy import GF, Matrix, linsolve, symbols
    from sympy.polys.matrices import DomainMatrix

    cm = validate_cartan(cartan)
    theta = cm.rank
    unknowns: Dict[Tuple[int, int], int] = {}
    for i in range(theta):
        for j in range(theta):
            if i != j:
                unknowns[(i, j)] = len(unknowns)
    rows: List[List[int]] = []
    rhs: List[int] = []

    def equation(terms: Sequence[Tuple[int, int]], const: int):
        row = [0] * len(unknowns)
        c = const
        for i, j in terms:
            if i == j:
                c -= diag[i]
            else:
                row[unknowns[(i, j)]] += 1
        rows.append(row)
        rhs.append(c)

    for i in range(theta):
        for j in range(i + 1, theta):
            a = cm[i, j] if cm.same_component(i, j) else 0
            equation([(i, j), (j, i)], a * diag[i])
    for i, j in links:
        for k in range(theta):
            equation([(k, i), (k, j)], 0)
    nvar = len(unknowns)
    if modulus is None:
        xs = symbols(f"b0:{nvar}")
        sol = linsolve((Matrix(rows), Matrix(rhs)), *xs)
        if not sol:
            raise ValueError("no braiding satisfies the constraints")
        (vals,) = list(sol)
        vals = [Fraction(str(v.subs({x: 0 for x in xs}))) for v in vals]
        scale = 1
        for v in vals:
            scale = scale * v.denominator // gcd(scale, v.denominator)
        ints = [int(v * scale) for v in vals]
        diag = [d * scale for d in diag]
    else:
        dom = GF(modulus)
        aug = DomainMatrix([[dom(x) for x in r] + [dom(c)] for r, c in zip(rows, rhs)],
                           (len(rows), nvar + 1), dom)
        rref, pivots = aug.rref()
        if nvar in pivots:
            raise ValueError("no braiding satisfies the constraints")
        dense = rref.to_Matrix()
        ints = [0] * nvar
        for r, p in enumerate(pivots):
            ints[p] = int(dense[r, nvar]) % modulus
        diag = [d % modulus for d in diag]
    B = [[0] * theta for _ in range(theta)]
    for i in range(theta):
        B[i][i] = diag[i]
    for (i, j), k in unknowns.items():
        B[i][j] = ints[k]
    return B


def datum_from_exponents(B: Sequence[Sequence[int]], cartan, field: FieldSpec,
                         base: Scalar, group: Optional[FgAbelianGroup] = None,
                         require_qJ: bool = True) -> CartanDatum:
    """g_i = e_i and chi_j(e_i) = base^{B_ij}."""
    theta = len(B)
    group = group or FgAbelianGroup(theta)
    g = [group.gen(i) for i in range(theta)]
    chi = [Character(group, [base ** B[i][j] for i in range(theta)]) for j in range(theta)]
    return build_datum(group, g, chi, cartan, field, require_qJ=require_qJ)


# ---------------------------------------------------------------- presets

def uqsl(cartan_type: str = "A1", q: str = "t1") -> ReducedDatum:
    """U_q(g): Gamma free on K_i, L_i = K_i, chi_j(K_i) = q^{d_i a_ij}, l_i = q^{2d_i}/(q^{d_i} - q^{-d_i})."""
    field = FieldSpec(1, (q,))
    qv = field.var(q)
    cm = validate_cartan(cartan_of_type(cartan_type))
    n = cm.rank
    group = FgAbelianGroup(n)
    K = [group.gen(i) for i in range(n)]
    chi = [Character(group, [qv ** (cm.d(i) * cm[i, j]) for i in range(n)]) for j in range(n)]
    l = [qv ** (2 * cm.d(i)) / (qv ** cm.d(i) - qv ** (-cm.d(i))) for i in range(n)]
    return make_reduced(group, K, K, chi, cm, l, field, name="uqsl",
                        params=(("type", cartan_type), ("q", q)))


def benkart_gl(n: int = 1, r: str = "t1", s: str = "t2") -> ReducedDatum:
    """U_{r,s}(gl_{n+1}): Gamma free on a_1..a_{n+1}, b_1..b_{n+1}; K_i = a_i b_{i+1}, L_i = (a_{i+1} b_i)^{-1}."""
    field = FieldSpec(1, (r, s))
    rv, sv = field.var(r), field.var(s)
    group = FgAbelianGroup(2 * (n + 1))
    a = [group.gen(i) for i in range(n + 1)]
    b = [group.gen(n + 1 + i) for i in range(n + 1)]

    def pairing(i: int, j: int) -> int:
        # (eps_i, alpha_j) with alpha_j = eps_j - eps_{j+1}
        return (1 if i == j else 0) - (1 if i == j + 1 else 0)

    chi = [Character(group, [rv ** pairing(i, j) for i in range(n + 1)]
                     + [sv ** pairing(i, j) for i in range(n + 1)]) for j in range(n)]
    K = [a[i] * b[i + 1] for i in range(n)]
    L = [(a[i + 1] * b[i]).inverse() for i in range(n)]
    l = [rv / sv / (rv - sv)] * n
    return make_reduced(group, L, K, chi, cartan_of_type(f"A{n}"), l, field, name="benkart_gl",
                        params=(("n", n), ("r", r), ("s", s)))


def qls_reduced(B: Sequence[Sequence[int]], names: Sequence[str] = ("t1",),
                l: Optional[Sequence] = None) -> ReducedDatum:
    """Reduced quantum linear space: Gamma free on K_1..K_n, L_1..L_n.

    ``B[i][j]`` is the exponent vector (or integer, for one indeterminate) of
    chi_j(K_i); off-diagonal entries must be antisymmetric.
    """
    field = FieldSpec(1, tuple(names))
    n = len(B)

    def value(e) -> Scalar:
        exps = [e] if isinstance(e, int) else list(e)
        return field.monomial(field.one(), exps)

    group = FgAbelianGroup(2 * n)
    K = [group.gen(i) for i in range(n)]
    L = [group.gen(n + i) for i in range(n)]
    chi = [Character(group, [value(B[i][j]) for i in range(n)] + [value(B[j][i]) for i in range(n)])
           for j in range(n)]
    cart = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    return make_reduced(group, L, K, chi, cart, l or [1] * n, field, name="qls")


def dj_datum(cartan_type: str = "A2", q: str = "t1") -> CartanDatum:
    """Drinfeld-Jimbo braiding q_ij = q^{d_i a_ij} on Gamma = Z^theta."""
    field = FieldSpec(1, (q,))
    cm = validate_cartan(cartan_of_type(cartan_type))
    B = [[cm.d(i) * cm[i, j] for j in range(cm.rank)] for i in range(cm.rank)]
    return datum_from_exponents(B, cm, field, field.var(q))


def excircle(ranks: Sequence[int] = (3, 3), circle: bool = True, q: str = "t1"):
    """Components of type A_{n_l} linked end-to-beginning, closing the circle if asked.

    Returns (datum, linking).  ``q_ii = q^{+-2}`` alternating along the chain.
    """
    if circle and len(ranks) % 2:
        raise ValueError("a circle of A-components needs an even number of components")
    blocks = [cartan_of_type(f"A{r}") for r in ranks]
    cart = block_diagonal(*blocks)
    starts = [sum(ranks[:k]) for k in range(len(ranks))]
    diag = []
    for k, r in enumerate(ranks):
        diag += [2 if k % 2 == 0 else -2] * r
    links = []
    for k in range(len(ranks) - (0 if circle else 1)):
        nxt = (k + 1) % len(ranks)
        links.append((starts[k] + ranks[k] - 1, starts[nxt]))
    B = braiding_exponents(cart, diag, links)
    field = FieldSpec(1, (q,))
    d = datum_from_exponents(B, cart, field, field.var(q))
    lam = validate_linking(d, {(min(i, j), max(i, j)): 1 for i, j in links})
    return d, lam


def b2_circle(copies: int = 1, N: int = 3, free: bool = False):
    """An odd circle of B_2 copies over (Z/N)^{2n} (or Z^{2n}), n = copies, g_i canonical.

    Copy l has long vertex 2l and short vertex 2l+1; the short vertex of copy l
    is linked to the long vertex of copy l+1, so q_short = zeta^b with
    b_l = -2 b_{l+1}, which closes up exactly when N | 1 + 2^n.  For one copy
    the link stays inside a component (NonLinkablePair); for n >= 3 the
    remaining Cartan conditions across neighbouring copies have no solution
    (NoCharacterExists).  N must be prime.
    """
    if copies < 1 or copies % 2 == 0:
        raise ValueError("need an odd number of copies")
    if (1 + 2 ** copies) % N:
        raise ValueError(f"N = {N} does not divide 1 + 2^{copies}")
    cart = block_diagonal(*[cartan_of_type("B2")] * copies)
    pairs = [(2 * l + 1, 2 * ((l + 1) % copies)) for l in range(copies)]
    field = FieldSpec(N, ())
    group = FgAbelianGroup(2 * copies) if free else FgAbelianGroup(0, (N,) * (2 * copies))
    bs = [1]
    for _ in range(copies - 1):
        bs.append(bs[-1] * pow(-2, -1, N) % N)
    diag = []
    for b in bs:
        diag += [2 * b % N, b]
    if copies == 1:
        # the only candidate braiding; the link then joins two vertices of one component
        B = [[diag[0], 0], [(-2 * diag[1]) % N, diag[1]]]
    else:
        try:
            B = braiding_exponents(cart, diag, pairs, modulus=N)
        except ValueError:
            raise NoCharacterExists(
                f"no characters of (Z/{N})^{2 * copies} realize an odd circle of {copies} "
                "B2 copies with g_i canonical", detail={"copies": copies, "N": N}) from None
    d = datum_from_exponents(B, cart, field, field.zeta(), group)
    return d, validate_linking(d, {(min(i, j), max(i, j)): 1 for i, j in pairs})


def a1_triangle():
    """Three A1 vertices over (Z/2)^3 with chi_i = (-1, -1, -1), pairwise linked, K = Q(i).

    All q_ij = -1, so the linking graph is a 3-cycle: a non-generic datum whose
    linking graph is not bipartite.
    """
    field = FieldSpec(4, ())  # q_J = i must lie in K
    group = FgAbelianGroup(0, (2, 2, 2))
    B = [[2] * 3 for _ in range(3)]
    d = datum_from_exponents(B, [[2, 0, 0], [0, 2, 0], [0, 0, 2]], field, field.zeta(), group)
    return d, validate_linking(d, {(0, 1): 1, (1, 2): 1, (0, 2): 1})


def finite_qls_example(N: int = 5, extra_unlinked: bool = False):
    """Gamma = (Z/N)^2, g_1 = e_1, g_2 = e_2, chi_1 = (zeta, zeta), chi_2 = chi_1^{-1}, lambda_12 = 1.

    The optional third vertex (g_3 = e_1, chi_3 = (zeta^-1, zeta)) is not linkable.
    """
    field = FieldSpec(N, ())
    zeta = field.zeta()
    group = FgAbelianGroup(0, (N, N))
    e1, e2 = group.gens()
    chi1 = Character(group, [zeta, zeta])
    g = [e1, e2]
    chi = [chi1, chi1.inverse()]
    if extra_unlinked:
        g.append(e1)
        chi.append(Character(group, [zeta.inverse(), zeta]))
    cart = [[2 if i == j else 0 for j in range(len(g))] for i in range(len(g))]
    d = build_datum(group, g, chi, cart, field)
    return d, validate_linking(d, {(0, 1): 1})


PRESETS = {
    "uqsl": (uqsl, {"cartan_type": "A1", "q": "t1"}, "reduced",
             "U_q(g) of a Cartan type; l_i = q^{2d_i}/(q^{d_i}-q^{-d_i})"),
    "benkart_gl": (benkart_gl, {"n": 1, "r": "t1", "s": "t2"}, "reduced",
                   "two-parameter U_{r,s}(gl_{n+1})"),
    "dj": (dj_datum, {"cartan_type": "A2", "q": "t1"}, "datum",
           "Drinfeld-Jimbo braiding on Z^theta, no linking"),
    "excircle": (excircle, {"ranks": [3, 3], "circle": True, "q": "t1"}, "datum",
                 "A-components linked end-to-beginning in a circle"),
    "b2_circle": (b2_circle, {"copies": 1, "N": 3, "free": False}, "datum",
                  "odd circle of B2 copies with g_i canonical"),
    "a1_triangle": (a1_triangle, {}, "datum",
                    "three pairwise linked A1 vertices with q = -1 (odd linking cycle)"),
    "finite_qls": (finite_qls_example, {"N": 5, "extra_unlinked": False}, "datum",
                   "linked A1 pair over (Z/N)^2"),
}


def preset(name: str, params: Optional[Mapping[str, object]] = None):
    """Build a named preset; returns a ReducedDatum or a (CartanDatum, LinkingData) pair."""
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; known: {sorted(PRESETS)}")
    fn, defaults, _, _ = PRESETS[name]
    kwargs = dict(defaults)
    for k, v in (params or {}).items():
        if k not in defaults:
            raise KeyError(f"preset {name!r} has no parameter {k!r}")
        kwargs[k] = v
    if "ranks" in kwargs:
        kwargs["ranks"] = tuple(kwargs["ranks"])
    return fn(**kwargs)


# ---------------------------------------------------------------- JSON

def _group_from(obj, path: str) -> FgAbelianGroup:
    try:
        return FgAbelianGroup(int(obj.get("free_rank", 0)), tuple(obj.get("torsion", ())))
    except (TypeError, ValueError, AttributeError) as exc:
        raise ParseError(f"{path}: {exc}", detail={"path": path}) from None


def _scalar_at(field: FieldSpec, value, path: str) -> Scalar:
    try:
        if isinstance(value, bool) or not isinstance(value, (int, str)):
            raise ParseError("expected a scalar literal")
        return field.coerce(value)
    except ParseError as exc:
        detail = dict(exc.detail or {})
        detail["path"] = path
        raise ParseError(f"{path}: {exc}", detail=detail) from None


def _element_at(group: FgAbelianGroup, value, path: str) -> GroupElement:
    try:
        return group.element(value)
    except (TypeError, ValueError, GroupMismatch) as exc:
        raise ParseError(f"{path}: {exc}", detail={"path": path}) from None


def field_from_json(obj) -> FieldSpec:
    try:
        return FieldSpec(int(obj.get("cyclotomic_order", 1)), tuple(obj.get("indeterminates", ())))
    except (TypeError, ValueError, AttributeError) as exc:
        raise ParseError(f"field: {exc}", detail={"path": "field"}) from None


def _characters(field, group, rows, path):
    out = []
    for j, row in enumerate(rows):
        vals = [_scalar_at(field, v, f"{path}[{j}][{k}]") for k, v in enumerate(row)]
        try:
            out.append(Character(group, vals))
        except (ValueError, GroupMismatch) as exc:
            raise ParseError(f"{path}[{j}]: {exc}", detail={"path": f"{path}[{j}]"}) from None
    return out


def datum_to_json(d: CartanDatum, lam: LinkingData) -> dict:
    return {
        "kind": "datum",
        "field": d.field.describe(),
        "group": d.group.describe(),
        "g": [list(x.exponents) for x in d.g],
        "chi": [c.literals() for c in d.chi],
        "cartan": d.cartan.as_lists(),
        "linking": [{"i": i + 1, "j": j + 1, "lambda": str(lam.values[(i, j)])}
                    for i, j in lam.linked_pairs()],
    }


def reduced_to_json(r: ReducedDatum) -> dict:
    out = {
        "kind": "reduced",
        "field": r.field.describe(),
        "group": r.group.describe(),
        "L": [list(x.exponents) for x in r.L],
        "K": [list(x.exponents) for x in r.K],
        "chi": [c.literals() for c in r.chi],
        "cartan": r.cartan.as_lists(),
        "l": [str(x) for x in r.l],
    }
    if r.name:
        out["preset"] = {"name": r.name, "params": dict(r.params)}
    return out


def load_json(obj: Mapping):
    """Parse a datum or reduced-datum document; returns (CartanDatum, LinkingData) or ReducedDatum."""
    if not isinstance(obj, Mapping):
        raise ParseError("document must be a JSON object", detail={"path": ""})
    if "preset" in obj and "group" not in obj:
        p = obj["preset"]
        return preset(p["name"], p.get("params"))
    for key in ("field", "group", "chi", "cartan"):
        if key not in obj:
            raise ParseError(f"missing key {key!r}", detail={"path": key})
    field = field_from_json(obj["field"])
    group = _group_from(obj["group"], "group")
    chi = _characters(field, group, obj["chi"], "chi")
    kind = obj.get("kind", "datum")
    if kind == "reduced":
        L = [_element_at(group, v, f"L[{k}]") for k, v in enumerate(obj["L"])]
        K = [_element_at(group, v, f"K[{k}]") for k, v in enumerate(obj["K"])]
        l = [_scalar_at(field, v, f"l[{k}]") for k, v in enumerate(obj["l"])]
        p = obj.get("preset") or {}
        return make_reduced(group, L, K, chi, obj["cartan"], l, field, p.get("name"),
                            tuple(sorted((p.get("params") or {}).items())))
    g = [_element_at(group, v, f"g[{k}]") for k, v in enumerate(obj["g"])]
    d = build_datum(group, g, chi, obj["cartan"], field)
    lam = {}
    for k, entry in enumerate(obj.get("linking", [])):
        path = f"linking[{k}]"
        try:
            i, j = int(entry["i"]) - 1, int(entry["j"]) - 1
        except (KeyError, TypeError, ValueError):
            raise ParseError(f"{path}: need integer i and j", detail={"path": path}) from None
        if not (0 <= i < d.theta and 0 <= j < d.theta):
            raise ParseError(f"{path}: vertex out of range", detail={"path": path})
        lam[(i, j)] = _scalar_at(field, entry.get("lambda", 1), f"{path}.lambda")
    return d, validate_linking(d, lam)
