"""Simple modules L(chi) of U(D_red, l): dominance, construction, verification.

Everything is built over a reduced datum.  A module is the span of
u_{i_1}...u_{i_t} m inside B(W), where W is the U-side braided space with
q^U_ij = chi_i(K_j)^{-1}; the U-letters are the x_i (degree L_i) and the
A-letters the y_i = E_i (degree K_i).  Modules over a general U(D, lambda)
come from the reduced datum of the projection D -> D' by pullback.

Matrices act on column vectors; basis vector 0 is the highest-weight vector.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_decomp

from .abgroup import Character, FgAbelianGroup, GroupElement
from .braided import BraidedVectorSpace, NicholsEngine, TensorPoly, serre_coefficients
from .datum import (CartanDatum, LinkingData, PiSpec, ReducedDatum, bipartite_partition,
                    datum_to_json, load_json, project_datum, reduced_to_json, to_reduced)
from .errors import (BudgetExceeded, DegreeBudgetExceeded, DimensionTooLarge, InconsistentEAction,
                     NoCharacterExists, NotDominant, NotQLS, OrderHypothesisViolated, ParseError,
                     UnboundedSearch)
from .linalg import EchelonBasis, SparseMatrix, nullspace, vec_axpy
from .scalars import FieldSpec, Scalar, is_root_of_unity

__all__ = [
    "DominanceCertificate", "ModuleRep", "solve_power", "is_dominant", "is_dominant_pair",
    "ladder_coefficients", "enumerate_dominant", "chi_for_exponents", "is_one_dimensional_twist",
    "build_qls_module", "build_general_module", "build_module", "verify_module", "check_simplicity",
    "pullback_module", "module_for_datum", "finite_qls", "highest_weight_space", "weight_multiset",
    "tensor_factorization_check", "twist_consistency", "direct_sum", "all_characters",
    "module_to_json", "module_from_json",
]


# ---------------------------------------------------------------- dominance

@dataclass(frozen=True)
class DominanceCertificate:
    """Exponents m_i with chi(K_i L_i) = q_ii^{m_i}; ``complete`` marks an exact (not bounded) decision."""

    m: Tuple[int, ...]
    complete: bool = True

    def describe(self) -> dict:
        return {"m": list(self.m), "complete": self.complete}


def solve_power(base: Scalar, target: Scalar, bound: int = 20) -> Tuple[Optional[int], bool]:
    """Smallest m >= 0 with base^m = target, and whether a None answer is definite.

    Exact for Laurent-monomial bases with nonzero exponent and for roots of
    unity; otherwise a search over m <= bound.
    """
    mb = base.as_monomial()
    if mb is not None and any(mb[1]):
        mt = target.as_monomial()
        if mt is None:
            return None, True
        ratios = {te / be if be else None for be, te in zip(mb[1], mt[1]) if be or te}
        if None in ratios or len(ratios) != 1:
            return None, True
        m = ratios.pop()
        if m < 0 or m != int(m):
            return None, True
        m = int(m)
        return (m, True) if base ** m == target else (None, True)
    order = is_root_of_unity(base)
    limit = order if order is not None else bound + 1
    power = base.field.one()
    for m in range(limit):
        if power == target:
            return m, True
        power = power * base
    return None, order is not None


def _dominance(bases: Sequence[Scalar], targets: Sequence[Scalar], bound: int
               ) -> Optional[DominanceCertificate]:
    ms, complete = [], True
    for i, (b, t) in enumerate(zip(bases, targets)):
        m, definite = solve_power(b, t, bound)
        if m is None:
            if definite:
                return None
            raise UnboundedSearch(f"no exponent m <= {bound} for index {i + 1}; undecided",
                                  detail={"index": i + 1, "bound": bound})
        ms.append(m)
        complete = complete and definite
    return DominanceCertificate(tuple(ms), complete)


def is_dominant(r: ReducedDatum, chi: Character, bound: int = 20) -> Optional[DominanceCertificate]:
    """chi(K_i L_i) = q_ii^{m_i} for all i; None when definitely not dominant."""
    return _dominance([r.qij(i, i) for i in range(r.n)],
                      [chi(r.K[i] * r.L[i]) for i in range(r.n)], bound)


def is_dominant_pair(qU_diag: Sequence[Scalar], rho_chi: Sequence[Scalar], bound: int = 20
                     ) -> Optional[DominanceCertificate]:
    """q^U_ii^{m_i} rho(z_i) chi(g_i) = 1, given the values rho(z_i) chi(g_i)."""
    return _dominance(list(qU_diag), [c.inverse() for c in rho_chi], bound)


def ladder_coefficients(qU_ii: Scalar, c: Scalar, tmax: int) -> List[Scalar]:
    """prod_{l < t} (1 - qU_ii^l c) for t = 0..tmax: the scalar in u_i^t m = (.) Phi(u_i^t) chi."""
    out = [qU_ii.field.one()]
    for l in range(tmax):
        out.append(out[-1] * (1 - qU_ii ** l * c))
    return out


def is_one_dimensional_twist(r: ReducedDatum, psi: Character) -> bool:
    return all(psi(r.K[i] * r.L[i]).is_one() for i in range(r.n))


def all_characters(group: FgAbelianGroup, field: FieldSpec) -> List[Character]:
    """The full character group of a finite group with values in the roots of unity of K."""
    if not group.is_finite():
        raise ValueError("character enumeration needs a finite group")
    roots = field.roots_of_unity()
    options = []
    for k in range(group.ngens):
        d = group.generator_order(k)
        opts = [z for z in roots if (z ** d).is_one()]
        options.append(opts)
    return [Character(group, vals) for vals in itertools.product(*options)]


def _integer_solve(A: List[List[int]], b: List[int]) -> Optional[List[int]]:
    """An integer solution of A x = b, or None."""
    rows, cols = len(A), len(A[0]) if A else 0
    if cols == 0:
        return [] if all(v == 0 for v in b) else None
    M = Matrix(A)
    S, U, V = smith_normal_decomp(M)
    c = U * Matrix(b)
    y = [0] * cols
    for k in range(rows):
        diag = S[k, k] if k < cols else 0
        if diag == 0:
            if c[k] != 0:
                return None
        else:
            if c[k] % diag:
                return None
            y[k] = int(c[k] // diag)
    x = V * Matrix(y)
    return [int(v) for v in x]


def chi_for_exponents(r: ReducedDatum, m: Sequence[int]) -> Character:
    """A concrete chi_m with chi_m(K_i L_i) = q_ii^{m_i}."""
    F = r.field
    if r.name == "uqsl":
        # chi_m(K_i) = q^{d_i m_i} on the basis K_i
        q = F.var(dict(r.params)["q"])
        return Character(r.group, [q ** (r.cartan.d(i) * m[i]) for i in range(r.n)])
    if r.name == "benkart_gl":
        # lambda-hat with lambda_i = sum_{k >= i} m_k
        p = dict(r.params)
        rv, sv = F.var(p["r"]), F.var(p["s"])
        n = r.n
        lam = [sum(m[k] for k in range(i, n)) for i in range(n + 1)]
        return Character(r.group, [rv ** x for x in lam] + [sv ** x for x in lam])
    targets = [r.qij(i, i) ** m[i] for i in range(r.n)]
    if r.group.torsion_orders:
        if r.group.is_finite():
            for cand in all_characters(r.group, F):
                if all(cand(r.K[i] * r.L[i]) == targets[i] for i in range(r.n)):
                    return cand
        raise NoCharacterExists(f"no character realizes m = {list(m)}", detail={"m": list(m)})
    mons = [t.as_monomial() for t in targets]
    if any(x is None or not x[0].is_one() for x in mons):
        raise NoCharacterExists("q_ii^{m_i} is not a monic monomial", detail={"m": list(m)})
    nvars = len(F.indeterminate_names)
    A = [list((r.K[i] * r.L[i]).exponents) for i in range(r.n)]
    values = [[0] * nvars for _ in range(r.group.ngens)]
    for v in range(nvars):
        sol = _integer_solve(A, [mons[i][1][v] for i in range(r.n)])
        if sol is None:
            raise NoCharacterExists(f"no character realizes m = {list(m)}", detail={"m": list(m)})
        for k, e in enumerate(sol):
            values[k][v] = e
    return Character(r.group, [F.monomial(F.one(), e) for e in values])


def enumerate_dominant(r: ReducedDatum, bound: int) -> Iterator[Tuple[Tuple[int, ...], Character]]:
    for m in itertools.product(range(bound + 1), repeat=r.n):
        yield m, chi_for_exponents(r, m)


# ---------------------------------------------------------------- module representation

@dataclass
class ModuleRep:
    """Matrices of the generators x_1..x_theta of U(D, lambda) on a weight basis."""

    datum: CartanDatum
    lam: LinkingData
    chi: Character
    labels: List[str]
    weights: List[Character]
    x: List[SparseMatrix]
    a_indices: Tuple[int, ...]
    hw: int = 0
    reduced: Optional[ReducedDatum] = None
    root_orders: Optional[Tuple[Optional[int], ...]] = None
    provenance: Dict = dc_field(default_factory=dict)

    @property
    def field(self) -> FieldSpec:
        return self.datum.field

    @property
    def dim(self) -> int:
        return len(self.labels)

    def group_matrix(self, g: GroupElement) -> SparseMatrix:
        return SparseMatrix.diagonal([w(g) for w in self.weights], self.field)

    def group_matrices(self) -> List[SparseMatrix]:
        return [self.group_matrix(g) for g in self.datum.group.gens()]

    def E(self, i: int) -> SparseMatrix:
        return self.x[self.reduced.n + i]

    def F(self, i: int) -> SparseMatrix:
        return self.x[i] @ self.group_matrix(self.reduced.L[i].inverse())


@dataclass
class _Reduced:
    """Scalars of a reduced datum and a highest weight chi, in U-side notation."""

    r: ReducedDatum
    chi: Character

    def __post_init__(self):
        r, n = self.r, self.r.n
        self.F = r.field
        self.qU = [[r.qij(j, i).inverse() for j in range(n)] for i in range(n)]
        self.c = [self.chi(r.K[i] * r.L[i]) for i in range(n)]
        self.lU = [-r.qij(i, i).inverse() * r.l[i] for i in range(n)]

    def weight(self, md: Sequence[int]) -> Character:
        w = self.chi
        for i, k in enumerate(md):
            if k:
                w = w * self.r.chi[i] ** (-k)
        return w

    def lam_weight(self, md: Sequence[int], i: int) -> Scalar:
        """Lambda-weight at z_i, with rho(z_i) = chi(L_i)."""
        out = self.chi(self.r.L[i])
        for k, e in enumerate(md):
            if e:
                out = out * self.qU[i][k] ** e
        return out


def _assemble(ctx: _Reduced, labels, mds, Fcols, Ecols, provenance) -> ModuleRep:
    r, n = ctx.r, ctx.r.n
    d, lam = r.doubled()
    dim = len(labels)
    x = [SparseMatrix(dim, dim, ctx.F, Fcols[i]) for i in range(n)]
    x += [SparseMatrix(dim, dim, ctx.F, Ecols[j]) for j in range(n)]
    weights = [ctx.weight(md) for md in mds]
    return ModuleRep(d, lam, ctx.chi, labels, weights, x, tuple(range(n, 2 * n)), 0, r, None,
                     provenance)


def _word_label(word: Sequence[int]) -> str:
    return "*".join([f"u{i + 1}" for i in word] + ["m"])


def _qls_module(ctx: _Reduced, caps: Sequence[int]) -> ModuleRep:
    """Basis u_1^{t_1}...u_n^{t_n} m with t_i < caps[i]; actions from the explicit formulas."""
    n, F = ctx.r.n, ctx.F
    qU, c, lU = ctx.qU, ctx.c, ctx.lU
    basis = sorted(itertools.product(*[range(k) for k in caps]),
                   key=lambda t: (sum(t), tuple(-x for x in t)))
    index = {t: k for k, t in enumerate(basis)}
    Fcols = [dict() for _ in range(n)]
    Ecols = [dict() for _ in range(n)]
    for k, t in enumerate(basis):
        word = [i for i in range(n) for _ in range(t[i])]
        for j in range(n):
            # u_j . u^t m: move u_j past the u_i, i < j
            up = list(t)
            up[j] += 1
            if up[j] < caps[j]:
                coeff = F.one()
                for i in range(j):
                    coeff = coeff * qU[j][i] ** t[i]
                Fcols[j][k] = {index[tuple(up)]: coeff}
            # a_j . u_{i_1}...u_{i_T} m = sum_l alpha_l (word without position l) m
            total = F.zero()
            for l, il in enumerate(word):
                if il != j:
                    continue
                alpha = lU[j]
                for rr in range(l):
                    alpha = alpha * qU[word[rr]][j]
                tail = c[j]
                for s in range(l + 1, len(word)):
                    tail = tail * qU[word[s]][j] * qU[j][word[s]]
                total = total + alpha * (1 - tail)
            if not total.is_zero():
                down = list(t)
                down[j] -= 1
                Ecols[j][k] = {index[tuple(down)]: total}
    labels = [_word_label([i for i in range(n) for _ in range(t[i])]) for t in basis]
    return _assemble(ctx, labels, basis, Fcols, Ecols, {"method": "qls", "exponents":
                                                        [list(t) for t in basis]})


def _require_qls(r: ReducedDatum):
    if not r.cartan.is_diagonal():
        raise NotQLS("all Cartan components must be of type A1")


def _certificate(r, chi, cert, bound):
    if cert is None:
        cert = is_dominant(r, chi, bound)
    if cert is None:
        raise NotDominant("character is not dominant", detail={"chi": chi.literals()})
    return cert


def build_qls_module(r: ReducedDatum, chi: Character, cert: Optional[DominanceCertificate] = None,
                     bound: int = 20) -> ModuleRep:
    """L(chi) for a generic quantum linear space: dimension prod (m_i + 1)."""
    _require_qls(r)
    if not r.is_generic():
        raise NotQLS("use finite_qls for braidings at roots of unity")
    cert = _certificate(r, chi, cert, bound)
    rep = _qls_module(_Reduced(r, chi), [m + 1 for m in cert.m])
    rep.provenance["m"] = list(cert.m)
    return rep


def _length_budget(r: ReducedDatum, m: Sequence[int]) -> int:
    data = r.cartan.data
    return max(1, sum(m[i] * data.positive_roots(data.component_of(i)) for i in range(r.n)))


def build_general_module(r: ReducedDatum, chi: Character, cert: Optional[DominanceCertificate] = None,
                         dim_cap: int = 200, max_length: Optional[int] = None,
                         bound: int = 20) -> ModuleRep:
    """L(chi) spun inside B(W) by T_i(w) = u_i w - (prod_r q^U_{i i_r}) c_i w u_i."""
    cert = _certificate(r, chi, cert, bound)
    ctx = _Reduced(r, chi)
    n, F = r.n, ctx.F
    budget = max_length if max_length is not None else _length_budget(r, cert.m)
    W = BraidedVectorSpace.from_matrix(ctx.qU, F, [f"u{i + 1}" for i in range(n)])
    engine = NicholsEngine(W, max_length=budget + 1)

    vecs: List[Dict] = [{(): F.one()}]
    mds: List[Tuple[int, ...]] = [(0,) * n]
    parents: List[Optional[Tuple[int, int]]] = [None]
    echelons: Dict[Tuple[int, ...], EchelonBasis] = {(0,) * n: EchelonBasis()}
    echelons[(0,) * n].add(vecs[0], 0)
    Fcols = [dict() for _ in range(n)]
    dependent: List[Tuple[int, int, Dict]] = []

    def T(i: int, k: int) -> Dict:
        md = mds[k]
        coeff = ctx.c[i]
        for j, e in enumerate(md):
            if e:
                coeff = coeff * ctx.qU[i][j] ** e
        terms: Dict = {}
        for w, a in vecs[k].items():
            vec_axpy(terms, a, {(i,) + w: F.one()})
            vec_axpy(terms, -a * coeff, {w + (i,): F.one()})
        try:
            return engine.coordinates(TensorPoly(F, terms))
        except DegreeBudgetExceeded as exc:
            raise BudgetExceeded(f"Nichols length budget {budget} exceeded",
                                 detail={"max_length": budget}) from exc

    k = 0
    while k < len(vecs):
        for i in range(n):
            img = T(i, k)
            if not img:
                continue
            md = tuple(e + (1 if j == i else 0) for j, e in enumerate(mds[k]))
            if sum(md) > budget:
                raise BudgetExceeded(f"nonzero vector beyond length {budget}",
                                     detail={"max_length": budget})
            eb = echelons.setdefault(md, EchelonBasis())
            coords = eb.coordinates(img)
            if coords is None:
                idx = len(vecs)
                if idx >= dim_cap:
                    raise BudgetExceeded(f"module dimension exceeds {dim_cap}",
                                         detail={"dim_cap": dim_cap})
                eb.add(img, idx)
                vecs.append(img)
                mds.append(md)
                parents.append((i, k))
                Fcols[i][k] = {idx: F.one()}
            else:
                Fcols[i][k] = dict(coords)
                dependent.append((i, k, dict(coords)))
        k += 1

    dim = len(vecs)
    Fmats = [SparseMatrix(dim, dim, F, Fcols[i]) for i in range(n)]

    def e_rule(j: int, i: int, p: int, Ecols_j: Dict[int, Dict]) -> Dict:
        """a_j u_i = q^U_ij u_i a_j + delta_ij lU_i (1 - z_i K_j), applied to basis vector p."""
        out: Dict = {}
        below = Ecols_j.get(p, {})
        if below:
            vec_axpy(out, ctx.qU[i][j], Fmats[i].apply(below))
        if i == j:
            scal = ctx.lam_weight(mds[p], i) * ctx.weight(mds[p])(r.K[j])
            vec_axpy(out, ctx.lU[i] * (1 - scal), {p: F.one()})
        return out

    Ecols = [dict() for _ in range(n)]
    for j in range(n):
        for kk in range(1, dim):
            i, p = parents[kk]
            col = e_rule(j, i, p, Ecols[j])
            if col:
                Ecols[j][kk] = col
    # every dependent T_i(b_p) must get the same E-image through its coordinates
    for i, p, coords in dependent:
        for j in range(n):
            via_rule = e_rule(j, i, p, Ecols[j])
            via_coords: Dict = {}
            for kk, a in coords.items():
                vec_axpy(via_coords, a, Ecols[j].get(kk, {}))
            if via_rule != via_coords:
                raise InconsistentEAction("E-action recursion is contradictory",
                                          detail={"i": i + 1, "j": j + 1, "vector": p})

    def label(kk: int) -> str:
        word = []
        while parents[kk] is not None:
            i, kk = parents[kk]
            word.append(i)
        return _word_label(word)

    rep = _assemble(ctx, [label(kk) for kk in range(dim)], mds, Fcols, Ecols,
                    {"method": "general", "m": list(cert.m), "max_length": budget,
                     "nichols": [sorted(([list(w), str(a)] for w, a in v.items())) for v in vecs]})
    return rep


def build_module(r: ReducedDatum, chi: Character, cert: Optional[DominanceCertificate] = None,
                 dim_cap: int = 200, max_length: Optional[int] = None, bound: int = 20) -> ModuleRep:
    """QLS fast path when every component is A1 and the braiding is generic, else the spinning path."""
    if r.cartan.is_diagonal() and r.is_generic():
        return build_qls_module(r, chi, cert, bound)
    return build_general_module(r, chi, cert, dim_cap, max_length, bound)


# ---------------------------------------------------------------- pullback, datum-level modules

def pullback_module(pi: PiSpec, rep: ModuleRep, d: CartanDatum, lam: LinkingData) -> ModuleRep:
    """x_{t(i)} acts as x_i does on the D'-module; all other x_k act by 0."""
    dim = rep.dim
    zero = SparseMatrix(dim, dim, rep.field)
    x = [zero] * d.theta
    for i, k in enumerate(pi.t):
        x[k] = rep.x[i]
    a_idx = tuple(sorted(pi.t[i] for i in rep.a_indices))
    roots = None
    if rep.root_orders is not None:
        roots = tuple(d.orders())
    prov = dict(rep.provenance)
    prov["pullback"] = pi.describe()
    return ModuleRep(d, lam, rep.chi, list(rep.labels), list(rep.weights), x, a_idx, rep.hw,
                     None, roots, prov)


def module_for_datum(d: CartanDatum, lam: LinkingData, chi: Character, part=None, **kw) -> ModuleRep:
    """L(chi) over U(D, lambda) with rho(z_i) = chi(g_i), via the reduced datum of D'."""
    part = part or bipartite_partition(d, lam)
    dp, lamp, pi = project_datum(d, lam, part)
    r = to_reduced(dp, lamp)
    return pullback_module(pi, build_module(r, chi, **kw), d, lam)


def finite_qls(d: CartanDatum, lam: LinkingData, chi: Character, part=None) -> ModuleRep:
    """L(chi) over u(D, lambda) for finite Gamma and A1 components; every chi gives a module."""
    if not d.group.is_finite():
        raise OrderHypothesisViolated("finite_qls needs a finite group")
    if not d.cartan.is_diagonal():
        raise NotQLS("all Cartan components must be of type A1")
    orders = d.orders()
    for i, N in enumerate(orders):
        if N is None or N % 2 == 0 or N <= 3:
            raise OrderHypothesisViolated(f"ord(q_{i + 1}{i + 1}) = {N} must be odd and > 3",
                                          detail={"i": i + 1, "order": N})
    part = part or bipartite_partition(d, lam)
    dp, lamp, pi = project_datum(d, lam, part)
    r = to_reduced(dp, lamp)
    ctx = _Reduced(r, chi)
    caps = []
    for i in range(r.n):
        N = orders[pi.t[i]]
        ladder = ladder_coefficients(ctx.qU[i][i], ctx.c[i], N)
        first_zero = next((t for t, v in enumerate(ladder) if v.is_zero()), N)
        caps.append(min(N, first_zero))
    rep = _qls_module(ctx, caps)
    rep.root_orders = tuple(rep.datum.orders())
    rep.provenance["caps"] = caps
    return pullback_module(pi, rep, d, lam)


# ---------------------------------------------------------------- verification

def _mat_word(mats: Sequence[SparseMatrix], word: Sequence[int], dim: int, F) -> SparseMatrix:
    out = SparseMatrix.identity(dim, F)
    for k in word:
        out = out @ mats[k]
    return out


def _combination(terms, dim, F) -> SparseMatrix:
    out = SparseMatrix(dim, dim, F)
    for c, M in terms:
        out = out + M.scale(c)
    return out


def _serre_matrix(mats, i, j, coeffs, dim, F) -> SparseMatrix:
    a = len(coeffs) - 1
    return _combination([(c, _mat_word(mats, [i] * (a - s) + [j] + [i] * s, dim, F))
                         for s, c in enumerate(coeffs)], dim, F)


def verify_module(rep: ModuleRep) -> dict:
    """Substitute the matrices into every defining relation; exact pass/fail per relation."""
    d, lam, F, dim = rep.datum, rep.lam, rep.field, rep.dim
    I = SparseMatrix.identity(dim, F)
    entries: List[dict] = []

    def record(name, indices, M: SparseMatrix):
        entries.append({"relation": name, "indices": [k + 1 for k in indices], "holds": M.is_zero()})

    gens = d.group.gens()
    G = rep.group_matrices()
    for k, g in enumerate(gens):
        Gm, Gi = G[k], rep.group_matrix(g.inverse())
        record("group_diagonal", [k], SparseMatrix(dim, dim, F) if Gm.is_diagonal() else I)
        order = d.group.generator_order(k)
        if order is not None:
            record("group_order", [k], (Gm ** order) - I)
        for x in range(d.theta):
            record("group_action", [k, x], Gm @ rep.x[x] @ Gi - rep.x[x].scale(d.chi[x](g)))
    X = rep.x
    for i in range(d.theta):
        for j in range(d.theta):
            if i == j:
                continue
            if d.same_component(i, j):
                a = 1 - d.cartan[i, j]
                coeffs = serre_coefficients(d.q[i][i], d.q[i][j], a)
                record("serre", [i, j], _serre_matrix(X, i, j, coeffs, dim, F))
            elif i < j:
                gg = rep.group_matrix(d.g[i] * d.g[j])
                rel = X[i] @ X[j] - (X[j] @ X[i]).scale(d.q[i][j]) \
                    - (I - gg).scale(lam.get(i, j, F))
                record("linking", [i, j], rel)
    if rep.root_orders is not None:
        for k, N in enumerate(rep.root_orders):
            if N is not None and d.cartan.is_diagonal():
                record("root_vector", [k], X[k] ** N)
    if rep.reduced is not None:
        r = rep.reduced
        n = r.n
        for i in range(n):
            for j in range(n):
                if i != j and r.cartan.same_component(i, j):
                    a = 1 - r.cartan[i, j]
                    qii, qij = r.qij(i, i), r.qij(i, j)
                    Es = [rep.E(k) for k in range(n)]
                    Fs = [rep.F(k) for k in range(n)]
                    record("serre_E", [i, j], _serre_matrix(Es, i, j, serre_coefficients(qii, qij, a),
                                                            dim, F))
                    record("serre_F", [i, j], _serre_matrix(
                        Fs, i, j, serre_coefficients(qii.inverse(), qij.inverse(), a), dim, F))
                EF = rep.E(i) @ rep.F(j) - rep.F(j) @ rep.E(i)
                if i == j:
                    rhs = (rep.group_matrix(r.K[i]) - rep.group_matrix(r.L[i].inverse())).scale(
                        r.qij(i, i).inverse() * r.l[i])
                    EF = EF - rhs
                record("EF", [i, j], EF)
        if r.name == "benkart_gl":
            entries.extend(benkart_relations(rep))
    return {"dim": dim, "relations": entries, "all_hold": all(e["holds"] for e in entries),
            "failures": [e for e in entries if not e["holds"]]}


def benkart_relations(rep: ModuleRep) -> List[dict]:
    """E_i^2E_{i+1} - (r+s)E_iE_{i+1}E_i + rsE_{i+1}E_i^2 and the three companion relations."""
    r = rep.reduced
    F, dim = rep.field, rep.dim
    p = dict(r.params)
    rv, sv = F.var(p["r"]), F.var(p["s"])
    out = []
    for i in range(r.n - 1):
        j = i + 1
        for name, mats, a, b in (("benkart_E", [rep.E(k) for k in range(r.n)], rv + sv, rv * sv),
                                 ("benkart_F", [rep.F(k) for k in range(r.n)],
                                  rv.inverse() + sv.inverse(), (rv * sv).inverse())):
            W = lambda word: _mat_word(mats, word, dim, F)  # noqa: E731
            first = W([i, i, j]) - W([i, j, i]).scale(a) + W([j, i, i]).scale(b)
            second = W([i, j, j]) - W([j, i, j]).scale(a) + W([j, j, i]).scale(b)
            out.append({"relation": name, "indices": [i + 1, j + 1], "holds": first.is_zero()})
            out.append({"relation": name, "indices": [j + 1, i + 1], "holds": second.is_zero()})
    return out


# ---------------------------------------------------------------- structure checks

def _weight_classes(rep: ModuleRep) -> Dict[Tuple[str, ...], List[int]]:
    out: Dict[Tuple[str, ...], List[int]] = {}
    for k, w in enumerate(rep.weights):
        out.setdefault(tuple(w.literals()), []).append(k)
    return out


def _spin(rep: ModuleRep, vectors: Sequence[Dict]) -> EchelonBasis:
    eb = EchelonBasis()
    queue = []
    for v in vectors:
        if eb.add(v, len(eb.tags)):
            queue.append(v)
    while queue:
        v = queue.pop()
        for M in rep.x:
            w = M.apply(v)
            if w and eb.add(w, len(eb.tags)):
                queue.append(w)
    return eb


def _singular_vectors(rep: ModuleRep, indices: Sequence[int]) -> List[Dict]:
    """Basis of the vectors supported on ``indices`` killed by every A-side generator."""
    images = []
    for k in indices:
        img: Dict = {}
        for a in rep.a_indices:
            for row, v in rep.x[a].column(k).items():
                img[(a, row)] = v
        images.append(img)
    return [{indices[k]: c for k, c in rel.items()} for rel in nullspace(images, rep.field)]


def highest_weight_space(rep: ModuleRep) -> List[Dict]:
    """{v : a_j v = 0 for all j, g v = chi(g) v}."""
    cls = _weight_classes(rep).get(tuple(rep.chi.literals()), [])
    return _singular_vectors(rep, cls)


def check_simplicity(rep: ModuleRep, max_dim: int = 200) -> Tuple[bool, Optional[List[Dict]]]:
    """Simple iff every singular weight vector generates the module; witness = a proper submodule."""
    if rep.dim > max_dim:
        raise DimensionTooLarge(f"dimension {rep.dim} exceeds {max_dim}", detail={"max_dim": max_dim})
    for key, cls in sorted(_weight_classes(rep).items()):
        for v in _singular_vectors(rep, cls):
            sub = _spin(rep, [v])
            if len(sub) < rep.dim:
                return False, [row for row, _ in sub.rows.values()]
    if len(_spin(rep, [{rep.hw: rep.field.one()}])) < rep.dim:
        sub = _spin(rep, [{rep.hw: rep.field.one()}])
        return False, [row for row, _ in sub.rows.values()]
    return True, None


def direct_sum(a: ModuleRep, b: ModuleRep) -> ModuleRep:
    """Block-diagonal sum (a test double for reducible modules)."""
    da = a.dim
    x = []
    for Ma, Mb in zip(a.x, b.x):
        cols = {j: dict(c) for j, c in Ma.cols.items()}
        for j, c in Mb.cols.items():
            cols[da + j] = {da + i: v for i, v in c.items()}
        x.append(SparseMatrix(da + b.dim, da + b.dim, a.field, cols))
    return ModuleRep(a.datum, a.lam, a.chi, [f"{s}#1" for s in a.labels] + [f"{s}#2" for s in b.labels],
                     list(a.weights) + list(b.weights), x, a.a_indices, a.hw, a.reduced,
                     a.root_orders, {"method": "direct_sum"})


def weight_multiset(rep: ModuleRep) -> List[Tuple[Tuple[str, ...], int]]:
    return sorted((k, len(v)) for k, v in _weight_classes(rep).items())


def tensor_factorization_check(r: ReducedDatum, psi: Character, chi_m: Character,
                               build=build_module) -> bool:
    """L(psi chi_m) equals k_psi (x) L(chi_m) through the diagonal intertwiner psi(L)^{multidegree}."""
    if not is_one_dimensional_twist(r, psi):
        raise ValueError("psi must satisfy psi(K_i L_i) = 1")
    base = build(r, chi_m)
    twisted = build(r, psi * chi_m)
    if base.dim != twisted.dim:
        return False
    n, F = r.n, r.field
    # multidegree of each basis vector from its weight relative to chi_m
    mds = _multidegrees(base)
    D = SparseMatrix.diagonal([_prod_pow([psi(r.L[i]).inverse() for i in range(n)], md, F)
                               for md in mds], F)
    Dinv = D.inverse_diagonal()
    for k, g in enumerate(r.doubled()[0].g):
        # on k_psi (x) V the generator x_k acts as psi(g_k) x_k
        if D @ base.x[k].scale(psi(g)) @ Dinv != twisted.x[k]:
            return False
    return all((psi * w) == w2 for w, w2 in zip(base.weights, twisted.weights))


def _prod_pow(vals: Sequence[Scalar], exps: Sequence[int], F) -> Scalar:
    out = F.one()
    for v, e in zip(vals, exps):
        if e:
            out = out * v ** e
    return out


def _multidegrees(rep: ModuleRep) -> List[Tuple[int, ...]]:
    """Multidegree of each basis vector, read off the F-action along a spanning tree."""
    n = rep.reduced.n
    mds: List[Optional[Tuple[int, ...]]] = [None] * rep.dim
    mds[rep.hw] = (0,) * n
    queue = [rep.hw]
    while queue:
        k = queue.pop(0)
        for i in range(n):
            for row in rep.x[i].column(k):
                if mds[row] is None:
                    mds[row] = tuple(e + (1 if j == i else 0) for j, e in enumerate(mds[k]))
                    queue.append(row)
    return [md if md is not None else (0,) * n for md in mds]


def twist_consistency(rep: ModuleRep, degree: int = 2) -> List[dict]:
    """Compare E on u m (|u| <= degree) with the action read off (1 (x) a_j)(u (x) 1) in H."""
    from .twist import h_element, spec_from_reduced, twisted_multiply

    r = rep.reduced
    F, n = rep.field, r.n
    spec = spec_from_reduced(r)
    rho = [rep.chi(r.L[i]) for i in range(n)]

    def vector_of(word: Sequence[int]) -> Dict:
        v = {rep.hw: F.one()}
        for i in reversed(word):
            v = rep.x[i].apply(v)
        return v

    out = []
    for length in range(1, degree + 1):
        for word in itertools.product(range(n), repeat=length):
            for j in range(n):
                x = h_element(spec, u={(tuple(word), spec.U.identity_exps()): F.one()})
                y = h_element(spec, a={spec.A.letter_key(j): F.one()})
                prod = twisted_multiply(spec, y, x, reduce=False)
                via_twist: Dict = {}
                for ((w, z), (v, g)), c in prod.items():
                    if v:
                        continue  # a-letters kill m
                    scal = c * rep.chi(GroupElement(r.group, g)) * _prod_pow(rho, z, F)
                    vec_axpy(via_twist, scal, vector_of(w))
                direct = rep.x[n + j].apply(vector_of(word))
                out.append({"word": [k + 1 for k in word], "j": j + 1, "holds": via_twist == direct})
    return out


# ---------------------------------------------------------------- JSON

def _matrix_json(M: SparseMatrix) -> List[List]:
    return sorted([[i, j, str(v)] for j, col in M.cols.items() for i, v in col.items()])


def module_to_json(rep: ModuleRep) -> dict:
    pres = reduced_to_json(rep.reduced) if rep.reduced is not None else datum_to_json(rep.datum, rep.lam)
    return {
        "kind": "module",
        "presentation": pres,
        "chi": rep.chi.literals(),
        "dim": rep.dim,
        "hw": rep.hw,
        "labels": list(rep.labels),
        "weights": [w.literals() for w in rep.weights],
        "a_indices": [k + 1 for k in rep.a_indices],
        "root_orders": list(rep.root_orders) if rep.root_orders is not None else None,
        "generators": {f"x{k + 1}": _matrix_json(M) for k, M in enumerate(rep.x)},
        "provenance": rep.provenance,
    }


def module_from_json(obj) -> ModuleRep:
    if not isinstance(obj, dict) or obj.get("kind") != "module":
        raise ParseError("not a module document", detail={"path": "kind"})
    loaded = load_json(obj["presentation"])
    if isinstance(loaded, ReducedDatum):
        reduced = loaded
        d, lam = loaded.doubled()
    else:
        reduced = None
        d, lam = loaded
    F = d.field

    def scal(v, path):
        try:
            return F.coerce(v)
        except ParseError as exc:
            raise ParseError(f"{path}: {exc}", detail={"path": path}) from None

    chi = Character(d.group, [scal(v, f"chi[{k}]") for k, v in enumerate(obj["chi"])])
    dim = int(obj["dim"])
    weights = [Character(d.group, [scal(v, f"weights[{b}][{k}]") for k, v in enumerate(row)])
               for b, row in enumerate(obj["weights"])]
    x = []
    for k in range(d.theta):
        cols: Dict[int, Dict] = {}
        for n_, (i, j, v) in enumerate(obj["generators"][f"x{k + 1}"]):
            cols.setdefault(int(j), {})[int(i)] = scal(v, f"generators.x{k + 1}[{n_}]")
        x.append(SparseMatrix(dim, dim, F, cols))
    roots = obj.get("root_orders")
    return ModuleRep(d, lam, chi, list(obj["labels"]), weights, x,
                     tuple(k - 1 for k in obj["a_indices"]), int(obj.get("hw", 0)), reduced,
                     tuple(roots) if roots is not None else None, obj.get("provenance", {}))
