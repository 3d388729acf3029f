"""Hopf pairing tau, the 2-cocycle twist H = (U (x) A)^sigma, and identity checks.

U = B(W) # k[Lambda] and A = B(V) # k[Gamma] are smash products; a basis
element is a key ``(word, group exponents)`` standing for word * group
element.  Elements are dicts key -> Scalar.  The pairing is evaluated by
structural recursion and never materialized:

* tau(z, g) = phi(z)(g), tau(z, word) = 0 for nonempty words;
* tau(u_i, a_j g) = delta_{s(i) j} l_i phi(z_i)(g), zero on other lengths;
* tau(u u', a) = tau(u, a_(1)) tau(u', a_(2)).

H elements are dicts ``(U key, A key) -> Scalar``.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .abgroup import Character, FgAbelianGroup, GroupElement
from .braided import BraidedVectorSpace, NicholsEngine, TensorPoly, _words_with_multidegree
from .errors import CheckFailed, DegreeBudgetExceeded
from .linalg import nullspace
from .scalars import FieldSpec, Scalar

Key = Tuple[Tuple[int, ...], Tuple[int, ...]]
HKey = Tuple[Key, Key]

__all__ = [
    "SmashAlgebra", "PairingSpec", "coproduct_iterate", "tau_eval", "twisted_multiply",
    "cocycle_check", "quotient_identify", "spec_from_datum", "spec_from_reduced",
]


def _add(target: Dict, key, coeff: Scalar) -> None:
    if coeff.is_zero():
        return
    cur = target.get(key)
    new = coeff if cur is None else cur + coeff
    if new.is_zero():
        target.pop(key, None)
    else:
        target[key] = new


class SmashAlgebra:
    """B(X) # k[G] for X of diagonal type with letters of degree ``degrees`` and character ``chars``."""

    def __init__(self, field: FieldSpec, group: FgAbelianGroup, degrees: Sequence[GroupElement],
                 chars: Sequence[Character], labels: Sequence[str] = (), max_length: int = 10,
                 max_words: int = 200_000):
        self.field = field
        self.group = group
        self.degrees = tuple(degrees)
        self.chars = tuple(chars)
        self.labels = tuple(labels) or tuple(f"x{i + 1}" for i in range(len(degrees)))
        self.space = BraidedVectorSpace.from_characters(self.degrees, self.chars, self.labels, field)
        self.engine = NicholsEngine(self.space, max_length, max_words)
        self.max_length = max_length
        self._char_cache: Dict[Tuple[int, Tuple[int, ...]], Scalar] = {}
        self._coproduct_cache: Dict[Tuple[Key, int], Dict[Tuple[Key, ...], Scalar]] = {}

    @property
    def ngens(self) -> int:
        return len(self.degrees)

    def identity_exps(self) -> Tuple[int, ...]:
        return (0,) * self.group.ngens

    def one_key(self) -> Key:
        return ((), self.identity_exps())

    def letter_key(self, i: int) -> Key:
        return ((i,), self.identity_exps())

    def group_key(self, g) -> Key:
        exps = g.exponents if isinstance(g, GroupElement) else self.group.element(g).exponents
        return ((), tuple(exps))

    def gmul(self, a: Tuple[int, ...], b: Tuple[int, ...]) -> Tuple[int, ...]:
        return self.group.element([x + y for x, y in zip(a, b)]).exponents

    def ginv(self, a: Tuple[int, ...]) -> Tuple[int, ...]:
        return self.group.element([-x for x in a]).exponents

    def char_value(self, letter: int, exps: Tuple[int, ...]) -> Scalar:
        """chi_letter(g) for the group element with exponents ``exps``."""
        key = (letter, exps)
        got = self._char_cache.get(key)
        if got is None:
            got = self.chars[letter](GroupElement(self.group, exps))
            self._char_cache[key] = got
        return got

    def word_char(self, word: Sequence[int], exps: Tuple[int, ...]) -> Scalar:
        out = self.field.one()
        for a in word:
            out = out * self.char_value(a, exps)
        return out

    def word_degree(self, word: Sequence[int]) -> Tuple[int, ...]:
        out = self.identity_exps()
        for a in word:
            out = self.gmul(out, self.degrees[a].exponents)
        return out

    def mul_keys(self, k1: Key, k2: Key) -> Tuple[Scalar, Key]:
        """(w g)(w' g') = chi_{w'}(g) (w w')(g g')."""
        (w1, g1), (w2, g2) = k1, k2
        return self.word_char(w2, g1), (w1 + w2, self.gmul(g1, g2))

    def multiply(self, x: Mapping[Key, Scalar], y: Mapping[Key, Scalar],
                 reduce: bool = True) -> Dict[Key, Scalar]:
        out: Dict[Key, Scalar] = {}
        for k1, c1 in x.items():
            for k2, c2 in y.items():
                c, k = self.mul_keys(k1, k2)
                _add(out, k, c1 * c2 * c)
        return self.reduce(out) if reduce else out

    def reduce(self, x: Mapping[Key, Scalar]) -> Dict[Key, Scalar]:
        """Nichols normal form of the word part, group part by group part."""
        by_group: Dict[Tuple[int, ...], Dict] = {}
        for (w, g), c in x.items():
            by_group.setdefault(g, {})[w] = c
        out: Dict[Key, Scalar] = {}
        for g, words in by_group.items():
            coords = self.engine.coordinates(TensorPoly(self.field, words))
            for w, c in coords.items():
                out[(w, g)] = c
        return out

    def counit(self, key: Key) -> Scalar:
        return self.field.one() if not key[0] else self.field.zero()

    def antipode(self, key: Key) -> Dict[Key, Scalar]:
        """S(x g) = g^{-1} S(x), S(x_i) = -g_i^{-1} x_i, anti-multiplicative (free words)."""
        word, g = key
        cur: Dict[Key, Scalar] = {((), self.ginv(g)): self.field.one()}
        for a in reversed(word):
            factor = {((), self.ginv(self.degrees[a].exponents)): -self.field.one()}
            factor = self.multiply(factor, {self.letter_key(a): self.field.one()}, reduce=False)
            cur = self.multiply(cur, factor, reduce=False)
        return cur

    def coproduct_key(self, key: Key, k: int) -> Dict[Tuple[Key, ...], Scalar]:
        """Delta^{k-1} of a basis element, words kept free (not reduced)."""
        cache_key = (key, k)
        got = self._coproduct_cache.get(cache_key)
        if got is not None:
            return got
        word, g = key
        if len(word) > self.max_length:
            raise DegreeBudgetExceeded(f"word of length {len(word)} exceeds the budget")
        e = self.identity_exps()
        terms: Dict[Tuple[Key, ...], Scalar] = {tuple(((), e) for _ in range(k)): self.field.one()}
        for a in word:
            deg = self.degrees[a].exponents
            new: Dict[Tuple[Key, ...], Scalar] = {}
            for slots, c in terms.items():
                for p in range(k):
                    coeff = c
                    out = []
                    for r, (w, h) in enumerate(slots):
                        if r < p:
                            out.append((w, self.gmul(h, deg)))
                        elif r == p:
                            coeff = coeff * self.char_value(a, h)
                            out.append((w + (a,), h))
                        else:
                            out.append((w, h))
                    _add(new, tuple(out), coeff)
            terms = new
        final = {tuple((w, self.gmul(h, g)) for w, h in slots): c for slots, c in terms.items()}
        self._coproduct_cache[cache_key] = final
        return final

    def basis(self, degree: int, group_parts: Optional[Sequence[Tuple[int, ...]]] = None) -> List[Key]:
        """Nichols basis words of length <= degree times the given group parts (default 1 and generators)."""
        if group_parts is None:
            group_parts = [self.identity_exps()] + [g.exponents for g in self.group.gens()]
        out = []
        for d in range(degree + 1):
            for w in self.engine.nichols_basis(d):
                for g in group_parts:
                    out.append((w, tuple(g)))
        return out

    def relations(self, degree: int) -> List[Dict[Tuple[int, ...], Scalar]]:
        """A spanning set of the kernel of the symmetrizer in each multidegree of length <= degree."""
        out = []
        eng = self.engine
        for d in range(2, degree + 1):
            for md in eng.multidegrees(d):
                words = _words_with_multidegree(md)
                images = [eng._sym(w) for w in words]
                for rel in nullspace(images, self.field):
                    out.append({words[k]: c for k, c in rel.items()})
        return out


def coproduct_iterate(alg: SmashAlgebra, x: Mapping[Key, Scalar], k: int
                      ) -> Dict[Tuple[Key, ...], Scalar]:
    """Delta^{k-1}(x) as a dict of k-tuples of basis keys; k >= 1."""
    if k < 1:
        raise ValueError("k must be at least 1")
    out: Dict[Tuple[Key, ...], Scalar] = {}
    for key, c in x.items():
        for slots, d in alg.coproduct_key(key, k).items():
            _add(out, slots, c * d)
    return out


@dataclass
class PairingSpec:
    """phi: Lambda -> Gamma^ on generators, s: U-letter -> A-letter, l_i; optional z_k -> g_k identification."""

    U: SmashAlgebra
    A: SmashAlgebra
    phi: Tuple[Character, ...]
    s: Tuple[int, ...]
    l: Tuple[Scalar, ...]
    identify: Optional[Tuple[GroupElement, ...]] = None
    context: Optional[dict] = None
    _tau_cache: Dict = dc_field(default_factory=dict, repr=False)

    @property
    def field(self) -> FieldSpec:
        return self.U.field

    def phi_of(self, z: Tuple[int, ...]) -> Character:
        out = Character.trivial(self.A.group, self.field)
        for c, e in zip(self.phi, z):
            if e:
                out = out * c ** e
        return out

    def phi_value(self, z: Tuple[int, ...], g: Tuple[int, ...]) -> Scalar:
        return self.phi_of(z)(GroupElement(self.A.group, g))

    def beta(self, i: int, j: int) -> Scalar:
        """The bilinear form on W (x) V: beta(u_i, a_j) = l_i delta_{s(i) j}."""
        return self.l[i] if self.s[i] == j else self.field.zero()

    def condition_violations(self) -> List[dict]:
        """Failures of phi(z_i) = chi_{s(i)}^{-1} and eta_i(z) = phi(z)(g_{s(i)}) for l_i != 0."""
        out = []
        for i, li in enumerate(self.l):
            if li.is_zero():
                continue
            j = self.s[i]
            zi = self.U.degrees[i].exponents
            if self.phi_of(zi) != self.A.chars[j].inverse():
                out.append({"i": i + 1, "condition": "phi(z_i) = chi_s(i)^-1"})
            for k, z in enumerate(self.U.group.gens()):
                lhs = self.U.chars[i](z)
                rhs = self.phi_value(z.exponents, self.A.degrees[j].exponents)
                if lhs != rhs:
                    out.append({"i": i + 1, "z": k + 1, "condition": "eta_i(z) = phi(z)(g_s(i))"})
        return out

    # ------------------------------------------------------------ tau

    def tau_key(self, ukey: Key, akey: Key) -> Scalar:
        (w, z), (v, g) = ukey, akey
        F = self.field
        if len(w) != len(v):
            return F.zero()
        memo = self._tau_cache.get((ukey, akey))
        if memo is not None:
            return memo
        if not w:
            out = self.phi_value(z, g)
        else:
            i, rest = w[0], (w[1:], z)
            out = F.zero()
            li = self.l[i]
            target = self.s[i]
            if not li.is_zero():
                zi = self.U.degrees[i].exponents
                phi_i = self.phi_of(zi)
                A = self.A
                for p, letter in enumerate(v):
                    if letter != target:
                        continue
                    coeff = li
                    for r in range(p):
                        coeff = coeff * A.char_value(letter, A.degrees[v[r]].exponents)
                    G = A.gmul(A.word_degree(v[:p] + v[p + 1:]), g)
                    coeff = coeff * phi_i(GroupElement(A.group, G))
                    sub = self.tau_key(rest, (v[:p] + v[p + 1:], g))
                    out = out + coeff * sub
        self._tau_cache[(ukey, akey)] = out
        return out

    def tau_inv_key(self, ukey: Key, akey: Key) -> Scalar:
        """tau^{-1}(u, a) = tau(S(u), a)."""
        out = self.field.zero()
        for k, c in self.U.antipode(ukey).items():
            out = out + c * self.tau_key(k, akey)
        return out


def tau_eval(spec: PairingSpec, u: Mapping[Key, Scalar], a: Mapping[Key, Scalar],
             inverse: bool = False) -> Scalar:
    out = spec.field.zero()
    f = spec.tau_inv_key if inverse else spec.tau_key
    for k1, c1 in u.items():
        for k2, c2 in a.items():
            out = out + c1 * c2 * f(k1, k2)
    return out


# ---------------------------------------------------------------- H = (U (x) A)^sigma

def h_element(spec: PairingSpec, u: Optional[Mapping[Key, Scalar]] = None,
              a: Optional[Mapping[Key, Scalar]] = None) -> Dict[HKey, Scalar]:
    """u (x) a as an H element (either side defaults to 1)."""
    one = spec.field.one()
    u = u if u is not None else {spec.U.one_key(): one}
    a = a if a is not None else {spec.A.one_key(): one}
    out: Dict[HKey, Scalar] = {}
    for k1, c1 in u.items():
        for k2, c2 in a.items():
            _add(out, (k1, k2), c1 * c2)
    return out


def h_reduce(spec: PairingSpec, x: Mapping[HKey, Scalar]) -> Dict[HKey, Scalar]:
    """Nichols normal form on both tensor factors."""
    by_a: Dict[Tuple[Key, Tuple[int, ...]], Dict] = {}
    for ((w, z), akey), c in x.items():
        by_a.setdefault((akey, z), {})[w] = c
    stage: Dict[HKey, Scalar] = {}
    for (akey, z), words in by_a.items():
        for w, c in spec.U.engine.coordinates(TensorPoly(spec.field, words)).items():
            _add(stage, ((w, z), akey), c)
    by_u: Dict[Tuple[Key, Tuple[int, ...]], Dict] = {}
    for (ukey, (v, g)), c in stage.items():
        by_u.setdefault((ukey, g), {})[v] = c
    out: Dict[HKey, Scalar] = {}
    for (ukey, g), words in by_u.items():
        for v, c in spec.A.engine.coordinates(TensorPoly(spec.field, words)).items():
            _add(out, (ukey, (v, g)), c)
    return out


def twisted_multiply(spec: PairingSpec, x: Mapping[HKey, Scalar], y: Mapping[HKey, Scalar],
                     reduce: bool = True) -> Dict[HKey, Scalar]:
    """(u (x) a)(u' (x) a') = u tau(u'_1, a_1) u'_2 (x) a_2 tau^{-1}(u'_3, a_3) a'."""
    U, A = spec.U, spec.A
    out: Dict[HKey, Scalar] = {}
    for (u, a), c in x.items():
        da = A.coproduct_key(a, 3)
        for (u2, a2), d in y.items():
            du = U.coproduct_key(u2, 3)
            for (p1, p2, p3), cu in du.items():
                for (b1, b2, b3), ca in da.items():
                    if len(p1[0]) != len(b1[0]) or len(p3[0]) != len(b3[0]):
                        continue
                    t = spec.tau_key(p1, b1)
                    if t.is_zero():
                        continue
                    ti = spec.tau_inv_key(p3, b3)
                    if ti.is_zero():
                        continue
                    cl, kl = U.mul_keys(u, p2)
                    cr, kr = A.mul_keys(b2, a2)
                    _add(out, (kl, kr), c * d * cu * ca * t * ti * cl * cr)
    return h_reduce(spec, out) if reduce else out


def quotient_identify(spec: PairingSpec, x: Mapping[HKey, Scalar]) -> Dict[HKey, Scalar]:
    """Rewrite z in Lambda as the group element it is identified with: (w z) (x) (v g) -> w (x) chi_v(g_z) v g_z g."""
    if spec.identify is None:
        raise ValueError("pairing spec carries no identification of Lambda with Gamma")
    A = spec.A
    out: Dict[HKey, Scalar] = {}
    for ((w, z), (v, g)), c in x.items():
        gz = A.identity_exps()
        for e, elem in zip(z, spec.identify):
            if e:
                gz = A.gmul(gz, (elem ** e).exponents)
        _add(out, ((w, spec.U.identity_exps()), (v, A.gmul(gz, g))), c * A.word_char(v, gz))
    return out


def h_to_string(spec: PairingSpec, x: Mapping[HKey, Scalar]) -> str:
    if not x:
        return "0"
    parts = []
    for ((w, z), (v, g)), c in sorted(x.items(), key=lambda kv: (kv[0][0][0], kv[0][0][1],
                                                                kv[0][1][0], kv[0][1][1])):
        pieces = [spec.U.labels[k] for k in w]
        pieces += [f"z^{list(z)}"] if any(z) else []
        pieces += [spec.A.labels[k] for k in v]
        pieces += [f"g^{list(g)}"] if any(g) else []
        parts.append(f"({c})*{'*'.join(pieces) or '1'}")
    return " + ".join(parts)


# ---------------------------------------------------------------- checks

def _fail(name: str, detail: dict):
    raise CheckFailed(f"{name} fails", detail={"check": name, **detail})


def cocycle_check(spec: PairingSpec, degree: int = 2) -> dict:
    """Verify pairing identities, convolution invertibility and associativity up to ``degree``.

    Returns a report of counts per identity; raises CheckFailed with a
    counterexample on the first failure.
    """
    if degree > 3:
        raise ValueError("cocycle_check is meant for degree bounds <= 3")
    U, A, F = spec.U, spec.A, spec.field
    one = F.one()
    report = {"degree": degree}
    ubasis = U.basis(degree)
    abasis = A.basis(degree)
    violations = spec.condition_violations()
    report["pairing_conditions"] = "violated" if violations else "hold"

    # tau(u, a a') = tau(u_(2), a) tau(u_(1), a')
    count = 0
    for u in ubasis:
        du = U.coproduct_key(u, 2)
        for a in abasis:
            for a2 in abasis:
                if len(a[0]) + len(a2[0]) != len(u[0]):
                    continue
                c, prod = A.mul_keys(a, a2)
                lhs = c * spec.tau_key(u, prod)
                rhs = F.zero()
                for (p1, p2), cu in du.items():
                    rhs = rhs + cu * spec.tau_key(p2, a) * spec.tau_key(p1, a2)
                if lhs != rhs:
                    _fail("pairing_multiplicative", {"u": str(u), "a": str(a), "a2": str(a2),
                                                     "violations": violations})
                count += 1
    report["pairing_multiplicative"] = count

    # tau vanishes on the defining relations of both Nichols algebras
    count = 0
    for rel in U.relations(degree):
        for a in abasis:
            val = F.zero()
            for w, c in rel.items():
                val = val + c * spec.tau_key((w, U.identity_exps()), a)
            if not val.is_zero():
                _fail("pairing_kills_relations", {"side": "U", "relation": str(rel),
                                                  "a": str(a), "violations": violations})
            count += 1
    for rel in A.relations(degree):
        for u in ubasis:
            val = F.zero()
            for v, c in rel.items():
                val = val + c * spec.tau_key(u, (v, A.identity_exps()))
            if not val.is_zero():
                _fail("pairing_kills_relations", {"side": "A", "relation": str(rel),
                                                  "u": str(u), "violations": violations})
            count += 1
    report["pairing_kills_relations"] = count

    # tau * tau^{-1} = eps (x) eps
    count = 0
    for u in ubasis:
        du = U.coproduct_key(u, 2)
        for a in abasis:
            da = A.coproduct_key(a, 2)
            val = F.zero()
            for (p1, p2), cu in du.items():
                for (b1, b2), ca in da.items():
                    val = val + cu * ca * spec.tau_key(p1, b1) * spec.tau_inv_key(p2, b2)
            if val != U.counit(u) * A.counit(a):
                _fail("convolution_inverse", {"u": str(u), "a": str(a), "violations": violations})
            count += 1
    report["convolution_inverse"] = count

    # associativity on basis triples of total degree <= bound
    hbasis = [(uk, ak) for uk in ubasis for ak in abasis if len(uk[0]) + len(ak[0]) <= degree]
    count = 0
    for x in hbasis:
        dx = len(x[0][0]) + len(x[1][0])
        for y in hbasis:
            dy = len(y[0][0]) + len(y[1][0])
            if dx + dy > degree:
                continue
            xy = twisted_multiply(spec, {x: one}, {y: one})
            for z in hbasis:
                if dx + dy + len(z[0][0]) + len(z[1][0]) > degree:
                    continue
                left = twisted_multiply(spec, xy, {z: one})
                right = twisted_multiply(spec, {x: one}, twisted_multiply(spec, {y: one}, {z: one}))
                if left != right:
                    _fail("associativity", {"x": str(x), "y": str(y), "z": str(z),
                                            "violations": violations})
                count += 1
    report["associativity"] = count

    # unit
    unit = h_element(spec)
    for x in hbasis:
        if twisted_multiply(spec, unit, {x: one}) != h_reduce(spec, {x: one}) or \
                twisted_multiply(spec, {x: one}, unit) != h_reduce(spec, {x: one}):
            _fail("unit", {"x": str(x)})
    report["unit"] = len(hbasis)

    if spec.identify is not None:
        report["centrality"] = centrality_check(spec, degree)
    if violations:
        _fail("pairing_conditions", {"violations": violations})
    return report


def central_element(spec: PairingSpec, k: int) -> Dict[HKey, Scalar]:
    """z_k (x) g_k^{-1}."""
    z = [0] * spec.U.group.ngens
    z[k] = 1
    g = spec.identify[k].inverse().exponents
    return {((tuple(), spec.U.group.element(z).exponents), ((), g)): spec.field.one()}


def centrality_check(spec: PairingSpec, degree: int = 2) -> int:
    one = spec.field.one()
    hbasis = [(uk, ak) for uk in spec.U.basis(degree) for ak in spec.A.basis(degree)
              if len(uk[0]) + len(ak[0]) <= degree]
    count = 0
    for k in range(spec.U.group.ngens):
        c = central_element(spec, k)
        for x in hbasis:
            if twisted_multiply(spec, c, {x: one}) != twisted_multiply(spec, {x: one}, c):
                _fail("centrality", {"k": k + 1, "x": str(x)})
            count += 1
    return count


# ---------------------------------------------------------------- builders

def spec_from_datum(d, lam, part, max_length: int = 10) -> PairingSpec:
    """The pairing of the (U (x) A)^sigma presentation of U(D, lambda).

    U is built on I^- (Lambda free on z_i, eta_j(z_i) = chi_j(g_i)), A on I^+ with
    Gamma; phi(z_i) = chi_i, s(i) = linked partner, l_i = lambda_{s(i), i};
    z_i is identified with g_i.
    """
    F = d.field
    minus, plus = list(part.minus), list(part.plus)
    lam_group = FgAbelianGroup(len(minus))
    zs = [lam_group.gen(k) for k in range(len(minus))]
    etas = [Character(lam_group, [d.chi[j](d.g[i]) for i in minus]) for j in minus]
    U = SmashAlgebra(F, lam_group, zs, etas, [f"u{i + 1}" for i in minus], max_length)
    A = SmashAlgebra(F, d.group, [d.g[j] for j in plus], [d.chi[j] for j in plus],
                     [f"a{j + 1}" for j in plus], max_length)
    s, l = [], []
    for i in minus:
        partners = [j for j in lam.partners(i) if j in plus]
        if partners:
            s.append(plus.index(partners[0]))
            l.append(lam.values[(partners[0], i)])
        else:
            s.append(0)
            l.append(F.zero())
    phi = tuple(d.chi[i] for i in minus)
    return PairingSpec(U, A, phi, tuple(s), tuple(l), tuple(d.g[i] for i in minus),
                       {"minus": minus, "plus": plus})


def spec_from_reduced(r, max_length: int = 10) -> PairingSpec:
    from .datum import bipartite_partition

    d, lam = r.doubled()
    return spec_from_datum(d, lam, bipartite_partition(d, lam), max_length)


def reduced_linking_check(spec: PairingSpec, r) -> List[dict]:
    """x_i y_j - chi_j(L_i) y_j x_i against delta_ij l_i (1 - K_i L_i) after the identification."""
    F = spec.field
    one = F.one()
    out = []
    for i in range(r.n):
        for j in range(r.n):
            x = h_element(spec, u={spec.U.letter_key(i): one})
            y = h_element(spec, a={spec.A.letter_key(j): one})
            xy = twisted_multiply(spec, x, y)
            yx = twisted_multiply(spec, y, x)
            coeff = r.chi[j](r.L[i])
            lhs = dict(xy)
            for k, c in yx.items():
                _add(lhs, k, -coeff * c)
            lhs = quotient_identify(spec, lhs)
            expected: Dict[HKey, Scalar] = {}
            if i == j:
                e = spec.U.one_key()
                _add(expected, (e, spec.A.one_key()), r.l[i])
                _add(expected, (e, ((), (r.K[i] * r.L[i]).exponents)), -r.l[i])
            out.append({"i": i + 1, "j": j + 1, "holds": lhs == expected,
                        "lhs": h_to_string(spec, lhs), "expected": h_to_string(spec, expected)})
    return out
