from __future__ import annotations

import json

import pytest

from pointedhopf import FieldSpec
from pointedhopf.abgroup import Character, FgAbelianGroup
from pointedhopf.datum import (CartanDatum, LinkingData, braiding_exponents, a1_triangle, ab_exponents, b2_circle,
                               bipartite_partition, build_datum, datum_to_json, dj_datum,
                               excircle, finite_qls_example, is_generic, linkable, linking_graph,
                               load_json, make_reduced, preset, project_datum, reduced_to_json,
                               to_reduced, twist_matrix, uqsl, validate_linking, benkart_gl)
from pointedhopf.cartan import cartan_of_type, validate_cartan
from pointedhopf.errors import (CartanConditionViolated, InconsistentSymmetry,
                                NoCharacterExists, NonLinkablePair, NoQJ,
                                OddCycle, ParseError, QiiIsOne, ReducedInvariantViolated)


def _a1_chain(values):
    """Free group on the vertices, q_ij = t^{values[i][j]} with A1 components."""
    F = FieldSpec(1, ("t1",))
    t = F.var("t1")
    n = len(values)
    G = FgAbelianGroup(n)
    chi = [Character(G, [t ** values[i][j] for i in range(n)]) for j in range(n)]
    cart = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    return build_datum(G, G.gens(), chi, cart, F)


def test_cartan_condition_enforced():
    F = FieldSpec(1, ("t1",))
    t = F.var("t1")
    G = FgAbelianGroup(2)
    chi = [Character(G, [t ** 2, t]), Character(G, [t, t ** 2])]
    with pytest.raises(CartanConditionViolated):
        build_datum(G, G.gens(), chi, cartan_of_type("A2"), F)


def test_qii_one_rejected():
    F = FieldSpec(1, ("t1",))
    G = FgAbelianGroup(1)
    with pytest.raises(QiiIsOne):
        build_datum(G, G.gens(), [Character(G, [F.one()])], [[2]], F)


def test_qJ_is_a_root_in_the_field():
    d = dj_datum("B2")
    t = d.field.var("t1")
    assert d.q_J(0) == t
    # q_ii = t for a B2 short root has no square root in Q(t)
    F = FieldSpec(1, ("t1",))
    G = FgAbelianGroup(2)
    chi = [Character(G, [t ** 2, t ** -1]), Character(G, [t ** -1, t])]
    with pytest.raises(NoQJ):
        build_datum(G, G.gens(), chi, cartan_of_type("B2"), F)


def test_twist_matrix_on_components():
    d = dj_datum("A2")
    t = d.field.var("t1")
    assert twist_matrix(d) == [[t ** 2, t ** -1], [t ** -1, t ** 2]]


def test_ab_exponents_along_paths():
    cm = validate_cartan(cartan_of_type("B3"))
    a, b = ab_exponents(cm, 0, 2)
    d = dj_datum("B3")
    assert d.q[0][0] ** a == d.q[2][2] ** b
    assert ab_exponents(cm, 1, 1) == (1, 1)


def test_linkability_rules():
    d = _a1_chain([[2, 1], [-1, -2]])
    assert not linkable(d, 0, 1)  # chi_1 chi_2 is not trivial
    d = _a1_chain([[2, -2], [2, -2]])
    assert linkable(d, 0, 1)
    lam = validate_linking(d, {(0, 1): 3})
    # lambda_21 = -q_21 lambda_12
    assert lam.values[(1, 0)] == -d.q[1][0] * 3
    with pytest.raises(InconsistentSymmetry):
        validate_linking(d, {(0, 1): 3, (1, 0): 3})
    with pytest.raises(NonLinkablePair):
        validate_linking(dj_datum("A2"), {(0, 1): 1})


def test_linking_inside_a_component_is_rejected():
    with pytest.raises(NonLinkablePair):
        b2_circle(1, 3)


def test_excircle_bipartition():
    d, lam = excircle()
    assert is_generic(d) == (True, None)
    g = linking_graph(d, lam)
    assert g.components == ((0, 1, 2), (3, 4, 5))
    assert g.edges == ((0, 1),)
    part = bipartite_partition(d, lam)
    assert part.describe() == {"I_minus": [1, 2, 3], "I_plus": [4, 5, 6], "t": [1, 3, 6, 4], "n": 2}


def test_longer_excircle_alternates():
    d, lam = excircle((3, 4, 3, 3))
    part = bipartite_partition(d, lam)
    assert part.minus_components == (0, 2)
    assert part.plus_components == (1, 3)
    for i, j in lam.linked_pairs():
        assert (i in part.minus) != (j in part.minus)


def test_side_override_flips_the_colouring():
    d, lam = excircle()
    part = bipartite_partition(d, lam, side_override=[4])
    assert part.minus == (3, 4, 5)


def test_odd_circle_needs_even_components():
    with pytest.raises(ValueError):
        excircle((3, 3, 3))


def test_generic_odd_cycle_is_rejected():
    # a generic triangle admits no braiding at all
    with pytest.raises(ValueError):
        braiding_exponents([[2, 0, 0], [0, 2, 0], [0, 0, 2]], [2, -2, 2],
                           [(0, 1), (1, 2), (0, 2)])
    d = _a1_chain([[2, 0, 0], [0, -2, 0], [0, 0, 2]])
    with pytest.raises(NonLinkablePair):
        validate_linking(d, {(0, 1): 1, (1, 2): 1, (0, 2): 1})
    # forcing the triangle past validation is caught by the bipartition
    vals = {}
    for i, j in [(0, 1), (1, 2), (0, 2)]:
        vals[(i, j)] = d.field.one()
        vals[(j, i)] = -d.q[j][i]
    with pytest.raises(OddCycle) as exc:
        bipartite_partition(d, LinkingData(vals))
    assert exc.value.detail["generic"] is True


def test_non_generic_triangle_is_a_valid_datum():
    d, lam = a1_triangle()
    assert is_generic(d)[0] is False
    assert len(lam.linked_pairs()) == 3
    assert lam.warnings
    with pytest.raises(OddCycle) as exc:
        bipartite_partition(d, lam)
    assert sorted(exc.value.detail["cycle"]) == [[1], [2], [3]]
    assert exc.value.detail["generic"] is False


def test_b2_odd_circles_parameters():
    with pytest.raises(ValueError):
        b2_circle(1, 5)
    with pytest.raises(NoCharacterExists):
        b2_circle(3, 3)


def test_projection_and_reduction_of_excircle():
    d, lam = excircle()
    part = bipartite_partition(d, lam)
    dp, lamp, pi = project_datum(d, lam, part)
    assert pi.describe() == {"t": [1, 3, 6, 4], "killed": [2, 5]}
    r = to_reduced(dp, lamp)
    assert r.n == 2 and r.cartan.is_diagonal()
    assert r.is_generic()


def test_doubling_round_trip():
    r = uqsl("A2")
    d, lam = r.doubled()
    assert d.theta == 4
    r2 = to_reduced(d, lam)
    assert r2.L == r.L and r2.K == r.K and r2.chi == r.chi and r2.l == r.l


def test_reduced_invariants():
    r = uqsl("A1")
    with pytest.raises(ReducedInvariantViolated):
        make_reduced(r.group, r.L, r.K, r.chi, r.cartan, [0])
    with pytest.raises(ReducedInvariantViolated):
        make_reduced(r.group, [r.K[0].inverse()], r.K, r.chi, r.cartan, [1])


def test_presets_and_json_round_trip():
    for name in ["uqsl", "benkart_gl", "dj", "excircle", "a1_triangle", "finite_qls"]:
        obj = preset(name)
        if isinstance(obj, CartanDatum):
            obj = (obj, LinkingData({}))
        if isinstance(obj, tuple):
            doc = datum_to_json(*obj)
            again = load_json(json.loads(json.dumps(doc)))
            assert datum_to_json(*again) == doc
        else:
            doc = reduced_to_json(obj)
            again = load_json(json.loads(json.dumps(doc)))
            assert reduced_to_json(again) == doc


def test_preset_parameters():
    r = preset("benkart_gl", {"n": 3})
    assert r.n == 3
    with pytest.raises(KeyError):
        preset("uqsl", {"rank": 2})


def test_json_errors_carry_paths():
    doc = datum_to_json(*finite_qls_example())
    doc["chi"][1][0] = "t7"
    with pytest.raises(ParseError) as exc:
        load_json(doc)
    assert exc.value.detail["path"] == "chi[1][0]"
    with pytest.raises(ParseError):
        load_json({"field": {}})


def _double_a1(mismatched=False):
    F = FieldSpec(1, ("t1",))
    t = F.var("t1")
    G = FgAbelianGroup(2)
    chi1 = Character(G, [t ** 2, t ** 2])
    chi2 = Character(G, [t ** -2, t ** -4]) if mismatched else chi1.inverse()
    return build_datum(G, G.gens(), [chi1, chi2], [[2, 0], [0, 2]], F)


def test_double_datum_linkability():
    d = _double_a1()
    assert linkable(d, 0, 1)
    assert not linkable(d, 0, 0)
    assert not linkable(_double_a1(mismatched=True), 0, 1)
    assert validate_linking(d, {}).is_zero()
    lam = validate_linking(d, {(0, 1): 1})
    assert lam.values[(1, 0)] == -d.q[1][0]
    part = bipartite_partition(d, lam)
    assert (part.minus, part.plus, part.n) == ((0,), (1,), 1)


def test_minus_one_is_not_generic():
    F = FieldSpec(2, ())
    G = FgAbelianGroup(0, (2,))
    d = build_datum(G, G.gens(), [Character(G, [F(-1)])], [[2]], F, require_qJ=False)
    assert is_generic(d) == (False, 0)


def test_twist_matrix_across_components():
    F = FieldSpec(1, ("t1", "t2"))
    t1, t2 = F.var("t1"), F.var("t2")
    G = FgAbelianGroup(2)
    chi = [Character(G, [t1 ** 2, t2.inverse()]), Character(G, [t2, t1 ** 2])]
    d = build_datum(G, G.gens(), chi, [[2, 0], [0, 2]], F)
    q2 = twist_matrix(d)
    assert q2[0][1].is_zero() and q2[1][0].is_zero()
    b2 = dj_datum("B2")
    tw = twist_matrix(b2)
    for i in range(2):
        for j in range(2):
            assert b2.q[i][j] * b2.q[j][i] == tw[i][j] * tw[j][i]


def test_reduced_datum_projects_to_itself():
    d, lam = uqsl("A1").doubled()
    part = bipartite_partition(d, lam)
    dp, lamp, pi = project_datum(d, lam, part)
    assert pi.t == (0, 1) and not pi.killed()
    assert dp.q == d.q


def test_one_link_between_a2_components():
    # a2 x a2, last vertex of the first linked to the first of the second
    from pointedhopf.cartan import block_diagonal
    from pointedhopf.datum import datum_from_exponents
    cart = block_diagonal(cartan_of_type("A2"), cartan_of_type("A2"))
    B = braiding_exponents(cart, [2, 2, -2, -2], [(1, 2)])
    F = FieldSpec(1, ("t1",))
    d = datum_from_exponents(B, cart, F, F.var("t1"))
    lam = validate_linking(d, {(1, 2): 1})
    dp, lamp, pi = project_datum(d, lam, bipartite_partition(d, lam))
    assert dp.theta == 2 and dp.cartan.is_diagonal()
    assert lamp.linked_pairs() == [(0, 1)]
    assert pi.killed() == [0, 3]


def test_preset_scalars():
    r = uqsl("A1")
    q = r.field.var("t1")
    assert r.qij(0, 0) == q ** 2
    assert r.chi[0](r.K[0]) == q ** 2
    assert r.l[0] == q ** 2 / (q - q.inverse())
    b = benkart_gl(1)
    rr, ss = b.field.var("t1"), b.field.var("t2")
    assert b.qij(0, 0) == rr / ss
    assert b.q_J(0) is None
    assert not (b.K[0] * b.L[0]).is_identity()
