import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qaffine.algebra import E, F, Gen, K, Kinv
from qaffine.cartan import catalog
from qaffine.linalg import rank_at_random_points, scalar_rank
from qaffine.scalars import ONE, ZERO, Scalar, qbracket, qpow
from qaffine.verma import (
    HighestWeightModule,
    ResourceLimit,
    TensorModule,
    act_element,
    character_json,
    classical_action_check,
    compositions,
    odd_string_closed_form,
    tensor_act,
    verify_relations,
)

B01 = catalog("B1_0_1")
VPLUS = {(): ONE}


def mod(labels, name="B1_0_1", **kw):
    return HighestWeightModule(catalog(name), labels, **kw)


# --- generator actions ---------------------------------------------------------------


def test_act_f():
    m = mod((1, 0))
    assert m.act_f(1, VPLUS) == {(1,): ONE}
    assert m.act_f(0, {(1,): ONE}) == {(0, 1): ONE}
    two = {(1,): ONE, (0,): Scalar.const(3)}
    assert m.act_f(1, two) == {(1, 1): ONE, (1, 0): Scalar.const(3)}


def test_act_k_and_d():
    m = mod((2, 2))
    for i in range(2):
        assert m.act_k(i, VPLUS) == {(): qpow(m._lam_pair[i])}
    assert m.act_d(VPLUS) == {}
    assert m.act_d({(0, 1, 0): ONE}) == {(0, 1, 0): Scalar.const(-2)}


@given(st.lists(st.integers(0, 1), max_size=6), st.integers(0, 1))
@settings(max_examples=50, deadline=None)
def test_k_eigenvalue_matches_weight(word, i):
    m = mod((1, 2))
    counts = m.word_counts(tuple(word))
    expect = qpow(m.weight_pairing(counts, i))
    assert m.act_k(i, {tuple(word): ONE}) == {tuple(word): expect}


def test_act_e_examples():
    m = mod((1, 2))
    assert m.act_e(0, {(1,): ONE}) == {}
    assert m.act_e(1, {(1,): ONE}) == {(): qbracket(m._lam_pair[1], 1)}


def test_act_e_odd_sign():
    d = catalog("C2_2")
    assert d.theta == frozenset({0, 1})
    m = HighestWeightModule(d, (2, 2))
    got = m.act_e(1, {(0, 1): ONE})
    assert got == {(0,): -qbracket(m._lam_pair[1], d.eps[1])}


def test_commutator_on_vplus():
    m = mod((1, 2))
    for i in range(2):
        for j in range(2):
            sign = -1 if (i == j == 1) else 1
            x = E(i) * F(j) - (F(j) * E(i)).scale(Scalar.const(sign))
            got = act_element(m, x, VPLUS)
            want = {(): qbracket(m._lam_pair[i], B01.eps[i])} if i == j else {}
            assert got == want


def test_k_kinv_identity():
    m = mod((1, 2))
    w = {(0, 1, 1): ONE, (1, 0, 1): Scalar.const(2)}
    assert act_element(m, K(0) * Kinv(0), w) == w


# --- weight spaces and the form ------------------------------------------------------


def test_weight_basis_examples():
    m = mod((1, 0))
    assert m.weight_basis(depth=0) == [()]
    assert m.weight_basis((1, 1)) == [(0, 1), (1, 0)]
    assert m.weight_basis((0, 2)) == [(1, 1)]


def test_gram_top():
    g = mod((2, 2)).gram((0, 0))
    assert g.matrix == [[ONE]] and g.rank == 1


def test_gram_odd_label_two_radical():
    g = mod((0, 2)).gram((0, 3))
    assert g.rank < g.size


def test_gram_odd_label_one_never_degenerates():
    m = mod((0, 1))
    for k in range(1, 7):
        assert m.gram((0, k)).rank == 1


@pytest.mark.parametrize("labels", [(1, 0), (0, 2), (1, 2), (2, 2)])
def test_gram_symmetric(labels):
    m = mod(labels)
    for c in compositions(2, 3) + compositions(2, 4):
        assert m.gram_is_symmetric(c)


def test_gram_symmetric_two_odd_nodes():
    m = HighestWeightModule(catalog("C2_2"), (2, 2))
    for c in compositions(2, 4):
        assert m.gram_is_symmetric(c)


@pytest.mark.parametrize("name, labels", [("B1_0_1", (1, 2)), ("B1_0_1", (2, 2)), ("B1_0_2", (1, 0, 2)), ("C2_2", (2, 2))])
def test_rank_matches_random_point_oracle(name, labels):
    m = mod(labels, name)
    rng = random.Random(7)
    for h in range(1, 5):
        for c in compositions(len(labels), h):
            g = m.gram(c)
            assert g.rank == rank_at_random_points(g.matrix, rng, samples=3)


@pytest.mark.parametrize("name, labels", [("B1_0_1", (2, 2)), ("B1_0_2", (1, 0, 2)), ("A2_0_3", (1, 0, 2))])
def test_reduced_spanning_set_matches_full_gram(name, labels):
    m = mod(labels, name)
    full = mod(labels, name)
    for h in range(5):
        for c in compositions(len(labels), h):
            assert m.multiplicity(c) == full.full_rank_multiplicity(c)


def test_character_examples():
    assert {c: v for c, v in mod((0, 0)).character(4).items() if v} == {(0, 0): 1}
    ch = mod((1, 0)).character(3)
    assert ch[(0, 1)] == 0
    for labels in [(1, 0), (0, 2), (3, 4)]:
        assert mod(labels).character(2)[(0, 0)] == 1


def test_character_json_schema():
    doc = character_json(mod((1, 0)), 3)
    assert list(doc) == ["algebra", "highest_weight_labels", "lambda0_coeff", "depth", "entries"]
    keys = [(sum(e["alpha_coords"]), e["alpha_coords"]) for e in doc["entries"]]
    assert keys == sorted(keys)
    assert doc["lambda0_coeff"] == "1"


def test_resource_limit_carries_partial():
    m = mod((2, 2), max_space=3)
    with pytest.raises(ResourceLimit) as info:
        m.character(6)
    assert info.value.partial[(0, 0)] == 1


# --- integrability ---------------------------------------------------------------------


@pytest.mark.parametrize("label", range(5))
def test_nilpotency_even_node(label):
    assert mod((label, 0)).nilpotency_index(0) == label + 1


@pytest.mark.parametrize("k", [0, 2, 4, 6])
def test_nilpotency_odd_node(k):
    assert mod((0, k)).nilpotency_index(1) == k + 1


@pytest.mark.parametrize("k", [1, 3, 5])
def test_nilpotency_odd_label_sentinel(k):
    assert mod((0, k)).nilpotency_index(1, m_max=8) is None


def test_nilpotency_trivial():
    for i in range(2):
        assert mod((0, 0)).nilpotency_index(i) == 1


def test_string_coefficient_closed_form():
    for label in range(5):
        m = mod((0, label))
        lam = m._lam_pair[1]
        for k in range(6):
            assert m.string_coefficient(1, k + 1) == odd_string_closed_form(lam, k)


# --- relations, classical limit, tensor -------------------------------------------------


def test_relations_depth3():
    rep = verify_relations(mod((1, 2)), 3)
    assert rep.passed, rep.counterexample
    assert rep.details["exact_zero"] > 0


def test_relation_negative_control():
    from qaffine.algebra import Relation, serre_element
    bad = serre_element(B01, 0, 1, "e") + (E(0) * E(1)).scale(ONE)
    rep = verify_relations(mod((1, 2)), 3, [Relation("broken", 0, 1, bad, "serre_e")])
    assert not rep.passed


def test_classical_check_examples():
    assert classical_action_check(B01, (0, 0), 3).passed
    assert classical_action_check(B01, (1, 0), 4).passed


def test_tensor_k_diagonal():
    a, b = mod((1, 0)), mod((0, 2))
    u, w = {(1,): ONE}, {(0,): ONE}
    got = tensor_act(a, b, Gen("k", 1), u, w)
    expect = qpow(a.weight_pairing((0, 1), 1) + b.weight_pairing((1, 0), 1))
    assert got == {((1,), (0,)): expect}


def test_tensor_trivial_modules():
    t = TensorModule(mod((0, 0)), mod((0, 0)))
    assert verify_relations(t, 0).passed


def test_tensor_small_modules_depth2():
    t = TensorModule(mod((1, 0)), mod((0, 2)))
    assert verify_relations(t, 2).passed


def test_tensor_needs_kinv_in_f():
    t = TensorModule(mod((1, 0)), mod((0, 2)), k_in_f=False)
    assert not verify_relations(t, 2).passed
