import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qaffine.cartan import (
    AlgebraData,
    SpecError,
    Weight,
    catalog,
    catalog_families,
    catalog_names,
    dynkin_labels,
    from_json,
    integrable_dominant,
    pairing,
    partner_of,
    validate,
    weight_from_labels,
)

F = Fraction


def test_b01_data():
    d = catalog("B1_0_1")
    assert d.matrix == ((2, -1), (-4, 2))
    assert d.theta == frozenset({1})
    assert d.marks == (1, 2)
    assert d.d == (F(2), F(1, 2))
    assert d.eps == (2, 1)


@pytest.mark.parametrize("name", catalog_names())
def test_catalog_entry_validates(name):
    rep = validate(catalog(name))
    assert rep.passed, rep.failures


def test_catalog_size_and_families():
    names = catalog_names()
    assert len(names) == len(set(names)) == 40
    fams = catalog_families()
    assert sum(f["kind"] == "super" for f in fams) == 4
    assert sum(f["kind"] == "partner" for f in fams) == 5


@pytest.mark.parametrize("name, partner", [("B1_0_1", "A2_2"), ("B1_0_3", "A2_6"), ("C2_2", "A1_1"),
                                           ("C2_4", "D2_4"), ("A2_0_3", "C1_2"), ("A2_0_5", "B1_3")])
def test_partner_shares_cartan_data(name, partner):
    s = catalog(name)
    p = partner_of(s)
    assert p.name == partner
    assert (p.matrix, p.marks, p.d) == (s.matrix, s.marks, s.d)
    assert p.theta == frozenset()
    assert catalog(partner) == p


def test_a4_has_no_partner():
    with pytest.raises(ValueError, match="exceptional family, no partner"):
        partner_of(catalog("A4_0_2"))


def test_aliases():
    assert catalog("B", 2) == catalog("B1_0_2")
    assert catalog("A4", 1) == catalog("A4_0_2")


def test_rank_limit():
    with pytest.raises(ValueError):
        catalog("B1_0_7")


def test_validate_zero_pattern_violation():
    d = AlgebraData("bad", ((2, -1), (0, 2)), frozenset(), (1, 1), (F(1), F(1)))
    conds = {f["condition"] for f in validate(d).failures}
    assert "a_ij = 0 iff a_ji = 0" in conds


def test_validate_wrong_marks():
    base = catalog("B1_0_1")
    d = AlgebraData("bad", base.matrix, base.theta, (1, 1), base.d)
    fails = [f for f in validate(d).failures if f["condition"] == "sum_j a_ij a_j = 0"]
    assert fails[0]["i"] == 0 and fails[0]["value"] == 1


def test_validate_odd_row_rule():
    d = AlgebraData("bad", ((2, -1), (-1, 2)), frozenset({1}), (1, 1), (F(1, 2), F(1, 2)))
    conds = {f["condition"] for f in validate(d).failures}
    assert "a_ij even for i in theta" in conds


def test_pairing_examples():
    d = catalog("B1_0_1")
    l0 = Weight.lambda0(2)
    a0, a1 = Weight.simple_root(2, 0), Weight.simple_root(2, 1)
    assert pairing(d, l0, l0) == 0
    assert pairing(d, a0, a1) == -2
    assert pairing(d, a1, a1) == 1


@given(st.sampled_from(catalog_names()), st.data())
@settings(max_examples=40, deadline=None)
def test_pairing_symmetric(name, data):
    d = catalog(name)
    size = len(d.matrix)
    coords = st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=4), min_size=size + 1, max_size=size + 1)
    x, y = Weight(tuple(data.draw(coords))), Weight(tuple(data.draw(coords)))
    assert pairing(d, x, y) == pairing(d, y, x)
    for i in range(size):
        for j in range(size):
            assert pairing(d, Weight.simple_root(size, i), Weight.simple_root(size, j)) == d.d[i] * d.matrix[i][j]


def test_dynkin_label_examples():
    d = catalog("B1_0_1")
    assert dynkin_labels(d, Weight.zero(2)) == (0, 0)
    assert dynkin_labels(d, Weight.lambda0(2)) == (1, 0)
    assert dynkin_labels(d, Weight.simple_root(2, 1))[1] == 2


def test_integrable_examples():
    d = catalog("B1_0_1")
    assert integrable_dominant(d, Weight.zero(2))
    assert integrable_dominant(d, weight_from_labels(d, (1, 2)))
    assert not integrable_dominant(d, weight_from_labels(d, (1, 1)))


@given(st.sampled_from(catalog_names()), st.data())
@settings(max_examples=60, deadline=None)
def test_labels_roundtrip(name, data):
    d = catalog(name)
    labels = tuple(data.draw(st.lists(st.integers(0, 4), min_size=len(d.matrix), max_size=len(d.matrix))))
    lam = weight_from_labels(d, labels)
    assert dynkin_labels(d, lam) == labels
    assert lam.coords[1] == 0
    if integrable_dominant(d, lam) and d.is_super:
        for i in d.nodes:
            assert pairing(d, lam, Weight.simple_root(len(d.matrix), i)).denominator == 1
            for j in d.nodes:
                assert d.root_pairing[i][j].denominator == 1


def test_lambda0_must_agree():
    d = catalog("B1_0_1")
    assert weight_from_labels(d, (1, 0), lambda0=1).lambda0_coeff == 1
    with pytest.raises(ValueError):
        weight_from_labels(d, (1, 0), lambda0=2)


def test_spec_roundtrip():
    for name in ("B1_0_2", "A4_0_4", "C2_3"):
        d = catalog(name)
        back = from_json(json.dumps(d.to_json()))
        assert (back.matrix, back.theta, back.marks, back.d) == (d.matrix, d.theta, d.marks, d.d)


@pytest.mark.parametrize("text, field", [
    ('{"d": [1, 1]}', "matrix"),
    ('{"matrix": [[2, -1], [-1]], "d": [1, 1]}', "matrix"),
    ('{"matrix": [[2, -2], [-2, 2]]}', "d"),
    ('{"matrix": [[2, -2], [-2, 2]], "d": ["x", 1]}', "d"),
    ('{"matrix": [[2, -2], [-2, 2]], "d": [1, 1], "theta": [5]}', "theta"),
])
def test_spec_errors_name_field(text, field):
    with pytest.raises(SpecError) as info:
        from_json(text)
    assert info.value.field == field


def test_spec_json_error_has_line():
    with pytest.raises(SpecError) as info:
        from_json('{\n"matrix": [[2, -1],\n')
    assert info.value.line is not None


def test_marks_inferred():
    d = from_json('{"matrix": [[2, -2], [-2, 2]], "d": [1, 1]}')
    assert d.marks == (1, 1)
    assert validate(d).passed
