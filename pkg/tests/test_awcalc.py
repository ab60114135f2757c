import pytest

from artifact import checks
from artifact.awcalc import (El, Es, LabelClash, UnknownLabel, convert_ls, convert_sl, el_mul, es_dA_all,
                             es_deta, es_dm, es_hash, es_inverse, es_power, es_rename, es_stack,
                             es_union, h_eta, r_element, random_es, t_eta)


def test_r_element_shape():
    R = r_element(1, "x", "y")
    assert R.comp("y").part(1) == {"x": 1}
    assert not R.comp("x").part(1)
    with pytest.raises(LabelClash):
        r_element(1, "x", "x")


def test_r2_is_the_unit():
    lhs = es_stack(r_element(1, "x", "y"), r_element(-1, "x", "y"))
    assert all(lhs.eq(Es.unit("xy"), 6))


def test_stacking_with_the_unit():
    e = random_es("xy", 3)
    assert all(es_stack(e, Es.unit("xy")).eq(e, 5))
    assert all(es_stack(Es.unit("xy"), e).eq(e, 5))


def test_stacking_inverse_and_powers():
    e = random_es("xy", 4)
    assert all(es_stack(e, es_inverse(e)).eq(Es.unit("xy"), 5))
    assert all(es_stack(es_inverse(e), e).eq(Es.unit("xy"), 5))
    assert all(es_power(e, 2).eq(es_stack(e, e), 5))
    assert all(es_stack(es_power(e, -2), es_power(e, 2)).eq(Es.unit("xy"), 5))


def test_dm_then_eta():
    e = random_es("xyz", 5)
    # deleting the strand that was just merged in equals deleting it first
    a = es_deta(es_union(es_deta(e, "z"), Es.unit("z")), "z")
    assert all(a.eq(es_deta(e, "z"), 4))


def test_rename_swap_is_an_involution():
    e = random_es("xy", 6)
    sw = {"x": "y", "y": "x"}
    assert all(es_rename(es_rename(e, sw), sw).eq(e, 5))


def test_hash_of_unit():
    e = random_es("xy", 7, with_wheels=False)
    assert all(es_hash(e, Es.unit("xy")).eq(e, 5))


def test_label_errors():
    e = random_es("xy", 1)
    with pytest.raises(UnknownLabel):
        h_eta(e, "q")
    with pytest.raises(UnknownLabel):
        t_eta(e, "q")
    with pytest.raises(LabelClash):
        es_union(e, random_es("yz", 2))
    with pytest.raises(LabelClash):
        es_stack(e, random_es("xz", 2))
    with pytest.raises(UnknownLabel):
        es_dm(e, "x", "q", "x")


def test_json_roundtrip():
    e = random_es("xyz", 8)
    assert all(Es.from_json(e.to_json(4)).eq(e, 4))
    l = convert_sl(random_es("xy", 9))
    assert all(El.from_json(l.to_json(4)).eq(l, 4))


def test_presentations_roundtrip():
    e = random_es("xy", 10)
    assert all(convert_ls(convert_sl(e)).eq(e, 5))


def test_el_mul_matches_stack():
    a, b = random_es("xy", 11), random_es("xy", 12)
    assert all(convert_ls(el_mul(convert_sl(a), convert_sl(b))).eq(es_stack(a, b), 5))


def test_dA_fixes_pure_wheels():
    om = random_es("xy", 13).omega
    w = Es(Es.unit("xy").lam, om, "xy")
    assert all(es_dA_all(w).eq(w, 5))


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_property_suite(seed):
    rows = checks.property_suite(seed, 5)
    bad = {k: v for k, v in rows.items() if not all(v)}
    assert not bad


def test_roundtrip_check_helper():
    assert all(checks.es_to_el_roundtrip(3, 5))
