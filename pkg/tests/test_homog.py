import itertools
import json

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from oracles import tensor_gen, to_sympy
from qsymalg.exactalg import ONE, ZERO, q_power
from qsymalg.freeword import FreeElement
from qsymalg.homog import (
    check_splitting,
    homog_report,
    induce,
    invariant_closure_check,
    invariant_subalgebra_basis,
    invariant_subalgebra_dims,
    oqsl2_build,
    pairing_check,
    product_laws_check,
    roundtrip_check,
    translate,
    translations_commute,
)

O = oqsl2_build()
Q, QI = q_power(1), q_power(-1)
A, B, C, D = ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
ONE_M = (0, 0, 0, 0)


def test_quantum_determinant_is_one():
    qdet = FreeElement({(0, 3): ONE, (1, 2): -QI})
    assert O.normalize(qdet) == O.one()


def test_da_normal_form():
    # da = ad + (q - q^-1) bc and ad = 1 + q^-1 bc
    assert O.normalize_word((3, 0)) == {ONE_M: ONE, (0, 1, 1, 0): Q}


def _dense_pairing(w, xs):
    """<t_{I,J}, x_1 ... x_r> from dense matrices of the x's on V^(x)r."""
    r = len(w)
    I, J = [g // 2 for g in w], [g % 2 for g in w]
    M = sympy.eye(2 ** r)
    for x in xs:
        M = M * tensor_gen(x, r)
    row = sum(i * 2 ** (r - 1 - p) for p, i in enumerate(I))
    col = sum(j * 2 ** (r - 1 - p) for p, j in enumerate(J))
    return M[row, col]


@given(st.lists(st.integers(0, 3), min_size=1, max_size=3).map(tuple),
       st.lists(st.sampled_from("efk"), max_size=3).map(tuple))
def test_pairing_of_normal_form_matches_raw_word(w, xs):
    """The pairing factors through the relations: nf(w) and w pair the same way."""
    got = O.pair(O.normalize_word(w), tuple((x, 0) for x in xs))
    assert sympy.simplify(to_sympy(got) - _dense_pairing(w, xs)) == 0


def test_pairing_check_is_clean():
    assert pairing_check(O) == []


def test_translations_on_generators():
    assert translate("R", "k", O.gen("a")) == {A: Q}
    assert translate("L", "k", O.gen("a")) == {A: QI}
    assert translate("R", "e", O.gen("b")) == {A: ONE}
    assert translate("R", "e", O.gen("a")) == {}
    assert translate("R", "e", O.one()) == {}
    assert translate("L", "kinv", O.one()) == O.one()
    with pytest.raises(ValueError):
        translate("M", "k", O.one())


def test_weights_of_monomials():
    for m in O.basis(3):
        assert O.R(("k", 0), {m: ONE}) == {m: q_power(O.right_weight(m))}
        assert O.L(("k", 0), {m: ONE}) == {m: q_power(O.left_weight(m))}


def test_translation_laws():
    assert product_laws_check(O, N=1) == []
    assert translations_commute(2, O)


def test_invariant_subalgebra():
    basis = invariant_subalgebra_basis(2, O)
    assert sorted(next(iter(f)) for f in basis) == sorted([ONE_M, (0, 1, 1, 0), (0, 1, 0, 1), (1, 0, 1, 0)])
    assert invariant_subalgebra_dims(4, O) == [1, 1, 4, 4, 9]
    assert invariant_closure_check(4, O)


def _oracle_slice_size(m, N):
    """Normal monomials of length <= N with left weight -m, counted directly."""
    return sum(1 for mono in itertools.product(range(N + 1), repeat=4)
               if sum(mono) <= N and mono[0] * mono[3] == 0
               and (mono[2] + mono[3]) - (mono[0] + mono[1]) == -m)


@pytest.mark.parametrize("m", range(-3, 4))
def test_induced_module_sizes(m):
    assert len(induce(m, 3, O)) == _oracle_slice_size(m, 3)


def test_induce_rejects_large_weight():
    with pytest.raises(ValueError):
        induce(5, 3, O)


def test_splitting_and_negative_control():
    good = check_splitting(2, O)
    assert good["pass"] and good["injective"] and good["surjective_up_to_shift"]
    bad = check_splitting(2, O, corrupt=True)
    assert not bad["pass"]


@pytest.mark.parametrize("m", range(-2, 3))
def test_roundtrip(m):
    res = roundtrip_check(m, 3, O)
    assert res["pass"] and res["dim_M0"] == 1 and res["M0_weight"] == m
    assert res["delta_hat_identity"] and res["ev_kills_IM"]


def test_report_is_json():
    rep = homog_report()
    json.dumps(rep)
    assert rep["splitting"] == {"2": True, "4": True}
    assert rep["splitting_negative_control"] is False
    assert all(rep["roundtrip"].values())


monos = st.sampled_from(O.basis(2))


@given(monos, monos, monos)
def test_multiplication_is_associative(x, y, z):
    fx, fy, fz = {x: ONE}, {y: ONE}, {z: ONE}
    assert O.mul(O.mul(fx, fy), fz) == O.mul(fx, O.mul(fy, fz))


@given(monos, st.sampled_from(["e", "f", "k"]), st.sampled_from(["e", "f", "k"]))
def test_left_and_right_translations_commute(m, x, y):
    f = {m: ONE}
    assert translate("L", x, translate("R", y, f)) == translate("R", y, translate("L", x, f))


@given(monos)
def test_counit_is_a_character(m):
    f = {m: ONE}
    for g in "abcd":
        assert O.counit(O.mul(f, O.gen(g))) == O.counit(f) * O.counit(O.gen(g))
    # (eps (x) id) Delta = id
    acc = {}
    for (m1, m2), c in O.coproduct(f).items():
        e = O.counit({m1: ONE})
        if e != ZERO:
            acc[m2] = acc.get(m2, ZERO) + c * e
    assert {k: v for k, v in acc.items() if v != ZERO} == f
