import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import frac_rank, graded_dims, omat_rel, quantum_plane_rel, scalar_at, x_squared_rel
from qsymalg.exactalg import ONE, q_power
from qsymalg.freeword import FreeElement, ideal_component, ideal_component_recursive, span_reduce, words_of_degree
from qsymalg.quadratic import (
    FilteredAlgebra,
    QuadraticAlgebra,
    RewriteError,
    SpecError,
    algebra_from_spec,
    algebra_preset,
    algebra_to_spec,
    associated_graded,
    confluent_order,
    free_algebra,
    graded_dim,
    multiply,
    normal_form,
    normal_words,
    pbw_check,
    quantum_matrices,
    quantum_plane,
    rees_algebra,
    search_pbw_orders,
    so_even,
    weyl_q,
)

Q = q_power(1)
QI = q_power(-1)


def xx_algebra():
    return QuadraticAlgebra(["x", "y"], [FreeElement.word((0, 0))], name="xx")


@pytest.mark.parametrize(
    "make, oracle_rel, d, N",
    [
        (lambda: quantum_plane(2), quantum_plane_rel(), 2, 6),
        (lambda: quantum_plane(3), quantum_plane_rel(n=3), 3, 4),
        (lambda: quantum_matrices(2, 2), omat_rel(), 4, 4),
        (xx_algebra, x_squared_rel(), 2, 5),
    ],
)
def test_graded_dims_agree_with_specialised_oracle(make, oracle_rel, d, N):
    A = make()
    assert [graded_dim(A, n) for n in range(N + 1)] == graded_dims(oracle_rel, d, N)


def test_recursive_ideal_matches_direct():
    A = quantum_matrices(2, 2)
    for n in (2, 3, 4):
        assert ideal_component_recursive(A.relations, n) == ideal_component(A.relations, n)


def test_quantum_plane_normal_form():
    A = quantum_plane(2)
    yx = FreeElement.word((1, 0))
    assert normal_form(A, None, yx) == FreeElement({(0, 1): Q})


def test_quantum_matrix_cross_relation():
    # x22 x11 = x11 x22 + (q - q^-1) x12 x21
    A = quantum_matrices(2, 2)
    got = normal_form(A, None, FreeElement.word((3, 0)))
    assert got == FreeElement({(0, 3): ONE, (1, 2): Q - QI})


def test_weyl_q_inhomogeneous_normal_form():
    W = weyl_q()
    rw = W.rewriter()
    got = rw.normal_form(FreeElement.word((1, 1, 0)))
    assert got == FreeElement({(0, 1, 1): Q * Q, (1,): -(Q * Q + Q)})


def test_pbw_flat_examples():
    assert pbw_check(quantum_plane(2), N=8).label == "flat up to degree 8"
    assert pbw_check(quantum_matrices(2, 2), N=5).flat
    assert pbw_check(so_even(2), N=5).flat
    assert pbw_check(quantum_plane(3), N=4).flat


def test_pbw_counterexample_has_witness():
    res = pbw_check(xx_algebra(), N=2)
    assert not res.flat and res.failing_degree == 2
    assert res.witness == FreeElement.word((0, 0))
    d = res.to_dict(["x", "y"])
    assert d["witness"] == [{"coefficient": "1", "word": ["x", "x"]}]


def test_pbw_rejects_small_N():
    with pytest.raises(ValueError):
        pbw_check(quantum_plane(2), N=1)


def test_so_even_two_has_six_relations():
    A = so_even(2)
    assert A.relations.dim == 6
    assert [graded_dim(A, n) for n in range(4)] == [1, 4, 10, 20]


def test_free_algebra_is_not_pbw():
    A = free_algebra(2)
    res = pbw_check(A, N=2)
    assert not res.flat and res.dims[2] == 4


def test_order_search_returns_flat_order():
    res = search_pbw_orders(quantum_matrices(2, 2), N=3, limit=3)
    assert res is not None and res.flat


def test_rewriting_guard():
    W = weyl_q()
    rw = W.rewriter(step_limit=3)
    with pytest.raises(RewriteError):
        rw.normal_form(FreeElement.word((1, 1, 1, 0, 0, 0)))


# --- filtered algebras and the Rees construction ----------------------------

def test_associated_graded_of_weyl_q_is_quantum_plane():
    assert associated_graded(weyl_q()).relations == quantum_plane(2).relations


def test_rees_specialisations():
    W = weyl_q()
    R = rees_algebra(W)
    assert QuadraticAlgebra(W.names, R.specialize(0)).relations == quantum_plane(2).relations
    assert R.specialize(1) == W.relations
    with pytest.raises(ValueError):
        R.specialize(2)
    # z is listed first so that ordered monomials put it on the left
    assert pbw_check(R.algebra, (R.z, 0, 1), 4).flat


# --- presets and spec files ---------------------------------------------------

def test_presets_parse():
    assert algebra_preset("quantum-plane").ngens == 2
    assert algebra_preset("quantum-plane(3)").ngens == 3
    assert algebra_preset("quantum-matrices(2, 3)").ngens == 6
    assert isinstance(algebra_preset("weyl-q"), FilteredAlgebra)
    for bad in ("nope", "quantum-matrices(2)", "so-even(x)", "so-even(1)", "quantum plane"):
        with pytest.raises(SpecError):
            algebra_preset(bad)


def test_spec_roundtrip():
    for A in (quantum_matrices(2, 2), so_even(2), weyl_q()):
        B = algebra_from_spec(algebra_to_spec(A))
        assert B.names == A.names
        if isinstance(A, FilteredAlgebra):
            assert B.relations == A.relations
        else:
            assert B.relations == A.relations


def test_spec_errors_carry_location():
    spec = {"generators": ["x", "y"], "relations": [[{"coefficient": "1", "word": ["x", "z"]}]]}
    with pytest.raises(SpecError, match=r"relations\[0\]\[0\]\.word"):
        algebra_from_spec(spec)
    spec = {"generators": ["x", "y"], "relations": [[{"coefficient": "q +", "word": ["x", "y"]}]]}
    with pytest.raises(SpecError, match="coefficient"):
        algebra_from_spec(spec)
    with pytest.raises(SpecError):
        algebra_from_spec({"generators": []})
    with pytest.raises(SpecError):
        QuadraticAlgebra(["x", "x"], [])


def test_inhomogeneous_spec_becomes_filtered():
    spec = {"generators": ["x", "y"],
            "relations": [[{"coefficient": "1", "word": "x y"}, {"coefficient": "-q^-1", "word": "y x"},
                           {"coefficient": "-1", "word": []}]]}
    A = algebra_from_spec(spec)
    assert isinstance(A, FilteredAlgebra)
    assert A.relations == weyl_q().relations


# --- properties ---------------------------------------------------------------

words = st.lists(st.integers(0, 3), min_size=0, max_size=5).map(tuple)
OMAT = quantum_matrices(2, 2)


@given(words)
def test_normal_form_is_idempotent_and_normal(w):
    rw = OMAT.rewriter()
    nf = rw.normal_form(FreeElement.word(w))
    assert rw.normal_form(nf) == nf
    allowed = set(normal_words(OMAT, len(w)))
    assert all(m in allowed for m in nf.terms)


@given(words, words, words)
def test_multiplication_is_associative(u, v, w):
    U, V, W = (FreeElement.word(x) for x in (u, v, w))
    assert multiply(OMAT, multiply(OMAT, U, V), W) == multiply(OMAT, U, multiply(OMAT, V, W))


@given(st.lists(st.integers(0, 3), min_size=2, max_size=4).map(tuple))
def test_word_minus_normal_form_lies_in_specialised_ideal(w):
    """Independent check: w - nf(w) is in the oracle's ideal at q = 7/3."""
    n = len(w)
    nf = OMAT.rewriter().normal_form(FreeElement.word(w))
    diff = {w: 1}
    for m, c in nf.terms.items():
        diff[m] = diff.get(m, 0) - scalar_at(c)
    rows = []
    for a in range(n - 1):
        for left in itertools.product(range(4), repeat=a):
            for right in itertools.product(range(4), repeat=n - 2 - a):
                for r in omat_rel():
                    rows.append({left + x + right: c for x, c in r.items()})
    assert frac_rank(rows + [diff]) == frac_rank(rows)


@given(st.permutations(range(4)))
def test_rewriter_exists_only_for_confluent_orders(order):
    # an ordered-monomial basis does not make the quadratic rules confluent
    order = tuple(order)
    try:
        rw = OMAT.rewriter(order)
    except RewriteError:
        return
    assert len(normal_words(OMAT, 3, order)) == graded_dim(OMAT, 3) == 20
    assert len(normal_words(OMAT, 4, order)) == 35
    assert rw.order == order


def test_non_confluent_order_is_refused():
    assert pbw_check(OMAT, (0, 3, 2, 1), 4).flat
    with pytest.raises(RewriteError, match="confluent"):
        OMAT.rewriter((0, 3, 2, 1))


def test_graded_subspace_equality_is_basis_free():
    a = FreeElement({(0, 1): ONE, (1, 0): -Q})
    b = FreeElement({(0, 1): Q * 2, (1, 0): -Q * Q * 2})
    assert span_reduce([a], 2, 2) == span_reduce([b], 2, 2)
    assert span_reduce([a], 2, 2) == span_reduce([b], 2, 2, order=(1, 0))
    assert span_reduce([a], 2, 2).contains(b)
    assert len(list(words_of_degree(3, 2))) == 9


def test_confluent_order_fallback():
    assert confluent_order(OMAT, (0, 3, 2, 1)) == (0, 1, 2, 3)
    assert confluent_order(OMAT, (3, 2, 1, 0)) == (3, 2, 1, 0)
    assert confluent_order(OMAT) is None
