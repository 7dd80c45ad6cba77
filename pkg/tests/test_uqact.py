import itertools
import random

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from oracles import hook_dim, sl2_clebsch_gordan, tensor_gen, to_sympy
from qsymalg.exactalg import ONE, SparseMatrix, q_power
from qsymalg.freeword import FreeElement
from qsymalg.quadratic import QuadraticAlgebra, SpecError, graded_dim, quantum_matrices, quantum_plane, so_even
from qsymalg.uqact import (
    act_element,
    act_on_tensor,
    action_from_spec,
    action_preset,
    action_to_spec,
    check_antipode,
    check_relations_submodule,
    check_uq_relations,
    component_rep,
    decompose_semisimple,
    hom_action,
    invariants_of_degree,
    irreducible_character,
    is_hom_invariant,
    module_algebra_check,
    sl2_natural,
    sln_natural,
    so4_natural,
    tensor_rep,
    weyl_dimension,
)

QP = quantum_plane(2)


def dense(M: SparseMatrix):
    return sympy.Matrix(M.rows, M.cols, lambda i, j: to_sympy(M[i, j]))


@pytest.mark.parametrize("kind", ["e", "f", "k"])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_tensor_action_matches_dense_oracle(kind, n):
    got = dense(act_on_tensor(sl2_natural(), (kind, 0), n))
    assert sympy.simplify(got - tensor_gen(kind, n)) == sympy.zeros(2 ** n, 2 ** n)


def test_act_element_agrees_with_tensor_matrix():
    spec = sl2_natural()
    M = act_on_tensor(spec, ("f", 0), 3)
    for j, w in enumerate(itertools.product(range(2), repeat=3)):
        img = act_element(spec, ("f", 0), FreeElement.word(w))
        col = {i: c for (i, jj), c in M.entries.items() if jj == j}
        assert {sum(g * 2 ** (2 - p) for p, g in enumerate(u)): c for u, c in img.terms.items()} == col


@pytest.mark.parametrize("spec", [sl2_natural(), sln_natural(3), so4_natural(), action_preset("sln-columns(2,2)")])
def test_uq_relations_hold_on_tensor_powers(spec):
    for n in (1, 2):
        assert check_uq_relations(spec, tensor_rep(spec, n)) == []
    assert check_antipode(spec) == []


def test_broken_action_is_caught():
    spec = sl2_natural()
    bad = action_from_spec({**action_to_spec(spec), "E": [[[0, 1, "2"]]]})
    assert check_uq_relations(bad, tensor_rep(bad, 1)) == ["[e1, f1]"]


def test_relation_space_submodules():
    assert check_relations_submodule(QP, sl2_natural()).passed
    assert check_relations_submodule(quantum_matrices(2, 2), action_preset("sln-columns(2,2)")).passed
    assert check_relations_submodule(so_even(2), so4_natural()).passed
    xx = QuadraticAlgebra(["x", "y"], [FreeElement.word((0, 0))])
    res = check_relations_submodule(xx, sl2_natural())
    assert not res.passed and res.to_dict()["generator"] is not None


def test_module_algebra_law():
    assert module_algebra_check(QP, sl2_natural(), 5).passed
    assert module_algebra_check(quantum_matrices(2, 2), action_preset("sln-columns(2,2)"), 3).passed
    # the q = 1 plane is not a module algebra for the quantum action
    comm = QuadraticAlgebra(["x", "y"], [FreeElement({(1, 0): ONE, (0, 1): -ONE})])
    assert not module_algebra_check(comm, sl2_natural(), 3).passed


@pytest.mark.parametrize("n", range(0, 6))
def test_quantum_plane_components_are_irreducible(n):
    rep = component_rep(QP, sl2_natural(), n)
    dec = decompose_semisimple(sl2_natural(), rep)
    assert dec.ok and dec.multiplicities == {(n,): 1}
    assert rep.dim == graded_dim(QP, n)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_tensor_powers_follow_clebsch_gordan(n):
    rep = tensor_rep(sl2_natural(), n)
    dec = decompose_semisimple(sl2_natural(), rep)
    mult = {1: 1}
    for _ in range(n - 1):
        new = {}
        for lam, m in mult.items():
            for mu, k in sl2_clebsch_gordan(lam, 1).items():
                new[mu] = new.get(mu, 0) + m * k
        mult = new
    expected = {(lam,): m for lam, m in mult.items()}
    assert dec.multiplicities == expected


def test_quantum_matrices_degree_two_under_columns():
    A = quantum_matrices(2, 2)
    rep = component_rep(A, action_preset("sln-columns(2,2)"), 2)
    dec = decompose_semisimple([2], rep)
    assert dec.ok and dec.multiplicities == {(2,): 3, (0,): 1}


def test_invariants():
    assert [invariants_of_degree(QP, sl2_natural(), n).dim for n in range(5)] == [1, 0, 0, 0, 0]
    A = quantum_matrices(2, 2)
    inv = invariants_of_degree(A, action_preset("sln-columns(2,2)"), 2)
    qdet = FreeElement({(0, 3): ONE, (1, 2): -q_power(-1)})
    assert inv.dim == 1 and inv.contains(qdet)


@pytest.mark.parametrize("lam", [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (2, 1), (3, 2)])
def test_weyl_dimension_matches_hook_formula(lam):
    a, b = lam
    assert weyl_dimension([3], lam) == hook_dim((a + b, b, 0))
    assert sum(irreducible_character([3], lam).values()) == hook_dim((a + b, b, 0))


def test_characters():
    adj = irreducible_character([3], (1, 1))
    assert adj[(0, 0)] == 2 and len(adj) == 7
    assert irreducible_character([2, 2], (1, 1)) == {(1, 1): 1, (1, -1): 1, (-1, 1): 1, (-1, -1): 1}
    with pytest.raises(ValueError):
        weyl_dimension([2], (-1,))


def test_hom_action_on_identity_and_swap():
    spec = sl2_natural()
    V = tensor_rep(spec, 1)
    I = SparseMatrix.identity(2)
    assert is_hom_invariant(I, V, V)
    swap = SparseMatrix(2, 2, {(0, 1): ONE, (1, 0): ONE})
    assert not is_hom_invariant(swap, V, V)
    assert hom_action(("k", 0), I, V, V) == I


def test_hom_action_is_a_representation():
    # [e, f] acts on Hom(V, V) as (k - k^-1)/(q - q^-1)
    spec = sl2_natural()
    V = tensor_rep(spec, 1)
    rng = random.Random(3)
    phi = SparseMatrix(2, 2, {(i, j): q_power(rng.randint(-2, 2)) for i in range(2) for j in range(2)})
    e = lambda m: hom_action(("e", 0), m, V, V)  # noqa: E731
    f = lambda m: hom_action(("f", 0), m, V, V)  # noqa: E731
    k = lambda m: hom_action(("k", 0), m, V, V)  # noqa: E731
    ki = lambda m: hom_action(("kinv", 0), m, V, V)  # noqa: E731
    lhs = e(f(phi)) - f(e(phi))
    rhs = (k(phi) - ki(phi)).scale((q_power(1) - q_power(-1)).inverse())
    assert lhs == rhs


def test_spec_roundtrip_and_errors():
    for spec in (sl2_natural(), so4_natural(), action_preset("sln-columns(2,2)")):
        back = action_from_spec(action_to_spec(spec))
        assert back.E == spec.E and back.K == spec.K and back.blocks == spec.blocks
    for bad in ({"dimension": "x"}, {"dimension": 2, "E": "no"}, [1, 2],
                {"dimension": 2, "E": [[[0, 5, "1"]]], "F": [[]], "K": [[[0, 0, "1"], [1, 1, "1"]]]}):
        with pytest.raises(SpecError):
            action_from_spec(bad)
    with pytest.raises(SpecError):
        action_preset("sl7-natural")
    with pytest.raises(SpecError):
        component_rep(QP, sln_natural(3), 1)


def test_weights():
    assert sl2_natural().weights() == [(1,), (-1,)]
    assert so4_natural().weights() == [(1, 1), (1, -1), (-1, 1), (-1, -1)]


words = st.lists(st.integers(0, 1), max_size=5).map(tuple)


@given(words, words, st.sampled_from(["e", "f", "k"]))
def test_action_on_tensor_algebra_is_multiplicative(u, v, kind):
    """x(uv) = sum (x1 u)(x2 v) already in T(V), with the coproduct written out here."""
    spec = sl2_natural()
    U, V = FreeElement.word(u), FreeElement.word(v)
    lhs = act_element(spec, (kind, 0), U * V)
    if kind == "e":
        rhs = act_element(spec, ("e", 0), U) * act_element(spec, ("k", 0), V) + U * act_element(spec, ("e", 0), V)
    elif kind == "f":
        rhs = act_element(spec, ("f", 0), U) * V + act_element(spec, ("kinv", 0), U) * act_element(spec, ("f", 0), V)
    else:
        rhs = act_element(spec, ("k", 0), U) * act_element(spec, ("k", 0), V)
    assert lhs == rhs


@given(st.lists(st.integers(0, 3), min_size=1, max_size=3).map(tuple))
def test_k_acts_by_weight_on_words(w):
    spec = so4_natural()
    weights = spec.weights()
    img = act_element(spec, ("k", 1), FreeElement.word(w))
    total = sum(weights[g][1] for g in w)
    assert img == FreeElement({w: q_power(total)})
