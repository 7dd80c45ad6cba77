from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given
from hypothesis import strategies as st

from oracles import Q_SAMPLE, frac_rank, scalar_at, to_sympy
from qsymalg.exactalg import (
    ONE,
    ZERO,
    Scalar,
    ScalarParseError,
    SparseMatrix,
    format_scalar,
    kernel_basis,
    parse_scalar,
    q_integer,
    q_power,
    rank,
    row_reduce,
    signed_q_power,
    solve_in_span,
)

coeffs = st.lists(st.integers(-4, 4), min_size=1, max_size=4)


@st.composite
def scalars(draw):
    num = draw(coeffs)
    den = draw(coeffs.filter(lambda c: any(c)))
    return Scalar(num, den)


@st.composite
def matrices(draw, max_dim=4):
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    ent = {}
    for i in range(r):
        for j in range(c):
            if draw(st.booleans()):
                ent[(i, j)] = draw(st.sampled_from([ONE, -ONE, q_power(1), q_power(-1), q_power(1) - q_power(-1),
                                                    Scalar(2)]))
    return SparseMatrix(r, c, ent)


def _evaluable(*xs):
    return all(scalar_at(Scalar(x.den), Q_SAMPLE) != 0 for x in xs)


@given(scalars(), scalars(), scalars())
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a - a == ZERO
    if not a.is_zero():
        assert a * a.inverse() == ONE


@given(scalars(), scalars())
def test_evaluation_is_a_ring_map(a, b):
    assume(_evaluable(a, b))
    assert scalar_at(a + b) == scalar_at(a) + scalar_at(b)
    assert scalar_at(a * b) == scalar_at(a) * scalar_at(b)


@given(scalars())
def test_canonical_form_matches_sympy(a):
    assert sympy.simplify(to_sympy(a) - sympy.cancel(to_sympy(a))) == 0
    # equal scalars have equal hashes
    b = Scalar(a.num * 3, a.den * 3)
    assert a == b and hash(a) == hash(b)


@given(scalars())
def test_format_parse_roundtrip(a):
    assert parse_scalar(format_scalar(a)) == a


def test_parse_examples():
    q = q_power(1)
    assert parse_scalar("q - q^-1") == q - q.inverse()
    assert parse_scalar("-(q^2+q)") == -(q * q + q)
    assert parse_scalar("1/(q+1)") == ONE / (q + ONE)
    assert parse_scalar("3") == Scalar(3)
    with pytest.raises(ScalarParseError):
        parse_scalar("q +* 2")
    with pytest.raises(ScalarParseError):
        parse_scalar("1/(q-q)")


@pytest.mark.parametrize("n", range(1, 7))
def test_q_integer_is_symmetric_sum(n):
    expected = sum((q_power(n - 1 - 2 * k) for k in range(n)), ZERO)
    assert q_integer(n) == expected


def test_signed_q_power():
    assert signed_q_power(-q_power(-3)) == (-1, -3)
    assert signed_q_power(q_power(2)) == (1, 2)
    assert signed_q_power(q_power(1) + ONE) is None


@given(matrices())
def test_rank_matches_sympy_over_qq(M):
    S = sympy.Matrix(M.rows, M.cols, lambda i, j: to_sympy(M[i, j]))
    assert rank(M) == S.rank(simplify=True)
    assert rank(M) == rank(M.transpose())


@given(matrices())
def test_kernel_vectors_are_annihilated(M):
    ker = kernel_basis(M)
    assert len(ker) == M.cols - rank(M)
    for v in ker:
        for row in M.row_dicts():
            assert sum((c * v[j] for j, c in row.items()), ZERO) == ZERO


@given(matrices())
def test_row_reduce_is_reduced_echelon(M):
    rows, pivots = row_reduce(M.row_dicts())
    assert len(rows) == rank(M)
    for r, p in zip(rows, pivots):
        assert r[p] == ONE
        assert min(r) == p
        for r2, p2 in zip(rows, pivots):
            if r2 is not r:
                assert p not in r2


@given(matrices())
def test_specialised_rank_never_exceeds_generic(M):
    rows = []
    for r in M.row_dicts():
        rows.append({j: scalar_at(v) for j, v in r.items()})
    assert frac_rank(rows) <= rank(M)


def test_solve_in_span():
    q = q_power(1)
    rows = [{0: ONE, 1: q}, {1: ONE, 2: ONE}]
    target = {0: Scalar(2), 1: 2 * q + 3, 2: Scalar(3)}
    coeffs = solve_in_span(rows, target)
    assert coeffs == [Scalar(2), Scalar(3)]
    assert solve_in_span(rows, {2: ONE, 0: ONE}) is None


def test_kron_and_product():
    A = SparseMatrix.from_dense([[1, 2], [0, 1]])
    B = SparseMatrix.from_dense([[0, 1], [1, 0]])
    K = A.kron(B)
    assert K[0, 1] == ONE and K[1, 2] == Scalar(2) and K.rows == 4
    assert (A @ SparseMatrix.identity(2)) == A
    assert Fraction(1) == scalar_at(ONE)
