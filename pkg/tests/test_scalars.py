"""Exact field arithmetic, linear algebra, and Wedderburn decomposition."""

from __future__ import annotations

from fractions import Fraction

import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from twocat.scalars import (
    AssocAlgebra,
    FieldSpec,
    NotSemisimple,
    NotSplitOverField,
    ScalarMatrix,
    arith,
    cyclotomic_poly,
    decompose_semisimple_algebra,
    factor_poly,
    solve_linear,
)

from oracles import central_idempotents_bruteforce, group_algebra_blocks

Q = FieldSpec("cyclotomic", 1)
F3 = FieldSpec("cyclotomic", 3)
F4 = FieldSpec("cyclotomic", 4)
F5 = FieldSpec("cyclotomic", 5)
G2 = FieldSpec("prime", 2)
G3 = FieldSpec("prime", 3)

FIELDS = [Q, F3, F4, F5, G2, G3]


def test_cyclotomic_polynomials():
    assert cyclotomic_poly(1) == (-1, 1)
    assert cyclotomic_poly(2) == (1, 1)
    assert cyclotomic_poly(3) == (1, 1, 1)
    assert cyclotomic_poly(4) == (1, 0, 1)
    assert cyclotomic_poly(5) == (1, 1, 1, 1, 1)
    assert cyclotomic_poly(6) == (1, -1, 1)
    assert cyclotomic_poly(12) == (1, 0, -1, 0, 1)


def test_root_of_unity_relations():
    for n in (1, 2, 3, 4, 5, 6, 8, 12):
        f = FieldSpec("cyclotomic", n)
        z = f.zeta()
        acc = f.one()
        for _ in range(n):
            acc = acc * z
        assert acc.is_one()
        total = f.zero()
        for k in range(n):
            total = total + f.zeta(k)
        assert total.is_zero() if n > 1 else total.is_one()


@st.composite
def field_elements(draw, field=None):
    f = field if field is not None else draw(st.sampled_from(FIELDS))
    if f.kind == "prime":
        return f.from_int(draw(st.integers(0, f.conductor - 1)))
    coeffs = draw(st.lists(
        st.fractions(min_value=-4, max_value=4, max_denominator=6),
        min_size=f.degree, max_size=f.degree))
    return f.from_coeffs(coeffs)


@st.composite
def same_field_triple(draw):
    f = draw(st.sampled_from(FIELDS))
    return (draw(field_elements(field=f)), draw(field_elements(field=f)),
            draw(field_elements(field=f)))


@given(same_field_triple())
@settings(max_examples=60, deadline=None)
def test_field_axioms(triple):
    a, b, c = triple
    f = a.field
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a + f.zero() == a
    assert a * f.one() == a
    assert (a - a).is_zero()
    if not b.is_zero():
        assert ((a / b) * b) == a
        assert (b * b.inverse()).is_one()


@given(field_elements())
@settings(max_examples=60, deadline=None)
def test_literal_roundtrip(a):
    f = a.field
    assert f.parse(f.format(a)) == a


def test_literal_grammar():
    assert F5.parse("1/2*z^3 - 2") == \
        F5.zeta(3) * F5.from_fraction(Fraction(1, 2)) - F5.from_int(2)
    assert F4.parse("z^2") == F4.from_int(-1)
    assert Q.parse("-3/7") == Q.from_fraction(Fraction(-3, 7))
    assert G3.parse("-1") == G3.from_int(2)
    assert arith(F5.parse("z"), F5.parse("z^4"), "*").is_one()


def test_numeric_cross_check():
    # exact arithmetic agrees with floating-point roots of unity
    import cmath
    f = FieldSpec("cyclotomic", 12)
    a = f.parse("1/2*z^5 - 2 + z^2")
    z = cmath.exp(2j * cmath.pi / 12)
    expected = 0.5 * z**5 - 2 + z**2
    got = sum(complex(c) * z**k for k, c in enumerate(a.value))
    assert abs(got - expected) < 1e-12


@st.composite
def matrices(draw, field, rows, cols):
    return ScalarMatrix(field, [
        [draw(field_elements(field=field)) for _ in range(cols)] for _ in range(rows)])


@given(st.data())
@settings(max_examples=30, deadline=None)
def test_solve_linear_roundtrip(data):
    f = data.draw(st.sampled_from(FIELDS))
    rows = data.draw(st.integers(1, 4))
    cols = data.draw(st.integers(1, 4))
    A = data.draw(matrices(f, rows, cols))
    x = [data.draw(field_elements(field=f)) for _ in range(cols)]
    b = [sum((A[i, j] * x[j] for j in range(cols)), f.zero()) for i in range(rows)]
    sol = solve_linear(A, b)
    assert sol is not None
    bx = [sum((A[i, j] * sol.particular[j] for j in range(cols)), f.zero())
          for i in range(rows)]
    assert bx == b
    for k in sol.kernel:
        kk = [sum((A[i, j] * k[j] for j in range(cols)), f.zero()) for i in range(rows)]
        assert all(v.is_zero() for v in kk)
    assert len(sol.kernel) == cols - A.rank()


def test_solve_linear_inconsistent():
    A = ScalarMatrix(Q, [[Q.one()], [Q.one()]])
    assert solve_linear(A, [Q.one(), Q.zero()]) is None


def test_matrix_inverse_and_kron():
    M = ScalarMatrix(F5, [[F5.one(), F5.zeta()], [F5.zero(), F5.one()]])
    assert (M @ M.inverse()).is_identity()
    I2 = ScalarMatrix.identity(Q, 2)
    A = ScalarMatrix(Q, [[Q.from_int(1), Q.from_int(2)], [Q.from_int(3), Q.from_int(4)]])
    assert A.kron(I2).rank() == 4
    B = ScalarMatrix(Q, [[Q.from_int(5)]])
    assert A.kron(B).entries[1][0] == Q.from_int(15)
    C = ScalarMatrix(Q, [[Q.from_int(2), Q.zero()], [Q.zero(), Q.from_int(3)]])
    assert (A.kron(C)) @ (A.kron(C)) == (A @ A).kron(C @ C)


def test_factor_poly():
    # x^2 + x + 1 splits over Q(zeta_3), stays irreducible over Q and GF(2)
    fs = factor_poly(F3, [F3.one(), F3.one(), F3.one()])
    assert sorted(len(f) - 1 for f, _ in fs) == [1, 1]
    fs = factor_poly(Q, [Q.one(), Q.one(), Q.one()])
    assert [len(f) - 1 for f, _ in fs] == [2]
    fs = factor_poly(G2, [G2.one(), G2.one(), G2.one()])
    assert [len(f) - 1 for f, _ in fs] == [2]
    # multiplicity: (x-1)^2 over GF(3)
    fs = factor_poly(G3, [G3.one(), G3.from_int(-2), G3.one()])
    assert [(len(f) - 1, m) for f, m in fs] == [(1, 2)]
    # x^3 - 1 over GF(2): (x+1)(x^2+x+1)
    fs = factor_poly(G2, [G2.one(), G2.zero(), G2.zero(), G2.one()])
    assert sorted(len(f) - 1 for f, _ in fs) == [1, 2]


# ------------------------------------------------------------------ algebras

def group_algebra(field, table):
    n = len(table)
    z, o = field.zero(), field.one()
    struct = [[[z] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            struct[i][j][table[i][j]] = o
    return AssocAlgebra(field, struct)


Z2 = [[0, 1], [1, 0]]
Z3 = [[0, 1, 2], [1, 2, 0], [2, 0, 1]]
Z2Z2 = [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]]


def m2_algebra(field):
    idx = {(1, 1): 0, (1, 2): 1, (2, 1): 2, (2, 2): 3}
    z, o = field.zero(), field.one()
    st_ = [[[z] * 4 for _ in range(4)] for _ in range(4)]
    for (a, b), i in idx.items():
        for (c, d), j in idx.items():
            if b == c:
                st_[i][j][idx[(a, d)]] = o
    return AssocAlgebra(field, st_)


def test_find_unit_and_center():
    alg = group_algebra(Q, Z2)
    assert alg.find_unit() == [Q.one(), Q.zero()]
    assert len(alg.center_basis()) == 2
    m2 = m2_algebra(Q)
    assert m2.find_unit() == [Q.one(), Q.zero(), Q.zero(), Q.one()]
    assert len(m2.center_basis()) == 1
    assert m2.is_associative()


def test_wedderburn_m2_against_oracle():
    d = decompose_semisimple_algebra(m2_algebra(Q))
    assert [b.block_dim for b in d.blocks] == [2]
    oracle = central_idempotents_bruteforce(
        [[[sp.Integer(1) if (b == c and k == {(1, 1): 0, (1, 2): 1, (2, 1): 2, (2, 2): 3}[(a, dd)]) else sp.Integer(0)
           for k in range(4)]
          for (c, dd) in [(1, 1), (1, 2), (2, 1), (2, 2)]]
         for (a, b) in [(1, 1), (1, 2), (2, 1), (2, 2)]],
        [sp.Integer(1), 0, 0, sp.Integer(1)])
    assert len(oracle) == len(d.blocks)
    vec, corner = oracle[0]
    assert corner == d.blocks[0].block_dim ** 2
    got = [Fraction(str(c)) for c in vec]
    assert [Q.from_fraction(c) for c in got] == list(d.blocks[0].idempotent)


def test_wedderburn_group_algebras_against_oracle():
    for table, field in [(Z2, Q), (Z3, F3), (Z2Z2, Q)]:
        d = decompose_semisimple_algebra(group_algebra(field, table))
        oracle = group_algebra_blocks(table)
        assert len(d.blocks) == len(oracle)
        assert all(b.block_dim == 1 for b in d.blocks)
        if field is Q:
            mine = sorted(tuple(c.value[0] for c in b.idempotent) for b in d.blocks)
            theirs = sorted(tuple(Fraction(sp.Rational(v).p, sp.Rational(v).q)
                                  for v in vec) for vec in oracle)
            assert mine == theirs


def test_wedderburn_mixed_blocks_and_basis():
    field = Q
    z, o = field.zero(), field.one()
    # M2 + k on basis E11,E12,E21,E22,u
    idx = {(1, 1): 0, (1, 2): 1, (2, 1): 2, (2, 2): 3}
    st_ = [[[z] * 5 for _ in range(5)] for _ in range(5)]
    for (a, b), i in idx.items():
        for (c, d), j in idx.items():
            if b == c:
                st_[i][j][idx[(a, d)]] = o
    st_[4][4][4] = o
    d = decompose_semisimple_algebra(AssocAlgebra(field, st_))
    assert [b.block_dim for b in d.blocks] == [1, 2]
    cob = d.change_of_basis
    inv = cob.inverse()
    assert (cob @ inv).is_identity()


def test_unit_partition_localizes_rows():
    # k x k with partition {e1}, {e2}: each block row tagged with its part
    field = Q
    z, o = field.zero(), field.one()
    st_ = [[[z] * 2 for _ in range(2)] for _ in range(2)]
    st_[0][0][0] = o
    st_[1][1][1] = o
    alg = AssocAlgebra(field, st_)
    d = decompose_semisimple_algebra(alg, unit_partition=[[o, z], [z, o]])
    parts = sorted(p for b in d.blocks for p in b.row_parts)
    assert parts == [0, 1]


def test_failure_modes():
    import pytest
    with pytest.raises(NotSplitOverField):
        decompose_semisimple_algebra(group_algebra(Q, Z3))
    with pytest.raises(NotSemisimple):
        decompose_semisimple_algebra(group_algebra(G2, Z2))
    with pytest.raises(NotSplitOverField):
        decompose_semisimple_algebra(group_algebra(G2, Z3))
    with pytest.raises(NotSemisimple):
        decompose_semisimple_algebra(group_algebra(G3, Z3))
    with pytest.raises(NotSemisimple):
        # nilpotent 1-dim algebra: no unit
        decompose_semisimple_algebra(AssocAlgebra(Q, [[[Q.zero()]]]))
    with pytest.raises(NotSemisimple):
        # dual numbers k[x]/(x^2): unit exists, radical present
        z, o = Q.zero(), Q.one()
        st_ = [[[z] * 2 for _ in range(2)] for _ in range(2)]
        st_[0][0][0] = o
        st_[0][1][1] = o
        st_[1][0][1] = o
        decompose_semisimple_algebra(AssocAlgebra(Q, st_))


def test_semisimple_over_gf5():
    # k[Z2] over GF(5) splits: idempotents (1 +- g)/2 = 3 +- 3g... check blocks
    G5 = FieldSpec("prime", 5)
    d = decompose_semisimple_algebra(group_algebra(G5, Z2))
    assert [b.block_dim for b in d.blocks] == [1, 1]
