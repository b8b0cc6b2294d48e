"""Morita layer: tube algebra / center rank, indecomposability,
Eilenberg-Watts roundtrip, and equivalence certificates."""

import pytest
import sympy as sp

from twocat.ambient import (
    box1,
    TwoMorphism,
    box_object,
    compose1,
    generator,
    id2,
    identity1,
    plain_object,
    two_vect,
    unit_object,
)
from twocat.morita import (
    MoritaCertificate,
    build_tube_algebra,
    center_rank,
    check_morita_witness,
    column_bimodule,
    eilenberg_watts_roundtrip,
    identity_bimodule,
    indecomposable,
    row_bimodule,
    tube_semisimple,
    verify_certificate,
)
from twocat.scalars import FieldSpec, ScalarMatrix
from twocat.structures import (
    AlgebraObject,
    Bimodule,
    LeftModule,
    RightModule,
    catalog_algebra,
    check_algebra,
    check_bimodule,
    end_rank2_algebra,
    regular_bimodule,
    report_passed,
)
from oracles import half_braiding_count

ALGEBRAS = ["vec", "vec_z2", "vec_z2_omega", "vec_z3", "vec_z2z2", "fibonacci"]

Z2 = [[0, 1], [1, 0]]
Z3 = [[0, 1, 2], [1, 2, 0], [2, 0, 1]]


def trivial_omega(a, b, c):
    return sp.Integer(1)


def z2_omega(a, b, c):
    return sp.Integer(-1) if a == b == c == 1 else sp.Integer(1)


# tube algebra ----------------------------------------------------------------

TUBE_DIMS = {"vec": 1, "vec_z2": 4, "vec_z2_omega": 4, "vec_z3": 9,
             "vec_z2z2": 16, "fibonacci": 7}


@pytest.mark.parametrize("name", ALGEBRAS)
def test_tube_algebra_shape(name):
    tube = build_tube_algebra(catalog_algebra(name))
    assert tube.algebra.dim == TUBE_DIMS[name]
    assert tube.algebra.is_associative()
    assert tube.algebra.find_unit() is not None


def test_center_ranks_match_half_braiding_oracle():
    assert center_rank(catalog_algebra("vec"))[0] == 1
    assert center_rank(catalog_algebra("vec_z2"))[0] == \
        len(half_braiding_count(Z2, trivial_omega))
    assert center_rank(catalog_algebra("vec_z2_omega"))[0] == \
        len(half_braiding_count(Z2, z2_omega))
    assert center_rank(catalog_algebra("vec_z3"))[0] == \
        len(half_braiding_count(Z3, trivial_omega))


def test_fibonacci_center_is_rank_four_with_one_large_block():
    assert center_rank(catalog_algebra("fibonacci")) == (4, (1, 1, 1, 2))


def test_twisting_changes_the_tube_algebra():
    plain = build_tube_algebra(catalog_algebra("vec_z2"))
    twisted = build_tube_algebra(catalog_algebra("vec_z2_omega"))
    assert plain.basis == twisted.basis
    assert plain.algebra.structure != twisted.algebra.structure


def test_separability_iff_tube_semisimplicity():
    for name in ALGEBRAS:
        assert tube_semisimple(catalog_algebra(name))
    # char 2 kills both separability and the annular algebra
    assert not tube_semisimple(
        catalog_algebra("vec_z2", field=FieldSpec("prime", 2)))
    assert tube_semisimple(
        catalog_algebra("vec_z2", field=FieldSpec("prime", 3)))


# indecomposability -----------------------------------------------------------

def two_point_algebra():
    """Vec x Vec: two orthogonal idempotent simples, decomposable unit."""
    field = FieldSpec("cyclotomic", 1)
    amb = two_vect(field)
    A = plain_object(amb, 2)
    mdims = [[1, 0, 0, 0], [0, 0, 0, 1]]
    m = generator(box_object(A, A), A, mdims, "m")
    i = generator(unit_object(amb), A, [[1], [1]], "i")
    one = ScalarMatrix(field, [[field.one()]])
    mu_src = compose1(m, box1(m, identity1(A)))
    mu_tgt = compose1(m, box1(identity1(A), m))
    mu = TwoMorphism(mu_src, mu_tgt, {
        (s, t): one for s in range(8) for t in range(2)
        if mu_src.n_paths(s, t) == 1})
    lam = TwoMorphism(compose1(m, box1(i, identity1(A))), identity1(A),
                      {(a, a): one for a in range(2)})
    rho = TwoMorphism(compose1(m, box1(identity1(A), i)), identity1(A),
                      {(a, a): one for a in range(2)})
    alg = AlgebraObject(A, m, i, lam, mu, rho, "two_point", ("e1", "e2"), 0)
    assert report_passed(check_algebra(alg))
    return alg



@pytest.mark.parametrize("name", ALGEBRAS)
def test_catalog_algebras_are_indecomposable(name):
    ok, dim = indecomposable(catalog_algebra(name))
    assert ok and dim == 1


def test_product_algebra_is_decomposable():
    ok, dim = indecomposable(two_point_algebra())
    assert not ok
    assert dim == 2


def test_matrix_algebra_is_indecomposable():
    field = FieldSpec("cyclotomic", 1)
    ok, dim = indecomposable(end_rank2_algebra(field))
    assert ok and dim == 1


# Eilenberg-Watts -------------------------------------------------------------

@pytest.mark.parametrize("name", ["vec", "vec_z2_omega", "fibonacci"])
def test_eilenberg_watts_roundtrip(name):
    alg = catalog_algebra(name)
    rep = eilenberg_watts_roundtrip(regular_bimodule(alg))
    assert [k for k, v in rep.items() if not v["ok"]] == []


# Morita certificates ---------------------------------------------------------

@pytest.mark.parametrize("name", ["vec", "vec_z2", "vec_z2_omega"])
def test_identity_bimodule_self_inverse(name):
    alg = catalog_algebra(name)
    cert = check_morita_witness(identity_bimodule(alg),
                                identity_bimodule(alg))
    assert isinstance(cert, MoritaCertificate)
    assert verify_certificate(cert)


def test_fibonacci_identity_certificate():
    alg = catalog_algebra("fibonacci")
    cert = check_morita_witness(identity_bimodule(alg),
                                identity_bimodule(alg))
    assert isinstance(cert, MoritaCertificate)
    assert verify_certificate(cert)


def matrix_vec_pair():
    V = catalog_algebra("vec")
    E = end_rank2_algebra(V.A.ambient.field)
    return E, V, column_bimodule(E, V), row_bimodule(V, E)


def test_column_and_row_bimodules_check():
    _, _, P, Q = matrix_vec_pair()
    assert report_passed(check_bimodule(P))
    assert report_passed(check_bimodule(Q))


def test_matrix_algebra_is_morita_trivial():
    E, V, P, Q = matrix_vec_pair()
    cert = check_morita_witness(P, Q)
    assert isinstance(cert, MoritaCertificate)
    assert verify_certificate(cert)
    # Morita invariants transfer across the certified pair (the block
    # count is the center's rank; block sizes depend on the presentation)
    assert center_rank(E)[0] == center_rank(V)[0] == 1
    assert indecomposable(E) == indecomposable(V) == (True, 1)


def test_non_invertible_bimodule_yields_failure_report():
    V = catalog_algebra("vec")
    X = plain_object(V.A.ambient, 2)
    idX = identity1(X)
    triv_left = LeftModule(V, X, idX, id2(idX), id2(idX))
    triv_right = RightModule(V, X, idX, id2(idX), id2(idX))
    P = Bimodule(triv_left, triv_right, id2(idX))
    assert report_passed(check_bimodule(P))
    report = check_morita_witness(P, P)
    assert not isinstance(report, MoritaCertificate)
    assert not report["eq1"]["ok"]


def test_mutated_bimodule_rejected_before_search():
    alg = catalog_algebra("vec_z2")
    R = identity_bimodule(alg)
    two = alg.A.ambient.field.from_int(2)
    bad_beta = TwoMorphism(R.beta.src, R.beta.tgt,
                           {k: blk.scale(two)
                            for k, blk in R.beta.blocks.items()})
    bad = Bimodule(R.left, R.right, bad_beta)
    report = check_morita_witness(bad, R)
    assert not isinstance(report, MoritaCertificate)
    assert not report["bimoduleP"]["ok"]
