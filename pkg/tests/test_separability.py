"""Rigidity and separability: witnesses, certificates, and the
characteristic dichotomy for group algebras."""

import pytest

from twocat.ambient import id2, identity1, vcompose2
from twocat.scalars import FieldSpec
from twocat.separability import (
    Infeasible,
    RigidityWitness,
    SeparabilityWitness,
    double_bimodule,
    faithful,
    is_rigid,
    is_separable,
    multiplication_bimodule_map,
    rigidity_report,
    separability_report,
)
from twocat.structures import (
    catalog_algebra,
    check_bimodule,
    check_module_map,
    graded_group_algebra,
    report_passed,
)

ALGEBRAS = ["vec", "vec_z2", "vec_z2_omega", "vec_z3", "vec_z2z2", "fibonacci"]

RIGIDITY_EQUATIONS = [
    "snakeright", "snakeleft",
    "rigidrightassociativity", "rigidrightunit",
    "rigidleftassociativity", "rigidleftunit",
    "rigidbimodule",
    "epsilonright", "epsilonleft", "etaright", "etaleft",
]

Z2_TABLE = [[0, 1], [1, 0]]
Z3_TABLE = [[0, 1, 2], [1, 2, 0], [2, 0, 1]]


def failing(report):
    return [k for k, v in report.items() if not v["ok"]]


@pytest.mark.parametrize("name", ["vec_z2", "fibonacci"])
def test_double_bimodule_is_a_bimodule(name):
    dbl = double_bimodule(catalog_algebra(name))
    assert failing(check_bimodule(dbl)) == []


@pytest.mark.parametrize("name", ["vec_z2", "fibonacci"])
def test_multiplication_is_a_bimodule_map(name):
    mm = multiplication_bimodule_map(catalog_algebra(name))
    assert failing(check_module_map(mm)) == []


@pytest.mark.parametrize("name", ALGEBRAS)
def test_catalog_algebras_are_rigid(name):
    w = is_rigid(catalog_algebra(name))
    assert isinstance(w, RigidityWitness)
    assert list(w.report) == RIGIDITY_EQUATIONS
    assert failing(w.report) == []


@pytest.mark.parametrize("name", ALGEBRAS)
def test_catalog_algebras_are_separable_in_char_zero(name):
    alg = catalog_algebra(name)
    s = is_separable(alg)
    assert isinstance(s, SeparabilityWitness)
    assert s.unique
    assert failing(s.report) == []
    # the section really splits the counit
    idA = identity1(alg.A)
    assert vcompose2(s.rigidity.epsilon, s.gamma) == id2(idA)


def test_separability_report_rejects_broken_section():
    alg = catalog_algebra("vec_z2")
    s = is_separable(alg)
    two = alg.A.ambient.field.from_int(2)
    bad = type(s.gamma)._make(
        s.gamma.src, s.gamma.tgt,
        {k: blk.scale(two) for k, blk in s.gamma.blocks.items()})
    rep = separability_report(alg, s.rigidity, bad)
    assert not rep["gammasection"]["ok"]


def test_rigidity_witness_report_is_reusable():
    alg = catalog_algebra("vec_z3")
    w = is_rigid(alg)
    rep = rigidity_report(alg, w)
    assert report_passed(rep)
    s = is_separable(alg, w)
    assert isinstance(s, SeparabilityWitness)


# the characteristic dichotomy ----------------------------------------------

def test_graded_z2_separable_over_rationals():
    alg = graded_group_algebra(FieldSpec("cyclotomic", 1), Z2_TABLE)
    s = is_separable(alg)
    assert isinstance(s, SeparabilityWitness)
    assert s.unique


def test_graded_z2_infeasible_over_gf2():
    alg = graded_group_algebra(FieldSpec("prime", 2), Z2_TABLE)
    s = is_separable(alg)
    assert isinstance(s, Infeasible)
    assert s.rank_defect == 1
    assert s.system["unknowns"] == 4


def test_graded_z3_separable_over_cyclotomic():
    alg = graded_group_algebra(FieldSpec("cyclotomic", 3), Z3_TABLE)
    s = is_separable(alg)
    assert isinstance(s, SeparabilityWitness)


def test_graded_z3_infeasible_over_gf3():
    alg = graded_group_algebra(FieldSpec("prime", 3), Z3_TABLE)
    s = is_separable(alg)
    assert isinstance(s, Infeasible)
    assert s.rank_defect == 1


def test_fusion_z2_infeasible_over_gf2():
    alg = catalog_algebra("vec_z2", field=FieldSpec("prime", 2))
    s = is_separable(alg)
    assert isinstance(s, Infeasible)
    assert s.rank_defect >= 1


def test_fusion_z3_separable_over_gf2():
    # |Z/3| is invertible mod 2, so the section exists
    alg = catalog_algebra("vec_z3", field=FieldSpec("prime", 2))
    s = is_separable(alg)
    assert isinstance(s, SeparabilityWitness)


def test_faithful():
    assert faithful(catalog_algebra("vec"))
    assert faithful(catalog_algebra("fibonacci"))
