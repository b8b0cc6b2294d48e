"""Algebras, modules, bimodules and balanced morphisms with exact axiom checkers.

Every axiom is evaluated by building both sides of the defining equation as
explicit 2-morphism composites (vertical/horizontal composition, box products
and interchangers) and comparing them block by block over the exact ground
field.  Checkers return reports; they never raise on a failing axiom.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field as dc_field
from importlib import resources

from .scalars import FieldSpec, ScalarMatrix
from .ambient import (
    CondensationMonad,
    OneMorphism,
    TwoMorphism,
    TwoObject,
    box1,
    box2,
    box_object,
    box_swap,
    compose1,
    condensation_split,
    generator,
    hcompose2,
    id2,
    identity1,
    inverse2,
    monad_equations,
    plain_object,
    solve_cell_system,
    split_idempotent2,
    two_vect,
    two_vect_g,
    unit_object,
    vcompose2,
)


class MalformedData(ValueError):
    """Catalog entry is structurally invalid."""


class AxiomViolation(ValueError):
    """Constructed data fails a defining equation."""

    def __init__(self, equation: str, block):
        super().__init__(f"equation {equation} fails at block {block}")
        self.equation = equation
        self.block = block


# whiskering shorthand ------------------------------------------------------

def _over(cell: TwoMorphism, u: OneMorphism) -> TwoMorphism:
    """cell whiskered over a precomposed 1-morphism u (u is applied first)."""
    return hcompose2(cell, id2(u))


def _under(u: OneMorphism, cell: TwoMorphism) -> TwoMorphism:
    """cell whiskered under a postcomposed 1-morphism u (u is applied last)."""
    return hcompose2(id2(u), cell)


def _chain(*cells: TwoMorphism) -> TwoMorphism:
    """Vertical composite of cells listed in application order."""
    out = cells[0]
    for c in cells[1:]:
        out = vcompose2(c, out)
    return out


def _first_diff(lhs: TwoMorphism, rhs: TwoMorphism):
    if lhs.src != rhs.src or lhs.tgt != rhs.tgt:
        return ("endpoints",)
    for s in range(lhs.src.src.rank):
        for t in range(lhs.src.tgt.rank):
            if lhs.blocks.get((s, t)) != rhs.blocks.get((s, t)):
                return (s, t)
    return None


def _report(pairs) -> dict:
    """pairs: iterable of (name, lhs, rhs) -> ordered report dict."""
    out = {}
    for name, lhs, rhs in pairs:
        diff = _first_diff(lhs, rhs)
        out[name] = {"ok": diff is None, "first_diff": diff}
    return out


def _report_invertible(report: dict, named_cells) -> dict:
    for name, cell in named_cells:
        ok = cell.is_invertible()
        report[f"{name}invertible"] = {"ok": ok, "first_diff": None}
    return report


def report_passed(report: dict) -> bool:
    return all(line["ok"] for line in report.values())


# structure types -----------------------------------------------------------

@dataclass(frozen=True)
class AlgebraObject:
    A: TwoObject
    m: OneMorphism
    i: OneMorphism
    lam: TwoMorphism  # m (i box 1) => Id
    mu: TwoMorphism   # m (m box 1) => m (1 box m)
    rho: TwoMorphism  # m (1 box i) => Id
    name: str = ""
    simple_names: tuple = ()
    unit_index: int = 0

    def __eq__(self, other):
        return (isinstance(other, AlgebraObject)
                and (self.A, self.m, self.i, self.lam, self.mu, self.rho)
                == (other.A, other.m, other.i, other.lam, other.mu, other.rho))


@dataclass(frozen=True)
class RightModule:
    algebra: AlgebraObject
    M: TwoObject
    n: OneMorphism        # M box A -> M
    nu: TwoMorphism       # n (n box 1) => n (1 box m)
    rho_m: TwoMorphism    # n (1 box i) => Id

    def __eq__(self, other):
        return (isinstance(other, RightModule)
                and (self.algebra, self.M, self.n, self.nu, self.rho_m)
                == (other.algebra, other.M, other.n, other.nu, other.rho_m))


@dataclass(frozen=True)
class LeftModule:
    algebra: AlgebraObject
    M: TwoObject
    l: OneMorphism        # A box M -> M
    lambda_m: TwoMorphism  # l (i box 1) => Id
    kappa: TwoMorphism     # l (m box 1) => l (1 box l)

    def __eq__(self, other):
        return (isinstance(other, LeftModule)
                and (self.algebra, self.M, self.l, self.lambda_m, self.kappa)
                == (other.algebra, other.M, other.l, other.lambda_m, other.kappa))


@dataclass(frozen=True)
class Bimodule:
    left: LeftModule
    right: RightModule
    beta: TwoMorphism     # n (l box 1) => l (1 box n)

    def __post_init__(self):
        if self.left.M != self.right.M:
            raise MalformedData("bimodule sides live on different carriers")

    @property
    def P(self) -> TwoObject:
        return self.left.M


@dataclass(frozen=True)
class ModuleMap:
    src: object           # RightModule / LeftModule / Bimodule
    tgt: object
    f: OneMorphism
    psi: TwoMorphism | None = None  # n_tgt (f box 1) => f n_src
    chi: TwoMorphism | None = None  # l_tgt (1 box f) => f l_src


@dataclass(frozen=True)
class Balanced1Morphism:
    right: RightModule
    left: LeftModule
    C: TwoObject
    f: OneMorphism        # M box N -> C
    beta_f: TwoMorphism   # f (n box 1) => f (1 box l)


# equation builders ---------------------------------------------------------

def _algebra_pairs(alg: AlgebraObject):
    A, m, i = alg.A, alg.m, alg.i
    mu, lam, rho = alg.mu, alg.lam, alg.rho
    idA = identity1(A)
    idAA = identity1(box_object(A, A))

    # associativity pentagon: two outer applications of mu plus one
    # interchanger against three whiskered applications of mu
    lhs_a = _chain(
        _over(mu, box1(m, idAA)),
        _under(m, inverse2(box_swap(m, m))),
        _over(mu, box1(idAA, m)),
    )
    rhs_a = _chain(
        _under(m, box2(mu, id2(idA))),
        _over(mu, box1(idA, box1(m, idA))),
        _under(m, box2(id2(idA), mu)),
    )
    yield "algebraassociativity", lhs_a, rhs_a

    # unit triangle: mu against lambda and rho with the unit in the middle
    lhs_u = _chain(
        _over(mu, box1(idA, box1(i, idA))),
        _under(m, box2(id2(idA), lam)),
    )
    rhs_u = _under(m, box2(rho, id2(idA)))
    yield "algebraunitality", lhs_u, rhs_u

    # derived: unit at the left end
    lhs_cl = _chain(
        _over(mu, box1(i, idAA)),
        _under(m, inverse2(box_swap(i, m))),
        _over(lam, m),
    )
    rhs_cl = _under(m, box2(lam, id2(idA)))
    yield "coherenceleft", lhs_cl, rhs_cl

    # derived: unit at the right end
    lhs_cm = _chain(
        _under(m, box_swap(m, i)),
        _over(rho, m),
    )
    rhs_cm = _chain(
        _over(mu, box1(idAA, i)),
        _under(m, box2(id2(idA), rho)),
    )
    yield "coherencemiddle", lhs_cm, rhs_cm


def _right_module_pairs(mod: RightModule):
    alg = mod.algebra
    A, m, i = alg.A, alg.m, alg.i
    M, n, nu, rho_m = mod.M, mod.n, mod.nu, mod.rho_m
    idA, idM = identity1(A), identity1(M)
    idAA = identity1(box_object(A, A))
    idMA = identity1(box_object(M, A))

    lhs_a = _chain(
        _over(nu, box1(n, idAA)),
        _under(n, inverse2(box_swap(n, m))),
        _over(nu, box1(idMA, m)),
    )
    rhs_a = _chain(
        _under(n, box2(nu, id2(idA))),
        _over(nu, box1(idM, box1(m, idA))),
        _under(n, box2(id2(idM), alg.mu)),
    )
    yield "moduleassociativity", lhs_a, rhs_a

    lhs_u = _chain(
        _over(nu, box1(idMA, i)),
        _under(n, box2(id2(idM), alg.rho)),
    )
    rhs_u = _chain(
        _under(n, box_swap(n, i)),
        _over(rho_m, n),
    )
    yield "moduleunitality", lhs_u, rhs_u

    # derived: unit inserted in the middle
    lhs_c = _chain(
        _over(nu, box1(idM, box1(i, idA))),
        _under(n, box2(id2(idM), alg.lam)),
    )
    rhs_c = _under(n, box2(rho_m, id2(idA)))
    yield "coherenceright", lhs_c, rhs_c


def _left_module_pairs(mod: LeftModule):
    alg = mod.algebra
    A, m, i = alg.A, alg.m, alg.i
    M, l, lambda_m, kappa = mod.M, mod.l, mod.lambda_m, mod.kappa
    idA, idM = identity1(A), identity1(M)
    idAA = identity1(box_object(A, A))
    idAM = identity1(box_object(A, M))

    lhs_a = _chain(
        _over(kappa, box1(m, idAM)),
        _under(l, inverse2(box_swap(m, l))),
        _over(kappa, box1(idAA, l)),
    )
    rhs_a = _chain(
        _under(l, box2(alg.mu, id2(idM))),
        _over(kappa, box1(idA, box1(m, idM))),
        _under(l, box2(id2(idA), kappa)),
    )
    yield "leftmoduleassociativity", lhs_a, rhs_a

    lhs_u = _chain(
        _over(kappa, box1(idA, box1(i, idM))),
        _under(l, box2(id2(idA), lambda_m)),
    )
    rhs_u = _under(l, box2(alg.rho, id2(idM)))
    yield "leftmoduleunitality", lhs_u, rhs_u


def _bimodule_pairs(bim: Bimodule):
    left, right = bim.left, bim.right
    A = left.algebra
    B = right.algebra
    l, n, beta = left.l, right.n, bim.beta
    idA = identity1(A.A)
    idB = identity1(B.A)

    lhs_l = _chain(
        _over(beta, box1(A.m, identity1(box_object(bim.P, B.A)))),
        _under(l, inverse2(box_swap(A.m, n))),
        _over(left.kappa, box1(identity1(box_object(A.A, A.A)), n)),
    )
    rhs_l = _chain(
        _under(n, box2(left.kappa, id2(idB))),
        _over(beta, box1(idA, box1(l, idB))),
        _under(l, box2(id2(idA), beta)),
    )
    yield "leftbimoduleassociativity", lhs_l, rhs_l

    lhs_r = _chain(
        _over(right.nu, box1(l, identity1(box_object(B.A, B.A)))),
        _under(n, inverse2(box_swap(l, B.m))),
        _over(beta, box1(identity1(box_object(A.A, bim.P)), B.m)),
    )
    rhs_r = _chain(
        _under(n, box2(beta, id2(idB))),
        _over(beta, box1(idA, box1(n, idB))),
        _under(l, box2(id2(idA), right.nu)),
    )
    yield "rightbimoduleassociativity", lhs_r, rhs_r


def _right_map_pairs(src: RightModule, tgt: RightModule, f, psi):
    alg = src.algebra
    m, i = alg.m, alg.i
    idA = identity1(alg.A)
    idAA = identity1(box_object(alg.A, alg.A))
    idM = identity1(src.M)

    lhs_a = _chain(
        _over(tgt.nu, box1(f, idAA)),
        _under(tgt.n, inverse2(box_swap(f, m))),
        _over(psi, box1(idM, m)),
    )
    rhs_a = _chain(
        _under(tgt.n, box2(psi, id2(idA))),
        _over(psi, box1(src.n, idA)),
        _under(f, src.nu),
    )
    yield "modulemapassociativity", lhs_a, rhs_a

    lhs_u = _chain(
        _under(tgt.n, box_swap(f, i)),
        _over(tgt.rho_m, f),
    )
    rhs_u = _chain(
        _over(psi, box1(idM, i)),
        _under(f, src.rho_m),
    )
    yield "modulemapunitality", lhs_u, rhs_u


def _left_map_pairs(src: LeftModule, tgt: LeftModule, f, chi):
    alg = src.algebra
    m, i = alg.m, alg.i
    idA = identity1(alg.A)
    idAA = identity1(box_object(alg.A, alg.A))
    idM = identity1(src.M)

    lhs_a = _chain(
        _under(tgt.l, box_swap(m, f)),
        _over(chi, box1(m, idM)),
        _under(f, src.kappa),
    )
    rhs_a = _chain(
        _over(tgt.kappa, box1(idAA, f)),
        _under(tgt.l, box2(id2(idA), chi)),
        _over(chi, box1(idA, src.l)),
    )
    yield "leftmodulemapassociativity", lhs_a, rhs_a

    lhs_u = _chain(
        _under(tgt.l, inverse2(box_swap(i, f))),
        _over(tgt.lambda_m, f),
    )
    rhs_u = _chain(
        _over(chi, box1(i, idM)),
        _under(f, src.lambda_m),
    )
    yield "leftmodulemapunitality", lhs_u, rhs_u


def _bimodule_map_pairs(src: Bimodule, tgt: Bimodule, f, psi, chi):
    A = src.left.algebra
    B = src.right.algebra
    idA = identity1(A.A)
    idB = identity1(B.A)

    lhs = _chain(
        _over(tgt.beta, box1(idA, box1(f, idB))),
        _under(tgt.left.l, box2(id2(idA), psi)),
        _over(chi, box1(idA, src.right.n)),
    )
    rhs = _chain(
        _under(tgt.right.n, box2(chi, id2(idB))),
        _over(psi, box1(src.left.l, idB)),
        _under(f, src.beta),
    )
    yield "bimodulemapassociativity", lhs, rhs


def _balanced_pairs(bal: Balanced1Morphism):
    mod, lmod = bal.right, bal.left
    alg = mod.algebra
    m, i = alg.m, alg.i
    n, l, f, beta_f = mod.n, lmod.l, bal.f, bal.beta_f
    idM, idN = identity1(mod.M), identity1(lmod.M)
    idA = identity1(alg.A)

    lhs_a = _chain(
        _over(beta_f, box1(n, identity1(box_object(alg.A, lmod.M)))),
        _under(f, inverse2(box_swap(n, l))),
        _over(beta_f, box1(identity1(box_object(mod.M, alg.A)), l)),
    )
    rhs_a = _chain(
        _under(f, box2(mod.nu, id2(idN))),
        _over(beta_f, box1(idM, box1(m, idN))),
        _under(f, box2(id2(idM), lmod.kappa)),
    )
    yield "balancedassociativity", lhs_a, rhs_a

    lhs_u = _chain(
        _over(beta_f, box1(idM, box1(i, idN))),
        _under(f, box2(id2(idM), lmod.lambda_m)),
    )
    rhs_u = _under(f, box2(mod.rho_m, id2(idN)))
    yield "balancedunitality", lhs_u, rhs_u


# checkers -------------------------------------------------------------------

_REPORT_CACHE: dict = {}


def _cached_report(kind, key, pairs):
    """Equation reports are pure functions of immutable data; memoize them so
    that repeated checks of shared substructure (e.g. both module sides of a
    bimodule) cost nothing after the first evaluation."""
    full_key = (kind,) + key
    rep = _REPORT_CACHE.get(full_key)
    if rep is None:
        rep = _REPORT_CACHE[full_key] = _report(pairs)
    return dict(rep)


def _algebra_key(alg: AlgebraObject):
    return (alg.A, alg.m, alg.i, alg.lam, alg.mu, alg.rho)


def _right_key(mod: RightModule):
    return _algebra_key(mod.algebra) + (mod.M, mod.n, mod.nu, mod.rho_m)


def _left_key(mod: LeftModule):
    return _algebra_key(mod.algebra) + (mod.M, mod.l, mod.lambda_m, mod.kappa)


def check_algebra(alg: AlgebraObject) -> dict:
    rep = _cached_report("algebra", _algebra_key(alg), _algebra_pairs(alg))
    return _report_invertible(rep, [("lambda", alg.lam), ("mu", alg.mu),
                                    ("rho", alg.rho)])


def check_module(mod) -> dict:
    if isinstance(mod, RightModule):
        rep = _cached_report("right", _right_key(mod),
                             _right_module_pairs(mod))
        return _report_invertible(rep, [("nu", mod.nu), ("rho_m", mod.rho_m)])
    if isinstance(mod, LeftModule):
        rep = _cached_report("left", _left_key(mod), _left_module_pairs(mod))
        return _report_invertible(rep, [("lambda_m", mod.lambda_m),
                                        ("kappa", mod.kappa)])
    raise TypeError(f"not a module: {type(mod).__name__}")


def check_bimodule(bim: Bimodule) -> dict:
    rep = {}
    rep.update(_cached_report("left", _left_key(bim.left),
                              _left_module_pairs(bim.left)))
    rep.update(_cached_report("right", _right_key(bim.right),
                              _right_module_pairs(bim.right)))
    rep.update(_cached_report(
        "bimodule", _left_key(bim.left) + _right_key(bim.right) + (bim.beta,),
        _bimodule_pairs(bim)))
    return _report_invertible(rep, [("beta", bim.beta)])


def check_module_map(mm: ModuleMap) -> dict:
    rep = {}
    if isinstance(mm.src, Bimodule):
        if mm.psi is None or mm.chi is None:
            raise MalformedData("bimodule map needs both psi and chi")
        rep.update(_report(_right_map_pairs(mm.src.right, mm.tgt.right,
                                            mm.f, mm.psi)))
        rep.update(_report(_left_map_pairs(mm.src.left, mm.tgt.left,
                                           mm.f, mm.chi)))
        rep.update(_report(_bimodule_map_pairs(mm.src, mm.tgt, mm.f,
                                               mm.psi, mm.chi)))
        cells = [("psi", mm.psi), ("chi", mm.chi)]
    elif isinstance(mm.src, RightModule):
        if mm.psi is None:
            raise MalformedData("right module map needs psi")
        rep.update(_report(_right_map_pairs(mm.src, mm.tgt, mm.f, mm.psi)))
        cells = [("psi", mm.psi)]
    elif isinstance(mm.src, LeftModule):
        if mm.chi is None:
            raise MalformedData("left module map needs chi")
        rep.update(_report(_left_map_pairs(mm.src, mm.tgt, mm.f, mm.chi)))
        cells = [("chi", mm.chi)]
    else:
        raise TypeError(f"not a module map source: {type(mm.src).__name__}")
    return _report_invertible(rep, cells)


def check_balanced(bal: Balanced1Morphism) -> dict:
    rep = _report(_balanced_pairs(bal))
    return _report_invertible(rep, [("beta_f", bal.beta_f)])


def check_module_intertwiner(src: ModuleMap, tgt: ModuleMap,
                             gamma: TwoMorphism) -> dict:
    """Intertwining equality for a 2-morphism between (bi)module maps."""
    rep = {}
    if isinstance(src.src, (RightModule, Bimodule)) and src.psi is not None:
        mod_s = src.src.right if isinstance(src.src, Bimodule) else src.src
        mod_t = src.tgt.right if isinstance(src.tgt, Bimodule) else src.tgt
        lhs = vcompose2(tgt.psi,
                        _under(mod_t.n, box2(gamma,
                                             id2(identity1(mod_s.algebra.A)))))
        rhs = vcompose2(_over(gamma, mod_s.n), src.psi)
        name = ("bimoduleintertwinerright"
                if isinstance(src.src, Bimodule) else "moduleintertwiner")
        rep.update(_report([(name, lhs, rhs)]))
    if isinstance(src.src, (LeftModule, Bimodule)) and src.chi is not None:
        mod_s = src.src.left if isinstance(src.src, Bimodule) else src.src
        mod_t = src.tgt.left if isinstance(src.tgt, Bimodule) else src.tgt
        lhs = vcompose2(tgt.chi,
                        _under(mod_t.l, box2(id2(identity1(mod_s.algebra.A)),
                                             gamma)))
        rhs = vcompose2(_over(gamma, mod_s.l), src.chi)
        name = ("bimoduleintertwinerleft"
                if isinstance(src.src, Bimodule) else "moduleintertwinerleft")
        rep.update(_report([(name, lhs, rhs)]))
    if not rep:
        raise MalformedData("no structure cells to intertwine")
    return rep


def check_balanced_intertwiner(src: Balanced1Morphism, tgt: Balanced1Morphism,
                               gamma: TwoMorphism) -> dict:
    n, l = src.right.n, src.left.l
    idM, idN = identity1(src.right.M), identity1(src.left.M)
    lhs = vcompose2(tgt.beta_f, _over(gamma, box1(n, idN)))
    rhs = vcompose2(_over(gamma, box1(idM, l)), src.beta_f)
    return _report([("balancedintertwiner", lhs, rhs)])


# regular structures ---------------------------------------------------------

def regular_right_module(alg: AlgebraObject) -> RightModule:
    return RightModule(alg, alg.A, alg.m, alg.mu, alg.rho)


def regular_left_module(alg: AlgebraObject) -> LeftModule:
    return LeftModule(alg, alg.A, alg.m, alg.lam, alg.mu)


def regular_bimodule(alg: AlgebraObject) -> Bimodule:
    return Bimodule(regular_left_module(alg), regular_right_module(alg), alg.mu)


def zero_right_module(alg: AlgebraObject) -> RightModule:
    """The rank-0 module; every axiom is vacuous."""
    Z = TwoObject(alg.A.ambient, ())
    n = generator(box_object(Z, alg.A), Z, [])
    nu = TwoMorphism(compose1(n, box1(n, identity1(alg.A))),
                     compose1(n, box1(identity1(Z), alg.m)), {})
    rho = TwoMorphism(compose1(n, box1(identity1(Z), alg.i)),
                      identity1(Z), {})
    return RightModule(alg, Z, n, nu, rho)


def zero_left_module(alg: AlgebraObject) -> LeftModule:
    Z = TwoObject(alg.A.ambient, ())
    l = generator(box_object(alg.A, Z), Z, [])
    lam = TwoMorphism(compose1(l, box1(alg.i, identity1(Z))),
                      identity1(Z), {})
    kap = TwoMorphism(compose1(l, box1(alg.m, identity1(Z))),
                      compose1(l, box1(identity1(alg.A), l)), {})
    return LeftModule(alg, Z, l, lam, kap)


# direct sums ----------------------------------------------------------------

def _flat_iso(u: OneMorphism):
    """Collapse a layered 1-morphism to a single generator, with the
    identity-matrix 2-cell identifying the lexicographic path bases."""
    field = u.ambient.field
    flat = generator(u.src, u.tgt, u.dims)
    iso = TwoMorphism(u, flat, {
        k: ScalarMatrix.identity(field, d) for k, d in u.dims_map().items()})
    return flat, iso


def _flatten_right(mod: RightModule) -> RightModule:
    alg = mod.algebra
    idM, idA = identity1(mod.M), identity1(alg.A)
    flat, iso = _flat_iso(mod.n)
    nu = _chain(
        hcompose2(inverse2(iso), box2(inverse2(iso), id2(idA))),
        mod.nu,
        _over(iso, box1(idM, alg.m)),
    )
    rho = _chain(_over(inverse2(iso), box1(idM, alg.i)), mod.rho_m)
    return RightModule(alg, mod.M, flat, nu, rho)


def _flatten_left(mod: LeftModule) -> LeftModule:
    alg = mod.algebra
    idM, idA = identity1(mod.M), identity1(alg.A)
    flat, iso = _flat_iso(mod.l)
    lam = _chain(_over(inverse2(iso), box1(alg.i, idM)), mod.lambda_m)
    kap = _chain(
        _over(inverse2(iso), box1(alg.m, idM)),
        mod.kappa,
        hcompose2(iso, box2(id2(idA), iso)),
    )
    return LeftModule(alg, mod.M, flat, lam, kap)


def _sum_action_dims(d1, d2, tgt1, tgt2, w):
    """Block-diagonal dims for the direct-sum action; w = rank of the boxed
    algebra slot, component simples are offset past the first summand."""
    r1, r2 = tgt1, tgt2
    c1 = r1 * w
    c2 = r2 * w
    rows = []
    for t in range(r1):
        rows.append(list(d1[t]) + [0] * c2)
    for t in range(r2):
        rows.append([0] * c1 + list(d2[t]))
    return rows


def _translated_blocks(cells, src_w, tgt_w, ranks, offsets):
    """Reindex component 2-cell blocks into the direct-sum path bases.

    For a frame whose source simple index decomposes as (module simple) *
    src_w + rest, the translation shifts the module simple by the component
    offset; likewise for the target.  Path multiplicities and their
    lexicographic order are preserved verbatim, so blocks copy unchanged.
    """
    out = {}
    for cell, rank, off in zip(cells, ranks, offsets):
        def tr(idx, w, r=rank, o=off):
            return (idx // w + o) * w + idx % w
        for (s, t), blk in cell.blocks.items():
            out[(tr(s, src_w), tr(t, tgt_w))] = blk
    return out


def _translated_blocks_last(cells, src_ranks, tgt_ranks, sum_src, sum_tgt,
                            offsets):
    """As _translated_blocks, for frames with the module slot rightmost."""
    out = {}
    for cell, rs, rt, off in zip(cells, src_ranks, tgt_ranks, offsets):
        for (s, t), blk in cell.blocks.items():
            key = ((s // rs) * sum_src + s % rs + off,
                   (t // rt) * sum_tgt + t % rt + off)
            out[key] = blk
    return out


def module_direct_sum(a, b):
    """The direct sum of two modules over the same algebra: grade tuples
    concatenate, actions and structure cells are block diagonal."""
    if isinstance(a, RightModule) and isinstance(b, RightModule):
        if a.algebra != b.algebra:
            raise MalformedData("direct sum needs a common algebra")
        alg = a.algebra
        fa, fb = _flatten_right(a), _flatten_right(b)
        rA = alg.A.rank
        M = TwoObject(alg.A.ambient, a.M.grades + b.M.grades)
        dims = _sum_action_dims(fa.n.dims, fb.n.dims, a.M.rank, b.M.rank, rA)
        n = generator(box_object(M, alg.A), M, dims)
        idM = identity1(M)
        offsets = (0, a.M.rank)
        ranks = (a.M.rank, b.M.rank)
        nu = TwoMorphism(
            compose1(n, box1(n, identity1(alg.A))),
            compose1(n, box1(idM, alg.m)),
            _translated_blocks((fa.nu, fb.nu), rA * rA, 1, ranks, offsets))
        rho = TwoMorphism(
            compose1(n, box1(idM, alg.i)), idM,
            _translated_blocks((fa.rho_m, fb.rho_m), 1, 1, ranks, offsets))
        return RightModule(alg, M, n, nu, rho)
    if isinstance(a, LeftModule) and isinstance(b, LeftModule):
        if a.algebra != b.algebra:
            raise MalformedData("direct sum needs a common algebra")
        alg = a.algebra
        fa, fb = _flatten_left(a), _flatten_left(b)
        M = TwoObject(alg.A.ambient, a.M.grades + b.M.grades)
        dims = [[0] * (alg.A.rank * M.rank) for _ in range(M.rank)]
        for t in range(a.M.rank):
            for g in range(alg.A.rank):
                for s in range(a.M.rank):
                    dims[t][g * M.rank + s] = fa.l.dims[t][g * a.M.rank + s]
        for t in range(b.M.rank):
            for g in range(alg.A.rank):
                for s in range(b.M.rank):
                    dims[a.M.rank + t][g * M.rank + a.M.rank + s] = \
                        fb.l.dims[t][g * b.M.rank + s]
        l = generator(box_object(alg.A, M), M, dims)
        idM = identity1(M)
        offsets = (0, a.M.rank)
        src_ranks = (a.M.rank, b.M.rank)
        lam = TwoMorphism(
            compose1(l, box1(alg.i, idM)), idM,
            _translated_blocks_last((fa.lambda_m, fb.lambda_m), src_ranks,
                                    src_ranks, M.rank, M.rank, offsets))
        kap = TwoMorphism(
            compose1(l, box1(alg.m, idM)),
            compose1(l, box1(identity1(alg.A), l)),
            _translated_blocks_last((fa.kappa, fb.kappa), src_ranks,
                                    src_ranks, M.rank, M.rank, offsets))
        return LeftModule(alg, M, l, lam, kap)
    raise MalformedData("direct sum needs two modules of the same kind")


# fusion data ----------------------------------------------------------------

def _parse_field(data) -> FieldSpec:
    try:
        return FieldSpec(data["kind"], int(data["conductor"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedData(f"bad field spec: {exc}") from exc


def _field_entry(field: FieldSpec) -> dict:
    return {"kind": field.kind, "conductor": field.conductor}


def load_fusion_algebra(entry: dict, field: FieldSpec | None = None,
                        validate: bool = True) -> AlgebraObject:
    """Build an AlgebraObject in skeletal 2Vect from fusion-category data.

    `entry` supplies simple names, the unit, fusion coefficients N_{ab}^c,
    F-symbol blocks and optional unit constraints; `field` overrides the
    entry's ground field.  With `validate` the constructed data is checked
    exhaustively and an AxiomViolation names the first failing equation;
    without it the caller gets the raw structure (so a checker can report
    failures equation by equation).
    """
    if not isinstance(entry, dict):
        raise MalformedData("catalog entry must be a mapping")
    for key in ("simples", "unit", "fusion"):
        if key not in entry:
            raise MalformedData(f"missing key {key!r}")
    simples = list(entry["simples"])
    if len(set(simples)) != len(simples) or not simples:
        raise MalformedData("simple names must be nonempty and distinct")
    if entry["unit"] not in simples:
        raise MalformedData("unit is not a listed simple")
    if field is None:
        if "field" not in entry:
            raise MalformedData("missing key 'field'")
        field = _parse_field(entry["field"])
    rank = len(simples)
    idx = {name: k for k, name in enumerate(simples)}
    unit = idx[entry["unit"]]

    N = [[[0] * rank for _ in range(rank)] for _ in range(rank)]  # N[a][b][c]
    for key, outs in entry["fusion"].items():
        parts = key.split()
        if len(parts) != 2 or any(p not in idx for p in parts):
            raise MalformedData(f"bad fusion key {key!r}")
        a, b = (idx[p] for p in parts)
        for cname, mult in outs.items():
            if cname not in idx or not isinstance(mult, int) or mult < 0:
                raise MalformedData(f"bad fusion outcome {cname!r} in {key!r}")
            N[a][b][idx[cname]] = mult
    for x in range(rank):
        for c in range(rank):
            if N[unit][x][c] != (1 if c == x else 0) \
                    or N[x][unit][c] != (1 if c == x else 0):
                raise MalformedData("unit does not fuse trivially")

    if "group" in entry:
        ginfo = entry["group"]
        try:
            amb = two_vect_g(field, [list(r) for r in ginfo["table"]])
            grades = tuple(int(x) for x in ginfo["grades"])
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedData(f"bad group data: {exc}") from exc
        if len(grades) != rank:
            raise MalformedData("one grade per simple required")
        A = TwoObject(amb, grades)
    else:
        amb = two_vect(field)
        A = plain_object(amb, rank)
    AA = box_object(A, A)
    m = generator(AA, A, [[N[a][b][c] for a in range(rank) for b in range(rank)]
                          for c in range(rank)], "m")
    i = generator(unit_object(amb), A,
                  [[1] if c == unit else [0] for c in range(rank)], "i")

    lam_c = {s: "1" for s in simples}
    rho_c = {s: "1" for s in simples}
    constraints = entry.get("unit_constraints", {})
    lam_c.update(constraints.get("lambda", {}))
    rho_c.update(constraints.get("rho", {}))

    mu_src = compose1(m, box1(m, identity1(A)))
    mu_tgt = compose1(m, box1(identity1(A), m))

    def src_paths(a, b, c, d):
        # left-associated basis: intermediate e, mult in N_ab^e, mult in N_ec^d
        out = []
        for e in range(rank):
            for m1 in range(N[a][b][e]):
                for m2 in range(N[e][c][d]):
                    out.append((e, m1, m2))
        return out

    def tgt_paths(a, b, c, d):
        # right-associated basis: intermediate f, mult in N_bc^f, mult in N_af^d
        out = []
        for f in range(rank):
            for m1 in range(N[b][c][f]):
                for m2 in range(N[a][f][d]):
                    out.append((f, m1, m2))
        return out

    f_entries = {}
    for key, block in entry.get("F", {}).items():
        parts = key.split()
        if len(parts) != 4 or any(p not in idx for p in parts):
            raise MalformedData(f"bad F key {key!r}")
        f_entries[tuple(idx[p] for p in parts)] = block

    mu_blocks = {}
    for a in range(rank):
        for b in range(rank):
            for c in range(rank):
                s = (a * rank + b) * rank + c
                for d in range(rank):
                    srcs = src_paths(a, b, c, d)
                    tgts = tgt_paths(a, b, c, d)
                    if not srcs and not tgts:
                        continue
                    if len(srcs) != len(tgts):
                        raise MalformedData(
                            f"fusion is not associative at {(a, b, c, d)}")
                    blk = f_entries.get((a, b, c, d))
                    if blk is None:
                        # trivial associator default: only canonical for unit
                        # triples or one-dimensional blocks
                        if unit not in (a, b, c) and len(srcs) != 1:
                            raise MalformedData(
                                f"missing F block for {(a, b, c, d)}")
                        rows = [[field.one() if ri == ci else field.zero()
                                 for ci in range(len(srcs))]
                                for ri in range(len(tgts))]
                    else:
                        rows = [[field.zero()] * len(srcs)
                                for _ in range(len(tgts))]
                        for ekey, val in blk.items():
                            eparts = ekey.split()
                            if len(eparts) != 2 or any(p not in idx for p in eparts):
                                raise MalformedData(f"bad F label {ekey!r}")
                            e, f = (idx[p] for p in eparts)
                            vals = val if isinstance(val, list) else [[val]]
                            cols = [k for k, p in enumerate(srcs) if p[0] == e]
                            rws = [k for k, p in enumerate(tgts) if p[0] == f]
                            if len(rws) != len(vals) or any(
                                    len(cols) != len(r) for r in vals):
                                raise MalformedData(
                                    f"F block shape mismatch at {key!r} {ekey!r}")
                            for ri, row in zip(rws, vals):
                                for ci, lit in zip(cols, row):
                                    rows[ri][ci] = field.parse(lit)
                    mu_blocks[(s, d)] = ScalarMatrix(field, rows, len(srcs))
    mu = TwoMorphism(mu_src, mu_tgt, mu_blocks)

    lam_src = compose1(m, box1(i, identity1(A)))
    rho_src = compose1(m, box1(identity1(A), i))
    lam = TwoMorphism(lam_src, identity1(A), {
        (a, a): ScalarMatrix(field, [[field.parse(lam_c[simples[a]])]])
        for a in range(rank)})
    rho = TwoMorphism(rho_src, identity1(A), {
        (a, a): ScalarMatrix(field, [[field.parse(rho_c[simples[a]])]])
        for a in range(rank)})

    alg = AlgebraObject(A, m, i, lam, mu, rho, entry.get("name", ""),
                        tuple(simples), unit)
    if validate:
        rep = check_algebra(alg)
        for eq, line in rep.items():
            if not line["ok"]:
                raise AxiomViolation(eq, line["first_diff"])
    return alg


def serialize_fusion_algebra(alg: AlgebraObject) -> dict:
    """Inverse of load_fusion_algebra on its image."""
    rank = alg.A.rank
    names = list(alg.simple_names) if alg.simple_names \
        else [str(k) for k in range(rank)]
    field = alg.A.ambient.field
    fusion = {}
    for a in range(rank):
        for b in range(rank):
            outs = {names[c]: alg.m.dims[c][a * rank + b]
                    for c in range(rank) if alg.m.dims[c][a * rank + b]}
            if outs:
                fusion[f"{names[a]} {names[b]}"] = outs
    N = alg.m.dims
    f_dict = {}
    for (s, d), blk in alg.mu.blocks.items():
        if blk.rows == 0 or blk.cols == 0:
            continue
        c = s % rank
        b = (s // rank) % rank
        a = s // (rank * rank)
        srcs = _left_paths(N, rank, a, b, c, d)
        tgts = _right_paths(N, rank, a, b, c, d)
        block = {}
        for e in range(rank):
            cols = [k for k, p in enumerate(srcs) if p[0] == e]
            if not cols:
                continue
            for f in range(rank):
                rws = [k for k, p in enumerate(tgts) if p[0] == f]
                if not rws:
                    continue
                block[f"{names[e]} {names[f]}"] = [
                    [field.format(blk[ri, ci]) for ci in cols] for ri in rws]
        f_dict[f"{names[a]} {names[b]} {names[c]} {names[d]}"] = block
    out = {
        "kind": "fusion_algebra",
        "name": alg.name,
        "field": _field_entry(field),
        "simples": names,
        "unit": names[alg.unit_index],
        "fusion": fusion,
        "F": f_dict,
        "unit_constraints": {
            "lambda": {names[a]: field.format(alg.lam.blocks[(a, a)][0, 0])
                       for a in range(rank)},
            "rho": {names[a]: field.format(alg.rho.blocks[(a, a)][0, 0])
                    for a in range(rank)},
        },
    }
    if alg.A.ambient.group_order > 1:
        out["group"] = {"table": [list(r) for r in alg.A.ambient.table],
                        "grades": list(alg.A.grades)}
    return out


def _left_paths(dims, rank, a, b, c, d):
    """Left-associated path labels (e, mult_ab, mult_ec) from m-dims rows."""
    out = []
    for e in range(rank):
        for m1 in range(dims[e][a * rank + b]):
            for m2 in range(dims[d][e * rank + c]):
                out.append((e, m1, m2))
    return out


def _right_paths(dims, rank, a, b, c, d):
    """Right-associated path labels (f, mult_bc, mult_af)."""
    out = []
    for f in range(rank):
        for m1 in range(dims[f][b * rank + c]):
            for m2 in range(dims[d][a * rank + f]):
                out.append((f, m1, m2))
    return out


# internal algebras and their module categories ------------------------------

@dataclass(frozen=True)
class InternalAlgebra:
    """An algebra object b inside a fusion algebra A.

    beta: I -> A picks out the underlying object, mc/dc are the
    multiplication and its splitting section, uc the unit inclusion.
    """
    beta: OneMorphism
    mc: TwoMorphism   # m (beta box 1) beta => beta
    dc: TwoMorphism   # beta => m (beta box 1) beta, with mc dc = id
    uc: TwoMorphism   # i => beta
    name: str = ""


def unit_internal_algebra(alg: AlgebraObject) -> InternalAlgebra:
    mc = _over(alg.lam, alg.i)
    return InternalAlgebra(alg.i, mc, inverse2(mc), id2(alg.i), "unit")


def group_algebra_object(alg: AlgebraObject) -> InternalAlgebra:
    """The canonical algebra structure on the sum of all simples of a
    group-like fusion algebra (each fusion product a single simple)."""
    rank = alg.A.rank
    field = alg.A.ambient.field
    dims = alg.m.dims
    for col in range(rank * rank):
        if sum(dims[c][col] for c in range(rank)) != 1:
            raise MalformedData("group algebra object needs group-like fusion")
    amb = alg.A.ambient
    beta = generator(unit_object(amb), alg.A, [[1]] * rank, "beta")
    src = compose1(alg.m, compose1(box1(beta, identity1(alg.A)), beta))
    inv_order = field.from_fraction(1) / field.from_int(rank)
    mc_blocks = {}
    dc_blocks = {}
    for c in range(rank):
        cols = src.n_paths(0, c)
        mc_blocks[(0, c)] = ScalarMatrix(field, [[field.one()] * cols], cols)
        dc_blocks[(0, c)] = ScalarMatrix(field, [[inv_order]] * cols, 1)
    mc = TwoMorphism(src, beta, mc_blocks)
    dc = TwoMorphism(beta, src, dc_blocks)
    uc = TwoMorphism(alg.i, beta, {
        (0, c): ScalarMatrix(field, [[field.one()]] if c == alg.unit_index
                             else [[]], 1 if c == alg.unit_index else 0)
        for c in range(rank)})
    return InternalAlgebra(beta, mc, dc, uc, "group_algebra")


def _creation_slide(alg: AlgebraObject, beta: OneMorphism,
                    side: str) -> TwoMorphism:
    """e m => m (e box 1) for e = m (beta box 1)  (side 'right'), or the
    mirror e' m => m (1 box e') for e' = m (1 box beta)  (side 'left')."""
    m, mu = alg.m, alg.mu
    idAA = identity1(box_object(alg.A, alg.A))
    if side == "right":
        return _chain(
            _under(m, box_swap(beta, m)),
            _over(inverse2(mu), box1(beta, idAA)),
        )
    return _chain(
        _under(m, inverse2(box_swap(m, beta))),
        _over(mu, box1(idAA, beta)),
    )


def free_module_monad(alg: AlgebraObject, b: InternalAlgebra,
                      side: str = "right") -> CondensationMonad:
    """The condensation monad of tensoring with b, acting on the chosen side.

    side 'right' gives e = m (beta box 1) whose modules form a right
    A-module category; 'left' the mirror.  Raises AxiomViolation if the
    supplied internal-algebra cells do not yield a condensation monad.
    """
    m, idA = alg.m, identity1(alg.A)
    slide = _creation_slide(alg, b.beta, side)
    if side == "right":
        e = compose1(m, box1(b.beta, idA))
        mc, dc = b.mc, b.dc
        mu_t = _chain(_over(slide, box1(b.beta, idA)),
                      _under(m, box2(mc, id2(idA))))
        delta_t = _chain(_under(m, box2(dc, id2(idA))),
                         _over(inverse2(slide), box1(b.beta, idA)))
    else:
        e = compose1(m, box1(idA, b.beta))
        mc = _chain(_under(m, inverse2(box_swap(b.beta, b.beta))), b.mc)
        dc = _chain(b.dc, _under(m, box_swap(b.beta, b.beta)))
        mu_t = _chain(_over(slide, box1(idA, b.beta)),
                      _under(m, box2(id2(idA), mc)))
        delta_t = _chain(_under(m, box2(id2(idA), dc)),
                         _over(inverse2(slide), box1(idA, b.beta)))
    monad = CondensationMonad(alg.A, e, mu_t, delta_t)
    for name, ok in monad_equations(monad).items():
        if not ok:
            raise AxiomViolation(name, None)
    return monad


def _descend_action(alg: AlgebraObject, b: InternalAlgebra, side: str):
    """Split the free-module monad and descend the multiplication to an
    action of A on the category of b-modules.

    Returns (carrier, action, split g, xi) with xi: g action => m (g box 1)
    (resp. the mirror) invertible.
    """
    m, idA = alg.m, identity1(alg.A)
    slide = _creation_slide(alg, b.beta, side)
    monad = free_module_monad(alg, b, side)
    sp = condensation_split(monad)
    g, f = sp.g, sp.f
    # b-module structure on g and on the undescended action u
    a_g = _chain(_over(inverse2(sp.theta), g), _under(g, sp.phi))
    s_g = _chain(_under(g, sp.gamma), _over(sp.theta, g))
    if side == "right":
        u = compose1(m, box1(g, idA))
        pad = box1(g, idA)
        p = _chain(_over(slide, pad), _under(m, box2(a_g, id2(idA))))
        s_u = _chain(_under(m, box2(s_g, id2(idA))),
                     _over(inverse2(slide), pad))
    else:
        u = compose1(m, box1(idA, g))
        pad = box1(idA, g)
        p = _chain(_over(slide, pad), _under(m, box2(id2(idA), a_g)))
        s_u = _chain(_under(m, box2(id2(idA), s_g)),
                     _over(inverse2(slide), pad))
    fu = compose1(f, u)
    q = _chain(_under(f, s_u),
               _under(f, _over(inverse2(sp.theta), u)),
               _over(sp.phi, fu))
    assert vcompose2(q, q) == q, "descent projector is not idempotent"
    action, _, sect = split_idempotent2(fu, q)
    xi = _chain(_under(g, sect), _over(sp.theta, u), p)
    assert xi.is_invertible(), "descended action does not present u"
    return sp.B, action, g, xi


def module_from_internal_algebra(alg: AlgebraObject,
                                 b: InternalAlgebra) -> RightModule:
    """The category of b-modules internal to A, as a right A-module."""
    m, i, idA = alg.m, alg.i, identity1(alg.A)
    idAA = identity1(box_object(alg.A, alg.A))
    carrier, n, g, xi = _descend_action(alg, b, "right")
    idB = identity1(carrier)

    phi_assoc = _chain(
        _under(m, box2(xi, id2(idA))),
        _over(alg.mu, box1(g, idAA)),
        _under(m, inverse2(box_swap(g, m))),
    )
    rhs_nu = _chain(_over(xi, box1(n, idA)), phi_assoc,
                    inverse2(_over(xi, box1(idB, m))))
    nu, unique = solve_cell_system(
        compose1(n, box1(n, idA)), compose1(n, box1(idB, m)),
        [(lambda z: _under(g, z), rhs_nu)])
    assert nu is not None and unique, "module associator fails to descend"

    rhs_rho = _chain(_over(xi, box1(idB, i)),
                     _under(m, box_swap(g, i)),
                     _over(alg.rho, g))
    rho_m, unique = solve_cell_system(
        compose1(n, box1(idB, i)), identity1(carrier),
        [(lambda z: _under(g, z), rhs_rho)])
    assert rho_m is not None and unique, "module unitor fails to descend"

    mod = RightModule(alg, carrier, n, nu, rho_m)
    rep = check_module(mod)
    for eq, line in rep.items():
        if not line["ok"]:
            raise AxiomViolation(eq, line["first_diff"])
    return mod


def left_module_from_internal_algebra(alg: AlgebraObject,
                                      b: InternalAlgebra) -> LeftModule:
    """Mirror construction: b-modules as a left A-module."""
    m, i, idA = alg.m, alg.i, identity1(alg.A)
    idAA = identity1(box_object(alg.A, alg.A))
    carrier, l, g, xi = _descend_action(alg, b, "left")
    idB = identity1(carrier)

    phi_assoc = _chain(
        _under(m, inverse2(box_swap(m, g))),
        _over(alg.mu, box1(idAA, g)),
        _under(m, box2(id2(idA), inverse2(xi))),
    )
    rhs_kappa = _chain(_over(xi, box1(m, idB)), phi_assoc,
                       inverse2(_over(xi, box1(idA, l))))
    kappa, unique = solve_cell_system(
        compose1(l, box1(m, idB)), compose1(l, box1(idA, l)),
        [(lambda z: _under(g, z), rhs_kappa)])
    assert kappa is not None and unique, "left associator fails to descend"

    rhs_lam = _chain(_over(xi, box1(i, idB)),
                     _under(m, inverse2(box_swap(i, g))),
                     _over(alg.lam, g))
    lambda_m, unique = solve_cell_system(
        compose1(l, box1(i, idB)), identity1(carrier),
        [(lambda z: _under(g, z), rhs_lam)])
    assert lambda_m is not None and unique, "left unitor fails to descend"

    mod = LeftModule(alg, carrier, l, lambda_m, kappa)
    rep = check_module(mod)
    for eq, line in rep.items():
        if not line["ok"]:
            raise AxiomViolation(eq, line["first_diff"])
    return mod


# extra builders -------------------------------------------------------------

def graded_group_algebra(field: FieldSpec, table, omega=None,
                         name: str = "") -> AlgebraObject:
    """The group algebra of G as an algebra in 2Vect_G (one simple per grade),
    optionally twisted by a 3-cocycle omega(a, b, c) -> scalar literal."""
    n = len(table)
    entry = {
        "kind": "fusion_algebra",
        "name": name or f"group_algebra_{n}",
        "field": _field_entry(field),
        "simples": [f"g{k}" for k in range(n)],
        "unit": "g0",
        "fusion": {f"g{a} g{b}": {f"g{table[a][b]}": 1}
                   for a in range(n) for b in range(n)},
        "F": {},
        "group": {"table": [list(r) for r in table],
                  "grades": list(range(n))},
    }
    if omega is not None:
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    d = table[table[a][b]][c]
                    entry["F"][f"g{a} g{b} g{c} g{d}"] = {
                        f"g{table[a][b]} g{table[b][c]}": omega(a, b, c)}
    return load_fusion_algebra(entry)


def end_rank2_algebra(field: FieldSpec) -> AlgebraObject:
    """The multifusion algebra End(Vec^2): simples e_ij, e_ij e_kl = d_jk e_il.

    The unit is decomposable (e_11 + e_22), so this bypasses the fusion
    loader; all structure cells are identities on one-dimensional blocks.
    """
    amb = two_vect(field)
    A = plain_object(amb, 4)
    pair = [(1, 1), (1, 2), (2, 1), (2, 2)]
    idx = {p: k for k, p in enumerate(pair)}
    mdims = [[0] * 16 for _ in range(4)]
    for (a, bq), s in idx.items():
        for (c, d), t in idx.items():
            if bq == c:
                mdims[idx[(a, d)]][s * 4 + t] = 1
    m = generator(box_object(A, A), A, mdims, "m")
    i = generator(unit_object(amb), A, [[1], [0], [0], [1]], "i")
    mu_src = compose1(m, box1(m, identity1(A)))
    mu_tgt = compose1(m, box1(identity1(A), m))
    one = ScalarMatrix(field, [[field.one()]])
    mu = TwoMorphism(mu_src, mu_tgt, {
        (s, t): one for s in range(64) for t in range(4)
        if mu_src.n_paths(s, t) == 1})
    lam = TwoMorphism(compose1(m, box1(i, identity1(A))), identity1(A),
                      {(a, a): one for a in range(4)})
    rho = TwoMorphism(compose1(m, box1(identity1(A), i)), identity1(A),
                      {(a, a): one for a in range(4)})
    alg = AlgebraObject(A, m, i, lam, mu, rho, "end_rank2",
                        tuple(f"e{a}{bq}" for a, bq in pair), 0)
    rep = check_algebra(alg)
    for eq, line in rep.items():
        if not line["ok"]:
            raise AxiomViolation(eq, line["first_diff"])
    return alg


# catalog --------------------------------------------------------------------

CATALOG_ENV = "TWOCAT_CATALOG_DIR"


def _catalog_root():
    override = os.environ.get(CATALOG_ENV)
    if override:
        return override
    return resources.files("twocat") / "catalog"


def catalog_names() -> list[str]:
    root = _catalog_root()
    if isinstance(root, str):
        names = [f[:-5] for f in os.listdir(root) if f.endswith(".json")]
    else:
        names = [p.name[:-5] for p in root.iterdir()
                 if p.name.endswith(".json")]
    return sorted(names)


def catalog_entry(name: str) -> dict:
    root = _catalog_root()
    if isinstance(root, str):
        path = os.path.join(root, f"{name}.json")
        if not os.path.exists(path):
            raise MalformedData(f"no catalog entry named {name!r}")
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    path = root / f"{name}.json"
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise MalformedData(f"no catalog entry named {name!r}") from exc


def catalog_algebra(name: str, field: FieldSpec | None = None) -> AlgebraObject:
    entry = catalog_entry(name)
    if entry.get("kind") != "fusion_algebra":
        raise MalformedData(f"catalog entry {name!r} is not a fusion algebra")
    return load_fusion_algebra(entry, field)


def internal_algebra_from_entry(alg: AlgebraObject,
                                entry: dict) -> InternalAlgebra:
    preset = entry.get("preset")
    if preset == "group_algebra":
        return group_algebra_object(alg)
    if preset == "unit":
        return unit_internal_algebra(alg)
    raise MalformedData(f"unknown internal algebra preset {preset!r}")


def catalog_module(name: str) -> RightModule:
    entry = catalog_entry(name)
    if entry.get("kind") != "internal_algebra_module":
        raise MalformedData(f"catalog entry {name!r} is not a module entry")
    alg = catalog_algebra(entry["base"])
    return module_from_internal_algebra(alg, internal_algebra_from_entry(alg, entry))
