"""Rigidity and separability of algebra objects.

An algebra object is rigid when its multiplication 1-morphism admits a right
adjoint that is a map of bimodules; it is separable when, additionally, the
counit of that adjunction splits by a bimodule section gamma of the
multiplication.  Both properties are decided exactly: the adjunction data is
built in closed form, the bimodule structure cells of the adjoint are the
canonical mates, and the section is found (or refuted with a rank-defect
certificate) by exact linear algebra over the ambient field.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .ambient import (
    OneMorphism,
    TwoMorphism,
    adjoint1,
    box1,
    box2,
    box_object,
    box_swap,
    compose1,
    id2,
    identity1,
    inverse2,
    solve_cell_system,
    vcompose2,
)
from .structures import (
    AlgebraObject,
    Bimodule,
    LeftModule,
    ModuleMap,
    RightModule,
    _bimodule_map_pairs,
    _chain,
    _left_map_pairs,
    _over,
    _report,
    _right_map_pairs,
    _under,
    check_bimodule,
    regular_bimodule,
    regular_left_module,
    regular_right_module,
    report_passed,
)

__all__ = [
    "Infeasible",
    "RigidityWitness",
    "SeparabilityWitness",
    "double_bimodule",
    "multiplication_bimodule_map",
    "rigidity_report",
    "is_rigid",
    "separability_report",
    "is_separable",
    "faithful",
]


# results --------------------------------------------------------------------

@dataclass(frozen=True)
class Infeasible:
    """Verified failure certificate: why no witness exists."""

    reason: str
    report: dict | None = None
    rank_defect: int | None = None
    system: dict | None = None


@dataclass(frozen=True)
class RigidityWitness:
    """Right adjoint of the multiplication with its bimodule structure."""

    algebra: AlgebraObject
    m_star: OneMorphism
    eta: TwoMorphism      # Id_{A box A} => m* m
    epsilon: TwoMorphism  # m m* => Id_A
    psi_r: TwoMorphism    # (1 box m)(m* box 1) => m* m
    psi_l: TwoMorphism    # (m box 1)(1 box m*) => m* m
    report: dict = dc_field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class SeparabilityWitness:
    """Bimodule section gamma of the multiplication splitting its counit."""

    rigidity: RigidityWitness
    gamma: TwoMorphism    # Id_A => m m*
    unique: bool = True
    report: dict = dc_field(default_factory=dict, compare=False)

    @property
    def algebra(self) -> AlgebraObject:
        return self.rigidity.algebra


# the free bimodule A box A --------------------------------------------------

def double_bimodule(alg: AlgebraObject) -> Bimodule:
    """A box A as an A-A-bimodule: outer multiplications act, the middle
    interchanger balances the two actions."""
    A, m = alg.A, alg.m
    idA = identity1(A)
    AA = box_object(A, A)
    left = LeftModule(alg, AA, box1(m, idA),
                      box2(alg.lam, id2(idA)), box2(alg.mu, id2(idA)))
    right = RightModule(alg, AA, box1(idA, m),
                        box2(id2(idA), alg.mu), box2(id2(idA), alg.rho))
    beta = inverse2(box_swap(m, m))
    return Bimodule(left, right, beta)


def multiplication_bimodule_map(alg: AlgebraObject) -> ModuleMap:
    """The multiplication as a bimodule map A box A -> A."""
    return ModuleMap(double_bimodule(alg), regular_bimodule(alg), alg.m,
                     psi=alg.mu, chi=inverse2(alg.mu))


# canonical mates ------------------------------------------------------------

def _mate_cells(alg: AlgebraObject, m_star, eta, epsilon):
    """Bimodule structure cells of m* induced by the adjunction."""
    A, m, mu = alg.A, alg.m, alg.mu
    idA = identity1(A)

    # right action cell psi_r: (1 box m)(m* box 1) => m* m
    u_r = compose1(box1(idA, m), box1(m_star, idA))
    x_r = _chain(
        _over(inverse2(mu), box1(m_star, idA)),
        _under(m, box2(epsilon, id2(idA))),
    )
    psi_r = _chain(_over(eta, u_r), _under(m_star, x_r))

    # left action cell psi_l: (m box 1)(1 box m*) => m* m
    u_l = compose1(box1(m, idA), box1(idA, m_star))
    x_l = _chain(
        _over(mu, box1(idA, m_star)),
        _under(m, box2(id2(idA), epsilon)),
    )
    psi_l = _chain(_over(eta, u_l), _under(m_star, x_l))
    return psi_r, psi_l


def _composite_endomaps(alg: AlgebraObject, w: "RigidityWitness"):
    """The two adjunction composites as bimodule endomaps.

    Returns (mm_star map on the regular bimodule, m_star m map on the double
    bimodule), with structure cells assembled from the factors.
    """
    m, mu = alg.m, alg.mu
    idA = identity1(alg.A)
    m_star, psi_r, psi_l = w.m_star, w.psi_r, w.psi_l
    reg = regular_bimodule(alg)
    dbl = double_bimodule(alg)

    mm_star = compose1(m, m_star)
    psi_mm = _chain(_over(mu, box1(m_star, idA)), _under(m, psi_r))
    chi_mm = _chain(_over(inverse2(mu), box1(idA, m_star)), _under(m, psi_l))
    counit_side = ModuleMap(reg, reg, mm_star, psi=psi_mm, chi=chi_mm)

    m_star_m = compose1(m_star, m)
    psi_sm = _chain(_over(psi_r, box1(m, idA)), _under(m_star, mu))
    chi_sm = _chain(_over(psi_l, box1(idA, m)), _under(m_star, inverse2(mu)))
    unit_side = ModuleMap(dbl, dbl, m_star_m, psi=psi_sm, chi=chi_sm)
    return counit_side, unit_side


def _identity_map(bim: Bimodule) -> ModuleMap:
    f = identity1(bim.P)
    return ModuleMap(bim, bim, f, psi=id2(bim.right.n), chi=id2(bim.left.l))


def _intertwiner_pairs(src: ModuleMap, tgt: ModuleMap, gamma: TwoMorphism,
                       right_name: str, left_name: str):
    """Named bimodule-intertwiner equations for gamma: src => tgt."""
    idA = identity1(src.src.right.algebra.A)
    lhs_r = vcompose2(tgt.psi,
                      _under(tgt.src.right.n, box2(gamma, id2(idA))))
    rhs_r = vcompose2(_over(gamma, src.src.right.n), src.psi)
    yield right_name, lhs_r, rhs_r
    lhs_l = vcompose2(tgt.chi,
                      _under(tgt.src.left.l, box2(id2(idA), gamma)))
    rhs_l = vcompose2(_over(gamma, src.src.left.l), src.chi)
    yield left_name, lhs_l, rhs_l


_RIGHT_RENAME = {"modulemapassociativity": "rigidrightassociativity",
                 "modulemapunitality": "rigidrightunit"}
_LEFT_RENAME = {"leftmodulemapassociativity": "rigidleftassociativity",
                "leftmodulemapunitality": "rigidleftunit"}
_BIMOD_RENAME = {"bimodulemapassociativity": "rigidbimodule"}


def _renamed(pairs, names):
    for name, lhs, rhs in pairs:
        yield names[name], lhs, rhs


def rigidity_report(alg: AlgebraObject, w: RigidityWitness) -> dict:
    """The eleven equations certifying a rigidity witness."""
    m = alg.m
    m_star, eta, epsilon = w.m_star, w.eta, w.epsilon
    dbl = double_bimodule(alg)

    pairs = []
    # the two triangle identities of the adjunction
    pairs.append(("snakeright",
                  _chain(_under(m, eta), _over(epsilon, m)), id2(m)))
    pairs.append(("snakeleft",
                  _chain(_over(eta, m_star), _under(m_star, epsilon)),
                  id2(m_star)))
    # m* is a map of right, left and two-sided modules
    pairs.extend(_renamed(
        _right_map_pairs(regular_right_module(alg), dbl.right,
                         m_star, w.psi_r), _RIGHT_RENAME))
    pairs.extend(_renamed(
        _left_map_pairs(regular_left_module(alg), dbl.left,
                        m_star, w.psi_l), _LEFT_RENAME))
    pairs.extend(_renamed(
        _bimodule_map_pairs(regular_bimodule(alg), dbl,
                            m_star, w.psi_r, w.psi_l), _BIMOD_RENAME))
    # unit and counit intertwine the composite endomaps with the identities
    counit_side, unit_side = _composite_endomaps(alg, w)
    pairs.extend(_intertwiner_pairs(counit_side,
                                    _identity_map(regular_bimodule(alg)),
                                    epsilon, "epsilonright", "epsilonleft"))
    pairs.extend(_intertwiner_pairs(_identity_map(dbl), unit_side,
                                    eta, "etaright", "etaleft"))
    return _report(pairs)


def _resolve_structure_cell(alg, w, side: str):
    """Second attempt: solve one structure cell of m* from its equations
    that are linear in that cell, keeping the adjunction data fixed."""
    m = alg.m
    idA = identity1(alg.A)
    if side == "right":
        src_frame = compose1(box1(idA, m), box1(w.m_star, idA))
    else:
        src_frame = compose1(box1(m, idA), box1(idA, w.m_star))
    tgt_frame = compose1(w.m_star, m)

    dbl = double_bimodule(alg)
    equations = []
    if side == "right":
        def unit_eq(cell):
            pairs = list(_right_map_pairs(regular_right_module(alg),
                                          dbl.right, w.m_star, cell))
            _, lhs, rhs = pairs[1]
            return _sub(lhs, rhs)
    else:
        def unit_eq(cell):
            pairs = list(_left_map_pairs(regular_left_module(alg),
                                         dbl.left, w.m_star, cell))
            _, lhs, rhs = pairs[1]
            return _sub(lhs, rhs)
    zero = TwoMorphism(src_frame, tgt_frame, {})
    probe = unit_eq(zero)
    equations.append((unit_eq, TwoMorphism(probe.src, probe.tgt, {})))
    sol, _ = solve_cell_system(src_frame, tgt_frame, equations)
    return sol


def is_rigid(alg: AlgebraObject) -> RigidityWitness | Infeasible:
    """Build and verify a rigidity witness for the multiplication."""
    m_star, eta, epsilon = adjoint1(alg.m)
    psi_r, psi_l = _mate_cells(alg, m_star, eta, epsilon)
    w = RigidityWitness(alg, m_star, eta, epsilon, psi_r, psi_l)
    rep = rigidity_report(alg, w)
    if report_passed(rep):
        return RigidityWitness(alg, m_star, eta, epsilon, psi_r, psi_l,
                               report=rep)
    # bounded retry: re-solve each structure cell from its unit equation,
    # keeping the adjunction fixed, then re-verify everything
    alt_r = _resolve_structure_cell(alg, w, "right")
    alt_l = _resolve_structure_cell(alg, w, "left")
    if alt_r is not None and alt_l is not None:
        w2 = RigidityWitness(alg, m_star, eta, epsilon, alt_r, alt_l)
        rep2 = rigidity_report(alg, w2)
        if report_passed(rep2):
            return RigidityWitness(alg, m_star, eta, epsilon, alt_r, alt_l,
                                   report=rep2)
        rep = rep2
    return Infeasible(reason="multiplication adjoint is not a bimodule map",
                      report=rep)


# separability ---------------------------------------------------------------

def _sub(a: TwoMorphism, b: TwoMorphism) -> TwoMorphism:
    assert a.src == b.src and a.tgt == b.tgt
    return TwoMorphism._make(a.src, a.tgt,
                             {k: a.blocks[k] - b.blocks[k] for k in a.blocks})


def _gamma_equations(alg: AlgebraObject, w: RigidityWitness):
    """Constraints on gamma: Id_A => m m*, each affine-linear in gamma."""
    m = alg.m
    idA = identity1(alg.A)
    counit_side, _ = _composite_endomaps(alg, w)
    psi_mm, chi_mm = counit_side.psi, counit_side.chi
    src_frame = idA
    tgt_frame = compose1(m, w.m_star)
    zero = TwoMorphism(src_frame, tgt_frame, {})

    def section(gamma):
        return vcompose2(w.epsilon, gamma)

    def right_intertwiner(gamma):
        lhs = vcompose2(psi_mm, _under(m, box2(gamma, id2(idA))))
        return _sub(lhs, _over(gamma, m))

    def left_intertwiner(gamma):
        lhs = vcompose2(chi_mm, _under(m, box2(id2(idA), gamma)))
        return _sub(lhs, _over(gamma, m))

    equations = [(section, id2(idA))]
    for fn in (right_intertwiner, left_intertwiner):
        probe = fn(zero)
        equations.append((fn, TwoMorphism(probe.src, probe.tgt, {})))
    names = ("gammasection", "gammaright", "gammaleft")
    return src_frame, tgt_frame, equations, names


def separability_report(alg: AlgebraObject, w: RigidityWitness,
                        gamma: TwoMorphism) -> dict:
    """Evaluate the section and intertwiner equations at a candidate gamma."""
    _, _, equations, names = _gamma_equations(alg, w)
    return _report((name, fn(gamma), target)
                   for name, (fn, target) in zip(names, equations))


def is_separable(alg: AlgebraObject,
                 rigidity: RigidityWitness | None = None
                 ) -> SeparabilityWitness | Infeasible:
    """Decide separability by solving exactly for a bimodule section gamma
    of the multiplication; failure carries the rank defect of the linear
    system as an infeasibility certificate."""
    w = rigidity if rigidity is not None else is_rigid(alg)
    if isinstance(w, Infeasible):
        return w
    src_frame, tgt_frame, equations, names = _gamma_equations(alg, w)
    gamma, unique, info = solve_cell_system(src_frame, tgt_frame, equations,
                                            want_info=True)
    if gamma is None:
        return Infeasible(reason="no bimodule section of the multiplication",
                          rank_defect=info["rank_defect"], system=info)
    rep = separability_report(alg, w, gamma)
    if not report_passed(rep):
        return Infeasible(reason="candidate section fails verification",
                          report=rep)
    return SeparabilityWitness(w, gamma, unique=unique, report=rep)


def faithful(alg: AlgebraObject) -> bool:
    """Nonzero algebras act faithfully over a simple monoidal unit."""
    return alg.A.rank > 0
