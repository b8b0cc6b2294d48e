"""Relative tensor products of module objects over separable algebras.

The relative tensor product M box_A N is computed by splitting an explicit
2-condensation monad on M box N: the monad inserts the coproduct of the unit
between the two factors and acts on both sides; its multiplication contracts
the inserted beads through the adjunction counit, and its comultiplication
duplicates them through the separability section.  Everything is assembled
from named structure cells, so the monad equations hold exactly and the
splitting is canonical.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .ambient import (
    CondensationMonad,
    OneMorphism,
    Splitting,
    TwoMorphism,
    TwoObject,
    box1,
    box2,
    box_object,
    box_swap,
    compose1,
    condensation_split,
    id2,
    identity1,
    inverse2,
    monad_equations,
    solve_cell_system,
    split_idempotent2,
    vcompose2,
)
from .separability import SeparabilityWitness, is_separable
from .structures import (
    AlgebraObject,
    Balanced1Morphism,
    Bimodule,
    LeftModule,
    ModuleMap,
    RightModule,
    regular_left_module,
    regular_right_module,
    _chain,
    _over,
    _under,
    check_balanced,
    report_passed,
)

__all__ = [
    "CoherenceCells",
    "Equivalence",
    "NotSeparable",
    "RelativeTensor",
    "bimodule_tensor",
    "build_condensation_monad",
    "coherence_cells",
    "factor_balanced",
    "factor_balanced_2cell",
    "relative_tensor",
    "tensor_map",
    "verify_monad",
]


class NotSeparable(Exception):
    """Raised when a relative tensor is requested over a non-separable
    algebra; carries the infeasibility certificate."""

    def __init__(self, certificate):
        super().__init__(certificate.reason)
        self.certificate = certificate


def _witness(A: AlgebraObject, witness) -> SeparabilityWitness:
    if witness is None:
        witness = is_separable(A)
    if not isinstance(witness, SeparabilityWitness):
        raise NotSeparable(witness)
    return witness


def _at(cell: TwoMorphism, below: OneMorphism, above: OneMorphism):
    """Whisker a cell between a composite applied before and one after."""
    return _under(above, _over(cell, below))


@dataclass
class _MonadPieces:
    """Named sub-composites of the condensation monad, kept for reuse by
    the balanced structure and the factorization cells."""

    A: AlgebraObject
    M: RightModule
    N: LeftModule
    w: SeparabilityWitness
    C: OneMorphism       # bead insertion  M N -> M (A A) N
    K: OneMorphism       # right action    M A (A N) -> M (A N)
    L: OneMorphism       # left action     M (A N) -> M N
    e: OneMorphism
    mu: TwoMorphism
    delta: TwoMorphism


def _bead_contraction(w: SeparabilityWitness):
    """theta: the doubled bead composite => m* i, contracted through the
    adjunction counit; and its dual section built from the separability
    section gamma."""
    alg = w.algebra
    m, i = alg.m, alg.i
    rig = w.rigidity
    m_star, eps = rig.m_star, rig.epsilon
    psi_r, psi_l = rig.psi_r, rig.psi_l
    idA = identity1(alg.A)
    AA = box_object(alg.A, alg.A)

    c = compose1(m_star, i)                      # I -> A A
    b2 = box1(idA, box1(i, idA))                 # A A -> A A A
    b3 = box1(idA, box1(m_star, idA))            # A A A -> A A A A
    b4 = box1(m, identity1(AA))                  # A A A A -> A A A
    b5 = box1(idA, m)                            # A A A -> A A
    doubled = compose1(b5, compose1(b4, compose1(b3, compose1(b2, c))))

    m_star_side = compose1(b5, box1(m_star, idA))
    step_a = _at(box2(psi_l, id2(idA)), compose1(b2, c), b5)
    step_b = _at(box2(alg.rho, id2(idA)), c, m_star_side)
    step_c = _over(psi_r, c)
    step_d = _under(m_star, _over(eps, i))
    contract = _chain(step_a, step_b, step_c, step_d)

    dual = _chain(
        _under(m_star, _over(w.gamma, i)),
        _over(inverse2(psi_r), c),
        _at(box2(inverse2(alg.rho), id2(idA)), c, m_star_side),
        _at(box2(inverse2(psi_l), id2(idA)), compose1(b2, c), b5),
    )
    return c, doubled, contract, dual


def _monad_pieces(A: AlgebraObject, M: RightModule, N: LeftModule,
                  w: SeparabilityWitness) -> _MonadPieces:
    m, i = A.m, A.i
    rig = w.rigidity
    m_star = rig.m_star
    MO, NO = M.M, N.M
    n, l = M.n, N.l
    idM, idN, idA = identity1(MO), identity1(NO), identity1(A.A)
    AN = box_object(A.A, NO)
    MA = box_object(MO, A.A)
    A4A2N = box_object(A.A, AN)

    c, doubled, contract, dual = _bead_contraction(w)
    C = box1(idM, box1(c, idN))
    K = box1(n, identity1(AN))
    L = box1(idM, l)
    e = compose1(L, compose1(K, C))
    ee = compose1(e, e)
    assert ee == compose1(e, e)

    # rearrange e . e so the two beads sit adjacent above a single pair of
    # actions: slide the second bead below the first action pair, then merge
    # the doubled actions through the module structure cells
    KC = compose1(K, C)
    LKC = e
    cell1 = _at(box2(id2(idM), box_swap(c, l)), KC, compose1(L, K))

    C2p = box1(idM, box1(c, identity1(AN)))
    L1p = box1(identity1(box_object(MO, box_object(A.A, A.A))), l)
    cell2 = _at(box2(inverse2(box_swap(n, c)), id2(identity1(AN))),
                C, compose1(L, compose1(K, L1p)))

    C2pp = box1(identity1(MA), box1(c, identity1(AN)))
    K1pp = box1(n, identity1(box_object(box_object(A.A, A.A), AN)))
    below3 = compose1(K1pp, compose1(C2pp, C))
    cell3 = _at(box_swap(n, box1(idA, l)), below3, L)

    K2p = box1(n, identity1(A4A2N))
    cell4 = _at(box2(M.nu, id2(identity1(A4A2N))), compose1(C2pp, C),
                compose1(L, box1(identity1(MA), l)))

    mL = box1(box1(idM, m), identity1(A4A2N))
    below5 = compose1(K2p, compose1(mL, compose1(C2pp, C)))
    cell5 = _over(box2(id2(idM), inverse2(N.kappa)), below5)

    cell6 = _at(inverse2(box_swap(n, box1(m, idN))),
                compose1(mL, compose1(C2pp, C)), L)

    rearrange = _chain(cell1, cell2, cell3, cell4, cell5, cell6)

    contract_w = _under(compose1(L, K),
                        box2(id2(idM), box2(contract, id2(idN))))
    dual_w = _under(compose1(L, K),
                    box2(id2(idM), box2(dual, id2(idN))))
    mu = _chain(rearrange, contract_w)
    delta = _chain(dual_w, inverse2(rearrange))
    return _MonadPieces(A, M, N, w, C, K, L, e, mu, delta)


def _balanced_monad_cell(p: _MonadPieces) -> TwoMorphism:
    """beta^e: e (n box 1_N) => e (1_M box l).

    Both sides slide down to the common middle stack L K (1_M box m* box 1_N):
    the inserted coproduct is swapped past the outer action, the doubled
    action is merged through the module structure cell, and the resulting
    one-sided bead contracts through a mate and a unitor.
    """
    A, M, N, w = p.A, p.M, p.N, p.w
    m, i = A.m, A.i
    rig = w.rigidity
    m_star = rig.m_star
    psi_r, psi_l = rig.psi_r, rig.psi_l
    n, l = M.n, N.l
    idM, idN, idA = identity1(M.M), identity1(N.M), identity1(A.A)
    AN = box_object(A.A, N.M)
    MA = box_object(M.M, A.A)
    LK = compose1(p.L, p.K)
    c = compose1(m_star, i)

    # left side: insert after the module leg, merge the two right actions,
    # contract (m 1)(1 m*)(1 i) => m*
    C2 = box1(identity1(MA), box1(c, idN))
    lbead = _chain(_over(psi_l, box1(idA, i)), _under(m_star, A.rho))
    lchain = _chain(
        _under(LK, inverse2(box_swap(n, box1(c, idN)))),
        _at(box2(M.nu, id2(identity1(AN))), C2, p.L),
        _under(LK, box2(id2(idM), box2(lbead, id2(idN)))),
    )

    # right side: insert before the module leg, merge the two left actions,
    # contract (1 m)(m* 1)(i 1) => m*
    C1 = box1(idM, box1(c, identity1(AN)))
    rbead = _chain(_over(psi_r, box1(i, idA)), _under(m_star, A.lam))
    rchain = _chain(
        _under(LK, box2(id2(idM), box_swap(c, l))),
        _at(box_swap(n, box1(idA, l)), C1, p.L),
        _over(box2(id2(idM), inverse2(N.kappa)),
              compose1(box1(n, identity1(box_object(A.A, AN))), C1)),
        _at(inverse2(box_swap(n, box1(m, idN))), C1, p.L),
        _under(LK, box2(id2(idM), box2(rbead, id2(idN)))),
    )
    return vcompose2(inverse2(rchain), lchain)


def _absorption(split: Splitting):
    """alpha: t e => t and its section t => t e, from the splitting cells;
    alpha . section = id because phi gamma = Id."""
    f = split.f
    alpha = _chain(_under(f, inverse2(split.theta)), _over(split.phi, f))
    section = _chain(_over(split.gamma, f), _under(f, split.theta))
    return alpha, section


def build_condensation_monad(A: AlgebraObject, M: RightModule, N: LeftModule,
                             witness: SeparabilityWitness | None = None
                             ) -> CondensationMonad:
    """The 2-condensation monad on M box N whose splitting is M box_A N."""
    w = _witness(A, witness)
    p = _monad_pieces(A, M, N, w)
    return CondensationMonad(carrier=box_object(M.M, N.M), e=p.e,
                             mu=p.mu, delta=p.delta)


def verify_monad(m: CondensationMonad) -> dict:
    """Report on the five 2-condensation monad equations."""
    return {name: {"ok": ok, "first_diff": None}
            for name, ok in monad_equations(m).items()}


@dataclass
class RelativeTensor:
    """The relative tensor product M box_A N with its universal balanced
    1-morphism and the splitting data that computed it."""

    T: TwoObject
    t: Balanced1Morphism
    splitting: Splitting
    monad: CondensationMonad
    pieces: _MonadPieces = dc_field(repr=False)
    beta_e: TwoMorphism = dc_field(repr=False)
    witness: SeparabilityWitness = dc_field(repr=False)


def relative_tensor(A: AlgebraObject, M: RightModule, N: LeftModule,
                    witness: SeparabilityWitness | None = None
                    ) -> RelativeTensor:
    """Split the condensation monad on M box N and equip the splitting leg
    with its balanced structure."""
    w = _witness(A, witness)
    p = _monad_pieces(A, M, N, w)
    monad = CondensationMonad(carrier=box_object(M.M, N.M), e=p.e,
                              mu=p.mu, delta=p.delta)
    split = condensation_split(monad)
    beta_e = _balanced_monad_cell(p)
    alpha, section = _absorption(split)
    beta_t = _chain(
        _over(section, box1(M.n, identity1(N.M))),
        _under(split.f, beta_e),
        _over(alpha, box1(identity1(M.M), N.l)),
    )
    t = Balanced1Morphism(M, N, split.B, split.f, beta_t)
    return RelativeTensor(split.B, t, split, monad, p, beta_e, w)

# factorization through the universal leg ----------------------------------

def _wrap1(u: OneMorphism, W: TwoObject | None, V: TwoObject | None):
    if W is not None:
        u = box1(identity1(W), u)
    if V is not None:
        u = box1(u, identity1(V))
    return u


def _wrap2(cell: TwoMorphism, W: TwoObject | None, V: TwoObject | None):
    if W is not None:
        cell = box2(id2(identity1(W)), cell)
    if V is not None:
        cell = box2(cell, id2(identity1(V)))
    return cell


def _absorb_cells(p: _MonadPieces, h: OneMorphism, beta_h: TwoMorphism,
                  W: TwoObject | None, V: TwoObject | None):
    """zeta: h (e between spectators) => h for a balanced h, and its section;
    zeta . section = id because epsilon gamma = Id."""
    A, M, N, w = p.A, p.M, p.N, p.w
    m, i = A.m, A.i
    eps = w.rigidity.epsilon
    n, l = M.n, N.l
    idM, idN = identity1(M.M), identity1(N.M)
    MA = box_object(M.M, A.A)

    def wr1(u):
        return _wrap1(u, W, V)

    def wr2(cell):
        return _wrap2(cell, W, V)

    C_w, L_w = wr1(p.C), wr1(p.L)
    l2 = box1(identity1(MA), l)
    bead = _over(eps, i)            # m m* i => i
    zeta = _chain(
        _under(h, _over(wr2(inverse2(box_swap(n, l))), C_w)),
        _over(beta_h, compose1(wr1(l2), C_w)),
        _at(wr2(box2(id2(idM), inverse2(N.kappa))), C_w, h),
        _under(compose1(h, L_w), wr2(box2(id2(idM), box2(bead, id2(idN))))),
        _under(h, wr2(box2(id2(idM), N.lambda_m))),
    )
    bead_sec = _over(p.w.gamma, i)  # i => m m* i
    section = _chain(
        _under(h, wr2(box2(id2(idM), inverse2(N.lambda_m)))),
        _under(compose1(h, L_w), wr2(box2(id2(idM), box2(bead_sec, id2(idN))))),
        _at(wr2(box2(id2(idM), N.kappa)), C_w, h),
        _over(inverse2(beta_h), compose1(wr1(l2), C_w)),
        _under(h, _over(wr2(box_swap(n, l)), C_w)),
    )
    return zeta, section


def _factor_through(rt: "RelativeTensor", h: OneMorphism, beta_h: TwoMorphism,
                    W: TwoObject | None = None, V: TwoObject | None = None):
    """Split the absorption idempotent on h g to obtain f_tilde with
    xi: f_tilde (1_W t 1_V) => h; spectators W, V sit outside the balanced
    pair."""
    zeta, section = _absorb_cells(rt.pieces, h, beta_h, W, V)
    g_w = _wrap1(rt.splitting.g, W, V)
    f_w = _wrap1(rt.splitting.f, W, V)
    theta_w = _wrap2(rt.splitting.theta, W, V)
    phi_w = _wrap2(rt.splitting.phi, W, V)
    hg = compose1(h, g_w)
    q = _chain(
        _over(section, g_w),
        _under(h, _over(inverse2(theta_w), g_w)),
        _under(hg, phi_w),
    )
    f_tilde, r, s = split_idempotent2(hg, q)
    xi = _chain(_over(s, f_w), _under(h, theta_w), zeta)
    return f_tilde, r, s, xi, zeta, section


def factor_balanced(rt: "RelativeTensor", f: Balanced1Morphism):
    """Item 1 of the universal property: f_tilde with xi: f_tilde t => f."""
    f_tilde, _, _, xi, _, _ = _factor_through(rt, f.f, f.beta_f)
    return f_tilde, xi


def _descend(rt: "RelativeTensor", u1: OneMorphism, u2: OneMorphism,
             rhs: TwoMorphism, W: TwoObject | None = None,
             V: TwoObject | None = None):
    """Solve zeta: u1 => u2 from zeta whiskered with (1_W t 1_V) = rhs;
    uniqueness is the kernel-triviality flag of the linear system."""
    t_w = _wrap1(rt.t.f, W, V)
    zeta, unique = solve_cell_system(
        u1, u2, [(lambda z: _over(z, t_w), rhs)])
    if zeta is None:
        raise ValueError("2-cell does not descend through the universal leg")
    return zeta, unique


def factor_balanced_2cell(rt: "RelativeTensor", fac1, fac2,
                          gamma: TwoMorphism):
    """Item 2 of the universal property: the unique zeta: f1_tilde => f2_tilde
    with xi2 . (zeta t) = gamma . xi1, for factorizations faci = (fi_tilde,
    xi_i) and a balanced intertwiner gamma: f1 => f2."""
    f1_tilde, xi1 = fac1
    f2_tilde, xi2 = fac2
    rhs = _chain(xi1, gamma, inverse2(xi2))
    return _descend(rt, f1_tilde, f2_tilde, rhs)


# bimodule composition -----------------------------------------------------

def _bimodule_tensor_data(P: Bimodule, Q: Bimodule,
                          witness: SeparabilityWitness | None = None):
    """relative_tensor over the middle algebra plus the factored outer
    actions; returns (bimodule, rt, xi_left, xi_right)."""
    A = P.left.algebra
    B = P.right.algebra
    Cc = Q.right.algebra
    if Q.left.algebra is not B:
        if Q.left.algebra != B:
            raise ValueError("middle algebras do not match")
    PM, QM = P.left.M, Q.left.M
    idP, idQ = identity1(PM), identity1(QM)
    idA, idC = identity1(A.A), identity1(Cc.A)
    rt = relative_tensor(B, P.right, Q.left, witness)
    t = rt.t.f
    T = rt.T

    # left A-action, factored with spectator A on the left
    h_l = compose1(t, box1(P.left.l, idQ))
    beta_hl = _chain(
        _under(t, box2(inverse2(P.beta), id2(idQ))),
        _over(rt.t.beta_f, box1(P.left.l, identity1(box_object(B.A, QM)))),
        _under(t, inverse2(box_swap(P.left.l, Q.left.l))),
    )
    l_T, _, _, xi_l, _, _ = _factor_through(rt, h_l, beta_hl, W=A.A)

    # right C-action, factored with spectator C on the right
    h_r = compose1(t, box1(idP, Q.right.n))
    beta_hr = _chain(
        _under(t, inverse2(box_swap(P.right.n, Q.right.n))),
        _over(rt.t.beta_f, box1(identity1(box_object(PM, B.A)), Q.right.n)),
        _under(t, box2(id2(idP), inverse2(Q.beta))),
    )
    n_T, _, _, xi_r, _, _ = _factor_through(rt, h_r, beta_hr, V=Cc.A)

    idT = identity1(T)
    PQ = box_object(PM, QM)
    idPQ = identity1(PQ)

    # left unitor: l_T (i box 1_T) => Id_T
    rhs_lam = _chain(
        _under(l_T, box_swap(A.i, t)),
        _over(xi_l, box1(A.i, idPQ)),
        _under(t, box2(P.left.lambda_m, id2(idQ))),
    )
    lam_T, _ = _descend(rt, compose1(l_T, box1(A.i, idT)), idT, rhs_lam)

    # left associator: l_T (m box 1_T) => l_T (1_A box l_T)
    rhs_kap = _chain(
        _under(l_T, box_swap(A.m, t)),
        _over(xi_l, box1(A.m, idPQ)),
        _under(t, box2(P.left.kappa, id2(idQ))),
        inverse2(_chain(
            _under(l_T, box2(id2(idA), xi_l)),
            _over(xi_l, box1(idA, box1(P.left.l, idQ))),
        )),
    )
    kap_T, _ = _descend(
        rt, compose1(l_T, box1(A.m, idT)), compose1(l_T, box1(idA, l_T)),
        rhs_kap, W=box_object(A.A, A.A))

    # right unitor: n_T (1_T box i) => Id_T
    rhs_rho = _chain(
        _under(n_T, inverse2(box_swap(t, Cc.i))),
        _over(xi_r, box1(idPQ, Cc.i)),
        _under(t, box2(id2(idP), Q.right.rho_m)),
    )
    rho_T, _ = _descend(rt, compose1(n_T, box1(idT, Cc.i)), idT, rhs_rho)

    # right associator: n_T (n_T box 1_C) => n_T (1_T box m)
    rhs_nu = _chain(
        _under(n_T, box2(xi_r, id2(idC))),
        _over(xi_r, box1(box1(idP, Q.right.n), idC)),
        _under(t, box2(id2(idP), Q.right.nu)),
        inverse2(_chain(
            _under(n_T, inverse2(box_swap(t, Cc.m))),
            _over(xi_r, box1(idPQ, Cc.m)),
        )),
    )
    nu_T, _ = _descend(
        rt, compose1(n_T, box1(n_T, idC)), compose1(n_T, box1(idT, Cc.m)),
        rhs_nu, V=box_object(Cc.A, Cc.A))

    # outer actions commute: n_T (l_T box 1_C) => l_T (1_A box n_T)
    rhs_beta = _chain(
        _under(n_T, box2(xi_l, id2(idC))),
        _over(xi_r, box1(P.left.l, identity1(box_object(QM, Cc.A)))),
        _under(t, inverse2(box_swap(P.left.l, Q.right.n))),
        inverse2(_chain(
            _under(l_T, box2(id2(idA), xi_r)),
            _over(xi_l, box1(idA, box1(idP, Q.right.n))),
        )),
    )
    beta_T, _ = _descend(
        rt, compose1(n_T, box1(l_T, idC)), compose1(l_T, box1(idA, n_T)),
        rhs_beta, W=A.A, V=Cc.A)

    bim = Bimodule(LeftModule(A, T, l_T, lam_T, kap_T),
                   RightModule(Cc, T, n_T, nu_T, rho_T), beta_T)
    return bim, rt, xi_l, xi_r


def bimodule_tensor(P: Bimodule, Q: Bimodule,
                    witness: SeparabilityWitness | None = None) -> Bimodule:
    """P box_B Q as an (A, C)-bimodule: the relative tensor of the underlying
    one-sided modules with outer actions induced through the universal
    property."""
    bim, _, _, _ = _bimodule_tensor_data(P, Q, witness)
    return bim


# coherence cells ----------------------------------------------------------

@dataclass(frozen=True)
class Equivalence:
    """An equivalence of objects in the module 2-category, witnessed by a
    1-morphism each way and invertible roundtrip 2-cells."""

    forward: OneMorphism
    inverse: OneMorphism
    forward_inverse: TwoMorphism   # forward inverse => Id
    inverse_forward: TwoMorphism   # inverse forward => Id


@dataclass(frozen=True)
class CoherenceCells:
    """Unitor and associator equivalences for the relative tensor, with a
    report on their invertibility (and the three-fold balanced compatibility
    when the associator is built)."""

    l_cell: Equivalence | None
    r_cell: Equivalence | None
    alpha_cell: Equivalence | None
    report: dict


def _equivalence_report(prefix: str, eq: Equivalence, report: dict):
    report[prefix + "forwardinverse"] = {
        "ok": eq.forward_inverse.is_invertible(), "first_diff": None}
    report[prefix + "inverseforward"] = {
        "ok": eq.inverse_forward.is_invertible(), "first_diff": None}


def _left_unitor_cell(P: Bimodule,
                      witness: SeparabilityWitness | None) -> Equivalence:
    """A box_A P => P: factor the left action, invert via the unit leg."""
    A = P.left.algebra
    PM = P.left.M
    idP = identity1(PM)
    rt = relative_tensor(A, regular_right_module(A), P.left, witness)
    t = rt.t.f
    u, _, _, xi, _, _ = _factor_through(rt, P.left.l, P.left.kappa)
    v = compose1(t, box1(A.i, idP))
    uv = _chain(_over(xi, box1(A.i, idP)), P.left.lambda_m)
    rhs_vu = _chain(
        _under(v, xi),
        _under(t, box_swap(A.i, P.left.l)),
        _over(inverse2(rt.t.beta_f),
              box1(A.i, identity1(box_object(A.A, PM)))),
        _under(t, box2(A.lam, id2(idP))),
    )
    vu, _ = _descend(rt, compose1(v, u), identity1(rt.T), rhs_vu)
    return Equivalence(u, v, uv, vu)


def _right_unitor_cell(P: Bimodule,
                       witness: SeparabilityWitness | None) -> Equivalence:
    """P box_B B => P: factor the right action, invert via the unit leg."""
    B = P.right.algebra
    PM = P.right.M
    idP = identity1(PM)
    rt = relative_tensor(B, P.right, regular_left_module(B), witness)
    t = rt.t.f
    u, _, _, xi, _, _ = _factor_through(rt, P.right.n, P.right.nu)
    v = compose1(t, box1(idP, B.i))
    uv = _chain(_over(xi, box1(idP, B.i)), P.right.rho_m)
    rhs_vu = _chain(
        _under(v, xi),
        _under(t, inverse2(box_swap(P.right.n, B.i))),
        _over(rt.t.beta_f, box1(identity1(box_object(PM, B.A)), B.i)),
        _under(t, box2(id2(idP), B.rho)),
    )
    vu, _ = _descend(rt, compose1(v, u), identity1(rt.T), rhs_vu)
    return Equivalence(u, v, uv, vu)


def _associator_cell(P: Bimodule, Q: Bimodule, R: Bimodule,
                     report: dict) -> Equivalence:
    """(P box_B Q) box_C R => P box_B (Q box_C R), by comparing the two
    iterated factorizations of the three-fold balanced leg."""
    B = P.right.algebra
    Cc = Q.right.algebra
    PM, QM, RM = P.left.M, Q.left.M, R.left.M
    idP, idQ, idR = identity1(PM), identity1(QM), identity1(RM)
    PQ = box_object(PM, QM)
    QR = box_object(QM, RM)
    idPQ = identity1(PQ)

    bimPQ, rtPQ, xiL_PQ, xiR_PQ = _bimodule_tensor_data(P, Q)
    bimQR, rtQR, xiL_QR, xiR_QR = _bimodule_tensor_data(Q, R)
    t1, t2 = rtPQ.t.f, rtQR.t.f
    rtL = relative_tensor(Cc, bimPQ.right, R.left)
    rtR = relative_tensor(B, P.right, bimQR.left)
    tL, tR = rtL.t.f, rtR.t.f

    # the three-fold balanced leg j = tR (1_P box t2) and its two balances
    j = compose1(tR, box1(idP, t2))
    beta_B = _chain(
        _under(tR, inverse2(box_swap(P.right.n, t2))),
        _over(rtR.t.beta_f, box1(identity1(box_object(PM, B.A)), t2)),
        _under(tR, box2(id2(idP), xiL_QR)),
    )
    beta_C = _under(tR, box2(id2(idP), rtQR.t.beta_f))

    # compatibility of the two balances across the shared middle factor
    PB = box_object(PM, B.A)
    CR = box_object(Cc.A, RM)
    lhs_compat = _chain(
        _over(beta_B, box1(identity1(PB), box1(Q.right.n, idR))),
        _under(j, box2(id2(idP), box2(inverse2(Q.beta), id2(idR)))),
        _over(beta_C, box1(idP, box1(Q.left.l, identity1(CR)))),
        _under(j, box2(id2(idP),
                       inverse2(box_swap(Q.left.l, R.left.l)))),
    )
    rhs_compat = _chain(
        _under(j, box_swap(P.right.n, box1(Q.right.n, idR))),
        _over(beta_C, box1(P.right.n, identity1(box_object(QM, CR)))),
        _under(j, inverse2(box_swap(P.right.n, box1(idQ, R.left.l)))),
        _over(beta_B, box1(identity1(PB), box1(idQ, R.left.l))),
    )
    report["BCbalancedcompatibility"] = {
        "ok": lhs_compat == rhs_compat, "first_diff": None}

    # forward: factor j over B with spectator R, equip the C-balance, factor
    q, _, _, xi_q, _, _ = _factor_through(rtPQ, j, beta_B, V=RM)
    u1 = compose1(q, box1(bimPQ.right.n, idR))
    u2 = compose1(q, box1(identity1(rtPQ.T), R.left.l))
    rhs_bq = _chain(
        _under(q, box2(xiR_PQ, id2(idR))),
        _over(xi_q, box1(box1(idP, Q.right.n), idR)),
        beta_C,
        inverse2(_chain(
            _under(q, inverse2(box_swap(t1, R.left.l))),
            _over(xi_q, box1(idPQ, R.left.l)),
        )),
    )
    beta_q, _ = _descend(rtPQ, u1, u2, rhs_bq, V=box_object(Cc.A, RM))
    alpha, _, _, xi_a, _, _ = _factor_through(rtL, q, beta_q)

    # backward: factor j' = tL (t1 box 1_R) over C with spectator P
    jp = compose1(tL, box1(t1, idR))
    beta_jp = _chain(
        _under(tL, box2(inverse2(xiR_PQ), id2(idR))),
        _over(rtL.t.beta_f, box1(t1, identity1(CR))),
        _under(tL, inverse2(box_swap(t1, R.left.l))),
    )
    q2, _, _, xi_q2, _, _ = _factor_through(rtQR, jp, beta_jp, W=PM)
    v1 = compose1(q2, box1(P.right.n, identity1(rtQR.T)))
    v2 = compose1(q2, box1(idP, bimQR.left.l))
    rhs_bq2 = _chain(
        _under(q2, box_swap(P.right.n, t2)),
        _over(xi_q2, box1(P.right.n, identity1(QR))),
        _under(tL, box2(rtPQ.t.beta_f, id2(idR))),
        inverse2(_chain(
            _under(q2, box2(id2(idP), xiL_QR)),
            _over(xi_q2, box1(idP, box1(Q.left.l, idR))),
        )),
    )
    beta_q2, _ = _descend(rtQR, v1, v2, rhs_bq2, W=box_object(PM, B.A))
    beta_back, _, _, xi_b, _, _ = _factor_through(rtR, q2, beta_q2)

    # roundtrips, descending twice through the universal legs
    rhs_inner = _chain(_under(alpha, xi_q2),
                       _over(xi_a, box1(t1, idR)), xi_q)
    c_inner, _ = _descend(rtQR, compose1(alpha, q2), tR, rhs_inner, W=PM)
    fwd_inv, _ = _descend(rtR, compose1(alpha, beta_back),
                          identity1(rtR.T),
                          _chain(_under(alpha, xi_b), c_inner))

    rhs_inner2 = _chain(_under(beta_back, xi_q),
                        _over(xi_b, box1(idP, t2)), xi_q2)
    c_inner2, _ = _descend(rtPQ, compose1(beta_back, q), tL, rhs_inner2,
                           V=RM)
    inv_fwd, _ = _descend(rtL, compose1(beta_back, alpha),
                          identity1(rtL.T),
                          _chain(_under(beta_back, xi_a), c_inner2))
    return Equivalence(alpha, beta_back, fwd_inv, inv_fwd)


def coherence_cells(P: Bimodule, Q: Bimodule | None = None,
                    R: Bimodule | None = None,
                    witness: SeparabilityWitness | None = None
                    ) -> CoherenceCells:
    """Unitor equivalences for P, and — when composable Q and R are given —
    the associator equivalence (P box Q) box R => P box (Q box R)."""
    report: dict = {}
    l_cell = _left_unitor_cell(P, witness)
    _equivalence_report("lcell", l_cell, report)
    r_cell = _right_unitor_cell(P, witness)
    _equivalence_report("rcell", r_cell, report)
    alpha_cell = None
    if Q is not None:
        if R is None:
            raise ValueError("associator needs all three bimodules")
        alpha_cell = _associator_cell(P, Q, R, report)
        _equivalence_report("alphacell", alpha_cell, report)
    return CoherenceCells(l_cell, r_cell, alpha_cell, report)


# functoriality ------------------------------------------------------------

def tensor_map(rt_src: "RelativeTensor", rt_tgt: "RelativeTensor",
               fmap: ModuleMap):
    """f box_A N: the 1-morphism induced between relative tensors by a right
    module map f: M -> M' over the same N, with its comparison cell
    xi: (f box_A N) t => t' (f box 1_N)."""
    N = rt_src.t.left
    tp = rt_tgt.t.f
    idN = identity1(N.M)
    AN = box_object(rt_src.pieces.A.A, N.M)
    h = compose1(tp, box1(fmap.f, idN))
    beta_h = _chain(
        _under(tp, box2(inverse2(fmap.psi), id2(idN))),
        _over(rt_tgt.t.beta_f, box1(fmap.f, identity1(AN))),
        _under(tp, inverse2(box_swap(fmap.f, N.l))),
    )
    g, _, _, xi, _, _ = _factor_through(rt_src, h, beta_h)
    return g, xi
