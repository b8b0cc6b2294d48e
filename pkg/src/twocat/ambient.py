"""Skeletal monoidal 2-categories of 2-vector spaces.

Objects are (graded) ranks, 1-morphisms are layered composites of matrix-like
generators with nonnegative integer dimension matrices, and 2-morphisms are
exact block matrices indexed by basis paths through the layers.

Composite 1-morphisms are kept in a normal form: each composite is a tuple of
layers, each layer a tuple of generator factors.  Normalization merges
adjacent identity factors, drops identity factors on the monoidal unit, and
drops layers consisting only of identities; all three moves preserve basis
path counts and their lexicographic enumeration order, so 2-morphism blocks
are stable under normalization.  Interchange of disjoint boxes genuinely
permutes basis paths, so it is an explicit permutation 2-morphism
(`box_swap`), not an identity.
"""

from __future__ import annotations

from dataclasses import dataclass

from .scalars import (
    AssocAlgebra,
    FieldSpec,
    NotSemisimple,
    ScalarMatrix,
    decompose_semisimple_algebra,
    solve_linear,
)


class AmbientSpec:
    """Ambient 2-category: a ground field plus an optional grading group.

    `table[i][j]` is the index of g_i * g_j with identity at index 0; the
    trivial table gives plain 2Vect, a bigger group gives 2Vect_G with
    grade-compatible 1-morphisms and convolution box product.
    """

    def __init__(self, field: FieldSpec, table=((0,),)):
        self.field = field
        self.table = tuple(tuple(row) for row in table)
        n = len(self.table)
        assert all(len(row) == n for row in self.table)
        assert all(self.table[0][j] == j and self.table[j][0] == j for j in range(n))

        self.group_order = n

    def __eq__(self, other):
        return (isinstance(other, AmbientSpec)
                and self.field == other.field and self.table == other.table)

    def __hash__(self):
        return hash((self.field, self.table))

    def __repr__(self):
        kind = "TwoVect" if self.group_order == 1 else f"TwoVectG({self.group_order})"
        return f"{kind}({self.field!r})"


def two_vect(field: FieldSpec) -> AmbientSpec:
    return AmbientSpec(field)


def two_vect_g(field: FieldSpec, table) -> AmbientSpec:
    return AmbientSpec(field, table)


class TwoObject:
    """Skeletal object: a tuple of grades, one per simple summand."""

    __slots__ = ("ambient", "grades", "rank")

    def __init__(self, ambient: AmbientSpec, grades):
        self.ambient = ambient
        self.grades = tuple(grades)
        self.rank = len(self.grades)
        assert all(0 <= g < ambient.group_order for g in self.grades)

    def __eq__(self, other):
        return (isinstance(other, TwoObject)
                and self.ambient == other.ambient and self.grades == other.grades)

    def __hash__(self):
        return hash((self.ambient, self.grades))

    def __repr__(self):
        return f"TwoObject{self.grades}"


def unit_object(ambient: AmbientSpec) -> TwoObject:
    return TwoObject(ambient, (0,))


def plain_object(ambient: AmbientSpec, rank: int) -> TwoObject:
    return TwoObject(ambient, (0,) * rank)


_BOX_CACHE: dict = {}
_PATH_CACHE: dict = {}
_DIMS_CACHE: dict = {}
_DIMSMAP_CACHE: dict = {}


def box_object(x: TwoObject, y: TwoObject) -> TwoObject:
    assert x.ambient == y.ambient
    cached = _BOX_CACHE.get((x, y))
    if cached is None:
        t = x.ambient.table
        cached = TwoObject(x.ambient, tuple(
            t[gx][gy] for gx in x.grades for gy in y.grades))
        _BOX_CACHE[(x, y)] = cached
    return cached


class Gen1:
    """Generator 1-morphism: a nonnegative integer dims matrix, target x source."""

    __slots__ = ("src", "tgt", "dims", "name")

    def __init__(self, src: TwoObject, tgt: TwoObject, dims, name: str = ""):
        self.src = src
        self.tgt = tgt
        self.dims = tuple(tuple(int(d) for d in row) for row in dims)
        self.name = name
        assert len(self.dims) == tgt.rank
        assert all(len(row) == src.rank for row in self.dims)
        assert all(d >= 0 for row in self.dims for d in row)
        if src.ambient.group_order > 1:
            for t in range(tgt.rank):
                for s in range(src.rank):
                    if self.dims[t][s] and tgt.grades[t] != src.grades[s]:
                        raise ValueError("grade-incompatible generator dims")

    @property
    def is_identity(self) -> bool:
        if self.src != self.tgt:
            return False
        return all(self.dims[i][j] == (1 if i == j else 0)
                   for i in range(self.tgt.rank) for j in range(self.src.rank))

    def __eq__(self, other):
        return (isinstance(other, Gen1) and self.src == other.src
                and self.tgt == other.tgt and self.dims == other.dims)

    def __hash__(self):
        return hash((self.src, self.tgt, self.dims))

    def __repr__(self):
        return f"Gen1({self.name or self.dims})"


def _identity_gen(x: TwoObject) -> Gen1:
    dims = [[1 if i == j else 0 for j in range(x.rank)] for i in range(x.rank)]
    return Gen1(x, x, dims, name=f"1_{x.grades}")


def _layer_src(layer) -> TwoObject:
    obj = layer[0].src
    for fac in layer[1:]:
        obj = box_object(obj, fac.src)
    return obj


_LAYER_TGT_CACHE: dict = {}


def _layer_tgt(layer) -> TwoObject:
    obj = _LAYER_TGT_CACHE.get(layer)
    if obj is None:
        obj = layer[0].tgt
        for fac in layer[1:]:
            obj = box_object(obj, fac.tgt)
        _LAYER_TGT_CACHE[layer] = obj
    return obj


def _layer_entry(layer, t: int, s: int) -> int:
    """Dimension of the layer from source simple s to target simple t."""
    d = 1
    for fac in reversed(layer):
        rs, rt = fac.src.rank, fac.tgt.rank
        sf, s = s % rs, s // rs
        tf, t = t % rt, t // rt
        d *= fac.dims[tf][sf]
        if d == 0:
            return 0
    return d


_LAYER_MAP_CACHE: dict = {}


def _layer_map(layer):
    """Sparse transitions of a layer: map[s] = ((t, d), ...) with d > 0."""
    m = _LAYER_MAP_CACHE.get(layer)
    if m is None:
        fac_maps = [tuple(tuple((tf, fac.dims[tf][sf])
                                for tf in range(fac.tgt.rank)
                                if fac.dims[tf][sf])
                          for sf in range(fac.src.rank))
                    for fac in layer]
        rs = 1
        for fac in layer:
            rs *= fac.src.rank
        out = []
        for s in range(rs):
            rem = s
            sfs = []
            for fac in reversed(layer):
                sfs.append(rem % fac.src.rank)
                rem //= fac.src.rank
            sfs.reverse()
            entries = [(0, 1)]
            for fac, fm, sf in zip(layer, fac_maps, sfs):
                rtf = fac.tgt.rank
                entries = [(t0 * rtf + tf, d0 * d)
                           for t0, d0 in entries for tf, d in fm[sf]]
            out.append(tuple(entries))
        m = tuple(out)
        _LAYER_MAP_CACHE[layer] = m
    return m


def _normalize_layers(ambient, layers):
    unit = unit_object(ambient)
    out = []
    for layer in layers:
        fs = []
        for fac in layer:
            if fac.is_identity and fac.src == unit:
                continue
            if fs and fs[-1].is_identity and fac.is_identity:
                fs[-1] = _identity_gen(box_object(fs[-1].src, fac.src))
            else:
                fs.append(fac)
        if not fs or all(f.is_identity for f in fs):
            continue
        out.append(tuple(fs))
    return tuple(out)


class OneMorphism:
    """Composite 1-morphism: normalized tuple of layers of generator factors.

    An empty layer tuple is the identity on `src` (== `tgt`).  The `dims`
    property flattens to the total dimension matrix of the spec's OneMorphism
    type; the layer structure is retained for basis-path indexing.
    """

    __slots__ = ("ambient", "src", "tgt", "layers", "_paths", "_dims",
                 "_dims_map", "_support", "_hash")

    def __init__(self, src: TwoObject, tgt: TwoObject, layers):
        self.ambient = src.ambient
        assert tgt.ambient == self.ambient
        self.src = src
        self.tgt = tgt
        self.layers = _normalize_layers(self.ambient, layers)
        self._paths = None
        self._dims = None
        self._dims_map = None
        self._support = None
        self._hash = None
        cur = src
        for layer in self.layers:
            assert _layer_src(layer) == cur, "layer boundary mismatch"
            cur = _layer_tgt(layer)
        assert cur == tgt, "composite target mismatch"

    def __eq__(self, other):
        return (isinstance(other, OneMorphism) and self.ambient == other.ambient
                and self.src == other.src and self.tgt == other.tgt
                and self.layers == other.layers)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ambient, self.src, self.tgt, self.layers))
        return self._hash

    def __repr__(self):
        names = [[f.name or "?" for f in layer] for layer in self.layers]
        return f"OneMorphism({names})" if self.layers else f"Id({self.src.grades})"

    def dims_map(self):
        """Sparse dimension table: {(s, t): d} over the nonzero entries."""
        if self._dims_map is None:
            cached = _DIMSMAP_CACHE.get(self)
            if cached is None:
                cols = {s: {s: 1} for s in range(self.src.rank)}
                for layer in self.layers:
                    lm = _layer_map(layer)
                    for s, col in cols.items():
                        new = {}
                        for mid, d in col.items():
                            for t, dd in lm[mid]:
                                new[t] = new.get(t, 0) + d * dd
                        cols[s] = new
                cached = {(s, t): d
                          for s, col in cols.items() for t, d in col.items()}
                _DIMSMAP_CACHE[self] = cached
            self._dims_map = cached
        return self._dims_map

    @property
    def dims(self):
        if self._dims is None:
            cached = _DIMS_CACHE.get(self)
            if cached is None:
                mat = [[0] * self.src.rank for _ in range(self.tgt.rank)]
                for (s, t), d in self.dims_map().items():
                    mat[t][s] = d
                cached = tuple(tuple(row) for row in mat)
                _DIMS_CACHE[self] = cached
            self._dims = cached
        return self._dims

    def support(self):
        """Pairs (s, t) of simples with at least one basis path s -> t."""
        if self._support is None:
            self._support = tuple(sorted(self.dims_map()))
        return self._support

    def intermediate_objects(self):
        objs = [self.src]
        for layer in self.layers:
            objs.append(_layer_tgt(layer))
        return objs

    def _path_table(self):
        if self._paths is None:
            shared = _PATH_CACHE.get(self)
            if shared is None:
                shared = {}
                _PATH_CACHE[self] = shared
            self._paths = shared
        return self._paths

    def paths(self, s: int, t: int):
        """Basis paths s -> t, each a tuple of (simple, mult) per layer,
        enumerated lexicographically (earlier layers most significant)."""
        table = self._path_table()
        key = (s, t)
        if key not in table:
            maps = [_layer_map(layer) for layer in self.layers]
            result = []

            def rec(layer_idx, cur, prefix):
                if layer_idx == len(self.layers):
                    if cur == t:
                        result.append(tuple(prefix))
                    return
                for x, d in maps[layer_idx][cur]:
                    for m in range(d):
                        prefix.append((x, m))
                        rec(layer_idx + 1, x, prefix)
                        prefix.pop()

            rec(0, s, [])
            table[key] = (result, {p: i for i, p in enumerate(result)})
        return table[key][0]

    def path_index(self, s: int, t: int, path) -> int:
        self.paths(s, t)
        return self._paths[(s, t)][1][path]

    def n_paths(self, s: int, t: int) -> int:
        return self.dims_map().get((s, t), 0)


def identity1(x: TwoObject) -> OneMorphism:
    return OneMorphism(x, x, ())


def generator(src: TwoObject, tgt: TwoObject, dims, name: str = "") -> OneMorphism:
    return OneMorphism(src, tgt, ((Gen1(src, tgt, dims, name),),))


def compose1(g: OneMorphism, f: OneMorphism) -> OneMorphism:
    """g after f."""
    if f.ambient != g.ambient:
        raise ValueError("ambient mismatch")
    if f.tgt != g.src:
        raise ValueError("composition boundary mismatch")
    return OneMorphism(f.src, g.tgt, f.layers + g.layers)


def _box_raw(u: OneMorphism, v: OneMorphism):
    """Raw layer pairs of u box v, padding the shorter with identities.

    Returns (pairs, u_objects, v_objects): per layer the (u-factors,
    v-factors) tuple and per boundary the padded intermediate objects.
    """
    k = max(len(u.layers), len(v.layers))
    u_objs = u.intermediate_objects() + [u.tgt] * (k - len(u.layers))
    v_objs = v.intermediate_objects() + [v.tgt] * (k - len(v.layers))
    pairs = []
    for i in range(k):
        lu = u.layers[i] if i < len(u.layers) else (_identity_gen(u.tgt),)
        lv = v.layers[i] if i < len(v.layers) else (_identity_gen(v.tgt),)
        pairs.append((lu, lv))
    return pairs, u_objs, v_objs


def box1(u: OneMorphism, v: OneMorphism) -> OneMorphism:
    if u.ambient != v.ambient:
        raise ValueError("ambient mismatch")
    pairs, _, _ = _box_raw(u, v)
    return OneMorphism(box_object(u.src, v.src), box_object(u.tgt, v.tgt),
                       tuple(lu + lv for lu, lv in pairs))


def _combine(pairs, u_objs, v_objs, su, sv, pu, pv):
    """Path of box1(u,v) from ((su,sv)) built from padded paths pu, pv."""
    k = len(pairs)
    pu = list(pu)
    pv = list(pv)
    tu = pu[-1][0] if pu else su
    tv = pv[-1][0] if pv else sv
    while len(pu) < k:
        pu.append((tu, 0))
    while len(pv) < k:
        pv.append((tv, 0))
    out = []
    cu, cv = su, sv
    for i, (lu, lv) in enumerate(pairs):
        xu, mu = pu[i]
        xv, mv = pv[i]
        dv = _layer_entry(lv, xv, cv)
        out.append((xu * v_objs[i + 1].rank + xv, mu * dv + mv))
        cu, cv = xu, xv
    return tuple(out)


class TwoMorphism:
    """Block matrix of scalars between two composites with equal endpoints.

    blocks[(s, t)] maps basis paths of src (columns) to basis paths of tgt
    (rows); missing blocks are zero of the right shape.  The canonical form
    keeps exactly the blocks with at least one row and one column, so sparse
    frames stay cheap.
    """

    __slots__ = ("src", "tgt", "blocks", "_hash")

    def __init__(self, src: OneMorphism, tgt: OneMorphism, blocks):
        if src.ambient != tgt.ambient or src.src != tgt.src or src.tgt != tgt.tgt:
            raise ValueError("2-morphism endpoints mismatch")
        self.src = src
        self.tgt = tgt
        field = src.ambient.field
        src_map, tgt_map = src.dims_map(), tgt.dims_map()
        for (s, t), blk in blocks.items():
            rows = tgt_map.get((s, t), 0)
            cols = src_map.get((s, t), 0)
            if (blk.rows, blk.cols) != (rows, cols):
                raise ValueError(f"block ({s},{t}) has shape "
                                 f"{blk.rows}x{blk.cols}, want {rows}x{cols}")
        full = {}
        for s, t in src.support():
            rows = tgt_map.get((s, t), 0)
            if rows == 0:
                continue
            blk = blocks.get((s, t))
            if blk is None:
                blk = ScalarMatrix.zeros(field, rows, src_map[(s, t)])
            full[(s, t)] = blk
        self.blocks = full
        self._hash = None

    @classmethod
    def _make(cls, src, tgt, full_blocks):
        """Internal constructor for blocks already known complete and
        correctly shaped; skips the per-block validation pass."""
        obj = cls.__new__(cls)
        obj.src = src
        obj.tgt = tgt
        obj.blocks = full_blocks
        obj._hash = None
        return obj

    def __eq__(self, other):
        return (isinstance(other, TwoMorphism) and self.src == other.src
                and self.tgt == other.tgt and self.blocks == other.blocks)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(
                (self.src, self.tgt, tuple(sorted(self.blocks.items()))))
        return self._hash

    def __repr__(self):
        return f"TwoMorphism({self.src!r} => {self.tgt!r})"

    def is_invertible(self) -> bool:
        if self.src.dims_map() != self.tgt.dims_map():
            return False
        for blk in self.blocks.values():
            if blk.rows != blk.cols:
                return False
            if blk.rows and blk.rank() != blk.rows:
                return False
        return True


_ID2_CACHE: dict = {}


def id2(u: OneMorphism) -> TwoMorphism:
    cached = _ID2_CACHE.get(u)
    if cached is None:
        field = u.ambient.field
        blocks = {k: ScalarMatrix.identity(field, d)
                  for k, d in u.dims_map().items()}
        cached = _ID2_CACHE[u] = TwoMorphism._make(u, u, blocks)
    return cached


def vcompose2(b: TwoMorphism, a: TwoMorphism) -> TwoMorphism:
    """b after a (vertical composition)."""
    if a.tgt != b.src:
        raise ValueError("vertical composition mismatch")
    a_blocks, b_blocks = a.blocks, b.blocks
    field = a.src.ambient.field
    tgt_map = b.tgt.dims_map()
    blocks = {}
    for (s, t), cols in a.src.dims_map().items():
        rows = tgt_map.get((s, t), 0)
        if rows == 0:
            continue
        x = a_blocks.get((s, t))
        y = b_blocks.get((s, t))
        if x is None or y is None:
            # the middle frame has no paths here; the composite block is zero
            blocks[(s, t)] = ScalarMatrix.zeros(field, rows, cols)
        else:
            blocks[(s, t)] = y @ x
    return TwoMorphism._make(a.src, b.tgt, blocks)


_INV2_CACHE: dict = {}


def inverse2(a: TwoMorphism) -> TwoMorphism:
    cached = _INV2_CACHE.get(a)
    if cached is not None:
        return cached
    if a.src.dims_map() != a.tgt.dims_map():
        raise ValueError("frames have mismatched dimensions; not invertible")
    blocks = {}
    for k, blk in a.blocks.items():
        if blk.rows != blk.cols:
            raise ValueError("non-square block is not invertible")
        blocks[k] = blk.inverse() if blk.rows else blk
    cached = _INV2_CACHE[a] = TwoMorphism(a.tgt, a.src, blocks)
    return cached


_HPLAN_CACHE: dict = {}


def _hcompose_plan(u, up, v, vp, src, tgt):
    """Index tables for horizontal composition, shared across all 2-cells
    with the same four 1-morphism frames."""
    key = (u, up, v, vp)
    plan = _HPLAN_CACHE.get(key)
    if plan is not None:
        return plan
    u_map, up_map = u.dims_map(), up.dims_map()
    v_map, vp_map = v.dims_map(), vp.dims_map()
    tgt_map = tgt.dims_map()
    mids = {}
    for (s, y) in u_map:
        if (s, y) in up_map:
            mids.setdefault(s, []).append(y)
    plan = []
    for (s, t), cols in src.dims_map().items():
        rows = tgt_map.get((s, t), 0)
        if rows == 0:
            continue
        src.paths(s, t)
        tgt.paths(s, t)
        src_idx = src._paths[(s, t)][1]
        tgt_idx = tgt._paths[(s, t)][1]
        ylist = []
        for y in mids.get(s, ()):
            if (y, t) not in v_map or (y, t) not in vp_map:
                continue
            up_paths = up.paths(s, y)
            vp_paths = vp.paths(y, t)
            u_paths = u.paths(s, y)
            v_paths = v.paths(y, t)
            r_idx = [[tgt_idx[pu_p + pv_p] for pv_p in vp_paths]
                     for pu_p in up_paths]
            c_idx = [[src_idx[pu + pv] for pv in v_paths] for pu in u_paths]
            ylist.append(((s, y), (y, t), r_idx, c_idx))
        plan.append(((s, t), rows, cols, ylist))
    _HPLAN_CACHE[key] = plan
    return plan


def hcompose2(beta: TwoMorphism, alpha: TwoMorphism) -> TwoMorphism:
    """Horizontal composite: alpha: u=>u' (X->Y), beta: v=>v' (Y->Z),
    result compose1(v,u) => compose1(v',u')."""
    if alpha.src.tgt != beta.src.src:
        raise ValueError("horizontal composition mismatch")
    u, up = alpha.src, alpha.tgt
    v, vp = beta.src, beta.tgt
    src = compose1(v, u)
    tgt = compose1(vp, up)
    field = src.ambient.field
    zero = field.zero()
    a_is_id = alpha is _ID2_CACHE.get(u)
    b_is_id = beta is _ID2_CACHE.get(v)
    if a_is_id and b_is_id:
        return id2(src)
    blocks = {}
    a_blocks, b_blocks = alpha.blocks, beta.blocks
    plan = _hcompose_plan(u, up, v, vp, src, tgt)
    for st, rows, cols, ylist in plan:
        mat = [[zero] * cols for _ in range(rows)]
        for ka, kb, r_idx, c_idx in ylist:
            if a_is_id:
                b_entries = b_blocks[kb].entries
                for iu, r_iu in enumerate(r_idx):
                    c_iu = c_idx[iu]
                    for iv, brow in enumerate(b_entries):
                        r_row = mat[r_iu[iv]]
                        for jv, bv in enumerate(brow):
                            if bv:
                                c = c_iu[jv]
                                r_row[c] = r_row[c] + bv
                continue
            a_entries = a_blocks[ka].entries
            if b_is_id:
                for iu, arow in enumerate(a_entries):
                    r_iu = r_idx[iu]
                    for ju, av in enumerate(arow):
                        if not av:
                            continue
                        c_ju = c_idx[ju]
                        for iv, r in enumerate(r_iu):
                            r_row = mat[r]
                            c = c_ju[iv]
                            r_row[c] = r_row[c] + av
                continue
            b_entries = b_blocks[kb].entries
            for iu, arow in enumerate(a_entries):
                r_iu = r_idx[iu]
                for ju, av in enumerate(arow):
                    if not av:
                        continue
                    c_ju = c_idx[ju]
                    for iv, brow in enumerate(b_entries):
                        r_row = mat[r_iu[iv]]
                        for jv, bv in enumerate(brow):
                            if bv:
                                c = c_ju[jv]
                                r_row[c] = r_row[c] + av * bv
        blocks[st] = ScalarMatrix(field, mat)
    return TwoMorphism._make(src, tgt, blocks)


def whisker_left(u: OneMorphism, alpha: TwoMorphism) -> TwoMorphism:
    """u after alpha's endpoints: 1_u horizontally composed on the outside."""
    return hcompose2(id2(u), alpha)


def whisker_right(alpha: TwoMorphism, u: OneMorphism) -> TwoMorphism:
    return hcompose2(alpha, id2(u))


_BPLAN_CACHE: dict = {}


def _box_plan(u, up, v, vp, src, tgt):
    """Index tables for the monoidal product of 2-cells, shared across all
    2-cells with the same four 1-morphism frames."""
    key = (u, up, v, vp)
    plan = _BPLAN_CACHE.get(key)
    if plan is not None:
        return plan
    pairs_s, uo_s, vo_s = _box_raw(u, v)
    pairs_t, uo_t, vo_t = _box_raw(up, vp)
    u_map, up_map = u.dims_map(), up.dims_map()
    v_map, vp_map = v.dims_map(), vp.dims_map()
    u_keys = sorted(k for k in u_map if k in up_map)
    v_keys = sorted(k for k in v_map if k in vp_map)
    plan = []
    for su, tu in u_keys:
        ru = up_map[(su, tu)]
        cu = u_map[(su, tu)]
        for sv, tv in v_keys:
            s = su * v.src.rank + sv
            t = tu * v.tgt.rank + tv
            rows = ru * vp_map[(sv, tv)]
            cols = cu * v_map[(sv, tv)]
            r_idx = [[tgt.path_index(
                s, t, _combine(pairs_t, uo_t, vo_t, su, sv, pu_p, pv_p))
                for pv_p in vp.paths(sv, tv)]
                for pu_p in up.paths(su, tu)]
            c_idx = [[src.path_index(
                s, t, _combine(pairs_s, uo_s, vo_s, su, sv, pu, pv))
                for pv in v.paths(sv, tv)]
                for pu in u.paths(su, tu)]
            plan.append(((s, t), rows, cols,
                         (su, tu), (sv, tv), r_idx, c_idx))
    _BPLAN_CACHE[key] = plan
    return plan


def box2(alpha: TwoMorphism, beta: TwoMorphism) -> TwoMorphism:
    """Monoidal product of 2-morphisms: box1(alpha.src, beta.src) =>
    box1(alpha.tgt, beta.tgt)."""
    u, up = alpha.src, alpha.tgt
    v, vp = beta.src, beta.tgt
    src = box1(u, v)
    tgt = box1(up, vp)
    field = src.ambient.field
    zero = field.zero()
    a_is_id = alpha is _ID2_CACHE.get(u)
    b_is_id = beta is _ID2_CACHE.get(v)
    if a_is_id and b_is_id:
        return id2(src)
    blocks = {}
    a_blocks, b_blocks = alpha.blocks, beta.blocks
    plan = _box_plan(u, up, v, vp, src, tgt)
    for st, rows, cols, ka, kb, r_idx, c_idx in plan:
        mat = [[zero] * cols for _ in range(rows)]
        if a_is_id:
            b_entries = b_blocks[kb].entries
            for iu, r_iu in enumerate(r_idx):
                c_iu = c_idx[iu]
                for iv, brow in enumerate(b_entries):
                    r_row = mat[r_iu[iv]]
                    for jv, bv in enumerate(brow):
                        if bv:
                            c = c_iu[jv]
                            r_row[c] = r_row[c] + bv
        elif b_is_id:
            a_entries = a_blocks[ka].entries
            for iu, arow in enumerate(a_entries):
                r_iu = r_idx[iu]
                for ju, av in enumerate(arow):
                    if not av:
                        continue
                    c_ju = c_idx[ju]
                    for iv, r in enumerate(r_iu):
                        r_row = mat[r]
                        c = c_ju[iv]
                        r_row[c] = r_row[c] + av
        else:
            a_entries = a_blocks[ka].entries
            b_entries = b_blocks[kb].entries
            for iu, arow in enumerate(a_entries):
                r_iu = r_idx[iu]
                for ju, av in enumerate(arow):
                    if not av:
                        continue
                    c_ju = c_idx[ju]
                    for iv, brow in enumerate(b_entries):
                        r_row = mat[r_iu[iv]]
                        for jv, bv in enumerate(brow):
                            if bv:
                                c = c_ju[jv]
                                r_row[c] = r_row[c] + av * bv
        blocks[st] = ScalarMatrix(field, mat)
    return TwoMorphism._make(src, tgt, blocks)


def box(a, b):
    """Monoidal product, dispatching on objects, 1-morphisms, 2-morphisms."""
    if isinstance(a, TwoObject):
        return box_object(a, b)
    if isinstance(a, OneMorphism):
        return box1(a, b)
    if isinstance(a, TwoMorphism):
        return box2(a, b)
    raise TypeError(f"cannot box {type(a).__name__}")


def pad_left(x: TwoObject, alpha: TwoMorphism) -> TwoMorphism:
    """1_X box alpha."""
    return box2(id2(identity1(x)), alpha)


def pad_right(alpha: TwoMorphism, x: TwoObject) -> TwoMorphism:
    """alpha box 1_X."""
    return box2(alpha, id2(identity1(x)))


def _staircase_vu(u: OneMorphism, v: OneMorphism) -> OneMorphism:
    """(u box 1) after (1 box v)."""
    return compose1(box1(u, identity1(v.tgt)), box1(identity1(u.src), v))


def _staircase_uv(u: OneMorphism, v: OneMorphism) -> OneMorphism:
    """(1 box v) after (u box 1)."""
    return compose1(box1(identity1(u.tgt), v), box1(u, identity1(v.src)))


_BOX_SWAP_CACHE: dict = {}


def box_swap(u: OneMorphism, v: OneMorphism) -> TwoMorphism:
    """Canonical interchanger (u box 1)(1 box v) => (1 box v)(u box 1).

    Both sides have basis paths in bijection with (u-path, v-path) pairs; the
    interchanger is the induced permutation matrix, which is genuinely
    nontrivial because the two sides enumerate the pairs in different orders.
    """
    cached = _BOX_SWAP_CACHE.get((u, v))
    if cached is not None:
        return cached
    src = _staircase_vu(u, v)
    tgt = _staircase_uv(u, v)
    field = u.ambient.field
    blocks = {}
    rv_src, rv_tgt = v.src.rank, v.tgt.rank
    v_ranks = [o.rank for o in v.intermediate_objects()]
    for su in range(u.src.rank):
        for sv in range(v.src.rank):
            s = su * rv_src + sv
            for tu in range(u.tgt.rank):
                for tv in range(v.tgt.rank):
                    t = tu * rv_tgt + tv
                    rows = tgt.n_paths(s, t)
                    cols = src.n_paths(s, t)
                    if rows == 0 or cols == 0:
                        continue
                    mat = [[field.zero()] * cols for _ in range(rows)]
                    for pu in u.paths(su, tu):
                        for pv in v.paths(sv, tv):
                            # src: v happens first at fixed su, then u at fixed tv
                            p_src = tuple((su * v_ranks[i + 1] + x, m)
                                          for i, (x, m) in enumerate(pv)) + \
                                tuple((x * rv_tgt + tv, m) for x, m in pu)
                            # tgt: u happens first at fixed sv, then v at fixed tu
                            p_tgt = tuple((x * rv_src + sv, m) for x, m in pu) + \
                                tuple((tu * v_ranks[i + 1] + x, m)
                                      for i, (x, m) in enumerate(pv))
                            r = tgt.path_index(s, t, p_tgt)
                            c = src.path_index(s, t, p_src)
                            mat[r][c] = field.one()
                    blocks[(s, t)] = ScalarMatrix(field, mat)
    cached = _BOX_SWAP_CACHE[(u, v)] = TwoMorphism(src, tgt, blocks)
    return cached


# adjoints -----------------------------------------------------------------

def _adjoint_gen(g: Gen1) -> Gen1:
    dims = tuple(tuple(g.dims[t][s] for t in range(g.tgt.rank))
                 for s in range(g.src.rank))
    return Gen1(g.tgt, g.src, dims, name=(g.name + "*") if g.name else "")


def adjoint1(f: OneMorphism):
    """Right adjoint f* with unit eta: Id => f* f and counit eps: f f* => Id."""
    star_layers = tuple(tuple(_adjoint_gen(fac) for fac in layer)
                        for layer in reversed(f.layers))
    f_star = OneMorphism(f.tgt, f.src, star_layers)
    field = f.ambient.field

    def reverse_path(s, path):
        simples = [s] + [x for x, _ in path]
        return tuple((simples[len(path) - 1 - i], path[len(path) - 1 - i][1])
                     for i in range(len(path)))

    comp_sf = compose1(f_star, f)      # Id_src => this
    eta_blocks = {}
    for s in range(f.src.rank):
        for s2 in range(f.src.rank):
            rows = comp_sf.n_paths(s, s2)
            cols = 1 if s == s2 else 0
            mat = [[field.zero()] * cols for _ in range(rows)]
            if s == s2:
                for t in range(f.tgt.rank):
                    for p in f.paths(s, t):
                        full = p + reverse_path(s, p)
                        mat[comp_sf.path_index(s, s, full)][0] = field.one()
            eta_blocks[(s, s2)] = ScalarMatrix.from_rows(field, mat, cols) \
                if rows else ScalarMatrix.zeros(field, 0, cols)
    eta = TwoMorphism(identity1(f.src), comp_sf, eta_blocks)

    comp_fs = compose1(f, f_star)      # this => Id_tgt
    eps_blocks = {}
    for t in range(f.tgt.rank):
        for t2 in range(f.tgt.rank):
            cols = comp_fs.n_paths(t, t2)
            rows = 1 if t == t2 else 0
            mat = [[field.zero()] * cols for _ in range(rows)]
            if t == t2:
                for s in range(f.src.rank):
                    for p in f.paths(s, t):
                        rev = reverse_path(s, p)
                        full = rev + p
                        mat[0][comp_fs.path_index(t, t, full)] = field.one()
            eps_blocks[(t, t2)] = ScalarMatrix.from_rows(field, mat, cols) \
                if rows else ScalarMatrix.zeros(field, 0, cols)
    eps = TwoMorphism(comp_fs, identity1(f.tgt), eps_blocks)
    return f_star, eta, eps


# linear solving for unknown 2-morphisms -----------------------------------

def solve_cell_system(src: OneMorphism, tgt: OneMorphism, equations,
                      want_info: bool = False):
    """Solve for an unknown 2-morphism zeta: src => tgt.

    `equations` is a list of (apply_fn, target) pairs where apply_fn(zeta)
    is affine-linear in zeta's entries and target is the required TwoMorphism
    value.  Returns (zeta, unique: bool) or (None, False) if inconsistent;
    with want_info, a third element reports the system shape and, on
    inconsistency, the rank defect of the augmented system.
    """
    field = src.ambient.field
    coords = []
    for s in range(src.src.rank):
        for t in range(src.tgt.rank):
            for i in range(tgt.n_paths(s, t)):
                for j in range(src.n_paths(s, t)):
                    coords.append((s, t, i, j))

    def make(vals):
        blocks = {}
        idx = 0
        for s in range(src.src.rank):
            for t in range(src.tgt.rank):
                rows = tgt.n_paths(s, t)
                cols = src.n_paths(s, t)
                mat = [[field.zero()] * cols for _ in range(rows)]
                for i in range(rows):
                    for j in range(cols):
                        mat[i][j] = vals[idx]
                        idx += 1
                blocks[(s, t)] = ScalarMatrix.from_rows(field, mat, cols) \
                    if rows else ScalarMatrix.zeros(field, 0, cols)
        return TwoMorphism(src, tgt, blocks)

    def flatten(cell: TwoMorphism):
        out = []
        for key in sorted(cell.blocks):
            blk = cell.blocks[key]
            for i in range(blk.rows):
                out.extend(blk.entries[i])
        return out

    zero_cell = make([field.zero()] * len(coords))
    offsets = [flatten(fn(zero_cell)) for fn, _ in equations]
    columns = []
    for k in range(len(coords)):
        vals = [field.zero()] * len(coords)
        vals[k] = field.one()
        cell = make(vals)
        col = []
        for (fn, _), off in zip(equations, offsets):
            img = flatten(fn(cell))
            col.extend(a - b for a, b in zip(img, off))
        columns.append(col)
    rhs = []
    for (_, target), off in zip(equations, offsets):
        rhs.extend(a - b for a, b in zip(flatten(target), off))
    if not columns:
        ok = all(v.is_zero() for v in rhs)
        result = (make([]), True) if ok else (None, False)
        if want_info:
            info = {"unknowns": 0, "equations": len(rhs),
                    "rank_defect": 0 if ok else sum(1 for v in rhs if not v.is_zero())}
            return result + (info,)
        return result
    A = ScalarMatrix.from_rows(
        field, [[columns[j][i] for j in range(len(coords))] for i in range(len(rhs))],
        len(coords))
    sol = solve_linear(A, rhs)
    if sol is None:
        if want_info:
            _, piv_a = A.rref()
            aug = ScalarMatrix.from_rows(
                field, [A.entries[i] + (rhs[i],) for i in range(A.rows)],
                A.cols + 1)
            _, piv_aug = aug.rref()
            info = {"unknowns": len(coords), "equations": len(rhs),
                    "rank_defect": len(piv_aug) - len(piv_a)}
            return None, False, info
        return None, False
    result = make(sol.particular), not sol.kernel
    if want_info:
        info = {"unknowns": len(coords), "equations": len(rhs), "rank_defect": 0}
        return result + (info,)
    return result


def split_idempotent2(u: OneMorphism, q: TwoMorphism):
    """Split an idempotent 2-morphism q: u => u at the 1-categorical level.

    Returns (w, r, s) with w a generator 1-morphism, r: u => w, s: w => u,
    r s = id_w and s r = q.  Deterministic: s-blocks are the pivot columns of
    the rref image factorization of each q-block.
    """
    assert q.src == u and q.tgt == u
    field = u.ambient.field
    # column-space bases per block
    s_cols = {}
    dims = [[0] * u.src.rank for _ in range(u.tgt.rank)]
    for (si, ti), blk in q.blocks.items():
        if blk.rows == 0:
            s_cols[(si, ti)] = ScalarMatrix.zeros(field, blk.rows, 0)
            continue
        _, pivots = blk.rref()
        cols = [[blk[i, c] for c in pivots] for i in range(blk.rows)]
        s_cols[(si, ti)] = ScalarMatrix.from_rows(field, cols, len(pivots))
        dims[ti][si] = len(pivots)
    w = generator(u.src, u.tgt, dims)
    r_blocks = {}
    s_blocks = {}
    for (si, ti), blk in q.blocks.items():
        S = s_cols[(si, ti)]
        k = S.cols
        if blk.rows == 0 or k == 0:
            r_blocks[(si, ti)] = ScalarMatrix.zeros(field, k, blk.cols)
            s_blocks[(si, ti)] = ScalarMatrix.zeros(field, blk.rows, k)
            continue
        # solve S @ R = q-block column by column
        r_rows = [[field.zero()] * blk.cols for _ in range(k)]
        for c in range(blk.cols):
            rhs = [blk[i, c] for i in range(blk.rows)]
            sol = solve_linear(S, rhs)
            assert sol is not None, "idempotent block escapes its column space"
            for i in range(k):
                r_rows[i][c] = sol.particular[i]
        r_blocks[(si, ti)] = ScalarMatrix.from_rows(field, r_rows, blk.cols)
        s_blocks[(si, ti)] = S
    r = TwoMorphism(u, w, r_blocks)
    s = TwoMorphism(w, u, s_blocks)
    assert vcompose2(r, s) == id2(w)
    assert vcompose2(s, r) == q
    return w, r, s


# condensation monads ------------------------------------------------------

@dataclass
class CondensationMonad:
    carrier: TwoObject
    e: OneMorphism
    mu: TwoMorphism      # e e => e
    delta: TwoMorphism   # e => e e


@dataclass
class Splitting:
    B: TwoObject
    f: OneMorphism       # X -> B
    g: OneMorphism       # B -> X
    phi: TwoMorphism     # f g => Id_B
    gamma: TwoMorphism   # Id_B => f g
    theta: TwoMorphism   # g f => e


def monad_equations(m: CondensationMonad) -> dict:
    """The five 2-condensation monad equations, each evaluated exactly."""
    e, mu, delta = m.e, m.mu, m.delta
    ie = id2(e)
    out = {}
    out["monadassociativity"] = vcompose2(mu, hcompose2(mu, ie)) == \
        vcompose2(mu, hcompose2(ie, mu))
    out["monadcoassociativity"] = vcompose2(hcompose2(delta, ie), delta) == \
        vcompose2(hcompose2(ie, delta), delta)
    dm = vcompose2(delta, mu)
    out["monadfrobeniusleft"] = vcompose2(hcompose2(mu, ie), hcompose2(ie, delta)) == dm
    out["monadfrobeniusright"] = vcompose2(hcompose2(ie, mu), hcompose2(delta, ie)) == dm
    out["monadsplitidempotent"] = vcompose2(mu, delta) == id2(e)
    return out


def _flatten_monad(m: CondensationMonad):
    """The flattened associative algebra of paths of e with product from mu."""
    field = m.carrier.ambient.field
    e = m.e
    n = m.carrier.rank
    basis = []
    for t in range(n):
        for s in range(n):
            for p_idx in range(e.n_paths(s, t)):
                basis.append((s, t, p_idx))
    index = {b: i for i, b in enumerate(basis)}
    ee = compose1(e, e)
    dim = len(basis)
    z = field.zero()
    structure = [[[z] * dim for _ in range(dim)] for _ in range(dim)]
    for i, (s1, t1, p) in enumerate(basis):
        for j, (s2, t2, q) in enumerate(basis):
            if s1 != t2:
                continue
            # element i after element j: path q then path p through e e
            full = e.paths(s2, t2)[q] + e.paths(s1, t1)[p]
            col = ee.path_index(s2, t1, full)
            blk = m.mu.blocks.get((s2, t1))
            if blk is None:
                continue
            for r in range(e.n_paths(s2, t1)):
                c = blk[r, col]
                if not c.is_zero():
                    structure[i][j][index[(s2, t1, r)]] = c
    return AssocAlgebra(field, structure), basis, index


def _category_unit(alg, basis):
    """Unit of a flattened monad algebra, solved corner by corner.

    Path composition only links blocks sharing a boundary simple, so the unit
    is a sum of local units supported on the diagonal (s, s) corners; solving
    each small corner system separately avoids one large stacked solve.
    """
    field = alg.field
    sp = alg.sparse_structure()
    z = field.zero()
    one = field.one()
    unit = [z] * alg.dim
    corners = {}
    by_src = {}
    by_tgt = {}
    for i, (s, t, _p) in enumerate(basis):
        if s == t:
            corners.setdefault(s, []).append(i)
        by_src.setdefault(s, []).append(i)
        by_tgt.setdefault(t, []).append(i)
    for s in set(by_src) | set(by_tgt):
        idxs = corners.get(s, [])
        cols = len(idxs)
        eqs = {}

        def row_for(side, j, k):
            key = (side, j, k)
            r = eqs.get(key)
            if r is None:
                r = [z] * cols + [one if k == j else z]
                eqs[key] = r
            return r

        for j in by_tgt.get(s, ()):
            row_for("L", j, j)
            for col, i in enumerate(idxs):
                for k, c in sp[i][j]:
                    row_for("L", j, k)[col] = c
        for j in by_src.get(s, ()):
            row_for("R", j, j)
            for col, i in enumerate(idxs):
                for k, c in sp[j][i]:
                    row_for("R", j, k)[col] = c
        rows = []
        rhs = []
        for r in eqs.values():
            rows.append(r[:cols])
            rhs.append(r[cols])
        sol = solve_linear(ScalarMatrix.from_rows(field, rows, cols), rhs)
        if sol is None:
            return None
        for col, i in enumerate(idxs):
            unit[i] = sol.particular[col]
    for j in range(alg.dim):
        bj = alg.basis_vec(j)
        if alg.mul(unit, bj) != bj or alg.mul(bj, unit) != bj:
            return None
    return unit


def condensation_split(m: CondensationMonad) -> Splitting:
    """Split a 2-condensation monad through Wedderburn decomposition.

    Flattens e to an associative algebra, finds its category-algebra local
    units, decomposes into matrix blocks, and assembles the splitting so the
    two splitting equations and phi gamma = Id hold exactly.
    """
    ambient = m.carrier.ambient
    field = ambient.field
    alg, basis, index = _flatten_monad(m)
    unit = _category_unit(alg, basis)
    if unit is None:
        raise NotSemisimple("flattened condensation monad has no unit")
    alg.unit = unit
    n = m.carrier.rank
    partition = []
    part_simples = []
    for s in range(n):
        u_s = [unit[i] if basis[i][0] == s and basis[i][1] == s else field.zero()
               for i in range(alg.dim)]
        if any(not c.is_zero() for c in u_s):
            partition.append(u_s)
            part_simples.append(s)
    decomp = decompose_semisimple_algebra(alg, unit_partition=partition)
    blocks = decomp.blocks
    e = m.e

    grades = []
    for b in blocks:
        carriers = {part_simples[p] for p in b.row_parts}
        gset = {m.carrier.grades[s] for s in carriers}
        assert len(gset) == 1, "block rows span several grades"
        grades.append(gset.pop())
    B = TwoObject(ambient, tuple(grades))

    # rows of block b living at carrier simple s, in decomposition order
    rows_at = [[[] for _ in range(n)] for _ in blocks]
    for bi, b in enumerate(blocks):
        for r, p in enumerate(b.row_parts):
            rows_at[bi][part_simples[p]].append(r)
    f_dims = [[len(rows_at[bi][s]) for s in range(n)] for bi in range(len(blocks))]
    g_dims = [[len(rows_at[bi][s]) for bi in range(len(blocks))] for s in range(n)]
    f = generator(m.carrier, B, f_dims, name="f")
    g = generator(B, m.carrier, g_dims, name="g")

    # theta: g f => e via matrix units
    gf = compose1(g, f)
    f_id = not f.layers
    g_id = not g.layers
    theta_blocks = {}
    for s in range(n):
        for t in range(n):
            rows = e.n_paths(s, t)
            cols = gf.n_paths(s, t)
            mat = [[field.zero()] * cols for _ in range(rows)]
            for bi in range(len(blocks)):
                for i_mult in range(f.n_paths(s, bi)):
                    for j_mult in range(g.n_paths(bi, t)):
                        path = (() if f_id else ((bi, i_mult),)) + \
                            (() if g_id else ((t, j_mult),))
                        c = gf.path_index(s, t, path)
                        r_src = rows_at[bi][s][i_mult]
                        r_tgt = rows_at[bi][t][j_mult]
                        vec = blocks[bi].matrix_units[r_tgt][r_src]
                        for k, coeff in enumerate(vec):
                            if coeff.is_zero():
                                continue
                            s_k, t_k, p_k = basis[k]
                            assert (s_k, t_k) == (s, t), \
                                "matrix unit escapes its hom block"
                            mat[p_k][c] = coeff
            theta_blocks[(s, t)] = ScalarMatrix.from_rows(field, mat, cols) \
                if rows else ScalarMatrix.zeros(field, 0, cols)
    theta = TwoMorphism(gf, e, theta_blocks)
    assert theta.is_invertible(), "matrix units do not span the monad paths"

    # phi: f g => Id_B is the canonical pairing delta_{ij}
    fg = compose1(f, g)
    phi_blocks = {}
    for b1 in range(B.rank):
        for b2 in range(B.rank):
            cols = fg.n_paths(b1, b2)
            rows = 1 if b1 == b2 else 0
            mat = [[field.zero()] * cols for _ in range(rows)]
            if b1 == b2:
                for s_mid in range(n):
                    for j_mult in range(g.n_paths(b1, s_mid)):
                        for i_mult in range(f.n_paths(s_mid, b1)):
                            if i_mult != j_mult:
                                continue
                            path = (() if g_id else ((s_mid, j_mult),)) + \
                                (() if f_id else ((b1, i_mult),))
                            mat[0][fg.path_index(b1, b1, path)] = field.one()
            phi_blocks[(b1, b2)] = ScalarMatrix.from_rows(field, mat, cols) \
                if rows else ScalarMatrix.zeros(field, 0, cols)
    phi = TwoMorphism(fg, identity1(B), phi_blocks)

    theta_inv = inverse2(theta)
    # splitting equation for mu: mu = theta . (g phi f) . (theta^{-1} h theta^{-1})
    mid = hcompose2(id2(g), hcompose2(phi, id2(f)))
    mu_built = vcompose2(theta, vcompose2(mid, hcompose2(theta_inv, theta_inv)))
    assert mu_built == m.mu, "mu splitting equation failed"

    # gamma from the delta equation plus phi gamma = Id, solved linearly
    def delta_of(gamma_cell):
        mid_g = hcompose2(id2(g), hcompose2(gamma_cell, id2(f)))
        return vcompose2(hcompose2(theta, theta), vcompose2(mid_g, theta_inv))

    def phi_of(gamma_cell):
        return vcompose2(phi, gamma_cell)

    gamma, unique = solve_cell_system(
        identity1(B), fg,
        [(delta_of, m.delta), (phi_of, id2(identity1(B)))])
    if gamma is None:
        raise NotSemisimple("delta does not factor through the splitting")
    assert unique, "splitting gamma is not unique"
    return Splitting(B=B, f=f, g=g, phi=phi, gamma=gamma, theta=theta)
