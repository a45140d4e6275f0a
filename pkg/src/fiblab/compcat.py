"""Types-in-context over groupoids: structured maps with Σ, Π, and Id formers.

A type over a context Γ is a cloven normal isofibration into Γ.  Reindexing
is the canonical pullback (with its identity normalization), Σ is vertical
composition, Π is the pushforward, and Id is the relative path object.  Each
former also acts on Cartesian arrows; the stability checks compare composite
functor tables literally.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .awfs import (
    LStruct,
    LiftingSquare,
    RStruct,
    filler,
    path_map,
    path_object,
    pullback_rmap,
    vcompose_rmap,
)
from .core import (
    FinGroupoid,
    GFunctor,
    GroupoidError,
    PullbackSquare,
    SliceMap,
    canonical_pullback,
    compose_functors,
    enumerate_functors,
    identity_functor,
    is_cartesian_square,
)
from .pushforward import Pushforward, pushforward, pushforward_rstruct


@dataclass(frozen=True)
class CompObject:
    """A type in context: an isofibration structure over the context."""

    ctx: FinGroupoid
    carrier: RStruct

    @property
    def chi(self) -> GFunctor:
        return self.carrier.f

    @property
    def total(self) -> FinGroupoid:
        return self.carrier.f.dom

    def check(self) -> list[str]:
        out = []
        if self.carrier.f.cod != self.ctx:
            out.append("carrier does not project to the context")
        out.extend(self.carrier.check())
        return out


@dataclass(frozen=True)
class Section:
    """A strict section of a type's projection."""

    of: CompObject
    map: GFunctor

    def check(self) -> list[str]:
        if compose_functors(self.of.chi, self.map) != identity_functor(self.of.ctx):
            return ["not a section of the projection"]
        return self.map.check()


@dataclass(frozen=True)
class DepTuple:
    """A chain of types, each over the comprehension of the previous one."""

    ctx: FinGroupoid
    items: tuple

    def check(self) -> list[str]:
        out = []
        over = self.ctx
        for item in self.items:
            if item.ctx != over:
                out.append("chain broken: item not over previous comprehension")
            over = item.total
        return out


@dataclass(frozen=True)
class CartesianArrow:
    """A structured square src → tgt over ``base`` with Cartesian top."""

    src: CompObject
    tgt: CompObject
    top: GFunctor
    base: GFunctor

    def check(self) -> list[str]:
        out = []
        if not is_cartesian_square(self.top, self.base, self.src.chi, self.tgt.chi):
            out.append("underlying square is not Cartesian")
        for (x, p), m in self.src.carrier.lifts.items():
            if self.top.mor[m] != self.tgt.carrier.lift(
                    self.top.ob[x], self.base.mor[p]):
                out.append(f"lifts not preserved at ({x!r}, {p!r})")
                break
        return out


@dataclass(frozen=True)
class Reindexed:
    """A reindexing A[σ] with its Cartesian arrow and pairing data."""

    obj: CompObject
    cart: CartesianArrow
    square: PullbackSquare


def comprehend(A: CompObject) -> GFunctor:
    """The projection of the context extension."""
    return A.chi


_REINDEX_CACHE: dict = {}


def reindex(A: CompObject, sigma: GFunctor) -> Reindexed:
    """A[σ] by canonical pullback; reindexing along an identity is verbatim."""
    if sigma.cod != A.ctx:
        raise GroupoidError(["reindex: map does not land in the context"])
    key = (A, sigma)
    hit = _REINDEX_CACHE.get(key)
    if hit is not None:
        return hit
    pb = canonical_pullback(A.chi, sigma)
    sq = LiftingSquare(pb.p2, A.chi, pb.p1, sigma)
    carrier = pullback_rmap(sq, A.carrier, pb)
    obj = CompObject(sigma.dom, carrier)
    out = Reindexed(obj, CartesianArrow(obj, A, pb.p1, sigma), pb)
    _REINDEX_CACHE[key] = out
    return out


def reindex_section(rx: Reindexed, t: Section) -> Section:
    """The section of A[σ] matching t under the Cartesian arrow."""
    sigma = rx.cart.base
    ob = {d: rx.square.pair_ob(t.map.ob[sigma.ob[d]], d)
          for d in sigma.dom.objects}
    mor = {m: rx.square.pair_mor(t.map.mor[sigma.mor[m]], m)
           for m in sigma.dom.mor}
    return Section(rx.obj, GFunctor(sigma.dom, rx.obj.total, ob, mor))


def reindex_tuple(dt: DepTuple, sigma: GFunctor):
    """Reindex a two-item chain, returning the chain and both arrows."""
    A, B = dt.items
    rxA = reindex(A, sigma)
    rxB = reindex(B, rxA.cart.top)
    return DepTuple(sigma.dom, (rxA.obj, rxB.obj)), rxA, rxB


# -- Σ ---------------------------------------------------------------------


@dataclass(frozen=True)
class SigmaData:
    obj: CompObject
    pair: GFunctor                      # comprehension of B → comprehension of Σ
    sp: Callable                        # (C, t) ↦ section of C

    def split_with(self, C: CompObject, t: Section) -> Section:
        return self.sp(C, t)


_SIGMA_CACHE: dict = {}


def sigma_form(dt: DepTuple) -> SigmaData:
    """Σ by vertical composition; pairing is the identity on totals and the
    eliminator returns its branch unchanged, so the computation rule is
    definitional."""
    A, B = dt.items
    key = (A, B)
    hit = _SIGMA_CACHE.get(key)
    if hit is not None:
        return hit
    carrier = vcompose_rmap(B.carrier, A.carrier)
    obj = CompObject(dt.ctx, carrier)

    def sp(C: CompObject, t: Section) -> Section:
        return Section(C, t.map)

    out = SigmaData(obj, identity_functor(B.total), sp)
    _SIGMA_CACHE[key] = out
    return out


def sigma_action(dt: DepTuple, sigma: GFunctor) -> tuple[CartesianArrow, DepTuple]:
    """The Cartesian arrow Σ_{A[σ]}B[σ] → Σ_A B induced by reindexing."""
    dt2, rxA, rxB = reindex_tuple(dt, sigma)
    src = sigma_form(dt2).obj
    tgt = sigma_form(dt).obj
    return CartesianArrow(src, tgt, rxB.cart.top, sigma), dt2


# -- Π ---------------------------------------------------------------------


@dataclass(frozen=True)
class PiData:
    obj: CompObject
    pf: Pushforward
    app: GFunctor      # comprehension of Π reindexed along χ_A → comprehension of B
    app_square: PullbackSquare

    def lam(self, t: Section) -> Section:
        """Transpose a section of B to a section of Π."""
        A = self.pf.f
        unit = SliceMap(A.f.cod, A.f.cod, identity_functor(A.f.cod))
        return Section(self.obj, self.pf.transpose(unit, t.map))

    def apply(self, fun: Section, arg: Section) -> GFunctor:
        """The composite app ∘ fun[χ_A] ∘ arg, landing in the total of B."""
        rx = reindex(self.obj, self.pf.f.f)
        lifted = reindex_section(rx, fun)
        return compose_functors(self.app, compose_functors(lifted.map, arg.map))


_PI_CACHE: dict = {}


def pi_form(dt: DepTuple) -> PiData:
    A, B = dt.items
    key = (A, B)
    hit = _PI_CACHE.get(key)
    if hit is not None:
        return hit
    pf = pushforward(A.carrier, SliceMap(A.total, B.total, B.chi))
    carrier = pushforward_rstruct(A.carrier, B.carrier, pf)
    obj = CompObject(dt.ctx, carrier)
    out = PiData(obj, pf, pf.app, pf.counit_pullback)
    _PI_CACHE[key] = out
    return out


@dataclass(frozen=True)
class BeckChevalley:
    """Comparison between the reindexed Π and the Π of the reindexings."""

    lhs: Reindexed        # (Π_A B)[σ]
    rhs: PiData           # Π_{A[σ]} B[τ]
    fwd: GFunctor         # lhs total → rhs total, over the codomain of σ
    inv: GFunctor


def beck_chevalley(dt: DepTuple, sigma: GFunctor) -> BeckChevalley:
    """The canonical comparison for a pullback square of contexts.

    Sections over the fiber of A at σ(d) correspond to sections of the
    reindexed family over the fiber of A[σ] at d; families correspond
    entrywise through the pairing of the two pullbacks.
    """
    A, B = dt.items
    dt2, rxA, rxB = reindex_tuple(dt, sigma)
    pi = pi_form(dt)
    pi2 = pi_form(dt2)
    lhs = reindex(pi.obj, sigma)

    X2 = rxA.obj.total
    fwd_ob = {}
    for w in lhs.obj.total.objects:
        sec = lhs.square.p1.ob[w]
        d = lhs.square.p2.ob[w]
        s_ob, s_mor = dict(sec[2]), dict(sec[3])
        new_ob, new_mor = {}, {}
        for x2 in X2.objects:
            if rxA.obj.chi.ob[x2] != d:
                continue
            z = s_ob[rxA.cart.top.ob[x2]]
            new_ob[x2] = rxB.square.pair_ob(z, x2)
        for m2 in X2.mor:
            if rxA.obj.chi.mor[m2] != rxA.obj.ctx.id_of(d):
                continue
            z = s_mor[rxA.cart.top.mor[m2]]
            new_mor[m2] = rxB.square.pair_mor(z, m2)
        fwd_ob[w] = ("sec", d,
                     tuple(sorted(new_ob.items(), key=_kv_key)),
                     tuple(sorted(new_mor.items(), key=_kv_key)))
    fwd_mor = {}
    for m in lhs.obj.total.mor:
        fam = lhs.square.p1.mor[m]
        q = lhs.square.p2.mor[m]
        table = dict(fam[4])
        new_table = {}
        for a2 in X2.mor:
            if rxA.obj.chi.mor[a2] != q:
                continue
            new_table[a2] = rxB.square.pair_mor(table[rxA.cart.top.mor[a2]], a2)
        s, t = lhs.obj.total.mor[m]
        fwd_mor[m] = ("fam", fwd_ob[s], fwd_ob[t], q,
                      tuple(sorted(new_table.items(), key=_kv_key)))
    fwd = GFunctor(lhs.obj.total, pi2.obj.total, fwd_ob, fwd_mor)
    inv = GFunctor(pi2.obj.total, lhs.obj.total,
                   {v: k for k, v in fwd_ob.items()},
                   {v: k for k, v in fwd_mor.items()})
    if len(inv.ob) != len(fwd_ob) or len(inv.mor) != len(fwd_mor):
        raise GroupoidError(["Beck-Chevalley comparison is not injective"])
    return BeckChevalley(lhs, pi2, fwd, inv)


def _kv_key(kv):
    from .core import sort_key
    return sort_key(kv[0])


def pi_action(dt: DepTuple, sigma: GFunctor) -> tuple[CartesianArrow, DepTuple, BeckChevalley]:
    """Cartesian arrow Π_{A[σ]}B[σ] → Π_A B through the comparison."""
    bc = beck_chevalley(dt, sigma)
    dt2, rxA, rxB = reindex_tuple(dt, sigma)
    top = compose_functors(bc.lhs.cart.top, bc.inv)
    return CartesianArrow(bc.rhs.obj, pi_form(dt).obj, top, sigma), dt2, bc


# -- Id ----------------------------------------------------------------------


@dataclass(frozen=True)
class IdVbData:
    """Variable-based identity type of A: the path object of its projection."""

    base: CompObject       # A
    ctx2: FinGroupoid      # comprehension of the doubled context Γ.A.A
    ctx2_square: PullbackSquare
    obj: CompObject        # Id_A over Γ.A.A
    r: GFunctor            # Γ.A → total of Id_A, over the diagonal
    r_lstruct: LStruct
    diagonal: GFunctor
    path: object


_IDVB_CACHE: dict = {}


def id_form_vb(A: CompObject) -> IdVbData:
    key = A
    hit = _IDVB_CACHE.get(key)
    if hit is not None:
        return hit
    po = path_object(A.carrier)
    obj = CompObject(po.pullback.apex, po.rstruct)
    out = IdVbData(A, po.pullback.apex, po.pullback, obj, po.reflexivity,
                   po.lstruct, po.diagonal, po)
    _IDVB_CACHE[key] = out
    return out


def id_action(cart: CartesianArrow) -> CartesianArrow:
    """Functorial action Id_B → Id_A over the doubled base map."""
    idB = id_form_vb(cart.src)
    idA = id_form_vb(cart.tgt)
    sq = LiftingSquare(cart.src.chi, cart.tgt.chi, cart.top, cart.base)
    top = path_map(sq, idB.path, idA.path)
    delta = GFunctor(
        idB.ctx2, idA.ctx2,
        {o: idA.ctx2_square.pair_ob(cart.top.ob[idB.ctx2_square.p1.ob[o]],
                                    cart.top.ob[idB.ctx2_square.p2.ob[o]])
         for o in idB.ctx2.objects},
        {m: idA.ctx2_square.pair_mor(cart.top.mor[idB.ctx2_square.p1.mor[m]],
                                     cart.top.mor[idB.ctx2_square.p2.mor[m]])
         for m in idB.ctx2.mor})
    return CartesianArrow(idB.obj, idA.obj, top, delta)


def j_eliminate(A: CompObject, C: CompObject, t: GFunctor) -> GFunctor:
    """The canonical section of C over the identity type extending t.

    C lives over the total of Id_A and t is a section of C over the
    reflexivity map; the result is the filler of the induced square against
    the deformation-retraction structure on reflexivity.
    """
    idvb = id_form_vb(A)
    if compose_functors(C.chi, t) != idvb.r:
        raise GroupoidError(["j_eliminate: t is not a section over reflexivity"])
    sq = LiftingSquare(idvb.r, C.chi, t, identity_functor(idvb.obj.total))
    return filler(idvb.r_lstruct, C.carrier, sq)


def pair_section_map(A: CompObject, a: Section, b: Section) -> GFunctor:
    """⟨a, b⟩: Γ → Γ.A.A."""
    idvb = id_form_vb(A)
    sq = idvb.ctx2_square
    return GFunctor(
        A.ctx, idvb.ctx2,
        {g: sq.pair_ob(b.map.ob[g], a.map.ob[g]) for g in A.ctx.objects},
        {m: sq.pair_mor(b.map.mor[m], a.map.mor[m]) for m in A.ctx.mor})


def id_pointwise(A: CompObject, a: Section, b: Section) -> Reindexed:
    """Id_A(a, b) over Γ: the identity type reindexed along ⟨a, b⟩."""
    return reindex(id_form_vb(A).obj, pair_section_map(A, a, b))


def refl_section(A: CompObject, a: Section) -> Section:
    """The reflexivity term of Id_A(a, a)."""
    rx = id_pointwise(A, a, a)
    idvb = id_form_vb(A)
    ob = {g: rx.square.pair_ob(idvb.r.ob[a.map.ob[g]], g) for g in A.ctx.objects}
    mor = {m: rx.square.pair_mor(idvb.r.mor[a.map.mor[m]], m) for m in A.ctx.mor}
    return Section(rx.obj, GFunctor(A.ctx, rx.obj.total, ob, mor))


def id_pointwise_action(cart: CartesianArrow, a: Section, b: Section
                        ) -> tuple[CartesianArrow, Section, Section]:
    """Id_f(a, b): Id_B(a[σ], b[σ]) → Id_A(a, b) by the universal property."""
    rxA_ab = id_pointwise(cart.tgt, a, b)
    rxsrc = reindex_of_cart(cart)
    a2 = reindex_section(rxsrc, a)
    b2 = reindex_section(rxsrc, b)
    rxB_ab = id_pointwise(cart.src, a2, b2)
    vb = id_action(cart)
    sigma = cart.base
    ob = {o: rxA_ab.square.pair_ob(vb.top.ob[rxB_ab.square.p1.ob[o]],
                                   sigma.ob[rxB_ab.square.p2.ob[o]])
          for o in rxB_ab.obj.total.objects}
    mor = {m: rxA_ab.square.pair_mor(vb.top.mor[rxB_ab.square.p1.mor[m]],
                                     sigma.mor[rxB_ab.square.p2.mor[m]])
           for m in rxB_ab.obj.total.mor}
    top = GFunctor(rxB_ab.obj.total, rxA_ab.obj.total, ob, mor)
    return CartesianArrow(rxB_ab.obj, rxA_ab.obj, top, sigma), a2, b2


def reindex_of_cart(cart: CartesianArrow) -> Reindexed:
    """Recover the Reindexed container of a reindexing-produced arrow."""
    rx = reindex(cart.tgt, cart.base)
    if rx.obj != cart.src or rx.cart.top != cart.top:
        raise GroupoidError(["arrow is not a canonical reindexing"])
    return rx


# -- the variable package (identity type at canonical variables) -------------


@dataclass(frozen=True)
class VarIdPackage:
    """Id at the canonical variables of the doubled context, with r and j
    transported along the comparison with the variable-based identity type."""

    base: CompObject
    ctx2: FinGroupoid
    var_fst: Section
    var_snd: Section
    id_xy: Reindexed          # over ctx2
    iota: GFunctor            # total of id_xy ≅ total of Id_A (vertical)
    iota_inv: GFunctor
    r: GFunctor               # Γ.A → total of id_xy
    weak: Reindexed           # A weakened to ctx2


def variable_id_package(A: CompObject, rx1: Reindexed,
                        rxw: Reindexed) -> VarIdPackage:
    """Assemble Id_A(x, y) from prepared one- and two-step weakenings.

    rx1 is A[χ_A]; its total is the doubled context.  rxw is A weakened to
    that context (the caller fixes the association of the weakening chain).
    """
    idvb_A = id_form_vb(A)
    ctx2 = rx1.obj.total
    Aw = rxw.obj
    # canonical variables: second component of the pair is the earlier one
    fst = Section(Aw, GFunctor(
        ctx2, Aw.total,
        {o: rxw.square.pair_ob(rx1.square.p2.ob[o], o) for o in ctx2.objects},
        {m: rxw.square.pair_mor(rx1.square.p2.mor[m], m) for m in ctx2.mor}))
    snd = Section(Aw, GFunctor(
        ctx2, Aw.total,
        {o: rxw.square.pair_ob(rx1.square.p1.ob[o], o) for o in ctx2.objects},
        {m: rxw.square.pair_mor(rx1.square.p1.mor[m], m) for m in ctx2.mor}))

    xy = pair_section_map(Aw, fst, snd)
    id_xy = reindex(id_form_vb(Aw).obj, xy)

    w_cart = rxw.cart
    vb_w = id_action(w_cart)
    iota = compose_functors(vb_w.top, id_xy.cart.top)
    iota_inv = GFunctor(idvb_A.obj.total, id_xy.obj.total,
                        {v: k for k, v in iota.ob.items()},
                        {v: k for k, v in iota.mor.items()})
    if len(iota_inv.ob) != len(iota.ob) or len(iota_inv.mor) != len(iota.mor):
        raise GroupoidError(["variable-based comparison is not invertible"])
    r = compose_functors(iota_inv, idvb_A.r)
    return VarIdPackage(A, ctx2, fst, snd, id_xy, iota, iota_inv, r, rxw)


def var_id_package(A: CompObject) -> VarIdPackage:
    rx1 = reindex(A, A.chi)
    w = compose_functors(A.chi, rx1.obj.chi)
    rxw = reindex(A, w)
    return variable_id_package(A, rx1, rxw)


def j_eliminate_xy(pkg: VarIdPackage, C: CompObject, t: GFunctor) -> GFunctor:
    """j at the canonical variables: conjugate the canonical filler by the
    comparison iso.  The pulled-back branch is the pairing of t with the
    reflexivity map, which makes both triangles literal."""
    idvb = id_form_vb(pkg.base)
    rxC = reindex(C, pkg.iota_inv)
    t_vb_ob = {x: rxC.square.pair_ob(t.ob[x], idvb.r.ob[x])
               for x in pkg.base.total.objects}
    t_vb_mor = {m: rxC.square.pair_mor(t.mor[m], idvb.r.mor[m])
                for m in pkg.base.total.mor}
    t_vb = GFunctor(pkg.base.total, rxC.obj.total, t_vb_ob, t_vb_mor)
    j_vb = j_eliminate(pkg.base, rxC.obj, t_vb)
    ob = {o: rxC.square.p1.ob[j_vb.ob[pkg.iota.ob[o]]]
          for o in pkg.id_xy.obj.total.objects}
    mor = {m: rxC.square.p1.mor[j_vb.mor[pkg.iota.mor[m]]]
           for m in pkg.id_xy.obj.total.mor}
    return GFunctor(pkg.id_xy.obj.total, C.total, ob, mor)


# -- actions on general Cartesian tuple arrows -------------------------------


@dataclass(frozen=True)
class TupleCart:
    """A Cartesian arrow of two-item chains over a base map."""

    src: DepTuple
    tgt: DepTuple
    base: GFunctor
    cartA: CartesianArrow
    cartB: CartesianArrow


def tuple_cart_of(dt: DepTuple, sigma: GFunctor) -> TupleCart:
    dt2, rxA, rxB = reindex_tuple(dt, sigma)
    return TupleCart(dt2, dt, sigma, rxA.cart, rxB.cart)


def paste_tuple_carts(outer: TupleCart, inner: TupleCart) -> TupleCart:
    """Compose two tuple arrows (inner first)."""
    if inner.tgt != outer.src:
        raise GroupoidError(["tuple arrows do not compose"])
    cartA = CartesianArrow(inner.cartA.src, outer.cartA.tgt,
                           compose_functors(outer.cartA.top, inner.cartA.top),
                           compose_functors(outer.base, inner.base))
    cartB = CartesianArrow(inner.cartB.src, outer.cartB.tgt,
                           compose_functors(outer.cartB.top, inner.cartB.top),
                           cartA.top)
    return TupleCart(inner.src, outer.tgt,
                     compose_functors(outer.base, inner.base), cartA, cartB)


def sigma_action_on(tc: TupleCart) -> CartesianArrow:
    """Σ acts on a tuple arrow by the top of its second component."""
    return CartesianArrow(sigma_form(tc.src).obj, sigma_form(tc.tgt).obj,
                          tc.cartB.top, tc.base)


def _cart_inverse_index(top: GFunctor, chi: GFunctor):
    obs = {(top.ob[x], chi.ob[x]): x for x in top.dom.objects}
    mors = {(top.mor[m], chi.mor[m]): m for m in top.dom.mor}
    return obs, mors


def pi_action_on(tc: TupleCart) -> CartesianArrow:
    """Π acts by relabelling sections and families through the arrow.

    An object over d of the source Π is carried to the section over the
    image of d whose value at x is the image of its value at the unique
    point of the source fiber sitting over (x, d).
    """
    piS = pi_form(tc.src)
    piT = pi_form(tc.tgt)
    sigma = tc.base
    topA, topB = tc.cartA.top, tc.cartB.top
    srcA = tc.src.items[0]
    tgtA = tc.tgt.items[0]
    inv_ob, inv_mor = _cart_inverse_index(topA, srcA.chi)

    ob = {}
    for S in piS.obj.total.objects:
        d = S[1]
        g = sigma.ob[d]
        s_ob, s_mor = dict(S[2]), dict(S[3])
        new_ob, new_mor = {}, {}
        for x in tgtA.total.objects:
            if tgtA.chi.ob[x] != g:
                continue
            xp = inv_ob[(x, d)]
            new_ob[x] = topB.ob[s_ob[xp]]
        for m in tgtA.total.mor:
            if tgtA.chi.mor[m] != tc.tgt.ctx.id_of(g):
                continue
            mp = inv_mor[(m, tc.src.ctx.id_of(d))]
            new_mor[m] = topB.mor[s_mor[mp]]
        ob[S] = ("sec", g, tuple(sorted(new_ob.items(), key=_kv_key)),
                 tuple(sorted(new_mor.items(), key=_kv_key)))
    mor = {}
    for M in piS.obj.total.mor:
        q = M[3]
        p = sigma.mor[q]
        table = dict(M[4])
        new_table = {}
        for alpha in tgtA.total.mor:
            if tgtA.chi.mor[alpha] != p:
                continue
            ap = inv_mor[(alpha, q)]
            new_table[alpha] = topB.mor[table[ap]]
        s, t = piS.obj.total.mor[M]
        mor[M] = ("fam", ob[s], ob[t], p,
                  tuple(sorted(new_table.items(), key=_kv_key)))
    top = GFunctor(piS.obj.total, piT.obj.total, ob, mor)
    return CartesianArrow(piS.obj, piT.obj, top, sigma)


def enumerate_sections(A: CompObject) -> list[Section]:
    maps = enumerate_functors(
        A.ctx, A.total,
        ob_allowed=lambda x, y: A.chi.ob[y] == x,
        mor_allowed=lambda m, n: A.chi.mor[n] == m)
    return [Section(A, m) for m in maps]


# -- pseudo-stability ---------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    clause: str
    ok: bool
    witness: str = ""


def _eq_check(name, lhs, rhs, results):
    ok = lhs == rhs
    witness = ""
    if not ok:
        for k in lhs.ob:
            if rhs.ob.get(k) != lhs.ob[k]:
                witness = f"object tables differ at {k!r}"
                break
        else:
            for k in lhs.mor:
                if rhs.mor.get(k) != lhs.mor[k]:
                    witness = f"morphism tables differ at {k!r}"
                    break
    results.append(CheckResult(name, ok, witness))


def _cart_check(name, arrow: CartesianArrow, results):
    diags = arrow.check()
    results.append(CheckResult(name, not diags, "; ".join(diags)))


def pseudo_stability_check(former: str, dt, sigma: GFunctor,
                           tau: Optional[GFunctor] = None) -> list[CheckResult]:
    """Evaluate every numbered stability diagram of the given former at the
    reindexing arrows generated by ``sigma`` (and ``tau`` for composition).

    ``former`` is one of ``sigma``, ``pi``, ``id``, ``id_pointwise``; ``dt``
    is the dependent chain (or the bare type for the identity formers).
    Elimination data for the third clauses is synthesized from weakenings.
    Failures are reported with witnesses, never raised.
    """
    results: list[CheckResult] = []
    if former == "sigma":
        _sigma_clauses(dt, sigma, tau, results)
    elif former == "pi":
        _pi_clauses(dt, sigma, tau, results)
    elif former == "id":
        _id_clauses(dt, sigma, tau, results)
    elif former == "id_pointwise":
        _id_pointwise_clauses(dt, sigma, tau, results)
    else:
        raise GroupoidError([f"unknown former {former!r}"])
    return results


def _composite_matches(action, tc1, tc2, results, name):
    pasted = paste_tuple_carts(tc1, tc2)
    lhs = action(pasted)
    rhs_outer = action(tc1)
    rhs_inner = action(tc2)
    composed = compose_functors(rhs_outer.top, rhs_inner.top)
    _eq_check(name, lhs.top, composed, results)


def _sigma_clauses(dt, sigma, tau, results):
    tc = tuple_cart_of(dt, sigma)
    arrow = sigma_action_on(tc)
    _cart_check("sigma.1.cartesian", arrow, results)
    ident = sigma_action_on(tuple_cart_of(dt, identity_functor(dt.ctx)))
    _eq_check("sigma.1.identity", ident.top,
              identity_functor(sigma_form(dt).obj.total), results)
    if tau is not None:
        tc2 = tuple_cart_of(tc.src, tau)
        _composite_matches(sigma_action_on, tc, tc2, results, "sigma.1.compose")
        _cart_check("sigma.1.compose.cartesian",
                    sigma_action_on(paste_tuple_carts(tc, tc2)), results)

    data_t = sigma_form(dt)
    data_s = sigma_form(tc.src)
    _eq_check("sigma.2.pair",
              compose_functors(data_t.pair, tc.cartB.top),
              compose_functors(arrow.top, data_s.pair), results)

    # clause 3 with C the weakened Σ and t the diagonal pairing
    rxC = reindex(data_t.obj, data_t.obj.chi)
    C = rxC.obj
    t = Section(C, GFunctor(
        data_t.obj.total, C.total,
        {z: rxC.square.pair_ob(z, z) for z in data_t.obj.total.objects},
        {m: rxC.square.pair_mor(m, m) for m in data_t.obj.total.mor}))
    rxC2 = reindex(C, arrow.top)
    tprime = Section(rxC2.obj, GFunctor(
        data_s.obj.total, rxC2.obj.total,
        {z: rxC2.square.pair_ob(t.map.ob[arrow.top.ob[z]], z)
         for z in data_s.obj.total.objects},
        {m: rxC2.square.pair_mor(t.map.mor[arrow.top.mor[m]], m)
         for m in data_s.obj.total.mor}))
    lhs = compose_functors(rxC2.cart.top, data_s.sp(rxC2.obj, tprime).map)
    rhs = compose_functors(data_t.sp(C, t).map, arrow.top)
    _eq_check("sigma.3.sp", lhs, rhs, results)


def _pi_clauses(dt, sigma, tau, results):
    tc = tuple_cart_of(dt, sigma)
    arrow = pi_action_on(tc)
    _cart_check("pi.1.cartesian", arrow, results)
    ident = pi_action_on(tuple_cart_of(dt, identity_functor(dt.ctx)))
    _eq_check("pi.1.identity", ident.top,
              identity_functor(pi_form(dt).obj.total), results)
    if tau is not None:
        tc2 = tuple_cart_of(tc.src, tau)
        _composite_matches(pi_action_on, tc, tc2, results, "pi.1.compose")

    piT, piS = pi_form(dt), pi_form(tc.src)
    A, B = dt.items
    secs = enumerate_sections(B)
    if not secs:
        results.append(CheckResult("pi.2.lambda", True, "no sections of B"))
    else:
        t = secs[0]
        rxB = reindex_of_cart(tc.cartB)
        tprime = Section(tc.src.items[1], GFunctor(
            tc.src.items[0].total, tc.src.items[1].total,
            {x: rxB.square.pair_ob(t.map.ob[tc.cartA.top.ob[x]], x)
             for x in tc.src.items[0].total.objects},
            {m: rxB.square.pair_mor(t.map.mor[tc.cartA.top.mor[m]], m)
             for m in tc.src.items[0].total.mor}))
        _eq_check("pi.2.lambda",
                  compose_functors(piT.lam(t).map, sigma),
                  compose_functors(arrow.top, piS.lam(tprime).map), results)

    # clause 3: the app square over the doubled reindexing
    topA = tc.cartA.top
    lift2_ob = {w: piT.app_square.pair_ob(arrow.top.ob[piS.app_square.p1.ob[w]],
                                          topA.ob[piS.app_square.p2.ob[w]])
                for w in piS.app_square.apex.objects}
    lift2_mor = {m: piT.app_square.pair_mor(arrow.top.mor[piS.app_square.p1.mor[m]],
                                            topA.mor[piS.app_square.p2.mor[m]])
                 for m in piS.app_square.apex.mor}
    lift2 = GFunctor(piS.app_square.apex, piT.app_square.apex,
                     lift2_ob, lift2_mor)
    _eq_check("pi.3.app",
              compose_functors(piT.app, lift2),
              compose_functors(tc.cartB.top, piS.app), results)


def _id_clauses(dt, sigma, tau, results):
    A = dt if isinstance(dt, CompObject) else dt.items[0]
    rxA = reindex(A, sigma)
    cart = rxA.cart
    arrow = id_action(cart)
    _cart_check("id.1.cartesian", arrow, results)
    ident = id_action(reindex(A, identity_functor(A.ctx)).cart)
    _eq_check("id.1.identity", ident.top,
              identity_functor(id_form_vb(A).obj.total), results)
    if tau is not None:
        rx2 = reindex(rxA.obj, tau)
        pasted = CartesianArrow(rx2.obj, A,
                                compose_functors(cart.top, rx2.cart.top),
                                compose_functors(sigma, tau))
        _eq_check("id.1.compose", id_action(pasted).top,
                  compose_functors(arrow.top, id_action(rx2.cart).top), results)

    idA, idB = id_form_vb(A), id_form_vb(rxA.obj)
    _eq_check("id.2.r",
              compose_functors(idA.r, cart.top),
              compose_functors(arrow.top, idB.r), results)

    # clause 3 with C the weakened identity type and t its reflexive pairing
    rxC = reindex(idA.obj, idA.obj.chi)
    C = rxC.obj
    t = GFunctor(A.total, C.total,
                 {x: rxC.square.pair_ob(idA.r.ob[x], idA.r.ob[x])
                  for x in A.total.objects},
                 {m: rxC.square.pair_mor(idA.r.mor[m], idA.r.mor[m])
                  for m in A.total.mor})
    j = j_eliminate(A, C, t)
    rxC2 = reindex(C, arrow.top)
    tprime = GFunctor(rxA.obj.total, rxC2.obj.total,
                      {x: rxC2.square.pair_ob(t.ob[cart.top.ob[x]], idB.r.ob[x])
                       for x in rxA.obj.total.objects},
                      {m: rxC2.square.pair_mor(t.mor[cart.top.mor[m]], idB.r.mor[m])
                       for m in rxA.obj.total.mor})
    jprime = j_eliminate(rxA.obj, rxC2.obj, tprime)
    _eq_check("id.3.j",
              compose_functors(rxC2.cart.top, jprime),
              compose_functors(j, arrow.top), results)


def _id_pointwise_clauses(dt, sigma, tau, results):
    A = dt if isinstance(dt, CompObject) else dt.items[0]
    rxA = reindex(A, sigma)
    cart = rxA.cart
    secs = enumerate_sections(A)
    if not secs:
        results.append(CheckResult("idpt.1.cartesian", True, "no sections of A"))
        return
    a = secs[0]
    b = secs[-1]
    arrow, a2, b2 = id_pointwise_action(cart, a, b)
    _cart_check("idpt.1.cartesian", arrow, results)
    ident, _, _ = id_pointwise_action(
        reindex(A, identity_functor(A.ctx)).cart, a, b)
    _eq_check("idpt.1.identity", ident.top,
              identity_functor(id_pointwise(A, a, b).obj.total), results)
    if tau is not None:
        rx2 = reindex(rxA.obj, tau)
        pasted = CartesianArrow(rx2.obj, A,
                                compose_functors(cart.top, rx2.cart.top),
                                compose_functors(sigma, tau))
        arrow2, _, _ = id_pointwise_action(rx2.cart, a2, b2)
        try:
            pasted_arrow, _, _ = id_pointwise_action(pasted, a, b)
            _eq_check("idpt.1.compose", pasted_arrow.top,
                      compose_functors(arrow.top, arrow2.top), results)
        except GroupoidError as err:
            results.append(CheckResult("idpt.1.compose", False, str(err)))

    pkgA = var_id_package(A)
    pkgB = var_id_package(rxA.obj)
    vb = id_action(cart)
    idf_xy = compose_functors(pkgA.iota_inv,
                              compose_functors(vb.top, pkgB.iota))
    _eq_check("idpt.2.r",
              compose_functors(pkgA.r, cart.top),
              compose_functors(idf_xy, pkgB.r), results)

    # clause 3 at the canonical elimination data
    rxC = reindex(pkgA.id_xy.obj, pkgA.id_xy.obj.chi)
    C = rxC.obj
    t = GFunctor(A.total, C.total,
                 {x: rxC.square.pair_ob(pkgA.r.ob[x], pkgA.r.ob[x])
                  for x in A.total.objects},
                 {m: rxC.square.pair_mor(pkgA.r.mor[m], pkgA.r.mor[m])
                  for m in A.total.mor})
    j = j_eliminate_xy(pkgA, C, t)
    rxC2 = reindex(C, idf_xy)
    tprime = GFunctor(rxA.obj.total, rxC2.obj.total,
                      {x: rxC2.square.pair_ob(t.ob[cart.top.ob[x]], pkgB.r.ob[x])
                       for x in rxA.obj.total.objects},
                      {m: rxC2.square.pair_mor(t.mor[cart.top.mor[m]], pkgB.r.mor[m])
                       for m in rxA.obj.total.mor})
    jprime = j_eliminate_xy(pkgB, rxC2.obj, tprime)
    _eq_check("idpt.3.j",
              compose_functors(rxC2.cart.top, jprime),
              compose_functors(j, idf_xy), results)
