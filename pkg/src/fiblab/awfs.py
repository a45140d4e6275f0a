"""The comma factorisation system on finite groupoids.

Every functor f: X→Y factors as X → Qf → Y through the groupoid of triples
(a, b, p: b→fa).  The right class carries normal-isofibration structure
(chosen lifts of morphisms, identity lifts being identities) and the left
class strong-deformation-retraction structure; both are stored as total
tables so that structure equality is decidable.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    FinGroupoid,
    composable_pairs,
    GFunctor,
    GNatIso,
    GroupoidError,
    PullbackSquare,
    canonical_pullback,
    comma_groupoid,
    compose_functors,
    identity_functor,
)


@dataclass(frozen=True)
class Factorisation:
    """f = right∘left through the comma groupoid of f."""

    f: GFunctor
    apex: FinGroupoid
    left: GFunctor
    right: GFunctor


def factorize(f: GFunctor) -> Factorisation:
    comma = comma_groupoid(f)
    return Factorisation(f, comma.apex, comma.left, comma.right)


@dataclass(frozen=True)
class LiftingSquare:
    """A commuting square (top, bottom): g → f in the arrow category."""

    g: GFunctor
    f: GFunctor
    top: GFunctor
    bottom: GFunctor

    def check(self) -> list[str]:
        if compose_functors(self.f, self.top) != compose_functors(self.bottom, self.g):
            return ["square does not commute"]
        return []


def factor_map(sq: LiftingSquare, fac_src: Factorisation,
               fac_tgt: Factorisation) -> GFunctor:
    """The functor Qg → Qf induced on comma groupoids by a square g → f."""
    h, k = sq.top, sq.bottom
    ob = {}
    for (a, b, p) in fac_src.apex.objects:
        ob[(a, b, p)] = (h.ob[a], k.ob[b], k.mor[p])
    mor = {}
    for m, (s, t) in fac_src.apex.mor.items():
        alpha, beta = m[1]
        mor[m] = (ob[s], (h.mor[alpha], k.mor[beta]))
    return GFunctor(fac_src.apex, fac_tgt.apex, ob, mor)


class RStruct:
    """A cloven normal isofibration: f with a lift table.

    ``lifts[(x, p)]`` is the chosen morphism over p with target x, for every
    object x of the total and every p in the base ending at f(x).  The lift
    of an identity must be an identity.
    """

    __slots__ = ("f", "lifts", "_hash")

    def __init__(self, f: GFunctor, lifts: dict):
        self.f = f
        self.lifts = dict(lifts)
        self._hash = None

    def lift(self, x, p):
        return self.lifts[(x, p)]

    def check(self) -> list[str]:
        out = []
        X, base = self.f.dom, self.f.cod
        expected = {(x, p) for x in X.objects for p in base.mor
                    if base.tgt(p) == self.f.ob[x]}
        if set(self.lifts) != expected:
            return ["lift table does not cover exactly the morphisms into each fiber"]
        for (x, p), m in self.lifts.items():
            if m not in X.mor:
                out.append(f"lift of ({x!r}, {p!r}) is not a morphism")
                continue
            if X.tgt(m) != x:
                out.append(f"lift of ({x!r}, {p!r}) does not target {x!r}")
            if self.f.mor[m] != p:
                out.append(f"lift of ({x!r}, {p!r}) does not lie over {p!r}")
        for x in X.objects:
            one = base.id_of(self.f.ob[x])
            if self.lifts.get((x, one)) != X.id_of(x):
                out.append(f"non-normal lift at {x!r}")
        return out

    def canonical_form(self):
        from .core import sort_key
        return tuple(sorted(self.lifts.items(), key=lambda kv: sort_key(kv[0])))

    def __eq__(self, other):
        if not isinstance(other, RStruct):
            return NotImplemented
        return self.f == other.f and self.lifts == other.lifts

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((hash(self.f), self.canonical_form()))
        return self._hash

    def __repr__(self):
        return f"<RStruct on {self.f!r}>"


class LStruct:
    """A strong deformation retraction: g with retraction and homotopy.

    lam1∘g = 1, lam2: 1 ⇒ g∘lam1 with identity components on the image of g.
    ``orientation`` records the homotopy direction convention (fixed to 1 for
    groupoids: the homotopy runs from the identity to g∘lam1).
    """

    __slots__ = ("g", "lam1", "lam2", "orientation", "_hash")

    def __init__(self, g: GFunctor, lam1: GFunctor, lam2: GNatIso,
                 orientation: int = 1):
        self.g = g
        self.lam1 = lam1
        self.lam2 = lam2
        self.orientation = orientation
        self._hash = None

    def check(self) -> list[str]:
        out = []
        A, B = self.g.dom, self.g.cod
        if self.lam1.dom != B or self.lam1.cod != A:
            return ["retraction has wrong endpoints"]
        if compose_functors(self.lam1, self.g) != identity_functor(A):
            out.append("lam1∘g is not the identity")
        if (self.lam2.source != identity_functor(B)
                or self.lam2.target != compose_functors(self.g, self.lam1)):
            out.append("homotopy endpoints are not 1 ⇒ g∘lam1")
        out.extend(self.lam2.check())
        if out:
            return out
        comps = dict(self.lam2.components)
        for a in A.objects:
            b = self.g.ob[a]
            if comps[b] != B.id_of(b):
                out.append(f"homotopy not constant on the image at {a!r}")
        return out

    def __eq__(self, other):
        if not isinstance(other, LStruct):
            return NotImplemented
        return (self.g == other.g and self.lam1 == other.lam1
                and self.lam2 == other.lam2
                and self.orientation == other.orientation)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((hash(self.g), hash(self.lam1),
                               self.lam2.components, self.orientation))
        return self._hash

    def __repr__(self):
        return f"<LStruct on {self.g!r}>"


# -- (co)monad structure ---------------------------------------------------


def comonad_delta(f: GFunctor, fac: Factorisation | None = None,
                  fac_left: Factorisation | None = None) -> GFunctor:
    """Comultiplication Qf → Q(left f): (a, b, p) ↦ (a, (a, b, p), (1_a, p))."""
    fac = fac or factorize(f)
    fac_left = fac_left or factorize(fac.left)
    X = f.dom
    ob = {}
    for (a, b, p) in fac.apex.objects:
        zeta = ((a, b, p), (X.id_of(a), p))
        ob[(a, b, p)] = (a, (a, b, p), zeta)
    mor = {}
    for m, (s, t) in fac.apex.mor.items():
        alpha, _ = m[1]
        mor[m] = (ob[s], (alpha, m))
    return GFunctor(fac.apex, fac_left.apex, ob, mor)


def monad_mu(f: GFunctor, fac: Factorisation | None = None,
             fac_right: Factorisation | None = None) -> GFunctor:
    """Multiplication Q(right f) → Qf: ((a, b, p), b̃, p̃) ↦ (a, b̃, p∘p̃)."""
    fac = fac or factorize(f)
    fac_right = fac_right or factorize(fac.right)
    Y = f.cod
    ob = {}
    for ((a, b, p), bt, pt) in fac_right.apex.objects:
        ob[((a, b, p), bt, pt)] = (a, bt, Y.compose(p, pt))
    mor = {}
    for m, (s, t) in fac_right.apex.mor.items():
        pair_mor, beta_t = m[1]
        alpha, _ = pair_mor[1]
        mor[m] = (ob[s], (alpha, beta_t))
    return GFunctor(fac_right.apex, fac.apex, ob, mor)


def free_rstruct(f: GFunctor, fac: Factorisation | None = None) -> RStruct:
    """The canonical isofibration structure on right(f), from the monad."""
    fac = fac or factorize(f)
    Y = f.cod
    lifts = {}
    for w in fac.apex.objects:
        a, b, p = w
        for q in Y.mor:
            if Y.tgt(q) != b:
                continue
            src = (a, Y.src(q), Y.compose(p, q))
            lifts[(w, q)] = (src, (f.dom.id_of(a), q))
    return RStruct(fac.right, lifts)


def free_lstruct(f: GFunctor, fac: Factorisation | None = None) -> LStruct:
    """The canonical deformation-retraction structure on left(f)."""
    fac = fac or factorize(f)
    X, Y = f.dom, f.cod
    lam1 = GFunctor(fac.apex, X,
                    {w: w[0] for w in fac.apex.objects},
                    {m: m[1][0] for m in fac.apex.mor})
    comps = {}
    for w in fac.apex.objects:
        a, b, p = w
        comps[w] = (w, (X.id_of(a), p))
    lam2 = GNatIso.build(identity_functor(fac.apex),
                         compose_functors(fac.left, lam1), comps)
    return LStruct(fac.left, lam1, lam2)


# -- correspondences -------------------------------------------------------


def isofib_rmap_convert(x, fac: Factorisation | None = None):
    """Convert between lift-table form and algebra form s: Qf → X.

    Given an RStruct, returns the functor s with s∘left = 1 and f∘s = right.
    Given (f, s), returns the RStruct it encodes.  Round trips are identities.
    """
    if isinstance(x, RStruct):
        r = x
        f = r.f
        fac = fac or factorize(f)
        X = f.dom
        ob = {}
        for (a, b, p) in fac.apex.objects:
            ob[(a, b, p)] = X.src(r.lift(a, p))
        mor = {}
        for m, (s_ob, t_ob) in fac.apex.mor.items():
            (a, b, p), (alpha, _) = s_ob, m[1]
            a2, b2, p2 = t_ob
            mor[m] = X.compose(X.inv[r.lift(a2, p2)],
                               X.compose(alpha, r.lift(a, p)))
        return GFunctor(fac.apex, X, ob, mor)

    f, s = x
    fac = fac or factorize(f)
    X, Y = f.dom, f.cod
    if compose_functors(s, fac.left) != identity_functor(X):
        raise GroupoidError(["algebra form: s∘left is not the identity"])
    if compose_functors(f, s) != fac.right:
        raise GroupoidError(["algebra form: f∘s is not the comma projection"])
    lifts = {}
    for a in X.objects:
        fa = f.ob[a]
        for p in Y.mor:
            if Y.tgt(p) != fa:
                continue
            src = (a, Y.src(p), p)
            tgt = (a, fa, Y.id_of(fa))
            lifts[(a, p)] = s.mor[(src, (X.id_of(a), p))]
    r = RStruct(f, lifts)
    diags = r.check()
    if diags:
        raise GroupoidError(["non-normal lift data"] + diags)
    return r


def sdr_lmap_convert(x, fac: Factorisation | None = None):
    """Convert between SDR form and coalgebra form λ: B → Qg.

    λ(b) = (lam1(b), b, lam2(b)); the coalgebra satisfies right∘λ = 1 and
    λ∘g = left.  Round trips are identities.
    """
    if isinstance(x, LStruct):
        l = x
        g = l.g
        fac = fac or factorize(g)
        B = g.cod
        comps = dict(l.lam2.components)
        ob = {b: (l.lam1.ob[b], b, comps[b]) for b in B.objects}
        mor = {}
        for u, (s, t) in B.mor.items():
            mor[u] = (ob[s], (l.lam1.mor[u], u))
        return GFunctor(B, fac.apex, ob, mor)

    g, lam = x
    fac = fac or factorize(g)
    A, B = g.dom, g.cod
    if compose_functors(fac.right, lam) != identity_functor(B):
        raise GroupoidError(["coalgebra form: right∘λ is not the identity"])
    if compose_functors(lam, g) != fac.left:
        raise GroupoidError(["coalgebra form: λ∘g is not the comma unit"])
    lam1 = GFunctor(B, A,
                    {b: lam.ob[b][0] for b in B.objects},
                    {u: lam.mor[u][1][0] for u in B.mor})
    comps = {b: lam.ob[b][2] for b in B.objects}
    lam2 = GNatIso.build(identity_functor(B), compose_functors(g, lam1), comps)
    l = LStruct(g, lam1, lam2)
    diags = l.check()
    if diags:
        raise GroupoidError(["λ₂ not constant on image of g"] + diags)
    return l


# -- the filler ------------------------------------------------------------


def filler(l: LStruct, r: RStruct, sq: LiftingSquare) -> GFunctor:
    """The canonical diagonal j = s∘Q(top, bottom)∘λ of a lifting square."""
    if sq.g != l.g or sq.f != r.f:
        raise GroupoidError(["square does not connect the given structures"])
    diags = sq.check()
    if diags:
        raise GroupoidError(["non-commuting square"] + diags)
    fac_g = factorize(l.g)
    fac_f = factorize(r.f)
    lam = sdr_lmap_convert(l, fac_g)
    s = isofib_rmap_convert(r, fac_f)
    q = factor_map(sq, fac_g, fac_f)
    return compose_functors(s, compose_functors(q, lam))


# -- closure properties ----------------------------------------------------


def vcompose_rmap(a: RStruct, b: RStruct) -> RStruct:
    """Composite isofibration structure on b.f∘a.f: lift through b, then a."""
    if a.f.cod != b.f.dom:
        raise GroupoidError(["vcompose_rmap: endpoints mismatch"])
    f, fp = a.f, b.f
    composite = compose_functors(fp, f)
    lifts = {}
    for x in f.dom.objects:
        mid = f.ob[x]
        for p in fp.cod.mor:
            if fp.cod.tgt(p) != composite.ob[x]:
                continue
            upper = b.lift(mid, p)
            lifts[(x, p)] = a.lift(x, upper)
    return RStruct(composite, lifts)


def pullback_rmap(sq: LiftingSquare, r: RStruct,
                  pb: PullbackSquare | None = None) -> RStruct:
    """The unique structure on a pullback of r.f making the square a morphism
    of structured maps.  The square must literally be the canonical pullback
    of r.f along its bottom."""
    if sq.f != r.f:
        raise GroupoidError(["pullback_rmap: square does not target r"])
    pb = pb or canonical_pullback(r.f, sq.bottom)
    if sq.g != pb.p2 or sq.top != pb.p1:
        raise GroupoidError(["non-Cartesian square: not the canonical pullback"])
    k = sq.bottom
    lifts = {}
    for w in pb.apex.objects:
        x = pb.p1.ob[w]
        for p in k.dom.mor:
            if k.dom.tgt(p) != pb.p2.ob[w]:
                continue
            lifts[(w, p)] = pb.pair_mor(r.lift(x, k.mor[p]), p)
    return RStruct(pb.p2, lifts)


def frobenius(l: LStruct, r: RStruct) -> tuple[LStruct, PullbackSquare]:
    """Deformation-retraction structure on the pullback of l.g along r.f.

    The new retraction sends x to (lam1(fx), x′) where x′ is the endpoint of
    the chosen lift of the homotopy component at fx; strength of the input
    homotopy plus normality of the lifts make it a retraction.
    """
    g, f = l.g, r.f
    if g.cod != f.cod:
        raise GroupoidError(["frobenius: no common codomain"])
    pb = canonical_pullback(g, f)
    gp = pb.p2
    X = f.dom
    comps_in = dict(l.lam2.components)

    lam2p = {}
    prime_ob = {}
    for x in X.objects:
        h = comps_in[f.ob[x]]
        lifted = X.inv[r.lift(x, f.cod.inv[h])]
        lam2p[x] = lifted
        prime_ob[x] = X.tgt(lifted)

    ob = {x: pb.pair_ob(l.lam1.ob[f.ob[x]], prime_ob[x]) for x in X.objects}
    mor = {}
    for u, (s, t) in X.mor.items():
        u_prime = X.compose(lam2p[t], X.compose(u, X.inv[lam2p[s]]))
        mor[u] = pb.pair_mor(l.lam1.mor[f.mor[u]], u_prime)
    lam1p = GFunctor(X, pb.apex, ob, mor)
    lam2 = GNatIso.build(identity_functor(X), compose_functors(gp, lam1p), lam2p)
    return LStruct(gp, lam1p, lam2), pb


# -- path objects -----------------------------------------------------------


@dataclass(frozen=True)
class PathObject:
    """The factorisation of the relative diagonal of a structured map.

    ``apex`` has objects (a, a′, p) with p over an identity of the base;
    ``reflexivity`` is a ↦ (a, a, 1) with SDR structure ``lstruct``;
    ``boundary`` is (a, a′, p) ↦ (a, a′) with isofibration structure
    ``rstruct``; boundary∘reflexivity equals the diagonal literally.
    """

    apex: FinGroupoid
    reflexivity: GFunctor
    boundary: GFunctor
    lstruct: LStruct
    rstruct: RStruct
    pullback: PullbackSquare
    diagonal: GFunctor


def path_object(r: RStruct) -> PathObject:
    f = r.f
    X, Y = f.dom, f.cod
    pb = canonical_pullback(f, f)

    objects = [(a, a2, p)
               for a in X.objects
               for a2 in X.objects
               for p in X.hom(a, a2)
               if f.mor[p] == Y.id_of(f.ob[a])]
    mor = {}
    for (a, a2, p) in objects:
        for sigma in X.mor:
            if X.src(sigma) != a:
                continue
            fs = f.mor[sigma]
            for tau in X.mor:
                if X.src(tau) != a2 or f.mor[tau] != fs:
                    continue
                q = X.compose(tau, X.compose(p, X.inv[sigma]))
                src = (a, a2, p)
                tgt = (X.tgt(sigma), X.tgt(tau), q)
                mor[(src, (sigma, tau))] = (src, tgt)
    identity = {o: (o, (X.id_of(o[0]), X.id_of(o[1]))) for o in objects}
    comp = {}
    for m2, m1 in composable_pairs(mor):
        comp[(m2, m1)] = (mor[m1][0], (X.compose(m2[1][0], m1[1][0]),
                                       X.compose(m2[1][1], m1[1][1])))
    inv = {m: (st[1], (X.inv[m[1][0]], X.inv[m[1][1]])) for m, st in mor.items()}
    apex = FinGroupoid(objects, mor, identity, comp, inv,
                       name=f"P({f.name})" if f.name else "")

    refl = GFunctor(X, apex,
                    {a: (a, a, X.id_of(a)) for a in X.objects},
                    {u: ((X.src(u), X.src(u), X.id_of(X.src(u))), (u, u))
                     for u in X.mor})
    boundary = GFunctor(apex, pb.apex,
                        {o: pb.pair_ob(o[0], o[1]) for o in objects},
                        {m: pb.pair_mor(m[1][0], m[1][1]) for m in mor})

    lam1 = GFunctor(apex, X, {o: o[1] for o in objects},
                    {m: m[1][1] for m in mor})
    comps = {o: (o, (o[2], X.id_of(o[1]))) for o in objects}
    lam2 = GNatIso.build(identity_functor(apex), compose_functors(refl, lam1),
                         comps)
    lstruct = LStruct(refl, lam1, lam2)

    lifts = {}
    for o in objects:
        a, a2, p = o
        for m in pb.apex.mor:
            if pb.apex.tgt(m) != boundary.ob[o]:
                continue
            sigma, tau = pb.p1.mor[m], pb.p2.mor[m]
            q = X.compose(X.inv[tau], X.compose(p, sigma))
            src = (X.src(sigma), X.src(tau), q)
            lifts[(o, m)] = (src, (sigma, tau))
    rstruct = RStruct(boundary, lifts)

    diagonal = GFunctor(X, pb.apex,
                        {a: pb.pair_ob(a, a) for a in X.objects},
                        {u: pb.pair_mor(u, u) for u in X.mor})
    return PathObject(apex, refl, boundary, lstruct, rstruct, pb, diagonal)


def path_map(sq: LiftingSquare, src_path: PathObject,
             tgt_path: PathObject) -> GFunctor:
    """Functoriality of the path construction on a square (h, k): f′ → f."""
    h = sq.top
    ob = {o: (h.ob[o[0]], h.ob[o[1]], h.mor[o[2]]) for o in src_path.apex.objects}
    mor = {m: (ob[src_path.apex.src(m)], (h.mor[m[1][0]], h.mor[m[1][1]]))
           for m in src_path.apex.mor}
    return GFunctor(src_path.apex, tgt_path.apex, ob, mor)
