"""Pushforward of a slice object along a cloven normal isofibration.

An object of the pushforward over γ is a section of g on the strict fiber
over γ; a morphism over p: γ→γ′ is a coherent family indexed by every
total-space morphism over p.  The chosen lifts of the isofibration factor
morphisms when composing families.  The defining contract is the hom-set
bijection against pullback, not this particular construction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .awfs import RStruct
from .core import (
    FinGroupoid,
    composable_pairs,
    GFunctor,
    GroupoidError,
    PullbackSquare,
    SliceMap,
    canonical_pullback,
    enumerate_functors,
    sort_key,
)


def _section_ident(gamma, ob: dict, mor: dict):
    return ("sec", gamma,
            tuple(sorted(ob.items(), key=lambda kv: sort_key(kv[0]))),
            tuple(sorted(mor.items(), key=lambda kv: sort_key(kv[0]))))


def _family_ident(src_id, tgt_id, p, table: dict):
    return ("fam", src_id, tgt_id, p,
            tuple(sorted(table.items(), key=lambda kv: sort_key(kv[0]))))


class _FiberData:
    """Fibers of an isofibration, with morphisms indexed by base image."""

    def __init__(self, f: RStruct):
        self.f = f
        base, X = f.f.cod, f.f.dom
        self.fiber_objects = {gamma: [] for gamma in base.objects}
        for x in X.objects:
            self.fiber_objects[f.f.ob[x]].append(x)
        self.fiber_mors = {gamma: [] for gamma in base.objects}
        self.over_mor = {p: [] for p in base.mor}
        for m in X.morphisms():
            self.over_mor[f.f.mor[m]].append(m)
        for gamma in base.objects:
            self.fiber_mors[gamma] = self.over_mor[base.id_of(gamma)]

    def fiber_groupoid(self, gamma) -> FinGroupoid:
        X = self.f.f.dom
        objs = self.fiber_objects[gamma]
        mors = self.fiber_mors[gamma]
        return FinGroupoid(
            objs, {m: X.mor[m] for m in mors},
            {x: X.id_of(x) for x in objs},
            {(h, g): c for (h, g), c in X.comp.items() if h in mors and g in mors},
            {m: X.inv[m] for m in mors})


@dataclass(frozen=True)
class Pushforward:
    """The slice object Π together with its counit and transposition maps."""

    f: RStruct
    g: SliceMap
    pi: SliceMap                    # the pushforward, over the base of f
    counit_pullback: PullbackSquare  # the reindexing of Π along f
    app: GFunctor                   # counit: that reindexing → total of g

    def transpose(self, h: SliceMap, u: GFunctor) -> GFunctor:
        """hom(f*h, g) → hom(h, Π); u goes from the pullback of h along f."""
        pb = canonical_pullback(h.proj, self.f.f)
        fib = _FiberData(self.f)
        ob = {}
        for w in h.total.objects:
            gamma = h.proj.ob[w]
            sec_ob = {x: u.ob[pb.pair_ob(w, x)] for x in fib.fiber_objects[gamma]}
            sec_mor = {m: u.mor[pb.pair_mor(h.total.id_of(w), m)]
                       for m in fib.fiber_mors[gamma]}
            ob[w] = _section_ident(gamma, sec_ob, sec_mor)
        mor = {}
        for omega in h.total.mor:
            p = h.proj.mor[omega]
            table = {alpha: u.mor[pb.pair_mor(omega, alpha)]
                     for alpha in fib.over_mor[p]}
            s, t = h.total.mor[omega]
            mor[omega] = _family_ident(ob[s], ob[t], p, table)
        return GFunctor(h.total, self.pi.total, ob, mor)

    def transpose_inv(self, h: SliceMap, v: GFunctor) -> GFunctor:
        """hom(h, Π) → hom(f*h, g)."""
        pb = canonical_pullback(h.proj, self.f.f)
        ob = {}
        for w in pb.apex.objects:
            sec = dict(v.ob[pb.p1.ob[w]][2])
            ob[w] = sec[pb.p2.ob[w]]
        mor = {}
        for m in pb.apex.mor:
            fam = dict(v.mor[pb.p1.mor[m]][4])
            mor[m] = fam[pb.p2.mor[m]]
        return GFunctor(pb.apex, self.g.total, ob, mor)


def _sections_at(fib: _FiberData, gamma, g: SliceMap):
    fiber = fib.fiber_groupoid(gamma)
    return fiber, enumerate_functors(
        fiber, g.total,
        ob_allowed=lambda x, y: g.proj.ob[y] == x,
        mor_allowed=lambda m, n: g.proj.mor[n] == m)


def _coherent_families(f: RStruct, fib: _FiberData, g: SliceMap,
                       sections: dict, sec_data: dict, src_id, p):
    """All coherent families out of the section ``src_id`` over p, as
    (target section ident, table) pairs.

    A value on one morphism into each target object forces the rest; the
    search assigns values in order, forcing whenever a previously assigned
    morphism shares its target.
    """
    X = f.f.dom
    Z = g.total
    base = f.f.cod
    gamma2 = base.tgt(p)
    s_ob, s_mor = sec_data[src_id]
    alphas = fib.over_mor[p]
    out = []

    def finish(table):
        t_ob = {}
        for alpha in alphas:
            x2 = X.tgt(alpha)
            val = Z.tgt(table[alpha])
            if t_ob.get(x2, val) != val:
                return
            t_ob[x2] = val
        if set(t_ob) != set(fib.fiber_objects[gamma2]):
            return
        base_alpha = {}
        for alpha in alphas:
            base_alpha.setdefault(X.tgt(alpha), alpha)
        t_mor = {}
        for m in fib.fiber_mors[gamma2]:
            a1 = base_alpha[X.src(m)]
            t_mor[m] = Z.compose(table[X.compose(m, a1)], Z.inv[table[a1]])
        tgt_id = _section_ident(gamma2, t_ob, t_mor)
        if tgt_id not in sections:
            return
        for alpha in alphas:
            xs, xt = X.mor[alpha]
            for beta in fib.fiber_mors[base.src(p)]:
                if X.tgt(beta) == xs:
                    if table[X.compose(alpha, beta)] != Z.compose(
                            table[alpha], s_mor[beta]):
                        return
            for beta2 in fib.fiber_mors[gamma2]:
                if X.src(beta2) == xt:
                    if table[X.compose(beta2, alpha)] != Z.compose(
                            t_mor[beta2], table[alpha]):
                        return
        out.append((tgt_id, dict(table)))

    def extend(idx, table):
        if idx == len(alphas):
            finish(table)
            return
        alpha = alphas[idx]
        xs, xt = X.mor[alpha]
        forced = None
        for a2 in alphas[:idx]:
            if X.tgt(a2) == xt:
                beta = X.compose(X.inv[a2], alpha)
                forced = Z.compose(table[a2], s_mor[beta])
                break
        if forced is not None:
            if g.proj.mor[forced] == alpha and Z.src(forced) == s_ob[xs]:
                table[alpha] = forced
                extend(idx + 1, table)
                del table[alpha]
            return
        for cand in Z.morphisms():
            if g.proj.mor[cand] != alpha or Z.src(cand) != s_ob[xs]:
                continue
            table[alpha] = cand
            extend(idx + 1, table)
            del table[alpha]

    extend(0, {})
    return out


def pushforward(f: RStruct, g: SliceMap) -> Pushforward:
    """Right adjoint to pullback along f, applied to g."""
    if not isinstance(f, RStruct):
        raise GroupoidError(["pushforward: f lacks isofibration structure"])
    X, base = f.f.dom, f.f.cod
    if g.base != X:
        raise GroupoidError(["pushforward: g is not a slice over the total of f"])

    fib = _FiberData(f)
    Z = g.total

    sections = {}
    sec_data = {}
    for gamma in base.objects:
        _, secs = _sections_at(fib, gamma, g)
        for s in secs:
            ident = _section_ident(gamma, s.ob, s.mor)
            sections[ident] = gamma
            sec_data[ident] = (dict(s.ob), dict(s.mor))

    objects = sorted(sections, key=sort_key)
    mor = {}
    for src_id in objects:
        gamma = sections[src_id]
        for p in base.mor:
            if base.src(p) != gamma:
                continue
            for tgt_id, table in _coherent_families(f, fib, g, sections,
                                                    sec_data, src_id, p):
                ident = _family_ident(src_id, tgt_id, p, table)
                mor[ident] = (src_id, tgt_id)

    identity = {}
    for src_id in objects:
        gamma = sections[src_id]
        _, s_mor = sec_data[src_id]
        table = {alpha: s_mor[alpha] for alpha in fib.fiber_mors[gamma]}
        identity[src_id] = _family_ident(src_id, src_id, base.id_of(gamma), table)

    comp = {}
    tabs = {m: dict(m[4]) for m in mor}
    for m2, m1 in composable_pairs(mor):
        p2 = m2[3]
        tab2 = tabs[m2]
        if True:
            p1 = m1[3]
            tab1 = tabs[m1]
            p = base.compose(p2, p1)
            table = {}
            for xi in fib.over_mor[p]:
                pbar = f.lift(X.tgt(xi), p2)
                rest = X.compose(X.inv[pbar], xi)
                table[xi] = Z.compose(tab2[pbar], tab1[rest])
            comp[(m2, m1)] = _family_ident(mor[m1][0], mor[m2][1], p, table)

    inv = {}
    for m, (s, t) in mor.items():
        table = {X.inv[alpha]: Z.inv[v] for alpha, v in m[4]}
        inv[m] = _family_ident(t, s, base.inv[m[3]], table)

    total = FinGroupoid(objects, mor, identity, comp, inv,
                        name=f"Pi({f.f.name})" if f.f.name else "Pi")
    proj = GFunctor(total, base,
                    {o: sections[o] for o in objects},
                    {m: m[3] for m in mor})
    pi = SliceMap(base, total, proj)

    pb = canonical_pullback(proj, f.f)
    app_ob = {w: dict(pb.p1.ob[w][2])[pb.p2.ob[w]] for w in pb.apex.objects}
    app_mor = {m: dict(pb.p1.mor[m][4])[pb.p2.mor[m]] for m in pb.apex.mor}
    app = GFunctor(pb.apex, Z, app_ob, app_mor)

    return Pushforward(f, g, pi, pb, app)


def pushforward_rstruct(f: RStruct, g: RStruct, pf: Pushforward) -> RStruct:
    """Isofibration structure on the pushforward, built pointwise.

    A base morphism is lifted against a section by transporting each fiber
    point backwards through the chosen lifts of f and then lifting the
    section values through those of g.
    """
    X, base = f.f.dom, f.f.cod
    Z = g.f.dom
    total = pf.pi.total
    fib = _FiberData(f)
    lifts = {}
    for tgt_id in total.objects:
        gamma2 = pf.pi.proj.ob[tgt_id]
        t_ob, t_mor = dict(tgt_id[2]), dict(tgt_id[3])
        for p in base.mor:
            if base.tgt(p) != gamma2:
                continue
            gamma = base.src(p)
            table = {}
            alpha_of = {}
            for x in fib.fiber_objects[gamma]:
                alpha_x = X.inv[f.lift(x, base.inv[p])]
                alpha_of[x] = alpha_x
                table[alpha_x] = g.lift(t_ob[X.tgt(alpha_x)], alpha_x)
            s_ob = {x: Z.src(table[alpha_of[x]]) for x in fib.fiber_objects[gamma]}
            s_mor = {}
            for m in fib.fiber_mors[gamma]:
                xs, xt = X.mor[m]
                conj = X.compose(alpha_of[xt], X.compose(m, X.inv[alpha_of[xs]]))
                s_mor[m] = Z.compose(Z.inv[table[alpha_of[xt]]],
                                     Z.compose(t_mor[conj], table[alpha_of[xs]]))
            src_id = _section_ident(gamma, s_ob, s_mor)
            for alpha in fib.over_mor[p]:
                if alpha in table:
                    continue
                x = X.src(alpha)
                rest = X.compose(alpha, X.inv[alpha_of[x]])
                table[alpha] = Z.compose(t_mor[rest], table[alpha_of[x]])
            lifts[(tgt_id, p)] = _family_ident(src_id, tgt_id, p, table)
    return RStruct(pf.pi.proj, lifts)
