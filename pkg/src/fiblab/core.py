"""Finite groupoids, functors, and the limit constructions everything else uses.

Groupoids are stored with total composition tables so that every axiom is a
finite table scan and equality of any two constructions is literal equality
of identifiers.  Identifiers are strings, ints, or nested tuples of those;
two constructions agree exactly when their identifier tables agree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional


class GroupoidError(Exception):
    """Raised when a structure fails validation; carries the diagnostics."""

    def __init__(self, diagnostics):
        super().__init__("; ".join(diagnostics) if diagnostics else "invalid")
        self.diagnostics = list(diagnostics)


def sort_key(ident):
    """Total order on identifiers: ints, then strings, then tuples, recursively."""
    if isinstance(ident, bool):
        raise TypeError("bool is not a valid identifier")
    if isinstance(ident, int):
        return (0, ident)
    if isinstance(ident, str):
        return (1, ident)
    if isinstance(ident, tuple):
        return (2, tuple(sort_key(part) for part in ident))
    raise TypeError(f"unsupported identifier: {ident!r}")


def sorted_ids(idents):
    return tuple(sorted(idents, key=sort_key))


def composable_pairs(mor: dict):
    """Yield (m2, m1) with tgt(m1) = src(m2), indexing by source object."""
    by_src = {}
    for m, (s, _) in mor.items():
        by_src.setdefault(s, []).append(m)
    for m1, (_, t1) in mor.items():
        for m2 in by_src.get(t1, ()):
            yield m2, m1


class FinGroupoid:
    """A finite groupoid: objects, morphisms with src/tgt, and total tables.

    `comp` maps (g, f) to g∘f and must be defined exactly when tgt(f) = src(g).
    Construction does not validate the axioms; `groupoid_diagnostics` does.
    """

    __slots__ = ("objects", "mor", "identity", "comp", "inv", "name",
                 "_hom", "_hash")

    def __init__(self, objects, mor, identity, comp, inv, name=""):
        self.objects = sorted_ids(objects)
        self.mor = dict(mor)
        self.identity = dict(identity)
        self.comp = dict(comp)
        self.inv = dict(inv)
        self.name = name
        self._hom = None
        self._hash = None

    # -- basic accessors -------------------------------------------------

    def src(self, m):
        return self.mor[m][0]

    def tgt(self, m):
        return self.mor[m][1]

    def compose(self, g, f):
        """g∘f, defined when tgt(f) = src(g)."""
        return self.comp[(g, f)]

    def id_of(self, x):
        return self.identity[x]

    def inverse(self, m):
        return self.inv[m]

    def morphisms(self):
        return sorted_ids(self.mor)

    def hom(self, x, y):
        if self._hom is None:
            table = {}
            for m in self.morphisms():
                table.setdefault(self.mor[m], []).append(m)
            self._hom = {k: tuple(v) for k, v in table.items()}
        return self._hom.get((x, y), ())

    def is_identity_mor(self, m):
        src, tgt = self.mor[m]
        return src == tgt and self.identity[src] == m

    def canonical_form(self):
        return (
            self.objects,
            tuple(sorted(((m, s, t) for m, (s, t) in self.mor.items()), key=sort_key)),
            tuple(sorted(self.identity.items(), key=lambda kv: sort_key(kv[0]))),
            tuple(sorted(((g, f, h) for (g, f), h in self.comp.items()), key=sort_key)),
            tuple(sorted(self.inv.items(), key=lambda kv: sort_key(kv[0]))),
        )

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FinGroupoid):
            return NotImplemented
        return (self.objects == other.objects and self.mor == other.mor
                and self.identity == other.identity and self.comp == other.comp
                and self.inv == other.inv)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.canonical_form())
        return self._hash

    def __repr__(self):
        label = self.name or "groupoid"
        return f"<{label}: {len(self.objects)} objects, {len(self.mor)} morphisms>"


def groupoid_diagnostics(g: FinGroupoid) -> list[str]:
    """All violated groupoid axioms, each with a witness.  Empty when valid."""
    out = []
    for m, (s, t) in g.mor.items():
        if s not in g.identity or t not in g.identity:
            out.append(f"morphism {m!r} has unknown endpoint {s!r} or {t!r}")
    for x in g.objects:
        if x not in g.identity:
            out.append(f"object {x!r} has no identity")
            continue
        i = g.identity[x]
        if i not in g.mor:
            out.append(f"identity of {x!r} is not a morphism")
        elif g.mor[i] != (x, x):
            out.append(f"identity of {x!r} has src/tgt {g.mor[i]!r}")
    if out:
        return out

    composable = set()
    for f in g.mor:
        for h in g.mor:
            if g.tgt(f) == g.src(h):
                composable.add((h, f))
    table_keys = set(g.comp)
    for pair in sorted(composable - table_keys, key=sort_key):
        out.append(f"composition table missing composable pair {pair!r}")
    for pair in sorted(table_keys - composable, key=sort_key):
        out.append(f"composition table has non-composable pair {pair!r}")
    if out:
        return out

    for (h, f), c in g.comp.items():
        if c not in g.mor:
            out.append(f"composite of {(h, f)!r} is unknown morphism {c!r}")
        elif g.mor[c] != (g.src(f), g.tgt(h)):
            out.append(f"composite of {(h, f)!r} has wrong endpoints")
    if out:
        return out

    for f in g.mor:
        s, t = g.mor[f]
        if g.compose(f, g.identity[s]) != f or g.compose(g.identity[t], f) != f:
            out.append(f"unit/inverse violation at {f!r}")
            continue
        fi = g.inv.get(f)
        if fi is None or fi not in g.mor or g.mor[fi] != (t, s):
            out.append(f"unit/inverse violation at {f!r}")
            continue
        if (g.compose(fi, f) != g.identity[s]
                or g.compose(f, fi) != g.identity[t]):
            out.append(f"unit/inverse violation at {f!r}")

    for f in g.mor:
        tf = g.tgt(f)
        for h in g.mor:
            if g.src(h) != tf:
                continue
            hf = g.compose(h, f)
            for k in g.mor:
                if g.src(k) != g.tgt(h):
                    continue
                if g.compose(k, hf) != g.compose(g.compose(k, h), f):
                    out.append(f"associativity fails at ({k!r}, {h!r}, {f!r})")
    return out


def validate_groupoid(candidate) -> FinGroupoid:
    """Build and validate a groupoid from raw data or revalidate an instance.

    Raw data is a mapping with keys ``objects``, ``morphisms`` (id/src/tgt
    triples), ``identity``, ``compose`` ((g, f, g∘f) triples), ``inverse``.
    Raises GroupoidError listing every violated axiom with a witness.
    """
    if isinstance(candidate, FinGroupoid):
        g = candidate
    else:
        mor = {m["id"] if isinstance(m, dict) else m[0]:
               ((m["src"], m["tgt"]) if isinstance(m, dict) else (m[1], m[2]))
               for m in candidate["morphisms"]}
        comp = {(g_, f_): h for (g_, f_, h) in candidate["compose"]}
        identity = dict(candidate["identity"])
        inverse = dict(candidate["inverse"])
        g = FinGroupoid(candidate["objects"], mor, identity, comp, inverse,
                        name=candidate.get("name", ""))
    diags = groupoid_diagnostics(g)
    if diags:
        raise GroupoidError(diags)
    return g


class GFunctor:
    """A functor between finite groupoids, stored as total object/morphism maps."""

    __slots__ = ("dom", "cod", "ob", "mor", "name", "_hash")

    def __init__(self, dom, cod, ob, mor, name=""):
        self.dom = dom
        self.cod = cod
        self.ob = dict(ob)
        self.mor = dict(mor)
        self.name = name
        self._hash = None

    def on_ob(self, x):
        return self.ob[x]

    def on_mor(self, m):
        return self.mor[m]

    def check(self) -> list[str]:
        out = []
        for x in self.dom.objects:
            if x not in self.ob or self.ob[x] not in self.cod.identity:
                out.append(f"object {x!r} not mapped into codomain")
        for m, (s, t) in self.dom.mor.items():
            fm = self.mor.get(m)
            if fm is None or fm not in self.cod.mor:
                out.append(f"morphism {m!r} not mapped into codomain")
                continue
            if self.cod.mor[fm] != (self.ob[s], self.ob[t]):
                out.append(f"src/tgt not preserved at {m!r}")
        if out:
            return out
        for x in self.dom.objects:
            if self.mor[self.dom.id_of(x)] != self.cod.id_of(self.ob[x]):
                out.append(f"identity not preserved at {x!r}")
        for (h, f), c in self.dom.comp.items():
            if self.mor[c] != self.cod.compose(self.mor[h], self.mor[f]):
                out.append(f"composition not preserved at ({h!r}, {f!r})")
        return out

    def is_identity(self):
        return (self.dom == self.cod
                and all(v == k for k, v in self.ob.items())
                and all(v == k for k, v in self.mor.items()))

    def canonical_form(self):
        return (
            tuple(sorted(self.ob.items(), key=lambda kv: sort_key(kv[0]))),
            tuple(sorted(self.mor.items(), key=lambda kv: sort_key(kv[0]))),
        )

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, GFunctor):
            return NotImplemented
        return (self.dom == other.dom and self.cod == other.cod
                and self.ob == other.ob and self.mor == other.mor)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((hash(self.dom), hash(self.cod),
                               self.canonical_form()))
        return self._hash

    def __repr__(self):
        label = self.name or "functor"
        return f"<{label}: {self.dom!r} -> {self.cod!r}>"


def identity_functor(g: FinGroupoid) -> GFunctor:
    return GFunctor(g, g, {x: x for x in g.objects}, {m: m for m in g.mor},
                    name=f"1_{g.name}" if g.name else "")


def compose_functors(g: GFunctor, f: GFunctor) -> GFunctor:
    """g∘f; domains must match on the nose."""
    if f.cod != g.dom:
        raise GroupoidError(["functor composition mismatch"])
    return GFunctor(f.dom, g.cod,
                    {x: g.ob[y] for x, y in f.ob.items()},
                    {m: g.mor[n] for m, n in f.mor.items()})


def validate_functor(f: GFunctor) -> GFunctor:
    diags = f.check()
    if diags:
        raise GroupoidError(diags)
    return f


@dataclass(frozen=True)
class GNatIso:
    """A natural isomorphism between parallel functors, as a component table."""

    source: GFunctor
    target: GFunctor
    components: tuple  # sorted tuple of (object, morphism-of-cod) pairs

    @staticmethod
    def build(source, target, comps: dict) -> "GNatIso":
        return GNatIso(source, target,
                       tuple(sorted(comps.items(), key=lambda kv: sort_key(kv[0]))))

    def component(self, x):
        return dict(self.components)[x]

    def check(self) -> list[str]:
        out = []
        comps = dict(self.components)
        cod = self.source.cod
        for x in self.source.dom.objects:
            c = comps.get(x)
            if c is None or cod.mor.get(c) != (self.source.ob[x], self.target.ob[x]):
                out.append(f"component at {x!r} missing or mistyped")
        if out:
            return out
        for m, (s, t) in self.source.dom.mor.items():
            lhs = cod.compose(comps[t], self.source.mor[m])
            rhs = cod.compose(self.target.mor[m], comps[s])
            if lhs != rhs:
                out.append(f"naturality fails at {m!r}")
        return out


@dataclass(frozen=True)
class SliceMap:
    """An object of the slice over ``base``: a groupoid with its projection."""

    base: FinGroupoid
    total: FinGroupoid
    proj: GFunctor

    def check(self) -> list[str]:
        if self.proj.dom != self.total or self.proj.cod != self.base:
            return ["projection endpoints do not match slice data"]
        return self.proj.check()


# -- pullbacks ----------------------------------------------------------


class PullbackSquare:
    """The strict fiber product of f: X→Z and g: Y→Z with its projections.

    ``pair_ob``/``pair_mor`` recover the unique element with prescribed
    projections; they work uniformly whether or not the identity
    normalization collapsed the pair representation.
    """

    __slots__ = ("apex", "p1", "p2", "f", "g", "_ob_index", "_mor_index")

    def __init__(self, apex, p1, p2, f, g):
        self.apex = apex
        self.p1 = p1
        self.p2 = p2
        self.f = f
        self.g = g
        self._ob_index = {(p1.ob[w], p2.ob[w]): w for w in apex.objects}
        self._mor_index = {(p1.mor[m], p2.mor[m]): m for m in apex.mor}

    def pair_ob(self, a, b):
        return self._ob_index[(a, b)]

    def pair_mor(self, u, v):
        return self._mor_index[(u, v)]


def canonical_pullback(f: GFunctor, g: GFunctor) -> PullbackSquare:
    """Strict fiber product of f and g over their common codomain.

    If f is an identity the result is (dom g, g, 1) verbatim, and
    symmetrically; this normalization makes identity reindexing strictly
    trivial.
    """
    if f.cod != g.cod:
        raise GroupoidError(["canonical_pullback: codomain mismatch"])
    if f.is_identity():
        return PullbackSquare(g.dom, g, identity_functor(g.dom), f, g)
    if g.is_identity():
        return PullbackSquare(f.dom, identity_functor(f.dom), f, f, g)

    X, Y = f.dom, g.dom
    objects = [(x, y) for x in X.objects for y in Y.objects
               if f.ob[x] == g.ob[y]]
    mor = {}
    for u in X.mor:
        fu = f.mor[u]
        for v in Y.mor:
            if g.mor[v] == fu:
                mor[(u, v)] = ((X.src(u), Y.src(v)), (X.tgt(u), Y.tgt(v)))
    identity = {(x, y): (X.id_of(x), Y.id_of(y)) for (x, y) in objects}
    comp = {}
    for (u2, v2), (u1, v1) in composable_pairs(mor):
        comp[((u2, v2), (u1, v1))] = (X.compose(u2, u1), Y.compose(v2, v1))
    inv = {(u, v): (X.inv[u], Y.inv[v]) for (u, v) in mor}
    apex = FinGroupoid(objects, mor, identity, comp, inv,
                       name=f"pb({f.name},{g.name})" if f.name or g.name else "")
    p1 = GFunctor(apex, X, {w: w[0] for w in objects}, {m: m[0] for m in mor})
    p2 = GFunctor(apex, Y, {w: w[1] for w in objects}, {m: m[1] for m in mor})
    return PullbackSquare(apex, p1, p2, f, g)


def is_cartesian_square(top: GFunctor, bottom: GFunctor,
                        left: GFunctor, right: GFunctor) -> bool:
    """Whether the square (top, bottom): left → right is a pullback.

    left: A′→B′, right: A→B, top: A′→A, bottom: B′→B with
    right∘top = bottom∘left; decided by comparing A′ with the strict fiber
    product of (right, bottom).
    """
    if compose_functors(right, top) != compose_functors(bottom, left):
        return False
    pb = canonical_pullback(right, bottom)
    seen_obs = set()
    for x in left.dom.objects:
        w = pb._ob_index.get((top.ob[x], left.ob[x]))
        if w is None or w in seen_obs:
            return False
        seen_obs.add(w)
    if len(seen_obs) != len(pb.apex.objects):
        return False
    seen_mors = set()
    for m in left.dom.mor:
        w = pb._mor_index.get((top.mor[m], left.mor[m]))
        if w is None or w in seen_mors:
            return False
        seen_mors.add(w)
    return len(seen_mors) == len(pb.apex.mor)


# -- comma construction --------------------------------------------------


@dataclass(frozen=True)
class Comma:
    """The comma factorisation of f: X→Y through the groupoid of triples."""

    apex: FinGroupoid     # objects (a, b, p) with p: b → f(a)
    left: GFunctor        # X → apex, a ↦ (a, f a, 1)
    right: GFunctor       # apex → Y, (a, b, p) ↦ b


def comma_groupoid(f: GFunctor) -> Comma:
    """Objects are triples (a, b, p: b→fa); a morphism is a pair (α, β).

    The pair (α: a→a′, β: b→b′) maps (a, b, p) to (a′, b′, f(α)∘p∘β⁻¹), so
    the compatibility square p′∘β = f(α)∘p commutes by construction.
    """
    X, Y = f.dom, f.cod
    objects = [(a, b, p)
               for a in X.objects
               for b in Y.objects
               for p in Y.hom(b, f.ob[a])]
    mor = {}
    for (a, b, p) in objects:
        for alpha in X.mor:
            if X.src(alpha) != a:
                continue
            fa2 = f.mor[alpha]
            for beta in Y.mor:
                if Y.src(beta) != b:
                    continue
                p2 = Y.compose(Y.compose(fa2, p), Y.inv[beta])
                src = (a, b, p)
                tgt = (X.tgt(alpha), Y.tgt(beta), p2)
                mor[(src, (alpha, beta))] = (src, tgt)
    identity = {o: (o, (X.id_of(o[0]), Y.id_of(o[1]))) for o in objects}
    comp = {}
    for m2, m1 in composable_pairs(mor):
        a2, b2 = m2[1]
        a1, b1 = m1[1]
        comp[(m2, m1)] = (mor[m1][0], (X.compose(a2, a1), Y.compose(b2, b1)))
    inv = {}
    for m, (s, t) in mor.items():
        alpha, beta = m[1]
        inv[m] = (t, (X.inv[alpha], Y.inv[beta]))
    apex = FinGroupoid(objects, mor, identity, comp, inv,
                       name=f"Q({f.name})" if f.name else "")
    left = GFunctor(
        X, apex,
        {a: (a, f.ob[a], Y.id_of(f.ob[a])) for a in X.objects},
        {u: ((X.src(u), f.ob[X.src(u)], Y.id_of(f.ob[X.src(u)])), (u, f.mor[u]))
         for u in X.mor})
    right = GFunctor(apex, Y,
                     {o: o[1] for o in objects},
                     {m: m[1][1] for m in mor})
    return Comma(apex, left, right)


# -- fibers and slice homs ------------------------------------------------


def strict_fiber(f: GFunctor, gamma) -> tuple[FinGroupoid, GFunctor]:
    """Subgroupoid of dom(f) over ``gamma``: objects mapped to it, morphisms
    mapped to its identity.  Returns the fiber with its inclusion."""
    if gamma not in f.cod.identity:
        raise GroupoidError([f"unknown object {gamma!r}"])
    X = f.dom
    one = f.cod.id_of(gamma)
    objects = [x for x in X.objects if f.ob[x] == gamma]
    morphisms = [m for m in X.mor if f.mor[m] == one]
    mor = {m: X.mor[m] for m in morphisms}
    identity = {x: X.id_of(x) for x in objects}
    comp = {(h, g_): c for (h, g_), c in X.comp.items()
            if h in mor and g_ in mor}
    inv = {m: X.inv[m] for m in morphisms}
    fiber = FinGroupoid(objects, mor, identity, comp, inv,
                        name=f"fiber({f.name}@{gamma})" if f.name else "")
    incl = GFunctor(fiber, X, {x: x for x in objects}, {m: m for m in morphisms})
    return fiber, incl


def enumerate_functors(X: FinGroupoid, Y: FinGroupoid,
                       ob_allowed: Optional[Callable] = None,
                       mor_allowed: Optional[Callable] = None) -> list[GFunctor]:
    """Every functor X→Y, optionally filtered by per-object / per-morphism
    candidate predicates.  Exhaustive backtracking with composition
    propagation; intended for small instances only."""
    objects = list(X.objects)
    results = []

    def ob_candidates(x):
        cands = Y.objects
        if ob_allowed is not None:
            cands = [y for y in cands if ob_allowed(x, y)]
        return cands

    def assign_mors(ob_map):
        non_identities = [m for m in X.morphisms() if not X.is_identity_mor(m)]
        mor_map = {X.id_of(x): Y.id_of(ob_map[x]) for x in objects}

        pairs_by_member = {}
        for (h, g_), c in X.comp.items():
            pairs_by_member.setdefault(h, []).append((h, g_, c))
            pairs_by_member.setdefault(g_, []).append((h, g_, c))

        def propagate(newly, trail):
            # Force composites and inverses as soon as both factors are known.
            queue = [newly]
            while queue:
                m = queue.pop()
                fm = mor_map[m]
                mi = X.inv[m]
                fmi = Y.inv[fm]
                if mi in mor_map:
                    if mor_map[mi] != fmi:
                        return False
                else:
                    mor_map[mi] = fmi
                    trail.append(mi)
                    queue.append(mi)
                for (h, g_, c) in pairs_by_member.get(m, ()):
                    if h in mor_map and g_ in mor_map:
                        val = Y.comp.get((mor_map[h], mor_map[g_]))
                        if val is None:
                            return False
                        if c in mor_map:
                            if mor_map[c] != val:
                                return False
                        else:
                            mor_map[c] = val
                            trail.append(c)
                            queue.append(c)
            return True

        def backtrack(idx):
            while idx < len(non_identities) and non_identities[idx] in mor_map:
                idx += 1
            if idx == len(non_identities):
                results.append(GFunctor(X, Y, dict(ob_map), dict(mor_map)))
                return
            m = non_identities[idx]
            s, t = X.mor[m]
            for fm in Y.hom(ob_map[s], ob_map[t]):
                if mor_allowed is not None and not mor_allowed(m, fm):
                    continue
                trail = [m]
                mor_map[m] = fm
                if propagate(m, trail):
                    backtrack(idx + 1)
                for k in trail:
                    del mor_map[k]

        backtrack(0)

    def assign_obs(idx, ob_map):
        if idx == len(objects):
            assign_mors(ob_map)
            return
        x = objects[idx]
        for y in ob_candidates(x):
            ob_map[x] = y
            ok = True
            for m in X.mor:
                s, t = X.mor[m]
                if s in ob_map and t in ob_map and not Y.hom(ob_map[s], ob_map[t]):
                    ok = False
                    break
            if ok:
                assign_obs(idx + 1, ob_map)
            del ob_map[x]

    assign_obs(0, {})
    return results


def slice_hom_enumerate(h: SliceMap, k: SliceMap) -> list[GFunctor]:
    """Every functor between the totals commuting with the projections."""
    if h.base != k.base:
        raise GroupoidError(["slice_hom_enumerate: different bases"])
    return enumerate_functors(
        h.total, k.total,
        ob_allowed=lambda x, y: k.proj.ob[y] == h.proj.ob[x],
        mor_allowed=lambda m, n: k.proj.mor[n] == h.proj.mor[m])
