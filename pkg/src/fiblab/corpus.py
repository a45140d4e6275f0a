"""Named fixture groupoids and deterministic random generators.

Every generated groupoid is a disjoint union of components of the form
(object set) × (finite group), which is every finite groupoid up to
isomorphism and keeps the tables small and predictable.
"""

from __future__ import annotations

import random

from .core import FinGroupoid, GFunctor, GroupoidError, sort_key


# -- group catalog (multiplication tables, identity listed first) ---------

GROUPS = {
    "Z1": {"elems": ("e",), "mul": {("e", "e"): "e"}},
    "Z2": {"elems": ("e", "s"),
           "mul": {("e", "e"): "e", ("e", "s"): "s",
                   ("s", "e"): "s", ("s", "s"): "e"}},
    "Z3": {"elems": ("e", "r", "rr"),
           "mul": {(a, b): None for a in ("e", "r", "rr") for b in ("e", "r", "rr")}},
    "Z4": {"elems": ("e", "r", "rr", "rrr"), "mul": {}},
    "V4": {"elems": ("e", "a", "b", "ab"), "mul": {}},
}


def _cyclic(n, names):
    return {(names[i], names[j]): names[(i + j) % n]
            for i in range(n) for j in range(n)}


GROUPS["Z3"]["mul"] = _cyclic(3, ("e", "r", "rr"))
GROUPS["Z4"]["mul"] = _cyclic(4, ("e", "r", "rr", "rrr"))
_v4 = ("e", "a", "b", "ab")
GROUPS["V4"]["mul"] = {
    (x, y): _v4[(_v4.index(x) ^ _v4.index(y))] for x in _v4 for y in _v4
}


def group_bundle(objects, group_name="Z1", tag="") -> FinGroupoid:
    """Connected-per-fiber groupoid with hom(x, y) a torsor over the group.

    Morphism identifiers are (tag, x, y, g).  With group Z1 this is the
    codiscrete groupoid on ``objects``.
    """
    grp = GROUPS[group_name]
    elems, mul = grp["elems"], grp["mul"]
    objs = list(objects)
    mor = {}
    for x in objs:
        for y in objs:
            for g in elems:
                mor[(tag, x, y, g)] = (x, y)
    identity = {x: (tag, x, x, "e") for x in objs}
    comp = {}
    for x in objs:
        for y in objs:
            for z in objs:
                for g in elems:
                    for h in elems:
                        comp[((tag, y, z, h), (tag, x, y, g))] = (tag, x, z, mul[(h, g)])
    invtab = {g: next(h for h in elems if mul[(h, g)] == "e") for g in elems}
    inv = {(tag, x, y, g): (tag, y, x, invtab[g]) for (tag, x, y, g) in mor}
    return FinGroupoid(objs, mor, identity, comp, inv,
                       name=f"{group_name}x{len(objs)}")


def discrete(objects, tag="") -> FinGroupoid:
    mor = {(tag, x): (x, x) for x in objects}
    return FinGroupoid(objects, mor,
                       {x: (tag, x) for x in objects},
                       {((tag, x), (tag, x)): (tag, x) for x in objects},
                       {(tag, x): (tag, x) for x in objects},
                       name="discrete")


def disjoint_union(parts) -> FinGroupoid:
    objects, mor, identity, comp, inv = [], {}, {}, {}, {}
    for i, part in enumerate(parts):
        t = str(i)
        for x in part.objects:
            objects.append((t, x))
        for m, (s, tg) in part.mor.items():
            mor[(t, m)] = ((t, s), (t, tg))
        for x, m in part.identity.items():
            identity[(t, x)] = (t, m)
        for (h, g), c in part.comp.items():
            comp[((t, h), (t, g))] = (t, c)
        for m, mi in part.inv.items():
            inv[(t, m)] = (t, mi)
    return FinGroupoid(objects, mor, identity, comp, inv, name="sum")


# -- named fixtures --------------------------------------------------------

def terminal_groupoid() -> FinGroupoid:
    """T: one object ``*`` and its identity."""
    return FinGroupoid(("*",), {"1": ("*", "*")}, {"*": "1"},
                       {("1", "1"): "1"}, {"1": "1"}, name="T")


def walking_iso() -> FinGroupoid:
    """WI: two objects 0, 1 and an isomorphism between them."""
    mor = {"i0": ("0", "0"), "i1": ("1", "1"),
           "phi": ("0", "1"), "psi": ("1", "0")}
    comp = {
        ("i0", "i0"): "i0", ("i1", "i1"): "i1",
        ("phi", "i0"): "phi", ("i1", "phi"): "phi",
        ("psi", "i1"): "psi", ("i0", "psi"): "psi",
        ("psi", "phi"): "i0", ("phi", "psi"): "i1",
    }
    return FinGroupoid(("0", "1"), mor, {"0": "i0", "1": "i1"}, comp,
                       {"i0": "i0", "i1": "i1", "phi": "psi", "psi": "phi"},
                       name="WI")


def b2() -> FinGroupoid:
    """B2: one object with a single involution (the group Z/2)."""
    mor = {"1": ("o", "o"), "s": ("o", "o")}
    comp = {("1", "1"): "1", ("1", "s"): "s", ("s", "1"): "s", ("s", "s"): "1"}
    return FinGroupoid(("o",), mor, {"o": "1"}, comp,
                       {"1": "1", "s": "s"}, name="B2")


def d2() -> FinGroupoid:
    """D2: two objects with only identities."""
    mor = {"iu": ("u", "u"), "iv": ("v", "v")}
    comp = {("iu", "iu"): "iu", ("iv", "iv"): "iv"}
    return FinGroupoid(("u", "v"), mor, {"u": "iu", "v": "iv"}, comp,
                       {"iu": "iu", "iv": "iv"}, name="D2")


def empty_groupoid() -> FinGroupoid:
    return FinGroupoid((), {}, {}, {}, {}, name="empty")


def fixtures() -> dict[str, FinGroupoid]:
    return {"T": terminal_groupoid(), "WI": walking_iso(), "B2": b2(),
            "D2": d2(), "empty": empty_groupoid()}


# -- component analysis (for random functors) ------------------------------

def components(g: FinGroupoid) -> list[list]:
    parent = {x: x for x in g.objects}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for m, (s, t) in g.mor.items():
        rs, rt = find(s), find(t)
        if rs != rt:
            parent[rs] = rt
    groups = {}
    for x in g.objects:
        groups.setdefault(find(x), []).append(x)
    return [sorted(v, key=sort_key) for _, v in
            sorted(groups.items(), key=lambda kv: sort_key(kv[0]))]


def _spanning_isos(g: FinGroupoid, comp_objs):
    """BFS tree of isomorphisms base → x for each x in the component."""
    base = comp_objs[0]
    tree = {base: g.id_of(base)}
    frontier = [base]
    while frontier:
        nxt = []
        for x in frontier:
            for m in g.morphisms():
                s, t = g.mor[m]
                if s == x and t not in tree:
                    tree[t] = g.compose(m, tree[x])
                    nxt.append(t)
        frontier = nxt
    return base, tree


def group_homs(src_elems, src_mul, tgt_elems, tgt_mul):
    """All multiplication-preserving maps between two finite groups.

    Identities are listed first in the element tuples and are forced.
    """
    src = list(src_elems)
    homs = []

    def backtrack(i, hom):
        if i == len(src):
            if all(hom[src_mul[(a, b)]] == tgt_mul[(hom[a], hom[b])]
                   for a in src for b in src):
                homs.append(dict(hom))
            return
        a = src[i]
        for v in tgt_elems:
            hom[a] = v
            ok = True
            for b in src[: i + 1]:
                for c, lhs in ((src_mul[(a, b)], (v, hom[b])),
                               (src_mul[(b, a)], (hom[b], v))):
                    if c in hom and hom[c] != tgt_mul[lhs]:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                backtrack(i + 1, hom)
            del hom[a]

    backtrack(1 if src else 0, {src[0]: tgt_elems[0]} if src else {})
    return homs


def vertex_group(g: FinGroupoid, x):
    elems = list(g.hom(x, x))
    elems.sort(key=sort_key)
    elems.remove(g.id_of(x))
    elems.insert(0, g.id_of(x))
    mul = {(a, b): g.compose(a, b) for a in elems for b in elems}
    return tuple(elems), mul


def random_groupoid(rng: random.Random, max_objects=5) -> FinGroupoid:
    n_components = rng.randint(1, 2)
    parts = []
    remaining = rng.randint(1, max_objects)
    for i in range(n_components):
        if remaining <= 0:
            break
        size = rng.randint(1, remaining)
        remaining -= size
        grp = rng.choice(["Z1", "Z1", "Z2", "Z2", "Z3"])
        parts.append(group_bundle([f"x{i}_{j}" for j in range(size)], grp, tag=f"c{i}"))
    return disjoint_union(parts)


def random_functor(rng: random.Random, X: FinGroupoid, Y: FinGroupoid) -> GFunctor:
    """A uniformly-structured random functor X→Y.

    Per component of X: choose an image component, a vertex-group
    homomorphism, object images, and twists; every functor arises this way.
    Requires Y nonempty when X is nonempty.
    """
    if X.objects and not Y.objects:
        raise GroupoidError(["no functor into the empty groupoid"])
    ob_map, mor_map = {}, {}
    y_comps = components(Y)
    for comp_objs in components(X):
        base, tree = _spanning_isos(X, comp_objs)
        g_elems, g_mul = vertex_group(X, base)
        target_comp = rng.choice(y_comps)
        # pick a target base object and a group hom
        y0 = rng.choice(target_comp)
        h_elems, h_mul = vertex_group(Y, y0)
        homs = group_homs(g_elems, g_mul, h_elems, h_mul)
        phi = rng.choice(homs)
        img = {x: rng.choice(target_comp) for x in comp_objs}
        twist = {}
        for x in comp_objs:
            choices = Y.hom(y0, img[x])
            twist[x] = rng.choice(choices)
        for x in comp_objs:
            ob_map[x] = img[x]
        for m in X.mor:
            s, t = X.mor[m]
            if s in comp_objs:
                loop = X.compose(X.inv[tree[t]], X.compose(m, tree[s]))
                val = Y.compose(twist[t], Y.compose(phi[loop], Y.inv[twist[s]]))
                mor_map[m] = val
    return GFunctor(X, Y, ob_map, mor_map)
