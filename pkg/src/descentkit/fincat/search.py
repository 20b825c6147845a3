"""Search-based operations on finite categories.

Every search iterates objects and morphisms in input order, so witnesses and
representatives are reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Hashable, Iterator

from .core import (
    Adjunction,
    Budget,
    CategoryError,
    FinCategory,
    FinFunctor,
    Mor,
    NatTrans,
    Obj,
    compose_functors,
    identity_functor,
)
from .groups import Group
from .build import opposite


def find_iso(C: FinCategory, x: Obj, y: Obj) -> Mor | None:
    """First invertible morphism ``x -> y`` in morphism order, or ``None``."""
    for f in C.hom(x, y):
        if C.is_invertible(f):
            return f
    return None


def core(C: FinCategory) -> FinCategory:
    """Wide subgroupoid of invertible morphisms."""
    mors = [f for f in C.morphisms if C.is_invertible(f)]
    return FinCategory(
        C.objects,
        mors,
        {f: C.src(f) for f in mors},
        {f: C.tgt(f) for f in mors},
        {x: C.id(x) for x in C.objects},
        C.compose,
        name=f"core({C.name})",
        check=False,
    )


def aut_group(C: FinCategory, x: Obj) -> Group:
    els = [f for f in C.hom(x, x) if C.is_invertible(f)]
    return Group(
        els,
        {(g, h): C.compose(g, h) for g in els for h in els},
        name=f"Aut({x})",
        check=False,
    )


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def _classes(items, links) -> list[list]:
    uf = _UnionFind(items)
    for a, b in links:
        uf.union(a, b)
    groups: dict = {}
    for x in items:
        groups.setdefault(uf.find(x), []).append(x)
    return list(groups.values())


def pi0(G: FinCategory) -> list[list[Obj]]:
    """Connected components of a groupoid, ordered by first object."""
    for f in G.morphisms:
        if not G.is_invertible(f):
            raise CategoryError(f"pi0: {G.name} is not a groupoid ({f!r} is not invertible)")
    return _classes(G.objects, ((G.src(f), G.tgt(f)) for f in G.morphisms))


def iso_classes(C: FinCategory) -> list[list[Obj]]:
    """Isomorphism classes of objects of any finite category."""
    return _classes(
        C.objects,
        ((C.src(f), C.tgt(f)) for f in C.morphisms if C.src(f) != C.tgt(f) and C.is_invertible(f)),
    )


def is_equivalence_functor(F: FinFunctor) -> tuple[bool, str | None]:
    """Fully faithful and essentially surjective; returns a reason on failure."""
    C, D = F.dom, F.cod
    for x in C.objects:
        for y in C.objects:
            images = [F.mor_map[f] for f in C.hom(x, y)]
            target = D.hom(F(x), F(y))
            if len(set(images)) != len(images):
                return False, f"not faithful on hom({x!r}, {y!r})"
            if len(images) != len(target):
                return False, f"not full on hom({x!r}, {y!r})"
    image = [F(x) for x in C.objects]
    for d in D.objects:
        if not any(find_iso(D, c, d) is not None for c in image):
            return False, f"object {d!r} is not in the essential image"
    return True, None


# --- functor categories --------------------------------------------------------


@dataclass(frozen=True)
class FunctorData:
    """A functor ``I -> C`` used as an object of ``C^I``."""

    obj_map: tuple
    mor_map: tuple

    def obj(self, a):
        return dict(self.obj_map)[a]

    def mor(self, e):
        return dict(self.mor_map)[e]


@dataclass(frozen=True)
class NatData:
    """A natural transformation used as a morphism of ``C^I``."""

    src: FunctorData
    tgt: FunctorData
    components: tuple


def _checks_by_position(I: FinCategory, order: list) -> list[list[tuple]]:
    """Composable pairs of ``I`` bucketed by the position where all three become known."""
    pos = {m: i for i, m in enumerate(order)}
    buckets: list[list[tuple]] = [[] for _ in order]
    for g, f in I.composable_pairs():
        gf = I.compose(g, f)
        buckets[max(pos[g], pos[f], pos[gf])].append((g, f, gf))
    return buckets


def enumerate_functors(I: FinCategory, C: FinCategory, *, budget: Budget | None = None) -> Iterator[tuple[dict, dict]]:
    """All strict functors ``I -> C`` as ``(obj_map, mor_map)``, in canonical order."""
    budget = budget or Budget(what="functor enumeration")
    order = list(I.morphisms)
    checks = _checks_by_position(I, order)
    for objs in product(C.objects, repeat=len(I.objects)):
        budget.tick()
        om = dict(zip(I.objects, objs))
        choices = []
        for e in order:
            if I.is_identity(e):
                choices.append((C.id(om[I.src(e)]),))
            else:
                choices.append(C.hom(om[I.src(e)], om[I.tgt(e)]))
        if any(not c for c in choices):
            continue
        mm: dict = {}

        def go(k):
            if k == len(order):
                yield dict(mm)
                return
            e = order[k]
            for m in choices[k]:
                budget.tick()
                mm[e] = m
                if all(mm[gf] == C.compose(mm[g], mm[f]) for g, f, gf in checks[k]):
                    yield from go(k + 1)
            mm.pop(e, None)

        for found in go(0):
            yield om, found


def enumerate_transformations(
    I: FinCategory, C: FinCategory, F_obj: dict, F_mor: dict, G_obj: dict, G_mor: dict, *, budget: Budget | None = None
) -> Iterator[dict]:
    budget = budget or Budget(what="transformation enumeration")
    objs = list(I.objects)
    pos = {a: i for i, a in enumerate(objs)}
    checks: list[list] = [[] for _ in objs]
    for e in I.morphisms:
        checks[max(pos[I.src(e)], pos[I.tgt(e)])].append(e)
    comp: dict = {}

    def go(k):
        if k == len(objs):
            yield dict(comp)
            return
        a = objs[k]
        for m in C.hom(F_obj[a], G_obj[a]):
            budget.tick()
            comp[a] = m
            ok = True
            for e in checks[k]:
                s, t = I.src(e), I.tgt(e)
                if C.compose(G_mor[e], comp[s]) != C.compose(comp[t], F_mor[e]):
                    ok = False
                    break
            if ok:
                yield from go(k + 1)
        comp.pop(a, None)

    yield from go(0)


def functor_category(I: FinCategory, C: FinCategory, *, max_candidates: int | None = None) -> FinCategory:
    """``C^I``: all functors and all natural transformations."""
    budget = Budget(max_candidates, what=f"functor_category({I.name}, {C.name})")
    objects = []
    for om, mm in enumerate_functors(I, C, budget=budget):
        objects.append(
            FunctorData(tuple((a, om[a]) for a in I.objects), tuple((e, mm[e]) for e in I.morphisms))
        )
    morphisms, src, tgt = [], {}, {}
    ident = {}
    for F in objects:
        F_obj, F_mor = dict(F.obj_map), dict(F.mor_map)
        for G in objects:
            G_obj, G_mor = dict(G.obj_map), dict(G.mor_map)
            for comp in enumerate_transformations(I, C, F_obj, F_mor, G_obj, G_mor, budget=budget):
                n = NatData(F, G, tuple((a, comp[a]) for a in I.objects))
                morphisms.append(n)
                src[n], tgt[n] = F, G
        ident[F] = NatData(F, F, tuple((a, C.id(F_obj[a])) for a in I.objects))

    def compose(g: NatData, f: NatData) -> NatData:
        gc, fc = dict(g.components), dict(f.components)
        return NatData(f.src, g.tgt, tuple((a, C.compose(gc[a], fc[a])) for a in I.objects))

    return FinCategory(
        objects, morphisms, src, tgt, ident, compose, name=f"{C.name}^{I.name}", check=False
    )


def functor_as_object(F: FinFunctor) -> FunctorData:
    I = F.dom
    return FunctorData(
        tuple((a, F(a)) for a in I.objects), tuple((e, F.mor_map[e]) for e in I.morphisms)
    )


def object_as_functor(I: FinCategory, C: FinCategory, X: FunctorData) -> FinFunctor:
    return FinFunctor(I, C, dict(X.obj_map), dict(X.mor_map), name="X")


# --- adjoints by universal arrows ------------------------------------------------


def _terminal_arrow(F: FinFunctor, d: Obj) -> tuple[Obj, Mor] | None:
    C, D = F.dom, F.cod
    for c in C.objects:
        for eps in D.hom(F(c), d):
            universal = True
            for c2 in C.objects:
                for k in D.hom(F(c2), d):
                    hits = sum(1 for u in C.hom(c2, c) if D.compose(eps, F.mor_map[u]) == k)
                    if hits != 1:
                        universal = False
                        break
                if not universal:
                    break
            if universal:
                return c, eps
    return None


def right_adjoint(F: FinFunctor) -> Adjunction | None:
    """Find ``G`` with ``F ⊣ G`` by searching for terminal arrows ``F(Gd) -> d``."""
    C, D = F.dom, F.cod
    G_obj, eps = {}, {}
    for d in D.objects:
        found = _terminal_arrow(F, d)
        if found is None:
            return None
        G_obj[d], eps[d] = found

    def lift(c2, d, k):
        # the unique u: c2 -> G(d) with eps_d ∘ F(u) = k
        for u in C.hom(c2, G_obj[d]):
            if D.compose(eps[d], F.mor_map[u]) == k:
                return u
        raise AssertionError("universal arrow lost uniqueness")

    G_mor = {g: lift(G_obj[D.src(g)], D.tgt(g), D.compose(g, eps[D.src(g)])) for g in D.morphisms}
    unit = {c: lift(c, F(c), D.id(F(c))) for c in C.objects}
    G = FinFunctor(D, C, G_obj, G_mor, name=f"{F.name}^R")
    GF = compose_functors(G, F)
    FG = compose_functors(F, G)
    return Adjunction(
        F,
        G,
        NatTrans(identity_functor(C), GF, unit, name="η"),
        NatTrans(FG, identity_functor(D), eps, name="ε"),
    )


def left_adjoint(F: FinFunctor) -> Adjunction | None:
    """Find ``H`` with ``H ⊣ F`` via the right adjoint of ``F^op``."""
    Cop, Dop = opposite(F.dom), opposite(F.cod)
    Fop = FinFunctor(Cop, Dop, F.obj_map, F.mor_map, name=f"{F.name}^op")
    adj = right_adjoint(Fop)
    if adj is None:
        return None
    C, D = F.dom, F.cod
    H = FinFunctor(D, C, adj.right.obj_map, adj.right.mor_map, name=f"{F.name}^L")
    return Adjunction(
        H,
        F,
        NatTrans(identity_functor(D), compose_functors(F, H), adj.counit.components, name="η"),
        NatTrans(compose_functors(H, F), identity_functor(C), adj.unit.components, name="ε"),
    )


def isomorphism_between(A: FinCategory, B: FinCategory, obj_map: dict, mor_map: dict) -> FinFunctor:
    """Check that the given bijections form an isomorphism of categories."""
    F = FinFunctor(A, B, obj_map, mor_map, name="iso")
    F.check()
    if len(set(obj_map.values())) != len(B.objects) or len(obj_map) != len(A.objects):
        raise CategoryError("not a bijection on objects")
    if len(set(mor_map.values())) != len(B.morphisms) or len(mor_map) != len(A.morphisms):
        raise CategoryError("not a bijection on morphisms")
    return F
