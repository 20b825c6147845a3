"""Seeded random instance families.

Every generator takes a ``random.Random`` and returns a fresh instance; the
families are small enough that exhaustive checks stay cheap. Used by the
property tests and by the acceptance suite.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import islice, permutations, product

from .cohom import Tower
from .descent import LevelwiseAdjunction, levelwise_from_cone
from .fincat.build import (
    boolean_lattice,
    discrete_category,
    indiscrete_category,
    poset_category,
    product_category,
    terminal_category,
    transformation_monoid,
)
from .fincat.core import FinCategory, FinFunctor, compose_functors, identity_functor
from .fincat.groups import Group, GroupHom, aut_power_is_identity, automorphisms, homomorphisms
from .groth import ConeOfCats, DiagramOfCats, constant_diagram, enumerate_sections

# --- groups -------------------------------------------------------------------------


def small_groups() -> list[Group]:
    """Groups of order at most 6, one per isomorphism type."""
    z2 = Group.cyclic(2)
    return [
        Group.trivial(),
        z2,
        Group.cyclic(3),
        Group.cyclic(4),
        Group.product(z2, z2),
        Group.cyclic(5),
        Group.cyclic(6),
        Group.symmetric(3),
    ]


_GROUPS = small_groups()
_HOMS: dict = {}


def _homs(G: Group, H: Group) -> list[GroupHom]:
    key = (id(G), id(H))
    if key not in _HOMS:
        _HOMS[key] = homomorphisms(G, H)
    return _HOMS[key]


# --- groupoid fibers ------------------------------------------------------------------


@dataclass
class Fiber:
    """``base × BH`` where ``base`` is indiscrete (connected) or discrete on ``k`` objects."""

    k: int
    connected: bool
    group: Group
    category: FinCategory


def groupoid_fiber(k: int, connected: bool, H: Group) -> Fiber:
    base = indiscrete_category(range(k), name=f"Ind{k}")
    if not connected:
        base = FinCategory(
            list(range(k)),
            [(i, i) for i in range(k)],
            {(i, i): i for i in range(k)},
            {(i, i): i for i in range(k)},
            {i: (i, i) for i in range(k)},
            {((i, i), (i, i)): (i, i) for i in range(k)},
            name=f"Disc{k}",
            check=False,
        )
    cat = product_category(base, H.as_category(), name=f"{base.name}xB{H.name}")
    return Fiber(k, connected, H, cat)


def fiber_functor(src: Fiber, tgt: Fiber, u: dict, psi: GroupHom) -> FinFunctor:
    return FinFunctor(
        src.category,
        tgt.category,
        {(i, o): (u[i], o) for i, o in src.category.objects},
        {((i, j), h): ((u[i], u[j]), psi(h)) for (i, j), h in src.category.morphisms},
        name="T",
    )


def _random_fiber(rng: random.Random, max_objects: int = 4) -> Fiber:
    return groupoid_fiber(rng.randint(1, max_objects), rng.random() < 0.6, rng.choice(_GROUPS))


def _random_fibers(rng: random.Random, n: int, cap: int, max_objects: int = 4) -> dict:
    """Fibers whose morphism counts multiply to at most ``cap``; this bounds the pseudolimit."""
    shapes = [(k, c, H) for k in range(1, max_objects + 1) for c in (True, False) for H in _GROUPS]
    fibers, left = {}, cap
    for i in rng.sample(range(n), n):
        ok = [(k, c, H) for k, c, H in shapes if (k * k if c else k) * len(H) <= left]
        k, c, H = rng.choice(ok)
        fibers[i] = groupoid_fiber(k, c, H)
        left //= len(fibers[i].category.morphisms)
    return fibers


def _random_object_map(rng: random.Random, src: Fiber, tgt: Fiber) -> dict:
    if src.connected and not tgt.connected:
        c = rng.randrange(tgt.k)
        return {i: c for i in range(src.k)}
    return {i: rng.randrange(tgt.k) for i in range(src.k)}


def _random_fiber_functor(rng: random.Random, src: Fiber, tgt: Fiber) -> FinFunctor:
    return fiber_functor(src, tgt, _random_object_map(rng, src, tgt), rng.choice(_homs(src.group, tgt.group)))


def _same_functor(F: FinFunctor, G: FinFunctor) -> bool:
    return F.obj_map == G.obj_map and F.mor_map == G.mor_map


# --- groupoid-valued diagrams -----------------------------------------------------------


def forest_diagram(rng: random.Random, n: int | None = None, cap: int = 300) -> DiagramOfCats:
    """A forest poset index with ``a <= b`` iff ``a`` is an ancestor of ``b``."""
    n = n or rng.randint(1, 4)
    parent = {0: None}
    for i in range(1, n):
        parent[i] = rng.choice([None, *range(i)])

    def ancestors(i):
        out = [i]
        while parent[out[-1]] is not None:
            out.append(parent[out[-1]])
        return out

    I = poset_category(list(range(n)), lambda a, b: a in ancestors(b), name=f"forest{n}")
    fibers = _random_fibers(rng, n, cap)
    step = {i: _random_fiber_functor(rng, fibers[parent[i]], fibers[i]) for i in range(1, n) if parent[i] is not None}
    transport = {}
    for a, b in I.morphisms:
        T = identity_functor(fibers[a].category)
        path = ancestors(b)
        for child in reversed(path[: path.index(a)]):
            T = compose_functors(step[child], T)
        transport[(a, b)] = T
    return DiagramOfCats(I, {i: f.category for i, f in fibers.items()}, transport, name="forest")


def diamond_diagram(rng: random.Random, tries: int = 200, cap: int = 300) -> DiagramOfCats | None:
    """``0 <= 1, 2 <= 3``; resampled until the square of transports commutes."""
    order = {(0, 1), (0, 2), (1, 3), (2, 3), (0, 3)}
    I = poset_category([0, 1, 2, 3], lambda a, b: a == b or (a, b) in order, name="diamond")
    for _ in range(tries):
        fibers = _random_fibers(rng, 4, cap, max_objects=2)
        fibers[0] = groupoid_fiber(1, True, rng.choice(_GROUPS[:3]))
        T = {e: _random_fiber_functor(rng, fibers[e[0]], fibers[e[1]]) for e in [(0, 1), (0, 2), (1, 3), (2, 3)]}
        left = compose_functors(T[(1, 3)], T[(0, 1)])
        if not _same_functor(left, compose_functors(T[(2, 3)], T[(0, 2)])):
            continue
        transport = dict(T)
        transport[(0, 3)] = left
        for i in range(4):
            transport[(i, i)] = identity_functor(fibers[i].category)
        return DiagramOfCats(I, {i: f.category for i, f in fibers.items()}, transport, name="diamond")
    return None


def group_action_diagram(rng: random.Random, n: int | None = None) -> DiagramOfCats:
    """``BZ/n`` acting on ``base × BH`` by a permutation of the base and an automorphism."""
    n = n or rng.randint(2, 3)
    fib = _random_fiber(rng)
    perms = [p for p in _permutations(fib.k) if _order_divides(p, n)]
    sigma = rng.choice(perms)
    phis = [f for f in automorphisms(fib.group) if aut_power_is_identity(f, n)]
    phi = rng.choice(phis)
    Zn = Group.cyclic(n)
    I = Zn.as_category(name=f"BZ/{n}")
    transport = {}
    for m in Zn:
        u = {i: i for i in range(fib.k)}
        psi = {h: h for h in fib.group}
        for _ in range(m):
            u = {i: sigma[u[i]] for i in u}
            psi = {h: phi(v) for h, v in psi.items()}
        transport[m] = fiber_functor(fib, fib, u, GroupHom(fib.group, fib.group, psi))
    return DiagramOfCats(I, {"*": fib.category}, transport, name=f"BZ/{n} action")


def _permutations(k: int) -> list[tuple]:
    return list(permutations(range(k)))


def _order_divides(p: tuple, n: int) -> bool:
    x = list(range(len(p)))
    for _ in range(n):
        x = [p[i] for i in x]
    return x == list(range(len(p)))


def groupoid_diagram(rng: random.Random, max_sections: int = 16) -> DiagramOfCats:
    """Mostly forests, with commuting diamonds and cyclic group actions mixed in.

    Instances whose pseudolimit has more than ``max_sections`` objects are
    resampled.
    """
    while True:
        r = rng.random()
        if r < 0.5:
            D = forest_diagram(rng)
        elif r < 0.7:
            D = diamond_diagram(rng) or group_action_diagram(rng)
        else:
            D = group_action_diagram(rng)
        if sum(1 for _ in islice(enumerate_sections(D, cocartesian=True), max_sections + 1)) <= max_sections:
            return D


# --- level-wise adjunctions ---------------------------------------------------------------


def _join_preserving(rng: random.Random, n: int, m: int) -> dict:
    """A join-preserving map ``2^n -> 2^m`` given by random images of the atoms."""
    atoms = [rng.randrange(2**m) for _ in range(n)]
    out = {}
    for x in range(2**n):
        v = 0
        for i in range(n):
            if x >> i & 1:
                v |= atoms[i]
        out[x] = v
    return out


def _lattice_functor(A: FinCategory, B: FinCategory, f: dict) -> FinFunctor:
    return FinFunctor(A, B, dict(f), {(x, y): (f[x], f[y]) for x, y in A.morphisms}, name="f")


def lattice_levelwise(rng: random.Random) -> LevelwiseAdjunction:
    """Boolean lattices over a forest index; legs and transports preserve joins."""
    n = rng.randint(1, 3)
    C = boolean_lattice(n)
    k = rng.randint(1, 3)
    parent = {0: None}
    for i in range(1, k):
        parent[i] = rng.choice([None, *range(i)])

    def ancestors(i):
        out = [i]
        while parent[out[-1]] is not None:
            out.append(parent[out[-1]])
        return out

    I = poset_category(list(range(k)), lambda a, b: a in ancestors(b), name=f"forest{k}")
    dims = {i: rng.randint(1, 3) for i in range(k)}
    fibers = {i: boolean_lattice(dims[i]) for i in range(k)}
    maps = {}
    for i in range(k):
        if parent[i] is None:
            maps[i] = _join_preserving(rng, n, dims[i])
    step = {i: _join_preserving(rng, dims[parent[i]], dims[i]) for i in range(k) if parent[i] is not None}
    for i in range(k):
        if parent[i] is not None:
            maps[i] = {x: step[i][maps[parent[i]][x]] for x in C.objects}
    transport = {}
    for a, b in I.morphisms:
        f = {x: x for x in fibers[a].objects}
        path = ancestors(b)
        for child in reversed(path[: path.index(a)]):
            f = {x: step[child][v] for x, v in f.items()}
        transport[(a, b)] = _lattice_functor(fibers[a], fibers[b], f)
    D = DiagramOfCats(I, fibers, transport, name="lattices")
    legs = {i: _lattice_functor(C, fibers[i], maps[i]) for i in range(k)}
    L = levelwise_from_cone(ConeOfCats(C, D, legs, name="join-preserving"))
    assert L is not None, "join-preserving maps between finite lattices have right adjoints"
    return L


def product_levelwise(rng: random.Random, factors: int = 3, length: int = 3) -> LevelwiseAdjunction:
    """Projections out of a product of chains; the comparison is an isomorphism."""
    lengths = [rng.randint(1, length) for _ in range(rng.randint(1, factors))]
    chains = [poset_category(list(range(n + 1)), lambda a, b: a <= b, name=f"[{n}]") for n in lengths]
    objs = list(product(*(c.objects for c in chains)))
    C = poset_category(objs, lambda x, y: all(a <= b for a, b in zip(x, y)), name="prod")
    I = discrete_category(range(len(chains)), name="disc")
    D = DiagramOfCats(I, dict(enumerate(chains)), {f"id_{i}": identity_functor(c) for i, c in enumerate(chains)}, name="chains")
    legs = {
        i: FinFunctor(C, c, {x: x[i] for x in objs}, {(x, y): (x[i], y[i]) for x, y in C.morphisms}, name=f"pr{i}")
        for i, c in enumerate(chains)
    }
    L = levelwise_from_cone(ConeOfCats(C, D, legs, name="projections"))
    assert L is not None
    return L


def automorphism_levelwise(rng: random.Random) -> LevelwiseAdjunction:
    """Arrow index, fibers ``BH``, transport an automorphism ``ψ``; legs ``id`` and ``ψ``.

    The comparison has nontrivial pseudo structure only through ``ψ``; the
    descent adjunction is an equivalence.
    """
    H = rng.choice([G for G in _GROUPS if len(G) > 1])
    psi = rng.choice(automorphisms(H))
    B = H.as_category()
    I = poset_category([0, 1], lambda a, b: a <= b, name="[1]")
    T = FinFunctor(B, B, {"*": "*"}, dict(psi.mapping), name="psi")
    D = DiagramOfCats(I, {0: B, 1: B}, {(0, 0): identity_functor(B), (1, 1): identity_functor(B), (0, 1): T})
    L = levelwise_from_cone(ConeOfCats(B, D, {0: identity_functor(B), 1: T}, name="twist"))
    assert L is not None
    return L


def searched_levelwise(rng: random.Random, tries: int = 100) -> LevelwiseAdjunction:
    """Random monotone maps between random posets, kept when a right adjoint is found."""
    for _ in range(tries):
        C = random_poset(rng, rng.randint(1, 4))
        E = random_poset(rng, rng.randint(1, 4))
        F = random_monotone(rng, C, E)
        if F is None:
            continue
        I = terminal_category()
        D = DiagramOfCats(I, {"*": E}, {"id_*": identity_functor(E)})
        L = levelwise_from_cone(ConeOfCats(C, D, {"*": F}, name="searched"))
        if L is not None:
            return L
    return product_levelwise(rng)


def levelwise_instance(rng: random.Random) -> LevelwiseAdjunction:
    return rng.choice([lattice_levelwise, lattice_levelwise, product_levelwise, automorphism_levelwise, searched_levelwise])(rng)


# --- posets and small categories ---------------------------------------------------------


def random_poset(rng: random.Random, n: int, p: float = 0.4) -> FinCategory:
    """Transitive closure of a random DAG on ``0..n-1`` (edges go upward)."""
    up = {i: {i} for i in range(n)}
    for j in range(n):
        for i in range(j):
            if rng.random() < p:
                up[i].add(j)
    changed = True
    while changed:
        changed = False
        for i in range(n):
            new = set().union(*(up[j] for j in up[i]))
            if new != up[i]:
                up[i] = new
                changed = True
    return poset_category(list(range(n)), lambda a, b: b in up[a], name=f"P{n}")


def random_monotone(rng: random.Random, A: FinCategory, B: FinCategory, tries: int = 50) -> FinFunctor | None:
    objs = list(A.objects)
    for _ in range(tries):
        f = {x: rng.choice(B.objects) for x in objs}
        if all(B.hom(f[x], f[y]) for x, y in A.morphisms):
            return FinFunctor(A, B, f, {(x, y): (f[x], f[y]) for x, y in A.morphisms}, name="f")
    return None


def small_category(rng: random.Random) -> FinCategory:
    """A small category from a mixed pool: groups, posets, monoids, discrete."""
    kind = rng.randrange(5)
    if kind == 0:
        return rng.choice(_GROUPS[1:4]).as_category()
    if kind == 1:
        return random_poset(rng, rng.randint(1, 3))
    if kind == 2:
        return discrete_category(range(rng.randint(1, 2)))
    if kind == 3:
        return transformation_monoid([rng.choice([(0, 0), (1, 0), (1, 1)])], 2, name="M")
    return boolean_lattice(rng.randint(1, 2))


def small_index(rng: random.Random) -> FinCategory:
    kind = rng.randrange(4)
    if kind == 0:
        return terminal_category()
    if kind == 1:
        return random_poset(rng, rng.randint(1, 3))
    if kind == 2:
        return discrete_category(range(2))
    return Group.cyclic(2).as_category()


def const_pair(rng: random.Random) -> tuple[FinCategory, FinCategory, DiagramOfCats]:
    I, C = small_index(rng), small_category(rng)
    return I, C, constant_diagram(I, C)


# --- towers ---------------------------------------------------------------------------------


def surjective_tower(rng: random.Random, length: int | None = None) -> Tower:
    """``G_0 ← ... ← G_N`` with random surjective bonding maps."""
    length = length if length is not None else rng.randint(1, 4)
    top = rng.choice(_GROUPS)
    groups = [top]
    maps_rev = []
    for _ in range(length):
        src = groups[-1]
        options = [(H, f) for H in _GROUPS if len(H) <= len(src) for f in _homs(src, H) if f.is_surjective()]
        H, f = rng.choice(options)
        groups.append(H)
        maps_rev.append(f)
    groups.reverse()
    maps = list(reversed(maps_rev))
    k = len(maps)
    while k > 0 and maps[k - 1].is_isomorphism() and rng.random() < 0.5:
        k -= 1
    return Tower(groups, maps, stable_from=k)


def tower(rng: random.Random, length: int | None = None) -> Tower:
    """Any bonding maps; stabilized at the end of the tower."""
    length = length if length is not None else rng.randint(1, 3)
    groups = [rng.choice(_GROUPS) for _ in range(length + 1)]
    maps = [rng.choice(_homs(groups[n + 1], groups[n])) for n in range(length)]
    return Tower(groups, maps)


# --- colimit decompositions -------------------------------------------------------------------


@dataclass
class Decomposition:
    pieces: DiagramOfCats
    K: FinCategory
    incl: dict
    f: FinFunctor


def lattice_decomposition(rng: random.Random) -> Decomposition:
    """A random poset ``K`` covered by full subposets glued along pairwise intersections."""
    n = rng.randint(1, 5)
    K = random_poset(rng, n)
    m = rng.randint(2, 3) if n > 1 else 1
    C = boolean_lattice(m + 1)
    seed = {x: rng.randrange(len(C.objects)) for x in K.objects}
    val = {x: 0 for x in K.objects}
    for y, x in K.morphisms:
        val[x] |= seed[y]
    f = FinFunctor(K, C, val, {(x, y): (val[x], val[y]) for x, y in K.morphisms}, name="f")

    count = rng.randint(1, 3)
    pieces = [set() for _ in range(count)]
    for x in K.objects:
        pieces[rng.randrange(count)].add(x)
    for x, y in K.morphisms:
        if not any(x in p and y in p for p in pieces):
            holder = [p for p in pieces if x in p] or pieces
            rng.choice(holder).update((x, y))
    pieces = [frozenset(p) for p in pieces if p]
    pieces = list(dict.fromkeys(pieces))
    index_objs = [("piece", i) for i in range(len(pieces))]
    caps = {}
    for i in range(len(pieces)):
        for j in range(i + 1, len(pieces)):
            common = pieces[i] & pieces[j]
            if common:
                caps[("cap", i, j)] = common
    index_objs += list(caps)
    members = {("piece", i): p for i, p in enumerate(pieces)} | caps

    def leq(a, b):
        return a == b or (a[0] == "cap" and b[0] == "piece" and b[1] in a[1:])

    I = poset_category(index_objs, leq, name="cover")

    def sub(a):
        keep = sorted(members[a])
        return poset_category(keep, lambda x, y: bool(K.hom(x, y)), name=f"K|{a}")

    fibers = {a: sub(a) for a in index_objs}

    def inclusion(A, B):
        return FinFunctor(A, B, {x: x for x in A.objects}, {m: m for m in A.morphisms}, name="incl")

    transport = {(a, b): inclusion(fibers[a], fibers[b]) for a, b in I.morphisms}
    D = DiagramOfCats(I, fibers, transport, name="pieces")
    incl = {a: inclusion(fibers[a], K) for a in index_objs}
    return Decomposition(D, K, incl, f)
