"""Direct solvers for nonabelian H¹, double cosets, Čech H¹, lim¹ and colimit decompositions.

Each pointed-set solver enumerates cocycles depth-first with early pruning and
groups them into gauge orbits. A class is represented by its lexicographically
least member, comparing element positions in the input orderings. The
basepoint class comes first. ``bridge_to_descent`` rebuilds every input as a
diagram of one-object groupoids and recounts with ``pi0_descent``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Mapping, Sequence

from .conj import pi0_descent
from .fincat.build import poset_category
from .fincat.core import Budget, FinCategory, FinFunctor, identity_functor
from .fincat.groups import Group, GroupError, GroupHom
from .fincat.limits import MissingLimitError, colimit
from .fincat.search import _UnionFind
from .groth import DiagramOfCats, grothendieck


class CohomError(ValueError):
    pass


@dataclass
class PointedSet:
    """Classes of a pointed orbit set; ``representatives[0]`` is the basepoint's class."""

    count: int
    representatives: list
    sizes: list = field(default_factory=list)


def _orbit_classes(points: list, key: Callable, moves: Callable, basepoint, budget: Budget) -> PointedSet:
    uf = _UnionFind(points)
    for p in points:
        for q in moves(p):
            budget.tick()
            uf.union(p, q)
    groups: dict = {}
    for p in points:
        groups.setdefault(uf.find(p), []).append(p)
    classes = [min(g, key=key) for g in groups.values()]
    sizes = {min(g, key=key): len(g) for g in groups.values()}
    base_rep = min(groups[uf.find(basepoint)], key=key)
    classes.sort(key=lambda r: (r != base_rep, key(r)))
    return PointedSet(len(classes), classes, [sizes[r] for r in classes])


# --- group actions and nonabelian H¹ ------------------------------------------------------


class GroupAction:
    """``Γ`` acting on ``A`` by automorphisms; ``action[g][a] = g·a``."""

    def __init__(self, gamma: Group, target: Group, action: Mapping, *, check: bool = True):
        self.gamma = gamma
        self.target = target
        self.action = {g: dict(m) for g, m in action.items()}
        if check:
            self.check()

    def act(self, g, a):
        return self.action[g][a]

    def check(self) -> None:
        G, A = self.gamma, self.target
        for g in G:
            if g not in self.action:
                raise CohomError(f"no action of {g!r}")
            hom = GroupHom(A, A, self.action[g])
            try:
                hom.check()
            except GroupError as exc:
                raise CohomError(f"action of {g!r} is not a homomorphism: {exc}") from None
            if not hom.is_isomorphism():
                raise CohomError(f"action of {g!r} is not bijective")
        for a in A:
            if self.act(G.identity, a) != a:
                raise CohomError("identity of Γ does not act trivially")
        for g in G:
            for h in G:
                gh = G.mul(g, h)
                for a in A:
                    if self.act(gh, a) != self.act(g, self.act(h, a)):
                        raise CohomError(f"action is not multiplicative on ({g!r}, {h!r})")

    @classmethod
    def trivial(cls, gamma: Group, target: Group) -> GroupAction:
        return cls(gamma, target, {g: {a: a for a in target} for g in gamma}, check=False)

    @classmethod
    def from_homs(cls, gamma: Group, target: Group, homs: Mapping) -> GroupAction:
        return cls(gamma, target, {g: dict(homs[g].mapping) for g in gamma})


def cocycles(act: GroupAction, *, budget: Budget | None = None) -> list[tuple]:
    """Crossed homomorphisms as tuples indexed like ``Γ.elements``."""
    budget = budget or Budget(what="cocycle enumeration")
    G, A = act.gamma, act.target
    els = list(G.elements)
    pos = {g: i for i, g in enumerate(els)}
    checks: list[list] = [[] for _ in els]
    for g in els:
        for h in els:
            gh = G.mul(g, h)
            checks[max(pos[g], pos[h], pos[gh])].append((g, h, gh))
    z: dict = {}
    out = []

    def go(k):
        if k == len(els):
            out.append(tuple(z[g] for g in els))
            return
        g = els[k]
        for a in A:
            budget.tick()
            z[g] = a
            if all(z[gh] == A.mul(z[x], act.act(x, z[y])) for x, y, gh in checks[k]):
                go(k + 1)
        z.pop(g, None)

    go(0)
    return out


def h1_nonabelian(act: GroupAction, *, max_candidates: int | None = None) -> PointedSet:
    """Cocycles ``z(gh) = z(g)·(g·z(h))`` modulo ``z ~ a·z(g)·(g·a)⁻¹``."""
    budget = Budget(max_candidates, what="h1")
    G, A = act.gamma, act.target
    zs = cocycles(act, budget=budget)
    known = set(zs)

    def moves(z):
        for a in A:
            w = tuple(A.prod(a, zg, A.inv(act.act(g, a))) for g, zg in zip(G.elements, z))
            if w not in known:
                raise AssertionError("twisted conjugation left the cocycle set")
            yield w

    base = tuple(A.identity for _ in G.elements)
    return _orbit_classes(zs, lambda z: tuple(A.index(v) for v in z), moves, base, budget)


# --- double cosets ----------------------------------------------------------------------


@dataclass
class DoubleCosetProblem:
    K: Group
    maps: list  # GroupHom H_i -> K

    def __post_init__(self):
        for u in self.maps:
            if u.cod is not self.K and set(u.cod.elements) != set(self.K.elements):
                raise CohomError("every map must land in K")
            u.check()


def double_cosets(K: Group, maps: Sequence[GroupHom], *, max_candidates: int | None = None) -> PointedSet:
    """Orbits of ``Kⁿ`` under ``(k_i) ↦ (h·k_i·u_i(h_i))``.

    The maps need not be injective; only their images matter.
    """
    DoubleCosetProblem(K, list(maps))
    budget = Budget(max_candidates, what="double cosets")
    n = len(maps)
    points = list(product(K.elements, repeat=n))
    budget.tick(len(points))
    images = [u.image() for u in maps]
    left_gens = K.generators() or [K.identity]

    def moves(p):
        for h in left_gens:
            yield tuple(K.mul(h, k) for k in p)
        for i, img in enumerate(images):
            for v in img:
                yield p[:i] + (K.mul(p[i], v),) + p[i + 1 :]

    base = tuple(K.identity for _ in range(n))
    return _orbit_classes(points, lambda p: tuple(K.index(k) for k in p), moves, base, budget)


# --- Čech H¹ ---------------------------------------------------------------------------


class Cover:
    """Combinatorial cover: components of the patches and of their overlaps.

    ``patches[α]`` lists the components of ``U_α``. ``pairs[(α, β)]`` (with
    ``α`` before ``β`` in patch order) maps each component of ``U_α ∩ U_β`` to
    its components in ``U_α`` and ``U_β``. ``triples[(α, β, γ)]`` maps each
    component of the triple overlap to its components in the three pairwise
    overlaps ``(αβ, βγ, αγ)``.
    """

    def __init__(self, patches: Mapping, pairs: Mapping, triples: Mapping | None = None, *, check: bool = True):
        self.patches = {a: list(cs) for a, cs in patches.items()}
        self.pairs = {tuple(k): {c: tuple(v) for c, v in m.items()} for k, m in pairs.items()}
        self.triples = {tuple(k): {c: tuple(v) for c, v in m.items()} for k, m in (triples or {}).items()}
        self.order = {a: i for i, a in enumerate(self.patches)}
        if check:
            self.check()

    def check(self) -> None:
        for (a, b), comps in self.pairs.items():
            if a not in self.order or b not in self.order or self.order[a] >= self.order[b]:
                raise CohomError(f"pair ({a!r}, {b!r}) is not an ordered pair of patches")
            for c, (ca, cb) in comps.items():
                if ca not in self.patches[a] or cb not in self.patches[b]:
                    raise CohomError(f"overlap component {c!r} of ({a!r}, {b!r}) restricts outside its patches")
        for (a, b, g), comps in self.triples.items():
            for key in ((a, b), (b, g), (a, g)):
                if key not in self.pairs:
                    raise CohomError(f"triple ({a!r}, {b!r}, {g!r}) needs the pair {key!r}")
            for t, (ab, bg, ag) in comps.items():
                for key, c in (((a, b), ab), ((b, g), bg), ((a, g), ag)):
                    if c not in self.pairs[key]:
                        raise CohomError(f"triple component {t!r} restricts to unknown component {c!r} of {key!r}")
                # the three routes to each patch must agree
                pab, pbg, pag = self.pairs[(a, b)][ab], self.pairs[(b, g)][bg], self.pairs[(a, g)][ag]
                if pab[0] != pag[0] or pab[1] != pbg[0] or pbg[1] != pag[1]:
                    raise CohomError(f"triple component {t!r} of ({a!r}, {b!r}, {g!r}) violates the simplicial identities")

    def pair_components(self) -> list[tuple]:
        return [(k, c) for k, comps in self.pairs.items() for c in comps]

    def patch_components(self) -> list[tuple]:
        return [(a, c) for a, cs in self.patches.items() for c in cs]


@dataclass
class CechProblem:
    cover: Cover
    group: Group


def cech_cocycles(cov: Cover, G: Group, *, budget: Budget | None = None) -> list[tuple]:
    """Cocycles as tuples indexed like ``cov.pair_components()``."""
    budget = budget or Budget(what="Čech cocycles")
    slots = cov.pair_components()
    pos = {s: i for i, s in enumerate(slots)}
    checks: list[list] = [[] for _ in slots]
    for (a, b, g), comps in cov.triples.items():
        for t, (ab, bg, ag) in comps.items():
            keys = (((a, b), ab), ((b, g), bg), ((a, g), ag))
            checks[max(pos[k] for k in keys)].append(keys)
    val: dict = {}
    out = []

    def go(k):
        if k == len(slots):
            out.append(tuple(val[s] for s in slots))
            return
        s = slots[k]
        for x in G:
            budget.tick()
            val[s] = x
            if all(G.mul(val[bg], val[ab]) == val[ag] for ab, bg, ag in checks[k]):
                go(k + 1)
        val.pop(s, None)

    go(0)
    return out


def cech_h1(cov: Cover, G: Group, *, max_candidates: int | None = None) -> PointedSet:
    """Cocycles ``g_βγ·g_αβ = g_αγ`` modulo patch-wise gauge ``g_αβ ↦ f_β·g_αβ·f_α⁻¹``."""
    budget = Budget(max_candidates, what="Čech H1")
    slots = cov.pair_components()
    zs = cech_cocycles(cov, G, budget=budget)
    known = set(zs)
    touching: dict = {pc: [] for pc in cov.patch_components()}
    for i, ((a, b), c) in enumerate(slots):
        ca, cb = cov.pairs[(a, b)][c]
        touching[(a, ca)].append((i, "src"))
        touching[(b, cb)].append((i, "tgt"))
    gens = G.generators() or [G.identity]

    def moves(z):
        for pc, slots_here in touching.items():
            for f in gens:
                w = list(z)
                fi = G.inv(f)
                for i, side in slots_here:
                    w[i] = G.mul(f, w[i]) if side == "tgt" else G.mul(w[i], fi)
                w = tuple(w)
                if w not in known:
                    raise AssertionError("gauge action left the cocycle set")
                yield w

    base = tuple(G.identity for _ in slots)
    return _orbit_classes(zs, lambda z: tuple(G.index(v) for v in z), moves, base, budget)


# --- towers and lim¹ ---------------------------------------------------------------------


class Tower:
    """``G_0 ← G_1 ← ... ← G_N`` with ``maps[n]: G_{n+1} -> G_n``.

    ``stable_from = k`` asserts that ``maps[n]`` is an isomorphism for every
    ``n >= k``; past ``G_N`` the tower is taken to be constant.
    """

    def __init__(self, groups: Sequence[Group], maps: Sequence[GroupHom], *, stable_from: int | None = None, check: bool = True):
        self.groups = list(groups)
        self.maps = list(maps)
        self.stable_from = len(self.maps) if stable_from is None else stable_from
        if check:
            self.check()

    def check(self) -> None:
        if len(self.maps) != len(self.groups) - 1:
            raise CohomError("a tower of N+1 groups needs N bonding maps")
        if not 0 <= self.stable_from <= len(self.maps):
            raise CohomError("stabilization index must lie in the tower")
        for n, f in enumerate(self.maps):
            if set(f.dom.elements) != set(self.groups[n + 1].elements) or set(f.cod.elements) != set(self.groups[n].elements):
                raise CohomError(f"bonding map {n} has the wrong endpoints")
            try:
                f.check()
            except GroupError as exc:
                raise CohomError(f"bonding map {n}: {exc}") from None
            if n >= self.stable_from and not f.is_isomorphism():
                raise CohomError(f"bonding map {n} is not an isomorphism past the stabilization index")

    def surjective(self) -> bool:
        return all(f.is_surjective() for f in self.maps)


def lim1_tower(t: Tower, *, max_candidates: int | None = None) -> PointedSet:
    """Orbits of ``∏ G_n`` (one factor per bonding map) under ``g_n ↦ h_n·g_n·f_n(h_{n+1})⁻¹``."""
    budget = Budget(max_candidates, what="lim1")
    N = len(t.maps)
    gs, fs = t.groups, t.maps
    points = list(product(*(gs[n].elements for n in range(N))))
    budget.tick(len(points))

    def moves(p):
        for n in range(N + 1):
            for h in gs[n].generators() or [gs[n].identity]:
                w = list(p)
                if n < N:
                    w[n] = gs[n].mul(h, w[n])
                if n > 0:
                    G = gs[n - 1]
                    w[n - 1] = G.mul(w[n - 1], G.inv(fs[n - 1](h)))
                yield tuple(w)

    base = tuple(gs[n].identity for n in range(N))
    return _orbit_classes(points, lambda p: tuple(gs[n].index(v) for n, v in enumerate(p)), moves, base, budget)


# --- colimit decompositions ----------------------------------------------------------------


@dataclass
class ColimReport:
    ok: bool
    total: object
    iterated: object
    comparison: object
    partial: dict


def validate_decomposition(pieces: DiagramOfCats, K: FinCategory, incl: Mapping) -> None:
    """The inclusions form a strict cocone and their images cover ``K``."""
    I = pieces.index
    for a in I.objects:
        ia = incl[a]
        ia.check()
    for e in I.morphisms:
        a, b = I.src(e), I.tgt(e)
        Te, ia, ib = pieces.T(e), incl[a], incl[b]
        for x in pieces.fibers[a].objects:
            if ib(Te(x)) != ia(x):
                raise CohomError(f"inclusions do not commute along {e!r} at {x!r}")
        for m in pieces.fibers[a].morphisms:
            if ib.mor_map[Te.mor_map[m]] != ia.mor_map[m]:
                raise CohomError(f"inclusions do not commute along {e!r} at {m!r}")
    hit_o = {incl[a](x) for a in I.objects for x in pieces.fibers[a].objects}
    hit_m = {incl[a].mor_map[m] for a in I.objects for m in pieces.fibers[a].morphisms}
    for x in K.objects:
        if x not in hit_o:
            raise CohomError(f"object {x!r} of K lies in no piece")
    for m in K.morphisms:
        if m not in hit_m:
            raise CohomError(f"morphism {m!r} of K lies in no piece")


def colim_decomposition(
    pieces: DiagramOfCats,
    K: FinCategory,
    incl: Mapping,
    f: FinFunctor,
    *,
    max_candidates: int | None = None,
) -> ColimReport:
    """Compare ``colim_K f`` with ``colim_a colim_{K_a} f``."""
    validate_decomposition(pieces, K, incl)
    I = pieces.index
    C = f.cod
    total = colimit(C, K, f, max_candidates=max_candidates)
    if total is None:
        raise MissingLimitError(f"missing colimit: f over {K.name} has no colimit in {C.name}")
    partial = {}
    for a in I.objects:
        Ka = pieces.fibers[a]
        fa = FinFunctor(Ka, C, {x: f(incl[a](x)) for x in Ka.objects}, {m: f.mor_map[incl[a].mor_map[m]] for m in Ka.morphisms})
        pa = colimit(C, Ka, fa, max_candidates=max_candidates)
        if pa is None:
            raise MissingLimitError(f"missing colimit: piece {a!r} has no colimit in {C.name}")
        partial[a] = pa
    c_mor = {}
    for e in I.morphisms:
        a, b = I.src(e), I.tgt(e)
        pb = partial[b]
        legs = {x: pb.legs[pieces.T(e)(x)] for x in pieces.fibers[a].objects}
        c_mor[e] = partial[a].factor(pb.apex, legs)
    c = FinFunctor(I, C, {a: partial[a].apex for a in I.objects}, c_mor, name="partial colimits")
    c.check()
    iterated = colimit(C, I, c, max_candidates=max_candidates)
    if iterated is None:
        raise MissingLimitError(f"missing colimit: the partial colimits have no colimit over {I.name}")
    to_total = {
        a: partial[a].factor(total.apex, {x: total.legs[incl[a](x)] for x in pieces.fibers[a].objects})
        for a in I.objects
    }
    comparison = iterated.factor(total.apex, to_total)
    return ColimReport(
        C.is_invertible(comparison),
        total.apex,
        iterated.apex,
        comparison,
        {a: p.apex for a, p in partial.items()},
    )


# --- bridges to pi0_descent ------------------------------------------------------------------


def _one_object(G: Group) -> FinCategory:
    return G.as_category()


def h1_diagram(act: GroupAction) -> DiagramOfCats:
    """``BΓ``-indexed diagram with fiber ``BA`` and transport ``a ↦ g·a``."""
    I = act.gamma.as_category()
    BA = _one_object(act.target)
    transport = {g: FinFunctor(BA, BA, {"*": "*"}, act.action[g], name=f"act_{g}") for g in act.gamma}
    return DiagramOfCats(I, {"*": BA}, transport, name="BA//Γ", check=False)


def dcoset_diagram(K: Group, maps: Sequence[GroupHom]) -> DiagramOfCats:
    """Multi-span ``BH_i -> BK``."""
    apex = "K"
    legs = [("H", i) for i in range(len(maps))]
    els = [apex] + legs
    I = poset_category(els, lambda x, y: x == y or (x != apex and y == apex), name="span")
    BK = _one_object(K)
    fibers = {apex: BK}
    for i, u in enumerate(maps):
        fibers[("H", i)] = _one_object(u.dom)
    transport = {}
    for e in I.morphisms:
        x, y = e
        if x == y:
            transport[e] = identity_functor(fibers[x])
        else:
            transport[e] = FinFunctor(fibers[x], BK, {"*": "*"}, maps[x[1]].mapping, name=f"u_{x[1]}")
    return DiagramOfCats(I, fibers, transport, name="span", check=False)


def cech_index(cov: Cover) -> FinCategory:
    """Face poset on the components of patches and overlaps."""
    verts = [("v", a, c) for a, c in cov.patch_components()]
    edges = [("e", k, c) for k, c in cov.pair_components()]
    faces = [("t", k, c) for k, comps in cov.triples.items() for c in comps]
    below: dict = {x: {x} for x in verts + edges + faces}
    for (_, (a, b), c) in edges:
        ca, cb = cov.pairs[(a, b)][c]
        below[("e", (a, b), c)] |= {("v", a, ca), ("v", b, cb)}
    for (_, (a, b, g), t) in faces:
        ab, bg, ag = cov.triples[(a, b, g)][t]
        for key, c in (((a, b), ab), ((b, g), bg), ((a, g), ag)):
            below[("t", (a, b, g), t)] |= below[("e", key, c)]
    return poset_category(verts + edges + faces, lambda x, y: x in below[y], name="faces")


def cech_diagram(cov: Cover, G: Group) -> DiagramOfCats:
    """Constant ``BG`` over the face poset of the cover's components."""
    I = cech_index(cov)
    BG = _one_object(G)
    idG = identity_functor(BG)
    return DiagramOfCats(I, {x: BG for x in I.objects}, {e: idG for e in I.morphisms}, name="Čech", check=False)


def tower_diagram(t: Tower) -> DiagramOfCats:
    """``BG_N -> ... -> BG_0`` over the chain ``N > ... > 0``."""
    N = len(t.maps)
    I = poset_category(list(range(N + 1)), lambda x, y: x >= y, name=f"[{N}]^op")
    fibers = {n: _one_object(t.groups[n]) for n in range(N + 1)}
    transport = {}
    for (x, y) in I.morphisms:
        m = {g: g for g in t.groups[x]}
        for n in range(x, y, -1):
            m = {g: t.maps[n - 1](v) for g, v in m.items()}
        transport[(x, y)] = FinFunctor(fibers[x], fibers[y], {"*": "*"}, m, name=f"f_{x}{y}")
    return DiagramOfCats(I, fibers, transport, name="tower", check=False)


@dataclass
class BridgeReport:
    ok: bool
    solver_count: int
    descent_count: int
    kind: str


def bridge_to_descent(problem, *, max_candidates: int | None = None) -> BridgeReport:
    """Recount a solver input with ``pi0_descent`` on its groupoid diagram."""
    if isinstance(problem, GroupAction):
        kind, n = "h1", h1_nonabelian(problem, max_candidates=max_candidates).count
        D = h1_diagram(problem)
    elif isinstance(problem, DoubleCosetProblem):
        kind, n = "dcoset", double_cosets(problem.K, problem.maps, max_candidates=max_candidates).count
        D = dcoset_diagram(problem.K, problem.maps)
    elif isinstance(problem, CechProblem):
        kind, n = "cech", cech_h1(problem.cover, problem.group, max_candidates=max_candidates).count
        D = cech_diagram(problem.cover, problem.group)
    elif isinstance(problem, Tower):
        kind, n = "lim1", lim1_tower(problem, max_candidates=max_candidates).count
        D = tower_diagram(problem)
    else:
        raise TypeError(f"no bridge for {type(problem).__name__}")
    m = pi0_descent(D, max_candidates=max_candidates).count
    return BridgeReport(n == m, n, m, kind)


def colim_via_grothendieck(
    pieces: DiagramOfCats, K: FinCategory, incl: Mapping, f: FinFunctor, *, max_candidates: int | None = None
):
    """``colim`` of ``f`` pulled back to the total category of the pieces.

    Colimits over a Grothendieck construction are iterated colimits, so this
    is an independent route to the same object.
    """
    total, _ = grothendieck(pieces, max_candidates=max_candidates)
    I = pieces.index
    g = FinFunctor(
        total,
        f.cod,
        {(a, x): f(incl[a](x)) for a, x in total.objects},
        {(e, x, m): f.mor_map[incl[I.tgt(e)].mor_map[m]] for e, x, m in total.morphisms},
        name="f∘ι",
    )
    g.check()
    out = colimit(f.cod, total, g, max_candidates=max_candidates)
    if out is None:
        raise MissingLimitError(f"missing colimit: f over {total.name} has no colimit in {f.cod.name}")
    return out.apex
