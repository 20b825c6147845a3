"""Lifting level-wise adjunctions to descent adjunctions.

Given a cone ``F_a: C -> D_a`` whose legs have right adjoints ``G_a``, the
comparison functor ``C -> Pseudo(D)`` has the right adjoint
``y ↦ lim_a G_a(y_a)``, where the limit is taken over the mate diagram of
``y``. Everything is computed on finite tables and checked exhaustively.
"""
from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .fincat.build import opposite
from .fincat.core import (
    Adjunction,
    FinCategory,
    FinFunctor,
    NatTrans,
    Obj,
    check_adjunction,
    compose_adjunctions,
    compose_functors,
    full_subcategory,
    identity_functor,
)
from .fincat.limits import LimitCone, require_limit
from .fincat.search import FunctorData, NatData, functor_as_object, functor_category, right_adjoint
from .groth import (
    ConeOfCats,
    DiagramOfCats,
    Section,
    SectionMap,
    is_cocartesian_section,
    lax_limit,
    pseudo_limit,
)


class DescentError(ValueError):
    pass


@dataclass
class LevelwiseAdjunction:
    """A cone whose legs ``F_a`` come with right adjoints ``G_a``."""

    cone: ConeOfCats
    rights: dict
    units: dict
    counits: dict

    @property
    def index(self) -> FinCategory:
        return self.cone.diagram.index

    def adjunction(self, a: Obj) -> Adjunction:
        return Adjunction(self.cone.legs[a], self.rights[a], self.units[a], self.counits[a])

    def check(self) -> None:
        for a in self.index.objects:
            for key, table in (("right adjoint", self.rights), ("unit", self.units), ("counit", self.counits)):
                if a not in table:
                    raise DescentError(f"no {key} at {a!r}")
            rep = check_adjunction(self.adjunction(a))
            if not rep:
                raise DescentError(f"level {a!r}: {rep.failures[0]}")


def levelwise_from_cone(cone: ConeOfCats) -> LevelwiseAdjunction | None:
    """Find right adjoints of every leg by universal-arrow search."""
    rights, units, counits = {}, {}, {}
    for a, leg in cone.legs.items():
        adj = right_adjoint(leg)
        if adj is None:
            return None
        rights[a], units[a], counits[a] = adj.right, adj.unit, adj.counit
    return LevelwiseAdjunction(cone, rights, units, counits)


def comparison_functor(cone: ConeOfCats, P: FinCategory | None = None) -> FinFunctor:
    """``x ↦ (a ↦ F_a x, e ↦ φ_e,x)`` into the coCartesian sections."""
    D = cone.diagram
    I = D.index
    P = P if P is not None else pseudo_limit(D)
    C = cone.apex
    obj_map = {
        x: Section({a: cone.legs[a](x) for a in I.objects}, {e: cone.phi(e, x) for e in I.morphisms})
        for x in C.objects
    }
    mor_map = {
        u: SectionMap(obj_map[C.src(u)], obj_map[C.tgt(u)], {a: cone.legs[a].mor_map[u] for a in I.objects})
        for u in C.morphisms
    }
    for x, s in obj_map.items():
        if not P.has_object(s):
            raise AssertionError(f"comparison functor: image of {x!r} is not a coCartesian section")
    return FinFunctor(C, P, obj_map, mor_map, name=f"comparison({cone.name})")


def mate_diagram(L: LevelwiseAdjunction, y: Section) -> FinFunctor:
    """The functor ``I -> C`` with ``a ↦ G_a(y_a)`` and mates on arrows.

    Along ``e: a -> b`` the arrow is
    ``G_b(s_e) ∘ G_b T_e(ε_a) ∘ G_b(φ_e^{-1}) ∘ η_b`` at ``G_a(y_a)``.
    """
    cone = L.cone
    D = cone.diagram
    I = D.index
    C = cone.apex
    obj_map = {a: L.rights[a](y.on_obj[a]) for a in I.objects}
    mor_map = {}
    for e in I.morphisms:
        a, b = I.src(e), I.tgt(e)
        Db, Gb = D.fibers[b], L.rights[b]
        x = obj_map[a]
        phi_inv = Db.inverse(cone.phi(e, x))
        if phi_inv is None:
            raise DescentError(f"cone comparison along {e!r} at {x!r} is not invertible")
        inner = Db.comp(y.on_mor[e], D.T(e).mor_map[L.counits[a][y.on_obj[a]]], phi_inv)
        mor_map[e] = C.compose(Gb.mor_map[inner], L.units[b][x])
    X = FinFunctor(I, C, obj_map, mor_map, name="mate")
    for f, e in I.composable_pairs():
        if mor_map[I.compose(f, e)] != C.compose(mor_map[f], mor_map[e]):
            raise AssertionError(f"mate diagram not functorial on ({f!r}, {e!r})")
    return X


def lax_right_adjoint(
    L: LevelwiseAdjunction, *, fc: FinCategory | None = None, lax: FinCategory | None = None
) -> Adjunction:
    """``F̃ ⊣ G̃`` between ``C^I`` and the lax limit, assembled from the levels."""
    cone = L.cone
    D = cone.diagram
    I = D.index
    C = cone.apex
    fc = fc if fc is not None else functor_category(I, C)
    lax = lax if lax is not None else lax_limit(D)

    def f_obj(X: FunctorData) -> Section:
        xo, xm = dict(X.obj_map), dict(X.mor_map)
        on_mor = {}
        for e in I.morphisms:
            a, b = I.src(e), I.tgt(e)
            on_mor[e] = D.fibers[b].compose(cone.legs[b].mor_map[xm[e]], cone.phi(e, xo[a]))
        return Section({a: cone.legs[a](xo[a]) for a in I.objects}, on_mor)

    F_obj = {X: f_obj(X) for X in fc.objects}
    F_mor = {
        n: SectionMap(F_obj[n.src], F_obj[n.tgt], {a: cone.legs[a].mor_map[c] for a, c in n.components})
        for n in fc.morphisms
    }
    G_obj = {y: functor_as_object(mate_diagram(L, y)) for y in lax.objects}
    G_mor = {
        h: NatData(G_obj[h.src], G_obj[h.tgt], tuple((a, L.rights[a].mor_map[h.components[a]]) for a in I.objects))
        for h in lax.morphisms
    }
    left = FinFunctor(fc, lax, F_obj, F_mor, name="F~")
    right = FinFunctor(lax, fc, G_obj, G_mor, name="G~")
    unit = {
        X: NatData(X, G_obj[F_obj[X]], tuple((a, L.units[a][x]) for a, x in X.obj_map)) for X in fc.objects
    }
    counit = {
        y: SectionMap(F_obj[G_obj[y]], y, {a: L.counits[a][y.on_obj[a]] for a in I.objects}) for y in lax.objects
    }
    return Adjunction(
        left,
        right,
        NatTrans(identity_functor(fc), compose_functors(right, left), unit, name="η~"),
        NatTrans(compose_functors(left, right), identity_functor(lax), counit, name="ε~"),
    )


class _Mates(Mapping):
    """Lazily computed mate diagrams, one per coCartesian section."""

    def __init__(self, L: LevelwiseAdjunction, sections: Iterable[Section]):
        self._L = L
        self._keys = list(sections)
        self._cache: dict = {}

    def __getitem__(self, y: Section) -> FinFunctor:
        if y not in self._cache:
            self._cache[y] = mate_diagram(self._L, y)
        return self._cache[y]

    def __iter__(self):
        return iter(self._keys)

    def __len__(self) -> int:
        return len(self._keys)


@dataclass
class DescentAdjunction:
    """``comparison ⊣ right`` with ``right = lim ∘ G^I`` on coCartesian sections."""

    comparison: FinFunctor
    right: FinFunctor
    unit: NatTrans
    counit: NatTrans
    g_diagram: Mapping
    limits: dict = field(default_factory=dict)

    @property
    def pseudo(self) -> FinCategory:
        return self.comparison.cod

    @property
    def adjunction(self) -> Adjunction:
        return Adjunction(self.comparison, self.right, self.unit, self.counit)


def theorem_b(
    L: LevelwiseAdjunction, *, P: FinCategory | None = None, max_candidates: int | None = None
) -> DescentAdjunction:
    """The descent adjunction with explicit unit and counit.

    ``right(y)`` is the chosen limit of ``mate_diagram(L, y)``; the unit at
    ``x`` factors the cone of level units ``η_a,x`` through that limit, and the
    counit at ``y`` has components ``ε_a ∘ F_a(π_a)``.
    """
    cone = L.cone
    D = cone.diagram
    I = D.index
    C = cone.apex
    P = P if P is not None else pseudo_limit(D, max_candidates=max_candidates)
    comp = comparison_functor(cone, P)
    mates = _Mates(L, P.objects)
    limits: dict[Section, LimitCone] = {}
    for y in P.objects:
        limits[y] = require_limit(C, I, mates[y], what=f"mate diagram of {y!r}", max_candidates=max_candidates)
    R_obj = {y: limits[y].apex for y in P.objects}
    R_mor = {}
    for h in P.morphisms:
        src, tgt = limits[h.src], limits[h.tgt]
        legs = {a: C.compose(L.rights[a].mor_map[h.components[a]], src.legs[a]) for a in I.objects}
        R_mor[h] = tgt.factor(src.apex, legs)
    right = FinFunctor(P, C, R_obj, R_mor, name="lim∘G^I")
    unit = {}
    for x in C.objects:
        lim = limits[comp(x)]
        unit[x] = lim.factor(x, {a: L.units[a][x] for a in I.objects})
    counit = {}
    for y in P.objects:
        lim = limits[y]
        comps = {
            a: D.fibers[a].compose(L.counits[a][y.on_obj[a]], cone.legs[a].mor_map[lim.legs[a]])
            for a in I.objects
        }
        counit[y] = SectionMap(comp(R_obj[y]), y, comps)
    return DescentAdjunction(
        comp,
        right,
        NatTrans(identity_functor(C), compose_functors(right, comp), unit, name="η"),
        NatTrans(compose_functors(comp, right), identity_functor(P), counit, name="ε"),
        mates,
        limits,
    )


@dataclass
class EquivalenceReport:
    ok: bool
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


def is_equivalence(adj: DescentAdjunction | Adjunction) -> EquivalenceReport:
    """True iff every unit and counit component is invertible.

    On failure ``witness`` is ``("unit" | "counit", object, component)``.
    """
    unit, counit = adj.unit, adj.counit
    C = unit.src.dom
    E = counit.src.dom
    for x in C.objects:
        if not C.is_invertible(unit[x]):
            return EquivalenceReport(False, ("unit", x, unit[x]))
    for y in E.objects:
        if not E.is_invertible(counit[y]):
            return EquivalenceReport(False, ("counit", y, counit[y]))
    return EquivalenceReport(True)


# --- restriction and the (Δ ⊣ lim) adjunction -------------------------------------------


def restrict_adjunction(adj: Adjunction, keep: Iterable[Obj] | Callable[[Obj], bool]) -> Adjunction:
    """Restrict the upper category of ``adj`` to a full subcategory containing the left image."""
    F, G = adj.left, adj.right
    C, E = F.dom, F.cod
    sub, _ = full_subcategory(E, keep, name=f"{E.name}|sub")
    for x in C.objects:
        if not sub.has_object(F(x)):
            raise DescentError(f"image escapes subcategory: {F(x)!r} (image of {x!r})")
    F2 = FinFunctor(C, sub, F.obj_map, F.mor_map, name=F.name)
    G2 = FinFunctor(
        sub,
        C,
        {y: G(y) for y in sub.objects},
        {h: G.mor_map[h] for h in sub.morphisms},
        name=G.name,
    )
    return Adjunction(
        F2,
        G2,
        NatTrans(identity_functor(C), compose_functors(G2, F2), adj.unit.components, name=adj.unit.name),
        NatTrans(
            compose_functors(F2, G2),
            identity_functor(sub),
            {y: adj.counit[y] for y in sub.objects},
            name=adj.counit.name,
        ),
    )


def diagonal_adjunction(
    I: FinCategory, C: FinCategory, *, fc: FinCategory | None = None, max_candidates: int | None = None
) -> Adjunction:
    """``Δ ⊣ lim`` between ``C`` and ``C^I``; needs every ``I``-limit in ``C``."""
    fc = fc if fc is not None else functor_category(I, C, max_candidates=max_candidates)

    def const(x):
        return FunctorData(tuple((a, x) for a in I.objects), tuple((e, C.id(x)) for e in I.morphisms))

    def const_mor(u):
        return NatData(const(C.src(u)), const(C.tgt(u)), tuple((a, u) for a in I.objects))

    limits = {}
    for X in fc.objects:
        Xf = FinFunctor(I, C, dict(X.obj_map), dict(X.mor_map), name="X")
        limits[X] = require_limit(C, I, Xf, what=f"{X!r}", max_candidates=max_candidates)
    delta = FinFunctor(C, fc, {x: const(x) for x in C.objects}, {u: const_mor(u) for u in C.morphisms}, name="Δ")
    lim_mor = {}
    for n in fc.morphisms:
        src, tgt = limits[n.src], limits[n.tgt]
        comps = dict(n.components)
        lim_mor[n] = tgt.factor(src.apex, {a: C.compose(comps[a], src.legs[a]) for a in I.objects})
    lim = FinFunctor(fc, C, {X: limits[X].apex for X in fc.objects}, lim_mor, name="lim")
    unit = {x: limits[const(x)].factor(x, {a: C.id(x) for a in I.objects}) for x in C.objects}
    counit = {
        X: NatData(const(limits[X].apex), X, tuple((a, limits[X].legs[a]) for a in I.objects)) for X in fc.objects
    }
    return Adjunction(
        delta,
        lim,
        NatTrans(identity_functor(C), compose_functors(lim, delta), unit, name="η_Δ"),
        NatTrans(compose_functors(delta, lim), identity_functor(fc), counit, name="ε_Δ"),
    )


# --- dualization ---------------------------------------------------------------------


@dataclass
class LevelwiseLeftAdjunction:
    """A cone whose legs ``F_a`` come with left adjoints ``H_a``.

    ``units[a]`` has components ``y -> F_a H_a y`` and ``counits[a]`` has
    components ``H_a F_a x -> x``.
    """

    cone: ConeOfCats
    lefts: dict
    units: dict
    counits: dict

    def adjunction(self, a: Obj) -> Adjunction:
        return Adjunction(self.lefts[a], self.cone.legs[a], self.units[a], self.counits[a])


def _op_diagram(D: DiagramOfCats) -> DiagramOfCats:
    fibers = {a: opposite(D.fibers[a]) for a in D.index.objects}
    transport = {
        e: FinFunctor(fibers[D.index.src(e)], fibers[D.index.tgt(e)], T.obj_map, T.mor_map, name=f"{T.name}^op")
        for e, T in D.transport.items()
    }
    return DiagramOfCats(D.index, fibers, transport, name=f"{D.name}^op", check=False)


def _op_section(D: DiagramOfCats, s: Section) -> Section:
    """Invert every ``s_e``: the iso between coCartesian sections of ``D`` and of ``D^op``."""
    I = D.index
    on_mor = {}
    for e, m in s.on_mor.items():
        inv = D.fibers[I.tgt(e)].inverse(m)
        if inv is None:
            raise DescentError(f"section is not coCartesian along {e!r}")
        on_mor[e] = inv
    return Section(s.on_obj, on_mor)


def dual_descent(L: LevelwiseLeftAdjunction, *, max_candidates: int | None = None) -> Adjunction:
    """``colim ∘ H^I ⊣ comparison``, computed as a descent adjunction of opposites."""
    cone = L.cone
    D = cone.diagram
    I = D.index
    C = cone.apex
    Cop = opposite(C)
    Dop = _op_diagram(D)
    legs_op = {a: FinFunctor(Cop, Dop.fibers[a], F.obj_map, F.mor_map, name=f"{F.name}^op") for a, F in cone.legs.items()}
    phis = {}
    for e in I.morphisms:
        if I.is_identity(e):
            continue
        Db = D.fibers[I.tgt(e)]
        phis[e] = {x: Db.inverse(cone.phi(e, x)) for x in C.objects}
    cone_op = ConeOfCats(Cop, Dop, legs_op, phis, name=f"{cone.name}^op", check=False)
    rights_op, units_op, counits_op = {}, {}, {}
    for a in I.objects:
        H, F = L.lefts[a], cone.legs[a]
        Hop = FinFunctor(Dop.fibers[a], Cop, H.obj_map, H.mor_map, name=f"{H.name}^op")
        rights_op[a] = Hop
        units_op[a] = NatTrans(
            identity_functor(Cop), compose_functors(Hop, legs_op[a]), L.counits[a].components, name="ε^op"
        )
        counits_op[a] = NatTrans(
            compose_functors(legs_op[a], Hop), identity_functor(Dop.fibers[a]), L.units[a].components, name="η^op"
        )
    L_op = LevelwiseAdjunction(cone_op, rights_op, units_op, counits_op)
    try:
        res = theorem_b(L_op, max_candidates=max_candidates)
    except LookupError as exc:
        raise DescentError(str(exc).replace("missing limit", "missing colimit")) from None
    P = pseudo_limit(D, max_candidates=max_candidates)
    comp = comparison_functor(cone, P)
    to_op = {y: _op_section(D, y) for y in P.objects}
    H_obj = {y: res.right(to_op[y]) for y in P.objects}
    H_mor = {}
    for h in P.morphisms:
        h_op = SectionMap(to_op[h.tgt], to_op[h.src], h.components)
        H_mor[h] = res.right.mor_map[h_op]
    H = FinFunctor(P, C, H_obj, H_mor, name="colim∘H^I")
    unit = {}
    for y in P.objects:
        c = res.counit[to_op[y]]
        unit[y] = SectionMap(y, comp(H_obj[y]), c.components)
    counit = {x: res.unit[x] for x in C.objects}
    return Adjunction(
        H,
        comp,
        NatTrans(identity_functor(P), compose_functors(comp, H), unit, name="η"),
        NatTrans(compose_functors(H, comp), identity_functor(C), counit, name="ε"),
    )


def restricted_lax_adjunction(L: LevelwiseAdjunction, *, max_candidates: int | None = None) -> Adjunction:
    """The composite of ``Δ ⊣ lim`` with ``F̃ ⊣ G̃``, restricted to coCartesian sections.

    This is the second construction of the descent adjunction; its tables
    agree with :func:`theorem_b` when both use the same limit choices.
    """
    D = L.cone.diagram
    C = L.cone.apex
    fc = functor_category(D.index, C, max_candidates=max_candidates)
    lax = lax_limit(D, max_candidates=max_candidates)
    outer = lax_right_adjoint(L, fc=fc, lax=lax)
    inner = diagonal_adjunction(D.index, C, fc=fc, max_candidates=max_candidates)
    whole = compose_adjunctions(outer, inner)
    return restrict_adjunction(whole, lambda s: is_cocartesian_section(D, s))


__all__ = [
    "DescentAdjunction",
    "DescentError",
    "EquivalenceReport",
    "LevelwiseAdjunction",
    "LevelwiseLeftAdjunction",
    "comparison_functor",
    "diagonal_adjunction",
    "dual_descent",
    "is_equivalence",
    "lax_right_adjoint",
    "levelwise_from_cone",
    "mate_diagram",
    "restrict_adjunction",
    "restricted_lax_adjunction",
    "theorem_b",
]
