"""Diagrams of finite categories with their lax limits and Grothendieck constructions.

A diagram ``D: I -> Cat`` is strict. Cones and maps of diagrams may carry
comparison isomorphisms (pseudo-naturality data); without them they are
strict and the comparisons are identities.
"""
from __future__ import annotations

from typing import Iterator, Mapping

from .fincat.core import (
    Budget,
    CategoryError,
    FinCategory,
    FinFunctor,
    FunctorError,
    Mor,
    Obj,
    identity_functor,
)
from .fincat.search import FunctorData, NatData, functor_category, isomorphism_between


class DiagramError(ValueError):
    pass


# --- diagrams -------------------------------------------------------------------


class DiagramOfCats:
    """A strict functor from ``index`` to finite categories."""

    def __init__(
        self,
        index: FinCategory,
        fibers: Mapping[Obj, FinCategory],
        transport: Mapping[Mor, FinFunctor],
        *,
        name: str = "D",
        check: bool = True,
    ):
        self.index = index
        self.fibers = dict(fibers)
        self.transport = dict(transport)
        self.name = name
        if check:
            self.check()

    def fiber(self, a: Obj) -> FinCategory:
        return self.fibers[a]

    def T(self, e: Mor) -> FinFunctor:
        return self.transport[e]

    def check(self) -> None:
        I = self.index
        for a in I.objects:
            if a not in self.fibers:
                raise DiagramError(f"{self.name}: no fiber at {a!r}")
        for e in I.morphisms:
            if e not in self.transport:
                raise DiagramError(f"{self.name}: no transport along {e!r}")
            F = self.transport[e]
            a, b = I.src(e), I.tgt(e)
            if F.dom is not self.fibers[a] and not F.dom.same_tables(self.fibers[a]):
                raise DiagramError(f"{self.name}: transport {e!r} has the wrong domain")
            if F.cod is not self.fibers[b] and not F.cod.same_tables(self.fibers[b]):
                raise DiagramError(f"{self.name}: transport {e!r} has the wrong codomain")
            try:
                F.check()
            except FunctorError as exc:
                raise DiagramError(f"{self.name}: transport {e!r} is not a functor: {exc}") from None
        for a in I.objects:
            F = self.transport[I.id(a)]
            if not F.same_as(identity_functor(self.fibers[a])):
                raise DiagramError(f"{self.name}: transport of identity at {a!r} is not the identity functor")
        for f, e in I.composable_pairs():
            Tf, Te, Tfe = self.transport[f], self.transport[e], self.transport[I.compose(f, e)]
            for x in Te.dom.objects:
                if Tfe(x) != Tf(Te(x)):
                    raise DiagramError(
                        f"{self.name}: transport not functorial on ({f!r}, {e!r}) at object {x!r}"
                    )
            for m in Te.dom.morphisms:
                if Tfe.mor_map[m] != Tf.mor_map[Te.mor_map[m]]:
                    raise DiagramError(
                        f"{self.name}: transport not functorial on ({f!r}, {e!r}) at morphism {m!r}"
                    )

    def is_groupoid_valued(self) -> bool:
        return all(C.is_groupoid() for C in self.fibers.values())

    def __repr__(self) -> str:
        return f"DiagramOfCats({self.name!r} over {self.index.name})"


def constant_diagram(I: FinCategory, C: FinCategory, *, name: str | None = None) -> DiagramOfCats:
    idC = identity_functor(C)
    return DiagramOfCats(
        I, {a: C for a in I.objects}, {e: idC for e in I.morphisms}, name=name or f"const({C.name})", check=False
    )


def _check_pseudo_comparisons(what, I, D_src_obj, T_dst, F_of, T_src, phi, fibers_dst) -> None:
    """Shared law check for comparison cells ``phi[e][x]: T^D_e F_a x -> F_b T^C_e x``.

    ``D_src_obj(a)`` lists the objects of the source category at ``a``,
    ``F_of(a)`` is the component functor, ``T_src(e)`` the source transport.
    """
    for e in I.morphisms:
        a, b = I.src(e), I.tgt(e)
        Db = fibers_dst[b]
        Fa, Fb, Te, Se = F_of(a), F_of(b), T_dst(e), T_src(e)
        cell = phi.get(e, {})
        for x in D_src_obj(a):
            want_src, want_tgt = Te(Fa(x)), Fb(Se(x))
            m = cell.get(x)
            if m is None:
                if want_src != want_tgt:
                    raise DiagramError(f"{what}: no comparison at ({e!r}, {x!r}) and the square is not strict")
                continue
            if not Db.has_morphism(m) or Db.src(m) != want_src or Db.tgt(m) != want_tgt:
                raise DiagramError(f"{what}: comparison at ({e!r}, {x!r}) has the wrong endpoints")
            if not Db.is_invertible(m):
                raise DiagramError(f"{what}: comparison at ({e!r}, {x!r}) is not invertible")
        if I.is_identity(e):
            for x in D_src_obj(a):
                m = cell.get(x)
                if m is not None and m != Db.id(Fa(x)):
                    raise DiagramError(f"{what}: comparison at identity {e!r} is not the identity")


class MapOfDiagrams:
    """``F_•: C_• -> D_•`` with optional comparison isomorphisms.

    ``comparisons[e][x]`` is an isomorphism ``T^D_e(F_a x) -> F_b(T^C_e x)`` in
    ``D_b``; a missing entry means the square commutes strictly at ``x``.
    """

    def __init__(
        self,
        source: DiagramOfCats,
        target: DiagramOfCats,
        components: Mapping[Obj, FinFunctor],
        comparisons: Mapping[Mor, Mapping[Obj, Mor]] | None = None,
        *,
        name: str = "F",
        check: bool = True,
    ):
        self.source = source
        self.target = target
        self.components = dict(components)
        self.comparisons = {e: dict(v) for e, v in (comparisons or {}).items()}
        self.name = name
        if check:
            self.check()

    def phi(self, e: Mor, x: Obj) -> Mor:
        m = self.comparisons.get(e, {}).get(x)
        if m is not None:
            return m
        b = self.source.index.tgt(e)
        return self.target.fibers[b].id(self.components[b](self.source.transport[e](x)))

    def is_strict(self) -> bool:
        return all(
            self.target.fibers[self.source.index.tgt(e)].is_identity(m)
            for e, cell in self.comparisons.items()
            for m in cell.values()
        )

    def check(self) -> None:
        I = self.source.index
        S, D = self.source, self.target
        if I is not D.index and not I.same_tables(D.index):
            raise DiagramError(f"{self.name}: source and target have different index categories")
        for a in I.objects:
            F = self.components.get(a)
            if F is None:
                raise DiagramError(f"{self.name}: no component at {a!r}")
            F.check()
        _check_pseudo_comparisons(
            self.name,
            I,
            lambda a: S.fibers[a].objects,
            D.T,
            lambda a: self.components[a],
            S.T,
            self.comparisons,
            D.fibers,
        )
        for e in I.morphisms:
            a, b = I.src(e), I.tgt(e)
            Ca, Db = S.fibers[a], D.fibers[b]
            Fa, Fb, Te, Se = self.components[a], self.components[b], D.T(e), S.T(e)
            # naturality of phi_e: F_b S_e(u) ∘ phi_x = phi_y ∘ T_e F_a(u)
            for u in Ca.morphisms:
                x, y = Ca.src(u), Ca.tgt(u)
                lhs = Db.compose(Fb.mor_map[Se.mor_map[u]], self.phi(e, x))
                rhs = Db.compose(self.phi(e, y), Te.mor_map[Fa.mor_map[u]])
                if lhs != rhs:
                    raise DiagramError(f"{self.name}: comparison along {e!r} not natural at {u!r}")
        for f, e in I.composable_pairs():
            a = I.src(e)
            fe = I.compose(f, e)
            Dc = D.fibers[I.tgt(f)]
            for x in S.fibers[a].objects:
                # phi_{fe,x} = phi_{f, S_e x} ∘ T_f(phi_{e,x})
                rhs = Dc.compose(self.phi(f, S.T(e)(x)), D.T(f).mor_map[self.phi(e, x)])
                if self.phi(fe, x) != rhs:
                    raise DiagramError(f"{self.name}: comparisons not coherent on ({f!r}, {e!r}) at {x!r}")


class ConeOfCats:
    """A cone ``apex -> D`` with legs ``F_a`` and optional comparisons.

    ``comparisons[e][x]`` is an isomorphism ``T_e(F_a x) -> F_b x``. A cone with
    no comparisons is strict: ``T_e ∘ F_a = F_b`` on the nose.
    """

    def __init__(
        self,
        apex: FinCategory,
        diagram: DiagramOfCats,
        legs: Mapping[Obj, FinFunctor],
        comparisons: Mapping[Mor, Mapping[Obj, Mor]] | None = None,
        *,
        name: str = "cone",
        check: bool = True,
    ):
        self.apex = apex
        self.diagram = diagram
        self.legs = dict(legs)
        self.comparisons = {e: dict(v) for e, v in (comparisons or {}).items()}
        self.name = name
        self._map: MapOfDiagrams | None = None
        if check:
            self.check()

    def phi(self, e: Mor, x: Obj) -> Mor:
        m = self.comparisons.get(e, {}).get(x)
        if m is not None:
            return m
        b = self.diagram.index.tgt(e)
        return self.diagram.fibers[b].id(self.legs[b](x))

    def is_strict(self) -> bool:
        return self.as_map().is_strict()

    def as_map(self) -> MapOfDiagrams:
        """The induced map ``const(apex) -> D``."""
        if self._map is None:
            src = constant_diagram(self.diagram.index, self.apex)
            self._map = MapOfDiagrams(
                src, self.diagram, self.legs, self.comparisons, name=self.name, check=False
            )
        return self._map

    def check(self) -> None:
        for a in self.diagram.index.objects:
            leg = self.legs.get(a)
            if leg is None:
                raise DiagramError(f"{self.name}: no leg at {a!r}")
            if leg.dom is not self.apex and not leg.dom.same_tables(self.apex):
                raise DiagramError(f"{self.name}: leg at {a!r} does not start at the apex")
        self.as_map().check()


# --- sections -------------------------------------------------------------------


class Section:
    """An object of the lax limit: ``x_a`` per index object, ``s_e: T_e x_a -> x_b`` per arrow."""

    __slots__ = ("on_obj", "on_mor", "_hash")

    def __init__(self, on_obj: Mapping, on_mor: Mapping):
        self.on_obj = dict(on_obj)
        self.on_mor = dict(on_mor)
        self._hash = hash((frozenset(self.on_obj.items()), frozenset(self.on_mor.items())))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Section)
            and self._hash == other._hash
            and self.on_obj == other.on_obj
            and self.on_mor == other.on_mor
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Section({self.on_obj!r}, {self.on_mor!r})"


class SectionMap:
    """A morphism of the lax limit: components ``h_a: x_a -> x'_a``."""

    __slots__ = ("src", "tgt", "components", "_hash")

    def __init__(self, src: Section, tgt: Section, components: Mapping):
        self.src = src
        self.tgt = tgt
        self.components = dict(components)
        self._hash = hash((src, tgt, frozenset(self.components.items())))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SectionMap)
            and self._hash == other._hash
            and self.src == other.src
            and self.tgt == other.tgt
            and self.components == other.components
        )

    def __hash__(self) -> int:
        return self._hash

    def __getitem__(self, a: Obj) -> Mor:
        return self.components[a]

    def __repr__(self) -> str:
        return f"SectionMap({self.components!r})"


def section_failures(D: DiagramOfCats, s: Section) -> list[str]:
    """Every violated section law, empty when ``s`` is a section of ``D``."""
    I = D.index
    out = []
    for a in I.objects:
        if a not in s.on_obj or not D.fibers[a].has_object(s.on_obj[a]):
            out.append(f"no valid object at {a!r}")
    if out:
        return out
    for e in I.morphisms:
        a, b = I.src(e), I.tgt(e)
        m = s.on_mor.get(e)
        Db = D.fibers[b]
        if m is None or not Db.has_morphism(m):
            out.append(f"no valid morphism along {e!r}")
            continue
        if Db.src(m) != D.T(e)(s.on_obj[a]) or Db.tgt(m) != s.on_obj[b]:
            out.append(f"morphism along {e!r} has the wrong endpoints")
        elif I.is_identity(e) and m != Db.id(s.on_obj[a]):
            out.append(f"morphism along identity {e!r} is not an identity")
    if out:
        return out
    for f, e in I.composable_pairs():
        Dc = D.fibers[I.tgt(f)]
        rhs = Dc.compose(s.on_mor[f], D.T(f).mor_map[s.on_mor[e]])
        if s.on_mor[I.compose(f, e)] != rhs:
            out.append(f"cocycle law fails on ({f!r}, {e!r})")
    return out


def is_cocartesian_section(D: DiagramOfCats, s: Section) -> bool:
    I = D.index
    return all(D.fibers[I.tgt(e)].is_invertible(m) for e, m in s.on_mor.items())


def enumerate_sections(
    D: DiagramOfCats, *, cocartesian: bool = False, budget: Budget | None = None
) -> Iterator[Section]:
    """Sections in canonical order: object choices first, then arrow choices."""
    budget = budget or Budget(what=f"sections of {D.name}")
    I = D.index
    objs = list(I.objects)
    arrows = [e for e in I.morphisms if not I.is_identity(e)]
    pos = {e: i for i, e in enumerate(arrows)}
    # composable pairs of non-identity arrows, bucketed by when all three are known
    checks: list[list] = [[] for _ in arrows]
    for f, e in I.composable_pairs():
        if I.is_identity(f) or I.is_identity(e):
            continue
        fe = I.compose(f, e)
        if I.is_identity(fe):
            k = max(pos[f], pos[e])
        else:
            k = max(pos[f], pos[e], pos[fe])
        checks[k].append((f, e, fe))

    def choose_objects(k, chosen):
        if k == len(objs):
            yield dict(chosen)
            return
        a = objs[k]
        for x in D.fibers[a].objects:
            budget.tick()
            chosen[a] = x
            yield from choose_objects(k + 1, chosen)
        chosen.pop(a, None)

    for xs in choose_objects(0, {}):
        mm = {I.id(a): D.fibers[a].id(xs[a]) for a in objs}
        options = []
        for e in arrows:
            a, b = I.src(e), I.tgt(e)
            Db = D.fibers[b]
            hom = Db.hom(D.T(e)(xs[a]), xs[b])
            if cocartesian:
                hom = tuple(m for m in hom if Db.is_invertible(m))
            options.append(hom)
        if any(not o for o in options):
            continue

        def go(k):
            if k == len(arrows):
                yield Section({a: xs[a] for a in objs}, {e: mm[e] for e in I.morphisms})
                return
            e = arrows[k]
            for m in options[k]:
                budget.tick()
                mm[e] = m
                ok = True
                for f, e1, fe in checks[k]:
                    Dc = D.fibers[I.tgt(f)]
                    if mm[fe] != Dc.compose(mm[f], D.T(f).mor_map[mm[e1]]):
                        ok = False
                        break
                if ok:
                    yield from go(k + 1)
            mm.pop(e, None)

        yield from go(0)


def section_maps(
    D: DiagramOfCats, s: Section, t: Section, *, budget: Budget | None = None
) -> Iterator[SectionMap]:
    """All families ``h_a`` with ``h_b ∘ s_e = t_e ∘ T_e(h_a)``."""
    budget = budget or Budget(what=f"section maps of {D.name}")
    I = D.index
    objs = list(I.objects)
    pos = {a: i for i, a in enumerate(objs)}
    checks: list[list] = [[] for _ in objs]
    for e in I.morphisms:
        if not I.is_identity(e):
            checks[max(pos[I.src(e)], pos[I.tgt(e)])].append(e)
    comp: dict = {}

    def go(k):
        if k == len(objs):
            yield SectionMap(s, t, dict(comp))
            return
        a = objs[k]
        Da = D.fibers[a]
        for h in Da.hom(s.on_obj[a], t.on_obj[a]):
            budget.tick()
            comp[a] = h
            ok = True
            for e in checks[k]:
                x, y = I.src(e), I.tgt(e)
                Dy = D.fibers[y]
                if Dy.compose(comp[y], s.on_mor[e]) != Dy.compose(t.on_mor[e], D.T(e).mor_map[comp[x]]):
                    ok = False
                    break
            if ok:
                yield from go(k + 1)
        comp.pop(a, None)

    yield from go(0)


def _section_category(D: DiagramOfCats, sections: list, name: str, budget: Budget) -> FinCategory:
    I = D.index
    morphisms, src, tgt = [], {}, {}
    ident = {}
    for s in sections:
        for t in sections:
            for h in section_maps(D, s, t, budget=budget):
                morphisms.append(h)
                src[h], tgt[h] = s, t
        ident[s] = SectionMap(s, s, {a: D.fibers[a].id(s.on_obj[a]) for a in I.objects})

    def compose(g: SectionMap, f: SectionMap) -> SectionMap:
        return SectionMap(
            f.src, g.tgt, {a: D.fibers[a].compose(g.components[a], f.components[a]) for a in I.objects}
        )

    return FinCategory(sections, morphisms, src, tgt, ident, compose, name=name, check=False)


def lax_limit(D: DiagramOfCats, *, max_candidates: int | None = None) -> FinCategory:
    """All sections and all maps of sections, composed componentwise.

    For an empty index this is the terminal category on the empty section.
    """
    budget = Budget(max_candidates, what=f"lax_limit({D.name})")
    secs = list(enumerate_sections(D, budget=budget))
    return _section_category(D, secs, f"Lax({D.name})", budget)


def pseudo_limit(
    D: DiagramOfCats,
    *,
    lax: FinCategory | None = None,
    with_inclusion: bool = False,
    max_candidates: int | None = None,
):
    """Full subcategory of coCartesian sections.

    With ``with_inclusion`` returns ``(P, inclusion into the lax limit)``;
    the lax limit is then built (or taken from ``lax``).
    """
    budget = Budget(max_candidates, what=f"pseudo_limit({D.name})")
    if with_inclusion or lax is not None:
        L = lax if lax is not None else lax_limit(D, max_candidates=max_candidates)
        keep = [s for s in L.objects if is_cocartesian_section(D, s)]
        P = _section_category(D, keep, f"Pseudo({D.name})", budget)
        incl = FinFunctor(P, L, {s: s for s in P.objects}, {h: h for h in P.morphisms}, name="incl")
        return (P, incl) if with_inclusion else P
    secs = list(enumerate_sections(D, cocartesian=True, budget=budget))
    return _section_category(D, secs, f"Pseudo({D.name})", budget)


def pseudo_limit_cone(D: DiagramOfCats, P: FinCategory | None = None) -> ConeOfCats:
    """Evaluation legs ``x ↦ x_a`` with comparisons given by the sections' own ``s_e``."""
    P = P if P is not None else pseudo_limit(D)
    I = D.index
    legs = {
        a: FinFunctor(
            P,
            D.fibers[a],
            {s: s.on_obj[a] for s in P.objects},
            {h: h.components[a] for h in P.morphisms},
            name=f"ev_{a}",
        )
        for a in I.objects
    }
    comparisons = {
        e: {s: s.on_mor[e] for s in P.objects} for e in I.morphisms if not I.is_identity(e)
    }
    return ConeOfCats(P, D, legs, comparisons, name=f"ev({D.name})", check=False)


# --- functoriality in the diagram --------------------------------------------------


def lax_of_map(
    M: MapOfDiagrams, *, source: FinCategory | None = None, target: FinCategory | None = None
) -> FinFunctor:
    """``x ↦ (a ↦ F_a x_a, e ↦ F_b(s_e) ∘ φ_e)`` and ``h ↦ (F_a h_a)``."""
    S, D = M.source, M.target
    I = S.index
    source = source if source is not None else lax_limit(S)
    target = target if target is not None else lax_limit(D)

    def image(s: Section) -> Section:
        on_obj = {a: M.components[a](s.on_obj[a]) for a in I.objects}
        on_mor = {}
        for e in I.morphisms:
            a, b = I.src(e), I.tgt(e)
            Db = D.fibers[b]
            on_mor[e] = Db.compose(M.components[b].mor_map[s.on_mor[e]], M.phi(e, s.on_obj[a]))
        return Section(on_obj, on_mor)

    obj_map = {s: image(s) for s in source.objects}
    mor_map = {
        h: SectionMap(
            obj_map[h.src], obj_map[h.tgt], {a: M.components[a].mor_map[h.components[a]] for a in I.objects}
        )
        for h in source.morphisms
    }
    for s, fs in obj_map.items():
        if not target.has_object(fs):
            raise AssertionError(f"lax_of_map: image of {s!r} is not a section of the target")
    for h, fh in mor_map.items():
        if not target.has_morphism(fh):
            raise AssertionError(f"lax_of_map: image of {h!r} is not a map of sections")
    return FinFunctor(source, target, obj_map, mor_map, name=f"Lax({M.name})")


def restrict_to_limit(
    M: MapOfDiagrams, *, source: FinCategory | None = None, target: FinCategory | None = None
) -> FinFunctor:
    """The restriction of ``lax_of_map`` to coCartesian sections."""
    source = source if source is not None else pseudo_limit(M.source)
    target = target if target is not None else pseudo_limit(M.target)
    F = lax_of_map(M, source=source, target=target)
    for s in source.objects:
        if not is_cocartesian_section(M.target, F(s)):
            raise AssertionError(f"restrict_to_limit: {s!r} maps outside the coCartesian sections")
    return F


def lax_const_to_functor_category(
    I: FinCategory, C: FinCategory, *, lax: FinCategory | None = None, fc: FinCategory | None = None
) -> FinFunctor:
    """The isomorphism ``Lax(const C) -> C^I`` reading a section as a functor."""
    lax = lax if lax is not None else lax_limit(constant_diagram(I, C))
    fc = fc if fc is not None else functor_category(I, C)

    def as_functor(s: Section) -> FunctorData:
        return FunctorData(
            tuple((a, s.on_obj[a]) for a in I.objects), tuple((e, s.on_mor[e]) for e in I.morphisms)
        )

    obj_map = {s: as_functor(s) for s in lax.objects}
    mor_map = {
        h: NatData(obj_map[h.src], obj_map[h.tgt], tuple((a, h.components[a]) for a in I.objects))
        for h in lax.morphisms
    }
    return isomorphism_between(lax, fc, obj_map, mor_map)


# --- the Grothendieck construction --------------------------------------------------


class GrothendieckCategory(FinCategory):
    """``∫D`` with objects ``(a, x)`` and morphisms ``(e, x, m)``, ``m: T_e x -> y``."""

    diagram: DiagramOfCats


def grothendieck(D: DiagramOfCats, *, max_candidates: int | None = None) -> tuple[GrothendieckCategory, FinFunctor]:
    budget = Budget(max_candidates, what=f"grothendieck({D.name})")
    I = D.index
    objects = [(a, x) for a in I.objects for x in D.fibers[a].objects]
    morphisms, src, tgt = [], {}, {}
    for e in I.morphisms:
        a, b = I.src(e), I.tgt(e)
        Db = D.fibers[b]
        Te = D.T(e)
        for x in D.fibers[a].objects:
            for m in Db.out_of(Te(x)):
                budget.tick()
                mor = (e, x, m)
                morphisms.append(mor)
                src[mor], tgt[mor] = (a, x), (b, Db.tgt(m))
    ident = {(a, x): (I.id(a), x, D.fibers[a].id(x)) for a, x in objects}

    def compose(g, f):
        (fe, y, n), (e, x, m) = g, f
        c = I.tgt(fe)
        return (I.compose(fe, e), x, D.fibers[c].compose(n, D.T(fe).mor_map[m]))

    total = GrothendieckCategory(objects, morphisms, src, tgt, ident, compose, name=f"∫{D.name}", check=False)
    total.diagram = D
    proj = FinFunctor(
        total, I, {o: o[0] for o in objects}, {f: f[0] for f in morphisms}, name="proj"
    )
    return total, proj


def is_cocartesian(total: GrothendieckCategory, mor) -> bool:
    """True iff the fiber part of ``mor`` is invertible."""
    if not total.has_morphism(mor):
        raise CategoryError(f"{mor!r} is not a morphism of {total.name}")
    e, _, m = mor
    b = total.diagram.index.tgt(e)
    return total.diagram.fibers[b].is_invertible(m)

