"""Conjugate objects: brute force against the descent-datum formula.

Two objects of the apex are conjugate when every leg makes them isomorphic,
with no compatibility asked of the isomorphisms. When the comparison functor
is an equivalence their classes are counted by the components of the
pseudolimit of the automorphism groups ``BAut F_a(x)``.

Components are computed on 1-groupoids directly. A limit of 1-truncated
objects is 1-truncated, so nothing is lost to truncation here.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .fincat.core import Budget, FinCategory, FinFunctor, Obj
from .fincat.search import _classes, find_iso, is_equivalence_functor, iso_classes
from .groth import ConeOfCats, DiagramOfCats, Section, enumerate_sections, section_failures
from .descent import comparison_functor

UNVERIFIED = "formula hypothesis unverified"


class ConjError(ValueError):
    pass


@dataclass
class ConjProblem:
    cone: ConeOfCats
    base: Obj

    def __post_init__(self):
        if not self.cone.apex.has_object(self.base):
            raise ConjError(f"unknown object {self.base!r} in {self.cone.apex.name}")


@dataclass
class ConjResult:
    count: int
    representatives: list
    classes: list = field(default_factory=list)
    warnings: list = field(default_factory=list)


def conjugates_bruteforce(p: ConjProblem) -> ConjResult:
    """Isomorphism classes ``[y]`` with ``F_a y ≅ F_a x`` for every ``a``."""
    cone, x = p.cone, p.base
    C = cone.apex
    D = cone.diagram
    legs = [(D.fibers[a], cone.legs[a]) for a in D.index.objects]

    def conjugate(y):
        return all(find_iso(Da, F(y), F(x)) is not None for Da, F in legs)

    classes = [cls for cls in iso_classes(C) if conjugate(cls[0])]
    classes.sort(key=lambda cls: C.obj_index(cls[0]))
    return ConjResult(len(classes), [cls[0] for cls in classes], classes)


def baut_diagram(p: ConjProblem) -> DiagramOfCats:
    """Fibers ``BAut(F_a x)``; transport ``g ↦ φ ∘ T_e(g) ∘ φ^{-1}``."""
    cone, x = p.cone, p.base
    D = cone.diagram
    I = D.index
    fibers: dict = {}
    for a in I.objects:
        Da = D.fibers[a]
        fx = cone.legs[a](x)
        auts = [g for g in Da.hom(fx, fx) if Da.is_invertible(g)]
        fibers[a] = FinCategory(
            ["*"],
            auts,
            {g: "*" for g in auts},
            {g: "*" for g in auts},
            {"*": Da.id(fx)},
            {(g, h): Da.compose(g, h) for g in auts for h in auts},
            name=f"BAut({fx})",
            check=False,
        )
    transport = {}
    for e in I.morphisms:
        a, b = I.src(e), I.tgt(e)
        Db = D.fibers[b]
        phi = cone.phi(e, x)
        phi_inv = Db.inverse(phi)
        Te = D.T(e)
        mm = {g: Db.comp(phi, Te.mor_map[g], phi_inv) for g in fibers[a].morphisms}
        for g, h in mm.items():
            if not fibers[b].has_morphism(h):
                raise AssertionError(f"transport along {e!r} sends {g!r} outside Aut")
        transport[e] = FinFunctor(fibers[a], fibers[b], {"*": "*"}, mm, name=f"Ad_{e}")
    out = DiagramOfCats(I, fibers, transport, name=f"BAut({x})", check=False)
    try:
        out.check()
    except ValueError as exc:
        raise AssertionError(f"induced automorphism diagram is not strict: {exc}") from None
    return out


def gauge_move(D: DiagramOfCats, s: Section, a: Obj, h) -> Section:
    """Act by the iso ``h: s_a -> x'_a`` at the single index object ``a``."""
    I = D.index
    Da = D.fibers[a]
    h_inv = Da.inverse(h)
    if h_inv is None:
        raise ConjError(f"gauge component {h!r} is not invertible")
    on_obj = dict(s.on_obj)
    on_obj[a] = Da.tgt(h)
    on_mor = {}
    for e, m in s.on_mor.items():
        src, tgt = I.src(e), I.tgt(e)
        Dt = D.fibers[tgt]
        if I.is_identity(e):
            on_mor[e] = Dt.id(on_obj[tgt])
            continue
        if src == a:
            m = Dt.compose(m, D.T(e).mor_map[h_inv])
        if tgt == a:
            m = Dt.compose(h, m)
        on_mor[e] = m
    return Section(on_obj, on_mor)


@dataclass
class Pi0Result:
    count: int
    representatives: list
    classes: list


def pi0_descent(D: DiagramOfCats, *, max_candidates: int | None = None) -> Pi0Result:
    """Gauge orbits of coCartesian sections of a groupoid-valued diagram.

    Orbits are found by union-find over single-coordinate gauge moves; each
    class is represented by its first section in canonical enumeration order.
    """
    for a, Da in D.fibers.items():
        if not Da.is_groupoid():
            raise ConjError(f"fiber at {a!r} is not a groupoid")
    budget = Budget(max_candidates, what=f"pi0_descent({D.name})")
    secs = list(enumerate_sections(D, cocartesian=True, budget=budget))
    known = set(secs)
    links = []
    for s in secs:
        for a in D.index.objects:
            Da = D.fibers[a]
            for h in Da.out_of(s.on_obj[a]):
                budget.tick()
                t = gauge_move(D, s, a, h)
                if t not in known:
                    raise AssertionError(f"gauge move at {a!r} broke the cocycle law: {section_failures(D, t)}")
                links.append((s, t))
    classes = _classes(secs, links)
    order = {s: i for i, s in enumerate(secs)}
    classes = [sorted(c, key=order.__getitem__) for c in classes]
    classes.sort(key=lambda c: order[c[0]])
    return Pi0Result(len(classes), [c[0] for c in classes], classes)


def datum_of(s: Section) -> dict:
    """A section of a ``BAut`` diagram read as a descent datum ``e ↦ g_e``."""
    return dict(s.on_mor)


def conjugates_formula(p: ConjProblem, *, verify: bool = True, max_candidates: int | None = None) -> ConjResult:
    """Count via ``pi0_descent(baut_diagram(p))``.

    ``verify`` checks that the comparison functor is an equivalence; when that
    fails (or is skipped) the result carries the unverified-hypothesis warning.
    """
    warnings = []
    if verify:
        ok, reason = is_equivalence_functor(comparison_functor(p.cone))
        if not ok:
            warnings.append(f"{UNVERIFIED}: comparison functor {reason}")
    else:
        warnings.append(UNVERIFIED)
    res = pi0_descent(baut_diagram(p), max_candidates=max_candidates)
    return ConjResult(res.count, [datum_of(s) for s in res.representatives], res.classes, warnings)


@dataclass
class CrossCheck:
    ok: bool
    brute: ConjResult
    formula: ConjResult

    def __bool__(self) -> bool:
        return self.ok


def crosscheck(p: ConjProblem, *, verify: bool = True) -> CrossCheck:
    brute = conjugates_bruteforce(p)
    formula = conjugates_formula(p, verify=verify)
    return CrossCheck(brute.count == formula.count, brute, formula)


def comparison_is_equivalence(cone: ConeOfCats) -> tuple[bool, str | None]:
    return is_equivalence_functor(comparison_functor(cone))

