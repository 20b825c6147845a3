"""Limits and colimits in finite categories by exhaustive cone search."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .build import opposite
from .core import Budget, CategoryError, FinCategory, FinFunctor, Mor, Obj


class MissingLimitError(LookupError):
    pass


@dataclass
class LimitCone:
    category: FinCategory
    diagram: FinFunctor
    apex: Obj
    legs: dict

    def factor(self, apex: Obj, legs: dict) -> Mor:
        """The unique morphism ``apex -> self.apex`` through which ``legs`` factor."""
        C = self.category
        J = self.diagram.dom
        hits = [
            u for u in C.hom(apex, self.apex)
            if all(C.compose(self.legs[j], u) == legs[j] for j in J.objects)
        ]
        if len(hits) != 1:
            raise CategoryError(f"cone at {apex!r} factors {len(hits)} times through the limit")
        return hits[0]


@dataclass
class ColimitCocone:
    category: FinCategory
    diagram: FinFunctor
    apex: Obj
    legs: dict

    def factor(self, apex: Obj, legs: dict) -> Mor:
        """The unique morphism ``self.apex -> apex`` under which ``legs`` factor."""
        C = self.category
        J = self.diagram.dom
        hits = [
            u for u in C.hom(self.apex, apex)
            if all(C.compose(u, self.legs[j]) == legs[j] for j in J.objects)
        ]
        if len(hits) != 1:
            raise CategoryError(f"cocone at {apex!r} factors {len(hits)} times through the colimit")
        return hits[0]


def cones(C: FinCategory, f: FinFunctor, apex: Obj, budget: Budget | None = None) -> Iterator[dict]:
    """All cones over ``f`` with the given apex."""
    budget = budget or Budget(what="cone enumeration")
    J = f.dom
    objs = list(J.objects)
    pos = {j: i for i, j in enumerate(objs)}
    checks: list[list] = [[] for _ in objs]
    for u in J.morphisms:
        checks[max(pos[J.src(u)], pos[J.tgt(u)])].append(u)
    legs: dict = {}

    def go(k):
        if k == len(objs):
            yield dict(legs)
            return
        j = objs[k]
        for c in C.hom(apex, f(j)):
            budget.tick()
            legs[j] = c
            if all(C.compose(f.mor_map[u], legs[J.src(u)]) == legs[J.tgt(u)] for u in checks[k]):
                yield from go(k + 1)
        legs.pop(j, None)

    yield from go(0)


def limit(C: FinCategory, J: FinCategory, f: FinFunctor, *, max_candidates: int | None = None) -> LimitCone | None:
    """A limiting cone over ``f: J -> C``, or ``None`` if none exists.

    Candidates are tried in object order, so the chosen representative is
    deterministic.
    """
    if f.dom is not J and not f.dom.same_tables(J):
        raise CategoryError("limit: diagram domain does not match J")
    budget = Budget(max_candidates, what="limit search")
    all_cones = {z: list(cones(C, f, z, budget)) for z in C.objects}
    for z in C.objects:
        for legs in all_cones[z]:
            if _is_universal(C, J, z, legs, all_cones, budget):
                return LimitCone(C, f, z, legs)
    return None


def _is_universal(C, J, z, legs, all_cones, budget) -> bool:
    for z2, cs in all_cones.items():
        homs = C.hom(z2, z)
        for legs2 in cs:
            hits = 0
            for u in homs:
                budget.tick()
                if all(C.compose(legs[j], u) == legs2[j] for j in J.objects):
                    hits += 1
                    if hits > 1:
                        return False
            if hits != 1:
                return False
    return True


def colimit(C: FinCategory, J: FinCategory, f: FinFunctor, *, max_candidates: int | None = None) -> ColimitCocone | None:
    """A colimiting cocone, computed as a limit in the opposite category."""
    Cop, Jop = opposite(C), opposite(J)
    fop = FinFunctor(Jop, Cop, f.obj_map, f.mor_map, name=f"{f.name}^op")
    lim = limit(Cop, Jop, fop, max_candidates=max_candidates)
    if lim is None:
        return None
    return ColimitCocone(C, f, lim.apex, lim.legs)


def require_limit(C, J, f, *, what: str = "diagram", max_candidates: int | None = None) -> LimitCone:
    lim = limit(C, J, f, max_candidates=max_candidates)
    if lim is None:
        raise MissingLimitError(f"missing limit: {what} has no limit in {C.name}")
    return lim


def require_colimit(C, J, f, *, what: str = "diagram", max_candidates: int | None = None) -> ColimitCocone:
    colim = colimit(C, J, f, max_candidates=max_candidates)
    if colim is None:
        raise MissingLimitError(f"missing colimit: {what} has no colimit in {C.name}")
    return colim
