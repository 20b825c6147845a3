"""Constructors for common finite categories and the raw-table validator."""
from __future__ import annotations

from itertools import product
from typing import Any, Callable, Hashable, Iterable, Mapping, Sequence

from .core import CategoryError, FinCategory, FinFunctor, Obj


def validate_category(raw: Mapping[str, Any], *, name: str | None = None) -> FinCategory:
    """Build a law-checked category from the JSON-style table form.

    ``raw`` has keys ``objects``, ``morphisms`` (each ``{"id", "src", "tgt"}``),
    ``identity`` and ``compose`` (each ``{"g", "f", "gf"}``). Composites with an
    identity may be omitted; every other composable pair must be listed.
    """
    name = name or raw.get("name") or "C"
    objects = list(raw.get("objects", []))
    if len(set(objects)) != len(objects):
        raise CategoryError(f"{name}: duplicate object ids")
    declared = set(objects)
    morphisms, src, tgt = [], {}, {}
    for entry in raw.get("morphisms", []):
        f = entry["id"]
        if f in src:
            raise CategoryError(f"{name}: duplicate morphism id {f!r}")
        for end in ("src", "tgt"):
            if entry[end] not in declared:
                raise CategoryError(f"{name}: morphism {f!r} has undeclared {end} {entry[end]!r}")
        morphisms.append(f)
        src[f], tgt[f] = entry["src"], entry["tgt"]
    identity = dict(raw.get("identity", {}))
    for x in objects:
        if x not in identity:
            raise CategoryError(f"{name}: object {x!r} has no identity")
        i = identity[x]
        if i not in src:
            raise CategoryError(f"{name}: identity {i!r} of {x!r} is not a declared morphism")
        if src[i] != x or tgt[i] != x:
            raise CategoryError(f"{name}: identity {i!r} of {x!r} is not an endomorphism of {x!r}")
    table: dict = {}
    for entry in raw.get("compose", []):
        g, f, gf = entry["g"], entry["f"], entry["gf"]
        for m in (g, f, gf):
            if m not in src:
                raise CategoryError(f"{name}: compose entry references undeclared morphism {m!r}")
        if tgt[f] != src[g]:
            raise CategoryError(f"{name}: compose entry {g!r} ∘ {f!r} but they are not composable")
        if (g, f) in table and table[g, f] != gf:
            raise CategoryError(f"{name}: conflicting compose entries for {g!r} ∘ {f!r}")
        table[g, f] = gf
    for f in morphisms:
        table.setdefault((identity[tgt[f]], f), f)
        table.setdefault((f, identity[src[f]]), f)
    for f in morphisms:
        for g in morphisms:
            if tgt[f] == src[g] and (g, f) not in table:
                raise CategoryError(f"{name}: composition not total: {g!r} ∘ {f!r} undefined")
    return FinCategory(objects, morphisms, src, tgt, identity, table, name=name, check=True)


def category_to_raw(C: FinCategory) -> dict:
    return {
        "objects": list(C.objects),
        "morphisms": [{"id": f, "src": C.src(f), "tgt": C.tgt(f)} for f in C.morphisms],
        "identity": {x: C.id(x) for x in C.objects},
        "compose": [{"g": g, "f": f, "gf": C.compose(g, f)} for g, f in C.composable_pairs()],
    }


def terminal_category(obj: Obj = "*", *, name: str = "1") -> FinCategory:
    i = f"id_{obj}"
    return FinCategory([obj], [i], {i: obj}, {i: obj}, {obj: i}, {(i, i): i}, name=name, check=False)


def empty_category(name: str = "0") -> FinCategory:
    return FinCategory([], [], {}, {}, {}, {}, name=name, check=False)


def discrete_category(objects: Iterable[Obj], *, name: str = "Disc") -> FinCategory:
    objs = list(objects)
    ids = {x: f"id_{x}" for x in objs}
    return FinCategory(
        objs,
        [ids[x] for x in objs],
        {ids[x]: x for x in objs},
        {ids[x]: x for x in objs},
        ids,
        {(ids[x], ids[x]): ids[x] for x in objs},
        name=name,
        check=False,
    )


def indiscrete_category(objects: Iterable[Obj], *, name: str = "Ind") -> FinCategory:
    """Exactly one morphism ``(x, y)`` between any two objects."""
    objs = list(objects)
    mors = [(x, y) for x in objs for y in objs]
    return FinCategory(
        objs,
        mors,
        {m: m[0] for m in mors},
        {m: m[1] for m in mors},
        {x: (x, x) for x in objs},
        lambda g, f: (f[0], g[1]),
        name=name,
        check=False,
    )


def poset_category(
    elements: Sequence[Obj], leq: Callable[[Obj, Obj], bool], *, name: str = "P"
) -> FinCategory:
    """Thin category with a morphism ``(x, y)`` whenever ``x <= y``."""
    els = list(elements)
    mors = [(x, y) for x in els for y in els if leq(x, y)]
    rel = set(mors)
    for x in els:
        if (x, x) not in rel:
            raise CategoryError(f"{name}: relation is not reflexive at {x!r}")
    table = {}
    for (x, y) in mors:
        for (y2, z) in mors:
            if y2 == y:
                if (x, z) not in rel:
                    raise CategoryError(f"{name}: relation is not transitive at {x!r} <= {y!r} <= {z!r}")
                table[(y, z), (x, y)] = (x, z)
    for x in els:
        for y in els:
            if x != y and (x, y) in rel and (y, x) in rel:
                raise CategoryError(f"{name}: relation is not antisymmetric at {x!r}, {y!r}")
    return FinCategory(
        els,
        mors,
        {m: m[0] for m in mors},
        {m: m[1] for m in mors},
        {x: (x, x) for x in els},
        table,
        name=name,
        check=False,
    )


def arrow_category(name: str = "[1]") -> FinCategory:
    """The walking arrow ``0 -> 1``."""
    return poset_category([0, 1], lambda a, b: a <= b, name=name)


def chain_category(n: int, *, descending: bool = False, name: str | None = None) -> FinCategory:
    """The ordinal ``0 < 1 < ... < n``; ``descending`` reverses the arrows."""
    if descending:
        return poset_category(list(range(n + 1)), lambda a, b: a >= b, name=name or f"[{n}]^op")
    return poset_category(list(range(n + 1)), lambda a, b: a <= b, name=name or f"[{n}]")


def boolean_lattice(n: int, *, name: str | None = None) -> FinCategory:
    """Subsets of ``{0..n-1}`` ordered by inclusion; objects are bitmasks."""
    return poset_category(list(range(2**n)), lambda a, b: a & b == a, name=name or f"2^{n}")


def lattice_from_sets(sets: Iterable[frozenset], *, name: str = "L") -> FinCategory:
    """Poset of the given sets under inclusion (objects are sorted tuples)."""
    keys = sorted({tuple(sorted(s)) for s in sets}, key=lambda t: (len(t), t))
    return poset_category(keys, lambda a, b: set(a) <= set(b), name=name)


def path_category(
    vertices: Sequence[Obj], edges: Sequence[tuple[Hashable, Obj, Obj]], *, name: str = "Path"
) -> FinCategory:
    """Free category on an acyclic graph; morphisms are tuples of edge names.

    The identity at ``v`` is ``(None, v)``.
    """
    edge_src = {e: s for e, s, _ in edges}
    edge_tgt = {e: t for e, _, t in edges}
    paths: list[tuple] = []
    src, tgt = {}, {}
    for v in vertices:
        p = (None, v)
        paths.append(p)
        src[p] = tgt[p] = v
    frontier = [(e,) for e, _, _ in edges]
    seen = 0
    while frontier:
        seen += 1
        if seen > len(edges) + 1:
            raise CategoryError(f"{name}: graph has a cycle; free category is infinite")
        nxt = []
        for p in frontier:
            paths.append(p)
            src[p], tgt[p] = edge_src[p[0]], edge_tgt[p[-1]]
            for e, s, _ in edges:
                if s == tgt[p]:
                    nxt.append(p + (e,))
        frontier = nxt

    def compose(g, f):
        if g[0] is None:
            return f
        if f[0] is None:
            return g
        return f + g

    return FinCategory(
        vertices, paths, src, tgt, {v: (None, v) for v in vertices}, compose, name=name, check=False
    )


def transformation_monoid(maps: Iterable[Sequence[int]], degree: int, *, name: str = "M") -> FinCategory:
    """One-object category of self-maps of ``{0..degree-1}`` generated by ``maps``."""
    ident = tuple(range(degree))
    gens = [tuple(m) for m in maps]
    reached = [ident]
    seen = {ident}
    i = 0
    while i < len(reached):
        p = reached[i]
        i += 1
        for s in gens:
            q = tuple(s[p[k]] for k in range(degree))
            if q not in seen:
                seen.add(q)
                reached.append(q)
    els = [ident] + sorted(p for p in reached if p != ident)
    table = {(g, f): tuple(g[f[k]] for k in range(degree)) for g in els for f in els}
    return FinCategory(
        ["*"], els, {m: "*" for m in els}, {m: "*" for m in els}, {"*": ident}, table, name=name, check=False
    )


def product_category(A: FinCategory, B: FinCategory, *, name: str | None = None) -> FinCategory:
    """``A × B`` with objects ``(a, b)`` and morphisms ``(f, g)``."""
    objs = [(a, b) for a in A.objects for b in B.objects]
    mors = [(f, g) for f in A.morphisms for g in B.morphisms]
    return FinCategory(
        objs,
        mors,
        {(f, g): (A.src(f), B.src(g)) for f, g in mors},
        {(f, g): (A.tgt(f), B.tgt(g)) for f, g in mors},
        {(a, b): (A.id(a), B.id(b)) for a, b in objs},
        lambda h, k: (A.compose(h[0], k[0]), B.compose(h[1], k[1])),
        name=name or f"{A.name}x{B.name}",
        check=False,
    )


def opposite(C: FinCategory, *, name: str | None = None) -> FinCategory:
    """Same ids with endpoints swapped and composition transposed."""
    if C._table is not None:
        comp: Any = {(f, g): gf for (g, f), gf in C._table.items()}
    else:
        comp = lambda g, f: C.compose(f, g)  # noqa: E731
    op_name = name or (C.name[:-3] if C.name.endswith("^op") else f"{C.name}^op")
    return FinCategory(
        C.objects,
        C.morphisms,
        {f: C.tgt(f) for f in C.morphisms},
        {f: C.src(f) for f in C.morphisms},
        {x: C.id(x) for x in C.objects},
        comp,
        name=op_name,
        check=False,
    )


def constant_functor(I: FinCategory, C: FinCategory, x: Obj) -> FinFunctor:
    return FinFunctor(I, C, {a: x for a in I.objects}, {e: C.id(x) for e in I.morphisms}, name=f"const_{x}")


def functor_from_tables(
    dom: FinCategory, cod: FinCategory, obj_map: Mapping, mor_map: Mapping, *, name: str = "F"
) -> FinFunctor:
    F = FinFunctor(dom, cod, obj_map, mor_map, name=name)
    F.check()
    return F


def all_functions(domain: Sequence, codomain: Sequence):
    for images in product(codomain, repeat=len(domain)):
        yield dict(zip(domain, images))
