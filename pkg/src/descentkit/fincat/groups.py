"""Finite groups as multiplication tables, and homomorphisms between them."""
from __future__ import annotations

from itertools import permutations, product
from typing import Hashable, Iterable, Mapping, Sequence

from .core import FinCategory, FinFunctor

Elt = Hashable


class GroupError(ValueError):
    pass


def _cycle_name(perm: Sequence[int]) -> str:
    # 1-based cycle notation, identity is "()"
    seen = set()
    cycles = []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            seen.add(start)
            continue
        cyc = [start]
        seen.add(start)
        j = perm[start]
        while j != start:
            cyc.append(j)
            seen.add(j)
            j = perm[j]
        cycles.append("(" + " ".join(str(i + 1) for i in cyc) + ")")
    return "".join(cycles) or "()"


class Group:
    """A finite group on an ordered element list.

    ``mul`` maps ``(a, b)`` to ``a*b``. Permutation groups keep the underlying
    arrays in ``perms`` and use cycle-notation names as elements.
    """

    def __init__(
        self,
        elements: Iterable[Elt],
        mul: Mapping[tuple[Elt, Elt], Elt],
        *,
        name: str = "G",
        check: bool = True,
    ):
        self.elements: tuple = tuple(elements)
        self.name = name
        self._mul = dict(mul)
        self._index = {g: i for i, g in enumerate(self.elements)}
        if len(self._index) != len(self.elements):
            raise GroupError(f"{name}: duplicate elements")
        self.perms: dict | None = None
        ident = None
        for e in self.elements:
            if all(self._mul.get((e, g)) == g and self._mul.get((g, e)) == g for g in self.elements):
                ident = e
                break
        if ident is None:
            raise GroupError(f"{name}: no identity element")
        self.identity = ident
        self._inv: dict = {}
        for g in self.elements:
            for h in self.elements:
                if self._mul.get((g, h)) == ident and self._mul.get((h, g)) == ident:
                    self._inv[g] = h
                    break
        if check:
            self.check()

    def check(self) -> None:
        els = self.elements
        for a in els:
            if a not in self._inv:
                raise GroupError(f"{self.name}: {a!r} has no inverse")
            for b in els:
                if (a, b) not in self._mul or self._mul[a, b] not in self._index:
                    raise GroupError(f"{self.name}: product {a!r}*{b!r} undefined or outside the group")
        for a, b, c in product(els, repeat=3):
            if self._mul[self._mul[a, b], c] != self._mul[a, self._mul[b, c]]:
                raise GroupError(f"{self.name}: associativity fails on ({a!r}, {b!r}, {c!r})")

    # --- access -----------------------------------------------------------

    def mul(self, a: Elt, b: Elt) -> Elt:
        return self._mul[a, b]

    def prod(self, *xs: Elt) -> Elt:
        out = self.identity
        for x in xs:
            out = self._mul[out, x]
        return out

    def inv(self, a: Elt) -> Elt:
        return self._inv[a]

    def index(self, a: Elt) -> int:
        return self._index[a]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, a) -> bool:
        return a in self._index

    def table(self) -> dict:
        return dict(self._mul)

    def is_abelian(self) -> bool:
        return all(self._mul[a, b] == self._mul[b, a] for a in self.elements for b in self.elements)

    def generated(self, gens: Iterable[Elt]) -> list:
        """Elements of the subgroup generated by ``gens``, in group order."""
        reached = {self.identity}
        frontier = [self.identity]
        gens = list(gens)
        while frontier:
            nxt = []
            for x in frontier:
                for s in gens:
                    y = self._mul[x, s]
                    if y not in reached:
                        reached.add(y)
                        nxt.append(y)
            frontier = nxt
        return [g for g in self.elements if g in reached]

    def generators(self) -> list:
        """A small generating set, chosen greedily in element order."""
        gens: list = []
        span = {self.identity}
        for g in self.elements:
            if g not in span:
                gens.append(g)
                span = set(self.generated(gens))
        return gens

    def subgroup(self, gens: Iterable[Elt], *, name: str | None = None) -> tuple[Group, GroupHom]:
        """Subgroup generated by ``gens`` with its inclusion."""
        els = self.generated(gens)
        sub = Group(
            els,
            {(a, b): self._mul[a, b] for a in els for b in els},
            name=name or f"<{','.join(map(str, gens))}>",
            check=False,
        )
        sub.perms = None if self.perms is None else {g: self.perms[g] for g in els}
        return sub, GroupHom(sub, self, {g: g for g in els})

    def as_category(self, *, obj: Elt = "*", name: str | None = None) -> FinCategory:
        """The one-object groupoid ``BG``; composition ``g∘h = g*h``."""
        els = self.elements
        return FinCategory(
            [obj],
            els,
            {g: obj for g in els},
            {g: obj for g in els},
            {obj: self.identity},
            {(a, b): self._mul[a, b] for a in els for b in els},
            name=name or f"B{self.name}",
            check=False,
        )

    def __repr__(self) -> str:
        return f"Group({self.name!r}, order {len(self)})"

    # --- constructors -----------------------------------------------------

    @classmethod
    def trivial(cls) -> Group:
        return cls([0], {(0, 0): 0}, name="1", check=False)

    @classmethod
    def cyclic(cls, n: int) -> Group:
        if n < 1:
            raise GroupError("cyclic group needs n >= 1")
        return cls(
            range(n),
            {(a, b): (a + b) % n for a in range(n) for b in range(n)},
            name=f"Z/{n}",
            check=False,
        )

    @classmethod
    def from_permutations(cls, gens: Iterable[Sequence[int]], degree: int | None = None, *, name: str | None = None) -> Group:
        """Permutation group generated by 0-based arrays; elements are cycle strings."""
        gens = [tuple(g) for g in gens]
        if degree is None:
            degree = max((len(g) for g in gens), default=1)
        gens = [g + tuple(range(len(g), degree)) for g in gens]
        for g in gens:
            if sorted(g) != list(range(degree)):
                raise GroupError(f"not a permutation of {degree} points: {g}")
        ident = tuple(range(degree))
        reached = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for p in frontier:
                for s in gens:
                    q = tuple(p[s[i]] for i in range(degree))
                    if q not in reached:
                        reached.add(q)
                        nxt.append(q)
            frontier = nxt
        return cls._from_perm_set(reached, degree, name or "perm")

    @classmethod
    def _from_perm_set(cls, perms, degree: int, name: str) -> Group:
        ident = tuple(range(degree))
        ordered = [ident] + sorted(p for p in perms if p != ident)
        names = {p: _cycle_name(p) for p in ordered}
        by_perm = {p: names[p] for p in ordered}
        mul = {}
        for p in ordered:
            for q in ordered:
                # (p*q)(i) = p(q(i)): apply q first
                mul[names[p], names[q]] = by_perm[tuple(p[q[i]] for i in range(degree))]
        g = cls([names[p] for p in ordered], mul, name=name, check=False)
        g.perms = {names[p]: p for p in ordered}
        return g

    @classmethod
    def symmetric(cls, n: int) -> Group:
        return cls._from_perm_set(set(permutations(range(n))), n, f"S{n}")

    @classmethod
    def alternating(cls, n: int) -> Group:
        def even(p):
            inv = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
            return inv % 2 == 0

        return cls._from_perm_set({p for p in permutations(range(n)) if even(p)}, n, f"A{n}")

    @classmethod
    def dihedral(cls, n: int) -> Group:
        """Symmetries of the n-gon (order 2n)."""
        rot = tuple((i + 1) % n for i in range(n))
        ref = tuple((-i) % n for i in range(n))
        g = cls.from_permutations([rot, ref], n, name=f"D{n}")
        return g

    @classmethod
    def product(cls, G: Group, H: Group) -> Group:
        els = [(a, b) for a in G.elements for b in H.elements]
        return cls(
            els,
            {((a, b), (c, d)): (G.mul(a, c), H.mul(b, d)) for a, b in els for c, d in els},
            name=f"{G.name}x{H.name}",
            check=False,
        )


class GroupHom:
    def __init__(self, dom: Group, cod: Group, mapping: Mapping[Elt, Elt], *, check: bool = False):
        self.dom = dom
        self.cod = cod
        self.mapping = dict(mapping)
        if check:
            self.check()

    def __call__(self, g: Elt) -> Elt:
        return self.mapping[g]

    def check(self) -> None:
        for g in self.dom:
            if g not in self.mapping or self.mapping[g] not in self.cod:
                raise GroupError(f"homomorphism {self.dom.name}->{self.cod.name}: {g!r} badly mapped")
        for a in self.dom:
            for b in self.dom:
                if self.mapping[self.dom.mul(a, b)] != self.cod.mul(self.mapping[a], self.mapping[b]):
                    raise GroupError(
                        f"homomorphism {self.dom.name}->{self.cod.name} fails on ({a!r}, {b!r})"
                    )

    def is_injective(self) -> bool:
        return len(set(self.mapping.values())) == len(self.dom)

    def is_surjective(self) -> bool:
        return set(self.mapping.values()) == set(self.cod.elements)

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def image(self) -> list:
        hit = set(self.mapping.values())
        return [g for g in self.cod if g in hit]

    def then(self, other: GroupHom) -> GroupHom:
        """``other ∘ self``."""
        return GroupHom(self.dom, other.cod, {g: other(self(g)) for g in self.dom})

    def as_functor(self, dom_cat: FinCategory | None = None, cod_cat: FinCategory | None = None) -> FinFunctor:
        dom_cat = dom_cat or self.dom.as_category()
        cod_cat = cod_cat or self.cod.as_category()
        (o1,), (o2,) = dom_cat.objects, cod_cat.objects
        return FinFunctor(dom_cat, cod_cat, {o1: o2}, self.mapping)

    @classmethod
    def identity(cls, G: Group) -> GroupHom:
        return cls(G, G, {g: g for g in G})

    def __repr__(self) -> str:
        return f"GroupHom({self.dom.name} -> {self.cod.name})"


def homomorphisms(G: Group, H: Group) -> list[GroupHom]:
    """All homomorphisms ``G -> H``, ordered by generator images."""
    gens = G.generators()
    out = []
    for images in product(H.elements, repeat=len(gens)):
        m = {G.identity: H.identity}
        frontier = [G.identity]
        ok = True
        while frontier and ok:
            nxt = []
            for x in frontier:
                for s, t in zip(gens, images):
                    y = G.mul(x, s)
                    val = H.mul(m[x], t)
                    if y in m:
                        if m[y] != val:
                            ok = False
                            break
                    else:
                        m[y] = val
                        nxt.append(y)
                if not ok:
                    break
            frontier = nxt
        if not ok:
            continue
        if all(m[G.mul(a, b)] == H.mul(m[a], m[b]) for a in G for b in G):
            out.append(GroupHom(G, H, m))
    return out


def automorphisms(G: Group) -> list[GroupHom]:
    return [f for f in homomorphisms(G, G) if f.is_isomorphism()]


def inversion(G: Group) -> GroupHom:
    if not G.is_abelian():
        raise GroupError("inversion is an automorphism only for abelian groups")
    return GroupHom(G, G, {g: G.inv(g) for g in G})


def conjugation(G: Group, c: Elt) -> GroupHom:
    ci = G.inv(c)
    return GroupHom(G, G, {g: G.prod(c, g, ci) for g in G})


def aut_power_is_identity(f: GroupHom, n: int) -> bool:
    m = {g: g for g in f.dom}
    for _ in range(n):
        m = {g: f(v) for g, v in m.items()}
    return all(m[g] == g for g in f.dom)


__all__ = [
    "Group",
    "GroupError",
    "GroupHom",
    "automorphisms",
    "aut_power_is_identity",
    "conjugation",
    "homomorphisms",
    "inversion",
]
