"""Finite categories, functors, natural transformations and adjunctions.

Everything here is strict: a category is a finite table, a functor is a pair of
dictionaries, and equality of morphisms is equality of ids.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping

Obj = Hashable
Mor = Hashable

DEFAULT_MAX_CANDIDATES = 10**6
ENV_MAX_CANDIDATES = "DESCENTKIT_MAX_CANDIDATES"


class CategoryError(ValueError):
    pass


class FunctorError(ValueError):
    pass


class SizeGuardError(RuntimeError):
    pass


def default_max_candidates() -> int:
    raw = os.environ.get(ENV_MAX_CANDIDATES)
    if raw:
        return int(raw)
    return DEFAULT_MAX_CANDIDATES


class Budget:
    """Counts enumerated candidates and aborts past a fixed bound."""

    def __init__(self, limit: int | None = None, what: str = "enumeration"):
        self.limit = default_max_candidates() if limit is None else int(limit)
        self.what = what
        self.used = 0

    def tick(self, n: int = 1) -> None:
        self.used += n
        if self.used > self.limit:
            raise SizeGuardError(
                f"{self.what}: more than {self.limit} candidates "
                f"(raise the bound with --max-candidates or ${ENV_MAX_CANDIDATES})"
            )


class FinCategory:
    """A finite category given by explicit tables.

    ``compose`` is either a mapping ``(g, f) -> g∘f`` over all composable pairs or
    a callable computing the same value; constructed categories (lax limits,
    functor categories) use the callable form to avoid materialising tables
    whose size is cubic in the number of objects.
    """

    def __init__(
        self,
        objects: Iterable[Obj],
        morphisms: Iterable[Mor],
        src: Mapping[Mor, Obj],
        tgt: Mapping[Mor, Obj],
        identity: Mapping[Obj, Mor],
        compose: Mapping[tuple[Mor, Mor], Mor] | Callable[[Mor, Mor], Mor],
        *,
        name: str | None = None,
        check: bool = True,
    ):
        self.objects: tuple = tuple(objects)
        self.morphisms: tuple = tuple(morphisms)
        self.name = name or "C"
        self._src = dict(src)
        self._tgt = dict(tgt)
        self._id = dict(identity)
        if callable(compose):
            self._table: dict | None = None
            self._compose_fn = compose
        else:
            self._table = dict(compose)
            self._compose_fn = None
        self._obj_index = {x: i for i, x in enumerate(self.objects)}
        self._mor_index = {f: i for i, f in enumerate(self.morphisms)}
        if len(self._obj_index) != len(self.objects):
            raise CategoryError(f"{self.name}: duplicate object ids")
        if len(self._mor_index) != len(self.morphisms):
            raise CategoryError(f"{self.name}: duplicate morphism ids")
        self._hom: dict[tuple[Obj, Obj], list[Mor]] = {}
        self._out: dict[Obj, list[Mor]] = {x: [] for x in self.objects}
        self._into: dict[Obj, list[Mor]] = {x: [] for x in self.objects}
        for f in self.morphisms:
            if f not in self._src or f not in self._tgt:
                raise CategoryError(f"{self.name}: morphism {f!r} lacks source or target")
            a, b = self._src[f], self._tgt[f]
            if a not in self._obj_index or b not in self._obj_index:
                raise CategoryError(
                    f"{self.name}: morphism {f!r} has undeclared endpoint ({a!r} -> {b!r})"
                )
            self._hom.setdefault((a, b), []).append(f)
            self._out[a].append(f)
            self._into[b].append(f)
        self._inverse: dict[Mor, Mor | None] = {}
        if check:
            self.check()

    # --- basic access -----------------------------------------------------

    def src(self, f: Mor) -> Obj:
        return self._src[f]

    def tgt(self, f: Mor) -> Obj:
        return self._tgt[f]

    def id(self, x: Obj) -> Mor:
        return self._id[x]

    def hom(self, x: Obj, y: Obj) -> tuple:
        return tuple(self._hom.get((x, y), ()))

    def out_of(self, x: Obj) -> tuple:
        return tuple(self._out[x])

    def into(self, x: Obj) -> tuple:
        return tuple(self._into[x])

    def has_object(self, x: Obj) -> bool:
        return x in self._obj_index

    def has_morphism(self, f: Mor) -> bool:
        return f in self._mor_index

    def obj_index(self, x: Obj) -> int:
        return self._obj_index[x]

    def mor_index(self, f: Mor) -> int:
        return self._mor_index[f]

    def is_identity(self, f: Mor) -> bool:
        return self._id.get(self._src[f]) == f

    def compose(self, g: Mor, f: Mor) -> Mor:
        """Return ``g∘f`` (``f`` first)."""
        if self._tgt[f] != self._src[g]:
            raise CategoryError(f"{self.name}: {g!r} ∘ {f!r} is not composable")
        if self._table is not None:
            try:
                return self._table[g, f]
            except KeyError:
                raise CategoryError(
                    f"{self.name}: composition not total: {g!r} ∘ {f!r} undefined"
                ) from None
        return self._compose_fn(g, f)

    def comp(self, *fs: Mor) -> Mor:
        """Compose right to left: ``comp(h, g, f) == h∘g∘f``."""
        if not fs:
            raise ValueError("comp() needs at least one morphism")
        out = fs[-1]
        for g in reversed(fs[:-1]):
            out = self.compose(g, out)
        return out

    def composable_pairs(self) -> Iterator[tuple[Mor, Mor]]:
        for f in self.morphisms:
            for g in self._out[self._tgt[f]]:
                yield g, f

    def compose_table(self) -> dict:
        if self._table is not None:
            return dict(self._table)
        return {(g, f): self._compose_fn(g, f) for g, f in self.composable_pairs()}

    # --- invertibility ----------------------------------------------------

    def inverse(self, f: Mor) -> Mor | None:
        if f in self._inverse:
            return self._inverse[f]
        a, b = self._src[f], self._tgt[f]
        found = None
        ida, idb = self._id[a], self._id[b]
        for g in self._hom.get((b, a), ()):
            if self.compose(g, f) == ida and self.compose(f, g) == idb:
                found = g
                break
        self._inverse[f] = found
        if found is not None:
            self._inverse[found] = f
        return found

    def is_invertible(self, f: Mor) -> bool:
        return self.inverse(f) is not None

    def is_groupoid(self) -> bool:
        return all(self.is_invertible(f) for f in self.morphisms)

    # --- laws -------------------------------------------------------------

    def check(self, *, associativity: bool = True) -> None:
        """Raise ``CategoryError`` naming the first violated law."""
        for x in self.objects:
            if x not in self._id:
                raise CategoryError(f"{self.name}: object {x!r} has no identity")
            i = self._id[x]
            if i not in self._mor_index:
                raise CategoryError(f"{self.name}: identity of {x!r} is undeclared morphism {i!r}")
            if self._src[i] != x or self._tgt[i] != x:
                raise CategoryError(f"{self.name}: identity {i!r} of {x!r} is not an endomorphism of {x!r}")
        if self._table is not None:
            for (g, f), gf in self._table.items():
                for m in (g, f, gf):
                    if m not in self._mor_index:
                        raise CategoryError(f"{self.name}: compose table references undeclared morphism {m!r}")
                if self._tgt[f] != self._src[g]:
                    raise CategoryError(
                        f"{self.name}: compose table defines {g!r} ∘ {f!r} but they are not composable"
                    )
        for g, f in self.composable_pairs():
            gf = self.compose(g, f)
            if self._src.get(gf) != self._src[f] or self._tgt.get(gf) != self._tgt[g]:
                raise CategoryError(
                    f"{self.name}: {g!r} ∘ {f!r} = {gf!r} has wrong endpoints"
                )
        for f in self.morphisms:
            if self.compose(self._id[self._tgt[f]], f) != f:
                raise CategoryError(f"{self.name}: identity law fails: id ∘ {f!r} != {f!r}")
            if self.compose(f, self._id[self._src[f]]) != f:
                raise CategoryError(f"{self.name}: identity law fails: {f!r} ∘ id != {f!r}")
        if associativity:
            for g, f in self.composable_pairs():
                gf = self.compose(g, f)
                for h in self._out[self._tgt[g]]:
                    if self.compose(h, gf) != self.compose(self.compose(h, g), f):
                        raise CategoryError(
                            f"{self.name}: associativity fails on ({h!r}, {g!r}, {f!r})"
                        )

    def same_tables(self, other: FinCategory) -> bool:
        return (
            self.objects == other.objects
            and self.morphisms == other.morphisms
            and self._src == other._src
            and self._tgt == other._tgt
            and self._id == other._id
            and self.compose_table() == other.compose_table()
        )

    def __repr__(self) -> str:
        return f"FinCategory({self.name!r}, {len(self.objects)} objects, {len(self.morphisms)} morphisms)"


def _same_category(a: FinCategory, b: FinCategory) -> bool:
    return a is b or a.same_tables(b)


class FinFunctor:
    def __init__(
        self,
        dom: FinCategory,
        cod: FinCategory,
        obj_map: Mapping[Obj, Obj],
        mor_map: Mapping[Mor, Mor],
        *,
        name: str | None = None,
        check: bool = False,
    ):
        self.dom = dom
        self.cod = cod
        self.obj_map = dict(obj_map)
        self.mor_map = dict(mor_map)
        self.name = name or "F"
        if check:
            self.check()

    def __call__(self, x: Obj) -> Obj:
        return self.obj_map[x]

    def on_mor(self, f: Mor) -> Mor:
        return self.mor_map[f]

    def check(self, *, compositions: bool = True) -> None:
        dom, cod = self.dom, self.cod
        for x in dom.objects:
            if x not in self.obj_map:
                raise FunctorError(f"{self.name}: object {x!r} is not mapped")
            if not cod.has_object(self.obj_map[x]):
                raise FunctorError(f"{self.name}: {x!r} maps to unknown object {self.obj_map[x]!r}")
        for f in dom.morphisms:
            if f not in self.mor_map:
                raise FunctorError(f"{self.name}: morphism {f!r} is not mapped")
            Ff = self.mor_map[f]
            if not cod.has_morphism(Ff):
                raise FunctorError(f"{self.name}: {f!r} maps to unknown morphism {Ff!r}")
            if cod.src(Ff) != self.obj_map[dom.src(f)] or cod.tgt(Ff) != self.obj_map[dom.tgt(f)]:
                raise FunctorError(f"{self.name}: {f!r} -> {Ff!r} does not preserve endpoints")
        for x in dom.objects:
            if self.mor_map[dom.id(x)] != cod.id(self.obj_map[x]):
                raise FunctorError(f"{self.name}: identity of {x!r} not preserved")
        if compositions:
            for g, f in dom.composable_pairs():
                if self.mor_map[dom.compose(g, f)] != cod.compose(self.mor_map[g], self.mor_map[f]):
                    raise FunctorError(
                        f"{self.name}: composition not preserved on ({g!r}, {f!r})"
                    )

    def same_as(self, other: FinFunctor) -> bool:
        return self.obj_map == other.obj_map and self.mor_map == other.mor_map

    def __repr__(self) -> str:
        return f"FinFunctor({self.name!r}: {self.dom.name} -> {self.cod.name})"


def identity_functor(C: FinCategory) -> FinFunctor:
    return FinFunctor(
        C, C, {x: x for x in C.objects}, {f: f for f in C.morphisms}, name=f"Id_{C.name}"
    )


def compose_functors(G: FinFunctor, F: FinFunctor, *, name: str | None = None) -> FinFunctor:
    """``G∘F``."""
    if not _same_category(F.cod, G.dom):
        raise FunctorError(f"cannot compose {G.name} ∘ {F.name}: codomain/domain mismatch")
    return FinFunctor(
        F.dom,
        G.cod,
        {x: G.obj_map[y] for x, y in F.obj_map.items()},
        {f: G.mor_map[g] for f, g in F.mor_map.items()},
        name=name or f"{G.name}∘{F.name}",
    )


def opposite_functor(F: FinFunctor, dom_op: FinCategory, cod_op: FinCategory) -> FinFunctor:
    return FinFunctor(dom_op, cod_op, F.obj_map, F.mor_map, name=f"{F.name}^op")


class NatTrans:
    """A natural transformation ``src ⇒ tgt`` with components in the codomain."""

    def __init__(
        self,
        src: FinFunctor,
        tgt: FinFunctor,
        components: Mapping[Obj, Mor],
        *,
        name: str | None = None,
        check: bool = False,
    ):
        self.src = src
        self.tgt = tgt
        self.components = dict(components)
        self.name = name or "α"
        if check:
            self.check()

    def __getitem__(self, x: Obj) -> Mor:
        return self.components[x]

    def failures(self) -> list[str]:
        out: list[str] = []
        F, G = self.src, self.tgt
        C, D = F.dom, F.cod
        for x in C.objects:
            if x not in self.components:
                out.append(f"{self.name}: missing component at {x!r}")
                continue
            c = self.components[x]
            if not D.has_morphism(c) or D.src(c) != F(x) or D.tgt(c) != G(x):
                out.append(f"{self.name}: component at {x!r} is not a morphism {F(x)!r} -> {G(x)!r}")
        if out:
            return out
        for f in C.morphisms:
            a, b = C.src(f), C.tgt(f)
            lhs = D.compose(G.mor_map[f], self.components[a])
            rhs = D.compose(self.components[b], F.mor_map[f])
            if lhs != rhs:
                out.append(f"{self.name}: naturality square fails at {f!r}: {a!r} -> {b!r}")
        return out

    def check(self) -> None:
        bad = self.failures()
        if bad:
            raise FunctorError(bad[0])

    def is_iso(self) -> bool:
        D = self.src.cod
        return all(D.is_invertible(c) for c in self.components.values())

    def __repr__(self) -> str:
        return f"NatTrans({self.name!r}: {self.src.name} ⇒ {self.tgt.name})"


def identity_nat(F: FinFunctor) -> NatTrans:
    return NatTrans(F, F, {x: F.cod.id(F(x)) for x in F.dom.objects}, name=f"id_{F.name}")


def vertical(beta: NatTrans, alpha: NatTrans) -> NatTrans:
    """``β·α`` for ``α: F ⇒ G`` and ``β: G ⇒ H``."""
    D = alpha.src.cod
    return NatTrans(
        alpha.src,
        beta.tgt,
        {x: D.compose(beta[x], alpha[x]) for x in alpha.src.dom.objects},
        name=f"{beta.name}·{alpha.name}",
    )


def whisker_left(alpha: NatTrans, K: FinFunctor) -> NatTrans:
    """``αK``: precompose with ``K``."""
    return NatTrans(
        compose_functors(alpha.src, K),
        compose_functors(alpha.tgt, K),
        {x: alpha[K(x)] for x in K.dom.objects},
        name=f"{alpha.name}{K.name}",
    )


def whisker_right(K: FinFunctor, alpha: NatTrans) -> NatTrans:
    """``Kα``: postcompose with ``K``."""
    return NatTrans(
        compose_functors(K, alpha.src),
        compose_functors(K, alpha.tgt),
        {x: K.mor_map[c] for x, c in alpha.components.items()},
        name=f"{K.name}{alpha.name}",
    )


@dataclass
class Adjunction:
    """``left ⊣ right`` with unit ``Id ⇒ right∘left`` and counit ``left∘right ⇒ Id``."""

    left: FinFunctor
    right: FinFunctor
    unit: NatTrans
    counit: NatTrans

    @property
    def lower(self) -> FinCategory:
        return self.left.dom

    @property
    def upper(self) -> FinCategory:
        return self.left.cod


@dataclass
class AdjunctionReport:
    ok: bool
    failures: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def check_adjunction(adj: Adjunction, *, limit: int | None = None) -> AdjunctionReport:
    """Exhaustively check naturality and both triangle identities."""
    F, G, eta, eps = adj.left, adj.right, adj.unit, adj.counit
    C, D = F.dom, F.cod
    bad: list[str] = []
    if not _same_category(G.dom, D) or not _same_category(G.cod, C):
        return AdjunctionReport(False, ["right adjoint has the wrong domain or codomain"])
    for fn in (F, G):
        try:
            fn.check()
        except FunctorError as exc:
            bad.append(str(exc))
    if bad:
        return AdjunctionReport(False, bad)
    GF = compose_functors(G, F)
    FG = compose_functors(F, G)
    for x in C.objects:
        c = eta.components.get(x)
        if c is None or not C.has_morphism(c) or C.src(c) != x or C.tgt(c) != GF(x):
            bad.append(f"unit component at {x!r} is not a morphism {x!r} -> {GF(x)!r}")
    for y in D.objects:
        c = eps.components.get(y)
        if c is None or not D.has_morphism(c) or D.src(c) != FG(y) or D.tgt(c) != y:
            bad.append(f"counit component at {y!r} is not a morphism {FG(y)!r} -> {y!r}")
    if bad:
        return AdjunctionReport(False, bad)
    for f in C.morphisms:
        a, b = C.src(f), C.tgt(f)
        if C.compose(GF.mor_map[f], eta[a]) != C.compose(eta[b], f):
            bad.append(f"unit naturality fails at {f!r}")
    for g in D.morphisms:
        a, b = D.src(g), D.tgt(g)
        if D.compose(g, eps[a]) != D.compose(eps[b], FG.mor_map[g]):
            bad.append(f"counit naturality fails at {g!r}")
    for x in C.objects:
        if D.compose(eps[F(x)], F.mor_map[eta[x]]) != D.id(F(x)):
            bad.append(f"triangle identity ε_F ∘ Fη = id fails at {x!r}")
    for y in D.objects:
        if C.compose(G.mor_map[eps[y]], eta[G(y)]) != C.id(G(y)):
            bad.append(f"triangle identity Gε ∘ η_G = id fails at {y!r}")
        if limit is not None and len(bad) >= limit:
            break
    return AdjunctionReport(not bad, bad)


def compose_adjunctions(outer: Adjunction, inner: Adjunction) -> Adjunction:
    """Compose ``F1 ⊣ G1`` (``inner``, on A⇄B) with ``F2 ⊣ G2`` (``outer``, on B⇄C)."""
    F1, G1, F2, G2 = inner.left, inner.right, outer.left, outer.right
    A, B, C = F1.dom, F1.cod, F2.cod
    F = compose_functors(F2, F1)
    G = compose_functors(G1, G2)
    unit = {
        x: A.compose(G1.mor_map[outer.unit[F1(x)]], inner.unit[x]) for x in A.objects
    }
    counit = {
        z: C.compose(outer.counit[z], F2.mor_map[inner.counit[G2(z)]]) for z in C.objects
    }
    return Adjunction(
        F,
        G,
        NatTrans(identity_functor(A), compose_functors(G, F), unit, name="η"),
        NatTrans(compose_functors(F, G), identity_functor(C), counit, name="ε"),
    )


def full_subcategory(
    C: FinCategory, keep: Iterable[Obj] | Callable[[Obj], bool], *, name: str | None = None
) -> tuple[FinCategory, FinFunctor]:
    """Full subcategory on the selected objects, with its inclusion functor."""
    if callable(keep):
        objs = [x for x in C.objects if keep(x)]
    else:
        wanted = set(keep)
        objs = [x for x in C.objects if x in wanted]
    chosen = set(objs)
    mors = [f for f in C.morphisms if C.src(f) in chosen and C.tgt(f) in chosen]
    sub = FinCategory(
        objs,
        mors,
        {f: C.src(f) for f in mors},
        {f: C.tgt(f) for f in mors},
        {x: C.id(x) for x in objs},
        C.compose,
        name=name or f"{C.name}|sub",
        check=False,
    )
    inc = FinFunctor(sub, C, {x: x for x in objs}, {f: f for f in mors}, name="incl")
    return sub, inc
