"""JSON schemas for categories, diagrams, cones, adjunctions and solver inputs.

Ids in JSON are strings or integers. Mapping keys are always strings, so a key
is matched against the ids of the relevant category by value first and then by
its string form.
"""
from __future__ import annotations

from typing import Any, Mapping

from .cohom import CechProblem, Cover, DoubleCosetProblem, GroupAction, Tower
from .conj import ConjProblem
from .descent import LevelwiseAdjunction, levelwise_from_cone
from .fincat.build import poset_category, terminal_category, validate_category
from .fincat.core import FinCategory, FinFunctor, NatTrans, compose_functors, identity_functor
from .fincat.groups import Group, GroupHom, homomorphisms, inversion
from .groth import ConeOfCats, DiagramOfCats, Section, SectionMap


class SchemaError(ValueError):
    pass


def _where(path: str, msg: str) -> SchemaError:
    return SchemaError(f"{path}: {msg}")


def _resolve(key, ids, path: str):
    """Match a JSON key against declared ids."""
    if key in ids:
        return key
    matches = [i for i in ids if str(i) == str(key)]
    if len(matches) == 1:
        return matches[0]
    if not matches:
        raise _where(path, f"unknown id {key!r}")
    raise _where(path, f"ambiguous id {key!r}")


# --- groups -------------------------------------------------------------------------


def _stringify(G: Group) -> Group:
    if all(isinstance(g, str) for g in G):
        return G
    name = {g: str(g) for g in G}
    out = Group([name[g] for g in G], {(name[a], name[b]): name[G.mul(a, b)] for a in G for b in G}, name=G.name, check=False)
    if G.perms is not None:
        out.perms = {name[g]: p for g, p in G.perms.items()}
    return out


def group_from_json(spec: Any, path: str = "group") -> Group:
    """Group shorthands; elements always come back as strings."""
    if not isinstance(spec, Mapping):
        raise _where(path, "a group is a JSON object")
    try:
        if "cyclic" in spec:
            G = Group.cyclic(int(spec["cyclic"]))
        elif "symmetric" in spec:
            G = Group.symmetric(int(spec["symmetric"]))
        elif "alternating" in spec:
            G = Group.alternating(int(spec["alternating"]))
        elif "dihedral" in spec:
            G = Group.dihedral(int(spec["dihedral"]))
        elif "trivial" in spec:
            G = Group.trivial()
        elif "permutations" in spec:
            G = Group.from_permutations(spec["permutations"], spec.get("degree"), name=spec.get("name", "perm"))
        elif "elements" in spec:
            els = [str(e) for e in spec["elements"]]
            table = spec["table"]
            if len(table) != len(els) or any(len(row) != len(els) for row in table):
                raise _where(path, "table must be square over the elements")
            G = Group(els, {(a, b): str(table[i][j]) for i, a in enumerate(els) for j, b in enumerate(els)}, name=spec.get("name", "G"))
        else:
            raise _where(path, "unknown group shorthand")
    except (ValueError, TypeError, KeyError) as exc:
        if isinstance(exc, SchemaError):
            raise
        raise _where(path, str(exc)) from None
    return _stringify(G)


def group_hom_from_json(dom: Group, cod: Group, spec: Any, path: str) -> GroupHom:
    if spec == "identity":
        return GroupHom(dom, cod, {g: _resolve(g, cod.elements, path) for g in dom})
    if spec == "inversion":
        return GroupHom(dom, cod, inversion(dom).mapping)
    if spec == "trivial":
        return GroupHom(dom, cod, {g: cod.identity for g in dom})
    if not isinstance(spec, Mapping):
        raise _where(path, "a homomorphism is a JSON object mapping elements")
    m = {_resolve(k, dom.elements, path): _resolve(v, cod.elements, path) for k, v in spec.items()}
    hom = GroupHom(dom, cod, m)
    try:
        hom.check()
    except ValueError as exc:
        raise _where(path, str(exc)) from None
    return hom


# --- categories and functors --------------------------------------------------------------


def category_from_json(spec: Any, path: str = "category", registry: Mapping | None = None) -> FinCategory:
    if isinstance(spec, str):
        if registry is None or spec not in registry:
            raise _where(path, f"unknown category name {spec!r}")
        return registry[spec]
    if not isinstance(spec, Mapping):
        raise _where(path, "a category is a JSON object")
    name = spec.get("name", path)
    if "group" in spec:
        G = group_from_json(spec["group"], f"{path}.group")
        return G.as_category(name=name)
    if "poset" in spec:
        p = spec["poset"]
        els = list(p["elements"])
        rel = {(a, b) for a, b in p.get("leq", [])}
        P = poset_category(els, lambda x, y: x == y or (x, y) in rel, name=name)
        return _relabel_poset(P)
    if "boolean_lattice" in spec:
        n = int(spec["boolean_lattice"])
        return _relabel_poset(poset_category(list(range(2**n)), lambda a, b: a & b == a, name=name))
    if "discrete" in spec:
        objs = list(spec["discrete"])
        raw = {
            "objects": objs,
            "morphisms": [{"id": f"id_{x}", "src": x, "tgt": x} for x in objs],
            "identity": {x: f"id_{x}" for x in objs},
            "compose": [],
        }
        return validate_category(raw, name=name)
    if spec.get("terminal"):
        return terminal_category(name=name)
    for key in ("objects", "morphisms", "identity"):
        if key not in spec:
            raise _where(path, f"missing key {key!r}")
    raw = dict(spec)
    objs = list(raw["objects"])
    raw["identity"] = {_resolve(k, objs, f"{path}.identity"): v for k, v in raw["identity"].items()}
    raw.setdefault("compose", [])
    try:
        return validate_category(raw, name=name)
    except ValueError as exc:
        raise _where(path, str(exc)) from None


def _relabel_poset(P: FinCategory) -> FinCategory:
    """Give a poset string morphism ids ``"x<=y"``."""
    lab = {m: f"{m[0]}<={m[1]}" for m in P.morphisms}
    return FinCategory(
        P.objects,
        [lab[m] for m in P.morphisms],
        {lab[m]: P.src(m) for m in P.morphisms},
        {lab[m]: P.tgt(m) for m in P.morphisms},
        {x: lab[P.id(x)] for x in P.objects},
        {(lab[g], lab[f]): lab[P.compose(g, f)] for g, f in P.composable_pairs()},
        name=P.name,
        check=False,
    )


def functor_from_json(dom: FinCategory, cod: FinCategory, spec: Any, path: str = "functor") -> FinFunctor:
    if spec == "identity":
        if not dom.same_tables(cod):
            raise _where(path, "identity functor between different categories")
        return FinFunctor(dom, cod, {x: x for x in dom.objects}, {f: f for f in dom.morphisms}, name="id")
    if not isinstance(spec, Mapping) or "obj_map" not in spec or "mor_map" not in spec:
        raise _where(path, "a functor needs obj_map and mor_map")
    om = {_resolve(k, dom.objects, f"{path}.obj_map"): _resolve(v, cod.objects, f"{path}.obj_map") for k, v in spec["obj_map"].items()}
    mm = {_resolve(k, dom.morphisms, f"{path}.mor_map"): _resolve(v, cod.morphisms, f"{path}.mor_map") for k, v in spec["mor_map"].items()}
    F = FinFunctor(dom, cod, om, mm, name=spec.get("name", path))
    try:
        F.check()
    except ValueError as exc:
        raise _where(path, str(exc)) from None
    return F


def _registry(data: Mapping) -> dict:
    reg: dict = {}
    for k, v in data.get("categories", {}).items():
        reg[k] = category_from_json(v, f"categories.{k}", reg)
    return reg


def diagram_from_json(data: Mapping, path: str = "diagram", registry: Mapping | None = None) -> DiagramOfCats:
    """Transports along identities may be omitted."""
    reg = dict(registry) if registry is not None else _registry(data)
    for key in ("index", "fibers"):
        if key not in data:
            raise _where(path, f"missing key {key!r}")
    I = category_from_json(data["index"], f"{path}.index", reg)
    fibers = {}
    for k, v in data["fibers"].items():
        a = _resolve(k, I.objects, f"{path}.fibers")
        fibers[a] = category_from_json(v, f"{path}.fibers.{k}", reg)
    transport = {}
    for k, v in data.get("transport", {}).items():
        e = _resolve(k, I.morphisms, f"{path}.transport")
        transport[e] = functor_from_json(fibers[I.src(e)], fibers[I.tgt(e)], v, f"{path}.transport.{k}")
    for a in I.objects:
        if a not in fibers:
            raise _where(path, f"no fiber at {a!r}")
        transport.setdefault(I.id(a), identity_functor(fibers[a]))
    try:
        return DiagramOfCats(I, fibers, transport, name=data.get("name", "D"))
    except ValueError as exc:
        raise _where(path, str(exc)) from None


def _mor_table(cat: FinCategory, objs_cat: FinCategory, spec: Mapping, path: str) -> dict:
    """``{object of objs_cat: morphism of cat}``."""
    return {
        _resolve(k, objs_cat.objects, path): _resolve(v, cat.morphisms, path) for k, v in spec.items()
    }


def cone_from_json(data: Mapping, path: str = "cone") -> ConeOfCats:
    reg = _registry(data)
    D = diagram_from_json(data, path, reg)
    if "apex" not in data or "legs" not in data:
        raise _where(path, "a cone needs apex and legs")
    C = category_from_json(data["apex"], f"{path}.apex", reg)
    legs = {}
    for k, v in data["legs"].items():
        a = _resolve(k, D.index.objects, f"{path}.legs")
        legs[a] = functor_from_json(C, D.fibers[a], v, f"{path}.legs.{k}")
    comps = {}
    for k, v in data.get("comparisons", {}).items():
        e = _resolve(k, D.index.morphisms, f"{path}.comparisons")
        comps[e] = _mor_table(D.fibers[D.index.tgt(e)], C, v, f"{path}.comparisons.{k}")
    try:
        return ConeOfCats(C, D, legs, comps, name=data.get("name", "cone"))
    except ValueError as exc:
        raise _where(path, str(exc)) from None


def levelwise_from_json(data: Mapping, path: str = "adjunction") -> LevelwiseAdjunction:
    """Adjoint data left out of the file is searched for."""
    cone = cone_from_json(data, path)
    if "rights" not in data:
        L = levelwise_from_cone(cone)
        if L is None:
            raise _where(path, "some leg has no right adjoint")
        return L
    C, D = cone.apex, cone.diagram
    rights, units, counits = {}, {}, {}
    for a in D.index.objects:
        key = next((k for k in data["rights"] if str(k) == str(a)), None)
        if key is None:
            raise _where(path, f"no right adjoint at {a!r}")
        G = functor_from_json(D.fibers[a], C, data["rights"][key], f"{path}.rights.{key}")
        F = cone.legs[a]
        rights[a] = G
        units[a] = NatTrans(
            identity_functor(C), compose_functors(G, F), _mor_table(C, C, data["units"][key], f"{path}.units.{key}")
        )
        counits[a] = NatTrans(
            compose_functors(F, G),
            identity_functor(D.fibers[a]),
            _mor_table(D.fibers[a], D.fibers[a], data["counits"][key], f"{path}.counits.{key}"),
        )
    L = LevelwiseAdjunction(cone, rights, units, counits)
    try:
        L.check()
    except ValueError as exc:
        raise _where(path, str(exc)) from None
    return L


def problem_from_json(data: Mapping, path: str = "problem", base: Any = None) -> ConjProblem:
    cone = cone_from_json(data, path)
    key = base if base is not None else data.get("base_object")
    if key is None:
        raise _where(path, "no base object given")
    return ConjProblem(cone, _resolve(key, cone.apex.objects, f"{path}.base_object"))


# --- solver inputs ------------------------------------------------------------------------


def action_from_json(data: Mapping, path: str = "h1") -> GroupAction:
    gamma = group_from_json(data["gamma"], f"{path}.gamma")
    A = group_from_json(data["target"], f"{path}.target")
    act = data.get("action", "trivial")
    if act == "trivial":
        return GroupAction.trivial(gamma, A)
    if act == "inversion":
        # generators act by inversion, so g acts by inversion to the power of its parity
        if len(gamma) % 2:
            raise _where(path, "inversion action needs a group of even order")
        inv = inversion(A)
        sign = _parity(gamma, path)
        return GroupAction(gamma, A, {g: (inv.mapping if sign[g] else {a: a for a in A}) for g in gamma})
    if not isinstance(act, Mapping):
        raise _where(path, "action must be 'trivial', 'inversion' or an element table")
    table = {}
    for k, v in act.items():
        g = _resolve(k, gamma.elements, f"{path}.action")
        table[g] = group_hom_from_json(A, A, v, f"{path}.action.{k}").mapping
    try:
        return GroupAction(gamma, A, table)
    except ValueError as exc:
        raise _where(path, str(exc)) from None


def _parity(G: Group, path: str) -> dict:
    """A surjection ``G -> Z/2`` chosen as the first one found."""
    Z2 = Group.cyclic(2)
    for h in homomorphisms(G, Z2):
        if h.is_surjective():
            return {g: h(g) == 1 for g in G}
    raise _where(path, f"{G.name} has no quotient of order 2")


def dcoset_from_json(data: Mapping, path: str = "dcoset") -> DoubleCosetProblem:
    K = group_from_json(data["K"], f"{path}.K")
    maps = []
    for i, sub in enumerate(data["subgroups"]):
        p = f"{path}.subgroups[{i}]"
        if "generators" in sub:
            gens = [_resolve(g, K.elements, p) for g in sub["generators"]]
            _, inc = K.subgroup(gens)
            maps.append(inc)
        else:
            H = group_from_json(sub["group"], f"{p}.group")
            maps.append(group_hom_from_json(H, K, sub["map"], f"{p}.map"))
    return DoubleCosetProblem(K, maps)


def cech_from_json(data: Mapping, path: str = "cech") -> CechProblem:
    G = group_from_json(data["group"], f"{path}.group")
    pairs = {tuple(p["patches"]): p["components"] for p in data.get("pairs", [])}
    triples = {tuple(t["patches"]): t["components"] for t in data.get("triples", [])}
    try:
        cov = Cover(data["patches"], pairs, triples)
    except ValueError as exc:
        raise _where(path, str(exc)) from None
    return CechProblem(cov, G)


def tower_from_json(data: Mapping, path: str = "lim1") -> Tower:
    groups = [group_from_json(g, f"{path}.groups[{i}]") for i, g in enumerate(data["groups"])]
    maps = [
        group_hom_from_json(groups[n + 1], groups[n], m, f"{path}.maps[{n}]") for n, m in enumerate(data["maps"])
    ]
    try:
        return Tower(groups, maps, stable_from=data.get("stable_from"))
    except ValueError as exc:
        raise _where(path, str(exc)) from None


def colim_from_json(data: Mapping, path: str = "colim"):
    """Returns ``(pieces, K, inclusions, f)``."""
    reg = _registry(data)
    C = category_from_json(data["target"], f"{path}.target", reg)
    K = category_from_json(data["K"], f"{path}.K", reg)
    pieces = diagram_from_json(data["pieces"], f"{path}.pieces", reg)
    incl = {}
    for k, v in data["inclusions"].items():
        a = _resolve(k, pieces.index.objects, f"{path}.inclusions")
        incl[a] = functor_from_json(pieces.fibers[a], K, v, f"{path}.inclusions.{k}")
    f = functor_from_json(K, C, data["f"], f"{path}.f")
    return pieces, K, incl, f


def detect_schema(data: Mapping) -> str:
    if "base_object" in data:
        return "problem"
    if "rights" in data or "adjunction" in data:
        return "adjunction"
    if "apex" in data:
        return "cone"
    if "index" in data:
        return "diagram"
    if "obj_map" in data:
        return "functor"
    return "category"


# --- output -------------------------------------------------------------------------------


def jsonable(x: Any) -> Any:
    """Plain JSON data; dictionary keys become strings, tuples become lists."""
    if isinstance(x, Section):
        return {"on_obj": jsonable(x.on_obj), "on_mor": jsonable(x.on_mor)}
    if isinstance(x, SectionMap):
        return {"components": jsonable(x.components)}
    if isinstance(x, Mapping):
        return {_key(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    return str(x)


def _key(k: Any) -> str:
    if isinstance(k, str):
        return k
    if isinstance(k, tuple):
        return "(" + ", ".join(_key(v) for v in k) + ")"
    return str(k)
