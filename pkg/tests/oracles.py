"""Naive reference computations used as test oracles.

These deliberately avoid the library's solvers: orbits are computed as full
orbit sets, functors and cocycles by exhaustive assignment.
"""
from functools import reduce
from itertools import product


def orbit_count(points, moves):
    """Number of orbits, each found as the full closure of a point under ``moves``."""
    seen, count = set(), 0
    for p in points:
        if p in seen:
            continue
        count += 1
        stack = [p]
        seen.add(p)
        while stack:
            q = stack.pop()
            for r in moves(q):
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
    return count


def h1_count(gamma, A, act):
    """``act[g]`` is a dict giving the automorphism of ``A`` for ``g``."""
    gs = list(gamma)
    cocycles = []
    for values in product(list(A), repeat=len(gs)):
        z = dict(zip(gs, values))
        if all(z[gamma.mul(g, h)] == A.mul(z[g], act[g][z[h]]) for g in gs for h in gs):
            cocycles.append(values)

    def moves(values):
        z = dict(zip(gs, values))
        return [tuple(A.mul(A.mul(a, z[g]), A.inv(act[g][a])) for g in gs) for a in A]

    return orbit_count(cocycles, moves)


def double_coset_count(K, maps):
    tuples = list(product(list(K), repeat=len(maps)))

    def moves(ks):
        out = [tuple(K.mul(h, k) for k in ks) for h in K]
        for i, u in enumerate(maps):
            for hi in u.dom:
                out.append(ks[:i] + (K.mul(ks[i], u(hi)),) + ks[i + 1:])
        return out

    return orbit_count(tuples, moves)


def conjugacy_class_count(G):
    return orbit_count(list(G), lambda g: [G.mul(G.mul(h, g), G.inv(h)) for h in G])


def lim1_count(tower):
    gs, fs = tower.groups, tower.maps
    N = len(fs)
    points = list(product(*(list(gs[n]) for n in range(N))))

    def moves(p):
        out = []
        for n in range(N + 1):
            for h in gs[n]:
                q = list(p)
                if n < N:
                    q[n] = gs[n].mul(h, q[n])
                if n > 0:
                    q[n - 1] = gs[n - 1].mul(q[n - 1], gs[n - 1].inv(fs[n - 1](h)))
                out.append(tuple(q))
        return out

    return orbit_count(points, moves)


def functors(I, C):
    """All functors ``I -> C`` by exhaustive assignment, as ``(obj_map, mor_map)``."""
    out = []
    objs, mors = list(I.objects), list(I.morphisms)
    for ovals in product(list(C.objects), repeat=len(objs)):
        om = dict(zip(objs, ovals))
        choices = [C.hom(om[I.src(e)], om[I.tgt(e)]) for e in mors]
        for mvals in product(*choices):
            mm = dict(zip(mors, mvals))
            if any(mm[I.id(a)] != C.id(om[a]) for a in objs):
                continue
            if all(mm[I.compose(g, f)] == C.compose(mm[g], mm[f]) for g, f in I.composable_pairs()):
                out.append((om, mm))
    return out


def natural_transformation_count(I, C, X, Y):
    objs = list(I.objects)
    n = 0
    for comps in product(*(C.hom(X[0][a], Y[0][a]) for a in objs)):
        c = dict(zip(objs, comps))
        if all(C.compose(c[I.tgt(e)], X[1][e]) == C.compose(Y[1][e], c[I.src(e)]) for e in I.morphisms):
            n += 1
    return n


def grothendieck_counts(D):
    I = D.index
    objects = sum(len(D.fibers[a].objects) for a in I.objects)
    morphisms = 0
    for e in I.morphisms:
        a, b = I.src(e), I.tgt(e)
        T = D.T(e)
        for x in D.fibers[a].objects:
            for y in D.fibers[b].objects:
                morphisms += len(D.fibers[b].hom(T(x), y))
    return objects, morphisms


def join_all(values):
    return reduce(lambda a, b: a | b, values, 0)


def components(C):
    """Connected components of the underlying graph of a category."""
    parent = {x: x for x in C.objects}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for f in C.morphisms:
        a, b = find(C.src(f)), find(C.tgt(f))
        if a != b:
            parent[a] = b
    return len({find(x) for x in C.objects})


def is_cocartesian_by_lifting(total, proj, f):
    """``f: X -> Y`` is coCartesian iff every ``g: X -> Z`` over ``w ∘ p(f)`` factors uniquely over ``w``."""
    I = proj.cod
    X, Y = total.src(f), total.tgt(f)
    for g in total.out_of(X):
        Z = total.tgt(g)
        for w in I.hom(proj(Y), proj(Z)):
            if I.compose(w, proj.mor_map[f]) != proj.mor_map[g]:
                continue
            lifts = [h for h in total.hom(Y, Z) if proj.mor_map[h] == w and total.compose(h, f) == g]
            if len(lifts) != 1:
                return False
    return True
