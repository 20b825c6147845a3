import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from descentkit.fincat import FinFunctor, arrow_category, discrete_category, identity_functor, poset_category
from descentkit.fincat.build import empty_category, terminal_category
from descentkit.fincat.groups import Group
from descentkit.fincat.search import functor_category
from descentkit.generators import const_pair, groupoid_diagram, lattice_levelwise
from descentkit.groth import (
    ConeOfCats,
    DiagramError,
    DiagramOfCats,
    MapOfDiagrams,
    Section,
    constant_diagram,
    enumerate_sections,
    grothendieck,
    is_cocartesian,
    is_cocartesian_section,
    lax_const_to_functor_category,
    lax_limit,
    pseudo_limit,
    pseudo_limit_cone,
    section_failures,
)

from oracles import functors, grothendieck_counts, is_cocartesian_by_lifting, natural_transformation_count

seeds = st.integers(min_value=0, max_value=10**6)


def bz(n):
    return Group.cyclic(n).as_category()


def inversion_diagram():
    B3 = bz(3)
    inv = FinFunctor(B3, B3, {"*": "*"}, {0: 0, 1: 2, 2: 1})
    return DiagramOfCats(bz(2), {"*": B3}, {0: identity_functor(B3), 1: inv}, name="inv")


class TestDiagrams:
    def test_non_functorial_transport_names_pair(self):
        I = poset_category([0, 1, 2], lambda a, b: a <= b)
        B = bz(2)
        flat = FinFunctor(B, B, {"*": "*"}, {0: 0, 1: 0})
        T = {e: identity_functor(B) for e in I.morphisms}
        T[(0, 2)] = flat
        with pytest.raises(DiagramError, match=r"not functorial on \(\(1, 2\), \(0, 1\)\)"):
            DiagramOfCats(I, {a: B for a in I.objects}, T)

    def test_identity_must_go_to_identity(self):
        B = bz(2)
        swap = FinFunctor(B, B, {"*": "*"}, {0: 0, 1: 1})
        I = terminal_category()
        DiagramOfCats(I, {"*": B}, {"id_*": swap})
        flat = FinFunctor(B, B, {"*": "*"}, {0: 0, 1: 0})
        with pytest.raises(DiagramError):
            DiagramOfCats(I, {"*": B}, {"id_*": flat})

    def test_group_action_is_strict(self):
        inversion_diagram().check()


class TestGrothendieck:
    def test_arrow_of_bz2(self):
        I = arrow_category()
        total, proj = grothendieck(constant_diagram(I, bz(2)))
        total.check()
        proj.check()
        assert (len(total.objects), len(total.morphisms)) == (2, 6)

    @given(seeds)
    @settings(max_examples=30, deadline=None)
    def test_counts_and_laws(self, seed):
        rng = random.Random(seed)
        D = groupoid_diagram(rng) if seed % 2 else const_pair(rng)[2]
        total, proj = grothendieck(D)
        assert (len(total.objects), len(total.morphisms)) == grothendieck_counts(D)
        total.check()
        proj.check()

    @given(seeds)
    @settings(max_examples=20, deadline=None)
    def test_cocartesian_matches_lifting_property(self, seed):
        rng = random.Random(seed)
        D = const_pair(rng)[2] if seed % 2 else lattice_levelwise(rng).cone.diagram
        total, proj = grothendieck(D)
        for f in total.morphisms:
            assert is_cocartesian(total, f) == is_cocartesian_by_lifting(total, proj, f)

    def test_groupoid_fibers_make_every_arrow_cocartesian(self):
        total, _ = grothendieck(inversion_diagram())
        assert all(is_cocartesian(total, f) for f in total.morphisms)


class TestLaxLimit:
    @given(seeds)
    @settings(max_examples=30, deadline=None)
    def test_const_lax_limit_is_functor_category(self, seed):
        I, C, D = const_pair(random.Random(seed))
        lax = lax_limit(D)
        fc = functor_category(I, C)
        lax_const_to_functor_category(I, C, lax=lax, fc=fc)
        naive = functors(I, C)
        assert len(lax.objects) == len(naive)
        assert len(lax.morphisms) == sum(natural_transformation_count(I, C, X, Y) for X in naive for Y in naive)

    def test_terminal_index_gives_fiber(self):
        B = bz(4)
        lax = lax_limit(constant_diagram(terminal_category(), B))
        assert (len(lax.objects), len(lax.morphisms)) == (1, 4)

    def test_empty_index_gives_terminal(self):
        D = DiagramOfCats(empty_category(), {}, {})
        for C in (lax_limit(D), pseudo_limit(D)):
            assert (len(C.objects), len(C.morphisms)) == (1, 1)

    def test_pseudo_is_full_on_cocartesian_sections(self):
        D = lattice_levelwise(random.Random(5)).cone.diagram
        lax = lax_limit(D)
        P, incl = pseudo_limit(D, lax=lax, with_inclusion=True)
        assert set(P.objects) == {s for s in lax.objects if is_cocartesian_section(D, s)}
        for s in P.objects:
            for t in P.objects:
                assert len(P.hom(s, t)) == len(lax.hom(s, t))
        incl.check()

    @given(seeds)
    @settings(max_examples=20, deadline=None)
    def test_groupoid_valued_lax_equals_pseudo(self, seed):
        D = groupoid_diagram(random.Random(seed))
        assert set(lax_limit(D).objects) == set(pseudo_limit(D).objects)

    @given(seeds)
    @settings(max_examples=20, deadline=None)
    def test_enumerated_sections_are_sections(self, seed):
        D = groupoid_diagram(random.Random(seed))
        for s in enumerate_sections(D):
            assert section_failures(D, s) == []

    def test_homotopy_fixed_points_of_inversion(self):
        P = pseudo_limit(inversion_diagram())
        assert (len(P.objects), len(P.morphisms)) == (3, 9)
        assert P.is_groupoid()


class TestSectionsAndCones:
    def test_section_hash_ignores_insertion_order(self):
        a = Section({"x": 1, "y": 2}, {"e": 3, "f": 4})
        b = Section({"y": 2, "x": 1}, {"f": 4, "e": 3})
        assert a == b and hash(a) == hash(b)
        assert a != Section({"x": 1, "y": 2}, {"e": 3, "f": 5})

    @given(seeds)
    @settings(max_examples=20, deadline=None)
    def test_canonical_cone_is_coherent(self, seed):
        D = groupoid_diagram(random.Random(seed))
        cone = pseudo_limit_cone(D)
        cone.check()
        assert all(cone.legs[a](s) == s.on_obj[a] for a in D.index.objects for s in cone.apex.objects)

    def test_strict_cone_must_commute(self):
        I = arrow_category()
        B = bz(2)
        D = constant_diagram(I, B)
        flat = FinFunctor(B, B, {"*": "*"}, {0: 0, 1: 0})
        with pytest.raises(DiagramError):
            ConeOfCats(B, D, {0: identity_functor(B), 1: flat})

    def test_comparisons_repair_a_twisted_cone(self):
        # legs id and conjugation by a transposition differ by an invertible comparison
        S3 = Group.symmetric(3)
        B = S3.as_category()
        t = "(1 2)"
        conj = FinFunctor(B, B, {"*": "*"}, {g: S3.mul(S3.mul(t, g), t) for g in S3})
        D = constant_diagram(arrow_category(), B)
        with pytest.raises(DiagramError):
            ConeOfCats(B, D, {0: identity_functor(B), 1: conj})
        cone = ConeOfCats(B, D, {0: identity_functor(B), 1: conj}, {(0, 1): {"*": t}})
        assert not cone.is_strict()

    def test_map_of_diagrams_checks_naturality(self):
        I = discrete_category(["p"])
        B = bz(2)
        D = DiagramOfCats(I, {"p": B}, {"id_p": identity_functor(B)})
        flat = FinFunctor(B, B, {"*": "*"}, {0: 0, 1: 0})
        MapOfDiagrams(D, D, {"p": flat}).check()
        with pytest.raises(DiagramError):
            MapOfDiagrams(D, D, {"p": flat}, {"id_p": {"*": 1}})
