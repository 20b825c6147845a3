import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from descentkit import io
from descentkit.conj import (
    UNVERIFIED,
    ConjError,
    ConjProblem,
    baut_diagram,
    comparison_is_equivalence,
    conjugates_bruteforce,
    conjugates_formula,
    crosscheck,
    gauge_move,
    pi0_descent,
)
from descentkit.fincat import FinFunctor, boolean_lattice, discrete_category, identity_functor
from descentkit.fincat.build import terminal_category
from descentkit.fincat.groups import Group
from descentkit.generators import groupoid_diagram
from descentkit.groth import ConeOfCats, DiagramOfCats, enumerate_sections, is_cocartesian_section, pseudo_limit, pseudo_limit_cone

from oracles import components

seeds = st.integers(min_value=0, max_value=10**6)


def load(fixtures_dir, name):
    return io.problem_from_json(json.loads((fixtures_dir / name).read_text()))


def inversion_problem():
    B3 = Group.cyclic(3).as_category()
    inv = FinFunctor(B3, B3, {"*": "*"}, {0: 0, 1: 2, 2: 1})
    D = DiagramOfCats(Group.cyclic(2).as_category(), {"*": B3}, {0: identity_functor(B3), 1: inv})
    cone = pseudo_limit_cone(D)
    return ConjProblem(cone, cone.apex.objects[0])


class TestFixtures:
    @pytest.mark.parametrize(
        "name, count",
        [("conj_terminal.json", 1), ("conj_bz3_inversion.json", 1), ("conj_collapsing.json", 2)],
    )
    def test_counts_agree(self, fixtures_dir, name, count):
        p = load(fixtures_dir, name)
        check = crosscheck(p)
        assert check.ok
        assert check.brute.count == count
        assert check.formula.warnings == []


class TestAutomorphismDiagram:
    def test_inversion_transport(self):
        B = baut_diagram(inversion_problem())
        assert B.T(1).mor_map == {0: 0, 1: 2, 2: 1}

    def test_cocycles_of_inversion(self):
        # every element is a cocycle and all are gauge equivalent
        B = baut_diagram(inversion_problem())
        secs = list(enumerate_sections(B, cocartesian=True))
        assert len(secs) == 3
        assert pi0_descent(B).count == 1

    @given(seeds)
    @settings(max_examples=25, deadline=None)
    def test_gauge_moves_preserve_sections(self, seed):
        rng = random.Random(seed)
        D = groupoid_diagram(rng)
        for s in enumerate_sections(D, cocartesian=True):
            a = rng.choice(D.index.objects)
            h = rng.choice(D.fibers[a].out_of(s.on_obj[a]))
            assert is_cocartesian_section(D, gauge_move(D, s, a, h))

    @given(seeds)
    @settings(max_examples=25, deadline=None)
    def test_pi0_counts_components_of_pseudolimit(self, seed):
        D = groupoid_diagram(random.Random(seed))
        assert pi0_descent(D).count == components(pseudo_limit(D))

    def test_representatives_are_first_in_enumeration_order(self):
        D = groupoid_diagram(random.Random(4))
        res = pi0_descent(D)
        order = list(enumerate_sections(D, cocartesian=True))
        for rep, cls in zip(res.representatives, res.classes):
            assert rep == cls[0]
            assert all(order.index(rep) <= order.index(s) for s in cls)

    def test_non_groupoid_fiber_rejected(self):
        L = boolean_lattice(1)
        D = DiagramOfCats(terminal_category(), {"*": L}, {"id_*": identity_functor(L)})
        with pytest.raises(ConjError, match="not a groupoid"):
            pi0_descent(D)


class TestFormula:
    @given(seeds)
    @settings(max_examples=30, deadline=None)
    def test_brute_force_equals_formula_on_pseudolimits(self, seed):
        cone = pseudo_limit_cone(groupoid_diagram(random.Random(seed)))
        assert comparison_is_equivalence(cone)[0]
        for x in cone.apex.objects:
            check = crosscheck(ConjProblem(cone, x))
            assert check.ok, (x, check.brute.count, check.formula.count)

    def test_warning_when_comparison_is_not_an_equivalence(self):
        # two unrelated objects sent to a single point: conjugate but not isomorphic
        C = discrete_category(["x", "y"])
        T = terminal_category()
        D = DiagramOfCats(T, {"*": T}, {"id_*": identity_functor(T)})
        leg = FinFunctor(C, T, {"x": "*", "y": "*"}, {"id_x": "id_*", "id_y": "id_*"})
        p = ConjProblem(ConeOfCats(C, D, {"*": leg}), "x")
        brute = conjugates_bruteforce(p)
        formula = conjugates_formula(p)
        assert brute.count == 2
        assert formula.count == 1
        assert formula.warnings and formula.warnings[0].startswith(UNVERIFIED)
        assert conjugates_formula(p, verify=False).warnings == [UNVERIFIED]

    def test_unknown_object(self):
        with pytest.raises(ConjError, match="unknown object"):
            ConjProblem(inversion_problem().cone, "nowhere")
