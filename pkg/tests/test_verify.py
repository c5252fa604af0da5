import ast
import inspect
import random
from fractions import Fraction

from hypothesis import given, settings, strategies as st

import cisys.verify as verify
from cisys.engine import Specification
from cisys.involution import DivisionSpec, gbi
from cisys.polyalg import PolyRing
from cisys.verify import (
    is_groebner_basis,
    is_involutive_basis,
    is_minimal_involutive,
    reduced_groebner,
    same_ideal,
    sample_cell_point,
    satisfies_spec,
    specialize,
)

from _util import P, polys, rings

A, R = rings()
Rq = PolyRing(("x", "y"))
J2 = DivisionSpec.janet(2)


def test_oracle_imports_only_the_polynomial_layer():
    tree = ast.parse(inspect.getsource(verify))
    mods = {n.module for n in ast.walk(tree) if isinstance(n, ast.ImportFrom) and n.level}
    assert mods == {"polyalg"}


class TestSpecialize:
    def test_examples(self):
        assert specialize(P("b*x + y^2", R), {"a": 0, "b": 2}) == P("2*x + y^2", Rq)
        assert not specialize(P("a*x^2", R), {"a": 0, "b": 1})
        f = P("x + 1", Rq)
        assert specialize(f, {"a": 1, "b": 1}) is f

    @given(polys(A, 2, 2), polys(A, 2, 2), st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
    def test_homomorphism(self, c1, c2, point):
        x, y = R.gens()
        f = R.const(c1) * x + y
        g = R.const(c2) * x * y - 1
        s = lambda h: specialize(h, point)
        assert s(f * g) == s(f) * s(g)
        assert s(f + g) == s(f) + s(g)


class TestSpec:
    def test_examples(self):
        assert satisfies_spec({"a": 1, "b": 1}, Specification([], [P("a", A), P("b", A)]))
        assert satisfies_spec({"a": 0, "b": 2}, Specification([P("a", A)], [P("b", A)]))
        assert not satisfies_spec({"a": 0, "b": 0}, Specification([P("a", A)], [P("b", A)]))

    def test_sampler_solves_null_conditions(self):
        rng = random.Random(0)
        s = Specification([P("a^2 - 4", A), P("b - a", A)], [])
        for _ in range(5):
            pt = sample_cell_point(s, A, rng)
            assert pt is not None and satisfies_spec(pt, s) and abs(pt[0]) == 2

    def test_sampler_gives_up_without_rational_points(self):
        assert sample_cell_point(Specification([P("a^2 + 1", A)], []), A, random.Random(0), attempts=5) is None


class TestInvolutive:
    def test_examples(self):
        assert is_involutive_basis([P("x^2", Rq), P("y^2", Rq), P("x*y^2", Rq)], J2)
        assert not is_involutive_basis([P("x^2", Rq), P("y^2", Rq)], J2)
        assert is_involutive_basis([], J2)

    def test_minimality(self):
        G = [P("x^2", Rq), P("y^2", Rq), P("x*y^2", Rq)]
        assert is_minimal_involutive(G, J2)
        assert not is_minimal_involutive(G + [P("x^2*y", Rq)], J2)

    @settings(max_examples=40)
    @given(st.lists(polys(Rq, 3, 3), min_size=1, max_size=3))
    def test_involutive_implies_groebner(self, F):
        F = [f for f in F if f]
        if not F:
            return
        G = gbi(F, J2)
        assert is_involutive_basis(G, J2) and is_groebner_basis(G)
        if is_involutive_basis(F, J2):
            assert is_groebner_basis(F)

    @settings(max_examples=40)
    @given(st.lists(polys(Rq, 2, 2), min_size=1, max_size=3))
    def test_agrees_with_completion_on_autoreduced_input(self, F):
        F = [f for f in F if f]
        if not F:
            return
        G = gbi(F, J2)
        assert is_involutive_basis(G, J2)
        if verify.is_l_autoreduced(F, J2):
            mon = sorted((f.monic() for f in F), key=lambda g: Rq.order.key(g.lm))
            assert is_involutive_basis(F, J2) == (gbi(F, J2) == mon)


class TestGroebner:
    def test_examples(self):
        assert is_groebner_basis([P("y^3", Rq), P("2*x + y^2", Rq)])
        assert same_ideal([P("-y^3", Rq), P("2*x + y^2", Rq)], [P("y^3", Rq), P("2*x + y^2", Rq)])
        assert not is_groebner_basis([P("x*y - 1", Rq), P("x", Rq)])

    def test_reduced(self):
        G = reduced_groebner([P("x*y - 1", Rq), P("x", Rq)])
        assert G == [Rq.one]

    def test_zero_ideal(self):
        assert same_ideal([], [Rq.zero])
        assert not same_ideal([], [P("x", Rq)])


def test_rational_roots():
    assert verify._rational_roots([Fraction(-1), Fraction(0), Fraction(4)]) == [Fraction(-1, 2), Fraction(1, 2)]
    assert verify._rational_roots([Fraction(0), Fraction(1)]) == [Fraction(0)]
