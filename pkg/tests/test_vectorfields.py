"""Vector fields, Lie operations, and bracket families."""

import random

import pytest
import sympy

from polyaccess import (
    DEGREVLEX,
    Polynomial,
    SystemSpec,
    VarTable,
    VectorField,
    extend_family,
    lie_bracket,
    lie_derivative,
    parse_polynomial,
)
from polyaccess.rationals import Q
from polyaccess.vectorfields import BracketFamily

V3 = VarTable(("x1", "x2", "x3"))


def p(text, vars=V3):
    return parse_polynomial(text, vars)


def vf(texts, label, vars=V3):
    return VectorField([p(t, vars) for t in texts], label)


def random_field(rng, vars, label, max_deg=3):
    comps = []
    for _ in range(len(vars)):
        acc = Polynomial.zero(vars)
        for _ in range(3):
            mono = [0] * len(vars)
            for _ in range(rng.randint(0, max_deg)):
                mono[rng.randrange(len(vars))] += 1
            acc = acc + Polynomial.from_terms(
                vars, [(Q(rng.randint(-4, 4)), tuple(mono))])
        comps.append(acc)
    return VectorField(comps, label)


def sympy_bracket(f, g, syms):
    """Independent bracket oracle: Jacobian form [f,g] = Dg f - Df g."""
    fs = [sympy.sympify(str(c).replace("^", "**")) for c in f.components]
    gs = [sympy.sympify(str(c).replace("^", "**")) for c in g.components]
    out = []
    for j in range(len(syms)):
        expr = sympy.Integer(0)
        for i, s in enumerate(syms):
            expr += sympy.diff(gs[j], s) * fs[i] - sympy.diff(fs[j], s) * gs[i]
        out.append(sympy.expand(expr))
    return out


class TestLieDerivative:
    def test_directional(self):
        """L_f of a scalar is the gradient paired with f."""
        f = vf(("x2", "-x1", "0"), "f")
        assert lie_derivative(f, p("x1^2 + x2^2")) == Polynomial.zero(V3)
        assert lie_derivative(f, p("x1")) == p("x2")

    def test_product_rule(self):
        """L_f(ab) = (L_f a) b + a (L_f b)."""
        rng = random.Random(3)
        f = random_field(rng, V3, "f")
        a, b = p("x1*x3 - x2"), p("x2^2 + 1")
        assert lie_derivative(f, a * b) == \
            lie_derivative(f, a) * b + a * lie_derivative(f, b)


class TestLieBracket:
    def test_antisymmetry_random(self):
        """[f,g] = -[g,f] on random fields."""
        rng = random.Random(17)
        for _ in range(20):
            f = random_field(rng, V3, "f")
            g = random_field(rng, V3, "g")
            fg = lie_bracket(f, g)
            gf = lie_bracket(g, f)
            for a, b in zip(fg.components, gf.components):
                assert a == -b

    def test_self_bracket_vanishes(self):
        """[f,f] = 0."""
        rng = random.Random(23)
        f = random_field(rng, V3, "f")
        assert lie_bracket(f, f).is_zero()

    def test_bilinearity(self):
        """[f, g+h] = [f,g] + [f,h]."""
        rng = random.Random(29)
        f = random_field(rng, V3, "f")
        g = random_field(rng, V3, "g")
        h = random_field(rng, V3, "h")
        gh = VectorField([a + b for a, b in zip(g.components, h.components)], "g+h")
        lhs = lie_bracket(f, gh)
        rhs1 = lie_bracket(f, g)
        rhs2 = lie_bracket(f, h)
        for a, b, c in zip(lhs.components, rhs1.components, rhs2.components):
            assert a == b + c

    def test_jacobi_random(self):
        """[f,[g,h]] + [g,[h,f]] + [h,[f,g]] = 0 on random triples."""
        rng = random.Random(31)
        for _ in range(10):
            f = random_field(rng, V3, "f", max_deg=2)
            g = random_field(rng, V3, "g", max_deg=2)
            h = random_field(rng, V3, "h", max_deg=2)
            total = [
                a + b + c
                for a, b, c in zip(
                    lie_bracket(f, lie_bracket(g, h)).components,
                    lie_bracket(g, lie_bracket(h, f)).components,
                    lie_bracket(h, lie_bracket(f, g)).components,
                )
            ]
            assert all(t.is_zero() for t in total)

    def test_matches_independent_oracle(self):
        """Brackets agree with a Jacobian-based symbolic engine."""
        rng = random.Random(37)
        syms = sympy.symbols("x1 x2 x3")
        for _ in range(10):
            f = random_field(rng, V3, "f")
            g = random_field(rng, V3, "g")
            ours = lie_bracket(f, g)
            theirs = sympy_bracket(f, g, syms)
            for comp, expect in zip(ours.components, theirs):
                got = sympy.sympify(str(comp).replace("^", "**"))
                assert sympy.expand(got - expect) == 0


class TestSystemSpec:
    def test_generators_by_mode(self):
        """Accessibility includes the drift; strong accessibility does not."""
        f = vf(("0", "x2^2 + x3^2 - 1", "0"), "f")
        g = vf(("x2", "x2*x3", "-x2^2"), "g")
        sys_ = SystemSpec(V3, f, [g])
        assert [x.label for x in sys_.generators("accessibility")] == ["f", "g"]
        assert [x.label for x in sys_.generators("strong")] == ["g"]
        assert [x.label for x in sys_.operators()] == ["f", "g"]

    def test_zero_drift_skipped(self):
        """A zero drift stays a depth-0 generator but is not an operator."""
        zero = VectorField([Polynomial.zero(V3)] * 3, "f")
        g = vf(("1", "0", "0"), "g")
        sys_ = SystemSpec(V3, zero, [g])
        assert [x.label for x in sys_.generators("accessibility")] == ["f", "g"]
        assert [x.label for x in sys_.operators()] == ["g"]

    def test_requires_input(self):
        """At least one input field is required."""
        zero = VectorField([Polynomial.zero(V3)] * 3, "f")
        with pytest.raises(ValueError):
            SystemSpec(V3, zero, [])


class TestBracketFamily:
    def test_depth_growth(self):
        """Each extension adds exactly the new depth's brackets."""
        f = vf(("0", "0"), "f", VarTable(("x1", "x2")))
        v2 = VarTable(("x1", "x2"))
        g1 = vf(("x2", "0"), "g1", v2)
        g2 = vf(("0", "x1^2"), "g2", v2)
        sys_ = SystemSpec(v2, f, [g1, g2])
        fam = BracketFamily.initial(sys_)
        assert fam.depth == 0
        assert [x.label for x in fam.members()] == ["g1", "g2"]
        fam = extend_family(fam)
        assert fam.depth == 1
        assert [x.label for x in fam.generations[1]] == ["[g1,g2]"]
        assert [str(c) for c in fam.generations[1][0].components] == \
            ["-x1^2", "2*x1*x2"]
        assert [x.label for x in fam.members(0)] == ["g1", "g2"]

    def test_scalar_duplicates_pruned(self):
        """Brackets equal to a prior member up to a rational scale are dropped."""
        v2 = VarTable(("x1", "x2"))
        zero = VectorField([Polynomial.zero(v2)] * 2, "f")
        g1 = vf(("x2", "0"), "g1", v2)
        g2 = vf(("0", "x2"), "g2", v2)
        sys_ = SystemSpec(v2, zero, [g1, g2])
        # [g1,g2] = (-x2, 0) = -g1 and [g2,g1] = g1: both land on g1's ray.
        fam = extend_family(BracketFamily.initial(sys_))
        assert fam.generations[1] == []
