"""End-to-end analyses: generic test, exact index, closure, bounds, ranks."""

import pytest

from polyaccess import (
    CapReached,
    Ideal,
    Polynomial,
    SystemSpec,
    VarTable,
    VectorField,
    bound_analysis,
    closure_singular_analysis,
    exact_index_analysis,
    generic_test,
    ideal_equal,
    in_radical,
    parse_polynomial,
    planar_depth_bound,
    rank_l_analysis,
    sample_check,
    strong_analysis,
)
from polyaccess.rationals import Q

V2 = VarTable(("x1", "x2"))
V3 = VarTable(("x1", "x2", "x3"))


def p(text, vars=V2):
    return parse_polynomial(text, vars)


def vf(texts, label, vars=V2):
    return VectorField([p(t, vars) for t in texts], label)


def planar():
    zero = VectorField([Polynomial.zero(V2)] * 2, "f")
    return SystemSpec(V2, zero, [vf(("x2", "0"), "g1"), vf(("0", "x1^2"), "g2")])


def circle():
    f = vf(("0", "x2^2 + x3^2 - 1", "0"), "f", V3)
    g = vf(("x2", "x2*x3", "-x2^2"), "g", V3)
    return SystemSpec(V3, f, [g])


def rank_deficient():
    zero = VectorField([Polynomial.zero(V2)] * 2, "f")
    return SystemSpec(V2, zero, [vf(("x1", "0"), "g")])


class TestGenericTest:
    def test_planar_full_at_depth_zero(self):
        """Two independent inputs already span the plane generically."""
        res = generic_test(planar())
        assert res.rank == 2
        assert res.k_star == 0
        assert res.verdict == "generically accessible"

    def test_circle_needs_one_bracket(self):
        """The 3-state example reaches full rank at depth 1."""
        res = generic_test(circle())
        assert res.rank == 3
        assert res.k_star == 1

    def test_rank_deficient(self):
        """Rank below n means nowhere accessible, k* undefined."""
        res = generic_test(rank_deficient())
        assert res.rank == 1
        assert res.k_star is None
        assert res.verdict == "nowhere accessible"


class TestExactIndex:
    def test_planar(self):
        """Exact index 2 with the origin as the only singular point."""
        report = exact_index_analysis(planar())
        assert report.index_kind == "exact r*"
        assert report.index_value == 2
        assert report.route == "exact-index"
        assert report.verdict == "generically accessible"
        assert [str(g) for g in report.singular_generators()] == ["x1", "x2"]
        assert report.planar_depth_bound == 22

    def test_planar_trace_witnesses(self):
        """Non-invariance witnesses appear at depths 0 and 1."""
        report = exact_index_analysis(planar())
        witnesses = [r.invariance_witness for r in report.chain_trace
                     if r.invariance_witness]
        assert any("residue x2^2" in w for w in witnesses)
        assert any("residue x2" in w for w in witnesses)

    def test_nowhere(self):
        """Rank-deficient systems short-circuit to the whole space."""
        report = exact_index_analysis(rank_deficient())
        assert report.verdict == "nowhere accessible"
        assert report.index_kind == "undecided"
        assert report.singular_generators() == ()

    def test_auto_route_to_closure(self):
        """An unsupported radical reroutes to the invariant closure."""
        report = exact_index_analysis(circle())
        assert report.route == "invariant-closure"
        assert report.index_kind == "undecided"
        assert any("real radical unsupported" in n for n in report.notes)
        assert any("invariant closure" in n for n in report.notes)
        c = p("x2^2 + x3^2 - 1", V3)
        assert in_radical(c, report.singular_ideal)

    def test_no_auto_route(self):
        """With rerouting off the report stays undecided with no singular set."""
        report = exact_index_analysis(circle(), auto_route=False)
        assert report.route == "exact-index"
        assert report.index_kind == "undecided"
        assert report.singular_ideal is None

    def test_cap(self):
        """A too-small depth cap raises instead of guessing."""
        with pytest.raises(CapReached):
            exact_index_analysis(planar(), max_depth=1)


class TestClosure:
    def test_circle_singular_set(self):
        """The closure cuts out exactly the circle cylinder."""
        report = closure_singular_analysis(circle())
        assert report.route == "invariant-closure"
        c = p("x2^2 + x3^2 - 1", V3)
        assert in_radical(c, report.singular_ideal)
        # converse: every generator vanishes on V(c), where the variety
        # admits the rational parametrization x2 = (1-t^2)/(1+t^2),
        # x3 = 2t/(1+t^2)
        for t_num, t_den in ((0, 1), (1, 2), (2, 3), (-1, 3), (5, 1)):
            t = Q(t_num, t_den)
            den = 1 + t * t
            pt = [Q(7), (1 - t * t) / den, 2 * t / den]
            for g in report.singular_generators():
                assert g.evaluate(pt) == 0

    def test_planar_two_rounds(self):
        """The planar depth-0 seed closes in two enlargement rounds."""
        seed_note = closure_singular_analysis(planar()).notes
        assert any("2 enlargement rounds" in n for n in seed_note)


class TestBound:
    def test_planar(self):
        """Module chain bound r-hat = 2 matching the exact index."""
        report = bound_analysis(planar())
        assert report.index_kind == "upper bound r-hat"
        assert report.index_value == 2
        assert report.route == "module-bound"
        gb = [str(g) for g in report.singular_generators()]
        assert gb == ["x1^4", "x1^2*x2", "x1*x2^2", "x2^3"]

    def test_trace_labels(self):
        """Retained columns are recorded per depth."""
        report = bound_analysis(planar())
        labels = [rec.retained_labels for rec in report.chain_trace]
        assert labels[0] == ("g1", "g2")
        assert labels[1] == ("[g1,g2]",)

    def test_nowhere(self):
        """Deficient generic rank yields the zero ideal (all points)."""
        report = bound_analysis(rank_deficient())
        assert report.verdict == "nowhere accessible"
        assert report.singular_generators() == ()


class TestStrong:
    def test_planar_strong(self):
        """Driftless: strong and plain analyses coincide at l* = 2."""
        report = strong_analysis(planar())
        assert report.mode == "strong"
        assert report.index_kind == "exact l*"
        assert report.index_value == 2
        assert [str(g) for g in report.singular_generators()] == ["x1", "x2"]
        assert any("expected in {2, 3}" in n for n in report.notes)

    def test_strong_nowhere(self):
        """Strong rank deficiency reports nowhere strongly accessible."""
        report = strong_analysis(rank_deficient())
        assert report.verdict == "nowhere accessible"


class TestRankThreshold:
    def test_validates_threshold(self):
        """Thresholds outside 1..n are rejected."""
        with pytest.raises(ValueError):
            rank_l_analysis(planar(), 0)
        with pytest.raises(ValueError):
            rank_l_analysis(planar(), 3)

    def test_planar_rank_one(self):
        """The rank-1 locus of the planar system is both axes' intersection."""
        report = rank_l_analysis(planar(), 1)
        assert report.threshold == 1
        assert report.route == "rank-threshold"
        diag = sample_check(report, trials=40, seed=3,
                            extra_points=((Q(0), Q(0)), (Q(0), Q(5))))
        assert diag.mismatches == ()

    def test_planar_rank_full(self):
        """Threshold n reproduces the bound-route singular ideal."""
        full = rank_l_analysis(planar(), 2)
        bound = bound_analysis(planar())
        assert ideal_equal(full.singular_ideal, bound.singular_ideal)


class TestSampleCheck:
    def test_planar_clean(self):
        """Vanishing generators exactly track rank drops on samples."""
        report = exact_index_analysis(planar())
        diag = sample_check(report, trials=60, seed=1,
                            extra_points=((Q(0), Q(0)), (Q(0), Q(7)), (Q(5), Q(0))))
        assert diag.mismatches == ()
        assert diag.checked >= 60
        # only the origin lies on V(x1, x2); the axis points probe consistency
        # off the variety
        assert diag.on_variety >= 1

    def test_requires_matrix(self):
        """Reports without a stabilized matrix cannot be sampled."""
        report = exact_index_analysis(rank_deficient())
        with pytest.raises(ValueError):
            sample_check(report)


class TestPlanarBound:
    def test_formula(self):
        """Depth bound 6d^2 - 2d + 2 for planar systems."""
        assert planar_depth_bound(2) == 22
        assert planar_depth_bound(1) == 6
        assert planar_depth_bound(3) == 50

    def test_only_planar(self):
        """The bound is attached only to 2-state systems."""
        assert exact_index_analysis(circle()).planar_depth_bound is None
