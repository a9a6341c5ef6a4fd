"""System description files: grammar, immersion blocks, options, rendering."""

import pytest

from polyaccess import ParseError, parse_file, render_file

PLANAR = """\
# planar system
vars x1 x2
drift: 0, 0
input g1: x2, 0
input g2: 0, x1^2
"""

UNICYCLE = """\
vars x1 x2 x3
input g1: cos(x3), sin(x3), 0
input g2: 0, 0, 1
immersion:
  targets z1 z2 z3 z4 z5
  z4 = sin(x3)
  z5 = cos(x3)
  relation: z4^2 + z5^2 - 1
options:
  rank-threshold 3
"""

PENDULUM = """\
vars x1 x2 x3 x4
drift: x2, cos(x3)*x4^2 / (2 - sin(x3)^2) - 10, x4, sin(x3)*cos(x3)*x4^2 / (2 - sin(x3)^2)
input g: 0, 1/(2 - sin(x3)^2), 0, sin(x3)/(2 - sin(x3)^2)
immersion:
  targets z1 z2 z3 z4 z5 z6 z7
  z5 = sin(x3)
  z6 = cos(x3)
  z7 = 1/(2 - sin(x3)^2)
"""


class TestBasicGrammar:
    def test_planar(self):
        """Plain polynomial files parse to a system over the source table."""
        parsed = parse_file(PLANAR, name="planar")
        assert parsed.source_vars.names == ("x1", "x2")
        assert parsed.immersion is None
        assert [str(c) for c in parsed.system.inputs[1].components] == ["0", "x1^2"]
        assert parsed.options["order"] == "degrevlex"
        assert parsed.options["seed"] == 0

    def test_drift_optional(self):
        """A missing drift section means the zero drift."""
        parsed = parse_file("vars x1\ninput g: 1\n")
        assert parsed.system.drift.is_zero()

    def test_comments_and_blanks(self):
        """Comments and blank lines are ignored everywhere."""
        text = "# lead\n\nvars x1  # trailing\n\ninput g: x1 # c\n"
        parsed = parse_file(text)
        assert [str(c) for c in parsed.system.inputs[0].components] == ["x1"]

    def test_component_arity(self):
        """Wrong component counts are positioned errors."""
        with pytest.raises(ParseError) as info:
            parse_file("vars x1 x2\ndrift: 0\ninput g: 1, 0\n")
        assert info.value.line == 2

    def test_duplicate_input(self):
        """Input names must be unique."""
        with pytest.raises(ParseError, match="duplicate input"):
            parse_file("vars x1\ninput g: x1\ninput g: 1\n")

    def test_unknown_section(self):
        """Unknown sections name the alternatives."""
        with pytest.raises(ParseError, match="unknown section"):
            parse_file("vars x1\nbogus: 1\ninput g: x1\n")

    def test_unknown_variable_position(self):
        """Component errors carry line and column."""
        with pytest.raises(ParseError) as info:
            parse_file("vars x1 x2\ninput g: x1, x3\n")
        assert (info.value.line, info.value.col) == (2, 14)

    def test_missing_vars(self):
        """Fields cannot precede a vars declaration."""
        with pytest.raises(ParseError, match="missing vars"):
            parse_file("input g: 1\n")

    def test_reserved_names(self):
        """Section keywords cannot be variable names."""
        with pytest.raises(ParseError, match="reserved"):
            parse_file("vars sin x1\ninput g: 1, 1\n")


class TestOptions:
    def test_parsed(self):
        """All option keys round through."""
        text = ("vars x1\ninput g: x1\noptions:\n  order lex\n  max-depth 9\n"
                "  seed 4\n  mode strong\n  rank-threshold 1\n")
        opts = parse_file(text).options
        assert opts == {"order": "lex", "max-depth": 9, "seed": 4,
                        "mode": "strong", "rank-threshold": 1}

    def test_bad_values(self):
        """Bad option values are positioned errors."""
        for line in ("order foo", "mode foo", "max-depth 0", "seed x",
                     "rank-threshold -2", "bogus 3"):
            with pytest.raises(ParseError):
                parse_file(f"vars x1\ninput g: x1\noptions:\n  {line}\n")

    def test_overrides_win(self):
        """CLI overrides replace file options; None leaves them alone."""
        text = "vars x1\ninput g: x1\noptions:\n  seed 4\n"
        opts = parse_file(text, overrides={"seed": 7, "order": None}).options
        assert opts["seed"] == 7
        assert opts["order"] == "degrevlex"


class TestImmersionBlock:
    def test_unicycle(self):
        """Transcendental calls resolve against the declared entries."""
        parsed = parse_file(UNICYCLE, name="unicycle")
        assert parsed.immersion is not None
        assert [str(c) for c in parsed.system.inputs[0].components] == \
            ["z5", "z4", "0", "0", "0"]
        assert parsed.options["rank-threshold"] == 3

    def test_pendulum_reciprocal(self):
        """Reciprocal denominators match entries up to polynomial identity."""
        parsed = parse_file(PENDULUM, name="pendulum")
        assert [str(c) for c in parsed.system.inputs[0].components] == \
            ["0", "z7", "0", "z5*z7", "0", "0", "0"]
        assert [str(c) for c in parsed.system.drift.components] == \
            ["z2", "z4^2*z6*z7 - 10", "z4", "z4^2*z5*z6*z7",
             "z4*z6", "-z4*z5", "2*z4*z5*z6*z7^2"]

    def test_undeclared_transcendental(self):
        """sin of an angle with no entry is an error."""
        text = ("vars x1 x2\ninput g: sin(x1), 0\nimmersion:\n"
                "  targets z1 z2 z3\n  z3 = sin(x2)\n")
        with pytest.raises(ParseError, match="undeclared transcendental"):
            parse_file(text)

    def test_undeclared_reciprocal(self):
        """Division by an undeclared denominator is an error."""
        text = ("vars x1\ninput g: 1/(1 + x1^2)\nimmersion:\n"
                "  targets z1 z2\n  z2 = sin(x1)\n")
        with pytest.raises(ParseError, match="undeclared reciprocal"):
            parse_file(text)

    def test_missing_entry(self):
        """Every non-prefix target needs exactly one entry."""
        text = "vars x1\ninput g: x1\nimmersion:\n  targets z1 z2\n"
        with pytest.raises(ParseError, match="missing entry"):
            parse_file(text)

    def test_prefix_entry_rejected(self):
        """Identity prefix entries are implicit and may not be written."""
        text = ("vars x1\ninput g: x1\nimmersion:\n  targets z1 z2\n"
                "  z1 = x1\n  z2 = sin(x1)\n")
        with pytest.raises(ParseError, match="implicit"):
            parse_file(text)

    def test_wrong_relation(self):
        """Relations must follow from the declared entries."""
        text = ("vars x1\ninput g: x1\nimmersion:\n  targets z1 z2 z3\n"
                "  z2 = sin(x1)\n  z3 = cos(x1)\n  relation: z2 - 1\n")
        with pytest.raises(ParseError, match="relation does not follow"):
            parse_file(text)

    def test_good_relation_accepted(self):
        """Consequences of the auto relations pass the membership check."""
        text = ("vars x1\ninput g: x1\nimmersion:\n  targets z1 z2 z3\n"
                "  z2 = sin(x1)\n  z3 = cos(x1)\n"
                "  relation: z2^2 + z3^2 - 1\n"
                "  relation: z2^4 + 2*z2^2*z3^2 + z3^4 - 1\n")
        parsed = parse_file(text)
        assert parsed.immersion is not None


class TestRoundTrip:
    def test_fields_and_options_survive(self):
        """parse(render(parse(f))) reproduces fields, options, entries."""
        for text, name in ((PLANAR, "planar"), (UNICYCLE, "unicycle"),
                           (PENDULUM, "pendulum")):
            first = parse_file(text, name=name)
            rendered = render_file(first)
            second = parse_file(rendered, name=name)
            assert second.system.drift == first.system.drift
            assert second.system.inputs == first.system.inputs
            assert second.options == first.options
            if first.immersion is not None:
                assert second.immersion.entries == first.immersion.entries
                assert second.immersion.target_vars == first.immersion.target_vars
            assert render_file(second) == rendered

    def test_render_is_stable(self):
        """Rendering the same parse twice is byte-identical."""
        parsed = parse_file(PENDULUM, name="pendulum")
        assert render_file(parsed) == render_file(parsed)
