"""Command-line front end: parse a system file, run the requested analysis,
and print either a text report or a deterministic structured document."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .analysis import (
    INDEX_BOUND_L,
    INDEX_BOUND_R,
    INDEX_EXACT_L,
    INDEX_EXACT_R,
    INDEX_UNDECIDED,
    bound_analysis,
    closure_singular_analysis,
    exact_index_analysis,
    rank_l_analysis,
    strong_analysis,
)
from .errors import CapReached, ClosureError, ParseError
from .immersion import pull_back_singular, vanishing_coordinates, verify_immersion
from .systemfile import parse_file

_INDEX_PHRASE = {
    INDEX_EXACT_R: "r* = {v}",
    INDEX_EXACT_L: "l* = {v}",
    INDEX_BOUND_R: "r-hat = {v} (upper bound)",
    INDEX_BOUND_L: "l-hat = {v} (upper bound)",
    INDEX_UNDECIDED: "index undecided",
}


def build_arg_parser():
    ap = argparse.ArgumentParser(
        prog="polyaccess",
        description="Accessibility analysis of polynomial control-affine "
                    "systems: singular sets as ideals, exact indices, and "
                    "certified upper bounds.",
    )
    sub = ap.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("file", help="system description file")
        p.add_argument("--order", choices=("degrevlex", "lex", "deglex"),
                       help="monomial order (overrides the file)")
        p.add_argument("--max-depth", type=int, metavar="K",
                       help="bracket depth cap (overrides the file)")
        p.add_argument("--seed", type=int, metavar="N",
                       help="seed for the generic-rank sampling")
        p.add_argument("--format", choices=("text", "structured"), default="text",
                       help="output format")
        p.add_argument("--strict", action="store_true",
                       help="exit nonzero when a depth cap stops the analysis")
        return p

    add("index", "exact accessibility index and limit singular set")
    add("singular", "limit singular set by invariant closure, no index claim")
    add("bound", "module-chain stabilization bound and its singular set")
    add("strong", "strong accessibility: index and singular set")
    p = add("rank", "locus where the family rank stays below a threshold")
    p.add_argument("--l", type=int, metavar="L", dest="l",
                   help="rank threshold (defaults to the file's rank-threshold)")
    p = add("immerse", "derive the polynomial lift of a transcendental system")
    p.add_argument("--check", action="store_true",
                   help="print the verification certificates")
    add("full", "every analysis that applies to the file")
    return ap


def _overrides(args):
    return {
        "order": args.order,
        "max-depth": args.max_depth,
        "seed": args.seed,
    }


def _ideal_phrase(gens):
    if not gens:
        return "whole state space"
    strs = [str(g) for g in gens]
    if strs == ["1"]:
        return "⟨1⟩ = ∅"
    return "⟨" + ", ".join(strs) + "⟩"


def _index_phrase(report):
    return _INDEX_PHRASE[report.index_kind].format(v=report.index_value)


def _headline(report):
    if report.threshold is not None:
        return (f"S^{{<{report.threshold}}}: {_ideal_phrase(report.singular_generators())}"
                f"; {_index_phrase(report)}")
    return f"{_index_phrase(report)}; S_∞: {_ideal_phrase(report.singular_generators())}"


def _trace_lines(report):
    lines = []
    for rec in report.chain_trace:
        bits = []
        if rec.family_size is not None:
            bits.append(f"family {rec.family_size}")
        if rec.generic_rank is not None:
            bits.append(f"generic rank {rec.generic_rank}")
        if rec.minor_generators:
            bits.append("minors " + _ideal_phrase(rec.minor_generators))
        if rec.radical_status is not None:
            bits.append(f"radical {rec.radical_status}")
        if rec.invariance_witness is not None:
            bits.append(rec.invariance_witness)
        if rec.module_gb_size is not None:
            bits.append(f"module basis {rec.module_gb_size}")
        if rec.retained_labels:
            bits.append("columns " + ", ".join(rec.retained_labels))
        lines.append(f"  depth {rec.depth}: " + "; ".join(bits))
    return lines


def _report_lines(report, system, verdict_note=None):
    n = len(system.vars)
    lines = [_headline(report)]
    lines.append(f"mode: {report.mode}")
    lines.append(f"route: {report.route}")
    lines.append(f"generic rank: {report.generic_rank} of {n}")
    verdict = report.verdict
    if verdict_note:
        verdict += f" ({verdict_note})"
    lines.append(f"verdict: {verdict}")
    if report.planar_depth_bound is not None:
        lines.append(f"planar depth bound: {report.planar_depth_bound}")
    gens = report.singular_generators()
    if gens:
        lines.append("singular set generators:")
        lines.extend(f"  {g}" for g in gens)
    for note in report.notes:
        lines.append(f"note: {note}")
    trace = _trace_lines(report)
    if trace:
        lines.append("chain trace:")
        lines.extend(trace)
    return lines


def _report_doc(report, system):
    doc = {
        "mode": report.mode,
        "route": report.route,
        "verdict": report.verdict,
        "generic_rank": report.generic_rank,
        "state_dimension": len(system.vars),
        "index_kind": report.index_kind,
        "index_value": report.index_value,
        "singular_generators": [str(g) for g in report.singular_generators()],
        "capped": report.capped,
    }
    if report.threshold is not None:
        doc["threshold"] = report.threshold
    if report.planar_depth_bound is not None:
        doc["planar_depth_bound"] = report.planar_depth_bound
    if report.notes:
        doc["notes"] = list(report.notes)
    trace = []
    for rec in report.chain_trace:
        entry = {"depth": rec.depth}
        if rec.family_size is not None:
            entry["family_size"] = rec.family_size
        if rec.generic_rank is not None:
            entry["generic_rank"] = rec.generic_rank
        if rec.minor_generators:
            entry["minor_generators"] = [str(g) for g in rec.minor_generators]
        if rec.radical_status is not None:
            entry["radical_status"] = rec.radical_status
        if rec.invariance_witness is not None:
            entry["invariance_witness"] = rec.invariance_witness
        if rec.module_gb_size is not None:
            entry["module_gb_size"] = rec.module_gb_size
        if rec.retained_labels:
            entry["retained_labels"] = list(rec.retained_labels)
        trace.append(entry)
    if trace:
        doc["chain_trace"] = trace
    return doc


def _pull_back(parsed, report):
    pull = pull_back_singular(parsed.immersed, report.singular_ideal)
    vanish = () if pull.empty else vanishing_coordinates(pull.ideal)
    return pull, vanish


def _pull_back_lines(parsed, report, pull, vanish):
    lines = ["pull-back to the image variety:"]
    lines.append(f"  intersection ideal: {_ideal_phrase(pull.ideal.groebner_basis())}")
    lines.append(f"  empty: {'yes' if pull.empty else 'no'} ({pull.grade}: {pull.detail})")
    if pull.witness is not None:
        point = ", ".join(str(c) for c in pull.witness)
        lines.append(f"  witness image point: ({point})")
    if vanish:
        lines.append("  coordinates forced to vanish on it: " + ", ".join(vanish))
    n_source = len(parsed.source_vars)
    if report.threshold == n_source:
        if pull.empty and pull.grade == "algebraic proof":
            lines.append("  empty intersection with im T; accessible everywhere")
        elif pull.empty:
            lines.append("  no sampled image point meets the singular set "
                         "(sampling, not a proof)")
        else:
            lines.append("  the source system has singular points on im T")
    return lines


def _pull_back_doc(pull, vanish):
    doc = {
        "intersection_generators": [str(g) for g in pull.ideal.groebner_basis()],
        "empty": pull.empty,
        "grade": pull.grade,
        "detail": pull.detail,
    }
    if pull.witness is not None:
        doc["witness"] = [str(c) for c in pull.witness]
    if vanish:
        doc["vanishing_coordinates"] = list(vanish)
    return doc


def _entry_text(imap, j, alias):
    e = imap.entries[j]
    identity = list(range(len(imap.target_vars)))
    if e.kind in ("sin", "cos"):
        return f"{e.kind}({imap.source_vars.names[e.arg]})"
    if e.kind == "reciprocal":
        return f"1/({e.expr.map_vars(alias, identity)})"
    return str(e.expr.map_vars(alias, identity))


def _immersion_lines(parsed, check):
    imap = parsed.immersion
    src = parsed.source_vars
    alias = parsed.parse_vars
    identity = list(range(len(imap.target_vars)))
    lines = ["immersion:"]
    lines.append("  targets: " + " ".join(imap.target_vars.names))
    n = len(src)
    for j in range(n, len(imap.target_vars)):
        lines.append(f"  {imap.target_vars.names[j]} = {_entry_text(imap, j, alias)}")
    for rel in imap.relation_generators():
        lines.append(f"  relation: {rel.map_vars(alias, identity)}")
    sys_ = parsed.system
    lines.append("lifted system:")
    lines.append("  drift: " + ", ".join(str(c) for c in sys_.drift.components))
    for g in sys_.inputs:
        lines.append(f"  input {g.label}: " + ", ".join(str(c) for c in g.components))
    result = verify_immersion(parsed.analytic, parsed.immersed)
    if result.ok:
        lines.append("verification: ok (fields tangent to the relation variety; "
                     "pushforward matches the lift)")
    else:
        lines.append(f"verification: FAILED ({result.kind} check, component "
                     f"{result.index}, field {result.field_label}, "
                     f"residue {result.residue})")
    if check and result.ok:
        fields = [sys_.drift] + list(sys_.inputs) if not sys_.drift.is_zero() \
            else list(sys_.inputs)
        for rel in imap.relation_generators():
            labels = ", ".join(f.label for f in fields)
            lines.append(f"  certificate: L_X({rel}) lies in the relation ideal "
                         f"for X in {{{labels}}}")
    return lines, result


def _immersion_doc(parsed):
    imap = parsed.immersion
    src = parsed.source_vars
    alias = parsed.parse_vars
    identity = list(range(len(imap.target_vars)))
    n = len(src)
    result = verify_immersion(parsed.analytic, parsed.immersed)
    doc = {
        "targets": list(imap.target_vars.names),
        "entries": {
            imap.target_vars.names[j]: _entry_text(imap, j, alias)
            for j in range(n, len(imap.target_vars))
        },
        "relations": [str(r.map_vars(alias, identity))
                      for r in imap.relation_generators()],
        "lifted_drift": [str(c) for c in parsed.system.drift.components],
        "lifted_inputs": {
            g.label: [str(c) for c in g.components] for g in parsed.system.inputs
        },
        "verified": result.ok,
    }
    if not result.ok:
        doc["failure"] = {
            "kind": result.kind,
            "component": result.index,
            "field": result.field_label,
            "residue": str(result.residue),
        }
    return doc


def _rank_threshold(parsed, args):
    l = getattr(args, "l", None)
    if l is None:
        l = parsed.options.get("rank-threshold")
    if l is None and parsed.immersed is not None:
        l = len(parsed.source_vars)
    return l


def _run_command(parsed, args):
    """Returns (text_lines, doc). Raises CapReached when a depth cap stops
    the analysis before any result."""
    opts = parsed.options
    system = parsed.system
    mode = opts["mode"]
    seed = opts["seed"]
    depth = opts["max-depth"]
    command = args.command
    doc = {"schema": 1, "command": command, "system": parsed.name}
    if command == "index":
        report = exact_index_analysis(system, mode, max_depth=depth, seed=seed)
        return _report_lines(report, system), {**doc, **_report_doc(report, system)}
    if command == "singular":
        report = closure_singular_analysis(system, mode, max_depth=depth, seed=seed)
        return _report_lines(report, system), {**doc, **_report_doc(report, system)}
    if command == "bound":
        report = bound_analysis(system, mode, max_depth=depth, seed=seed)
        return _report_lines(report, system), {**doc, **_report_doc(report, system)}
    if command == "strong":
        report = strong_analysis(system, max_depth=depth, seed=seed)
        return _report_lines(report, system), {**doc, **_report_doc(report, system)}
    if command == "rank":
        l = _rank_threshold(parsed, args)
        if l is None:
            raise ParseError("rank needs a threshold: pass --l or set the "
                             "rank-threshold option", 1, 1)
        report = rank_l_analysis(system, l, mode, max_depth=depth, seed=seed)
        note = "the lifted system; the pull-back below settles the source" \
            if parsed.immersed is not None else None
        lines = _report_lines(report, system, verdict_note=note)
        rdoc = _report_doc(report, system)
        if parsed.immersed is not None:
            pull, vanish = _pull_back(parsed, report)
            lines.extend(_pull_back_lines(parsed, report, pull, vanish))
            rdoc["pull_back"] = _pull_back_doc(pull, vanish)
        return lines, {**doc, **rdoc}
    if command == "immerse":
        if parsed.immersion is None:
            raise ParseError("the file declares no immersion block", 1, 1)
        lines, _result = _immersion_lines(parsed, args.check)
        return lines, {**doc, "immersion": _immersion_doc(parsed)}
    if command == "full":
        return _run_full(parsed, args, doc)
    raise AssertionError(command)


def _run_full(parsed, args, doc):
    opts = parsed.options
    system = parsed.system
    mode = opts["mode"]
    seed = opts["seed"]
    depth = opts["max-depth"]
    lines = []
    if parsed.immersion is not None:
        ilines, _ = _immersion_lines(parsed, check=False)
        lines.extend(ilines)
        lines.append("")
        doc["immersion"] = _immersion_doc(parsed)
    index_report = exact_index_analysis(system, mode, max_depth=depth, seed=seed)
    lines.append("== index ==")
    lines.extend(_report_lines(index_report, system))
    doc["index"] = _report_doc(index_report, system)
    bound_report = bound_analysis(system, mode, max_depth=depth, seed=seed)
    lines.append("")
    lines.append("== bound ==")
    lines.extend(_report_lines(bound_report, system))
    doc["bound"] = _report_doc(bound_report, system)
    strong_report = strong_analysis(system, max_depth=depth, seed=seed)
    lines.append("")
    lines.append("== strong ==")
    lines.extend(_report_lines(strong_report, system))
    doc["strong"] = _report_doc(strong_report, system)
    l = _rank_threshold(parsed, args)
    if l is not None:
        rank_report = rank_l_analysis(system, l, mode, max_depth=depth, seed=seed)
        lines.append("")
        lines.append(f"== rank {l} ==")
        note = "the lifted system; the pull-back below settles the source" \
            if parsed.immersed is not None else None
        lines.extend(_report_lines(rank_report, system, verdict_note=note))
        rdoc = _report_doc(rank_report, system)
        if parsed.immersed is not None:
            pull, vanish = _pull_back(parsed, rank_report)
            lines.extend(_pull_back_lines(parsed, rank_report, pull, vanish))
            rdoc["pull_back"] = _pull_back_doc(pull, vanish)
        doc["rank"] = rdoc
    return lines, doc


def main(argv=None):
    args = build_arg_parser().parse_args(argv)
    try:
        text = Path(args.file).read_text()
    except OSError as e:
        print(f"error: cannot read {args.file}: {e}", file=sys.stderr)
        return 2
    name = Path(args.file).stem
    try:
        parsed = parse_file(text, name=name, overrides=_overrides(args))
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ClosureError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    try:
        lines, doc = _run_command(parsed, args)
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except CapReached as e:
        message = (f"cap reached: {e.what} stopped at depth {e.cap} without a "
                   f"result; raise --max-depth or use the bound command")
        if args.strict:
            print(f"error: {message}", file=sys.stderr)
            return 3
        print(message)
        return 0
    if args.format == "structured":
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print("\n".join(lines))
    return 0


if __name__ == "__main__":
    sys.exit(main())
