"""Walk the exact accessibility-index search on the planar two-input system.

The search extends the bracket family one depth at a time.  At each depth it
takes the ideal of maximal minors of the bracket matrix, passes to its
restricted real radical, and tests that radical for invariance under the
system fields.  The first invariant radical freezes: its depth is the exact
index r*, and its variety is the limit singular set, so no deeper bracket can
ever shrink the singular locus further.
"""

from pathlib import Path

from polyaccess import (
    BracketFamily,
    build_matrix,
    exact_index_analysis,
    extend_family,
    is_invariant,
    minor_ideal,
    parse_file,
    real_radical_restricted,
    reduce_columns,
)

parsed = parse_file((Path(__file__).parent / "systems" / "planar.sys").read_text(),
                    "planar")
system = parsed.system

print("system:", ", ".join(str(g) for g in (system.drift,) + system.inputs))
print()

fam = BracketFamily.initial(system, "accessibility")
for depth in range(3):
    M = build_matrix(reduce_columns(fam.members()))
    I = minor_ideal(M, system.dimension)
    rr = real_radical_restricted(I)
    inv = is_invariant(rr, system.operators())
    print(f"depth {depth}: columns {[c.label for c in fam.members()]}")
    print(f"  minor ideal      {I}")
    print(f"  real radical     {rr}")
    if inv.invariant:
        print("  invariant: yes, the chain has converged")
    else:
        print(f"  invariant: no, L along {inv.field_label} of {inv.generator} "
              f"leaves residue {inv.residue}")
    fam = extend_family(fam)

print()
report = exact_index_analysis(system)
print(f"exact index r* = {report.index_value}")
print("limit singular set: V(" +
      ", ".join(str(g) for g in report.singular_generators()) + ")")
print(f"planar depth bound for degree 2: {report.planar_depth_bound} "
      "(the invariance certificate stops at depth 2 instead)")
