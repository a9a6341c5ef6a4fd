"""Bound the accessibility index with the module chain instead of radicals.

Bracket columns generate an ascending chain of submodules of the free module
of vector fields.  Each depth only brackets the columns retained at the
previous depth; the chain must stabilize, the stabilization depth is an upper
bound r-hat on the exact index, and the maximal minors of the stabilized
columns cut out the limit singular set.  No real-radical support is needed,
so this route never reports "undecided", at the price of giving a bound
rather than the index itself.
"""

from pathlib import Path

from polyaccess import (
    bound_analysis,
    exact_index_analysis,
    parse_file,
    stabilize_chain,
)

parsed = parse_file((Path(__file__).parent / "systems" / "planar.sys").read_text(),
                    "planar")
system = parsed.system

chain = stabilize_chain(system)
print(f"chain stabilizes at depth {chain.r_hat}")
for depth, retained in enumerate(chain.rounds):
    labels = ", ".join(v.label for v in retained)
    print(f"  depth {depth}: retained {labels}")

report = bound_analysis(system)
print()
print(f"bound: r-hat = {report.index_value} ({report.index_kind})")
print("limit singular set from the stabilized minors:")
for g in report.singular_generators():
    print("  ", g)

exact = exact_index_analysis(system)
print()
print(f"exact route for comparison: r* = {exact.index_value}, "
      f"and indeed r-hat >= r*: {report.index_value >= exact.index_value}")
print("the two singular ideals differ as ideals but cut out the same points;")
print("the exact route reports the restricted real radical, the bound route")
print("reports the raw minors")
