"""Lift the unicycle through its immersion and settle accessibility exactly.

The unicycle's heading enters through sin and cos, so the system is not
polynomial on its native 3 states.  The system file declares an immersion
onto 5 states with z4 = sin(x3), z5 = cos(x3); the image variety carries the
relation z4^2 + z5^2 = 1.  All bracket computations then run on the
polynomial lift, and conclusions return to the source by intersecting with
the image variety.
"""

from pathlib import Path

from polyaccess import (
    parse_file,
    pull_back_singular,
    rank_l_analysis,
    stabilize_chain,
    verify_immersion,
)

parsed = parse_file((Path(__file__).parent / "systems" / "unicycle.sys").read_text(),
                    "unicycle")
imm = parsed.immersed

print("lifted inputs:")
for g in imm.system.inputs:
    print("  ", g)
print("relations on the image variety:",
      ", ".join(str(r) for r in imm.map.relation_generators()))
print()

check = verify_immersion(parsed.analytic, imm)
print("immersion verified (tangency and pushforward):", check.ok)

chain = stabilize_chain(imm.system)
print(f"module chain stabilizes at depth {chain.r_hat}")
print()

report = rank_l_analysis(imm.system, 3)
print("rank-3 locus of the lift: V(" +
      ", ".join(str(g) for g in report.singular_generators()) + ")")

pulled = pull_back_singular(imm, report.singular_ideal)
print(f"intersection with the image variety empty: {pulled.empty} "
      f"({pulled.grade}: {pulled.detail})")
print()
print("z4^2 + z5^2 vanishes nowhere on z4^2 + z5^2 = 1, so the source keeps")
print("full rank 3 at every real state: the unicycle is accessible everywhere")
