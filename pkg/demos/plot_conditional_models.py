"""
Conditioning on two ancillaries
===============================

One 2x2 experiment carries two ancillary statistics.  Conditioning on
either gives a different model, and the relation "is a conditional of"
fails to be transitive.
"""

from birnbaum import RelationKind, closure, condition, enumerate_ancillaries, related
from birnbaum.cli import fmt_pmf
from birnbaum.workspace import load_fixture

ws = load_fixture("example1")
E = ws.experiment("E")
print("\n".join(fmt_pmf(E)))

# every non-trivial ancillary partition of the four outcomes
for t in enumerate_ancillaries(E):
    print(t.id, t)

# condition on the first block of each named statistic
for name in ("U", "V"):
    c = condition(E, ws.statistic(name), 1)
    print(f"\ngiven {name}=1")
    print("\n".join(fmt_pmf(c)))

# both conditionals are A-related to E but not to each other
e, u, v = (ws.base(r) for r in ("E:(1,1)", "E_u1:(1,1)", "E_v1:(1,1)"))
stats = list(ws.statistics.values())
for a, b in ((e, u), (e, v), (u, v)):
    print(f"A({a.label}, {b.label}) = {bool(related(RelationKind.A, a, b, stats))}")

cl = closure(ws.universe("ex1-universe"), {RelationKind.A}, stats)
print("closure classes:", [cl.class_of(0)], "added pairs:", cl.added_pairs)
