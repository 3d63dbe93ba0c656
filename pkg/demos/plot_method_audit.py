"""
p-values under two stopping rules
=================================

The two sampling plans give different p-values for the same counts.  A
rule that reports the p-value of the plan actually run respects
conditionality and a weak form of sufficiency, yet gives proportional
likelihoods different answers.
"""

from fractions import Fraction

from birnbaum.methods import PARAMETERIZATION_NOTE, BinomialSpec, NegBinomialSpec, audit_sp2_wcp
from birnbaum.model import render

print(PARAMETERIZATION_NOTE)
r = audit_sp2_wcp(BinomialSpec(12, Fraction(1, 2)), NegBinomialSpec(3, Fraction(1, 2)), (9, 3))

print("\nmethod outputs")
for k, v in r.m_values.items():
    print(f"  M[{k}] = {render(v)}")
print("reported inferences")
for k, v in r.ev_values.items():
    print(f"  Ev[{k}] = {render(v)}")

print("\nSP2:", r.sp2_check, " WCP:", r.wcp_check, " LP:", r.lp_check)
print("likelihood constant:", r.premise_constant, "verified:", r.premise_verified)
for line in r.narrative.values():
    print(" -", line)
