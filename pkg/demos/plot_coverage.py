"""
Conditional coverage in two small models
========================================

A point-mass confidence set and a two-point translation model, where
coverage changes sharply once the right event is conditioned on.
"""

from fractions import Fraction as F

from birnbaum.freq import TwoPointModel, example3_coverage, example4_analysis

# C = {X}: unconditional coverage against coverage given X > 0 and X = 0
for theta in (F(1, 4), F(1, 2), F(9, 10)):
    print(f"theta={theta}: "
          f"{example3_coverage(theta)} unconditional, "
          f"{example3_coverage(theta, 'given_X_positive')} given X>0, "
          f"{example3_coverage(theta, 'given_X_zero')} given X=0")

# two observations theta +- 1; with no drift the spread D is ancillary
a = example4_analysis(TwoPointModel(0, 0))
print("\neps=0: P(T=theta) =", a.unconditional, " given D=1:", a.given_d1, " given D=0:", a.given_d0)

# with drift, D stops being ancillary and coverage collapses at the boundary
for eps in (F(1, 4), F(1, 2)):
    w = 1 / (2 * eps)
    for theta in (F(0), w):
        an = example4_analysis(TwoPointModel(eps, theta))
        print(f"eps={eps} theta={theta}: unconditional {an.unconditional}, "
              f"D ancillary {an.d_ancillary}, disjoint sets {an.sets_disjoint}")
