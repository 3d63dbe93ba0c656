"""
A C-S-C chain between two sampling plans
========================================

Twelve Bernoulli trials with nine successes, and sampling until the third
failure with nine successes, have proportional likelihoods.  The 50-50
mixture of the two plans joins them by one sufficiency step flanked by two
conditionality steps.
"""

from birnbaum import InferenceBase, Universe, birnbaum_chain, verify_birnbaum
from birnbaum.methods import binomial_experiment, negbinomial_experiment

b = InferenceBase(binomial_experiment(12), "9")
nb = InferenceBase(negbinomial_experiment(3), "9")

chain = birnbaum_chain(b, nb)
print("likelihood constant c =", chain.constant)
for step in chain.describe():
    print(" ", step)

# inside the block {(1,9),(2,9)} the conditional law is parameter-free
print("block conditional c/(1+c) =", chain.block_conditional)
print("every step re-verifies:", chain.verify())

# the same check on a small universe: S and C generate the L classes
u = Universe((b, nb, InferenceBase(b.experiment, "8")))
rep = verify_birnbaum(u)
print("S+C classes:", rep.sc_classes, "L classes:", rep.l_classes, "ok:", rep.ok)
