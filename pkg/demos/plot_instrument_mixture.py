"""
Splitting the level between two instruments
===========================================

A fair coin picks one of two instruments with different noise.  Testing
each at the nominal level is not most powerful; one likelihood-ratio
cutoff shared by both instruments moves size toward the noisier one.
"""

from birnbaum.freq import (
    REFERENCE_FIGURES,
    InstrumentSpec,
    allocation_grid,
    closest_to_reference,
    equal_level_test,
    optimal_mixture_test,
    reproduction_sweep,
)

old, new = InstrumentSpec(0.1, 1.0, 1.1), InstrumentSpec(0.05, 1.0, 1.1)
eq = equal_level_test(old, new, 0.05)
opt = optimal_mixture_test(old, new, 0.05)
print(f"equal levels : power {eq.avg_power:.4f}")
print(f"common cutoff: power {opt.avg_power:.4f}, levels {opt.alpha1:.4f} / {opt.alpha2:.4f}")

# a brute-force grid over level splits agrees with the bisection
a1, a2, pw = allocation_grid(old, new, 0.05)
print(f"grid optimum : power {pw:.4f} at {a1:.4f} / {a2:.4f}")

# the reference figures do not match any sample size at this scale
rows = reproduction_sweep(0.1, 0.05, 1.0, 1.1, 0.05)
for r in rows:
    print(f"n={r.n:2d}  equal {r.equal.avg_power:.3f}  optimal {r.optimal.avg_power:.3f}  "
          f"split {r.optimal.alpha1:.4f}/{r.optimal.alpha2:.4f}")
print("reference (unreconciled):", REFERENCE_FIGURES)
print("nearest rows:", {k: v["n"] for k, v in closest_to_reference(rows).items()})
