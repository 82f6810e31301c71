"""Weak versus strong interpolation.

Over cored structures the two classical interpolation statements come
apart.  The premise "P separates v0 from v1" pointwise implies the
conclusion "Q fails to separate v2 from one of v0, v1", yet no formula
in their shared vocabulary (equality alone!) fits between the two
satisfaction sets: the equality-only definable sets cannot tell the
witnessing triple apart from a refuting one.  The weak form, which only
asks for validity-level consequence, always goes through.
"""

from cylab import (
    InterpolationProblem,
    StructureFamily,
    canonical_strong,
    consequence_over,
    counterexample_formulas,
    definable_set,
    find_interpolant,
    verify_counterexample,
)

u = canonical_strong(3, 3, 3)
family = StructureFamily((u,))
phi, psi = counterexample_formulas(u.vocab)

print("premise:    ", phi)
print("conclusion: ", psi)
print("shared vocabulary: none (equality only)")

print()
print("== the implication is pointwise valid")
print("holds:", consequence_over(family, phi, psi, "implication-validity").holds)

print()
print("== strong interpolation fails")
strong = find_interpolant(InterpolationProblem(phi, psi, family, "strong"))
print("outcome:", strong.outcome, " witness:", strong.witness)
print("  the offending atom: injective triples, which meet the premise's")
print("  satisfaction set yet stick out of the conclusion's")
print("  e.g. (0,3,4) satisfies the premise:", (0, 3, 4) in definable_set(phi, u.base))
print("       (0,1,4) falsifies the conclusion:", (0, 1, 4) not in definable_set(psi, u.base))
print("  and no equality-only set contains the first without the second")

print()
print("== weak interpolation succeeds")
weak = find_interpolant(InterpolationProblem(phi, psi, family, "weak"))
print("outcome:", weak.outcome, " interpolant:", weak.formula)
print("  (no structure validates the premise under every assignment,")
print("   so the degenerate interpolant already works)")

print()
print("== the packaged replay")
report = verify_counterexample(3)
print("all four assertions pass:", report.ok)
