"""Definability through symmetry.

A relation is explicitly definable over a sub-vocabulary exactly when
every symmetry of the reduct preserves it.  The workbench enumerates the
relevant symmetry group (core-preserving permutations when the core is
visible in the reduct, all permutations otherwise), and on success
assembles the defining formula from the reduct's atoms.
"""

import itertools

from cylab import (
    DefinabilityProblem,
    canonical_strong,
    certify_strong,
    core_definable_in_reduct,
    definable_set,
    find_automorphism,
    generated_substructure,
    implicit_defines,
    svenonius_explicit,
)

u = canonical_strong(3, 3, 3)

print("== strongness certificate")
print("canonical structure certifies strong:", certify_strong(u).ok)

print()
print("== automorphisms on demand")
f = find_automorphism(u, (0, 3), (1, 5))
print("map (0,3) onto (1,5):", f)
print("map core point onto co-core point:", find_automorphism(u, (0,), (3,)))

print()
print("== the core through different lenses")
print("over {P}:      ", "definable" if core_definable_in_reduct(u, ("P",)) else "hidden")
print("over equality: ", "definable" if core_definable_in_reduct(u, ()) else "hidden")

print()
print("== synthesis of explicit definitions")
core_rel = frozenset((x,) for x in u.core)
report = svenonius_explicit(DefinabilityProblem(u, ("P",), tuples=core_rel, arity=1))
print("core over {P}: definable =", report.definable,
      " maps checked =", report.maps_checked)
got = definable_set(report.formula, u.base.reduct(("P",)))
column = frozenset(
    t for t in itertools.product(range(6), repeat=3) if t[0] in u.core
)
print("  formula evaluates to the core column:", got == column)

report0 = svenonius_explicit(DefinabilityProblem(u, (), tuples=core_rel, arity=1))
print("core over equality: definable =", report0.definable)
print("  a violating symmetry:", report0.violating_map)

print()
print("== implicit definability carries over to restrictions")
big = canonical_strong(3, 4, 4)
small = generated_substructure(big, [0, 1, 2, 5, 6, 7])
print("restriction of the 8-point structure to 6 points equals the stock one:",
      small == u)
print("P implicitly defines Q here:", implicit_defines(u, u, ("P",), "Q"))
