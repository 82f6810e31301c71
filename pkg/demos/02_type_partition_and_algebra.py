"""Type partitions and the cylindric set algebra.

Partition refinement groups the 216 assignment triples of the stock
structure into atoms: tuples no 3-variable formula can tell apart.  The
definable ternary relations are exactly the unions of atoms, so the
algebra of definable sets is the powerset of the atoms, with
cylindrification (the set image of an existential quantifier) acting by
atom adjacency.
"""

from cylab import (
    build_csn,
    canonical_strong,
    definable_set,
    enumerate_signatures,
    is_definable,
    parse_formula,
    render_formula,
    unary_definables,
)

u = canonical_strong(3, 3, 3)
alg = build_csn(u.base)

print("== atoms")
print("atoms:", alg.atom_count, " carrier size: 2^%d" % alg.carrier_log2)
print("signature classes for 3-tuples:", len(enumerate_signatures(3)))
print("here the atoms coincide with the signature classes")

print()
print("== distinguished elements")
print("d01 tuple count:  ", len(alg.diagonal(0, 1).tuples()))
print("injective triples:", len(alg.dstar(3).tuples()))
p = alg.generator("P")
print("[P(v0)] count:    ", len(p.tuples()))
print("c0 [P(v0)] = one: ", p.cyl(0) == alg.one)

print()
print("== definability queries")
print("unary definables:", [sorted(s) for s in unary_definables(alg)])
print("(always at most: empty, universe, core, co-core)")

core_column = frozenset(t for t in alg.one.tuples() if t[0] in u.core)
f = is_definable(core_column, alg)
print("core column definable:", f is not None)
print("  check: same satisfaction set as P(v0):",
      definable_set(f, u.base) == definable_set(parse_formula("P(v0)", u.vocab), u.base))

single = frozenset({(0, 1, 2)})
print("a single triple definable:", is_definable(single, alg) is not None,
      " (it sits inside a larger atom)")

print()
print("== every nonempty element sweeps to one")
x = alg.atom_element(7)
print("atom 7 under c0 c1 c2:", x.cyl(2).cyl(1).cyl(0) == alg.one)
