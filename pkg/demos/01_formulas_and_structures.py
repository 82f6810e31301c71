"""Formulas, structures and evaluation.

The workbench speaks first-order logic restricted to the variables
v0..v{n-1} (n = 3 throughout these demos) over finite structures whose
universe is 0..size-1.  A structure additionally carries a *core*, a
distinguished subset that is not part of the vocabulary; every relation
must treat tuples alike whenever they share an equality pattern and
per-coordinate core membership.
"""

from cylab import (
    Vocabulary,
    canonical_strong,
    definable_set,
    evaluate,
    free_vars,
    parse_formula,
    render_formula,
    sim_signature,
    validate_cored_structure,
    voc_of,
)

vocab = Vocabulary((("P", 1), ("Q", 1)), n=3)

print("== parsing and printing")
phi = parse_formula("P(v0) <-> !P(v1)", vocab)
print("parsed:     ", phi)
print("free vars:  ", sorted(free_vars(phi)))
print("vocabulary: ", voc_of(phi).names())
print("round trip: ", parse_formula(render_formula(phi), vocab) == phi)

print()
print("== the stock structure: P = Q = core on a 6-point universe")
u = canonical_strong(3, 3, 3)
print("core:", sorted(u.core), " co-core:", sorted(u.cocore))
print("validates:", validate_cored_structure(u.base, u.core).ok)

print()
print("== evaluation")
print("phi at (0, 3, 0):", evaluate(phi, u.base, (0, 3, 0)), " (one side in the core)")
print("phi at (0, 1, 0):", evaluate(phi, u.base, (0, 1, 0)), " (both in the core)")
sat = definable_set(phi, u.base)
print(f"phi holds at {len(sat)} of 216 assignments")

print()
print("== the tuple equivalence behind the core")
print("signature of (0, 3):", sim_signature((0, 3), u.core))
print("signature of (1, 4):", sim_signature((1, 4), u.core))
print("equivalent:", sim_signature((0, 3), u.core) == sim_signature((1, 4), u.core))
print("a relation of a cored structure can never separate equivalent tuples")
