"""Workbench for n-variable first-order logic over finite relational
structures carrying a distinguished core subset.

The pieces fit together like this: `syntax` gives the formula and term
language, `structures` the cored structures with their tuple-equivalence
machinery, `algebra` the type partitions and cylindric set algebras
built on them, `lab` the family-level procedures (strongness,
separation, interpolation, definability), and `verify` the end-to-end
suite that pins all of it to independent oracles.
"""

from .syntax import (
    And,
    Atom,
    Complement,
    Const,
    Cyl,
    Diagonal,
    Eq,
    Exists,
    FALSE,
    Forall,
    Formula,
    Generator,
    Iff,
    Implies,
    Meet,
    Not,
    One,
    Or,
    ParseError,
    TRUE,
    Term,
    Vocabulary,
    Zero,
    free_vars,
    parse_formula,
    render_formula,
    term_to_formula,
    voc_of,
)
from .structures import (
    ConsequenceReport,
    CoredStructure,
    SimSignature,
    Structure,
    StructureFamily,
    ValidationReport,
    canonical_strong,
    consequence_over,
    core_bijection_isomorphism,
    core_preserving_maps,
    definable_set,
    enumerate_signatures,
    evaluate,
    find_automorphism,
    generated_substructure,
    kernel,
    load_structure,
    save_structure,
    sim_closure,
    sim_signature,
    validate_cored_structure,
)
from .algebra import (
    CsnAlgebra,
    Element,
    TypePartition,
    build_csn,
    compute_joint_partition,
    compute_type_partition,
    is_definable,
    m_ary_definables,
    signature_bound,
    unary_definables,
)
from .lab import (
    CounterexampleReport,
    DefinabilityProblem,
    DefinabilityReport,
    InterpolationProblem,
    InterpolationReport,
    SeparationReport,
    StrongnessReport,
    certify_strong,
    core_definable_in_reduct,
    counterexample_formulas,
    find_interpolant,
    implicit_defines,
    separate,
    svenonius_explicit,
    verify_counterexample,
    verify_interpolant,
)
from .verify import run_suite

__version__ = "0.1.0"
