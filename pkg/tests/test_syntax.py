import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cylab.syntax import (
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
    Generator,
    Iff,
    Implies,
    Meet,
    Not,
    One,
    Or,
    ParseError,
    TRUE,
    Vocabulary,
    Zero,
    formula_size,
    free_vars,
    parse_formula,
    render_formula,
    term_to_formula,
    validate_formula,
    voc_of,
)

VOCAB = Vocabulary((("P", 1), ("Q", 1), ("R", 2), ("S", 3)), 3)


class TestVocabulary:
    def test_duplicate_names_rejected(self):
        with pytest.raises(ValueError):
            Vocabulary((("P", 1), ("P", 2)), 3)

    def test_arity_above_n_rejected(self):
        with pytest.raises(ValueError):
            Vocabulary((("T", 4),), 3)

    def test_zero_arity_rejected(self):
        with pytest.raises(ValueError):
            Vocabulary((("T", 0),), 3)

    def test_reserved_names_rejected(self):
        with pytest.raises(ValueError):
            Vocabulary((("true", 1),), 3)
        with pytest.raises(ValueError):
            Vocabulary((("v0", 1),), 3)

    def test_restrict_keeps_order(self):
        assert VOCAB.restrict(("R", "P")).names() == ("P", "R")

    def test_common(self):
        other = Vocabulary((("Q", 1), ("T", 2)), 3)
        assert VOCAB.common(other).names() == ("Q",)


class TestParse:
    def test_equality(self):
        assert parse_formula("v0 = v1", VOCAB) == Eq(0, 1)

    def test_two_predicate_premise(self):
        f = parse_formula("P(v0) <-> !P(v1)", VOCAB)
        assert f == Iff(Atom("P", (0,)), Not(Atom("P", (1,))))

    def test_variable_out_of_range(self):
        with pytest.raises(ParseError):
            parse_formula("E v3. v3 = v3", VOCAB)

    def test_unknown_symbol(self):
        with pytest.raises(ParseError, match="unknown relation symbol"):
            parse_formula("Z(v0)", VOCAB)

    def test_arity_mismatch(self):
        with pytest.raises(ParseError, match="argument"):
            parse_formula("R(v0)", VOCAB)

    def test_syntax_error_carries_position(self):
        with pytest.raises(ParseError) as err:
            parse_formula("P(v0) &", VOCAB)
        assert err.value.position == len("P(v0) &")

    def test_precedence(self):
        f = parse_formula("P(v0) & Q(v0) | R(v0, v1) -> v0 = v1 <-> true", VOCAB)
        assert isinstance(f, Iff)
        assert isinstance(f.left, Implies)
        assert isinstance(f.left.left, Or)
        assert isinstance(f.left.left.left, And)

    def test_implies_right_associative(self):
        f = parse_formula("P(v0) -> Q(v0) -> v0 = v0", VOCAB)
        assert f == Implies(Atom("P", (0,)), Implies(Atom("Q", (0,)), Eq(0, 0)))

    def test_quantifier_binds_one_unary(self):
        f = parse_formula("E v0. P(v0) & Q(v0)", VOCAB)
        assert f == And(Exists(0, Atom("P", (0,))), Atom("Q", (0,)))
        g = parse_formula("E v0. (P(v0) & Q(v0))", VOCAB)
        assert g == Exists(0, And(Atom("P", (0,)), Atom("Q", (0,))))

    def test_universal(self):
        f = parse_formula("A v1. !R(v0, v1)", VOCAB)
        assert f == Forall(1, Not(Atom("R", (0, 1))))


class TestRender:
    def test_equality(self):
        assert render_formula(Eq(0, 1)) == "v0 = v1"

    def test_exists(self):
        assert render_formula(Exists(2, Atom("R", (0, 2)))) == "E v2. R(v0, v2)"

    def test_double_negation_not_simplified(self):
        assert render_formula(Not(Not(Eq(0, 0)))) == "!!v0 = v0"

    def test_nested_and_parenthesized(self):
        f = And(Atom("P", (0,)), And(Atom("Q", (0,)), Atom("P", (1,))))
        assert render_formula(f) == "P(v0) & (Q(v0) & P(v1))"


_LEAVES = st.sampled_from(
    [
        Atom("P", (0,)),
        Atom("P", (2,)),
        Atom("Q", (1,)),
        Atom("R", (0, 1)),
        Atom("R", (2, 2)),
        Atom("S", (0, 1, 2)),
        Eq(0, 1),
        Eq(2, 0),
        TRUE,
        FALSE,
    ]
)

FORMULAS = st.recursive(
    _LEAVES,
    lambda sub: st.one_of(
        st.builds(Not, sub),
        st.builds(And, sub, sub),
        st.builds(Or, sub, sub),
        st.builds(Implies, sub, sub),
        st.builds(Iff, sub, sub),
        st.builds(Exists, st.integers(0, 2), sub),
        st.builds(Forall, st.integers(0, 2), sub),
    ),
    max_leaves=25,
)


@given(FORMULAS)
@settings(max_examples=200, deadline=None)
def test_parse_render_roundtrip(f):
    assert parse_formula(render_formula(f), VOCAB) == f


@given(FORMULAS)
@settings(max_examples=100, deadline=None)
def test_render_is_fixpoint(f):
    text = render_formula(f)
    assert render_formula(parse_formula(text, VOCAB)) == text


class TestQueries:
    def test_voc_of_equality_is_empty(self):
        assert voc_of(Eq(0, 1)).symbols == ()

    def test_voc_of_premise(self):
        f = parse_formula("P(v0) <-> !P(v1)", VOCAB)
        assert voc_of(f).names() == ("P",)

    def test_voc_of_two_symbols(self):
        f = And(Atom("P", (0,)), Atom("Q", (1,)))
        assert voc_of(f).names() == ("P", "Q")

    def test_free_vars_equality(self):
        assert free_vars(Eq(0, 1)) == {0, 1}

    def test_free_vars_bound(self):
        assert free_vars(Exists(1, Eq(0, 1))) == {0}

    def test_free_vars_conclusion(self):
        psi = parse_formula("(Q(v0) <-> Q(v2)) | (Q(v1) <-> Q(v2))", VOCAB)
        assert free_vars(psi) == {0, 1, 2}

    def test_validate_rejects_bad_arity(self):
        with pytest.raises(ValueError):
            validate_formula(Atom("P", (0, 1)), VOCAB)

    def test_formula_size(self):
        assert formula_size(Not(Not(Eq(0, 0)))) == 3


class TestTerms:
    def test_diagonal(self):
        assert term_to_formula(Diagonal(0, 1), VOCAB) == Eq(0, 1)

    def test_cylindrified_generator(self):
        t = Cyl(0, Generator("R"))
        assert term_to_formula(t, VOCAB) == Exists(0, Atom("R", (0, 1)))

    def test_complement_of_zero(self):
        assert term_to_formula(Complement(Zero()), VOCAB) == Not(FALSE)

    def test_unknown_generator(self):
        with pytest.raises(ValueError):
            term_to_formula(Generator("Z"), VOCAB)

    def test_meet_and_one(self):
        t = Meet(One(), Generator("P"))
        assert term_to_formula(t, VOCAB) == And(TRUE, Atom("P", (0,)))
