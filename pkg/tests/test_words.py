import pytest

from app.services import fixtures
from app.services.words import (
    canonical_word, check_presentation, confluent_rule, equivalence_class, find_separating_word,
    overlap_set, parse_presentation, parse_word, presentation, render_word, rewrite_irreducible,
    separates, word_stats, words_equal,
)
from app.utils import PreconditionError, ValidationError


@pytest.fixture
def braid3():
    return fixtures.braid3()


class TestParsing:
    """Word and presentation parsing."""

    def test_exponent_forms_agree(self, braid3):
        """Caret and bare exponents expand to the same word."""
        assert parse_word("a b^3 a", braid3) == ("a", "b", "b", "b", "a")
        assert parse_word("ab3a", braid3) == ("a", "b", "b", "b", "a")

    def test_empty_word(self, braid3):
        """ε and the empty string are the empty word."""
        assert parse_word("ε", braid3) == ()
        assert parse_word("", braid3) == ()

    def test_negative_exponent_rejected(self, braid3):
        """Positive words cannot carry negative exponents."""
        with pytest.raises(ValidationError):
            parse_word("a b^-1", braid3)

    def test_unknown_symbol_rejected(self, braid3):
        """Symbols outside the alphabet are a validation error."""
        with pytest.raises(ValidationError):
            parse_word("a c", braid3)

    def test_multi_character_symbols(self):
        """Longer symbols are matched first and rendered with spaces."""
        p = presentation(["s1", "s2"], ["s1 s2 s1 = s2 s1 s2"])
        word = parse_word("s1 s2^2", p)
        assert word == ("s1", "s2", "s2")
        assert render_word(word, p) == "s1 s2^2"

    def test_render_runs(self):
        """Runs collapse to caret exponents."""
        assert render_word(("a", "b", "b", "b", "a")) == "ab^3a"
        assert render_word(()) == "ε"

    def test_presentation_text(self):
        """The text format reads generators and relations."""
        p = parse_presentation("# braid monoid\ngenerators: a b\nrelation: aba = bab\n")
        assert p.alphabet == ("a", "b")
        assert p.relation == (("a", "b", "a"), ("b", "a", "b"))

    def test_presentation_without_generators(self):
        """Missing generators line is rejected."""
        with pytest.raises(ValidationError):
            parse_presentation("relation: aba = bab")

    def test_trivial_relation_rejected(self):
        """A relation (u, u) is rejected at construction."""
        with pytest.raises(ValidationError):
            presentation(["a", "b"], ["ab = ab"])


class TestOverlaps:
    """Self-overlaps and confluent rewriting."""

    def test_overlap_set(self):
        """aba overlaps itself in a; aab only in ε."""
        assert overlap_set(("a", "b", "a")) == [(), ("a",)]
        assert overlap_set(("a", "a", "b")) == [()]

    def test_no_confluent_rule_for_braid(self, braid3):
        """Both braid relators overlap themselves."""
        rule, reason = confluent_rule(braid3)
        assert rule is None
        assert "OVL" in reason

    def test_confluent_rule(self):
        """bba = aab rewrites aab to bba."""
        p = presentation(["a", "b"], ["bba = aab"])
        rule, _ = confluent_rule(p)
        assert rule.lhs == ("a", "a", "b")
        assert rule.rhs == ("b", "b", "a")


class TestWordProblem:
    """Equality in presented monoids."""

    def test_braid_relation_equal(self, braid3):
        """aba = bab by search."""
        verdict = words_equal(("a", "b", "a"), ("b", "a", "b"), braid3)
        assert verdict.status == "equal"
        assert verdict.witness[0] == ("a", "b", "a")
        assert verdict.witness[-1] == ("b", "a", "b")

    def test_distinct_words(self, braid3):
        """ab and ba lie in different (singleton) classes."""
        verdict = words_equal(("a", "b"), ("b", "a"), braid3)
        assert verdict.status == "distinct"

    def test_rewriting_decides(self):
        """Confluent presentations are decided by normal forms."""
        p = presentation(["a", "b"], ["bba = aab"])
        assert words_equal(("a", "a", "b"), ("b", "b", "a"), p).method == "rewriting"
        assert words_equal(("a", "a", "b", "b"), ("a", "b", "a", "b"), p).status == "distinct"

    def test_irreducible_form(self, braid3):
        """aab rewrites to bba; braid3 has no confluent rule."""
        p = presentation(["a", "b"], ["bba = aab"])
        assert rewrite_irreducible(("a", "a", "b", "b"), p) == ("b", "b", "a", "b")
        with pytest.raises(PreconditionError):
            rewrite_irreducible(("a",), braid3)

    def test_word_stats(self, braid3):
        """Length and per-letter counts."""
        assert word_stats(parse_word("ab^2a^2", braid3), braid3) == (5, {"a": 3, "b": 2})

    def test_equivalence_class_sorted(self, braid3):
        """Classes come back ShortLex sorted."""
        assert equivalence_class(("b", "a", "b"), braid3) == [("a", "b", "a"), ("b", "a", "b")]
        assert canonical_word(("b", "a", "b"), braid3) == ("a", "b", "a")

    def test_non_positive_budget(self, braid3):
        """A negative budget is a precondition failure."""
        with pytest.raises(PreconditionError):
            words_equal(("a",), ("b",), braid3, budget=-1)


class TestPresentationChecks:
    """Hygiene flags and separating words."""

    def test_braid_passes(self, braid3):
        """braid3 has distinct first and last letters."""
        report = check_presentation(braid3)
        assert report.passed
        assert report.first_letters_differ and report.last_letters_differ

    def test_redundant_generator(self):
        """c = ab makes c redundant."""
        report = check_presentation(presentation(["a", "b", "c"], ["c = ab"]))
        assert not report.passed
        assert "redundant generator c" in report.flags

    def test_degenerate_relations_flagged(self):
        """(u, u) relations and empty relators reach the report when the check asks for them."""
        p = presentation(["a", "b"], ["ab = ab", "ba = ε"], degenerate_ok=True)
        report = check_presentation(p)
        assert not report.passed
        assert (report.trivial_relations, report.empty_relators) == (1, 1)
        assert "relation (u, u)" in report.flags
        assert "empty relator" in report.flags

    def test_degenerate_one_relator(self):
        """An empty relator leaves the letter comparisons unset."""
        report = check_presentation(presentation(["a", "b"], ["ab = ε"], degenerate_ok=True))
        assert report.flags == ["empty relator"]
        assert report.first_letters_differ is None

    def test_degenerate_relations_rejected_by_default(self):
        """Other operations never see degenerate relations."""
        with pytest.raises(ValidationError):
            presentation(["a", "b"], ["ab = ab"])
        with pytest.raises(ValidationError):
            presentation(["a", "b"], ["ab = ε"])

    def test_separating_word(self):
        """A third letter gives a word unrelated to the relators."""
        p = presentation(["a", "b", "c"], ["aba = bab"])
        z = find_separating_word(p)
        assert z is not None
        assert separates(z, p)

    def test_two_letters_have_no_separating_word(self, braid3):
        """Separating words need a third letter."""
        assert find_separating_word(braid3) is None
