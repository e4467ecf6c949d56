"""Outcome spaces, patterns and marginal expressions."""

import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bellbounds.outcomes import (
    Alphabet,
    JointIndexer,
    Pattern,
    PatternError,
    fixed_space,
    marginal_expr,
    match_count,
    removable_space,
    space_size,
)

SPACES = {
    "binary": fixed_space(Alphabet.BINARY_IDEAL),
    "ternary": fixed_space(Alphabet.TERNARY),
    "removable": removable_space(),
}


def brute_count(indexer, text):
    """Independent count: scan every tuple with a per-position letter check."""
    allowed = []
    for ch, (_, alphabet) in zip(text, indexer.spec.records):
        if ch == "*":
            allowed.append(set(alphabet.letters))
        elif ch == "~":
            allowed.append({l for l in alphabet.letters if l != "0"})
        else:
            allowed.append({ch})
    return sum(
        1
        for outcome in indexer.tuples()
        if all(letter in ok for letter, ok in zip(outcome, allowed))
    )


def test_space_sizes():
    assert space_size(SPACES["binary"]) == 16
    assert space_size(SPACES["ternary"]) == 81
    assert space_size(SPACES["removable"]) == 324


@pytest.mark.parametrize(
    "space,text,expected",
    [
        ("ternary", "****", 81),
        ("ternary", "~***", 54),
        ("ternary", "~*~*", 36),
        ("binary", "****", 16),
        ("binary", "++++", 1),
        ("removable", "~~+~~+", 16),
        ("removable", "******", 324),
    ],
)
def test_match_counts(space, text, expected):
    indexer = JointIndexer(SPACES[space])
    pattern = Pattern.parse(text, indexer.spec)
    assert match_count(indexer, pattern) == expected
    expr = marginal_expr(indexer, pattern)
    assert len(expr.terms) == expected
    assert expr.constant == 0
    assert all(c == 1 for c in expr.terms.values())
    assert brute_count(indexer, text) == expected


def test_indexer_round_trip_whole_space():
    for spec in SPACES.values():
        indexer = JointIndexer(spec)
        for i in range(indexer.size):
            assert indexer.index_of(indexer.tuple_of(i)) == i
        assert sorted(indexer.index_of(t) for t in indexer.tuples()) == list(
            range(indexer.size)
        )


def test_literal_alphabet_mismatch_rejected():
    with pytest.raises(PatternError):
        Pattern.parse("--+---", removable_space())  # '-' on a removed record
    with pytest.raises(PatternError):
        Pattern.parse("0***", fixed_space(Alphabet.BINARY_IDEAL))
    with pytest.raises(PatternError):
        Pattern.parse("***", fixed_space())  # wrong length
    with pytest.raises(PatternError):
        Pattern.parse("x***", fixed_space())


def test_detection_selector_on_removed_record_is_plus():
    indexer = JointIndexer(removable_space())
    via_pm = marginal_expr(indexer, Pattern.parse("**~***", indexer.spec))
    via_plus = marginal_expr(indexer, Pattern.parse("**+***", indexer.spec))
    assert via_pm == via_plus


@st.composite
def space_and_pattern(draw):
    name = draw(st.sampled_from(sorted(SPACES)))
    spec = SPACES[name]
    chars = []
    for _, alphabet in spec.records:
        chars.append(draw(st.sampled_from(alphabet.letters + ("~", "*"))))
    return spec, "".join(chars)


@given(space_and_pattern())
def test_match_count_agrees_with_brute_force(case):
    spec, text = case
    indexer = JointIndexer(spec)
    pattern = Pattern.parse(text, spec)
    assert match_count(indexer, pattern) == brute_count(indexer, text)


@given(space_and_pattern(), st.integers(min_value=0, max_value=5))
def test_partition_property(case, position):
    """Fixing one record to each letter partitions the star expression."""
    spec, text = case
    position %= len(spec)
    indexer = JointIndexer(spec)
    base = list(text)
    base[position] = "*"
    star_expr = marginal_expr(indexer, Pattern.parse("".join(base), spec))
    total: dict[int, F] = {}
    for letter in spec.records[position][1].letters:
        base[position] = letter
        expr = marginal_expr(indexer, Pattern.parse("".join(base), spec))
        for idx, coeff in expr.terms.items():
            total[idx] = total.get(idx, F(0)) + coeff
    assert total == dict(star_expr.terms)


@given(st.integers(min_value=0, max_value=3))
def test_pm_plus_zero_equals_star_on_ternary(position):
    indexer = JointIndexer(fixed_space())
    text = ["*"] * 4
    text[position] = "~"
    pm = marginal_expr(indexer, Pattern.parse("".join(text), indexer.spec))
    text[position] = "0"
    zero = marginal_expr(indexer, Pattern.parse("".join(text), indexer.spec))
    text[position] = "*"
    star = marginal_expr(indexer, Pattern.parse("".join(text), indexer.spec))
    assert pm + zero == star


def test_pattern_matches_agrees_with_expr_membership():
    indexer = JointIndexer(fixed_space())
    pattern = Pattern.parse("+~0*", indexer.spec)
    expr = marginal_expr(indexer, pattern)
    for outcome in itertools.islice(indexer.tuples(), 81):
        in_expr = indexer.index_of(outcome) in expr.terms
        assert in_expr == pattern.matches(outcome, indexer.spec)
