import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from trislice.errors import ContextError, DuplicationError, ParameterError, WidthError
from trislice.family import (
    Ordering,
    SetFamily,
    Subset,
    all_subsets,
    char_vector,
    lex_compare,
    meet_size,
    parse_subset,
    read_families,
    write_families,
)

from gen import subset


def test_char_vector_examples():
    assert char_vector(subset(4, 1, 2)) == (1, 1, 0, 0)
    assert char_vector(Subset.empty(3)) == (0, 0, 0)
    assert char_vector(subset(3, 3)) == (0, 0, 1)


def test_char_vector_width():
    with pytest.raises(WidthError):
        char_vector(subset(5, 5), 4)
    assert char_vector(subset(3, 1), 5) == (1, 0, 0, 0, 0)


def test_subset_rejects_out_of_range_elements():
    with pytest.raises(ParameterError):
        Subset.from_elements([0], 3)
    with pytest.raises(ParameterError):
        Subset.from_elements([4], 3)


def test_lex_compare_examples():
    assert lex_compare(subset(4, 1), subset(4, 1, 2)) is Ordering.LESS
    assert lex_compare(subset(4, 2, 3), subset(4, 1, 3)) is Ordering.LESS
    assert lex_compare(subset(4, 1, 2), subset(4, 1, 2)) is Ordering.EQUAL
    assert lex_compare(subset(4, 1, 3), subset(4, 2, 3)) is Ordering.GREATER


def test_lex_compare_needs_same_ground():
    with pytest.raises(ContextError):
        lex_compare(subset(3, 1), subset(4, 1))


@given(st.integers(1, 8).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, 2**n - 1), st.integers(0, 2**n - 1))))
def test_lex_matches_tuple_order_and_subsets_sort_first(args):
    n, a, b = args
    x, y = Subset(n, a), Subset(n, b)
    vx, vy = char_vector(x), char_vector(y)
    expected = (vx > vy) - (vx < vy)
    assert lex_compare(x, y) == expected
    if x.issubset(y):
        assert lex_compare(x, y) <= 0
    if lex_compare(x, y) <= 0:
        # x_1 y_1 = x_1 whenever X <= Y
        assert vx[0] * vy[0] == vx[0]


def test_meet_size_examples():
    sets = [subset(8, 1, 2, 3, 4), subset(8, 1, 2, 5, 6), subset(8, 1, 3, 5, 7)]
    assert meet_size(sets) == 1
    assert meet_size([subset(4, 1, 2), subset(4, 3, 4)], modulus=2) == 0
    assert meet_size([subset(4, 1, 2, 3)], modulus=2) == 1


def test_meet_size_errors():
    with pytest.raises(ParameterError):
        meet_size([])
    with pytest.raises(ParameterError):
        meet_size([subset(3, 1)], modulus=4)


def test_family_rejects_duplicates_and_mixed_grounds():
    with pytest.raises(DuplicationError):
        SetFamily.from_lists(3, [[1], [1]])
    with pytest.raises(ContextError):
        SetFamily(3, (subset(3, 1), subset(4, 1)))


def test_family_json_round_trip(tmp_path):
    fams = [SetFamily.from_lists(4, [[1, 2], [1, 3], [2, 3]]), SetFamily.from_lists(2, [[]])]
    path = tmp_path / "f.jsonl"
    write_families(path, fams)
    text = path.read_text()
    assert text.splitlines()[0] == '{"n": 4, "sets": [[1, 2], [1, 3], [2, 3]]}'
    back = read_families(path)
    assert back == fams
    write_families(path, back)
    assert path.read_text() == text


def test_read_families_names_bad_line(tmp_path):
    path = tmp_path / "f.jsonl"
    path.write_text('{"n": 2, "sets": [[1]]}\n{oops\n')
    with pytest.raises(ParameterError, match=":2:"):
        read_families(path)


def test_from_json_requires_fields():
    with pytest.raises(ParameterError):
        SetFamily.from_json(json.dumps({"sets": []}))


def test_parse_subset_and_str():
    s = parse_subset("{1, 3,7}", 8)
    assert s.elements() == (1, 3, 7)
    assert str(s) == "{1,3,7}"
    assert parse_subset("{}", 3) == Subset.empty(3)


def test_all_subsets_is_lex_sorted():
    subs = list(all_subsets(4))
    assert len(subs) == 16
    assert all(lex_compare(a, b) is Ordering.LESS for a, b in zip(subs, subs[1:]))


def test_complement_and_sorting():
    fam = SetFamily.from_lists(4, [[1, 2], [2, 3], [1, 3]])
    assert not fam.is_lex_sorted()
    assert fam.lex_sorted().to_lists() == [[2, 3], [1, 3], [1, 2]]
    assert subset(4, 1, 2).complement() == subset(4, 3, 4)
