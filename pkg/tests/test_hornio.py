"""Horn text format round-trips and diagnostics."""

import pytest

from helpers import cnf_of, random_small_cnf
from hornforge import InputError
from hornforge.hornio import parse_horn, print_horn, sniff_format


def test_print_then_parse_is_identity():
    cnf = cnf_of("a&b->c; c->d")
    text = print_horn(cnf)
    again = parse_horn(text)
    assert again.registry.names == cnf.registry.names
    assert again.clause_keys() == cnf.clause_keys()
    assert print_horn(again) == text


def test_round_trip_byte_stable_on_random_formulas():
    for seed in range(25):
        cnf = random_small_cnf(seed)
        text = print_horn(cnf)
        assert print_horn(parse_horn(text)) == text


def test_registry_with_unused_variable_survives():
    cnf = cnf_of("a->b", extra_vars="z a b")
    text = print_horn(cnf)
    again = parse_horn(text)
    assert again.registry.names == ["z", "a", "b"]
    assert print_horn(again) == text


def test_hand_written_without_names_comment():
    text = "vars: 3\n# free-form comment\nb & a -> c\n\n"
    cnf = parse_horn(text)
    assert cnf.registry.names == ["b", "a", "c"]
    assert cnf.clause_count == 1


def test_declared_count_mismatch():
    with pytest.raises(InputError, match="names"):
        parse_horn("vars: 4\na -> b\n")


def test_missing_header():
    with pytest.raises(InputError, match="vars"):
        parse_horn("a -> b\n")


def test_bad_clause_line_reports_line_number():
    with pytest.raises(InputError, match="line 3"):
        parse_horn("vars: 2\na -> b\nnonsense\n")


def test_duplicate_clause_rejected_with_location():
    with pytest.raises(InputError, match="line 3"):
        parse_horn("vars: 2\na -> b\na -> b\n")


def test_unit_clause_needs_flag():
    text = "vars: 2\n# names: a b\na -> b\n-> a\n"
    with pytest.raises(InputError):
        parse_horn(text)
    cnf = parse_horn(text, allow_unit=True)
    assert cnf.clause_count == 2
    assert print_horn(cnf) == text


def test_sniff_format():
    assert sniff_format("vars: 3\n") == "horn"
    assert sniff_format("# hi\nX: x1\n") == "lc"
    assert sniff_format('{"schema": 1}') == "json"
    with pytest.raises(InputError):
        sniff_format("what is this\n")
