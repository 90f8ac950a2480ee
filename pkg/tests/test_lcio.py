"""Label-cover text/JSON round-trips."""

import pytest

from hornforge import InputError, refine
from hornforge.lcgen import claw_instance, random_instance
from hornforge.lcio import (
    labeling_from_json_dict,
    labeling_to_json_dict,
    lc_from_json_dict,
    lc_to_json_dict,
    parse_lc,
    print_lc,
)


def same_instance(a, b):
    return (
        a.x_names == b.x_names
        and a.y_names == b.y_names
        and a.labels_x == b.labels_x
        and a.labels_y == b.labels_y
        and a.edges == b.edges
        and a.constraints == b.constraints
        and a.refined == b.refined
    )


def test_text_round_trip_unrefined():
    inst = claw_instance()
    text = print_lc(inst)
    again = parse_lc(text)
    assert same_instance(inst, again)
    assert print_lc(again) == text


def test_text_round_trip_refined():
    inst = refine(claw_instance())
    text = print_lc(inst)
    again = parse_lc(text)
    assert same_instance(inst, again)
    assert print_lc(again) == text


def test_text_round_trip_random():
    for seed in range(10):
        inst = random_instance(seed)
        assert same_instance(inst, parse_lc(print_lc(inst)))


def test_json_round_trip():
    for inst in (claw_instance(), refine(claw_instance()), random_instance(4)):
        assert same_instance(inst, lc_from_json_dict(lc_to_json_dict(inst)))


def test_labeling_json_round_trip(claw):
    from hornforge import solve_exact_cover

    cover, _ = solve_exact_cover(claw)
    assert labeling_from_json_dict(labeling_to_json_dict(cover)) == cover


def test_parse_diagnostics():
    with pytest.raises(InputError, match="line 3"):
        parse_lc("X: x1\nY: y1\nE\n")
    with pytest.raises(InputError, match="missing X"):
        parse_lc("Y: y1\n")
    with pytest.raises(InputError, match="LX"):
        parse_lc("X: x1\nY: y1\nE:\nx1 y1\n")


def test_comments_and_blanks_ignored():
    text = "# header\n\nX: x1\nY: y1\nLX: l1\nLY: p1\nE:\nx1 y1  # trailing\nPI x1 y1:\nl1 p1\n"
    inst = parse_lc(text)
    assert inst.m == 1
