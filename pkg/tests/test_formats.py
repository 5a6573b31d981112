import json

import pytest
from hypothesis import given, strategies as st

from covsys import Ecs, ReductionTrace, ResidueClass, SplitStep, reduce_to_trivial
from covsys.errors import ParseError
from covsys.formats import (
    format_json,
    format_text,
    parse_ecs,
    parse_json,
    parse_text,
    parse_trace,
    trace_to_json,
)


def test_parse_text_with_comments_and_blanks():
    text = "# header\n\n 0 2   # even\n-1 4\n\n7 4\n"
    assert parse_text(text) == Ecs([(0, 2), (3, 4), (3, 4)])


@pytest.mark.parametrize("text, line, col", [
    ("0 2\n1 x\n", 2, 3),
    ("0 2\n1\n", 2, 2),
    ("0 2\n1 4 5\n", 2, 5),
    ("0 2\n  1 0\n", 2, 5),
])
def test_parse_text_errors_have_positions(text, line, col):
    with pytest.raises(ParseError) as info:
        parse_text(text, source="f.ecs")
    assert (info.value.line, info.value.column) == (line, col)
    assert info.value.format().startswith(f"f.ecs:{line}:{col}:")


def test_parse_text_empty():
    with pytest.raises(ParseError):
        parse_text("# nothing\n")


def test_parse_json():
    assert parse_json('{"classes": [[0, 2], [5, 4], [1, 4]]}') == Ecs([(0, 2), (1, 4), (1, 4)])


@pytest.mark.parametrize("text", [
    '{"classes": [[0, 2], [1]]}',
    '{"classes": [[0, 0]]}',
    '{"classes": []}',
    '{"cls": []}',
    '[1, 2]',
    '{"classes": [[true, 2]]}',
])
def test_parse_json_schema_errors(text):
    with pytest.raises(ParseError):
        parse_json(text)


def test_parse_json_syntax_error_position():
    with pytest.raises(ParseError) as info:
        parse_json('{"classes":\n  [[0, 2],, ]}')
    assert info.value.line == 2


def test_auto_detect(example13):
    assert parse_ecs(format_json(example13)) == example13
    assert parse_ecs(format_text(example13)) == example13


@given(st.lists(st.tuples(st.integers(-100, 100), st.integers(1, 60)), min_size=1, max_size=12))
def test_round_trips_through_normalization(pairs):
    A = Ecs(pairs)
    assert parse_text(format_text(A)) == A
    assert parse_json(format_json(A)) == A
    assert parse_json(json.dumps({"classes": [list(p) for p in pairs]})) == A


def test_trace_json_round_trip():
    A = Ecs([(0, 2), (1, 4), (3, 4)])
    trace = reduce_to_trivial(A)
    data = trace_to_json(trace)
    assert data == {"steps": [{"residue": 0, "modulus": 1, "prime": 2},
                              {"residue": 1, "modulus": 2, "prime": 2}]}
    back = parse_trace(json.dumps(data))
    assert back == trace and back.replay() == A


@pytest.mark.parametrize("text", [
    '{"steps": [{"residue": 0, "modulus": 1}]}',
    '{"steps": [{"residue": 0, "modulus": 1, "prime": 4}]}',
    '{"steps": [{"residue": 3, "modulus": 2, "prime": 2}]}',
    '{"step": []}',
])
def test_parse_trace_errors(text):
    with pytest.raises(ParseError):
        parse_trace(text)


def test_empty_trace():
    assert parse_trace('{"steps": []}') == ReductionTrace(())
    assert SplitStep(ResidueClass(0, 1), 3).children() == [ResidueClass(i, 3) for i in range(3)]
