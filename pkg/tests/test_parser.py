import json

import pytest

from taintsentinel.errors import ParseError, UnsupportedFeature
from taintsentinel.frontend import astnodes as ast
from taintsentinel.frontend.parser import parse_source


def test_lottery_contract_shape(lottery_source):
    root = parse_source(lottery_source)
    contract = root if root.kind == ast.CONTRACT else root.children[0]
    assert contract.kind == ast.CONTRACT
    assert contract.name == "VulnerableLottery"
    state_vars = contract.find(ast.STATE_VAR)
    assert [v.name for v in state_vars] == ["prize"]
    functions = [f.name for f in contract.find(ast.FUNCTION)]
    assert functions == ["play", "receive"]


def test_empty_contract():
    root = parse_source("contract A {}")
    contract = root if root.kind == ast.CONTRACT else root.children[0]
    assert contract.name == "A"
    assert contract.children == []


def test_inline_assembly_is_unsupported():
    with pytest.raises(UnsupportedFeature):
        parse_source("contract A { function f() public { assembly {} } }")


def test_inheritance_is_unsupported():
    with pytest.raises(UnsupportedFeature):
        parse_source("contract A is B { }")


def test_grammar_violation_raises_parse_error():
    with pytest.raises(ParseError):
        parse_source("contract A { function f() public { if } }")


def test_spans_nest_within_parents(lottery_source):
    root = parse_source(lottery_source)

    def offset(span, lines):
        return sum(len(l) + 1 for l in lines[: span.line - 1]) + span.column - 1

    lines = lottery_source.split("\n")
    for node in root.walk():
        lo = offset(node.span, lines)
        hi = lo + node.span.length
        for child in node.children:
            clo = offset(child.span, lines)
            assert lo <= clo and clo + child.span.length <= hi


def test_parse_is_deterministic(lottery_source):
    a = parse_source(lottery_source).to_json()
    b = parse_source(lottery_source).to_json()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_if_else_has_three_children():
    root = parse_source(
        "contract A { function f(uint x) public { if (x > 1) { x = 1; } else { x = 2; } } }"
    )
    if_nodes = root.find(ast.IF)
    assert len(if_nodes) == 1
    assert len(if_nodes[0].children) == 3


def test_assign_has_two_children(lottery_source):
    root = parse_source(lottery_source)
    for node in root.walk():
        if node.kind == ast.ASSIGN:
            assert len(node.children) == 2


def test_number_unit_recorded():
    root = parse_source("contract A { uint256 public p = 10 ether; }")
    literals = [n for n in root.walk() if n.kind == ast.LITERAL and n.attrs.get("unit")]
    assert literals and literals[0].attrs["unit"] == "ether"


def test_transfer_call_normalized(lottery_source):
    root = parse_source(lottery_source)
    transfers = root.find(ast.TRANSFER)
    assert len(transfers) == 1
    assert "transfer" in transfers[0].text
