import pytest

from taintsentinel.frontend import astnodes as ast
from taintsentinel.frontend.parser import parse_source
from taintsentinel.graph import build_semantic_graph
from taintsentinel.paths import extract_paths
from taintsentinel.rules import HIGH, LOW, MEDIUM, SAFE, assess_path_risks
from taintsentinel.taint import identify_sources_sinks, propagate_taint


def assess(source):
    root = parse_source(source)
    contract = root if root.kind == ast.CONTRACT else root.children[0]
    g = build_semantic_graph(contract)
    identify_sources_sinks(g)
    propagate_taint(g)
    result = extract_paths(g)
    return assess_path_risks(result.paths, g)


TS_MODULO = """
contract Faucet {
    function drip() public payable {
        if (block.timestamp % 10 == 0) {
            payable(msg.sender).transfer(1 ether);
        }
    }
}
"""

TS_GAMBLING = """
contract OpenRaffle {
    address public winner;
    function pick() public {
        uint256 t = block.timestamp;
        if (t > 5) {
            winner = msg.sender;
        }
    }
}
"""

KECCAK_TS_RNG = """
contract Sampler {
    function roll() public payable {
        uint256 seed = block.timestamp;
        uint256 r = uint256(keccak256(abi.encodePacked(seed))) % 100;
        if (r == 7) {
            payable(msg.sender).transfer(1 ether);
        }
    }
}
"""

TS_TIMELOCK = """
contract Depot {
    uint256 public deadline;
    function withdraw() public {
        require(block.timestamp >= deadline + 15 minutes);
        payable(msg.sender).transfer(1 ether);
    }
}
"""

TS_LOGGING = """
contract Meter {
    event Reading(uint256 at);
    function log() public {
        emit Reading(block.timestamp);
    }
}
"""

TS_COOLDOWN = """
contract Dispenser {
    uint256 public lastAction;
    function claim() public {
        require(block.timestamp > lastAction + 1 days);
        payable(msg.sender).transfer(1 ether);
    }
}
"""


@pytest.mark.parametrize(
    "source,risk,rule_id",
    [
        (TS_MODULO, HIGH, "ts-modulo"),
        (TS_GAMBLING, HIGH, "ts-gambling"),
        (KECCAK_TS_RNG, HIGH, "keccak-ts-rng"),
        (TS_TIMELOCK, SAFE, "ts-timelock-guard"),
        (TS_LOGGING, SAFE, "ts-event-logging"),
        (TS_COOLDOWN, SAFE, "ts-cooldown-guard"),
    ],
)
def test_core_rule_conformance(source, risk, rule_id):
    assessments = assess(source)
    assert len(assessments) == 1
    (a,) = assessments
    assert a.risk == risk
    assert rule_id in {m.rule_id for m in a.matched_rules}


def test_matrix_medium_source_high_sink():
    assessments = assess(
        """
        contract Meter {
            function f() public payable {
                if (block.number % 2 == 0) {
                    payable(msg.sender).transfer(1 ether);
                }
            }
        }
        """
    )
    (a,) = assessments
    assert a.risk == MEDIUM
    assert a.matched_rules == []


def test_matrix_high_source_medium_sink():
    assessments = assess(
        """
        contract Meter {
            uint256 public mark;
            function f() public { mark = block.timestamp; }
        }
        """
    )
    (a,) = assessments
    assert a.risk == MEDIUM


def test_owner_guard_demotes_one_level():
    assessments = assess(
        """
        contract Meter {
            address owner;
            uint256 public mark;
            modifier onlyOwner() { require(msg.sender == owner); _; }
            function f() public onlyOwner { mark = block.timestamp; }
        }
        """
    )
    (a,) = assessments
    assert a.access == "OwnerOnly"
    assert a.risk == LOW


def test_force_high_beats_force_safe():
    assessments = assess(
        """
        contract BetVault {
            uint256 public deadline;
            function withdraw() public {
                require(block.timestamp >= deadline + 15 minutes);
                payable(msg.sender).transfer(1 ether);
            }
        }
        """
    )
    (a,) = assessments
    verdicts = {m.rule_id: m.verdict for m in a.matched_rules}
    assert verdicts.get("ts-gambling") == "ForceHigh"
    assert verdicts.get("ts-timelock-guard") == "ForceSafe"
    assert a.risk == HIGH


def test_assessments_sorted_by_rank_then_taint():
    assessments = assess(
        """
        contract Mixer {
            uint256 public mark;
            function a() public payable {
                if (block.timestamp % 3 == 0) {
                    payable(msg.sender).transfer(1 ether);
                }
            }
            function b() public { mark = block.number; }
        }
        """
    )
    risks = [a.risk for a in assessments]
    assert risks == sorted(risks, key=lambda r: -{"HIGH": 3, "MEDIUM": 2, "LOW": 1, "SAFE": 0}[r])
    assert risks[0] == HIGH


def test_context_tags_on_lottery(lottery_source):
    (a,) = assess(lottery_source)
    assert "gambling" in a.context_tags
    assert "rng" in a.context_tags
    assert "transfer-bearing" in a.context_tags
