"""Deterministic generator for a labeled desk-scale contract corpus.

Each template category carries its ground-truth label and the exact path
risk labels Phase 1 is expected to reproduce; identifier randomization
varies the surface without changing semantics. The two Borderline
categories share one code skeleton on purpose: they are indistinguishable
to the model and exist to make threshold trade-offs observable.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

from .errors import InsufficientClass

CATEGORIES = (
    "VulnModulo",
    "VulnKeccakRNG",
    "VulnLottery",
    "VulnBlockhash",
    "SafeTimeLock",
    "SafeLogging",
    "SafeCooldown",
    "NeutralArithmetic",
    # extension categories used by the model-side threshold experiments
    "BorderlineVuln",
    "BorderlineSafe",
)

CORE_CATEGORIES = CATEGORIES[:8]

# name pools free of gambling keywords
_SAFE_NOUNS = (
    "Vault", "Ledger", "Escrow", "Registry", "Archive", "Meter",
    "Tracker", "Relay", "Bridge", "Locker", "Depot", "Keeper",
)
_ADJECTIVES = (
    "Simple", "Open", "Civic", "Nimble", "Stone", "Cedar",
    "Quiet", "Amber", "Polar", "Union", "Terra", "Delta",
)
_VAR_WORDS = (
    "amount", "shares", "quota", "bucket", "cycle", "epoch",
    "tally", "units", "stock", "grade", "score", "level",
)
_FN_WORDS = (
    "update", "settle", "record", "handle", "process", "commit",
    "sync", "apply", "adjust", "rotate", "refresh", "advance",
)
_GAMBLING_NAMES = ("Lottery", "Raffle", "Jackpot", "Casino")


def _pick(rng, pool, used):
    choices = [w for w in pool if w not in used]
    word = rng.choice(choices or list(pool))
    used.add(word)
    return word


class _Names:
    def __init__(self, rng):
        self.rng = rng
        self.used = set()

    def var(self):
        return _pick(self.rng, _VAR_WORDS, self.used) + str(self.rng.randint(0, 99))

    def fn(self):
        return _pick(self.rng, _FN_WORDS, self.used) + str(self.rng.randint(0, 99))

    def contract(self, gambling=False):
        adj = _pick(self.rng, _ADJECTIVES, self.used)
        noun = self.rng.choice(_GAMBLING_NAMES) if gambling else _pick(
            self.rng, _SAFE_NOUNS, self.used
        )
        return adj + noun


def _distractors(n: _Names, rng) -> str:
    """Benign helper functions with no entropy sources and no modulo."""
    a, b = n.fn(), n.fn()
    k = rng.randint(2, 9)
    return (
        f"    function {a}(uint256 x, uint256 y) public pure returns (uint256) {{\n"
        f"        return x + y * {k};\n"
        f"    }}\n"
        f"    function {b}(uint256 x) public pure returns (uint256) {{\n"
        f"        return x + {rng.randint(1, 50)};\n"
        f"    }}\n"
    )


def _vuln_modulo(rng):
    n = _Names(rng)
    name = n.contract()
    pot, play = n.var(), n.fn()
    mod = rng.randint(3, 19)
    src = f"""pragma solidity ^0.8.19;

contract {name} {{
    uint256 public {pot} = {rng.randint(1, 5)} ether;

    function {play}() public payable {{
        require(msg.value == 1 ether);
        if (block.timestamp % {mod} == 0) {{
            payable(msg.sender).transfer({pot});
        }}
    }}

{_distractors(n, rng)}}}
"""
    return name, src, True, ["HIGH"]


def _vuln_keccak_rng(rng):
    n = _Names(rng)
    name = n.contract()
    reward, draw, s, r = n.var(), n.fn(), n.var(), n.var()
    mod = rng.randint(2, 10)
    src = f"""pragma solidity ^0.8.19;

contract {name} {{
    uint256 public {reward} = {rng.randint(1, 4)} ether;

    function {draw}() public payable {{
        require(msg.value == 1 ether);
        uint256 {s} = block.timestamp;
        uint256 {r} = uint256(keccak256(abi.encodePacked({s}))) % {mod};
        if ({r} == 0) {{
            payable(msg.sender).transfer({reward});
        }}
    }}

{_distractors(n, rng)}}}
"""
    return name, src, True, ["HIGH"]


def _vuln_lottery(rng):
    n = _Names(rng)
    name = n.contract(gambling=True)
    pick, t = n.fn(), n.var()
    mod = rng.randint(5, 12)
    win = rng.randint(0, mod - 1)
    src = f"""pragma solidity ^0.8.19;

contract {name} {{
    address public winner;

    function {pick}() public payable {{
        uint256 {t} = block.timestamp;
        if ({t} % {mod} == {win}) {{
            winner = msg.sender;
        }}
    }}

{_distractors(n, rng)}}}
"""
    return name, src, True, ["HIGH"]


def _vuln_blockhash(rng):
    n = _Names(rng)
    name = n.contract()
    flip, h = n.fn(), n.var()
    src = f"""pragma solidity ^0.8.19;

contract {name} {{
    function {flip}() public payable {{
        require(msg.value == 1 ether);
        uint256 {h} = uint256(blockhash(block.number - 1));
        if ({h} % 2 == 0) {{
            payable(msg.sender).transfer(2 ether);
        }}
    }}

{_distractors(n, rng)}}}
"""
    return name, src, True, ["HIGH"]


def _safe_timelock(rng):
    n = _Names(rng)
    name = n.contract()
    deadline, balance_var, withdraw, extend = n.var(), n.var(), n.fn(), n.fn()
    minutes = rng.choice((15, 30, 60))
    src = f"""pragma solidity ^0.8.19;

contract {name} {{
    uint256 public {deadline};
    uint256 public {balance_var} = {rng.randint(1, 3)} ether;

    function {withdraw}() public {{
        require(block.timestamp >= {deadline} + {minutes} minutes);
        payable(msg.sender).transfer({balance_var});
    }}

    function {extend}(uint256 d) public {{
        {deadline} = d;
    }}

{_distractors(n, rng)}}}
"""
    return name, src, False, ["SAFE"]


def _safe_logging(rng):
    n = _Names(rng)
    name = n.contract()
    event, log = n.fn().capitalize(), n.fn()
    src = f"""pragma solidity ^0.8.19;

contract {name} {{
    event {event}(uint256 at, address actor);

    function {log}() public {{
        emit {event}(block.timestamp, msg.sender);
    }}

{_distractors(n, rng)}}}
"""
    return name, src, False, ["SAFE"]


def _safe_cooldown(rng):
    n = _Names(rng)
    name = n.contract()
    last, fee, claim = n.var(), n.var(), n.fn()
    days = rng.choice((1, 2, 7))
    src = f"""pragma solidity ^0.8.19;

contract {name} {{
    uint256 public {last};
    uint256 public {fee} = {rng.randint(1, 2)} ether;

    function {claim}() public {{
        require(block.timestamp > {last} + {days} days);
        payable(msg.sender).transfer({fee});
    }}

{_distractors(n, rng)}}}
"""
    return name, src, False, ["SAFE"]


def _neutral_arithmetic(rng):
    n = _Names(rng)
    name = n.contract()
    total, add = n.var(), n.fn()
    src = f"""pragma solidity ^0.8.19;

contract {name} {{
    uint256 public {total};

    function {add}(uint256 v) public {{
        {total} = {total} + v;
    }}

{_distractors(n, rng)}}}
"""
    return name, src, False, []


def _borderline(rng, vulnerable):
    # one shared skeleton: a raw timestamp persisted to storage (MEDIUM
    # path); whether that is exploitable depends on off-chain usage the
    # analyzer cannot see, so the two categories differ only in label
    n = _Names(rng)
    name = n.contract()
    slot, stamp, helper = n.var(), n.fn(), n.fn()
    k = rng.randint(1, 40)
    src = f"""pragma solidity ^0.8.19;

contract {name} {{
    uint256 public {slot};

    function {stamp}() public {{
        {slot} = block.timestamp;
    }}

    function {helper}(uint256 x) public pure returns (uint256) {{
        return x + {k};
    }}
}}
"""
    return name, src, vulnerable, ["MEDIUM"]


_TEMPLATES = {
    "VulnModulo": _vuln_modulo,
    "VulnKeccakRNG": _vuln_keccak_rng,
    "VulnLottery": _vuln_lottery,
    "VulnBlockhash": _vuln_blockhash,
    "SafeTimeLock": _safe_timelock,
    "SafeLogging": _safe_logging,
    "SafeCooldown": _safe_cooldown,
    "NeutralArithmetic": _neutral_arithmetic,
    "BorderlineVuln": lambda rng: _borderline(rng, True),
    "BorderlineSafe": lambda rng: _borderline(rng, False),
}


def generate(seed: int, counts: dict[str, int], out_dir: str | Path) -> dict:
    """Write one .sol file per requested contract plus manifest.json.

    Byte-identical output for a fixed seed and counts.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    entries = []
    for category in CATEGORIES:
        count = counts.get(category, 0)
        if count < 0:
            raise ValueError(f"negative count for {category}")
        for i in range(count):
            rng = random.Random(f"{seed}:{category}:{i}")
            name, source, vulnerable, risks = _TEMPLATES[category](rng)
            contract_id = f"{category}_{i:03d}_{name}"
            file_name = contract_id + ".sol"
            (out / file_name).write_text(source, encoding="utf-8")
            entries.append(
                {
                    "contract_id": contract_id,
                    "file": file_name,
                    "category": category,
                    "vulnerable": vulnerable,
                    "expected_path_risks": risks,
                }
            )
    manifest = {
        "schema_version": "1",
        "seed": seed,
        "counts": {c: counts.get(c, 0) for c in CATEGORIES if counts.get(c)},
        "entries": entries,
    }
    (out / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return manifest


MODE_BALANCED = "Balanced"
MODE_IMBALANCED = "Imbalanced"


def split(
    manifest: dict,
    mode: str = MODE_BALANCED,
    seed: int = 0,
    train_frac: float = 0.8,
    vulnerable_ratio: float = 0.08,
) -> tuple[dict, dict]:
    """Stratified disjoint train/test manifests.

    Balanced keeps a 50/50 class mix; Imbalanced keeps `vulnerable_ratio`
    of vulnerable contracts in both splits.
    """
    rng = random.Random(seed)
    vuln = [e for e in manifest["entries"] if e["vulnerable"]]
    safe = [e for e in manifest["entries"] if not e["vulnerable"]]
    rng.shuffle(vuln)
    rng.shuffle(safe)
    if mode == MODE_BALANCED:
        n = min(len(vuln), len(safe))
        if n == 0:
            raise InsufficientClass("both classes required")
        vuln, safe = vuln[:n], safe[:n]
    elif mode == MODE_IMBALANCED:
        want_vuln = round(len(safe) * vulnerable_ratio / (1.0 - vulnerable_ratio))
        if want_vuln < 1 or not safe:
            raise InsufficientClass("not enough entries for imbalanced split")
        if want_vuln > len(vuln):
            raise InsufficientClass(
                f"need {want_vuln} vulnerable entries, have {len(vuln)}"
            )
        vuln = vuln[:want_vuln]
    else:
        raise ValueError(f"unknown split mode {mode!r}")

    def cut(entries):
        k = round(len(entries) * train_frac)
        return entries[:k], entries[k:]

    vuln_train, vuln_test = cut(vuln)
    safe_train, safe_test = cut(safe)

    def pack(entries):
        ordered = sorted(entries, key=lambda e: e["contract_id"])
        return {
            "schema_version": "1",
            "seed": manifest.get("seed"),
            "entries": ordered,
        }

    return pack(vuln_train + safe_train), pack(vuln_test + safe_test)
