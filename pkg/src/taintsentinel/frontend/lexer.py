"""Tokenizer for the Solidity subset.

Comments are stripped; every other non-whitespace character must belong to
exactly one token, otherwise a LexError is raised.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import LexError
from .astnodes import SourceSpan

KEYWORDS = frozenset(
    {
        "contract",
        "function",
        "modifier",
        "event",
        "emit",
        "constructor",
        "receive",
        "fallback",
        "require",
        "return",
        "returns",
        "if",
        "else",
        "for",
        "while",
        "public",
        "external",
        "internal",
        "private",
        "payable",
        "view",
        "pure",
        "constant",
        "immutable",
        "memory",
        "storage",
        "calldata",
        "mapping",
        "pragma",
        "true",
        "false",
        "new",
        "delete",
        # type names
        "uint",
        "uint8",
        "uint16",
        "uint32",
        "uint64",
        "uint128",
        "uint256",
        "int",
        "int256",
        "address",
        "bool",
        "bytes",
        "bytes4",
        "bytes32",
        "string",
        # constructs outside the subset, recognised so the parser can
        # report UnsupportedFeature instead of a generic parse error
        "assembly",
        "import",
        "library",
        "interface",
        "using",
        "try",
        "catch",
        "struct",
        "enum",
        "is",
        "abstract",
        "unchecked",
    }
)

# Denomination / time unit suffixes attached to numeric literals.
UNITS = frozenset(
    {"wei", "gwei", "ether", "seconds", "minutes", "hours", "days", "weeks"}
)

MULTI_CHAR_OPS = (
    "==",
    "!=",
    "<=",
    ">=",
    "&&",
    "||",
    "+=",
    "-=",
    "*=",
    "/=",
    "%=",
    "=>",
    "++",
    "--",
    "**",
    ">>",
    "<<",
)

SINGLE_CHAR_OPS = set("+-*/%=<>!&|^~?:;,.(){}[]")


@dataclass(frozen=True)
class Token:
    type: str  # ident | keyword | number | string | op
    text: str
    span: SourceSpan


def tokenize(source: str, file: str = "<memory>") -> list[Token]:
    tokens: list[Token] = []
    i = 0
    line = 1
    col = 1
    n = len(source)

    def span(length, at_line=None, at_col=None):
        return SourceSpan(file, at_line or line, at_col or col, length)

    def advance(text):
        nonlocal line, col
        for ch in text:
            if ch == "\n":
                line += 1
                col = 1
            else:
                col += 1

    while i < n:
        ch = source[i]
        if ch in " \t\r\n":
            advance(ch)
            i += 1
            continue
        if source.startswith("//", i):
            end = source.find("\n", i)
            end = n if end == -1 else end
            advance(source[i:end])
            i = end
            continue
        if source.startswith("/*", i):
            end = source.find("*/", i + 2)
            if end == -1:
                raise LexError("unterminated comment", span(2))
            advance(source[i : end + 2])
            i = end + 2
            continue
        if ch in "\"'":
            end = i + 1
            while end < n and source[end] != ch:
                if source[end] == "\\":
                    end += 1
                end += 1
            if end >= n:
                raise LexError("unterminated string", span(1))
            text = source[i : end + 1]
            tokens.append(Token("string", text, span(len(text))))
            advance(text)
            i = end + 1
            continue
        if ch.isdigit():
            end = i
            if source.startswith("0x", i) or source.startswith("0X", i):
                end = i + 2
                while end < n and (source[end] in "_" or source[end].isalnum()):
                    end += 1
            else:
                while end < n and (source[end].isdigit() or source[end] in "._"):
                    end += 1
            text = source[i:end]
            tokens.append(Token("number", text, span(len(text))))
            advance(text)
            i = end
            continue
        if ch.isalpha() or ch in "_$":
            end = i
            while end < n and (source[end].isalnum() or source[end] in "_$"):
                end += 1
            text = source[i:end]
            kind = "keyword" if text in KEYWORDS else "ident"
            tokens.append(Token(kind, text, span(len(text))))
            advance(text)
            i = end
            continue
        matched = None
        for op in MULTI_CHAR_OPS:
            if source.startswith(op, i):
                matched = op
                break
        if matched is None and ch in SINGLE_CHAR_OPS:
            matched = ch
        if matched is None:
            raise LexError(f"unrecognized character {ch!r}", span(1))
        tokens.append(Token("op", matched, span(len(matched))))
        advance(matched)
        i += len(matched)
    return tokens
