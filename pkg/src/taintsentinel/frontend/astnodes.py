"""AST node and source-span types for the Solidity subset."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class SourceSpan:
    file: str
    line: int
    column: int
    length: int

    def __post_init__(self):
        if self.line < 1 or self.column < 1 or self.length < 0:
            raise ValueError(f"invalid span {self.line}:{self.column}+{self.length}")

    def __str__(self):
        return f"{self.file}:{self.line}:{self.column}"

    def to_json(self):
        return {
            "file": self.file,
            "line": self.line,
            "column": self.column,
            "length": self.length,
        }


# Structural node kinds.
CONTRACT = "Contract"
FUNCTION = "Function"
MODIFIER = "Modifier"
STATE_VAR = "StateVar"
LOCAL_VAR = "LocalVar"
ASSIGN = "Assign"
BINARY_OP = "BinaryOp"
UNARY_OP = "UnaryOp"
CALL = "Call"
MEMBER_ACCESS = "MemberAccess"
INDEX = "Index"
IF = "If"
REQUIRE = "Require"
RETURN = "Return"
TRANSFER = "Transfer"
LITERAL = "Literal"
IDENTIFIER = "Identifier"
WHILE = "While"
FOR = "For"
EMIT = "Emit"
EVENT_DECL = "EventDecl"
BLOCK = "Block"
PLACEHOLDER = "Placeholder"  # the `_;` body marker inside modifiers

NODE_KINDS = frozenset(
    {
        CONTRACT,
        FUNCTION,
        MODIFIER,
        STATE_VAR,
        LOCAL_VAR,
        ASSIGN,
        BINARY_OP,
        UNARY_OP,
        CALL,
        MEMBER_ACCESS,
        INDEX,
        IF,
        REQUIRE,
        RETURN,
        TRANSFER,
        LITERAL,
        IDENTIFIER,
        WHILE,
        FOR,
        EMIT,
        EVENT_DECL,
        BLOCK,
        PLACEHOLDER,
    }
)


@dataclass
class AstNode:
    kind: str
    span: SourceSpan
    text: str
    children: list[AstNode] = field(default_factory=list)
    name: str = ""  # identifier / member / operator payload, kind-dependent
    attrs: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in NODE_KINDS:
            raise ValueError(f"unknown AST node kind {self.kind!r}")
        if self.kind == ASSIGN and len(self.children) != 2:
            raise ValueError("Assign node requires exactly 2 children")
        if self.kind == IF and not 2 <= len(self.children) <= 3:
            raise ValueError("If node requires 2 or 3 children")

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()

    def find(self, kind):
        return [n for n in self.walk() if n.kind == kind]

    def to_json(self):
        out = {"kind": self.kind, "span": self.span.to_json()}
        if self.name:
            out["name"] = self.name
        if self.attrs:
            out["attrs"] = {k: v for k, v in sorted(self.attrs.items())}
        if self.children:
            out["children"] = [c.to_json() for c in self.children]
        return out
