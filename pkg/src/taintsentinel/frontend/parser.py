"""Recursive-descent parser for the Solidity subset.

The grammar covers contracts, state variables, functions/modifiers/events,
require, if/else, for/while, local declarations, assignments, calls and
member access. Constructs outside the subset (inheritance, assembly,
libraries, try/catch, ...) raise UnsupportedFeature so nothing is silently
skipped.
"""

from __future__ import annotations

from ..errors import ParseError, UnsupportedFeature
from . import astnodes as ast
from .astnodes import AstNode, SourceSpan
from .lexer import UNITS, Token, tokenize

UNSUPPORTED_KEYWORDS = {
    "assembly",
    "import",
    "library",
    "interface",
    "using",
    "try",
    "catch",
    "struct",
    "enum",
    "abstract",
    "delete",
    "new",
}

TYPE_KEYWORDS = {
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
    "mapping",
}

VISIBILITY = {"public", "external", "internal", "private"}

ASSIGN_OPS = {"=", "+=", "-=", "*=", "/=", "%="}


class _Parser:
    def __init__(self, tokens: list[Token], source: str | None, file: str):
        self.tokens = tokens
        self.source = source
        self.file = file
        self.pos = 0
        self._line_starts = None
        if source is not None:
            starts = [0]
            for idx, ch in enumerate(source):
                if ch == "\n":
                    starts.append(idx + 1)
            self._line_starts = starts

    # -- token helpers -----------------------------------------------------

    def peek(self, ahead=0) -> Token | None:
        idx = self.pos + ahead
        return self.tokens[idx] if idx < len(self.tokens) else None

    def at(self, text) -> bool:
        tok = self.peek()
        return tok is not None and tok.text == text

    def at_type(self) -> bool:
        tok = self.peek()
        return tok is not None and tok.text in TYPE_KEYWORDS

    def next(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self._eof_span())
        self.pos += 1
        return tok

    def expect(self, text) -> Token:
        tok = self.peek()
        if tok is None or tok.text != text:
            raise ParseError(
                f"expected {text!r}, found {tok.text if tok else 'end of input'!r}",
                tok.span if tok else self._eof_span(),
                expected={text},
            )
        return self.next()

    def expect_ident(self) -> Token:
        tok = self.peek()
        if tok is None or tok.type not in ("ident", "keyword"):
            raise ParseError(
                "expected identifier",
                tok.span if tok else self._eof_span(),
                expected={"identifier"},
            )
        return self.next()

    def _eof_span(self) -> SourceSpan:
        if self.tokens:
            last = self.tokens[-1].span
            return SourceSpan(last.file, last.line, last.column + last.length, 0)
        return SourceSpan(self.file, 1, 1, 0)

    # -- span / text helpers -----------------------------------------------

    def _offset(self, span: SourceSpan) -> int:
        return self._line_starts[span.line - 1] + span.column - 1

    def span_between(self, start: Token, end: Token) -> SourceSpan:
        if self._line_starts is None:
            return start.span
        length = self._offset(end.span) + end.span.length - self._offset(start.span)
        return SourceSpan(start.span.file, start.span.line, start.span.column, length)

    def text_between(self, start: Token, end: Token) -> str:
        if self.source is None:
            lo = self.tokens.index(start)
            hi = self.tokens.index(end)
            return " ".join(t.text for t in self.tokens[lo : hi + 1])
        a = self._offset(start.span)
        b = self._offset(end.span) + end.span.length
        return self.source[a:b]

    def node(self, kind, start: Token, end: Token, **kw) -> AstNode:
        return AstNode(
            kind,
            self.span_between(start, end),
            self.text_between(start, end),
            **kw,
        )

    def unsupported(self, tok: Token):
        raise UnsupportedFeature(tok.text, tok.span)

    # -- top level -----------------------------------------------------------

    def parse_unit(self) -> AstNode:
        contracts = []
        first = self.peek()
        while self.peek() is not None:
            tok = self.peek()
            if tok.text == "pragma":
                while self.peek() is not None and not self.at(";"):
                    self.next()
                self.expect(";")
                continue
            if tok.text in UNSUPPORTED_KEYWORDS:
                self.unsupported(tok)
            if tok.text == "contract":
                contracts.append(self.parse_contract())
                continue
            raise ParseError(
                f"expected contract, found {tok.text!r}", tok.span,
                expected={"contract"},
            )
        if not contracts:
            raise ParseError("no contract found", self._eof_span())
        if len(contracts) == 1:
            return contracts[0]
        last = self.tokens[-1]
        unit = self.node(ast.BLOCK, first, last, name="unit")
        unit.children = contracts
        return unit

    def parse_contract(self) -> AstNode:
        start = self.expect("contract")
        name = self.expect_ident()
        if self.at("is"):
            self.unsupported(self.peek())
        self.expect("{")
        parts = []
        while not self.at("}"):
            parts.append(self.parse_contract_part())
        end = self.expect("}")
        node = self.node(ast.CONTRACT, start, end, name=name.text)
        node.children = parts
        return node

    def parse_contract_part(self) -> AstNode:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of contract", self._eof_span())
        if tok.text in UNSUPPORTED_KEYWORDS:
            self.unsupported(tok)
        if tok.text == "function":
            return self.parse_function()
        if tok.text in ("constructor", "receive", "fallback"):
            return self.parse_function(special=tok.text)
        if tok.text == "modifier":
            return self.parse_modifier()
        if tok.text == "event":
            return self.parse_event()
        if self.at_type():
            return self.parse_state_var()
        raise ParseError(
            f"unexpected token {tok.text!r} in contract body", tok.span,
            expected={"function", "modifier", "event", "<type>"},
        )

    # -- declarations ----------------------------------------------------------

    def parse_type(self) -> str:
        tok = self.peek()
        if tok is None or tok.text not in TYPE_KEYWORDS:
            raise ParseError(
                "expected type name",
                tok.span if tok else self._eof_span(),
                expected={"<type>"},
            )
        start = self.next()
        parts = [start.text]
        if start.text == "mapping":
            self.expect("(")
            parts.append("(" + self.parse_type())
            self.expect("=>")
            parts.append("=>" + self.parse_type() + ")")
            self.expect(")")
        if start.text == "address" and self.at("payable"):
            self.next()
            parts.append("payable")
        while self.at("["):
            self.next()
            if not self.at("]"):
                self.next()
            self.expect("]")
            parts.append("[]")
        return " ".join(parts)

    def parse_state_var(self) -> AstNode:
        start = self.peek()
        type_name = self.parse_type()
        visibility = "internal"
        constant = False
        while self.peek() and self.peek().text in (
            "public",
            "internal",
            "private",
            "constant",
            "immutable",
        ):
            mod = self.next().text
            if mod in VISIBILITY:
                visibility = mod
            else:
                constant = True
        name = self.expect_ident()
        children = []
        if self.at("="):
            self.next()
            children.append(self.parse_expression())
        end = self.expect(";")
        node = self.node(
            ast.STATE_VAR,
            start,
            end,
            name=name.text,
            attrs={"type": type_name, "visibility": visibility, "constant": constant},
        )
        node.children = children
        return node

    def parse_params(self) -> list[dict]:
        self.expect("(")
        params = []
        while not self.at(")"):
            type_name = self.parse_type()
            while self.peek() and self.peek().text in (
                "memory",
                "storage",
                "calldata",
                "indexed",
            ):
                self.next()
            pname = ""
            if self.peek() and self.peek().type == "ident":
                pname = self.next().text
            params.append({"type": type_name, "name": pname})
            if not self.at(")"):
                self.expect(",")
        self.expect(")")
        return params

    def parse_function(self, special=None) -> AstNode:
        start = self.next()  # 'function' or the special keyword
        if special:
            name = special
        else:
            name = self.expect_ident().text
        params = self.parse_params() if self.at("(") or not special else []
        visibility = "external" if special == "receive" else "public"
        payable = False
        mutability = ""
        modifiers = []
        returns = []
        while True:
            tok = self.peek()
            if tok is None:
                break
            if tok.text in VISIBILITY:
                visibility = self.next().text
            elif tok.text == "payable":
                payable = True
                self.next()
            elif tok.text in ("view", "pure"):
                mutability = self.next().text
            elif tok.text == "returns":
                self.next()
                self.expect("(")
                while not self.at(")"):
                    returns.append(self.parse_type())
                    if self.peek() and self.peek().type == "ident":
                        self.next()
                    if not self.at(")"):
                        self.expect(",")
                self.expect(")")
            elif tok.type == "ident":
                mod_name = self.next().text
                if self.at("("):
                    # modifier invocation arguments are recorded but unused
                    self.parse_call_args()
                modifiers.append(mod_name)
            else:
                break
        body = self.parse_block() if self.at("{") else None
        if body is None:
            end = self.expect(";")
        node = self.node(
            ast.FUNCTION,
            start,
            self.tokens[self.pos - 1],
            name=name,
            attrs={
                "visibility": visibility,
                "payable": payable,
                "mutability": mutability,
                "modifiers": modifiers,
                "params": params,
                "returns": returns,
                "special": special or "",
            },
        )
        if body is not None:
            node.children = [body]
        return node

    def parse_modifier(self) -> AstNode:
        start = self.expect("modifier")
        name = self.expect_ident()
        params = self.parse_params() if self.at("(") else []
        body = self.parse_block()
        node = self.node(
            ast.MODIFIER,
            start,
            self.tokens[self.pos - 1],
            name=name.text,
            attrs={"params": params},
        )
        node.children = [body]
        return node

    def parse_event(self) -> AstNode:
        start = self.expect("event")
        name = self.expect_ident()
        params = self.parse_params()
        end = self.expect(";")
        return self.node(
            ast.EVENT_DECL, start, end, name=name.text, attrs={"params": params}
        )

    # -- statements ------------------------------------------------------------

    def parse_block(self) -> AstNode:
        start = self.expect("{")
        stmts = []
        while not self.at("}"):
            stmts.append(self.parse_statement())
        end = self.expect("}")
        node = self.node(ast.BLOCK, start, end)
        node.children = stmts
        return node

    def parse_statement(self) -> AstNode:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self._eof_span())
        if tok.text in UNSUPPORTED_KEYWORDS:
            self.unsupported(tok)
        if tok.text == "{":
            return self.parse_block()
        if tok.text == "require":
            return self.parse_require()
        if tok.text == "if":
            return self.parse_if()
        if tok.text == "while":
            return self.parse_while()
        if tok.text == "for":
            return self.parse_for()
        if tok.text == "return":
            start = self.next()
            children = []
            if not self.at(";"):
                children.append(self.parse_expression())
            end = self.expect(";")
            node = self.node(ast.RETURN, start, end)
            node.children = children
            return node
        if tok.text == "emit":
            start = self.next()
            name = self.expect_ident()
            args = self.parse_call_args()
            end = self.expect(";")
            node = self.node(ast.EMIT, start, end, name=name.text)
            node.children = args
            return node
        if tok.text == "_" and self.peek(1) and self.peek(1).text == ";":
            start = self.next()
            end = self.expect(";")
            return self.node(ast.PLACEHOLDER, start, end)
        if self.at_type():
            return self.parse_local_decl()
        # expression statement (assignment or call)
        start = tok
        expr = self.parse_expression()
        end = self.expect(";")
        if expr.kind in (ast.ASSIGN, ast.CALL, ast.TRANSFER, ast.UNARY_OP):
            return expr
        raise ParseError("expression statement has no effect", start.span)

    def parse_require(self) -> AstNode:
        start = self.expect("require")
        self.expect("(")
        children = [self.parse_expression()]
        if self.at(","):
            self.next()
            children.append(self.parse_expression())
        self.expect(")")
        end = self.expect(";")
        node = self.node(ast.REQUIRE, start, end)
        node.children = children
        return node

    def parse_if(self) -> AstNode:
        start = self.expect("if")
        self.expect("(")
        cond = self.parse_expression()
        self.expect(")")
        then = self.parse_statement()
        children = [cond, then]
        if self.at("else"):
            self.next()
            children.append(self.parse_statement())
        return self.node(
            ast.IF, start, self.tokens[self.pos - 1], children=children
        )

    def parse_while(self) -> AstNode:
        start = self.expect("while")
        self.expect("(")
        cond = self.parse_expression()
        self.expect(")")
        body = self.parse_statement()
        node = self.node(ast.WHILE, start, self.tokens[self.pos - 1])
        node.children = [cond, body]
        return node

    def parse_for(self) -> AstNode:
        start = self.expect("for")
        self.expect("(")
        init = self.parse_local_decl() if self.at_type() else None
        if init is None:
            if not self.at(";"):
                init = self.parse_expression()
            self.expect(";")
        cond = None
        if not self.at(";"):
            cond = self.parse_expression()
        self.expect(";")
        post = None
        if not self.at(")"):
            post = self.parse_expression()
        self.expect(")")
        body = self.parse_statement()
        node = self.node(ast.FOR, start, self.tokens[self.pos - 1])
        node.children = [c for c in (init, cond, post, body) if c is not None]
        node.attrs = {
            "has_init": init is not None,
            "has_cond": cond is not None,
            "has_post": post is not None,
        }
        return node

    def parse_local_decl(self) -> AstNode:
        start = self.peek()
        type_name = self.parse_type()
        while self.peek() and self.peek().text in ("memory", "storage", "calldata"):
            self.next()
        name = self.expect_ident()
        children = []
        if self.at("="):
            self.next()
            children.append(self.parse_expression())
        end = self.expect(";")
        node = self.node(
            ast.LOCAL_VAR, start, end, name=name.text, attrs={"type": type_name}
        )
        node.children = children
        return node

    # -- expressions ----------------------------------------------------------

    def parse_call_args(self) -> list[AstNode]:
        self.expect("(")
        args = []
        while not self.at(")"):
            args.append(self.parse_expression())
            if not self.at(")"):
                self.expect(",")
        self.expect(")")
        return args

    def parse_expression(self) -> AstNode:
        return self.parse_assignment()

    def parse_assignment(self) -> AstNode:
        start = self.peek()
        lhs = self.parse_ternary()
        tok = self.peek()
        if tok is not None and tok.text in ASSIGN_OPS:
            op = self.next().text
            rhs = self.parse_assignment()
            return self.node(
                ast.ASSIGN, start, self.tokens[self.pos - 1], name=op,
                children=[lhs, rhs],
            )
        return lhs

    def parse_ternary(self) -> AstNode:
        start = self.peek()
        cond = self.parse_binary(0)
        if self.at("?"):
            self.next()
            then = self.parse_expression()
            self.expect(":")
            other = self.parse_expression()
            node = self.node(
                ast.BINARY_OP, start, self.tokens[self.pos - 1], name="?:"
            )
            node.children = [cond, then, other]
            return node
        return cond

    _BINARY_LEVELS = (
        ("||",),
        ("&&",),
        ("==", "!="),
        ("<", ">", "<=", ">="),
        ("+", "-"),
        ("*", "/", "%"),
        ("**",),
    )

    def parse_binary(self, level) -> AstNode:
        if level >= len(self._BINARY_LEVELS):
            return self.parse_unary()
        start = self.peek()
        left = self.parse_binary(level + 1)
        while True:
            tok = self.peek()
            if tok is None or tok.text not in self._BINARY_LEVELS[level]:
                return left
            op = self.next().text
            right = self.parse_binary(level + 1)
            node = self.node(
                ast.BINARY_OP, start, self.tokens[self.pos - 1], name=op
            )
            node.children = [left, right]
            left = node

    def parse_unary(self) -> AstNode:
        tok = self.peek()
        if tok is not None and tok.text in ("!", "-", "~"):
            start = self.next()
            operand = self.parse_unary()
            node = self.node(
                ast.UNARY_OP, start, self.tokens[self.pos - 1], name=tok.text
            )
            node.children = [operand]
            return node
        return self.parse_postfix()

    def parse_postfix(self) -> AstNode:
        start = self.peek()
        expr = self.parse_primary()
        while True:
            tok = self.peek()
            if tok is None:
                return expr
            if tok.text == ".":
                self.next()
                member = self.expect_ident()
                node = self.node(
                    ast.MEMBER_ACCESS,
                    start,
                    self.tokens[self.pos - 1],
                    name=member.text,
                )
                node.children = [expr]
                expr = node
            elif tok.text == "[":
                self.next()
                idx = self.parse_expression()
                self.expect("]")
                node = self.node(ast.INDEX, start, self.tokens[self.pos - 1])
                node.children = [expr, idx]
                expr = node
            elif tok.text == "{":
                # call options, e.g. .call{value: amount}
                self.next()
                options = {}
                while not self.at("}"):
                    key = self.expect_ident().text
                    self.expect(":")
                    options[key] = self.parse_expression()
                    if not self.at("}"):
                        self.expect(",")
                self.expect("}")
                args = self.parse_call_args()
                expr = self._make_call(start, expr, args, options)
            elif tok.text == "(":
                args = self.parse_call_args()
                expr = self._make_call(start, expr, args, {})
            elif tok.text in ("++", "--"):
                op = self.next()
                node = self.node(
                    ast.UNARY_OP, start, self.tokens[self.pos - 1], name=op.text
                )
                node.children = [expr]
                expr = node
            else:
                return expr

    def _make_call(self, start, callee, args, options) -> AstNode:
        end = self.tokens[self.pos - 1]
        is_value_call = callee.kind == ast.MEMBER_ACCESS and (
            callee.name in ("transfer", "send")
            or (callee.name == "call" and "value" in options)
        )
        kind = ast.TRANSFER if is_value_call else ast.CALL
        name = callee.name if callee.kind in (ast.MEMBER_ACCESS, ast.IDENTIFIER) else ""
        node = self.node(kind, start, end, name=name)
        node.children = [callee] + args + [v for v in options.values()]
        node.attrs = {"call_options": sorted(options)} if options else {}
        return node

    def parse_primary(self) -> AstNode:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of expression", self._eof_span())
        if tok.text in UNSUPPORTED_KEYWORDS:
            self.unsupported(tok)
        if tok.type == "number":
            start = self.next()
            unit = ""
            nxt = self.peek()
            if nxt is not None and nxt.text in UNITS:
                unit = self.next().text
            node = self.node(
                ast.LITERAL, start, self.tokens[self.pos - 1], name=start.text
            )
            if unit:
                node.attrs = {"unit": unit}
            return node
        if tok.type == "string":
            start = self.next()
            return self.node(ast.LITERAL, start, start, name=start.text)
        if tok.text in ("true", "false"):
            start = self.next()
            return self.node(ast.LITERAL, start, start, name=start.text)
        if tok.text == "(":
            self.next()
            expr = self.parse_expression()
            self.expect(")")
            return expr
        if tok.text in TYPE_KEYWORDS or tok.text == "payable":
            # type name used as a cast, e.g. uint(...), payable(...)
            start = self.next()
            return self.node(ast.IDENTIFIER, start, start, name=start.text)
        if tok.type in ("ident", "keyword"):
            start = self.next()
            return self.node(ast.IDENTIFIER, start, start, name=start.text)
        raise ParseError(f"unexpected token {tok.text!r}", tok.span)


def parse(tokens: list[Token], source: str | None = None, file: str = "<memory>") -> AstNode:
    """Parse a token sequence into an AST rooted at a Contract node."""
    return _Parser(tokens, source, file).parse_unit()


def parse_source(source: str, file: str = "<memory>") -> AstNode:
    return parse(tokenize(source, file), source, file)
