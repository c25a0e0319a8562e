"""Semantic graph construction: statement nodes, control/data/state edges
and execution contexts extracted from a parsed contract."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import GraphError
from .frontend import astnodes as ast
from .frontend.astnodes import AstNode, SourceSpan

# Frozen graph-node kind order; feature one-hot encoding depends on it.
NODE_KIND_ORDER = (
    "require",
    "local_decl",
    "assign",
    "if",
    "while",
    "for",
    "return",
    "transfer",
    "emit",
    "call",
    "placeholder",
)
KIND_INDEX = {k: i for i, k in enumerate(NODE_KIND_ORDER)}

# Statement kinds that participate in control dependence: taint entering
# their condition or leaving their branch propagates at full strength.
BRANCH_KINDS = frozenset({"if", "while", "for", "require"})

CONTROL = "Control"
DATA = "Data"
STATE = "State"

ACCESS_NONE = "None"
ACCESS_ROLE = "RoleGuarded"
ACCESS_OWNER = "OwnerOnly"

# Built-in identifiers that are never treated as program variables.
_BUILTIN_NAMES = frozenset(
    {
        "block",
        "msg",
        "tx",
        "abi",
        "this",
        "now",
        "gasleft",
        "blockhash",
        "keccak256",
        "sha256",
        "addmod",
        "mulmod",
        "payable",
        "require",
        "true",
        "false",
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
    }
)

_OWNER_MODIFIER_NAMES = ("onlyowner", "onlyadmin")


@dataclass
class ExecutionContext:
    name: str
    visibility: str  # Public | External | Internal | Private
    payable: bool
    modifiers: list[str] = field(default_factory=list)
    access_guard: str = ACCESS_NONE

    def to_json(self):
        return {
            "name": self.name,
            "visibility": self.visibility,
            "payable": self.payable,
            "modifiers": list(self.modifiers),
            "access_guard": self.access_guard,
        }


@dataclass
class GraphNode:
    id: int
    kind: str
    span: SourceSpan
    context_id: int
    snippet: str
    stmt: AstNode | None = None  # backing AST statement, not serialized
    reads: frozenset = frozenset()
    writes: frozenset = frozenset()
    body_ids: tuple = ()  # for branch nodes: ids nested in their body
    # analysis annotations, filled by later passes
    sources: list = field(default_factory=list)  # [(SourceLabel, SourceSpan)]
    sink: tuple | None = None  # (SinkLabel, SourceSpan)
    taint: float = 0.0


@dataclass(frozen=True)
class GraphEdge:
    src: int
    dst: int
    kind: str


@dataclass
class SemanticGraph:
    contract_name: str
    nodes: list[GraphNode]
    edges: list[GraphEdge]
    contexts: list[ExecutionContext]
    state_vars: frozenset = frozenset()

    def node(self, node_id: int) -> GraphNode:
        return self.nodes[node_id]

    def to_json(self):
        return {
            "schema_version": "1",
            "contract_name": self.contract_name,
            "nodes": [
                {
                    "id": n.id,
                    "kind": n.kind,
                    "span": n.span.to_json(),
                    "context_id": n.context_id,
                    "snippet": n.snippet,
                }
                for n in self.nodes
            ],
            "edges": [
                {"src": e.src, "dst": e.dst, "kind": e.kind} for e in self.edges
            ],
            "contexts": [c.to_json() for c in self.contexts],
        }


# ---------------------------------------------------------------------------
# variable read/write extraction


def _iter_reads(expr: AstNode, skip_callee=True):
    """Yield identifier nodes read as variables inside an expression."""
    if expr.kind == ast.IDENTIFIER:
        if expr.name not in _BUILTIN_NAMES:
            yield expr
        return
    children = expr.children
    start = 0
    if skip_callee and expr.kind in (ast.CALL, ast.TRANSFER) and children:
        callee = children[0]
        # the callee itself is not a read, but a member-access object is
        if callee.kind == ast.MEMBER_ACCESS:
            yield from _iter_reads(callee, skip_callee)
        start = 1
    for child in children[start:]:
        yield from _iter_reads(child, skip_callee)


def _write_target(stmt: AstNode) -> str | None:
    """Base variable name written by an assignment-like statement."""
    if stmt.kind == ast.ASSIGN:
        lhs = stmt.children[0]
        while lhs.kind in (ast.INDEX, ast.MEMBER_ACCESS):
            lhs = lhs.children[0]
        if lhs.kind == ast.IDENTIFIER and lhs.name not in _BUILTIN_NAMES:
            return lhs.name
        return None
    if stmt.kind == ast.UNARY_OP and stmt.name in ("++", "--"):
        operand = stmt.children[0]
        if operand.kind == ast.IDENTIFIER:
            return operand.name
    if stmt.kind == ast.LOCAL_VAR:
        return stmt.name
    return None


def _stmt_exprs(stmt: AstNode) -> list[AstNode]:
    """Expression roots belonging to the statement itself (not its body)."""
    if stmt.kind in (ast.LOCAL_VAR, ast.REQUIRE, ast.RETURN, ast.EMIT):
        return list(stmt.children)
    if stmt.kind == ast.ASSIGN:
        return list(stmt.children)
    if stmt.kind in (ast.IF, ast.WHILE):
        return [stmt.children[0]]
    if stmt.kind == ast.FOR:
        return [c for c in stmt.children[:-1]]
    if stmt.kind in (ast.TRANSFER, ast.CALL, ast.UNARY_OP):
        return [stmt]
    return []


def _stmt_reads(stmt: AstNode) -> frozenset:
    reads = set()
    for expr in _stmt_exprs(stmt):
        if stmt.kind == ast.ASSIGN and expr is stmt.children[0]:
            # plain assignment does not read its own base target,
            # but index/compound forms do read their subexpressions
            target = _write_target(stmt)
            names = {n.name for n in _iter_reads(expr)}
            if stmt.name == "=":
                names.discard(target)
            reads |= names
        elif expr.kind == ast.LOCAL_VAR:
            reads |= {n.name for e in expr.children for n in _iter_reads(e)}
            reads.discard(expr.name)
        else:
            reads |= {n.name for n in _iter_reads(expr)}
    return frozenset(reads)


# ---------------------------------------------------------------------------
# execution contexts


def _is_owner_require(stmt: AstNode) -> bool:
    if stmt.kind != ast.REQUIRE:
        return False
    cond = stmt.children[0]
    if cond.kind != ast.BINARY_OP or cond.name != "==":
        return False
    sides = cond.children[:2]

    def is_msg_sender(e):
        return (
            e.kind == ast.MEMBER_ACCESS
            and e.name == "sender"
            and e.children[0].kind == ast.IDENTIFIER
            and e.children[0].name == "msg"
        )

    def is_plain_var(e):
        return e.kind == ast.IDENTIFIER and e.name not in _BUILTIN_NAMES

    return (is_msg_sender(sides[0]) and is_plain_var(sides[1])) or (
        is_msg_sender(sides[1]) and is_plain_var(sides[0])
    )


def _mentions_msg_sender(node: AstNode) -> bool:
    for n in node.walk():
        if (
            n.kind == ast.MEMBER_ACCESS
            and n.name == "sender"
            and n.children
            and n.children[0].kind == ast.IDENTIFIER
            and n.children[0].name == "msg"
        ):
            return True
    return False


def _prologue_statements(body: AstNode):
    for stmt in body.children:
        if stmt.kind == ast.REQUIRE:
            yield stmt
        else:
            break


def _classify_guard(fn: AstNode, modifier_defs: dict[str, AstNode]) -> str:
    guard = ACCESS_NONE
    for mod_name in fn.attrs.get("modifiers", []):
        if mod_name.lower() in _OWNER_MODIFIER_NAMES:
            return ACCESS_OWNER
        mod = modifier_defs.get(mod_name)
        if mod is not None and mod.children:
            body = mod.children[0]
            if any(_is_owner_require(s) for s in _prologue_statements(body)):
                return ACCESS_OWNER
            if _mentions_msg_sender(body):
                guard = ACCESS_ROLE
        else:
            # unknown modifier: assume it guards something
            guard = ACCESS_ROLE
    if fn.children:
        if any(_is_owner_require(s) for s in _prologue_statements(fn.children[0])):
            return ACCESS_OWNER
    return guard


def extract_contexts(contract: AstNode) -> list[ExecutionContext]:
    """One context per function and modifier, with access-guard labels."""
    if contract.kind != ast.CONTRACT:
        raise GraphError(f"expected Contract root, got {contract.kind}")
    modifier_defs = {m.name: m for m in contract.children if m.kind == ast.MODIFIER}
    contexts = []
    for part in contract.children:
        if part.kind == ast.FUNCTION:
            contexts.append(
                ExecutionContext(
                    name=part.name,
                    visibility=part.attrs.get("visibility", "public").capitalize(),
                    payable=bool(part.attrs.get("payable")),
                    modifiers=list(part.attrs.get("modifiers", [])),
                    access_guard=_classify_guard(part, modifier_defs),
                )
            )
        elif part.kind == ast.MODIFIER:
            body = part.children[0] if part.children else None
            guard = ACCESS_NONE
            if part.name.lower() in _OWNER_MODIFIER_NAMES:
                guard = ACCESS_OWNER
            elif body is not None and any(
                _is_owner_require(s) for s in _prologue_statements(body)
            ):
                guard = ACCESS_OWNER
            elif body is not None and _mentions_msg_sender(body):
                guard = ACCESS_ROLE
            contexts.append(
                ExecutionContext(
                    name=part.name,
                    visibility="Internal",
                    payable=False,
                    modifiers=[],
                    access_guard=guard,
                )
            )
    return contexts


# ---------------------------------------------------------------------------
# graph construction


_STMT_KIND_MAP = {
    ast.REQUIRE: "require",
    ast.LOCAL_VAR: "local_decl",
    ast.ASSIGN: "assign",
    ast.IF: "if",
    ast.WHILE: "while",
    ast.FOR: "for",
    ast.RETURN: "return",
    ast.TRANSFER: "transfer",
    ast.CALL: "call",
    ast.EMIT: "emit",
    ast.PLACEHOLDER: "placeholder",
    ast.UNARY_OP: "assign",
}


class _Builder:
    def __init__(self, contract: AstNode):
        self.contract = contract
        self.nodes: list[GraphNode] = []
        self.edges: list[GraphEdge] = []
        self._edge_set: set[tuple] = set()
        self.contexts = extract_contexts(contract)
        self.state_vars = {
            p.name for p in contract.children if p.kind == ast.STATE_VAR
        }
        self.fn_entry: dict[str, int] = {}
        self.fn_returns: dict[str, list[int]] = {}
        self.fn_nodes: dict[int, list[int]] = {}

    def add_edge(self, src, dst, kind):
        if src == dst and kind != CONTROL:
            return
        key = (src, dst, kind)
        if key in self._edge_set:
            return
        self._edge_set.add(key)
        self.edges.append(GraphEdge(src, dst, kind))

    def new_node(self, stmt: AstNode, context_id: int) -> int:
        kind = _STMT_KIND_MAP.get(stmt.kind)
        if kind is None:
            raise GraphError(f"no graph mapping for AST node kind {stmt.kind}")
        node = GraphNode(
            id=len(self.nodes),
            kind=kind,
            span=stmt.span,
            context_id=context_id,
            snippet=stmt.text,
            stmt=stmt,
            reads=_stmt_reads(stmt),
            writes=frozenset(
                t for t in (_write_target(stmt),) if t is not None
            ),
        )
        self.nodes.append(node)
        return node.id

    def build_stmt_list(self, stmts, context_id):
        """Returns (entry_ids, exit_ids) for a statement sequence."""
        entry: list[int] = []
        exits: list[int] = []
        for stmt in stmts:
            s_entry, s_exits = self.build_stmt(stmt, context_id)
            if not s_entry:
                continue
            if not entry:
                entry = s_entry
            for prev in exits:
                for nxt in s_entry:
                    self.add_edge(prev, nxt, CONTROL)
            exits = s_exits
        return entry, exits

    def build_stmt(self, stmt: AstNode, context_id):
        if stmt.kind == ast.BLOCK:
            return self.build_stmt_list(stmt.children, context_id)
        if stmt.kind == ast.IF:
            nid = self.new_node(stmt, context_id)
            before = len(self.nodes)
            then_entry, then_exits = self.build_stmt(stmt.children[1], context_id)
            for e in then_entry:
                self.add_edge(nid, e, CONTROL)
            exits = list(then_exits)
            fallthrough = not then_entry  # empty then-branch
            if len(stmt.children) == 3:
                else_entry, else_exits = self.build_stmt(stmt.children[2], context_id)
                for e in else_entry:
                    self.add_edge(nid, e, CONTROL)
                exits.extend(else_exits)
                fallthrough = fallthrough or not else_entry
            else:
                fallthrough = True  # no else: condition may fall through
            if fallthrough and nid not in exits:
                exits.append(nid)
            self.nodes[nid].body_ids = tuple(range(before, len(self.nodes)))
            return [nid], exits
        if stmt.kind in (ast.WHILE, ast.FOR):
            nid = self.new_node(stmt, context_id)
            before = len(self.nodes)
            body = stmt.children[-1]
            body_entry, body_exits = self.build_stmt(body, context_id)
            if body_entry:
                for e in body_entry:
                    self.add_edge(nid, e, CONTROL)
                for e in body_exits:
                    self.add_edge(e, nid, CONTROL)  # loop back edge
            else:
                self.add_edge(nid, nid, CONTROL)  # empty body: self loop
            self.nodes[nid].body_ids = tuple(range(before, len(self.nodes)))
            return [nid], [nid]
        nid = self.new_node(stmt, context_id)
        if stmt.kind == ast.RETURN:
            return [nid], []
        return [nid], [nid]

    def build(self) -> SemanticGraph:
        parts = [
            p
            for p in self.contract.children
            if p.kind in (ast.FUNCTION, ast.MODIFIER)
        ]
        for ctx_id, part in enumerate(parts):
            start = len(self.nodes)
            if part.children:
                entry, _ = self.build_stmt_list(part.children[0].children, ctx_id)
                if entry and part.kind == ast.FUNCTION:
                    self.fn_entry[part.name] = entry[0]
            self.fn_nodes[ctx_id] = list(range(start, len(self.nodes)))
            if part.kind == ast.FUNCTION:
                self.fn_returns[part.name] = [
                    n.id
                    for n in self.nodes[start:]
                    if n.kind == "return"
                ]
        self._add_data_edges()
        self._add_state_edges()
        self._add_call_edges()
        return SemanticGraph(
            contract_name=self.contract.name,
            nodes=self.nodes,
            edges=self.edges,
            contexts=self.contexts,
            state_vars=frozenset(self.state_vars),
        )

    def _add_data_edges(self):
        # flow-insensitive def-use within each context, locals only
        for ctx_id, node_ids in self.fn_nodes.items():
            defs: dict[str, list[int]] = {}
            for nid in node_ids:
                node = self.nodes[nid]
                for var in node.writes:
                    if var not in self.state_vars:
                        defs.setdefault(var, []).append(nid)
            for nid in node_ids:
                node = self.nodes[nid]
                for var in sorted(node.reads):
                    for def_id in defs.get(var, ()):
                        if def_id != nid:
                            self.add_edge(def_id, nid, DATA)

    def _add_state_edges(self):
        writes: dict[str, list[int]] = {}
        for node in self.nodes:
            for var in node.writes:
                if var in self.state_vars:
                    writes.setdefault(var, []).append(node.id)
        for node in self.nodes:
            for var in sorted(node.reads):
                if var not in self.state_vars:
                    continue
                for w_id in writes.get(var, ()):
                    if w_id != node.id:
                        self.add_edge(w_id, node.id, STATE)

    def _add_call_edges(self):
        for node in self.nodes:
            if node.stmt is None:
                continue
            for expr in node.stmt.walk():
                if expr.kind != ast.CALL or not expr.children:
                    continue
                callee = expr.children[0]
                if callee.kind != ast.IDENTIFIER:
                    continue
                target = callee.name
                if target in self.fn_entry:
                    self.add_edge(node.id, self.fn_entry[target], CONTROL)
                    for ret_id in self.fn_returns.get(target, ()):
                        self.add_edge(ret_id, node.id, DATA)


def build_semantic_graph(contract: AstNode) -> SemanticGraph:
    """Build the control/data/state graph for one parsed contract."""
    return _Builder(contract).build()


def propagation_edges(graph: SemanticGraph, config) -> list[tuple[int, int, float]]:
    """Weighted edge view used for taint propagation and path extraction.

    Data and state edges always carry taint (with their decay factor).
    Control edges carry it only where control dependence is involved:
    out of a branching statement into its dependents, or into the
    condition of a branching statement.
    """
    out = []
    for edge in graph.edges:
        if edge.kind == CONTROL:
            src_kind = graph.nodes[edge.src].kind
            dst_kind = graph.nodes[edge.dst].kind
            if src_kind not in BRANCH_KINDS and dst_kind not in BRANCH_KINDS:
                continue
        out.append((edge.src, edge.dst, config.edge_factor(edge.kind)))
    return out
