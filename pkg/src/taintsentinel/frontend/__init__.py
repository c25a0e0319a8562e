from .astnodes import AstNode, SourceSpan
from .lexer import Token, tokenize
from .parser import parse, parse_source

__all__ = ["AstNode", "SourceSpan", "Token", "tokenize", "parse", "parse_source"]
