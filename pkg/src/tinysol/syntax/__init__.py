"""Contract and scenario syntax: tree, parser, printer and desugaring."""

from .desugar import desugar, desugar_contract, is_desugared, validate_contract, validate_stmt
from .lexer import ParseError, UnknownAddress, tokenize
from .nodes import *  # noqa: F401,F403
from .parser import (
    load_contract,
    load_scenario,
    parse_contract,
    parse_expr,
    parse_scenario,
    parse_stmt,
)
from .printer import format_contract, format_expr, format_stmt
