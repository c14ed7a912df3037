"""Pretty-printer producing source the parser reads back to the same tree."""

from __future__ import annotations

from ..values import format_value, is_identifier
from .lexer import KEYWORDS
from .nodes import (
    AddrLit,
    Assign,
    Bound,
    Call,
    Const,
    Context,
    Contract,
    Expr,
    If,
    Lit,
    Lookup,
    Op,
    Procedure,
    Seq,
    Skip,
    Stmt,
    Throw,
    Transfer,
    While,
)
from .parser import BINARY_LEVELS

_BINARY_PREC = {op: i + 1 for i, ops in enumerate(BINARY_LEVELS) for op in ops}
UNARY, POSTFIX, ATOM = 7, 8, 9


def _prec(e: Expr) -> int:
    if isinstance(e, Op):
        if e.op == "pair":
            return ATOM
        return _BINARY_PREC.get(e.op, UNARY)
    if isinstance(e, (Lookup, Context)):
        return UNARY
    if isinstance(e, Bound):
        return POSTFIX
    return ATOM


def _bare_key(e: Expr, lhs: bool = False) -> bool:
    if not (isinstance(e, Lit) and type(e.value) is str):
        return False
    s = e.value
    return is_identifier(s) and s not in KEYWORDS and not (lhs and s == "balance")


def format_expr(e: Expr, prec: int = 0, key: bool = False) -> str:
    """Render ``e``; parenthesized if it binds looser than ``prec``."""
    if key and _bare_key(e):
        return e.value
    if key and isinstance(e, Const):
        return f"({e.name})"
    text = _format(e)
    return f"({text})" if _prec(e) < prec else text


def _format(e: Expr) -> str:
    if isinstance(e, Lit):
        return format_value(e.value)
    if isinstance(e, Const):
        return e.name
    if isinstance(e, AddrLit):
        return str(e.address)
    if isinstance(e, Lookup):
        return "?" + format_expr(e.key, UNARY, key=True)
    if isinstance(e, Bound):
        return format_expr(e.key, POSTFIX, key=True) + "?"
    if isinstance(e, Context):
        return f"{e.address} :: {format_expr(e.expr, UNARY)}"
    if isinstance(e, Op):
        if e.op == "pair":
            a, b = e.args
            return f"({format_expr(a)}, {format_expr(b)})"
        if e.op in _BINARY_PREC:
            p = _BINARY_PREC[e.op]
            a, b = e.args
            return f"{format_expr(a, p)} {e.op} {format_expr(b, p + 1)}"
        (a,) = e.args
        if e.op == "not":
            return f"not {format_expr(a, UNARY)}"
        return f"{e.op}({format_expr(a)})"
    raise TypeError(f"not an expression: {e!r}")


def format_stmt(s: Stmt, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(s, Skip):
        return pad + "skip"
    if isinstance(s, Throw):
        return pad + "throw"
    if isinstance(s, Assign):
        if _bare_key(s.lhs, lhs=True):
            lhs = s.lhs.value
        elif isinstance(s.lhs, Const):
            lhs = f"({s.lhs.name})"
        else:
            lhs = format_expr(s.lhs)
        return f"{pad}{lhs} := {format_expr(s.rhs)}"
    if isinstance(s, Seq):
        if isinstance(s.first, Seq):
            first = f"{pad}{{\n{format_stmt(s.first, indent + 1)}\n{pad}}}"
        else:
            first = format_stmt(s.first, indent)
        return f"{first};\n{format_stmt(s.second, indent)}"
    if isinstance(s, If):
        out = f"{pad}if {format_expr(s.guard)} then {_block(s.then, indent)}"
        if s.orelse is not None:
            out += f" else {_block(s.orelse, indent)}"
        return out
    if isinstance(s, While):
        return f"{pad}while {format_expr(s.guard)} do {_block(s.body, indent)}"
    if isinstance(s, Call):
        args = ", ".join(format_expr(a) for a in s.args)
        out = f"{pad}{format_expr(s.target)}.{s.proc}({args})"
        if s.amount is not None:
            out += f" : {format_expr(s.amount)}"
        return out
    if isinstance(s, Transfer):
        return f"{pad}{format_expr(s.target)} ! {format_expr(s.amount)}"
    raise TypeError(f"not a statement: {s!r}")


def _block(s: Stmt, indent: int) -> str:
    pad = "  " * indent
    return f"{{\n{format_stmt(s, indent + 1)}\n{pad}}}"


def format_procedure(p: Procedure, indent: int = 0) -> str:
    pad = "  " * indent
    return f"{pad}{p.name}({', '.join(p.formals)}) {_block(p.body, indent)}"


def format_contract(c: Contract) -> str:
    procs = "\n".join(format_procedure(p, 1) for p in c.procedures)
    if not procs:
        return f"contract {c.address} {{\n}}\n"
    return f"contract {c.address} {{\n{procs}\n}}\n"
