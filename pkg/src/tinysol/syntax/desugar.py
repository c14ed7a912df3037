from __future__ import annotations

from ..values import Address, is_value
from .lexer import ParseError
from .nodes import (
    FSKIP,
    OPERATORS,
    RESERVED_NAMES,
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


def desugar(s: Stmt) -> Stmt:
    """Remove the sugared forms: missing call amount becomes ``0``,
    ``e1 ! e2`` becomes ``e1.fskip() : e2``, and a missing else branch
    becomes ``skip``."""
    if isinstance(s, (Skip, Throw, Assign)):
        return s
    if isinstance(s, Seq):
        return Seq(desugar(s.first), desugar(s.second))
    if isinstance(s, If):
        orelse = Skip() if s.orelse is None else desugar(s.orelse)
        return If(s.guard, desugar(s.then), orelse)
    if isinstance(s, While):
        return While(s.guard, desugar(s.body))
    if isinstance(s, Call):
        amount = Lit(0) if s.amount is None else s.amount
        return Call(s.target, s.proc, s.args, amount)
    if isinstance(s, Transfer):
        return Call(s.target, FSKIP, (), s.amount)
    raise TypeError(f"not a statement: {s!r}")


def desugar_contract(c: Contract) -> Contract:
    return Contract(c.address, tuple(
        Procedure(p.name, p.formals, desugar(p.body)) for p in c.procedures
    ))


def is_desugared(s: Stmt) -> bool:
    if isinstance(s, Transfer):
        return False
    if isinstance(s, If):
        return s.orelse is not None and is_desugared(s.then) and is_desugared(s.orelse)
    if isinstance(s, Call):
        return s.amount is not None
    if isinstance(s, Seq):
        return is_desugared(s.first) and is_desugared(s.second)
    if isinstance(s, While):
        return is_desugared(s.body)
    return True


def validate_expr(e: Expr) -> None:
    if isinstance(e, Lit):
        if not is_value(e.value):
            raise ParseError(f"bad literal {e.value!r}")
    elif isinstance(e, Const):
        if not e.name.isidentifier():
            raise ParseError(f"bad constant name {e.name!r}")
    elif isinstance(e, AddrLit):
        if not isinstance(e.address, Address):
            raise ParseError(f"bad address {e.address!r}")
    elif isinstance(e, Op):
        arity = OPERATORS.get(e.op)
        if arity is None:
            raise ParseError(f"unknown operator {e.op!r}")
        if len(e.args) != arity:
            raise ParseError(f"operator {e.op} takes {arity} operands, got {len(e.args)}")
        for a in e.args:
            validate_expr(a)
    elif isinstance(e, (Lookup, Bound)):
        validate_expr(e.key)
    elif isinstance(e, Context):
        if not isinstance(e.address, Address):
            raise ParseError("context needs an address literal")
        validate_expr(e.expr)
    else:
        raise ParseError(f"not an expression: {e!r}")


def validate_stmt(s: Stmt) -> None:
    if isinstance(s, (Skip, Throw)):
        return
    if isinstance(s, Assign):
        validate_expr(s.lhs)
        validate_expr(s.rhs)
    elif isinstance(s, Seq):
        validate_stmt(s.first)
        validate_stmt(s.second)
    elif isinstance(s, If):
        validate_expr(s.guard)
        validate_stmt(s.then)
        if s.orelse is not None:
            validate_stmt(s.orelse)
    elif isinstance(s, While):
        validate_expr(s.guard)
        validate_stmt(s.body)
    elif isinstance(s, Call):
        validate_expr(s.target)
        for a in s.args:
            validate_expr(a)
        if s.amount is not None:
            validate_expr(s.amount)
    elif isinstance(s, Transfer):
        validate_expr(s.target)
        validate_expr(s.amount)
    else:
        raise ParseError(f"not a statement: {s!r}")


def validate_contract(c: Contract) -> None:
    """Walk a contract and raise :class:`ParseError` on any broken
    well-formedness rule."""
    if not (isinstance(c.address, Address) and c.address.is_contract):
        raise ParseError(f"{c.address} is not a contract address")
    seen: set[str] = set()
    for p in c.procedures:
        if p.name in seen:
            raise ParseError(f"procedure {p.name} defined twice", code="duplicate-procedure")
        seen.add(p.name)
        for x in p.formals:
            if x in RESERVED_NAMES:
                raise ParseError(f"{x} cannot be a formal parameter", code="reserved-formal")
        if len(set(p.formals)) != len(p.formals):
            raise ParseError(f"repeated formal in {p.name}", code="duplicate-formal")
        validate_stmt(p.body)
