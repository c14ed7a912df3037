"""Big-step evaluator for expressions and statements.

Failure (an undefined result) is signalled by raising :class:`EvalFailure`.
It propagates through every enclosing statement and call untouched;
only the transaction layer catches it and rolls back.
"""

from __future__ import annotations

import enum
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass
from typing import Optional, Union

from .state import (
    BALANCE,
    UNDEFINED,
    State,
    apply_update,
    transfer,
)
from .syntax.desugar import desugar_contract
from .syntax.nodes import (
    FSKIP,
    FSKIP_PROCEDURE,
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
from .syntax.printer import format_expr
from .values import Address, Pair, Value, canon, format_value, hash_value, is_bool, is_int

DEFAULT_FUEL = 100_000
# nested calls allowed before giving up; deeper chains would overflow the
# Python stack long before a realistic fuel budget runs out
MAX_CALL_DEPTH = 1024

Env = Mapping[str, Value]
Registry = Mapping[Address, Contract]


class Cause(str, enum.Enum):
    THROW = "Throw"
    UNBOUND_CONST = "UnboundConst"
    UNDEFINED_KEY_READ = "UndefinedKeyRead"
    BAD_LHS = "BadLhs"
    TYPE_MISMATCH = "TypeMismatch"
    UNKNOWN_PROCEDURE = "UnknownProcedure"
    ARITY_MISMATCH = "ArityMismatch"
    NEGATIVE_AMOUNT = "NegativeAmount"
    INSUFFICIENT_FUNDS = "InsufficientFunds"
    BALANCE_ASSIGN = "BalanceAssign"
    FUEL_EXHAUSTED = "FuelExhausted"

    def __str__(self) -> str:
        return self.value


class EvalFailure(Exception):
    """The evaluation has no result. ``cause`` is for diagnostics only."""

    def __init__(self, cause: Cause, detail: str = ""):
        super().__init__(f"{cause}: {detail}" if detail else str(cause))
        self.cause = cause
        self.detail = detail


class Fuel:
    """Step budget; one unit per statement node and per loop iteration."""

    def __init__(self, budget: int = DEFAULT_FUEL):
        if budget < 0:
            raise ValueError("fuel budget must be non-negative")
        self.budget = budget
        self.remaining = budget

    def tick(self) -> None:
        if self.remaining <= 0:
            raise EvalFailure(Cause.FUEL_EXHAUSTED, f"budget of {self.budget} steps used up")
        self.remaining -= 1

    @property
    def used(self) -> int:
        return self.budget - self.remaining


@dataclass(frozen=True)
class TraceEvent:
    rule: str
    address: Optional[Address]
    depth: int
    detail: str = ""
    proc: Optional[str] = None
    balances: tuple[tuple[Address, int], ...] = ()

    def __str__(self) -> str:
        bal = "".join(f" {a}={n}" for a, n in self.balances)
        return f"{'  ' * self.depth}[{self.rule}] {self.address} {self.detail}{bal}".rstrip()


Tracer = Callable[[TraceEvent], None]


def _fail_type(msg: str) -> EvalFailure:
    return EvalFailure(Cause.TYPE_MISMATCH, msg)


def _ints(op: str, a: Value, b: Value) -> tuple[int, int]:
    if not (is_int(a) and is_int(b)):
        raise _fail_type(f"{op} needs integers, got {format_value(a)} and {format_value(b)}")
    return a, b


def _div(a: int, b: int) -> int:
    if b == 0:
        raise _fail_type("division by zero")
    q = abs(a) // abs(b)
    return q if (a < 0) == (b < 0) else -q


def apply_op(op: str, args: Sequence[Value]) -> Value:
    """Semantic counterpart of an operator, on already evaluated operands."""
    if op in ("+", "-", "*", "/", "%"):
        a, b = _ints(op, *args)
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        q = _div(a, b)
        return q if op == "/" else a - b * q
    if op == "==":
        return canon(args[0]) == canon(args[1])
    if op == "!=":
        return canon(args[0]) != canon(args[1])
    if op in ("<", "<=", ">", ">="):
        a, b = args
        if not ((is_int(a) and is_int(b)) or (type(a) is str and type(b) is str)):
            raise _fail_type(f"cannot compare {format_value(a)} and {format_value(b)}")
        return {"<": a < b, "<=": a <= b, ">": a > b, ">=": a >= b}[op]
    if op in ("&&", "||"):
        a, b = args
        if not (is_bool(a) and is_bool(b)):
            raise _fail_type(f"{op} needs booleans")
        return (a and b) if op == "&&" else (a or b)
    if op == "not":
        (a,) = args
        if not is_bool(a):
            raise _fail_type("not needs a boolean")
        return not a
    if op == "^":
        a, b = args
        if not (type(a) is str and type(b) is str):
            raise _fail_type("^ needs strings")
        return a + b
    if op == "hash":
        return hash_value(args[0])
    if op in ("fst", "snd"):
        (a,) = args
        if not isinstance(a, Pair):
            raise _fail_type(f"{op} needs a pair")
        return a.fst if op == "fst" else a.snd
    if op == "pair":
        return Pair(args[0], args[1])
    raise _fail_type(f"unknown operator {op}")


def eval_expr(state: State, env: Env, address: Optional[Address], e: Expr) -> Value:
    """Value of ``e`` at ``address``; never changes ``state``.

    Strict: all operands are evaluated, and any failing operand fails
    the whole expression (``&&`` and ``||`` do not short-circuit).
    """
    if isinstance(e, Lit):
        return e.value
    if isinstance(e, Const):
        try:
            return env[e.name]
        except KeyError:
            raise EvalFailure(Cause.UNBOUND_CONST, e.name) from None
    if isinstance(e, AddrLit):
        return e.address
    if isinstance(e, Op):
        return apply_op(e.op, [eval_expr(state, env, address, a) for a in e.args])
    if isinstance(e, Lookup):
        k = eval_expr(state, env, address, e.key)
        v = UNDEFINED if address is None else state.get(address, k)
        if v is UNDEFINED:
            raise EvalFailure(Cause.UNDEFINED_KEY_READ, f"{address}.{format_value(k)}")
        return v
    if isinstance(e, Bound):
        k = eval_expr(state, env, address, e.key)
        return address is not None and state.is_bound(address, k)
    if isinstance(e, Context):
        return eval_expr(state, env, e.address, e.expr)
    raise TypeError(f"not an expression: {e!r}")


def make_registry(contracts: Sequence[Contract]) -> dict[Address, Contract]:
    """Registry from contract declarations, with procedure bodies desugared."""
    reg: dict[Address, Contract] = {}
    for c in contracts:
        if c.address in reg:
            raise ValueError(f"contract {c.address} declared twice")
        reg[c.address] = desugar_contract(c)
    return reg


class Interpreter:
    """Statement evaluator over a fixed registry of contracts.

    Every account address implicitly offers the single procedure
    ``fskip() { skip }``.
    """

    def __init__(self, registry: Registry, tracer: Optional[Tracer] = None):
        self.registry = registry
        self.tracer = tracer
        self.depth = 0

    def procedure(self, address: Address, name: str) -> Optional[Procedure]:
        if address.is_account:
            return FSKIP_PROCEDURE if name == FSKIP else None
        c = self.registry.get(address)
        return None if c is None else c.procedure(name)

    def _trace(self, rule: str, address, detail: str = "", proc=None, balances=()) -> None:
        if self.tracer is not None:
            self.tracer(TraceEvent(rule, address, self.depth, detail, proc, tuple(balances)))

    def eval(self, state: State, env: Env, address: Address, e: Expr) -> Value:
        return eval_expr(state, env, address, e)

    def exec_stmt(self, state: State, env: Env, address: Address, s: Stmt, fuel: Fuel) -> State:
        """Run ``s`` at ``address``; returns the new state or raises
        :class:`EvalFailure`."""
        while True:
            fuel.tick()
            if isinstance(s, Seq):
                self._trace("seq", address)
                state = self.exec_stmt(state, env, address, s.first, fuel)
                s = s.second
                continue
            if isinstance(s, Skip):
                self._trace("skip", address)
                return state
            if isinstance(s, Throw):
                self._trace("throw", address)
                raise EvalFailure(Cause.THROW)
            if isinstance(s, Assign):
                return self._assign(state, env, address, s)
            if isinstance(s, If):
                b = self._guard(state, env, address, s.guard)
                self._trace("if", address, f"{format_expr(s.guard)} = {format_value(b)}")
                if b:
                    s = s.then
                elif s.orelse is None:
                    return state
                else:
                    s = s.orelse
                continue
            if isinstance(s, While):
                return self._while(state, env, address, s, fuel)
            if isinstance(s, Call):
                return self._call(state, env, address, s.target, s.proc, s.args,
                                  s.amount if s.amount is not None else Lit(0), fuel)
            if isinstance(s, Transfer):
                return self._call(state, env, address, s.target, FSKIP, (), s.amount, fuel)
            raise TypeError(f"not a statement: {s!r}")

    def _guard(self, state: State, env: Env, address: Address, guard: Expr) -> bool:
        b = eval_expr(state, env, address, guard)
        if not is_bool(b):
            raise _fail_type(f"guard {format_expr(guard)} is {format_value(b)}, not a boolean")
        return b

    def _assign(self, state: State, env: Env, address: Address, s: Assign) -> State:
        k = eval_expr(state, env, address, s.lhs)
        v = eval_expr(state, env, address, s.rhs)
        if k == BALANCE and type(k) is str:
            raise EvalFailure(Cause.BALANCE_ASSIGN, "the key balance cannot be assigned")
        if address.is_account:
            raise EvalFailure(Cause.BAD_LHS, f"store update at account {address}")
        self._trace("assign", address, f"{format_value(k)} := {format_value(v)}")
        return apply_update(state, [((address, k), v)])

    def _while(self, state: State, env: Env, address: Address, s: While, fuel: Fuel) -> State:
        while True:
            if not self._guard(state, env, address, s.guard):
                self._trace("while-false", address)
                return state
            self._trace("while-true", address)
            state = self.exec_stmt(state, env, address, s.body, fuel)
            fuel.tick()

    def _call(self, state: State, env: Env, address: Address, target: Expr, proc: str,
              args: Sequence[Expr], amount: Expr, fuel: Fuel) -> State:
        b = eval_expr(state, env, address, target)
        if not isinstance(b, Address):
            raise _fail_type(f"call target {format_value(b)} is not an address")
        vals = [eval_expr(state, env, address, a) for a in args]
        n = eval_expr(state, env, address, amount)
        return self.call_procedure(state, address, b, proc, vals, n, fuel)

    def call_procedure(self, state: State, caller: Address, callee: Address, proc: str,
                       args: Sequence[Value], amount: Value, fuel: Fuel) -> State:
        """Transfer ``amount`` from ``caller`` to ``callee`` and run
        ``callee.proc(args)`` with ``sender`` and ``value`` bound."""
        if not is_int(amount):
            raise _fail_type(f"amount {format_value(amount)} is not an integer")
        if amount < 0:
            raise EvalFailure(Cause.NEGATIVE_AMOUNT, str(amount))
        have = state.balance(caller)
        if amount > have:
            raise EvalFailure(Cause.INSUFFICIENT_FUNDS, f"{caller} has {have}, needs {amount}")
        p = self.procedure(callee, proc)
        if p is None:
            raise EvalFailure(Cause.UNKNOWN_PROCEDURE, f"{callee}.{proc}")
        if len(p.formals) != len(args):
            raise EvalFailure(Cause.ARITY_MISMATCH,
                              f"{callee}.{proc} takes {len(p.formals)} arguments, got {len(args)}")
        if self.depth >= MAX_CALL_DEPTH:
            raise EvalFailure(Cause.FUEL_EXHAUSTED, f"more than {MAX_CALL_DEPTH} nested calls")
        state = transfer(state, caller, callee, amount)
        env = {"sender": caller, "value": amount, **dict(zip(p.formals, args))}
        shown = ", ".join(format_value(v) for v in args)
        self._trace("call", callee, f"{caller} -> {callee}.{proc}({shown}) : {amount}", proc,
                    ((caller, state.balance(caller)), (callee, state.balance(callee))))
        self.depth += 1
        try:
            return self.exec_stmt(state, env, callee, p.body, fuel)
        except RecursionError:
            raise EvalFailure(Cause.FUEL_EXHAUSTED, "call stack too deep") from None
        finally:
            self.depth -= 1


def _fuel(fuel: Union[Fuel, int, None]) -> Fuel:
    if fuel is None:
        return Fuel()
    return Fuel(fuel) if isinstance(fuel, int) else fuel


def exec_stmt(state: State, env: Env, address: Address, s: Stmt,
              fuel: Union[Fuel, int, None] = None, registry: Optional[Registry] = None,
              tracer: Optional[Tracer] = None) -> State:
    return Interpreter(registry or {}, tracer).exec_stmt(state, env, address, s, _fuel(fuel))


def call_procedure(state: State, caller: Address, callee: Address, proc: str,
                   args: Sequence[Value], amount: Value,
                   fuel: Union[Fuel, int, None] = None, registry: Optional[Registry] = None,
                   tracer: Optional[Tracer] = None) -> State:
    return Interpreter(registry or {}, tracer).call_procedure(
        state, caller, callee, proc, args, amount, _fuel(fuel))


def hash(v: Value) -> str:  # noqa: A001
    """Digest used by the ``hash`` operator."""
    return hash_value(v)
