"""Transactions, blockchains and genesis states.

A transaction either succeeds and yields the state its procedure call
produced, or fails and leaves the state exactly as it was. A blockchain
is a left fold of its transactions.
"""

from __future__ import annotations

import sys
from collections.abc import Iterable
from dataclasses import dataclass, field
from typing import Optional

from .interp import (
    DEFAULT_FUEL,
    Cause,
    EvalFailure,
    Fuel,
    Interpreter,
    Registry,
    Tracer,
    TraceEvent,
    eval_expr,
    make_registry,
)
from .state import BALANCE, State, check_invariants
from .syntax.nodes import Contract, Expr, Op, Scenario
from .syntax.printer import format_expr
from .values import Address, Value, canon, format_value, is_int

TX1 = "Tx1"
TX2 = "Tx2"


class GenesisError(Exception):
    code = "genesis"


class DuplicateAddress(GenesisError):
    code = "duplicate-address"


class NegativeGenesisBalance(GenesisError):
    code = "negative-balance"


@dataclass(frozen=True)
class Transaction:
    caller: Address
    callee: Address
    proc: str
    args: tuple[Value, ...] = ()
    amount: int = 0

    def __post_init__(self) -> None:
        if not self.caller.is_account:
            raise ValueError(f"transactions are sent by accounts, not {self.caller}")
        if not is_int(self.amount) or self.amount < 0:
            raise ValueError(f"transaction amount must be a non-negative int, got {self.amount!r}")
        object.__setattr__(self, "args", tuple(self.args))

    def __str__(self) -> str:
        args = ", ".join(format_value(v) for v in self.args)
        return f"{self.caller} -> {self.callee}.{self.proc}({args}) : {self.amount}"


@dataclass(frozen=True)
class Receipt:
    tx: Transaction
    rule: str                      # TX1 or TX2
    cause: Optional[Cause] = None  # why TX2 fired
    detail: str = ""
    fuel_used: int = 0
    deltas: tuple[tuple[Address, int], ...] = ()

    @property
    def ok(self) -> bool:
        return self.rule == TX1


@dataclass
class ChainResult:
    state: State
    receipts: list[Receipt] = field(default_factory=list)

    def __iter__(self):
        return iter((self.state, self.receipts))


def _deltas(before: State, after: State) -> tuple[tuple[Address, int], ...]:
    out = []
    for a in sorted(set(before.addresses()) | set(after.addresses())):
        d = after.balance(a) - before.balance(a)
        if d:
            out.append((a, d))
    return tuple(out)


def execute_tx(state: State, tx: Transaction, registry: Registry,
               fuel: int = DEFAULT_FUEL, tracer: Optional[Tracer] = None,
               strict_callee: bool = False) -> tuple[State, Receipt]:
    """Apply one transaction and report which rule fired.

    Never raises for a failing call: the input state comes back
    unchanged together with a ``Tx2`` receipt.
    """
    budget = Fuel(fuel)
    interp = Interpreter(registry, tracer)
    try:
        if strict_callee and not tx.callee.is_contract:
            raise EvalFailure(Cause.UNKNOWN_PROCEDURE, f"{tx.callee} is not a contract")
        if tx.amount > state.balance(tx.caller):
            raise EvalFailure(Cause.INSUFFICIENT_FUNDS,
                              f"{tx.caller} has {state.balance(tx.caller)}, sends {tx.amount}")
        after = interp.call_procedure(state, tx.caller, tx.callee, tx.proc, tx.args, tx.amount, budget)
    except EvalFailure as exc:
        if tracer is not None:
            tracer(TraceEvent(TX2, tx.callee, 0, f"{tx}: {exc}"))
        return state, Receipt(tx, TX2, exc.cause, exc.detail, budget.used)
    if __debug__:
        check_invariants(after)
    if tracer is not None:
        tracer(TraceEvent(TX1, tx.callee, 0, str(tx)))
    return after, Receipt(tx, TX1, None, "", budget.used, _deltas(state, after))


def apply_tx(state: State, tx: Transaction, registry: Registry,
             fuel: int = DEFAULT_FUEL, tracer: Optional[Tracer] = None,
             strict_callee: bool = False) -> State:
    return execute_tx(state, tx, registry, fuel, tracer, strict_callee)[0]


def apply_chain(state: State, chain: Iterable[Transaction], registry: Registry,
                fuel: int = DEFAULT_FUEL, tracer: Optional[Tracer] = None,
                strict_callee: bool = False) -> ChainResult:
    """Fold the transactions over ``state``, left to right; fuel is per
    transaction."""
    receipts = []
    for tx in chain:
        state, r = execute_tx(state, tx, registry, fuel, tracer, strict_callee)
        receipts.append(r)
    return ChainResult(state, receipts)


def eval_closed(e: Expr) -> Value:
    """Evaluate an expression that needs no state or environment
    (literals, addresses, operators, ``hash``)."""
    try:
        return eval_expr(State(), {}, None, e)
    except EvalFailure as exc:
        raise GenesisError(f"cannot evaluate {format_expr(e)}: {exc}") from None


def genesis(scenario: Scenario) -> tuple[State, dict[Address, Contract]]:
    """Initial state and contract registry of a scenario."""
    stores: dict[Address, list[tuple[Value, Value]]] = {}
    for addr, bal in scenario.accounts:
        if addr in stores:
            raise DuplicateAddress(f"{addr} declared twice")
        if not is_int(bal) or bal < 0:
            raise NegativeGenesisBalance(f"{addr} has balance {bal!r}")
        stores[addr] = [(BALANCE, bal)]
    for decl in scenario.contracts:
        if decl.address in stores:
            raise DuplicateAddress(f"{decl.address} declared twice")
        seeds: dict[tuple, tuple[Value, Value]] = {}
        for ke, ve in decl.seeds:
            k, v = eval_closed(ke), eval_closed(ve)
            if canon(k) in seeds:
                raise GenesisError(f"{decl.address}: key {format_value(k)} seeded twice")
            seeds[canon(k)] = (k, v)
        bal = seeds.get(canon(BALANCE), (BALANCE, 0))[1]
        if not is_int(bal) or bal < 0:
            raise NegativeGenesisBalance(f"{decl.address} has balance {format_value(bal)}")
        stores[decl.address] = list(seeds.values())
    registry = make_registry([d.contract for d in scenario.contracts])
    return State(stores), registry


def transactions(scenario: Scenario) -> list[Transaction]:
    out = []
    for t in scenario.transactions:
        args = tuple(eval_closed(a) for a in t.args)
        amount = eval_closed(t.amount)
        if not is_int(amount) or amount < 0:
            raise GenesisError(f"line {t.line}: amount {format_value(amount)} is not a non-negative integer")
        out.append(Transaction(t.caller, t.callee, t.proc, args, amount))
    return out


def scenario_addresses(scenario: Scenario, state: Optional[State] = None) -> set[Address]:
    """Every address the scenario mentions, for supply accounting."""
    addrs = {a for a, _ in scenario.accounts} | {d.address for d in scenario.contracts}
    for t in scenario.transactions:
        addrs |= {t.caller, t.callee}
    if state is not None:
        addrs |= set(state.addresses())
    return addrs


@dataclass(frozen=True)
class ExpectResult:
    text: str
    line: int
    ok: bool
    lhs: Optional[str] = None
    rhs: Optional[str] = None
    error: Optional[str] = None


def check_expects(scenario: Scenario, state: State) -> list[ExpectResult]:
    """Evaluate every ``expect`` line against ``state``. For a top-level
    comparison both sides' values are reported."""
    out = []
    for ex in scenario.expects:
        text = ex.text or format_expr(ex.expr)
        e = ex.expr
        lhs = rhs = None
        try:
            if isinstance(e, Op) and len(e.args) == 2 and e.op not in ("pair", "&&", "||", "^"):
                a = eval_expr(state, {}, None, e.args[0])
                b = eval_expr(state, {}, None, e.args[1])
                lhs, rhs = format_value(a), format_value(b)
            v = eval_expr(state, {}, None, e)
        except EvalFailure as exc:
            out.append(ExpectResult(text, ex.line, False, lhs, rhs, str(exc)))
            continue
        if type(v) is not bool:
            out.append(ExpectResult(text, ex.line, False, lhs, rhs, f"value {format_value(v)} is not a boolean"))
        else:
            out.append(ExpectResult(text, ex.line, v, lhs, rhs))
    return out


def raise_recursion_limit(limit: int = 20_000) -> None:
    """Deep re-entrant call chains need more Python stack than the default."""
    if sys.getrecursionlimit() < limit:
        sys.setrecursionlimit(limit)


__all__ = [
    "TX1", "TX2", "Transaction", "Receipt", "ChainResult", "GenesisError",
    "DuplicateAddress", "NegativeGenesisBalance", "execute_tx", "apply_tx",
    "apply_chain", "genesis", "transactions", "eval_closed", "check_expects",
    "ExpectResult", "scenario_addresses", "raise_recursion_limit",
]
