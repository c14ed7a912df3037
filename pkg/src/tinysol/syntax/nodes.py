"""Abstract syntax of contracts, statements, expressions and scenarios."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from ..values import Address, Value, canon

# operator name -> arity
OPERATORS: dict[str, int] = {
    "+": 2, "-": 2, "*": 2, "/": 2, "%": 2,
    "==": 2, "!=": 2, "<": 2, "<=": 2, ">": 2, ">=": 2,
    "&&": 2, "||": 2, "^": 2,
    "not": 1, "hash": 1, "fst": 1, "snd": 1,
    "pair": 2,
}

FSKIP = "fskip"
RESERVED_NAMES = ("sender", "value")


# -- expressions --

@dataclass(frozen=True, eq=False)
class Lit:
    value: Value

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Lit) and canon(self.value) == canon(other.value)

    def __hash__(self) -> int:
        return hash(("Lit", canon(self.value)))


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class AddrLit:
    address: Address


@dataclass(frozen=True)
class Op:
    op: str
    args: tuple[Expr, ...]


@dataclass(frozen=True)
class Lookup:
    """``?e``: the value bound to key ``e`` in the current store."""
    key: Expr


@dataclass(frozen=True)
class Bound:
    """``e?``: whether key ``e`` is bound in the current store."""
    key: Expr


@dataclass(frozen=True)
class Context:
    """``#C :: e``: evaluate ``e`` as if running at ``address``."""
    address: Address
    expr: Expr


Expr = Union[Lit, Const, AddrLit, Op, Lookup, Bound, Context]


# -- statements --

@dataclass(frozen=True)
class Skip:
    pass


@dataclass(frozen=True)
class Throw:
    pass


@dataclass(frozen=True)
class Assign:
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class Seq:
    first: Stmt
    second: Stmt


@dataclass(frozen=True)
class If:
    guard: Expr
    then: Stmt
    orelse: Optional[Stmt] = None  # None only before desugaring


@dataclass(frozen=True)
class While:
    guard: Expr
    body: Stmt


@dataclass(frozen=True)
class Call:
    target: Expr
    proc: str
    args: tuple[Expr, ...]
    amount: Optional[Expr] = None  # None only before desugaring


@dataclass(frozen=True)
class Transfer:
    """Sugar ``target ! amount`` for ``target.fskip() : amount``."""
    target: Expr
    amount: Expr


Stmt = Union[Skip, Throw, Assign, Seq, If, While, Call, Transfer]


def seq(*stmts: Stmt) -> Stmt:
    """Right-nested sequence; ``seq()`` is ``skip``."""
    if not stmts:
        return Skip()
    out = stmts[-1]
    for s in reversed(stmts[:-1]):
        out = Seq(s, out)
    return out


@dataclass(frozen=True)
class Procedure:
    name: str
    formals: tuple[str, ...]
    body: Stmt


@dataclass(frozen=True)
class Contract:
    address: Address
    procedures: tuple[Procedure, ...]

    def procedure(self, name: str) -> Optional[Procedure]:
        for p in self.procedures:
            if p.name == name:
                return p
        return None

    @property
    def names(self) -> list[str]:
        return [p.name for p in self.procedures]


FSKIP_PROCEDURE = Procedure(FSKIP, (), Skip())


# -- scenarios --

@dataclass(frozen=True)
class ContractDecl:
    address: Address
    contract: Contract
    seeds: tuple[tuple[Expr, Expr], ...] = ()
    source: Optional[str] = None  # file name for ``from "..."`` declarations


@dataclass(frozen=True)
class TxDecl:
    caller: Address
    callee: Address
    proc: str
    args: tuple[Expr, ...]
    amount: Expr
    line: int = 0


@dataclass(frozen=True)
class Expect:
    expr: Expr
    line: int = 0
    text: str = ""


@dataclass
class Scenario:
    name: Optional[str] = None
    accounts: list[tuple[Address, int]] = field(default_factory=list)
    contracts: list[ContractDecl] = field(default_factory=list)
    transactions: list[TxDecl] = field(default_factory=list)
    expects: list[Expect] = field(default_factory=list)


__all__ = [
    "OPERATORS", "FSKIP", "RESERVED_NAMES", "FSKIP_PROCEDURE",
    "Lit", "Const", "AddrLit", "Op", "Lookup", "Bound", "Context", "Expr",
    "Skip", "Throw", "Assign", "Seq", "If", "While", "Call", "Transfer", "Stmt", "seq",
    "Procedure", "Contract", "ContractDecl", "TxDecl", "Expect", "Scenario",
]
