"""Executable semantics for TinySol, a minimal calculus of Solidity-like
contracts with key-value stores and currency-transferring calls."""

from .chain import (
    TX1,
    TX2,
    Receipt,
    Transaction,
    apply_chain,
    apply_tx,
    execute_tx,
    genesis,
    transactions,
)
from .interp import (
    DEFAULT_FUEL,
    Cause,
    EvalFailure,
    Fuel,
    Interpreter,
    call_procedure,
    eval_expr,
    exec_stmt,
    make_registry,
)
from .state import (
    UNDEFINED,
    InsufficientFunds,
    State,
    apply_update,
    credit,
    debit,
    get,
    total_supply,
)
from .syntax import (
    ParseError,
    UnknownAddress,
    desugar,
    format_contract,
    format_expr,
    format_stmt,
    load_scenario,
    parse_contract,
    parse_expr,
    parse_scenario,
    parse_stmt,
)
from .values import Address, Pair, account, contract, hash_value

__version__ = "0.1.0"
