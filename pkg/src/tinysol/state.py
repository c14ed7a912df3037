"""Blockchain states, state updates and the balance operators.

A :class:`State` maps every address to a key-value store. It is an
immutable value: every operation here returns a new state and leaves its
argument untouched, so rolling back a failed transaction is just a matter
of keeping the old state around.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from typing import Any, Union

from .values import (
    Address,
    Value,
    canon,
    format_value,
    is_int,
    is_value,
    to_json,
)

BALANCE = "balance"
_BALANCE_KEY = canon(BALANCE)


class _Undefined:
    """Marker returned for unbound keys."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNDEFINED"

    def __bool__(self) -> bool:
        return False


UNDEFINED = _Undefined()


class InsufficientFunds(Exception):
    def __init__(self, address: Address, balance: int, amount: int):
        super().__init__(f"{address} has balance {balance}, cannot debit {amount}")
        self.address = address
        self.balance = balance
        self.amount = amount


class InvariantViolation(Exception):
    """A state broke one of the structural invariants (negative balance,
    account store with extra keys, ...)."""


# one store: canon(key) -> (key, value)
_Store = Mapping[tuple, tuple]

StateUpdate = Union[Mapping[tuple, Value], Iterable[tuple[tuple[Address, Value], Value]]]


class State:
    """Total map from addresses to stores.

    Addresses never mentioned are treated as holding ``{balance: 0}``.
    """

    __slots__ = ("_stores",)

    def __init__(self, stores: Mapping[Address, Mapping[Value, Value]] | None = None):
        self._stores: dict[Address, dict[tuple, tuple]] = {}
        for addr, store in (stores or {}).items():
            items = store.items() if isinstance(store, Mapping) else store
            s = {canon(k): (k, v) for k, v in items}
            s.setdefault(_BALANCE_KEY, (BALANCE, 0))
            self._stores[addr] = s

    @classmethod
    def _raw(cls, stores: dict[Address, dict[tuple, tuple]]) -> State:
        st = cls.__new__(cls)
        st._stores = stores
        return st

    def get(self, address: Address, key: Value) -> Any:
        store = self._stores.get(address)
        ck = canon(key)
        if store is None:
            return 0 if ck == _BALANCE_KEY else UNDEFINED
        entry = store.get(ck)
        return UNDEFINED if entry is None else entry[1]

    def is_bound(self, address: Address, key: Value) -> bool:
        return self.get(address, key) is not UNDEFINED

    def balance(self, address: Address) -> int:
        return self.get(address, BALANCE)

    def addresses(self) -> list[Address]:
        """Addresses explicitly present, in dump order."""
        return sorted(self._stores)

    def items(self, address: Address) -> list[tuple[Value, Value]]:
        """Bindings of one store, sorted by canonical key order."""
        store = self._stores.get(address)
        if store is None:
            return [(BALANCE, 0)]
        return [store[ck] for ck in sorted(store)]

    def keys(self, address: Address) -> list[Value]:
        return [k for k, _ in self.items(address)]

    def __iter__(self) -> Iterator[tuple[Address, Value, Value]]:
        for addr in self.addresses():
            for k, v in self.items(addr):
                yield addr, k, v

    def _canonical(self) -> dict:
        # absent addresses and explicit {balance: 0} account stores are the same state
        out = {}
        for addr, store in self._stores.items():
            entries = {ck: canon(v) for ck, (_, v) in store.items()}
            if entries == {_BALANCE_KEY: canon(0)}:
                continue
            out[addr] = entries
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, State):
            return NotImplemented
        return self._canonical() == other._canonical()

    def __hash__(self) -> int:
        return hash(tuple(sorted((a, tuple(sorted(s.items()))) for a, s in self._canonical().items())))

    def __repr__(self) -> str:
        body = ", ".join(f"{a}.{format_value(k)}={format_value(v)}" for a, k, v in self)
        return f"State({body})"

    def dump(self) -> str:
        return "\n".join(f"{a}[{format_value(k)}] = {format_value(v)}" for a, k, v in self)

    def export(self) -> list[dict]:
        """One record per qualified key, JSON-ready."""
        return [
            {"address": str(a), "key": to_json(k), "value": to_json(v)} for a, k, v in self
        ]


def get(state: State, address: Address, key: Value) -> Any:
    """The value bound to ``address.key``, or :data:`UNDEFINED`."""
    return state.get(address, key)


def _update_items(update: StateUpdate) -> Iterable[tuple[tuple[Address, Value], Value]]:
    return update.items() if isinstance(update, Mapping) else update


def apply_update(state: State, update: StateUpdate) -> State:
    """Apply a state update: bindings named in ``update`` are replaced,
    everything else is left as in ``state``.

    ``update`` maps qualified keys ``(address, key)`` to values. Pass a
    sequence of ``((address, key), value)`` pairs when keys could collide
    as Python dict keys (``1`` and ``True``).
    """
    stores = dict(state._stores)
    copied: set[Address] = set()
    for (addr, key), value in _update_items(update):
        if not is_value(key) or not is_value(value):
            raise TypeError(f"bad update {addr}.{key!r} -> {value!r}")
        if addr not in copied:
            stores[addr] = dict(stores.get(addr, {_BALANCE_KEY: (BALANCE, 0)}))
            copied.add(addr)
        stores[addr][canon(key)] = (key, value)
    return State._raw(stores)


def credit(state: State, address: Address, amount: int) -> State:
    if not is_int(amount) or amount < 0:
        raise ValueError(f"credit amount must be a non-negative int, got {amount!r}")
    if amount == 0:
        return state
    return apply_update(state, [((address, BALANCE), state.balance(address) + amount)])


def debit(state: State, address: Address, amount: int) -> State:
    if not is_int(amount) or amount < 0:
        raise ValueError(f"debit amount must be a non-negative int, got {amount!r}")
    balance = state.balance(address)
    if amount > balance:
        raise InsufficientFunds(address, balance, amount)
    if amount == 0:
        return state
    return apply_update(state, [((address, BALANCE), balance - amount)])


def transfer(state: State, src: Address, dst: Address, amount: int) -> State:
    """``state - src:amount + dst:amount``."""
    return credit(debit(state, src, amount), dst, amount)


def total_supply(state: State, addresses: Iterable[Address]) -> int:
    return sum(state.balance(a) for a in set(addresses))


def check_invariants(state: State) -> None:
    """Raise :class:`InvariantViolation` unless every balance is a
    non-negative int and every account store binds only ``balance``."""
    for addr in state.addresses():
        bal = state.balance(addr)
        if not is_int(bal) or bal < 0:
            raise InvariantViolation(f"{addr} has balance {bal!r}")
        if addr.is_account:
            keys = state.keys(addr)
            if keys != [BALANCE]:
                extra = ", ".join(format_value(k) for k in keys if k != BALANCE)
                raise InvariantViolation(f"account {addr} binds extra keys: {extra}")


def balances(state: State, addresses: Iterable[Address] | None = None) -> dict[Address, int]:
    addrs = state.addresses() if addresses is None else sorted(set(addresses))
    return {a: state.balance(a) for a in addrs}
