"""Runtime values: integers, booleans, strings, addresses and pairs.

Values are plain Python objects (``int``, ``bool``, ``str``) plus the two
small classes below. Because ``True == 1`` in Python, anything that needs
variant-aware equality or hashing goes through :func:`canon`.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass
from typing import Any, Union

ACCOUNT = "account"
CONTRACT = "contract"

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True, order=True)
class Address:
    """An account (``@name``) or contract (``#name``) address.

    Ordering puts accounts before contracts, then sorts by name.
    """

    kind: str
    name: str

    def __post_init__(self) -> None:
        if self.kind not in (ACCOUNT, CONTRACT):
            raise ValueError(f"bad address kind {self.kind!r}")
        if not _IDENT.match(self.name):
            raise ValueError(f"bad address name {self.name!r}")

    @property
    def is_account(self) -> bool:
        return self.kind == ACCOUNT

    @property
    def is_contract(self) -> bool:
        return self.kind == CONTRACT

    def __str__(self) -> str:
        return ("@" if self.is_account else "#") + self.name

    def __repr__(self) -> str:
        return f"Address({self})"


def account(name: str) -> Address:
    return Address(ACCOUNT, name)


def contract(name: str) -> Address:
    return Address(CONTRACT, name)


def parse_address(text: str) -> Address:
    """``"@A"`` -> account A, ``"#C"`` -> contract C."""
    if text[:1] == "@":
        return account(text[1:])
    if text[:1] == "#":
        return contract(text[1:])
    raise ValueError(f"not an address: {text!r}")


@dataclass(frozen=True, eq=False)
class Pair:
    fst: Value
    snd: Value

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Pair) and canon(self) == canon(other)

    def __hash__(self) -> int:
        return hash(canon(self))

    def __repr__(self) -> str:
        return f"Pair({self.fst!r}, {self.snd!r})"


Value = Union[int, bool, str, Address, Pair]

# variant tags, also the canonical ordering of variants
INT, BOOL, STR, ADDR, PAIR = range(5)


def is_int(v: Any) -> bool:
    return type(v) is int


def is_bool(v: Any) -> bool:
    return type(v) is bool


def is_value(v: Any) -> bool:
    if type(v) in (int, bool, str) or isinstance(v, Address):
        return True
    return isinstance(v, Pair) and is_value(v.fst) and is_value(v.snd)


def canon(v: Value) -> tuple:
    """Tagged, hashable, totally ordered form of a value.

    ``canon(1) != canon(True)``, so this is what stores use as dict keys.
    """
    t = type(v)
    if t is bool:
        return (BOOL, v)
    if t is int:
        return (INT, v)
    if t is str:
        return (STR, v)
    if t is Address:
        return (ADDR, v.kind, v.name)
    if t is Pair:
        return (PAIR, canon(v.fst), canon(v.snd))
    raise TypeError(f"not a value: {v!r}")


def same(a: Value, b: Value) -> bool:
    """Value equality; values of different variants are never equal."""
    return canon(a) == canon(b)


def variant(v: Value) -> str:
    return ("int", "bool", "str", "address", "pair")[canon(v)[0]]


def format_value(v: Value) -> str:
    """Source-level literal for ``v`` (strings are JSON-quoted)."""
    t = type(v)
    if t is bool:
        return "true" if v else "false"
    if t is int:
        return str(v)
    if t is str:
        return json.dumps(v, ensure_ascii=False)
    if t is Address:
        return str(v)
    if t is Pair:
        return f"({format_value(v.fst)}, {format_value(v.snd)})"
    raise TypeError(f"not a value: {v!r}")


def is_identifier(s: str) -> bool:
    return bool(_IDENT.match(s))


def to_json(v: Value) -> Any:
    """JSON encoding: numbers, booleans and strings map to themselves,
    addresses to ``{"address": "@A"}``, pairs to two-element lists."""
    t = type(v)
    if t in (bool, int, str):
        return v
    if t is Address:
        return {"address": str(v)}
    if t is Pair:
        return [to_json(v.fst), to_json(v.snd)]
    raise TypeError(f"not a value: {v!r}")


def from_json(obj: Any) -> Value:
    if type(obj) in (bool, int, str):
        return obj
    if isinstance(obj, dict) and set(obj) == {"address"}:
        return parse_address(obj["address"])
    if isinstance(obj, list) and len(obj) == 2:
        return Pair(from_json(obj[0]), from_json(obj[1]))
    raise ValueError(f"cannot decode value from {obj!r}")


def serialize(v: Value) -> bytes:
    """Canonical byte serialization; every variant is tagged."""
    return json.dumps(canon(v), separators=(",", ":"), ensure_ascii=False).encode()


def hash_value(v: Value) -> str:
    """SHA-256 of the canonical serialization, as lowercase hex."""
    return hashlib.sha256(serialize(v)).hexdigest()
