"""Recursive-descent parser for contract (``.tns``) and scenario (``.scn``) files.

Expression precedence, loosest first::

    ||   &&   == !=   < <= > >=   + - ^   * / %
    prefix: not  hash  fst  snd  ?e  #C :: e
    postfix: e?
    atoms: literals, names, addresses, (e), (e1, e2)

A bare identifier in key position (left of ``:=``, operand of prefix or
postfix ``?``, seed keys in scenarios) is a string key; anywhere else it
names a constant. Parenthesize a constant to use it as a key: ``?(dst)``.
"""

from __future__ import annotations

from pathlib import Path
from typing import Callable, Optional

from ..values import Address, account, contract
from .lexer import ParseError, Token, UnknownAddress, tokenize
from .nodes import (
    RESERVED_NAMES,
    AddrLit,
    Assign,
    Bound,
    Call,
    Const,
    Context,
    Contract,
    ContractDecl,
    Expect,
    Expr,
    If,
    Lit,
    Lookup,
    Op,
    Procedure,
    Scenario,
    Skip,
    Stmt,
    Throw,
    Transfer,
    TxDecl,
    While,
    seq,
)

BINARY_LEVELS: list[tuple[str, ...]] = [
    ("||",),
    ("&&",),
    ("==", "!="),
    ("<", "<=", ">", ">="),
    ("+", "-", "^"),
    ("*", "/", "%"),
]
PREFIX_OPS = ("not", "hash", "fst", "snd")


class Parser:
    def __init__(self, source: str, path: Optional[str] = None):
        self.source = source
        self.path = path
        self.tokens = tokenize(source, path)
        self.pos = 0

    # -- token helpers --

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.pos + k, len(self.tokens) - 1)]

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("PUNCT", "KW") and t.text == text

    def at_word(self, word: str) -> bool:
        return self.tok.kind == "IDENT" and self.tok.text == word

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "EOF":
            self.pos += 1
        return t

    def error(self, message: str, tok: Optional[Token] = None, code: str = "syntax") -> ParseError:
        t = tok or self.tok
        return ParseError(message, t.line, t.col, code=code, path=self.path)

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.advance()

    def expect_ident(self, what: str = "identifier") -> Token:
        if self.tok.kind != "IDENT":
            found = self.tok.text or "end of input"
            raise self.error(f"expected {what}, found {found!r}")
        return self.advance()

    def expect_eof(self) -> None:
        if self.tok.kind != "EOF":
            raise self.error(f"unexpected {self.tok.text!r}")

    # -- expressions --

    def parse_expr(self, level: int = 0) -> Expr:
        if level == len(BINARY_LEVELS):
            return self.parse_unary()
        left = self.parse_expr(level + 1)
        ops = BINARY_LEVELS[level]
        while self.tok.kind == "PUNCT" and self.tok.text in ops:
            op = self.advance().text
            right = self.parse_expr(level + 1)
            left = Op(op, (left, right))
        return left

    def parse_unary(self, key: bool = False) -> Expr:
        t = self.tok
        if t.kind == "KW" and t.text in PREFIX_OPS:
            self.advance()
            return Op(t.text, (self.parse_unary(),))
        if self.at("?"):
            self.advance()
            return Lookup(self.parse_unary(key=True))
        if t.kind in ("ACCOUNT", "CONTRACT") and self.peek().text == "::":
            self.advance()
            self.advance()
            return Context(self._address(t), self.parse_unary())
        return self.parse_postfix(key)

    def parse_postfix(self, key: bool = False) -> Expr:
        e, bare = self.parse_primary()
        if bare and (key or self.at("?")):
            e = Lit(e.name)
        while self.at("?"):
            self.advance()
            e = Bound(e)
        return e

    def parse_primary(self) -> tuple[Expr, bool]:
        t = self.tok
        if t.kind == "INT":
            self.advance()
            return Lit(t.value), False
        if t.kind == "STR":
            self.advance()
            return Lit(t.value), False
        if t.kind == "KW" and t.text in ("true", "false"):
            self.advance()
            return Lit(t.text == "true"), False
        if t.kind == "IDENT":
            self.advance()
            return Const(t.text), True
        if t.kind in ("ACCOUNT", "CONTRACT"):
            self.advance()
            return AddrLit(self._address(t)), False
        if self.at("-") and self.peek().kind == "INT":
            self.advance()
            return Lit(-self.advance().value), False
        if self.at("("):
            self.advance()
            first = self.parse_expr()
            if self.at(","):
                self.advance()
                second = self.parse_expr()
                self.expect(")")
                return Op("pair", (first, second)), False
            self.expect(")")
            return first, False
        found = t.text or "end of input"
        raise self.error(f"expected an expression, found {found!r}")

    def _address(self, t: Token) -> Address:
        return account(t.value) if t.kind == "ACCOUNT" else contract(t.value)

    def parse_args(self) -> tuple[Expr, ...]:
        self.expect("(")
        args = []
        if not self.at(")"):
            args.append(self.parse_expr())
            while self.at(","):
                self.advance()
                args.append(self.parse_expr())
        self.expect(")")
        return tuple(args)

    # -- statements --

    def parse_stmts(self) -> Stmt:
        """Statements separated by ``;`` up to a closing brace."""
        stmts = []
        while not self.at("}"):
            stmts.append(self.parse_stmt())
            if not self.at(";"):
                break
            self.advance()
        return seq(*stmts)

    def parse_block(self) -> Stmt:
        self.expect("{")
        body = self.parse_stmts()
        self.expect("}")
        return body

    def parse_stmt(self) -> Stmt:
        t = self.tok
        if self.at("skip"):
            self.advance()
            return Skip()
        if self.at("throw"):
            self.advance()
            return Throw()
        if self.at("{"):
            return self.parse_block()
        if self.at("if"):
            self.advance()
            guard = self.parse_expr()
            self.expect("then")
            then = self.parse_stmt()
            orelse = None
            if self.at("else"):
                self.advance()
                orelse = self.parse_stmt()
            return If(guard, then, orelse)
        if self.at("while"):
            self.advance()
            guard = self.parse_expr()
            self.expect("do")
            return While(guard, self.parse_stmt())
        if t.kind == "IDENT" and self.peek().text == ":=":
            if t.text == "balance":
                raise self.error("the key balance cannot be assigned", t, code="balance-lhs")
            self.advance()
            self.advance()
            return Assign(Lit(t.text), self.parse_expr())
        target = self.parse_expr()
        if self.at(":="):
            self.advance()
            return Assign(target, self.parse_expr())
        if self.at("."):
            self.advance()
            proc = self.expect_ident("procedure name").text
            args = self.parse_args()
            amount = None
            if self.at(":"):
                self.advance()
                amount = self.parse_expr()
            return Call(target, proc, args, amount)
        if self.at("!"):
            self.advance()
            return Transfer(target, self.parse_expr())
        found = self.tok.text or "end of input"
        raise self.error(f"expected ':=', '.' or '!' after expression, found {found!r}")

    # -- contracts --

    def parse_procedure(self) -> Procedure:
        name = self.expect_ident("procedure name").text
        self.expect("(")
        formals: list[str] = []
        if not self.at(")"):
            while True:
                ft = self.expect_ident("formal parameter")
                if ft.text in RESERVED_NAMES:
                    raise self.error(f"{ft.text} cannot be a formal parameter", ft, code="reserved-formal")
                if ft.text in formals:
                    raise self.error(f"formal {ft.text} repeated", ft, code="duplicate-formal")
                formals.append(ft.text)
                if not self.at(","):
                    break
                self.advance()
        self.expect(")")
        body = self.parse_block()
        return Procedure(name, tuple(formals), body)

    def parse_contract_body(self, address: Address) -> Contract:
        self.expect("{")
        procs: list[Procedure] = []
        while not self.at("}"):
            start = self.tok
            p = self.parse_procedure()
            if any(q.name == p.name for q in procs):
                raise self.error(f"procedure {p.name} defined twice", start, code="duplicate-procedure")
            procs.append(p)
        self.expect("}")
        return Contract(address, tuple(procs))

    def parse_contract(self) -> Contract:
        self.expect("contract")
        t = self.tok
        if t.kind != "CONTRACT":
            raise self.error("expected a contract address like #C")
        self.advance()
        return self.parse_contract_body(self._address(t))

    # -- scenarios --

    def parse_scenario(self, load: Callable[[str], str]) -> Scenario:
        sc = Scenario()
        if self.at_word("scenario"):
            self.advance()
            if self.tok.kind == "IDENT" and self.tok.text not in ("accounts", "tx", "expect"):
                sc.name = self.advance().text
        while self.tok.kind != "EOF":
            if self.at_word("accounts"):
                self.advance()
                sc.accounts.extend(self._parse_accounts())
            elif self.at("contract"):
                sc.contracts.append(self._parse_contract_decl(load))
            elif self.at_word("tx"):
                sc.transactions.append(self._parse_tx())
            elif self.at_word("expect"):
                start = self.advance()
                first = self.tok
                e = self.parse_expr()
                last = self.tokens[self.pos - 1]
                sc.expects.append(Expect(e, start.line, self.source[first.offset:last.end]))
            else:
                found = self.tok.text
                raise self.error(f"expected accounts, contract, tx or expect, found {found!r}")
        declared = {d.address for d in sc.contracts}
        for tx in sc.transactions:
            if tx.callee.is_contract and tx.callee not in declared:
                raise UnknownAddress(f"contract {tx.callee} is not declared", tx.line, 1, path=self.path)
        return sc

    def _parse_accounts(self) -> list[tuple[Address, int]]:
        self.expect("{")
        out = []
        while not self.at("}"):
            t = self.tok
            if t.kind != "ACCOUNT":
                raise self.error("expected an account address like @A")
            self.advance()
            self.expect(":")
            if self.tok.kind != "INT":
                raise self.error("expected a balance")
            out.append((self._address(t), self.advance().value))
            if not self.at(","):
                break
            self.advance()
        self.expect("}")
        return out

    def _parse_contract_decl(self, load: Callable[[str], str]) -> ContractDecl:
        self.expect("contract")
        t = self.tok
        if t.kind != "CONTRACT":
            raise self.error("expected a contract address like #C")
        self.advance()
        address = self._address(t)
        source = None
        if self.at_word("from"):
            self.advance()
            if self.tok.kind != "STR":
                raise self.error("expected a file name string")
            source = self.advance().value
            c = parse_contract(load(source), path=source)
            c = Contract(address, c.procedures)
        else:
            c = self.parse_contract_body(address)
        seeds = []
        if self.at("{"):
            self.advance()
            while not self.at("}"):
                if self.tok.kind == "IDENT":
                    key: Expr = Lit(self.advance().text)
                else:
                    key = self.parse_expr()
                self.expect(":")
                seeds.append((key, self.parse_expr()))
                if not self.at(","):
                    break
                self.advance()
            self.expect("}")
        return ContractDecl(address, c, tuple(seeds), source)

    def _parse_tx(self) -> TxDecl:
        start = self.advance()
        ct = self.tok
        if ct.kind != "ACCOUNT":
            raise self.error("transactions must be sent by an account address like @A")
        self.advance()
        self.expect("->")
        bt = self.tok
        if bt.kind not in ("ACCOUNT", "CONTRACT"):
            raise self.error("expected the called address")
        self.advance()
        self.expect(".")
        proc = self.expect_ident("procedure name").text
        args = self.parse_args()
        amount: Expr = Lit(0)
        if self.at(":"):
            self.advance()
            amount = self.parse_expr()
        return TxDecl(self._address(ct), self._address(bt), proc, args, amount, start.line)


def parse_expr(source: str) -> Expr:
    p = Parser(source)
    e = p.parse_expr()
    p.expect_eof()
    return e


def parse_stmt(source: str) -> Stmt:
    """Parse a statement sequence (the inside of a procedure body)."""
    p = Parser(source)
    s = p.parse_stmts()
    p.expect_eof()
    return s


def parse_contract(source: str, path: Optional[str] = None) -> Contract:
    """Parse one ``contract #C { ... }`` declaration.

    Raises :class:`ParseError` for grammar errors and for the
    well-formedness checks (duplicate procedure, reserved or repeated
    formal, bare ``balance`` on the left of ``:=``).
    """
    p = Parser(source, path)
    c = p.parse_contract()
    p.expect_eof()
    return c


def parse_scenario(source: str, base_dir: str | Path | None = None,
                   path: Optional[str] = None,
                   load: Optional[Callable[[str], str]] = None) -> Scenario:
    """Parse a scenario. ``contract #C from "file"`` is resolved by
    ``load`` if given, else relative to ``base_dir`` (default: cwd)."""
    if load is None:
        root = Path(base_dir) if base_dir is not None else Path.cwd()

        def load(name: str) -> str:
            try:
                return (root / name).read_text(encoding="utf-8")
            except OSError as exc:
                raise ParseError(f"cannot read {name}: {exc.strerror}", code="io", path=path) from None

    p = Parser(source, path)
    return p.parse_scenario(load)


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}", code="io", path=str(path)) from None
    return parse_scenario(text, base_dir=path.parent, path=str(path))


def load_contract(path: str | Path) -> Contract:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}", code="io", path=str(path)) from None
    return parse_contract(text, path=str(path))
