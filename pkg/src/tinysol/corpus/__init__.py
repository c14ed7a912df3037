"""Bundled example contracts and the scenarios that exercise them.

Each case is a directory holding ``.tns`` contracts, one or more ``.scn``
scenarios whose ``expect`` lines state the final state, and a README.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

ROOT = Path(__file__).resolve().parent

# case name -> what it shows
CASES: dict[str, str] = {
    "wallet": "owner pays from a wallet with a plain transfer",
    "wallet_unauthorized": "calls that break a wallet guard are rolled back",
    "bottom": "six statements without a result, each rolled back",
    "harmless_reentrancy": "a re-entrant callback cannot redirect a payment",
    "vicious_reentrancy": "a re-entrant callback drains the caller",
    "wallet_chain": "deposit, pay, failed deposit: a three-transaction fold",
    "extended_wallet": "per-recipient running totals, init-once, owner-only pay",
    "escrow": "escrow with pay, refund and oracle-resolved dispute",
    "lottery": "two-player lottery with commitments and a clock oracle",
    "ponzi": "investors repaid twice their stake in arrival order",
}


@dataclass(frozen=True)
class CorpusCase:
    name: str
    directory: Path
    note: str

    @property
    def contracts(self) -> list[Path]:
        return sorted(self.directory.glob("*.tns"))

    @property
    def scenarios(self) -> list[Path]:
        return sorted(self.directory.glob("*.scn"))

    @property
    def readme(self) -> str:
        return (self.directory / "README.md").read_text(encoding="utf-8")


def corpus_cases() -> list[CorpusCase]:
    return [CorpusCase(name, ROOT / name, note) for name, note in CASES.items()]


def case(name: str) -> CorpusCase:
    if name not in CASES:
        raise KeyError(f"no corpus case {name!r}")
    return CorpusCase(name, ROOT / name, CASES[name])


def scenario_path(name: str, scenario: str | None = None) -> Path:
    """Path of a corpus scenario; ``scenario`` may be omitted when the
    case has exactly one."""
    c = case(name)
    if scenario is None:
        (only,) = c.scenarios
        return only
    return c.directory / (scenario if scenario.endswith(".scn") else scenario + ".scn")
