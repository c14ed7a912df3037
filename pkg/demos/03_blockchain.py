"""
A blockchain is a fold
======================

Three transactions against the wallet: deposit, pay, and a deposit the
sender can no longer afford. The last one is rolled back.
"""

from tinysol import Transaction, account, apply_chain, contract, make_registry, parse_contract
from tinysol.state import State

registry = make_registry([parse_contract("""
contract #C {
  f() { if sender == @A then skip else throw }
  g(x, y) { if sender == @A && value == 0 && ?balance >= x then y ! x else throw }
}
""")])
A, B, C = account("A"), account("B"), contract("C")
T0 = Transaction(A, C, "f", (), 3)
T1 = Transaction(A, C, "g", (2, B), 0)

# %%
result = apply_chain(State({A: {"balance": 5}}), [T0, T1, T0], registry)
for r in result.receipts:
    print(r.rule, r.tx, r.cause or "")
print(result.state.dump())

# %%
# Order matters: paying before depositing fails, and then both deposits fit.
result = apply_chain(State({A: {"balance": 6}}), [T1, T0, T0], registry)
print([r.rule for r in result.receipts])
