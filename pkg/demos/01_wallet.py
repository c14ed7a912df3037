"""
A wallet contract, one procedure at a time
==========================================

Parse a contract, run one of its procedures directly against a state,
then look at what happens when the guard fails.
"""

from tinysol import State, account, contract, exec_stmt, make_registry, parse_contract
from tinysol.interp import EvalFailure

# %%
# Only ``@A`` may deposit (``f``) or pay out (``g``).
source = """
contract #C {
  f() { if sender == @A then skip else throw }
  g(x, y) { if sender == @A && value == 0 && ?balance >= x then y ! x else throw }
}
"""
registry = make_registry([parse_contract(source)])
A, B, C = account("A"), account("B"), contract("C")
g = registry[C].procedure("g").body

# %%
# Run the body of ``g`` at ``#C`` holding 3 units, asking for 2 to ``@B``.
sigma = State({C: {"balance": 3}})
env = {"sender": A, "value": 0, "x": 2, "y": B}
after = exec_stmt(sigma, env, C, g, registry=registry)
print(after.dump())

# %%
# Each broken precondition leaves no result at all.
for label, state, rho in [
    ("balance too low", State({C: {"balance": 1}}), env),
    ("wrong sender", sigma, {**env, "sender": B}),
    ("value attached", sigma, {**env, "value": 1}),
]:
    try:
        exec_stmt(state, rho, C, g, registry=registry)
    except EvalFailure as exc:
        print(f"{label}: {exc.cause}")
