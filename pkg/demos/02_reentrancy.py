"""
Re-entrancy: harmless and vicious
=================================

Two contracts call each other back. In the first pair the callback
cannot redirect anything; in the second it drains the caller.
"""

from tinysol.chain import apply_chain, genesis, transactions
from tinysol.corpus import scenario_path
from tinysol.state import apply_update
from tinysol.syntax import load_scenario
from tinysol.values import contract


def run(name, tracer=None, balance=None):
    sc = load_scenario(scenario_path(name))
    state, registry = genesis(sc)
    if balance is not None:
        state = apply_update(state, {(contract("A"), "balance"): balance})
    return state, apply_chain(state, transactions(sc), registry, tracer=tracer)


# %%
# Harmless: #A pays 1 unit to @A even though #B calls back in between.
before, result = run("harmless_reentrancy")
print(result.state.dump())

# %%
# Vicious: #A sets its "paid" flag only after calling #B, so #B keeps
# calling f until #A is empty. The trace shows the nested activations.
calls = []
before, result = run("vicious_reentrancy", tracer=calls.append, balance=3)
for ev in calls:
    if ev.rule == "call":
        print(ev)
print(result.state.dump())
