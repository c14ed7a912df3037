"""
Tour of the bundled scenarios
=============================

Run every scenario shipped with the package and report its expect lines.
"""

from tinysol.chain import apply_chain, check_expects, genesis, transactions
from tinysol.corpus import corpus_cases
from tinysol.syntax import load_scenario

for case in corpus_cases():
    print(f"{case.name}: {case.note}")
    for path in case.scenarios:
        sc = load_scenario(path)
        state, registry = genesis(sc)
        result = apply_chain(state, transactions(sc), registry)
        checks = check_expects(sc, result.state)
        rules = " ".join(r.rule for r in result.receipts)
        passed = sum(c.ok for c in checks)
        print(f"  {path.name:16} {rules}  expects {passed}/{len(checks)}")
