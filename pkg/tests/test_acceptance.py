"""Acceptance suite: every criterion at its pinned tolerance.

Each test prints its PASS/FAIL line; ``latticeprop verify`` runs the same
runners.
"""

import pytest

from latticeprop import acceptance


@pytest.mark.parametrize("runner", acceptance.ALL_CRITERIA,
                         ids=[fn.__name__ for fn in acceptance.ALL_CRITERIA])
def test_criterion(runner):
    name, passed, detail = runner()
    print(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
    assert passed, f"{name}: {detail}"
