"""Acceptance criteria 1-12; each test prints one PASS/FAIL line.

The lines are collected and repeated in an "acceptance criteria" section
of the pytest terminal summary.
"""

import json

import pytest

from conftest import ACCEPTANCE_LINES
from extactic.corpus import CRITERIA


@pytest.mark.parametrize("check", CRITERIA, ids=[f"criterion_{c.number:02d}" for c in CRITERIA])
def test_criterion(check):
    outcome = check(0)
    print(outcome.line())
    ACCEPTANCE_LINES.append(outcome.line())
    assert outcome.passed, json.dumps(outcome.to_json(), indent=2, default=str)
