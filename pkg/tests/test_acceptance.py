"""Acceptance criteria at their fixed tolerances, one PASS/FAIL line each (run with -s to see them)."""

import pytest

from axion_optomech.acceptance import CRITERIA


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda c: c.__name__)
def test_criterion(criterion):
    result = criterion()
    print(result.line())
    assert result.passed, result.line()
