"""Acceptance gate: one PASS/FAIL line per criterion at the stated tolerances.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines inline;
they are also repeated in the terminal summary.
"""

import pytest

from serre_adjoint.verify import CHECKS, run_check


@pytest.mark.parametrize("number", [c[0] for c in CHECKS], ids=[f"criterion_{c[0]:02d}" for c in CHECKS])
def test_criterion(number, acceptance_lines):
    result = run_check(number)
    print(result.line)
    acceptance_lines.append(result.line)
    assert result.passed, result.line
