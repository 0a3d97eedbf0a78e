"""Exit criteria, one test each, at their stated tolerances.

Every test prints a ``[PASS]`` or ``[FAIL]`` line with the measured values
(visible with ``pytest -s`` or in the captured output of a failure).
"""

import pytest

from phototactile.acceptance import CRITERIA, run_all
from phototactile.cli import main
from phototactile.config import Config


@pytest.mark.parametrize("check", CRITERIA, ids=[f"{i:02d}-{c.__name__}"
                                                  for i, c in enumerate(CRITERIA, 1)])
def test_criterion(check):
    result = check(Config())
    print(result.line())
    assert result.passed, result.line()


def test_verify_exit_status_matches_results(capsys):
    status = main(["verify"])
    report = capsys.readouterr().out
    expected = 0 if all(r.passed for r in run_all(Config())) else 1
    print(report)
    assert status == expected
    assert report.count("[PASS]") + report.count("[FAIL]") == len(CRITERIA)
