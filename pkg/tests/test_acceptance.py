"""Every acceptance criterion at its stated tolerance, one PASS/FAIL line each."""

import pytest

from focktomo import acceptance


@pytest.mark.parametrize("key", list(acceptance.CRITERIA))
def test_criterion(key, acceptance_lines):
    result = acceptance._timed(acceptance.CRITERIA[key])
    line = result.line()
    print(line)
    acceptance_lines.append(line)
    assert result.passed, line
