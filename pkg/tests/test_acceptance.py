"""One test per acceptance criterion; each prints a PASS/FAIL line."""

import pytest

from a1kit import verify

LINES: list[str] = []
CHECKS = verify.CRITERIA + verify.EXTRA


@pytest.mark.parametrize("key,check", CHECKS, ids=[k for k, _ in CHECKS])
def test_criterion(key, check):
    result = check()
    line = f"criterion {key}: {result.line()}"
    LINES.append(line)
    print(line)
    assert result.ok, result.detail
