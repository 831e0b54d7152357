"""Acceptance criteria 1-13, one exact check each.

Run with pytest (a PASS/FAIL line per criterion is printed in the terminal
summary) or directly: python3 tests/test_acceptance.py
"""

import sys

import pytest

from dyckrep.acceptance import CRITERIA

RESULTS: dict[int, tuple[str, bool, object]] = {}


def line(n: int) -> str:
    name, ok, witness = RESULTS[n]
    text = f"criterion {n:2d} {name}: {'PASS' if ok else 'FAIL'}"
    return text if ok else f"{text} {witness}"


@pytest.mark.parametrize("n", sorted(CRITERIA), ids=lambda n: f"criterion_{n:02d}")
def test_criterion(n):
    name, check = CRITERIA[n]
    rpt = check()
    RESULTS[n] = (name, rpt.ok, rpt.witness)
    print(line(n))
    assert rpt.ok, rpt.witness


if __name__ == "__main__":
    failed = 0
    for n in sorted(CRITERIA):
        name, check = CRITERIA[n]
        rpt = check()
        RESULTS[n] = (name, rpt.ok, rpt.witness)
        failed += not rpt.ok
        print(line(n))
    sys.exit(1 if failed else 0)
