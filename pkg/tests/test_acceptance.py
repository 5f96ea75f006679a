"""The nine acceptance criteria, each with its time limit.

All suites run once (suite 8 replays the checks recorded while suites 1-7
ran); each criterion is then its own test.  One PASS/FAIL line per
criterion is printed in the terminal summary.
"""

import pytest

import conftest
from qctl.suites import DEFAULT_SEED, run_suites


@pytest.fixture(scope="module")
def results():
    out = {}

    def report(res):
        out[res.number] = res
        conftest.ACCEPTANCE_LINES.append(res.line())
        print(res.line(), flush=True)

    run_suites(None, DEFAULT_SEED, report)
    return out


@pytest.mark.parametrize("number", range(1, 10))
def test_criterion(results, number):
    res = results[number]
    assert res.total > 0
    assert not res.failures, res.failures[:5]
    assert res.passed == res.total
    if res.limit is not None:
        assert res.seconds <= res.limit, f"{res.seconds:.1f}s over the {res.limit}s limit"


if __name__ == "__main__":
    for r in run_suites(None, DEFAULT_SEED, lambda r: print(r.line(), flush=True)):
        pass
