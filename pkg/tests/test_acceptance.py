"""End-to-end acceptance: every numbered check of the verification suite
must pass at its stated budget, on the stock sizes (n = 3, corpus of 200
randomized structures with universes 6 to 8).

Run with ``pytest tests/test_acceptance.py -v -s`` to see one line per
check; ``cylab verify`` prints the same table from the command line.
"""

import pytest

from cylab.verify import CHECKS, CheckResult, run_suite

_RESULTS: dict[int, CheckResult] = {}


@pytest.fixture(scope="module", autouse=True)
def suite_results():
    results = run_suite(n=3, seed=7, corpus_size=200)
    for r in results:
        _RESULTS[r.number] = r
    yield _RESULTS


@pytest.mark.parametrize(
    "number,name,budget", [(c[0], c[1], c[2]) for c in CHECKS], ids=[c[1] for c in CHECKS]
)
def test_criterion(number, name, budget, suite_results):
    result = suite_results[number]
    print(result.line())
    assert result.ok, f"check {number} ({name}) failed: {result.detail}"
    if budget is not None:
        assert result.seconds < budget, (
            f"check {number} took {result.seconds:.2f}s, budget {budget}s"
        )
