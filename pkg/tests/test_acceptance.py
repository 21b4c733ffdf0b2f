"""Acceptance criteria 1-11, each run through the verification suite at default settings.

Every criterion is exact, so the tolerance is equality.  One line per
criterion is printed as ``criterion N: PASS`` or ``criterion N: FAIL``.
"""

import pytest

from exactg2.suite import CHECKS, run_suite

SEED = 0
SAMPLES = 100
CRITERIA = list(range(1, 12))


@pytest.fixture(scope="module")
def report():
    return run_suite(seed=SEED, samples=SAMPLES, only=lambda c: c.criterion is not None)


def test_every_criterion_has_checks():
    covered = {c.criterion for c in CHECKS}
    assert set(CRITERIA) <= covered
    assert len(CHECKS) >= 25


@pytest.mark.parametrize("criterion", CRITERIA)
def test_criterion(report, criterion, capsys):
    results = [r for r in report.results if r.criterion == criterion]
    failed = [r for r in results if r.status != "pass"]
    status = "FAIL" if failed or not results else "PASS"
    with capsys.disabled():
        names = ", ".join(r.name for r in results)
        print(f"\ncriterion {criterion}: {status} ({names})")
    assert results
    assert not failed, "; ".join(f"{r.name}: {r.detail}" for r in failed)


def test_same_seed_same_report(report):
    again = run_suite(seed=SEED, samples=SAMPLES, only=lambda c: c.criterion in (6, 7, 9))
    first = {r.name: (r.status, r.detail) for r in report.results if r.criterion in (6, 7, 9)}
    assert {r.name: (r.status, r.detail) for r in again.results} == first


if __name__ == "__main__":
    rep = run_suite(seed=SEED, samples=SAMPLES)
    for n in CRITERIA:
        rs = [r for r in rep.results if r.criterion == n]
        print(f"criterion {n}: {'PASS' if rs and all(r.status == 'pass' for r in rs) else 'FAIL'}")
