from pathlib import Path

import numpy as np
import pytest

DATA = Path(__file__).parent / "data"


def brute_sigma(limit):
    """sigma(k) for k <= limit, written independently of the package."""
    s = np.zeros(limit + 1, dtype=np.int64)
    for d in range(1, limit + 1):
        s[d::d] += d
    return s


def brute_records(limit):
    """Record setters of sigma(n)/n up to ``limit`` by exact integer compares."""
    s = brute_sigma(limit)
    out = []
    bs, bn = 0, 1
    for n in range(1, limit + 1):
        if int(s[n]) * bn > bs * n:
            out.append(n)
            bs, bn = int(s[n]), n
    return out


def load_appendix():
    rows = []
    with open(DATA / "appendix_table.tsv", encoding="utf-8") as f:
        for line in f:
            if line.startswith("#") or not line.strip():
                continue
            idx, typ, group, log10, scn = line.rstrip("\n").split("\t")
            rows.append((int(idx), typ, int(group), log10, scn))
    return rows


@pytest.fixture(scope="session")
def appendix():
    return load_appendix()


@pytest.fixture(scope="session")
def records_1e4():
    return brute_records(10**4)


# lines printed by test_acceptance.py, one per criterion, shown after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
