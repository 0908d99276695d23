import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from z2rank.gf2_core import BitMatrix

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, derandomize=True, max_examples=200)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@st.composite
def matrices(draw, max_rows=6, max_cols=6, min_rows=0, min_cols=0, square=False):
    r = draw(st.integers(min_rows, max_rows))
    c = r if square else draw(st.integers(min_cols, max_cols))
    rows = draw(st.lists(st.integers(0, (1 << c) - 1), min_size=r, max_size=r))
    return BitMatrix(rows, c)


@st.composite
def symmetric_matrices(draw, max_n=6, min_n=0, zero_diagonal=False):
    n = draw(st.integers(min_n, max_n))
    rows = [0] * n
    for i in range(n):
        for j in range(i, n):
            if i == j and zero_diagonal:
                continue
            if draw(st.booleans()):
                rows[i] |= 1 << j
                rows[j] |= 1 << i
    return BitMatrix(rows, n)
