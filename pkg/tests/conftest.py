import pytest

from pwlut.catalog import get_function
from pwlut.segmentation import SplitConfig, plan, split
from pwlut.table import build_table

# one line per acceptance criterion, filled in by test_acceptance.py
CRITERIA = []

LOG_EA = 2.0 ** -13
BENCH_EA = 9.5367e-7

BENCH_INTERVALS = {
    "tan": (-1.5, 1.5),
    "log": (0.625, 15.625),
    "exp": (0.0, 5.0),
    "tanh": (-8.0, 8.0),
    "gauss": (-6.0, 6.0),
    "logistic_rev": (-10.0, 10.0),
}


def make_table(fn_id, alg, omega, ea, lo, hi, epsilon=None, in_fmt=None, out_fmt=None):
    fn = get_function(fn_id)
    part = split(alg, fn, SplitConfig(omega, ea, epsilon), lo, hi)
    return build_table(fn, plan(fn, ea, part), in_fmt, out_fmt)


@pytest.fixture(scope="session")
def log_ref_table():
    return make_table("log", "none", 0.3, LOG_EA, 0.625, 15.625)


@pytest.fixture(scope="session")
def log_binary_table():
    return make_table("log", "binary", 0.3, LOG_EA, 0.625, 15.625)


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in CRITERIA:
            terminalreporter.write_line(line)
