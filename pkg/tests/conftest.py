from pathlib import Path

import pytest

from acceptance_log import RESULTS as ACCEPTANCE_RESULTS
from fuzzyvprs.dataset import fuzzify_dataset, load_prefuzzified_table, load_table
from fuzzyvprs.membership import load_mf_config

DATA = Path(__file__).parent / "data"


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def mfs():
    return load_mf_config(DATA / "bp_mf.txt")


@pytest.fixture
def bp_table():
    return load_table(DATA / "bp.csv")


@pytest.fixture
def raw_objects(bp_table, mfs):
    return fuzzify_dataset(bp_table.objects, mfs)


@pytest.fixture
def fuzzy_objects():
    return list(load_prefuzzified_table(DATA / "bp_fuzzy.csv").objects)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)
