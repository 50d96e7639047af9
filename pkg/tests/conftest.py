import shutil

import pytest

from flexq.catalog import load_catalog
from flexq.config import Settings, fixtures_dir
from flexq.engine import Engine
from flexq.lexicon import load_lexicon

_acceptance_results = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call" and item.fspath.basename == "test_acceptance.py":
        _acceptance_results.append((item.name,
                                    "PASS" if report.passed else "FAIL"))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_results:
        return
    terminalreporter.write_line("")
    terminalreporter.write_line("acceptance criteria:")
    for name, verdict in _acceptance_results:
        terminalreporter.write_line(f"  {verdict}  {name}")


@pytest.fixture(scope="session")
def fixtures():
    return fixtures_dir()


@pytest.fixture(scope="session")
def lex(fixtures):
    return load_lexicon(fixtures / "lexicon.json")


@pytest.fixture(scope="session")
def cat(fixtures):
    return load_catalog(fixtures / "catalog.json", fixtures)


@pytest.fixture
def settings(tmp_path):
    # packaged catalog/data, but a copied lexicon (the service may mutate
    # it) and a throwaway knowledge journal
    lex_path = tmp_path / "lexicon.json"
    shutil.copy(fixtures_dir() / "lexicon.json", lex_path)
    return Settings.with_defaults(workdir=tmp_path, lexicon=lex_path)


@pytest.fixture
def engine(settings):
    return Engine.from_settings(settings)


QUERY_A = "List orders details where unitprice should be greater than 200"
QUERY_B = "List supplier details where city is equal to London."

SQL_A = ("Select * from orders AS A, orderdetails AS B "
         "where A.OrderID=B.OrderID and B.UnitPrice > 200")
SQL_B = "Select * from suppliers AS A where A.city = 'London'"

A_ORDER_IDS = {10329, 10351, 10353, 10360, 10372, 10417}
B_SNOS = {"S1", "S10", "S4", "S5"}
