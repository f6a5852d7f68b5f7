import random

import pytest


def pytest_addoption(parser):
    parser.addoption("--tier", default="desk", choices=("desk", "heavy"), help="heavy also runs long reproductions")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--tier") == "heavy":
        return
    skip = pytest.mark.skip(reason="heavy tier; run with --tier heavy")
    for item in items:
        if "heavy" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    from helpers import CRITERIA, CRITERION_TITLES

    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        parts = CRITERIA[number]
        ok = all(p[1] for p in parts)
        failed = [f"{p[0]}: {p[2]}" for p in parts if not p[1]]
        detail = "; ".join(failed) if failed else "; ".join(f"{p[0]} {p[2]}".strip() for p in parts)
        terminalreporter.write_line(f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {CRITERION_TITLES[number]} [{detail}]")
