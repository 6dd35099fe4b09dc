import os
import sys

import pytest
from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

_CRITERIA = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    _CRITERIA[props["criterion"]] = (report.passed, props.get("detail", ""))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_CRITERIA, key=lambda k: int(k.lstrip("C"))):
        passed, detail = _CRITERIA[key]
        terminalreporter.write_line(f"{key}: {'PASS' if passed else 'FAIL'}  {detail}")


@pytest.fixture
def criterion(record_property):
    """Tag an acceptance test; ``criterion(id)(detail)`` records its line."""

    def tag(key):
        record_property("criterion", key)

        def detail(text):
            record_property("detail", text)
            print(f"{key}: {text}")

        return detail

    return tag
