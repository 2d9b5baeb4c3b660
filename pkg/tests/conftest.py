import sys

import pytest

from gai_lab.rewards import BanditInstance

K4_MEANS = (0.6, 0.55, 0.45, 0.4)
DOSE_MEANS = (0.36, 0.34, 0.469, 0.465, 0.537)


@pytest.fixture
def k4():
    return BanditInstance.from_means(K4_MEANS, 0.5)


@pytest.fixture
def dose():
    return BanditInstance.from_means(DOSE_MEANS, 0.5)



def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "REPORT", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
