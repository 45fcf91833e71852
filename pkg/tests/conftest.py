import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from lyat.catalog import catalog, random_ly_algebra

settings.register_profile(
    "lyat",
    deadline=None,
    derandomize=True,
    max_examples=int(os.environ.get("LYAT_HYPOTHESIS_EXAMPLES", "40")),
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("lyat")


@pytest.fixture(scope="session")
def cat():
    return catalog(strict=False)


@pytest.fixture(scope="session")
def random_algebras():
    rng = np.random.default_rng(20261016)
    return [random_ly_algebra(rng, max_dim=4) for _ in range(12)]


def pytest_terminal_summary(terminalreporter):
    from _acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for _, _, line, _ in sorted(RESULTS):
        terminalreporter.write_line(line)
