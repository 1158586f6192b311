import numpy as np
import pytest

from plauslogic import Likelihood


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_likelihood(rng, k):
    return Likelihood(rng.dirichlet(np.ones(k)))


def pytest_terminal_summary(terminalreporter):
    from .test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(RESULTS, key=lambda k: int(k[2:])):
        terminalreporter.write_line(RESULTS[key])
