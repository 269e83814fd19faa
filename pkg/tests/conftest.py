import warnings

import numpy as np
import pytest

from jdlgkit.corpus import standard_corpus
from jdlgkit.jdlg import jdlg_split

X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.diag([1.0, -1.0]).astype(complex)
I2 = np.eye(2, dtype=complex)


@pytest.fixture(scope="session")
def corpus():
    return standard_corpus()


@pytest.fixture(scope="session")
def splits(corpus):
    out = {}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for e in corpus:
            out[e.name] = jdlg_split(e.channel, e.state)
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
