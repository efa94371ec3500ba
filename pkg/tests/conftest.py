import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hedsense.laurent import expand_generator
from hedsense.model import (InputSpec, build_couplings, build_generator, build_perturbation,
                            build_singular_generator, fig3_params)

SQRT2 = float(np.sqrt(2.0))


@pytest.fixture(scope="session")
def pert():
    return build_perturbation("uniform_frequency")


@pytest.fixture(scope="session")
def hed_gen():
    return build_singular_generator(1.0, 1.0)


@pytest.fixture(scope="session")
def nonhed_gen():
    return build_singular_generator(SQRT2, 1.0)


@pytest.fixture(scope="session")
def regular_gen():
    return build_generator(fig3_params(g=2.0, J=0.5))


@pytest.fixture(scope="session")
def hed_exp(hed_gen, pert):
    return expand_generator(hed_gen.sH, pert.sn, K=6)


@pytest.fixture(scope="session")
def nonhed_exp(nonhed_gen, pert):
    return expand_generator(nonhed_gen.sH, pert.sn, K=6)


@pytest.fixture(scope="session")
def couplings():
    return build_couplings(fig3_params())


@pytest.fixture(scope="session")
def inp():
    return InputSpec()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES
    if LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(LINES):
            terminalreporter.write_line(LINES[n])
