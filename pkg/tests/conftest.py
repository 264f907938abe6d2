import warnings
from fractions import Fraction

import pytest

from qracah.racah import AdmissibilityWarning
from qracah.scalar import exact_context, float_context


@pytest.fixture(scope="session")
def ectx():
    return exact_context()


@pytest.fixture(scope="session")
def fctx():
    return float_context(Fraction(7, 10), 128)


@pytest.fixture(autouse=True)
def _quiet_admissibility():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AdmissibilityWarning)
        yield
