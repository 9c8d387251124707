import pytest
from hypothesis import settings

from qshuffle.scalar import EXACT, NumericField

settings.register_profile("qshuffle", deadline=None, max_examples=40)
settings.load_profile("qshuffle")


@pytest.fixture
def exact():
    return EXACT


@pytest.fixture(params=[1.3, 1.7])
def numeric(request):
    return NumericField(request.param)
