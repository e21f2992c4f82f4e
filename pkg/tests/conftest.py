import pytest

from emopalette.colorspace import BasicColorMapping, FuzzyColorSpace


@pytest.fixture(scope="session")
def space():
    return FuzzyColorSpace.from_spec()


@pytest.fixture(scope="session")
def mapping(space):
    return BasicColorMapping(space)
