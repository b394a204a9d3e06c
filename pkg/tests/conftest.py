import pytest

from revseq.synth import build_cost_atlas


@pytest.fixture(scope="session")
def atlas():
    return build_cost_atlas(3, 5)
