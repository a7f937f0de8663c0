import pytest

from susy_graphene.chain import build_chain
from susy_graphene.model import ModelSpec

# the four chains behind the bundled figure configs; session-scoped because
# construction certifies nodelessness on a 4001-point grid


@pytest.fixture(scope="session")
def osc_model():
    return ModelSpec.oscillator(omega=1.0, k_wave=1.0)


@pytest.fixture(scope="session")
def morse_model():
    return ModelSpec.morse(alpha=1.0, d_strength=1.0, k_wave=6.0)


@pytest.fixture(scope="session")
def osc_chain1(osc_model):
    return build_chain(osc_model, [(-0.2, 0.0)])


@pytest.fixture(scope="session")
def osc_chain2(osc_model):
    return build_chain(osc_model, [(-0.2, 0.0), (-3.0, 1.5)])


@pytest.fixture(scope="session")
def morse_chain1(morse_model):
    return build_chain(morse_model, [(-5.5, -1.5)])


@pytest.fixture(scope="session")
def morse_chain2(morse_model):
    return build_chain(morse_model, [(-5.5, -1.5), (-11.0, -0.5)])
