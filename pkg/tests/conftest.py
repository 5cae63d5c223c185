"""Shared fixtures for the test suite.

Codes built here are small on purpose; anything that needs a long lift
builds it locally and owns its runtime.
"""

import numpy as np
import pytest

from protomn import catalog
from protomn.decoder import DecoderConfig
from protomn.lifting import lift_circulant_peg


@pytest.fixture(scope="session")
def toy_base():
    return catalog.get("toy23")


@pytest.fixture(scope="session")
def r12_base():
    return catalog.get("r12")


@pytest.fixture(scope="session")
def r23a_base():
    return catalog.get("r23a")


@pytest.fixture(scope="session")
def r23b_base():
    return catalog.get("r23b")


@pytest.fixture(scope="session")
def r12_code(r12_base):
    # n = 100, h = 50: big enough to decode reliably at high SNR, small
    # enough that every test using it stays under a second.
    return lift_circulant_peg(r12_base, 25, seed=0)


@pytest.fixture(scope="session")
def default_decoder():
    return DecoderConfig()


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
