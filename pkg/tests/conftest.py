import numpy as np
import pytest

from netinstab import load_model


@pytest.fixture(scope="session")
def piezo():
    """Canonical 8-node fixture (entry (3,1) = +1.3083)."""
    return load_model("piezo", "appendix")


@pytest.fixture(scope="session")
def piezo_printed():
    return load_model("piezo", "printed")


def random_signed_digraph_weights(rng, n, density=0.4, scale=2.0):
    """Random signed weight matrix with exact zeros for absent edges."""
    w = rng.uniform(-scale, scale, size=(n, n))
    mask = rng.random((n, n)) < density
    return np.where(mask, w, 0.0)
