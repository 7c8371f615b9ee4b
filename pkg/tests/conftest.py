import pytest

from qlab import build_custom, build_fock, spectral_decompose


@pytest.fixture(scope="session")
def pair():
    """Spectral data of the canonical coupled pair."""
    return spectral_decompose(build_custom([[2.0, 1.0], [1.0, 2.0]]))


@pytest.fixture(scope="session")
def diag_control():
    """Spectral data of the uncoupled two-site control."""
    return spectral_decompose(build_custom([[1.0, 0.0], [0.0, 4.0]]))


@pytest.fixture(scope="session")
def fock_pair_30(pair):
    return build_fock(pair, 30)


@pytest.fixture(scope="session")
def fock_pair_40(pair):
    return build_fock(pair, 40)
