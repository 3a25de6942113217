"""Pytest configuration and shared fixtures for eqra tests."""

import os
import shutil
import tempfile
from unittest.mock import patch

import pytest

from eqra.constructions.examples import two_by_two_example
from eqra.constructions.zp2 import make_M, make_m_names, zp2_family
from eqra.relations.closure import ra_closure


@pytest.fixture
def temp_directory():
    """Create a temporary directory for file operations."""
    temp_dir = tempfile.mkdtemp()
    yield temp_dir
    shutil.rmtree(temp_dir)


@pytest.fixture
def mock_environment():
    """Provide a clean environment variable setup."""
    with patch.dict(os.environ, {}, clear=True):
        yield


@pytest.fixture(scope="session")
def z5():
    """Kernel relations of Z_5^2."""
    return zp2_family(5)


@pytest.fixture(scope="session")
def z7():
    """Kernel relations of Z_7^2."""
    return zp2_family(7)


@pytest.fixture(scope="session")
def two_by_two():
    """L, the 2^2 lattice algebra and gamma."""
    return two_by_two_example()


@pytest.fixture(scope="session")
def m_closure_p5():
    """RA closure of make_M(5, 1) with generator names U, I, E0, E1, A1."""
    return ra_closure(make_M(5, 1), make_m_names(1))


@pytest.fixture
def write_file(temp_directory):
    """Write text to a file in the temporary directory and return its path."""

    def _write(name: str, text: str) -> str:
        path = os.path.join(temp_directory, name)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
        return path

    return _write
