import pytest

from pspec import load_bundled


@pytest.fixture(scope="session")
def qmat():
    return load_bundled("qmat")


@pytest.fixture(scope="session")
def symm():
    return load_bundled("symm")


@pytest.fixture(scope="session")
def detprod():
    return load_bundled("detprod")


@pytest.fixture(scope="session")
def sharedpencil():
    return load_bundled("sharedpencil")


@pytest.fixture(scope="session")
def structures(qmat, symm, detprod, sharedpencil):
    return {"qmat": qmat, "symm": symm, "detprod": detprod, "sharedpencil": sharedpencil}
