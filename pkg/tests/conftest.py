import pytest

from switchsync import synthesis


@pytest.fixture(scope="session")
def full_problem():
    return synthesis.problem_for_alpha_range()


@pytest.fixture(scope="session")
def full_certificate(full_problem):
    return synthesis.solve_feasibility(full_problem)


@pytest.fixture(scope="session")
def cert_file(full_certificate, tmp_path_factory):
    path = tmp_path_factory.mktemp("certs") / "full.json"
    synthesis.save_certificate(full_certificate, path)
    return path
