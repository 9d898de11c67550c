from __future__ import annotations

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("repo", deadline=None, max_examples=40, derandomize=True)
settings.load_profile("repo")

# filled by tests/test_acceptance.py, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


def random_matrix(seed: int, n: int, scale: float = 1.0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return scale * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)


def random_unitary(seed: int, n: int) -> np.ndarray:
    q, r = np.linalg.qr(random_matrix(seed, n))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def planted(seed: int, diag, upper_scale: float = 1.0) -> np.ndarray:
    """``U (diag + strictly upper) U^*`` with a Haar-like unitary from QR."""
    diag = np.asarray(diag, dtype=np.complex128)
    n = diag.size
    r = np.diag(diag) + upper_scale * np.triu(random_matrix(seed + 1, n), 1) / np.sqrt(n)
    u = random_unitary(seed + 2, n)
    return u @ r @ u.conj().T


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
