import numpy as np
import pytest
from scipy.stats import unitary_group


def random_observable(rng, D):
    """Hermitian involution U diag(+-1) U^dagger with a random unitary U."""
    U = unitary_group.rvs(D, random_state=rng)
    signs = rng.choice((1.0, -1.0), D)
    return (U * signs) @ U.conj().T


def random_state(rng, D):
    psi = rng.standard_normal(D * D) + 1j * rng.standard_normal(D * D)
    return psi / np.linalg.norm(psi)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for key in ("passed", "failed"):
        for rep in terminalreporter.stats.get(key, []):
            if rep.when != "call":
                continue
            props = dict(rep.user_properties)
            if "criterion" in props:
                lines.append((props["criterion"], key.upper()[:4], props.get("detail", "")))
    if lines:
        terminalreporter.section("acceptance criteria")
        for crit, status, detail in sorted(lines):
            terminalreporter.write_line(f"{status}  {crit}  {detail}")
