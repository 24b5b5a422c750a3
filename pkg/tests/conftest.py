import sympy
import pytest

from artifact.gl_ring import ORTHOGONAL, SYMPLECTIC, ramified_label, unramified_character

Q_SYM = sympy.Symbol("q", positive=True)


def to_sympy(poly):
    return sum((c * Q_SYM ** sympy.Rational(e.twice_value, 2) for e, c in poly.terms()), sympy.Integer(0))


@pytest.fixture
def chi():
    return unramified_character("chi", 1)


@pytest.fixture
def chi_p():
    return unramified_character("chi_p", -1)


@pytest.fixture
def rho_sp():
    return ramified_label("rho", 2, SYMPLECTIC, 1)


@pytest.fixture
def rho_o():
    return ramified_label("sigma", 3, ORTHOGONAL, 2)


# criterion number -> (passed, summary line); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k][1])
