import numpy as np
import pytest

from cssdiag import css, f2


@pytest.fixture(autouse=True, scope="session")
def enforce_sum_rule_globally():
    """Every generator-coefficient table built anywhere must satisfy the
    unitarity sum rule; checked once more when the whole session ends."""
    from cssdiag.gencoef import SUM_RULE_LOG

    yield
    bad = [(label, dev) for label, dev in SUM_RULE_LOG if dev > 1e-9]
    assert not bad, f"sum rule violated by {len(bad)} tables: {bad[:3]}"


@pytest.fixture(scope="session")
def steane():
    return css.steane()


@pytest.fixture(scope="session")
def c422():
    return css.four_two_two()


@pytest.fixture(scope="session")
def c422_neg():
    return css.four_two_two(y=[0, 0, 0, 1])


@pytest.fixture(scope="session")
def c832():
    return css.color_832()


@pytest.fixture(scope="session")
def rm15():
    return css.rm15()


def random_css_code(rng, nmax=8, allow_trivial_signs=False):
    """Random valid CSS code with k >= 1 and random character vectors."""
    while True:
        n = int(rng.integers(3, nmax + 1))
        k1 = int(rng.integers(1, n))
        C1 = f2.BinaryCode(n, rng.integers(0, 2, size=(k1, n)))
        if C1.k == 0:
            continue
        k2 = int(rng.integers(0, C1.k))
        if k2:
            combo = (rng.integers(0, 2, size=(k2, C1.k)) @ C1.G) % 2
            C2 = f2.BinaryCode(n, combo)
        else:
            C2 = f2.BinaryCode.zero(n)
        if C2.k >= C1.k:
            continue
        if allow_trivial_signs:
            r = y = None
        else:
            r = rng.integers(0, 2, size=n).astype(np.uint8)
            y = rng.integers(0, 2, size=n).astype(np.uint8)
        try:
            return css.CssCode(C2, C1.dual(), r=r, y=y)
        except css.CssValidationError:
            continue


def random_phase_table(rng, n):
    from cssdiag import gates

    angles = rng.uniform(0, 2 * np.pi, size=1 << n)
    return gates.PhaseTable(np.exp(1j * angles))
