import itertools

import pytest

from amass import monogen


@pytest.fixture(scope="session")
def quartic_box():
    """Squarefree monic quartics with coefficients in [-2, 2]."""
    out = []
    for a in itertools.product(range(-2, 3), repeat=4):
        f = monogen.MonicForm(4, a)
        if f.disc() != 0:
            out.append(f)
    return out
