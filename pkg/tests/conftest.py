import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def mub_states(d: int) -> list[np.ndarray]:
    """All vectors of a complete set of mutually unbiased bases (d = 2 or 3).

    A complete MUB set is a 2-design, so averaging a quadratic function of
    |psi><psi| over these states reproduces the Haar average exactly. Used
    as an oracle that does not touch the Hilbert-Schmidt-trace formula.
    """
    if d == 2:
        s = 1 / np.sqrt(2)
        return [np.array(v, dtype=complex) for v in
                ([1, 0], [0, 1], [s, s], [s, -s], [s, 1j * s], [s, -1j * s])]
    if d == 3:
        w = np.exp(2j * np.pi / 3)
        states = [np.eye(3, dtype=complex)[k] for k in range(3)]
        for a in range(3):
            for k in range(3):
                # Wootters-Fields construction for odd prime d
                states.append(np.array([w ** (k * j + a * j * j) for j in range(3)]) / np.sqrt(3))
        return states
    raise ValueError(d)
