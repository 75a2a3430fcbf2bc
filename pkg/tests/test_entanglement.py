import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qbattery.entanglement import entanglement_entropy, negativity, two_uniformity_deficit
from qbattery.errors import InvalidPartition
from qbattery.linalg import DensityMatrix, HilbertSpec
from qbattery.states import ghz_two_qudit, product_state, random_separable, w_state


@pytest.mark.parametrize("D", [2, 3, 5])
def test_ghz_negativity_and_entropy(D):
    psi = ghz_two_qudit(D)
    # partial transpose of a maximally entangled state has eigenvalues +-1/D
    assert negativity(psi) == pytest.approx((D - 1) / 2, abs=1e-12)
    assert entanglement_entropy(psi, [0]) == pytest.approx(np.log(D), abs=1e-12)


def test_product_state_has_no_entanglement():
    psi = product_state([0, 1, 1])
    assert negativity(psi) == pytest.approx(0, abs=1e-14)
    assert entanglement_entropy(psi, [1]) == pytest.approx(0, abs=1e-14)
    # two-qubit marginal |01><01| - I/4 has largest eigenvalue 3/4
    assert two_uniformity_deficit(psi) == pytest.approx(0.75)


def test_werner_negativity_threshold():
    # Werner state p|phi+><phi+| + (1 - p) I/4 has negativity max(0, (3p - 1)/4)
    phi = ghz_two_qudit(2).amplitudes
    for p in (0.2, 1 / 3, 0.6, 1.0):
        rho = DensityMatrix(p * np.outer(phi, phi) + (1 - p) * np.eye(4) / 4, HilbertSpec((2, 2)))
        assert negativity(rho) == pytest.approx(max(0.0, (3 * p - 1) / 4), abs=1e-12)


def test_w_state_entropy():
    # one qubit of W_N is diag(1 - 1/N, 1/N)
    N = 4
    p = np.array([1 - 1 / N, 1 / N])
    assert entanglement_entropy(w_state(N), [2]) == pytest.approx(-np.sum(p * np.log(p)))


def test_invalid_cut():
    with pytest.raises(InvalidPartition):
        negativity(ghz_two_qudit(2), (0, 1))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 4))
def test_separable_states_are_ppt(seed, terms):
    rho = random_separable(HilbertSpec((2, 3)), terms, seed)
    assert negativity(rho) < 1e-12
