from functools import reduce
from math import comb

import numpy as np
import pytest
import scipy.linalg as sl
from numpy.testing import assert_allclose

from qbattery.advantage import commutation_matrix_pure
from qbattery.errors import InvalidParameter
from qbattery.syk import (
    SykConfig,
    annihilate_pair,
    battery,
    build_charger,
    evolve,
    evolve_state,
    ground_state,
    sample_couplings,
)

X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.diag([1.0, -1.0]).astype(complex)
I2 = np.eye(2)


def jw_annihilator(j, N):
    ops = [Z] * j + [0.5 * (X - 1j * Y)] + [I2] * (N - j - 1)
    return reduce(np.kron, ops)


def dense_charger(J):
    N = J.N
    c = [jw_annihilator(j, N) for j in range(N)]
    cd = [m.conj().T for m in c]
    V = np.zeros((2**N, 2**N), dtype=complex)
    for p, (i, j) in enumerate(J.pairs):
        for q, (k, l) in enumerate(J.pairs):
            V += J.values[p, q] * cd[i] @ cd[j] @ c[k] @ c[l]
    return V


@pytest.fixture(scope="module")
def small():
    cfg = SykConfig(N=4, seed=3)
    J = sample_couplings(cfg)
    return cfg, J, build_charger(cfg, J)


def test_jordan_wigner_anticommutation():
    N = 3
    c = [jw_annihilator(j, N) for j in range(N)]
    for a in range(N):
        for b in range(N):
            acomm = c[a] @ c[b].conj().T + c[b].conj().T @ c[a]
            assert_allclose(acomm, np.eye(8) * (a == b), atol=1e-14)


def test_annihilate_pair_matches_matrices():
    N = 4
    c = [jw_annihilator(j, N) for j in range(N)]
    for state in range(16):
        e = np.zeros(16)
        e[state] = 1
        for k in range(N):
            for l in range(k + 1, N):
                out = c[k] @ c[l] @ e
                res = annihilate_pair(state, k, l, N)
                if res is None:
                    assert np.allclose(out, 0)
                else:
                    sign, new = res
                    expected = np.zeros(16)
                    expected[new] = sign
                    assert_allclose(out, expected)


def test_sector_dimensions(small):
    _, _, ch = small
    assert ch.sector_dims == {n: comb(4, n) for n in range(5)}


def test_charger_matches_dense_construction(small):
    _, J, ch = small
    V = ch.full_matrix()
    assert_allclose(V, dense_charger(J), atol=1e-14)
    assert_allclose(V, V.conj().T, atol=1e-15)


def test_single_matrix_element():
    # only J_(01),(23) = 1 (plus its Hermitian partner): c0+ c1+ c2 c3 |0011> with 0 = occupied
    cfg = SykConfig(N=4)
    J = sample_couplings(cfg)
    vals = np.zeros_like(J.values)
    p, q = J.pairs.index((0, 1)), J.pairs.index((2, 3))
    vals[p, q] = vals[q, p] = 1.0
    J = type(J)(J.N, J.pairs, vals)
    V = build_charger(cfg, J).full_matrix()
    # |1100> (sites 2, 3 occupied) -> |0011> (sites 0, 1 occupied)
    assert abs(V[0b0011, 0b1100]) == pytest.approx(1.0)
    assert_allclose(V, dense_charger(J), atol=1e-15)


def test_charger_conserves_number(small):
    _, _, ch = small
    c = [jw_annihilator(j, 4) for j in range(4)]
    Nop = sum(m.conj().T @ m for m in c)
    V = ch.full_matrix()
    assert_allclose(V @ Nop, Nop @ V, atol=1e-14)


def test_sector_evolution_matches_expm(small):
    cfg, _, ch = small
    psi0 = ground_state(cfg).amplitudes
    times = [0.0, 0.3, 2.0, 7.5]
    states = evolve_state(ch, psi0, times)
    V = ch.full_matrix()
    for t, psi in zip(times, states):
        assert np.max(np.abs(psi - sl.expm(-1j * V * t) @ psi0)) <= 1e-8


def test_ground_state():
    cfg = SykConfig(N=5)
    H = battery(cfg)
    psi = ground_state(cfg).amplitudes
    assert_allclose(H.apply(psi), -cfg.h * cfg.N * psi, atol=1e-12)
    assert commutation_matrix_pure(ground_state(cfg)).norm == pytest.approx(1.0)


def test_coupling_statistics():
    cfg = SykConfig(N=4)
    sigma = 1.0 / 4**1.5
    diag, off = [], []
    for seed in range(3000):
        v = sample_couplings(SykConfig(N=4, seed=seed)).values
        assert_allclose(v, v.conj().T)
        diag.append(np.diag(v).real)
        off.append(v[np.triu_indices(6, 1)])
    diag, off = np.concatenate(diag), np.concatenate(off)
    assert np.std(diag) == pytest.approx(sigma, rel=0.03)
    assert np.sqrt(np.mean(np.abs(off) ** 2)) == pytest.approx(sigma, rel=0.03)
    assert np.std(off.real) == pytest.approx(sigma / np.sqrt(2), rel=0.03)


def test_couplings_are_seeded():
    a = sample_couplings(SykConfig(N=5, seed=11)).values
    b = sample_couplings(SykConfig(N=5, seed=11)).values
    assert np.array_equal(a, b)
    assert not np.allclose(a, sample_couplings(SykConfig(N=5, seed=12)).values)


def test_config_validation():
    with pytest.raises(InvalidParameter):
        SykConfig(N=13)
    with pytest.raises(InvalidParameter):
        SykConfig(jbar=0)
    with pytest.raises(InvalidParameter):
        SykConfig(tau_grid=(0.0, 1.0, 0.5))
    assert SykConfig.with_grid(5.0, 11).tau_grid[-1] == 5.0


def test_evolution_invariants():
    tr = evolve(SykConfig(N=6, seed=2))
    assert np.max(tr.norm_error) < 1e-12
    assert np.ptp(tr.v_mean) < 1e-12
    assert np.ptp(tr.v_square) < 1e-12
    assert np.all(tr.bound_ratio <= 1 + 1e-8)
    assert tr.p_tilde[0] == pytest.approx(0.0, abs=1e-12)
    assert tr.energy[0] == pytest.approx(-6.0)


def test_power_is_energy_derivative():
    cfg = SykConfig(N=5, seed=4, tau_grid=(0.0, 1.5))
    J = sample_couplings(cfg)
    ch = build_charger(cfg, J)
    tr = evolve(cfg, J, ch)
    H = battery(cfg)
    step = 1e-6
    psi0 = ground_state(cfg).amplitudes
    e = [np.vdot(s, H.apply(s)).real for s in evolve_state(ch, psi0, [1.5 - step, 1.5 + step])]
    fd = (e[1] - e[0]) / (2 * step)
    power = tr.p_tilde[1] * np.sqrt(4 * tr.v_square[0] * cfg.N * cfg.h**2)
    assert abs(power - fd) <= 1e-4 * max(1.0, abs(fd))


def test_csv_layout():
    tr = evolve(SykConfig(N=4, tau_grid=(0.0, 0.5)))
    lines = tr.to_csv().splitlines()
    assert lines[0] == "tau,p_tilde,sqrt_gamma_c,bound_ratio,energy"
    assert len(lines) == 3
