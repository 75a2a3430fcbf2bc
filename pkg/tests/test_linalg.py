import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from qbattery.errors import (
    DimensionMismatch,
    InvalidOperator,
    InvalidParameter,
    InvalidPartition,
    NotPositiveSemidefinite,
)
from qbattery.linalg import (
    DensityMatrix,
    HilbertSpec,
    Ket,
    apply_local,
    check_hermitian,
    embed_local,
    operator_norm,
    partial_trace,
    partial_transpose,
    psd_sqrt,
    trace_norm,
)
from qbattery.states import random_density, random_pure


def test_spec_validation():
    assert HilbertSpec((2, 3)).total_dim == 6
    assert HilbertSpec.qubits(3).cell_dims == (2, 2, 2)
    with pytest.raises(InvalidParameter):
        HilbertSpec(())
    with pytest.raises(InvalidParameter):
        HilbertSpec((2, 1))
    with pytest.raises(InvalidParameter):
        HilbertSpec((2,) * 15)


def test_ket_and_density_validation():
    spec = HilbertSpec((2,))
    with pytest.raises(InvalidParameter):
        Ket([1.0, 1.0], spec)
    with pytest.raises(DimensionMismatch):
        Ket([1.0, 0, 0], spec)
    with pytest.raises(InvalidOperator):
        DensityMatrix([[1, 1], [0, 0]], spec)
    with pytest.raises(InvalidParameter):
        DensityMatrix(np.eye(2), spec)
    with pytest.raises(NotPositiveSemidefinite):
        DensityMatrix(np.diag([1.5, -0.5]), spec)


def test_check_hermitian_relative_tolerance():
    A = 1e6 * np.array([[1, 1], [1, 2]], dtype=complex)
    A[0, 1] += 1e-5  # 1e-11 relative
    check_hermitian(A)
    with pytest.raises(InvalidOperator):
        check_hermitian(np.array([[0, 1e-9], [0, 0]]))


def test_psd_sqrt_squares_back():
    rho = random_density(HilbertSpec((2, 3)), 4, seed=3)
    S = psd_sqrt(rho)
    assert_allclose(S @ S, rho.matrix, atol=1e-12)
    assert np.linalg.eigvalsh(S)[0] > -1e-12


def test_psd_sqrt_of_projector_is_projector():
    psi = random_pure(HilbertSpec((3, 3)), seed=11)
    P = np.outer(psi.amplitudes, psi.amplitudes.conj())
    assert_allclose(psd_sqrt(P), P, atol=1e-12)


def test_psd_sqrt_rejects_negative():
    with pytest.raises(NotPositiveSemidefinite):
        psd_sqrt(np.diag([1.0, -1e-3]))
    S = psd_sqrt(np.diag([1.0, -1e-12]))
    assert_allclose(S, np.diag([1.0, 0.0]))


def test_norms():
    A = np.diag([3.0, -1.0, 0.5])
    assert operator_norm(A) == 3.0
    assert trace_norm(A) == 4.5


def test_partial_transpose_by_hand():
    rho = DensityMatrix.__new__(DensityMatrix)
    object.__setattr__(rho, "matrix", np.arange(16.0).reshape(4, 4))
    object.__setattr__(rho, "spec", HilbertSpec((2, 2)))
    expected = np.array([[0, 1, 8, 9], [4, 5, 12, 13], [2, 3, 10, 11], [6, 7, 14, 15]])
    assert_allclose(partial_transpose(rho, [0]), expected)


def test_partial_transpose_needs_proper_subset():
    rho = random_density(HilbertSpec((2, 2)), 2, seed=0)
    with pytest.raises(InvalidPartition):
        partial_transpose(rho, [0, 1])
    with pytest.raises(InvalidPartition):
        partial_transpose(rho, [])
    with pytest.raises(InvalidPartition):
        partial_transpose(rho, [2])


def test_partial_trace_of_product():
    a = random_density(HilbertSpec((2,)), 2, seed=1).matrix
    b = random_density(HilbertSpec((3,)), 3, seed=2).matrix
    c = random_density(HilbertSpec((2,)), 1, seed=3).matrix
    rho = DensityMatrix(np.kron(np.kron(a, b), c), HilbertSpec((2, 3, 2)))
    assert_allclose(partial_trace(rho, [1]).matrix, b, atol=1e-14)
    assert_allclose(partial_trace(rho, [2, 0]).matrix, np.kron(a, c), atol=1e-14)
    assert partial_trace(rho, [2, 0]).spec.cell_dims == (2, 2)


def test_embed_matches_kron():
    spec = HilbertSpec((2, 3, 2))
    op = np.arange(9.0).reshape(3, 3)
    assert_allclose(embed_local(op, spec, 1), np.kron(np.kron(np.eye(2), op), np.eye(2)))
    with pytest.raises(DimensionMismatch):
        embed_local(np.eye(2), spec, 1)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(2, 3), min_size=1, max_size=4), st.integers(0, 3), st.integers(0, 2**32))
def test_apply_local_matches_embedding(dims, i, seed):
    spec = HilbertSpec(tuple(dims))
    i = i % spec.n_cells
    rng = np.random.default_rng(seed)
    n = spec.cell_dims[i]
    op = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    psi = random_pure(spec, seed).amplitudes
    assert_allclose(apply_local(op, psi, spec, i), embed_local(op, spec, i) @ psi, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32))
def test_partial_trace_preserves_trace(seed):
    rho = random_density(HilbertSpec((2, 3, 2)), 3, seed)
    red = partial_trace(rho, [0, 2])
    assert abs(np.trace(red.matrix) - 1) < 1e-12
    assert np.linalg.eigvalsh(red.matrix)[0] > -1e-12
