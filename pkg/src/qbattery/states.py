"""Named battery states and seeded random-state generators.

Qudit levels are 0-indexed here; wherever an energy ``d * omega0`` is
needed, level index ``k`` carries ``d = k + 1``.
"""

from __future__ import annotations

import math
from functools import reduce
from importlib import resources

import numpy as np

from .errors import InvalidParameter
from .linalg import DEFAULT_MAX_DIM, DensityMatrix, HilbertSpec, Ket

AME5_FIXTURE = "ame5.txt"
AME5_SEED = 20240501


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(int(seed) & (2**64 - 1)))


def _basis_ket(spec: HilbertSpec, levels) -> np.ndarray:
    psi = np.zeros(spec.total_dim, dtype=complex)
    psi[np.ravel_multi_index(tuple(levels), spec.cell_dims)] = 1.0
    return psi


def product_state(levels, dims=None) -> Ket:
    """Computational-basis product state ``|l_0 l_1 ...>``."""
    levels = tuple(int(k) for k in levels)
    dims = tuple(dims) if dims is not None else (2,) * len(levels)
    spec = HilbertSpec(dims)
    return Ket(_basis_ket(spec, levels), spec)


def product_of(kets) -> Ket:
    """Tensor product of single- or multi-cell kets, in order."""
    kets = list(kets)
    if not kets:
        raise InvalidParameter("need at least one factor")
    spec = reduce(HilbertSpec.concat, (k.spec for k in kets))
    psi = reduce(np.kron, (k.amplitudes for k in kets))
    return Ket(psi, spec)


def w_state(N: int) -> Ket:
    """Uniform superposition of the ``N`` single-excitation qubit states."""
    if not 2 <= N <= 14:
        raise InvalidParameter(f"W state needs 2 <= N <= 14, got {N}")
    spec = HilbertSpec.qubits(N)
    psi = np.zeros(spec.total_dim, dtype=complex)
    for j in range(N):
        psi[1 << (N - 1 - j)] = 1.0
    return Ket(psi / np.sqrt(N), spec)


def ghz_two_qudit(D: int) -> Ket:
    """``sum_d |dd> / sqrt(D)`` on two qudits."""
    if not 2 <= D <= 32:
        raise InvalidParameter(f"GHZ qudit dimension must be in [2, 32], got {D}")
    spec = HilbertSpec((D, D))
    psi = np.zeros(D * D, dtype=complex)
    psi[np.arange(D) * (D + 1)] = 1.0 / np.sqrt(D)
    return Ket(psi, spec)


def qutrit_initial() -> Ket:
    return ghz_two_qudit(3)


def qutrit_final() -> Ket:
    spec = HilbertSpec((3, 3))
    psi = (_basis_ket(spec, (0, 0)) + _basis_ket(spec, (2, 2))) / np.sqrt(2)
    return Ket(psi, spec)


def k_local_compose(blocks) -> Ket:
    """Tensor product of independent blocks (k-local entanglement structure)."""
    blocks = list(blocks)
    if not blocks:
        raise InvalidParameter("need at least one block")
    dims = sum((b.spec.cell_dims for b in blocks), ())
    if math.prod(dims) > DEFAULT_MAX_DIM:
        raise InvalidParameter(f"composite dimension {math.prod(dims)} exceeds {DEFAULT_MAX_DIM}")
    return product_of(blocks)


def random_pure(spec: HilbertSpec, seed) -> Ket:
    """Normalized standard complex Gaussian vector."""
    rng = _rng(seed)
    d = spec.total_dim
    psi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return Ket(psi / np.linalg.norm(psi), spec)


def random_density(spec: HilbertSpec, rank: int, seed) -> DensityMatrix:
    """Mixture of ``rank`` random pure projectors with flat-Dirichlet weights."""
    d = spec.total_dim
    if not 1 <= rank <= d:
        raise InvalidParameter(f"rank must be in [1, {d}], got {rank}")
    rng = _rng(seed)
    vecs = rng.standard_normal((rank, d)) + 1j * rng.standard_normal((rank, d))
    vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
    weights = rng.dirichlet(np.ones(rank))
    rho = (vecs.T * weights) @ vecs.conj()
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(rho / np.trace(rho).real, spec)


def random_separable(spec: HilbertSpec, terms: int, seed) -> DensityMatrix:
    """Convex mixture of ``terms`` random pure product states."""
    if terms < 1:
        raise InvalidParameter(f"terms must be >= 1, got {terms}")
    rng = _rng(seed)
    weights = rng.dirichlet(np.ones(terms))
    rho = np.zeros((spec.total_dim, spec.total_dim), dtype=complex)
    for w in weights:
        factors = []
        for n in spec.cell_dims:
            v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            factors.append(v / np.linalg.norm(v))
        psi = reduce(np.kron, factors)
        rho += w * np.outer(psi, psi.conj())
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(rho / np.trace(rho).real, spec)


def random_local_unitary(spec: HilbertSpec, seed) -> np.ndarray:
    """Product of Haar-random single-cell unitaries (dense global matrix)."""
    from scipy.stats import unitary_group

    rng = _rng(seed)
    mats = [unitary_group.rvs(n, random_state=rng) for n in spec.cell_dims]
    return reduce(np.kron, mats)


_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# cyclic shifts of XZZXI generate the stabilizer of the five-qubit code
FIVE_QUBIT_STABILIZERS = ("XZZXI", "IXZZX", "XIXZZ", "ZXIXZ")


def pauli_string(label: str) -> np.ndarray:
    return reduce(np.kron, (_PAULI[c] for c in label))


def generate_ame5(seed: int = AME5_SEED) -> Ket:
    """Project a seeded random 5-qubit vector onto the five-qubit code space.

    Any state in that code space has every 1- and 2-qubit marginal
    maximally mixed.
    """
    projector = np.eye(32, dtype=complex)
    for label in FIVE_QUBIT_STABILIZERS:
        projector = projector @ (np.eye(32) + pauli_string(label)) / 2
    raw = random_pure(HilbertSpec.qubits(5), seed).amplitudes
    psi = projector @ raw
    return Ket(psi / np.linalg.norm(psi), HilbertSpec.qubits(5))


def format_amplitudes(ket: Ket) -> str:
    return "".join(f"{z.real:.17e} {z.imag:.17e}\n" for z in ket.amplitudes)


def parse_amplitudes(text: str) -> np.ndarray:
    rows = [line.split() for line in text.splitlines() if line.strip()]
    if any(len(r) != 2 for r in rows):
        raise InvalidParameter("amplitude file needs exactly two columns 're im' per line")
    data = np.array(rows, dtype=float)
    return data[:, 0] + 1j * data[:, 1]


def ame5_fixture() -> Ket:
    """Cached 2-uniform 5-qubit state (32 lines of ``re im``)."""
    text = resources.files("qbattery").joinpath("data").joinpath(AME5_FIXTURE).read_text()
    psi = parse_amplitudes(text)
    if psi.size != 32:
        raise InvalidParameter(f"ame5 fixture has {psi.size} amplitudes, expected 32")
    return Ket(psi / np.linalg.norm(psi), HilbertSpec.qubits(5))
