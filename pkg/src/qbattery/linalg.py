"""Dense Hermitian linear algebra on multipartite Hilbert spaces.

Cell ordering follows ``HilbertSpec.cell_dims``: cell 0 is the leftmost
tensor factor, i.e. the slowest-varying index of the computational basis.
"""

from __future__ import annotations

import math
from dataclasses import InitVar, dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidOperator,
    InvalidParameter,
    InvalidPartition,
    NotPositiveSemidefinite,
)

DEFAULT_MAX_DIM = 2**14
HERMITIAN_RTOL = 1e-10
PSD_CLAMP = 1e-10


@dataclass(frozen=True)
class HilbertSpec:
    """Cell dimensions of a multipartite battery.

    Parameters
    ----------
    cell_dims : sequence of int
        Local dimension of every cell, in tensor-product order.
    max_dim : int
        Upper limit on the total dimension.
    """

    cell_dims: tuple[int, ...]
    max_dim: int = DEFAULT_MAX_DIM

    def __post_init__(self):
        dims = tuple(int(n) for n in self.cell_dims)
        object.__setattr__(self, "cell_dims", dims)
        if not dims:
            raise InvalidParameter("a HilbertSpec needs at least one cell")
        if any(n < 2 for n in dims):
            raise InvalidParameter(f"every cell dimension must be >= 2, got {dims}")
        if math.prod(dims) > self.max_dim:
            raise InvalidParameter(
                f"total dimension {math.prod(dims)} exceeds the maximum {self.max_dim}"
            )

    @classmethod
    def qubits(cls, n: int) -> "HilbertSpec":
        return cls((2,) * n)

    @property
    def n_cells(self) -> int:
        return len(self.cell_dims)

    @property
    def total_dim(self) -> int:
        return math.prod(self.cell_dims)

    def concat(self, other: "HilbertSpec") -> "HilbertSpec":
        return HilbertSpec(self.cell_dims + other.cell_dims, max(self.max_dim, other.max_dim))

    def subspec(self, cells: Sequence[int]) -> "HilbertSpec":
        return HilbertSpec(tuple(self.cell_dims[i] for i in cells), self.max_dim)


def _as_spec(spec) -> HilbertSpec:
    if isinstance(spec, HilbertSpec):
        return spec
    return HilbertSpec(tuple(spec))


def check_hermitian(A, name: str = "operator") -> np.ndarray:
    """Return ``A`` as a complex array after checking it is square and Hermitian.

    The tolerance is ``1e-10 * max(1, ||A||)`` on the largest entrywise
    deviation from ``A^dagger``.
    """
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidOperator(f"{name} must be a square matrix, got shape {A.shape}")
    scale = max(1.0, float(np.max(np.abs(A), initial=0.0)))
    dev = float(np.max(np.abs(A - A.conj().T), initial=0.0))
    if dev > HERMITIAN_RTOL * scale:
        raise InvalidOperator(f"{name} is not Hermitian (max |A - A^+| = {dev:.3e})")
    return A


@dataclass(frozen=True, eq=False)
class Ket:
    """Normalized pure state on a ``HilbertSpec``."""

    amplitudes: np.ndarray
    spec: HilbertSpec
    validate: InitVar[bool] = True

    def __post_init__(self, validate):
        psi = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        spec = _as_spec(self.spec)
        object.__setattr__(self, "amplitudes", psi)
        object.__setattr__(self, "spec", spec)
        if psi.size != spec.total_dim:
            raise DimensionMismatch(
                f"ket has {psi.size} amplitudes but the HilbertSpec has dimension {spec.total_dim}"
            )
        if validate:
            norm = np.linalg.norm(psi)
            if abs(norm - 1.0) > 1e-12:
                raise InvalidParameter(f"ket norm is {norm!r}, expected 1")

    @property
    def dim(self) -> int:
        return self.spec.total_dim

    def density(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()), self.spec)

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped with one axis per cell."""
        return self.amplitudes.reshape(self.spec.cell_dims)

    def expect(self, op) -> float:
        """Real part of ``<psi|op|psi>`` for a dense operator."""
        return float(np.real(np.vdot(self.amplitudes, np.asarray(op) @ self.amplitudes)))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Unit-trace positive semidefinite operator on a ``HilbertSpec``.

    Set ``validate=False`` only for intermediate results whose physicality is
    checked elsewhere (e.g. integrator snapshots).
    """

    matrix: np.ndarray
    spec: HilbertSpec
    validate: InitVar[bool] = True

    def __post_init__(self, validate):
        spec = _as_spec(self.spec)
        object.__setattr__(self, "spec", spec)
        if validate:
            rho = check_hermitian(self.matrix, "density matrix")
        else:
            rho = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", rho)
        if rho.shape != (spec.total_dim, spec.total_dim):
            raise DimensionMismatch(
                f"density matrix shape {rho.shape} does not match spec dimension {spec.total_dim}"
            )
        if validate:
            tr = np.trace(rho).real
            if abs(tr - 1.0) > 1e-10:
                raise InvalidParameter(f"density matrix trace is {tr!r}, expected 1")
            lmin = np.linalg.eigvalsh(rho)[0]
            if lmin < -PSD_CLAMP:
                raise NotPositiveSemidefinite(
                    f"density matrix has eigenvalue {lmin:.3e} < -{PSD_CLAMP:g}"
                )

    @property
    def dim(self) -> int:
        return self.spec.total_dim

    def expect(self, op) -> float:
        return float(np.real(np.trace(self.matrix @ np.asarray(op))))


def as_density(state) -> DensityMatrix:
    """Promote a ``Ket`` to its projector; pass a ``DensityMatrix`` through."""
    if isinstance(state, Ket):
        return state.density()
    if isinstance(state, DensityMatrix):
        return state
    raise TypeError(f"expected Ket or DensityMatrix, got {type(state).__name__}")


def _matrix_of(rho) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        return rho.matrix
    return np.asarray(rho, dtype=complex)


def hermitian_eigendecomposition(A) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors (columns) of ``A``."""
    A = check_hermitian(_matrix_of(A))
    # symmetrize so LAPACK sees an exactly Hermitian input
    return np.linalg.eigh(0.5 * (A + A.conj().T))


def psd_sqrt(rho, clamp: float = PSD_CLAMP) -> np.ndarray:
    """Positive semidefinite square root of a density matrix.

    Eigenvalues in ``[-clamp, 0)`` are treated as round-off and set to zero;
    anything more negative raises ``NotPositiveSemidefinite``. Positive
    eigenvalues below the numerical rank tolerance ``16 d eps lambda_max``
    are zeroed as well, since the square root would amplify their round-off
    (``1e-17`` becomes ``3e-9``).
    """
    w, v = hermitian_eigendecomposition(rho)
    if w[0] < -clamp:
        raise NotPositiveSemidefinite(f"eigenvalue {w[0]:.3e} below -{clamp:g}")
    null_tol = 16 * w.size * np.finfo(float).eps * max(w[-1], 0.0)
    w = np.where(w > null_tol, w, 0.0)
    return (v * np.sqrt(w)) @ v.conj().T


def operator_norm(A) -> float:
    """Largest eigenvalue of a Hermitian matrix (the norm for PSD input)."""
    A = check_hermitian(_matrix_of(A))
    return float(np.linalg.eigvalsh(A)[-1])


def trace_norm(A) -> float:
    """Sum of absolute eigenvalues."""
    A = check_hermitian(_matrix_of(A))
    return float(np.sum(np.abs(np.linalg.eigvalsh(A))))


def _check_subset(subset: Iterable[int], n_cells: int, proper: bool) -> tuple[int, ...]:
    try:
        cells = tuple(int(i) for i in subset)
    except TypeError as exc:
        raise InvalidPartition(f"cell subset must be iterable, got {subset!r}") from exc
    if not cells:
        raise InvalidPartition("cell subset is empty")
    if len(set(cells)) != len(cells):
        raise InvalidPartition(f"cell subset {cells} has repeated entries")
    if any(i < 0 or i >= n_cells for i in cells):
        raise InvalidPartition(f"cell subset {cells} out of range for {n_cells} cells")
    if proper and len(cells) == n_cells:
        raise InvalidPartition(f"cell subset {cells} is not a proper subset")
    return cells


def partial_transpose(rho: DensityMatrix, subset: Iterable[int]) -> np.ndarray:
    """Transpose the matrix indices belonging to ``subset`` only."""
    spec = rho.spec
    cells = _check_subset(subset, spec.n_cells, proper=True)
    n = spec.n_cells
    t = _matrix_of(rho).reshape(spec.cell_dims * 2)
    axes = list(range(2 * n))
    for i in cells:
        axes[i], axes[n + i] = axes[n + i], axes[i]
    return t.transpose(axes).reshape(spec.total_dim, spec.total_dim)


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Reduced state on the cells in ``keep`` (returned in ascending cell order)."""
    spec = rho.spec
    cells = tuple(sorted(_check_subset(keep, spec.n_cells, proper=False)))
    n = spec.n_cells
    t = _matrix_of(rho).reshape(spec.cell_dims * 2)
    # einsum subscripts: traced cells share their row/column label
    row = list(range(n))
    col = [n + i if i in cells else i for i in range(n)]
    out = [i for i in cells] + [n + i for i in cells]
    reduced = np.einsum(t, row + col, out)
    sub = spec.subspec(cells)
    d = sub.total_dim
    return DensityMatrix(reduced.reshape(d, d), sub, validate=False)


def embed_local(op, spec: HilbertSpec, i: int) -> np.ndarray:
    """Kronecker embedding ``I x ... x op x ... x I`` of a cell operator."""
    spec = _as_spec(spec)
    if not 0 <= i < spec.n_cells:
        raise InvalidPartition(f"cell index {i} out of range for {spec.n_cells} cells")
    op = np.asarray(op, dtype=complex)
    n_i = spec.cell_dims[i]
    if op.shape != (n_i, n_i):
        raise DimensionMismatch(f"operator shape {op.shape} does not match cell dimension {n_i}")
    left = math.prod(spec.cell_dims[:i])
    right = math.prod(spec.cell_dims[i + 1 :])
    return np.kron(np.kron(np.eye(left), op), np.eye(right))


def apply_local(op, psi: np.ndarray, spec: HilbertSpec, i: int) -> np.ndarray:
    """Apply a single-cell operator to a state vector without embedding it."""
    t = np.asarray(psi).reshape(spec.cell_dims)
    t = np.tensordot(op, t, axes=([1], [i]))
    return np.moveaxis(t, 0, i).reshape(-1)


def commutator(A, B) -> np.ndarray:
    return A @ B - B @ A


def anticommutator(A, B) -> np.ndarray:
    return A @ B + B @ A
