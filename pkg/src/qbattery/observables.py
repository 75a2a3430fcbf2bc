"""Orthonormal local observable sets and non-interacting battery Hamiltonians."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DimensionMismatch, InvalidParameter, ZeroHamiltonian
from .linalg import HilbertSpec, apply_local, check_hermitian, embed_local


@lru_cache(maxsize=None)
def _gell_mann(n: int) -> tuple[np.ndarray, ...]:
    mats = []
    for r in range(n):
        for s in range(r + 1, n):
            sym = np.zeros((n, n), dtype=complex)
            sym[r, s] = sym[s, r] = 1.0
            asym = np.zeros((n, n), dtype=complex)
            asym[r, s] = -1j
            asym[s, r] = 1j
            mats.append(sym / np.sqrt(2))
            mats.append(asym / np.sqrt(2))
    for k in range(1, n):
        diag = np.zeros(n)
        diag[:k] = 1.0
        diag[k] = -k
        mats.append(np.diag(diag / np.sqrt(k * (k + 1))).astype(complex))
    mats.append(np.eye(n, dtype=complex) / np.sqrt(n))
    for m in mats:
        m.setflags(write=False)
    return tuple(mats)


def orthonormal_basis(n: int) -> list[np.ndarray]:
    """Generalized Gell-Mann basis of ``n x n`` Hermitian matrices.

    Normalized so that ``tr(A_a A_b) = delta_ab``. Order: for each pair
    ``r < s`` (lexicographic) the symmetric then the antisymmetric element,
    then the ``n - 1`` diagonal traceless elements, then ``I / sqrt(n)``.
    For ``n = 2`` this is ``sigma_x, sigma_y, sigma_z, I`` over ``sqrt(2)``.
    """
    if not isinstance(n, (int, np.integer)) or not 2 <= n <= 32:
        raise InvalidParameter(f"basis dimension must be an integer in [2, 32], got {n!r}")
    return list(_gell_mann(int(n)))


@dataclass(frozen=True, eq=False)
class ObservableSet:
    """Union of the per-cell orthonormal bases, flattened cell-major.

    Attributes
    ----------
    spec : HilbertSpec
    basis : tuple of tuple of ndarray
        ``basis[i][a]`` is the local matrix for observable ``a`` of cell ``i``.
    index : tuple of (int, int)
        Flattened index ``mu`` -> ``(cell, alpha)``.
    """

    spec: HilbertSpec
    basis: tuple
    index: tuple

    def __len__(self) -> int:
        return len(self.index)

    def flat_index(self, cell: int, alpha: int) -> int:
        return self._offsets[cell] + alpha

    @property
    def _offsets(self) -> list[int]:
        offs, acc = [], 0
        for n in self.spec.cell_dims:
            offs.append(acc)
            acc += n * n
        return offs

    def local(self, mu: int) -> tuple[int, np.ndarray]:
        """Cell index and local matrix of observable ``mu``."""
        i, a = self.index[mu]
        return i, self.basis[i][a]

    def is_identity(self) -> np.ndarray:
        """Boolean mask of the identity element of every cell."""
        return np.array([a == self.spec.cell_dims[i] ** 2 - 1 for i, a in self.index])

    def embedded(self) -> np.ndarray:
        """All observables as dense global matrices, shape ``(K, d, d)``."""
        return np.stack([embed_local(A, self.spec, i) for i, A in map(self.local, range(len(self)))])

    def apply(self, psi: np.ndarray) -> np.ndarray:
        """Rows ``M_mu |psi>`` for every observable, shape ``(K, d)``."""
        out = np.empty((len(self), self.spec.total_dim), dtype=complex)
        for i, mats in enumerate(self.basis):
            stack = np.stack(mats)  # (n^2, n, n)
            t = np.asarray(psi, dtype=complex).reshape(self.spec.cell_dims)
            t = np.tensordot(stack, t, axes=([2], [i]))  # (n^2, n, ...rest)
            t = np.moveaxis(t, 1, i + 1).reshape(len(mats), -1)
            off = self._offsets[i]
            out[off : off + len(mats)] = t
        return out

    def coefficients(self, local_terms) -> np.ndarray:
        """Expansion ``tr(H_i A^i_a)`` of a sum of local terms in this set."""
        coef = np.empty(len(self))
        for mu, (i, a) in enumerate(self.index):
            coef[mu] = np.real(np.trace(local_terms[i] @ self.basis[i][a]))
        return coef


def observable_set(spec: HilbertSpec) -> ObservableSet:
    basis = tuple(tuple(orthonormal_basis(n)) for n in spec.cell_dims)
    index = tuple((i, a) for i, n in enumerate(spec.cell_dims) for a in range(n * n))
    return ObservableSet(spec, basis, index)


@dataclass(frozen=True, eq=False)
class BatteryHamiltonian:
    """Sum of local cell Hamiltonians.

    ``gap_norm`` is ``sum_i tr(H_i^2)`` and ``u`` the unit vector with
    ``H = sqrt(gap_norm) * sum_mu u_mu M_mu``.
    """

    spec: HilbertSpec
    local_terms: tuple
    matrix: np.ndarray
    gap_norm: float
    u: np.ndarray
    observables: ObservableSet

    def apply(self, psi: np.ndarray) -> np.ndarray:
        """``H |psi>`` using the local terms only."""
        out = np.zeros(self.spec.total_dim, dtype=complex)
        for i, h in enumerate(self.local_terms):
            out += apply_local(h, psi, self.spec, i)
        return out


def battery_hamiltonian(spec: HilbertSpec, local_terms, observables: ObservableSet | None = None,
                        dense: bool = True) -> BatteryHamiltonian:
    """Assemble ``H = sum_i H_i`` and its decomposition on the observable set.

    Parameters
    ----------
    spec : HilbertSpec
    local_terms : sequence of ndarray
        One Hermitian ``n_i x n_i`` matrix per cell.
    observables : ObservableSet, optional
        Reuse a prebuilt set; defaults to ``observable_set(spec)``.
    dense : bool
        Build the global ``d x d`` matrix. Turn off for large pure-state
        workloads that only need ``apply``.
    """
    if len(local_terms) != spec.n_cells:
        raise DimensionMismatch(f"got {len(local_terms)} local terms for {spec.n_cells} cells")
    terms = []
    for i, (h, n) in enumerate(zip(local_terms, spec.cell_dims)):
        h = check_hermitian(h, f"local term {i}")
        if h.shape != (n, n):
            raise DimensionMismatch(f"local term {i} has shape {h.shape}, cell dimension is {n}")
        terms.append(h)
    gap_norm = float(sum(np.real(np.trace(h @ h)) for h in terms))
    if gap_norm < 1e-14:
        raise ZeroHamiltonian("battery Hamiltonian has sum_i tr(H_i^2) = 0")
    M = observables if observables is not None else observable_set(spec)
    u = M.coefficients(terms) / np.sqrt(gap_norm)
    matrix = sum(embed_local(h, spec, i) for i, h in enumerate(terms)) if dense else None
    return BatteryHamiltonian(spec, tuple(terms), matrix, gap_norm, u, M)


def hamiltonian_from_direction(spec: HilbertSpec, u, scale: float = 1.0,
                               observables: ObservableSet | None = None) -> BatteryHamiltonian:
    """Local Hamiltonian ``scale * M . u`` for a real direction ``u``.

    ``u`` is normalized first, so the resulting ``gap_norm`` equals
    ``scale**2`` and the decomposition vector equals ``u / |u|``.
    """
    M = observables if observables is not None else observable_set(spec)
    u = np.asarray(u, dtype=float)
    if u.shape != (len(M),):
        raise DimensionMismatch(f"direction has length {u.size}, observable set has {len(M)}")
    norm = np.linalg.norm(u)
    if norm < 1e-14:
        raise ZeroHamiltonian("direction vector is zero")
    u = u / norm
    terms = [np.zeros((n, n), dtype=complex) for n in spec.cell_dims]
    for mu, (i, a) in enumerate(M.index):
        terms[i] += scale * u[mu] * M.basis[i][a]
    return battery_hamiltonian(spec, terms, observables=M)
