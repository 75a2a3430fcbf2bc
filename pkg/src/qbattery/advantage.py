"""Commutation matrix, quantum-state charging advantage and the power bound.

For a state ``rho`` with square root ``S`` and an orthonormal local
observable set ``M``:

* covariance matrix ``gamma_mn = <{M_m, M_n}>/2 - <M_m><M_n>``
* commutation matrix ``gammaC_mn = -tr([M_m, S][M_n, S])``
* advantage ``Gamma_C = ||gammaC||`` (largest eigenvalue)
* power ``P = tr(i H [rho, V])`` obeys
  ``|P| <= sqrt(2 kappa Gamma_C sum_i tr(H_i^2) <dV^2>)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateDriving,
    DimensionMismatch,
    InvalidOperator,
    InvalidParameter,
    UnchargeableState,
)
from .linalg import (
    DensityMatrix,
    Ket,
    anticommutator,
    as_density,
    check_hermitian,
    commutator,
    hermitian_eigendecomposition,
    psd_sqrt,
)
from .observables import BatteryHamiltonian, ObservableSet, observable_set

VARIANCE_FLOOR = 1e-14
SUPPORT_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    entries: np.ndarray
    norm: float


@dataclass(frozen=True, eq=False)
class CommutationMatrix:
    """Real symmetric commutation matrix with its top eigenpair.

    ``norm`` is the advantage ``Gamma_C`` and ``top_vector`` the unit
    eigenvector ``u_m`` belonging to it.
    """

    entries: np.ndarray
    norm: float
    top_vector: np.ndarray

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)


@dataclass(frozen=True)
class PowerReport:
    power: float
    bound: float
    kappa: float
    gamma_c: float
    cos_theta_V: float
    cos_theta_H: float
    driving_variance: float
    gap_norm: float

    @property
    def ratio(self) -> float:
        return abs(self.power) / self.bound if self.bound > 0 else 0.0


def _symmetric(G: np.ndarray) -> np.ndarray:
    return 0.5 * (G + G.T)


def _top_eigenpair(G: np.ndarray) -> tuple[float, np.ndarray]:
    w, v = np.linalg.eigh(G)
    u = v[:, -1]
    # fix the overall sign so the output is deterministic
    k = np.argmax(np.abs(u))
    if u[k] < 0:
        u = -u
    return float(w[-1]), u


def _observables_for(state, M: ObservableSet | None) -> ObservableSet:
    if M is None:
        return observable_set(state.spec)
    if M.spec.cell_dims != state.spec.cell_dims:
        raise DimensionMismatch(
            f"observable set is for cells {M.spec.cell_dims}, state has {state.spec.cell_dims}"
        )
    return M


def covariance_matrix(rho, M: ObservableSet | None = None) -> CovarianceMatrix:
    """Symmetrized covariance matrix of the observable set."""
    if isinstance(rho, Ket):
        M = _observables_for(rho, M)
        phi = M.apply(rho.amplitudes)
        second = np.real(phi.conj() @ phi.T)
        mean = np.real(phi @ rho.amplitudes.conj())
    else:
        rho = as_density(rho)
        M = _observables_for(rho, M)
        E = M.embedded()
        R = rho.matrix @ E
        second = np.real(np.einsum("aij,bji->ab", R, E))
        mean = np.real(np.einsum("aii->a", R))
    G = _symmetric(second - np.outer(mean, mean))
    return CovarianceMatrix(G, float(np.linalg.eigvalsh(G)[-1]))


def commutation_matrix(rho, M: ObservableSet | None = None, sqrt_rho=None) -> CommutationMatrix:
    """Dense commutation matrix ``-tr([M_m, S][M_n, S])`` with ``S = sqrt(rho)``."""
    rho = as_density(rho)
    M = _observables_for(rho, M)
    S = psd_sqrt(rho) if sqrt_rho is None else sqrt_rho
    E = M.embedded()
    C = E @ S - S @ E
    K = len(M)
    G = -np.real(C.reshape(K, -1) @ C.transpose(0, 2, 1).reshape(K, -1).T)
    G = _symmetric(G)
    norm, top = _top_eigenpair(G)
    return CommutationMatrix(G, norm, top)


def commutation_matrix_pure(psi: Ket, M: ObservableSet | None = None) -> CommutationMatrix:
    """Pure-state fast path.

    For ``rho = |psi><psi|`` the square root is ``rho`` itself and the
    commutation matrix reduces to twice the covariance matrix, so only the
    vectors ``M_m |psi>`` are needed.
    """
    M = _observables_for(psi, M)
    phi = M.apply(psi.amplitudes)
    second = np.real(phi.conj() @ phi.T)
    mean = np.real(phi @ psi.amplitudes.conj())
    G = _symmetric(2.0 * (second - np.outer(mean, mean)))
    norm, top = _top_eigenpair(G)
    return CommutationMatrix(G, norm, top)


def state_commutation_matrix(state, M: ObservableSet | None = None) -> CommutationMatrix:
    """Dispatch: fast path for a ``Ket``, dense square root otherwise."""
    if isinstance(state, Ket):
        return commutation_matrix_pure(state, M)
    return commutation_matrix(state, M)


def gamma_c(state, M: ObservableSet | None = None) -> float:
    """Quantum-state charging advantage ``Gamma_C`` of a ket or density matrix."""
    return state_commutation_matrix(state, M).norm


def _sqrt_of(state) -> np.ndarray:
    # a pure projector is its own square root; eigh round-off would leave ~1e-8 noise
    if isinstance(state, Ket):
        return np.outer(state.amplitudes, state.amplitudes.conj())
    return psd_sqrt(state)


def _operator(V, d: int, name: str) -> np.ndarray:
    V = check_hermitian(V, name)
    if V.shape != (d, d):
        raise DimensionMismatch(f"{name} has shape {V.shape}, state dimension is {d}")
    return V


def _hamiltonian_matrix(H, d: int) -> np.ndarray:
    if isinstance(H, BatteryHamiltonian):
        if H.matrix is None:
            raise InvalidParameter("battery Hamiltonian was built without a dense matrix")
        return _operator(H.matrix, d, "H")
    return _operator(H, d, "H")


def variance(rho, V) -> float:
    """``<V^2> - <V>^2`` in the state."""
    rho = as_density(rho)
    V = _operator(V, rho.dim, "V")
    mean = np.real(np.trace(rho.matrix @ V))
    return float(np.real(np.trace(rho.matrix @ V @ V)) - mean**2)


def instantaneous_power(rho, H, V) -> float:
    """``P = tr(i H [rho, V])``, the rate of change of ``tr(H rho)``.

    This is the sign under ``d rho/dt = i [rho, V]``.
    """
    rho = as_density(rho)
    Hm = _hamiltonian_matrix(H, rho.dim)
    V = _operator(V, rho.dim, "V")
    val = 1j * np.trace(Hm @ commutator(rho.matrix, V))
    scale = max(1.0, np.linalg.norm(Hm) * np.linalg.norm(V))
    if abs(val.imag) > 1e-10 * scale:
        raise InvalidOperator(f"power has imaginary part {val.imag:.3e}")
    return float(val.real)


def _centered(rho: DensityMatrix, V: np.ndarray) -> tuple[np.ndarray, float]:
    Vt = V - np.real(np.trace(rho.matrix @ V)) * np.eye(rho.dim)
    var = float(np.real(np.trace(rho.matrix @ Vt @ Vt)))
    return Vt, var


def kappa(rho, V, sqrt_rho=None) -> float:
    """Mixedness coefficient ``tr({S, V~}^2) / (2 <dV^2>)``, between 1 and 2.

    ``V~`` is ``V`` shifted by ``-tr(V rho)``; equals 1 for pure states.
    """
    S = _sqrt_of(rho) if sqrt_rho is None else sqrt_rho
    rho = as_density(rho)
    V = _operator(V, rho.dim, "V")
    Vt, var = _centered(rho, V)
    if var <= VARIANCE_FLOOR:
        raise DegenerateDriving(f"driving variance {var:.3e} is zero")
    cross = np.real(np.trace(S @ Vt @ S @ Vt))
    return float((var + cross) / var)


def _charging_strength(Hm: np.ndarray, S: np.ndarray) -> float:
    # -tr([H, S]^2) is the squared Frobenius norm of the anti-Hermitian [H, S]
    C = commutator(Hm, S)
    return float(np.real(np.vdot(C, C)))


def angles(rho, H: BatteryHamiltonian, V, sqrt_rho=None, gamma=None) -> tuple[float, float]:
    """``(cos theta_V, cos theta_H)``: driving and Hamiltonian misalignment.

    ``cos theta_V`` is ``P^2 / (-tr([H,S]^2) tr({S,V~}^2))`` and
    ``cos theta_H`` is ``-tr([H,S]^2) / (Gamma_C sum_i tr(H_i^2))``.
    """
    S = _sqrt_of(rho) if sqrt_rho is None else sqrt_rho
    G = gamma_c(rho) if gamma is None else gamma
    rho = as_density(rho)
    Hm = _hamiltonian_matrix(H, rho.dim)
    V = _operator(V, rho.dim, "V")
    strength = _charging_strength(Hm, S)
    if strength <= VARIANCE_FLOOR:
        raise UnchargeableState("[H, sqrt(rho)] vanishes")
    Vt, _ = _centered(rho, V)
    A = anticommutator(S, Vt)
    drive = float(np.real(np.trace(A @ A)))
    if drive <= VARIANCE_FLOOR:
        raise DegenerateDriving("{sqrt(rho), V} vanishes")
    if G <= 0:
        # strength <= Gamma_C * gap, so a positive strength needs Gamma_C > 0
        raise InvalidParameter(f"Gamma_C = {G:.3e} is inconsistent with [H, S] != 0")
    P = instantaneous_power(rho, Hm, V)
    return P**2 / (strength * drive), strength / (G * H.gap_norm)


def power_bound(rho, H: BatteryHamiltonian, V) -> PowerReport:
    """Evaluate the power and its state-advantage bound for one triple."""
    state = rho
    rho = as_density(rho)
    Hm = _hamiltonian_matrix(H, rho.dim)
    V = _operator(V, rho.dim, "V")
    S = _sqrt_of(state)
    G = gamma_c(state) if isinstance(state, Ket) else commutation_matrix(rho, sqrt_rho=S).norm
    k = kappa(rho, V, sqrt_rho=S)
    var = variance(rho, V)
    P = instantaneous_power(rho, Hm, V)
    bound = float(np.sqrt(max(2.0 * k * G * H.gap_norm * var, 0.0)))
    try:
        cos_v, cos_h = angles(rho, H, V, sqrt_rho=S, gamma=G)
    except UnchargeableState:
        # [H, S] = 0 forces P = 0; both angle factors are then zero
        cos_v, cos_h = 0.0, 0.0
    return PowerReport(P, bound, k, G, cos_v, cos_h, var, H.gap_norm)


def covariance_bound(rho, H: BatteryHamiltonian, V) -> float:
    """Looser bound ``2 sqrt(||gamma|| sum_i tr(H_i^2) <dV^2>)`` from the covariance matrix."""
    cov = covariance_matrix(rho, H.observables)
    return float(2.0 * np.sqrt(cov.norm * H.gap_norm * variance(rho, V)))


def optimal_driving(rho, H, c: float = 1.0) -> np.ndarray:
    """Driving Hamiltonian saturating the Cauchy-Schwarz step of the bound.

    In the eigenbasis of ``rho`` (eigenvalues ``p``, ``s = sqrt(p)``)::

        v_ab = i c (s_b - s_a) / (s_a + s_b) h_ab

    Entries with ``s_a + s_b <= 1e-12`` connect null-space levels only and
    are set to zero.
    """
    pure = isinstance(rho, Ket)
    rho = as_density(rho)
    Hm = _hamiltonian_matrix(H, rho.dim)
    w, U = hermitian_eigendecomposition(rho)
    s = (w > 0.5).astype(float) if pure else np.sqrt(np.clip(w, 0.0, None))
    S = (U * s) @ U.conj().T
    if np.linalg.norm(commutator(Hm, S)) <= SUPPORT_FLOOR:
        raise UnchargeableState("H commutes with sqrt(rho); every driving gives P = 0")
    h = U.conj().T @ Hm @ U
    den = s[:, None] + s[None, :]
    num = s[None, :] - s[:, None]
    ratio = np.divide(num, den, out=np.zeros_like(den), where=den > SUPPORT_FLOOR)
    v = 1j * c * ratio * h
    V = U @ v @ U.conj().T
    return 0.5 * (V + V.conj().T)


def power_identity_residual(rho, H: BatteryHamiltonian, V, eps: float = 1e-14) -> float:
    """Relative residual of ``P^2 = 2 kappa Gamma_C g <dV^2> cos_V cos_H``."""
    r = power_bound(rho, H, V)
    rhs = 2.0 * r.kappa * r.gamma_c * r.gap_norm * r.driving_variance * r.cos_theta_V * r.cos_theta_H
    return abs(r.power**2 - rhs) / max(r.power**2, eps)


def normalize_driving(V, rho, spec=None, delta_e_single: float = 1.0) -> np.ndarray:
    """Rescale ``V`` so that ``sqrt(<dV^2>) = delta_e_single * sqrt(N)``."""
    rho = as_density(rho)
    n_cells = (spec if spec is not None else rho.spec).n_cells
    V = _operator(V, rho.dim, "V")
    var = variance(rho, V)
    if var <= VARIANCE_FLOOR:
        raise DegenerateDriving(f"driving variance {var:.3e} is zero")
    return V * (delta_e_single * np.sqrt(n_cells) / np.sqrt(var))
