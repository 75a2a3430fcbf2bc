"""Spin battery charged by a complex SYK Hamiltonian.

The battery is ``H = h sum_i sigma^y_i`` on ``N`` qubits and the charger
is ``V = sum_{i<j, k<l} J_(ij),(kl) c_i^+ c_j^+ c_k c_l`` with Jordan-Wigner
fermions ``c_j = (sigma^x_j - i sigma^y_j)/2 prod_{k<j} sigma^z_k``.
In this convention a qubit in ``|0>`` is an occupied site. ``V`` conserves
the fermion number, so it is stored and diagonalized sector by sector.
"""

from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass, field
from itertools import combinations

import numpy as np

from .advantage import commutation_matrix_pure
from .errors import InvalidParameter
from .linalg import HilbertSpec, Ket, apply_local
from .observables import battery_hamiltonian, observable_set

SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
DEFAULT_SEED = 7


@dataclass(frozen=True)
class SykConfig:
    N: int = 8
    jbar: float = 1.0
    h: float = 1.0
    seed: int = DEFAULT_SEED
    tau_grid: tuple = tuple(np.round(np.linspace(0.0, 10.0, 201), 12))

    def __post_init__(self):
        if int(self.N) != self.N or not 2 <= self.N <= 12:
            raise InvalidParameter(f"N must be an integer in [2, 12], got {self.N}")
        if self.jbar <= 0:
            raise InvalidParameter(f"jbar must be positive, got {self.jbar}")
        if self.h <= 0:
            raise InvalidParameter(f"h must be positive, got {self.h}")
        tau = tuple(float(t) for t in self.tau_grid)
        object.__setattr__(self, "tau_grid", tau)
        if not tau or tau[0] != 0.0 or any(b <= a for a, b in zip(tau, tau[1:])):
            raise InvalidParameter("tau_grid must start at 0 and be strictly ascending")

    @classmethod
    def with_grid(cls, tau_max: float = 10.0, n_tau: int = 201, **kw) -> "SykConfig":
        return cls(tau_grid=tuple(np.linspace(0.0, tau_max, n_tau)), **kw)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["tau_grid"] = list(self.tau_grid)
        return d


@dataclass(frozen=True, eq=False)
class CouplingTensor:
    """``values[p, q]`` couples creation pair ``pairs[p]`` to annihilation pair ``pairs[q]``."""

    N: int
    pairs: tuple
    values: np.ndarray


@dataclass
class SykTrace:
    tau: np.ndarray
    p_tilde: np.ndarray
    sqrt_gamma_c: np.ndarray
    bound_ratio: np.ndarray
    energy: np.ndarray
    norm_error: np.ndarray = field(repr=False, default=None)
    v_mean: np.ndarray = field(repr=False, default=None)
    v_square: np.ndarray = field(repr=False, default=None)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["tau", "p_tilde", "sqrt_gamma_c", "bound_ratio", "energy"])
        for row in zip(self.tau, self.p_tilde, self.sqrt_gamma_c, self.bound_ratio, self.energy):
            w.writerow([f"{x:.17g}" for x in row])
        return buf.getvalue()


def ordered_pairs(N: int) -> tuple:
    return tuple(combinations(range(N), 2))


def sample_couplings(cfg: SykConfig) -> CouplingTensor:
    """Draw a Hermitian coupling tensor with total standard deviation ``jbar / N^{3/2}``.

    Off-diagonal pair entries are complex Gaussians (real and imaginary
    parts each with std ``jbar / (sqrt(2) N^{3/2})``); diagonal entries are
    real with std ``jbar / N^{3/2}``.
    """
    pairs = ordered_pairs(cfg.N)
    P = len(pairs)
    sigma = cfg.jbar / cfg.N**1.5
    rng = np.random.default_rng(np.random.SeedSequence(int(cfg.seed) & (2**64 - 1)))
    iu = np.triu_indices(P, k=1)
    off = (rng.standard_normal(iu[0].size) + 1j * rng.standard_normal(iu[0].size)) * sigma / np.sqrt(2)
    diag = rng.standard_normal(P) * sigma
    J = np.zeros((P, P), dtype=complex)
    J[iu] = off
    J = J + J.conj().T
    J[np.diag_indices(P)] = diag
    return CouplingTensor(cfg.N, pairs, J)


def sector_basis(N: int, n: int) -> np.ndarray:
    """Computational-basis indices with ``n`` occupied sites (qubits in ``|0>``)."""
    idx = np.arange(2**N)
    occupied = N - np.array([bin(i).count("1") for i in idx])
    return idx[occupied == n]


def _bit(state: int, site: int, N: int) -> int:
    # site 0 is the most significant bit
    return (state >> (N - 1 - site)) & 1


def annihilate_pair(state: int, k: int, l: int, N: int):
    """``c_k c_l |state>`` as ``(sign, new_state)`` or ``None``.

    Occupied means bit 0; the Jordan-Wigner string on site ``j`` contributes
    ``(-1)`` for every bit equal to 1 (empty) on sites before ``j``.
    """
    sign = 1
    for site in (l, k):  # c_l acts first
        if _bit(state, site, N) != 0:
            return None
        string = sum(_bit(state, s, N) for s in range(site))
        sign *= -1 if string % 2 else 1
        state |= 1 << (N - 1 - site)
    return sign, state


@dataclass(frozen=True, eq=False)
class SectorCharger:
    """Block-diagonal charger: one dense Hermitian block per fermion number."""

    N: int
    sectors: dict  # n -> (basis indices, block)

    def full_matrix(self) -> np.ndarray:
        d = 2**self.N
        V = np.zeros((d, d), dtype=complex)
        for idx, block in self.sectors.values():
            V[np.ix_(idx, idx)] = block
        return V

    def apply(self, psi: np.ndarray) -> np.ndarray:
        out = np.zeros_like(psi)
        for idx, block in self.sectors.values():
            out[idx] = block @ psi[idx]
        return out

    @property
    def sector_dims(self) -> dict:
        return {n: len(idx) for n, (idx, _) in self.sectors.items()}


def build_charger(cfg: SykConfig, J: CouplingTensor) -> SectorCharger:
    """Matrix elements of the SYK charger in every fermion-number sector.

    Uses ``c_i^+ c_j^+ = -(c_i c_j)^+`` so that, with ``B_q = c_k c_l``,
    ``V = -sum_pq J_pq B_p^+ B_q``: both sides pass through the same
    ``(n-2)``-particle intermediate state.
    """
    N = cfg.N
    pairs = J.pairs
    P = len(pairs)
    sectors = {}
    for n in range(N + 1):
        idx = sector_basis(N, n)
        dim = len(idx)
        block = np.zeros((dim, dim), dtype=complex)
        if n >= 2:
            pos = {int(st): a for a, st in enumerate(idx)}
            # group c_k c_l |s> by the (n-2)-particle state it lands on
            fibres: dict[int, list] = {}
            for st in idx:
                for q, (k, l) in enumerate(pairs):
                    res = annihilate_pair(int(st), k, l, N)
                    if res is not None:
                        sign, t_state = res
                        fibres.setdefault(t_state, []).append((pos[int(st)], q, sign))
            # V[a, b] = -sum_t sum_pq sign_a J[p, q] sign_b over each fibre
            for entries in fibres.values():
                a, q, sg = (np.array(x) for x in zip(*entries))
                block[np.ix_(a, a)] -= np.outer(sg, sg) * J.values[np.ix_(q, q)]
            block = 0.5 * (block + block.conj().T)
        sectors[n] = (idx, block)
    return SectorCharger(N, sectors)


def minus_y_state(N: int) -> Ket:
    """``prod_i |-Y>_i`` with ``|-Y> = (|0> - i|1>)/sqrt(2)``."""
    single = np.array([1.0, -1j]) / np.sqrt(2)
    psi = single
    for _ in range(N - 1):
        psi = np.kron(psi, single)
    return Ket(psi, HilbertSpec.qubits(N))


def ground_state(cfg: SykConfig) -> Ket:
    """Ground state of ``h sum_i sigma^y_i``, energy ``-h N``."""
    return minus_y_state(cfg.N)


def battery(cfg: SykConfig):
    spec = HilbertSpec.qubits(cfg.N)
    return battery_hamiltonian(spec, [cfg.h * SIGMA_Y] * cfg.N, dense=False)


def evolve_state(charger: SectorCharger, psi0: np.ndarray, times) -> np.ndarray:
    """``exp(-i V t) psi0`` for every ``t``, via sector eigendecompositions.

    Returns an array of shape ``(len(times), 2**N)``.
    """
    times = np.asarray(times, dtype=float)
    out = np.zeros((times.size, psi0.size), dtype=complex)
    for idx, block in charger.sectors.values():
        w, U = np.linalg.eigh(block)
        c = U.conj().T @ psi0[idx]
        phases = np.exp(-1j * np.outer(times, w))
        out[:, idx] = (phases * c) @ U.T
    return out


def evolve(cfg: SykConfig, J: CouplingTensor | None = None, charger: SectorCharger | None = None) -> SykTrace:
    """Charge the ground state with ``V`` and sample power and advantage.

    At each ``tau = t * jbar``: ``P = tr(i H [rho, V]) = -2 Im <V psi|H psi>``,
    ``P~ = P / sqrt(4 <V^2> N h^2)`` and ``bound_ratio = |P| / bound`` with
    the pure-state (``kappa = 1``) bound.
    """
    if J is None:
        J = sample_couplings(cfg)
    if charger is None:
        charger = build_charger(cfg, J)
    H = battery(cfg)
    M = observable_set(H.spec)
    psi0 = ground_state(cfg).amplitudes
    tau = np.asarray(cfg.tau_grid)
    states = evolve_state(charger, psi0, tau / cfg.jbar)

    v0 = charger.apply(psi0)
    v2_initial = float(np.real(np.vdot(v0, v0)))
    scale = np.sqrt(4.0 * v2_initial * cfg.N * cfg.h**2)

    n = tau.size
    p_tilde, sqrt_g, ratio, energy = (np.empty(n) for _ in range(4))
    norm_err, v_mean, v_sq = (np.empty(n) for _ in range(3))
    for a, psi in enumerate(states):
        hpsi = H.apply(psi)
        vpsi = charger.apply(psi)
        power = -2.0 * np.vdot(vpsi, hpsi).imag
        mean_v = np.vdot(psi, vpsi).real
        sq_v = np.vdot(vpsi, vpsi).real
        var_v = max(sq_v - mean_v**2, 0.0)
        g = commutation_matrix_pure(Ket(psi, H.spec, validate=False), M).norm
        bound = np.sqrt(2.0 * g * H.gap_norm * var_v)
        p_tilde[a] = power / scale
        sqrt_g[a] = np.sqrt(max(g, 0.0))
        ratio[a] = abs(power) / bound if bound > 0 else 0.0
        energy[a] = np.vdot(psi, hpsi).real
        norm_err[a] = abs(np.linalg.norm(psi) - 1.0)
        v_mean[a] = mean_v
        v_sq[a] = sq_v
    return SykTrace(tau, p_tilde, sqrt_g, ratio, energy, norm_err, v_mean, v_sq)
