"""Thermalization of two qudit cells, each coupled to its own photon bath.

The master equation (Lamb shift dropped) is::

    d rho/dt = i [rho, H] + g sum_i { N_p (a_i^+ rho a_i - {rho, a_i a_i^+}/2)
                                    + (N_p + 1) (a_i rho a_i^+ - {rho, a_i^+ a_i}/2) }

with ``H`` the uniform-gap ladder ``sum_d d omega0 |d><d|`` on each cell and
``N_p`` the Bose occupation at ``omega0``. Time is in units of ``1/g``.
"""

from __future__ import annotations

import csv
import math
import io
from dataclasses import asdict, dataclass, field

import numpy as np

from .advantage import commutation_matrix
from .entanglement import negativity
from .errors import DimensionMismatch, IntegrationUnstable, InvalidParameter
from .linalg import DensityMatrix, HilbertSpec, Ket, as_density, embed_local, psd_sqrt
from .states import ghz_two_qudit

# RK4 snapshots are only positive up to truncation error; this is the
# tolerated excursion before a sample is rejected.
SAMPLE_PSD_TOL = 1e-6


@dataclass(frozen=True)
class LindbladConfig:
    D: int = 5
    omega0: float = 1.0
    g: float = 1.0
    kT: float = 0.1
    t_final: float = 30.0
    dt: float = 1e-3
    record_every: int = 100

    def __post_init__(self):
        if int(self.D) != self.D or self.D < 2:
            raise InvalidParameter(f"D must be an integer >= 2, got {self.D}")
        if self.kT <= 0:
            raise InvalidParameter(f"kT must be positive, got {self.kT}")
        if self.omega0 <= 0:
            raise InvalidParameter(f"omega0 must be positive, got {self.omega0}")
        if self.g <= 0:
            raise InvalidParameter(f"g must be positive, got {self.g}")
        if self.t_final <= 0:
            raise InvalidParameter(f"t_final must be positive, got {self.t_final}")
        if self.dt <= 0 or self.dt * self.g > 1e-2:
            raise InvalidParameter(f"need 0 < dt * g <= 1e-2, got dt={self.dt}, g={self.g}")
        if int(self.record_every) != self.record_every or self.record_every < 1:
            raise InvalidParameter(f"record_every must be a positive integer, got {self.record_every}")

    @property
    def spec(self) -> HilbertSpec:
        return HilbertSpec((self.D, self.D))

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class ThermalizationTrace:
    times: np.ndarray
    gamma_c: np.ndarray
    negativity: np.ndarray
    trace_error: np.ndarray
    config: LindbladConfig | None = field(default=None, repr=False)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "gamma_c", "negativity", "trace_error"])
        for row in zip(self.times, self.gamma_c, self.negativity, self.trace_error):
            w.writerow([f"{x:.17g}" for x in row])
        return buf.getvalue()


def photon_occupation(omega: float, kT: float) -> float:
    """Bose occupation ``e^{-w/kT} / (1 - e^{-w/kT})``."""
    if omega <= 0 or kT <= 0:
        raise InvalidParameter(f"need omega > 0 and kT > 0, got omega={omega}, kT={kT}")
    x = omega / kT
    # exp(-x) underflows gracefully for large x; -expm1(-x) keeps precision for small x
    return math.exp(-x) / -math.expm1(-x)


def ladder_operator(D: int) -> np.ndarray:
    """Truncated oscillator lowering operator ``sum_k sqrt(k) |k-1><k|``."""
    if int(D) != D or D < 2:
        raise InvalidParameter(f"D must be an integer >= 2, got {D}")
    return np.diag(np.sqrt(np.arange(1, D, dtype=float)), k=1).astype(complex)


def cell_hamiltonian(D: int, omega0: float = 1.0) -> np.ndarray:
    """``sum_d d omega0 |d><d|`` with levels ``d = 1..D``."""
    return np.diag(omega0 * np.arange(1, D + 1, dtype=float)).astype(complex)


class _Generator:
    """Precomputed operators for repeated evaluation of the Lindbladian."""

    def __init__(self, cfg: LindbladConfig):
        spec = cfg.spec
        h = cell_hamiltonian(cfg.D, cfg.omega0)
        a = ladder_operator(cfg.D)
        self.H = embed_local(h, spec, 0) + embed_local(h, spec, 1)
        n_p = photon_occupation(cfg.omega0, cfg.kT)
        self.jumps = []  # (rate, L) pairs
        anti = np.zeros_like(self.H)
        for i in range(2):
            ai = embed_local(a, spec, i)
            ad = ai.conj().T
            self.jumps.append((cfg.g * n_p, ad))
            self.jumps.append((cfg.g * (n_p + 1.0), ai))
            anti += cfg.g * n_p * (ai @ ad) + cfg.g * (n_p + 1.0) * (ad @ ai)
        # d rho/dt = -i (K rho - rho K^+) + sum_k r_k L_k rho L_k^+,  K = H - (i/2) anti
        self.K = self.H - 0.5j * anti
        self.Kd = self.K.conj().T

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        out = -1j * (self.K @ rho - rho @ self.Kd)
        for rate, L in self.jumps:
            out += rate * (L @ rho @ L.conj().T)
        return out


def lindblad_generator(rho, cfg: LindbladConfig) -> np.ndarray:
    """Time derivative ``d rho/dt`` for the two-cell thermalization model."""
    if isinstance(rho, (DensityMatrix, Ket)):
        mat = as_density(rho).matrix
    else:
        mat = np.asarray(rho, dtype=complex)
    d = cfg.D * cfg.D
    if mat.shape != (d, d):
        raise DimensionMismatch(f"state has shape {mat.shape}, model needs ({d}, {d})")
    return _Generator(cfg)(mat)


def _rk4_step(f, rho: np.ndarray, dt: float) -> np.ndarray:
    k1 = f(rho)
    k2 = f(rho + 0.5 * dt * k1)
    k3 = f(rho + 0.5 * dt * k2)
    k4 = f(rho + dt * k3)
    return rho + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


def _sample(rho: np.ndarray, spec: HilbertSpec, t: float) -> tuple[float, float]:
    lmin = np.linalg.eigvalsh(rho)[0]
    if lmin < -SAMPLE_PSD_TOL:
        raise IntegrationUnstable(
            f"eigenvalue {lmin:.3e} at t={t:g} is below -{SAMPLE_PSD_TOL:g}; reduce dt"
        )
    state = DensityMatrix(rho, spec, validate=False)
    S = psd_sqrt(state, clamp=SAMPLE_PSD_TOL)
    return commutation_matrix(state, sqrt_rho=S).norm, negativity(state, (0,))


def integrate(cfg: LindbladConfig, rho0=None) -> ThermalizationTrace:
    """Fixed-step RK4 integration, sampling ``Gamma_C`` and negativity.

    After every step the state is re-Hermitized and its trace reset to one;
    ``trace_error`` records the trace drift of the raw RK4 update before
    that reset. The default initial state is the two-qudit GHZ state.
    """
    spec = cfg.spec
    if rho0 is None:
        rho0 = ghz_two_qudit(cfg.D)
    rho0 = as_density(rho0)
    if rho0.spec.cell_dims != spec.cell_dims:
        raise DimensionMismatch(f"initial state cells {rho0.spec.cell_dims} != {spec.cell_dims}")
    f = _Generator(cfg)
    n_steps = int(round(cfg.t_final / cfg.dt))
    rho = rho0.matrix.copy()
    times, gammas, negs, errs = [], [], [], []
    drift = 0.0

    def record(step):
        t = step * cfg.dt
        gc, neg = _sample(rho, spec, t)
        times.append(t)
        gammas.append(gc)
        negs.append(neg)
        errs.append(drift)

    record(0)
    for step in range(1, n_steps + 1):
        rho = _rk4_step(f, rho, cfg.dt)
        tr = np.trace(rho).real
        drift = abs(tr - 1.0)
        rho = 0.5 * (rho + rho.conj().T) / tr
        if step % cfg.record_every == 0 or step == n_steps:
            record(step)
    return ThermalizationTrace(
        np.array(times), np.array(gammas), np.array(negs), np.array(errs), config=cfg
    )
