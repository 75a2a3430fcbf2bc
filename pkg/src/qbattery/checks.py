"""Seeded property suites behind ``qbattery verify``.

Every suite draws its states from a fixed seed sequence and reports the
seeds of violating samples. The dense commutation matrix is looked up on
the ``advantage`` module at call time, so a patched implementation is
what gets checked.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import advantage
from .linalg import HilbertSpec, as_density
from .observables import hamiltonian_from_direction, observable_set
from .states import random_density, random_local_unitary, random_pure, random_separable, w_state

SPECS = (
    HilbertSpec((2, 2)),
    HilbertSpec((2, 3)),
    HilbertSpec((3, 3)),
    HilbertSpec((2, 2, 2)),
    HilbertSpec((2, 2, 2, 2)),
)
BASE_SEED = 1000


@dataclass
class SuiteResult:
    name: str
    n_samples: int
    failures: list = field(default_factory=list)  # (seed, message)
    worst: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status} {self.name}: {self.n_samples} samples, worst {self.worst:.3e}"
        for seed, msg in self.failures[:5]:
            text += f"\n    seed {seed}: {msg}"
        if len(self.failures) > 5:
            text += f"\n    ... {len(self.failures) - 5} more"
        return text


def _run(name: str, seeds, check, lower: bool = False) -> SuiteResult:
    """Apply ``check(seed) -> (metric, failure message or None)`` to every seed.

    An exception raised by a sample is recorded as a failure for that seed.
    ``worst`` tracks the largest metric (smallest when ``lower``).
    """
    seeds = list(seeds)
    res = SuiteResult(name, len(seeds))
    pick = min if lower else max
    for seed in seeds:
        try:
            metric, msg = check(seed)
        except Exception as exc:  # any crash counts against the suite
            res.failures.append((seed, f"{type(exc).__name__}: {exc}"))
            continue
        res.worst = pick(res.worst, metric)
        if msg is not None:
            res.failures.append((seed, msg))
    return res


def _seeds(n: int) -> range:
    return range(BASE_SEED, BASE_SEED + n)


def _spec_for(seed: int) -> HilbertSpec:
    return SPECS[seed % len(SPECS)]


def _random_state(seed: int):
    """Alternate pure and mixed states over ``SPECS``."""
    spec = _spec_for(seed)
    if (seed // len(SPECS)) % 2 == 0:
        return random_pure(spec, seed)
    rank = 1 + seed % spec.total_dim
    return random_density(spec, rank, seed)


def _dense(state):
    return advantage.commutation_matrix(as_density(state))


def suite_psd(n: int = 200, tol: float = 1e-10) -> SuiteResult:
    def check(seed):
        lmin = float(_dense(_random_state(seed)).eigenvalues[0])
        return lmin, (f"min eigenvalue {lmin:.3e}" if lmin < -tol else None)

    return _run("commutation matrix is positive semidefinite", _seeds(n), check, lower=True)


def suite_upper(n: int = 200, tol: float = 1e-8) -> SuiteResult:
    def check(seed):
        state = _random_state(seed)
        excess = _dense(state).norm - state.spec.n_cells
        return excess, (f"Gamma_C exceeds N by {excess:.3e}" if excess > tol else None)

    return _run("Gamma_C <= number of cells", _seeds(n), check)


def suite_separable(n: int = 200, tol: float = 1e-8) -> SuiteResult:
    def check(seed):
        rho = random_separable(_spec_for(seed), terms=1 + seed % 4, seed=seed)
        excess = _dense(rho).norm - 1.0
        return excess, (f"Gamma_C = 1 + {excess:.3e}" if excess > tol else None)

    return _run("Gamma_C <= 1 for separable states", _seeds(n), check)


def suite_local_unitary(n: int = 200, tol: float = 1e-8) -> SuiteResult:
    def check(seed):
        rho = as_density(_random_state(seed))
        U = random_local_unitary(rho.spec, seed + 7919)
        rotated = type(rho)(U @ rho.matrix @ U.conj().T, rho.spec, validate=False)
        dev = float(np.max(np.abs(_dense(rho).eigenvalues - _dense(rotated).eigenvalues)))
        return dev, (f"spectra differ by {dev:.3e}" if dev > tol else None)

    return _run("spectrum invariant under local unitaries", _seeds(n), check)


def suite_pure_relation(n: int = 100, tol: float = 1e-10) -> SuiteResult:
    def check(seed):
        psi = random_pure(_spec_for(seed), seed)
        dense = _dense(psi).entries
        fast = advantage.commutation_matrix_pure(psi).entries
        cov = advantage.covariance_matrix(psi).entries
        dev = max(float(np.max(np.abs(dense - fast))), float(np.max(np.abs(dense - 2 * cov))))
        return dev, (f"deviation {dev:.3e}" if dev > tol else None)

    return _run("pure states: dense gammaC = 2 gamma = fast path", _seeds(n), check)


def _random_triple(seed: int):
    rng = np.random.default_rng(seed)
    state = _random_state(seed)
    spec = state.spec
    H = hamiltonian_from_direction(spec, rng.standard_normal(len(observable_set(spec))),
                                   scale=rng.uniform(0.5, 2.0))
    d = spec.total_dim
    A = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return state, H, 0.5 * (A + A.conj().T)


def suite_power_identity(n: int = 100, tol: float = 1e-8) -> SuiteResult:
    def check(seed):
        state, H, V = _random_triple(seed)
        report = advantage.power_bound(state, H, V)
        resid = advantage.power_identity_residual(state, H, V)
        # the identity must also hold with the dense commutation matrix
        dense_g = _dense(state).norm
        rel_g = abs(dense_g - report.gamma_c) / max(report.gamma_c, 1e-14)
        worst = max(resid, rel_g)
        if worst > tol:
            return worst, f"residual {resid:.3e}, Gamma_C mismatch {rel_g:.3e}"
        if abs(report.power) > report.bound * (1 + tol) + 1e-12:
            return worst, f"|P| = {abs(report.power):.6g} exceeds bound {report.bound:.6g}"
        return worst, None

    return _run("power identity and bound", _seeds(n), check)


def suite_covariance_dominates(n: int = 100, tol: float = 1e-10) -> SuiteResult:
    """Heisenberg-Robertson form: |P| <= 2 sqrt(||gamma|| g <dV^2>)."""
    def check(seed):
        state, H, V = _random_triple(seed)
        P = advantage.instantaneous_power(state, H, V)
        cb = advantage.covariance_bound(state, H, V)
        excess = abs(P) - cb
        return excess, (f"|P| - bound = {excess:.3e}" if excess > tol * max(1.0, cb) else None)

    return _run("covariance bound dominates the power", _seeds(n), check)


def w_table(n_max: int = 8) -> list[tuple[int, float, float, float]]:
    """Rows ``(N, Gamma_C(W_N), (3N - 2)/N, abs diff)`` for ``N = 2..n_max``."""
    rows = []
    for N in range(2, n_max + 1):
        g = advantage.gamma_c(w_state(N))
        f = (3 * N - 2) / N
        rows.append((N, g, f, abs(g - f)))
    return rows


def suite_w_table(n_max: int = 8, tol: float = 1e-9) -> SuiteResult:
    res = SuiteResult("W-state advantage (3N - 2)/N", n_max - 1)
    for N, g, f, diff in w_table(n_max):
        res.worst = max(res.worst, diff)
        if diff > tol:
            res.failures.append((N, f"Gamma_C = {g:.12g}, expected {f:.12g}"))
    return res


SUITES = (
    suite_psd,
    suite_upper,
    suite_separable,
    suite_local_unitary,
    suite_pure_relation,
    suite_power_identity,
    suite_covariance_dominates,
    suite_w_table,
)


def run_all() -> list[SuiteResult]:
    return [suite() for suite in SUITES]
