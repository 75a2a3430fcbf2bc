"""Entanglement diagnostics: negativity, entanglement entropy, 2-uniformity."""

from __future__ import annotations

from itertools import combinations
from typing import Iterable

import numpy as np

from .linalg import Ket, _check_subset, as_density, partial_trace, partial_transpose, trace_norm

ENTROPY_FLOOR = 1e-14


def negativity(rho, cut: Iterable[int] = (0,)) -> float:
    """``(||rho^T_A||_tr - 1) / 2`` for the bipartition ``cut`` vs the rest.

    The default cut is cell 0 against everything else.
    """
    rho = as_density(rho)
    return (trace_norm(partial_transpose(rho, cut)) - 1.0) / 2.0


def entanglement_entropy(psi: Ket, subset: Iterable[int]) -> float:
    """Von Neumann entropy (nats) of the reduced state on ``subset``."""
    cells = _check_subset(subset, psi.spec.n_cells, proper=True)
    red = partial_trace(psi.density(), cells).matrix
    w = np.linalg.eigvalsh(0.5 * (red + red.conj().T))
    w = w[w > ENTROPY_FLOOR]
    return float(-np.sum(w * np.log(w)))


def two_uniformity_deficit(psi: Ket) -> float:
    """Largest operator-norm distance of a 1- or 2-cell marginal from ``I/d_A``."""
    rho = psi.density()
    n = psi.spec.n_cells
    worst = 0.0
    for size in (1, 2):
        if size > n:
            break
        for cells in combinations(range(n), size):
            red = partial_trace(rho, cells)
            diff = red.matrix - np.eye(red.dim) / red.dim
            diff = 0.5 * (diff + diff.conj().T)
            worst = max(worst, float(np.max(np.abs(np.linalg.eigvalsh(diff)))))
    return worst
