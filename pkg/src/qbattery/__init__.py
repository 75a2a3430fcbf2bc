"""Quantum-state charging advantage of quantum batteries.

The central quantity is the commutation matrix of a battery state over an
orthonormal local observable set; its largest eigenvalue ``Gamma_C``
separates the state-dependent part of the charging-power bound from the
energy gap and the driving speed limit.
"""

from .errors import (
    DegenerateDriving,
    DimensionMismatch,
    IntegrationUnstable,
    InvalidOperator,
    InvalidParameter,
    InvalidPartition,
    NotPositiveSemidefinite,
    QBatteryError,
    UnchargeableState,
    ZeroHamiltonian,
)
from .linalg import DensityMatrix, HilbertSpec, Ket
from .observables import battery_hamiltonian, hamiltonian_from_direction, observable_set
from .advantage import (
    angles,
    commutation_matrix,
    commutation_matrix_pure,
    covariance_matrix,
    gamma_c,
    instantaneous_power,
    kappa,
    normalize_driving,
    optimal_driving,
    power_bound,
    power_identity_residual,
)
from .entanglement import entanglement_entropy, negativity, two_uniformity_deficit

__version__ = "0.1.0"
