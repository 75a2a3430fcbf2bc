"""Exception hierarchy shared by all qbattery modules."""


class QBatteryError(ValueError):
    """Base class for every error raised by this package."""


class InvalidOperator(QBatteryError):
    """Matrix is not square or not Hermitian within tolerance."""


class NotPositiveSemidefinite(QBatteryError):
    """Eigenvalue below the round-off clamp window."""


class InvalidPartition(QBatteryError):
    """Cell subset is empty, out of range, repeated, or not proper."""


class DimensionMismatch(QBatteryError):
    pass


class InvalidParameter(QBatteryError):
    pass


class ZeroHamiltonian(QBatteryError):
    pass


class DegenerateDriving(QBatteryError):
    """Driving Hamiltonian has (numerically) zero variance in the state."""


class UnchargeableState(QBatteryError):
    """The battery Hamiltonian commutes with the square root of the state."""


class IntegrationUnstable(QBatteryError):
    """Integrated density matrix left the positive cone; reduce the step."""
