"""Exception types raised across the package.

Every error the library raises deliberately derives from QeacError, so
callers (and the service layer) can catch one base class and map it to a
diagnostic name.
"""


class QeacError(Exception):
    """Base class for all errors raised by this package."""


class NonHermitianError(QeacError):
    """Matrix handed to a Hermitian-only routine is not Hermitian."""


class InvalidStepError(QeacError):
    """Integrator step is non-positive or does not divide the output grid."""


class SiteOutOfRangeError(QeacError):
    """Qubit site index outside 1..L."""


class TooManyQubitsError(QeacError):
    """Requested register size exceeds the dense-operator guard."""


class UnsupportedLError(QeacError):
    """No explicit reference codewords exist for this register size."""


class DimensionMismatchError(QeacError):
    """Operand dimensions are inconsistent."""


class TooManyLogicalAmplitudesError(QeacError):
    """More logical amplitudes than dark-subspace dimensions."""


class NotNormalizedError(QeacError):
    """Input amplitudes are not unit-norm."""


class InvalidSitesError(QeacError):
    """Gate control/target sites are invalid (equal or out of range)."""


class NotPSDError(QeacError):
    """Damping matrix has a structurally negative eigenvalue."""


class SingularSeparationError(QeacError):
    """Qubit separation too small for the requested Lamb-shift kernel."""


class TraceDriftError(QeacError):
    """Density-matrix trace drifted beyond tolerance (step too large)."""


class StepTooLargeError(QeacError):
    """Per-step jump probability exceeded the first-order validity bound."""


class InternalMismatchError(QeacError):
    """Two redundant computations of the same quantity disagree (bug guard)."""
