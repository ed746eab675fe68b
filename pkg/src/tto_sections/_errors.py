"""Exception hierarchy shared by all modules."""

from typing import Optional


class TTOSectionsError(Exception):
    """Base class for every error raised by this package."""


class DomainError(TTOSectionsError, ValueError):
    """Mathematically invalid input (zeros outside the disk, empty sets, ...)."""


class AliasingError(DomainError):
    """A Fourier coefficient window does not fit below the Nyquist index of its grid."""


class SpectralModeError(DomainError):
    """Eigenvalue extraction requested for a matrix that is not self-adjoint."""


class ResolutionError(TTOSectionsError):
    """Grid or coefficient-window refinement reached its cap without resolving the basis."""

    def __init__(self, message: str, *, max_modulus: float, cap: int) -> None:
        super().__init__(f"{message} (max |lambda| = {max_modulus!r}, cap = {cap})")
        self.max_modulus = max_modulus
        self.cap = cap


class ConfigError(TTOSectionsError, ValueError):
    """Experiment configuration failed validation."""

    def __init__(self, message: str, *, field: Optional[str] = None) -> None:
        super().__init__(f"{field}: {message}" if field else message)
        self.field = field
