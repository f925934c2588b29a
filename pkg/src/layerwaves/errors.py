"""Exception types shared across the solver modules."""


class LayerError(Exception):
    """Base class for all solver errors (lets the CLI map them to exit 1)."""


class ConfigError(LayerError):
    """Interface velocities do not form a valid equal-width configuration."""


class DegenerateSpeedError(LayerError):
    """Requested speed coincides with an interface velocity."""


class ResonantHarmonicError(LayerError):
    """The doubled mode is itself singular; the quadratic correction is ill posed."""


class CorrectionFailedError(LayerError):
    """Newton correction did not converge."""


class CannotStartError(LayerError):
    """Branch continuation failed on the very first corrected point."""


class NoAdmissibleModeError(LayerError):
    """Scan exhausted without finding a mode with four simple real speeds."""


class DivergedError(LayerError):
    """Time evolution produced non-finite coefficients."""
