"""Exception types raised across the package."""


class DomainError(ValueError):
    """Special function evaluated outside its domain."""


class GeometryError(ValueError):
    """Degenerate or invalid measurement / sampling geometry."""


class RetardedTimeError(ValueError):
    """A retarded time |x - y| falls outside the recorded time axis."""

    def __init__(self, sensor, node, r, window):
        self.sensor = sensor
        self.node = node
        super().__init__(
            f"retarded time {r:.6g} for sensor {sensor}, node {node} "
            f"outside recorded window [{window[0]:.6g}, {window[1]:.6g}]"
        )


class SpectrumError(ValueError):
    """A wavenumber required by a far-field indicator is not reliably resolved."""


class ConfigError(ValueError):
    """Invalid experiment configuration."""


class GridFormatError(ValueError):
    """Malformed grid text file."""


class StageError(RuntimeError):
    """Pipeline failure, labelled with the stage it occurred in."""

    def __init__(self, stage, cause):
        self.stage = stage
        super().__init__(f"[{stage}] {cause}")
