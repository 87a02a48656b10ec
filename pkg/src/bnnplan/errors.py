"""Exception types shared across the pipeline."""


class StructuralError(ValueError):
    """Shapes, lengths or index maps do not line up."""


class ParameterError(ValueError):
    """A numeric parameter is outside its admissible range."""


class ConfigurationError(ValueError):
    """An instance cannot be built from the requested configuration."""


class CapacityError(RuntimeError):
    """An exhaustive routine was asked to enumerate more than its guard allows."""


class UnsatisfiableError(RuntimeError):
    """Encoding a constraint would require storing the empty clause."""


class ManifestError(ValueError):
    """An instance manifest is malformed; ``path`` locates the offending node."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
