"""Exception hierarchy for the engine."""


class EngineError(Exception):
    """Base class for all engine errors."""


class AmbientMismatchError(EngineError):
    """Two elements from different phase spaces were combined."""


class DegreeError(EngineError):
    """An element has the wrong (bi)degree for the requested operation."""


class PreconditionError(EngineError):
    """A documented operation precondition does not hold."""


class UnsupportedModeError(EngineError):
    """The operation is only available in constant-coefficient mode."""


class InstanceError(EngineError):
    """An instance file is malformed; message carries field context."""
