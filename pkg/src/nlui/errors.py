"""Exception vocabulary shared across the engine.

Every error raised on a contract boundary lives here so callers can
catch by family (EngineError) or by exact condition.
"""


class EngineError(Exception):
    """Base class for all errors raised by this package."""


# -- manifest / annotation tree -------------------------------------------

class ManifestError(EngineError):
    """A manifest failed validation; ``path`` locates the offending node."""

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class MalformedManifest(ManifestError):
    pass


class DuplicateId(ManifestError):
    pass


class EmptyDescription(ManifestError):
    pass


class ParameterWithoutPrompt(ManifestError):
    pass


class UnknownNode(EngineError):
    pass


# -- text pipeline ----------------------------------------------------------

class ZeroVector(EngineError):
    """An operation received or produced a vector with no content."""


class EmptyUtterance(EngineError):
    pass


class RemoteEncoderUnavailable(EngineError):
    pass


# -- extraction -------------------------------------------------------------

class NoParametersExtracted(EngineError):
    """Every parameter of the classified application came back absent."""

    def __init__(self, app_id: str, score: float, confident: bool):
        self.app_id = app_id
        self.score = score
        self.confident = confident
        super().__init__(f"no parameters extracted for {app_id!r}")


class RemoteBackendUnavailable(EngineError):
    pass


class RemoteBackendMalformedResponse(EngineError):
    pass


# -- state store -------------------------------------------------------------

class UnknownApp(EngineError):
    pass


class UnknownParameter(EngineError):
    pass


class UnknownSession(EngineError):
    pass


class StaleSequence(EngineError):
    pass


# -- calculator ---------------------------------------------------------------

class ParseError(EngineError):
    pass


class DivisionByZero(EngineError):
    pass


# -- eval harness ---------------------------------------------------------------

class MalformedLine(EngineError):
    pass


class LengthMismatch(EngineError):
    pass
