class FramedCurvesError(Exception):
    """Base class for every error raised by the library."""


class SurfaceError(FramedCurvesError):
    pass


class CurveError(FramedCurvesError):
    pass


class FramingError(FramedCurvesError):
    pass


class WitnessError(FramedCurvesError):
    pass


class GraphError(FramedCurvesError):
    pass


class SurgeryError(FramedCurvesError):
    pass


class EnumerationBoundError(FramedCurvesError):
    """A bounded search ran out of budget before finding what it looked for."""

    def __init__(self, message: str, bound: int):
        super().__init__(f"{message} (bound={bound})")
        self.bound = bound


class ArtifactError(FramedCurvesError):
    """An artifact failed to parse or one of its embedded checks failed."""

    def __init__(self, message: str, clause: str = "parse", exit_code: int = 2):
        super().__init__(message)
        self.clause = clause
        self.exit_code = exit_code
