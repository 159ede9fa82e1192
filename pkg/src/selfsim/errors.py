"""Exception hierarchy shared by all selfsim modules."""


class SelfSimError(Exception):
    """Base class for every error raised by selfsim."""


class InvalidParams(SelfSimError, ValueError):
    pass


class IndexOutOfRange(SelfSimError, IndexError):
    pass


class UnsupportedOrientation(SelfSimError):
    """Continuity criteria are only available for all-zero orientation flags."""


class NotContinuous(SelfSimError):
    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = tuple(violations)


class CapacityExceeded(SelfSimError):
    pass


class AllCellsFlat(SelfSimError):
    """Every measured oscillation is below the flatness threshold."""


class UnsupportedPreset(SelfSimError, ValueError):
    pass


class ParseError(SelfSimError, ValueError):
    pass
