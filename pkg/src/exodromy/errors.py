"""Exception types shared across the package."""


class ExodromyError(Exception):
    pass


class ValidationError(ExodromyError):
    """Raised when a structure fails its validator; ``report`` lists the problems."""

    def __init__(self, report, what="structure"):
        self.report = list(report)
        head = "%s failed validation" % what
        if self.report:
            head += ": " + "; ".join(str(r) for r in self.report[:5])
            if len(self.report) > 5:
                head += " (+%d more)" % (len(self.report) - 5)
        super().__init__(head)


class CapExceeded(ExodromyError):
    pass


class NotT0(ExodromyError):
    pass


class UnknownPoint(ExodromyError, KeyError):
    pass


class UnknownObject(ExodromyError, KeyError):
    pass


class NotComparable(ExodromyError):
    pass


class NotASieve(ExodromyError):
    pass


class NotIsofibration(ExodromyError):
    pass


class NotBaseCompatible(ExodromyError):
    pass


class HeightExceeded(ExodromyError):
    pass


class DegreeOutOfRange(ExodromyError):
    pass


class AssociativityFailure(ValidationError):
    def __init__(self, report):
        super().__init__(report, what="reassembled composition")


class ParseError(ExodromyError):
    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = "%s (at %s)" % (message, position)
        super().__init__(message)


class UnsupportedKind(ExodromyError):
    pass
