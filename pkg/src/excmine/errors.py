class ExcmineError(Exception):
    """Base class for every data or model error raised by excmine."""


class ParseError(ExcmineError, ValueError):
    def __init__(self, line_no, reason=""):
        self.line_no = line_no
        self.reason = reason
        message = f"parse error at line {line_no}"
        if reason:
            message = f"{message}: {reason}"
        super().__init__(message)


class MissingTags(ExcmineError, ValueError):
    pass


class InvalidBio(ExcmineError, ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__(f"invalid BIO sequence, violations at {self.violations}")


class BadRatios(ExcmineError, ValueError):
    pass


class LengthMismatch(ExcmineError, ValueError):
    pass


class EmptyInput(ExcmineError, ValueError):
    pass


class DimMismatch(ExcmineError, ValueError):
    def __init__(self, line_no, expected=None, found=None):
        self.line_no = line_no
        super().__init__(f"line {line_no}: expected {expected} values, found {found}")


class NonNumeric(ExcmineError, ValueError):
    def __init__(self, line_no):
        self.line_no = line_no
        super().__init__(f"line {line_no}: non-numeric vector component")


class IndexOutOfRange(ExcmineError, IndexError):
    pass


class EmptySpan(ExcmineError, ValueError):
    pass


class SpanOutOfRange(ExcmineError, ValueError):
    pass


class InvalidGold(ExcmineError, ValueError):
    pass


class EmptyTrainSet(ExcmineError, ValueError):
    pass


class WidthMismatch(ExcmineError, ValueError):
    pass


class ModelFileError(ExcmineError):
    pass


class VersionMismatch(ModelFileError):
    pass


class ChecksumMismatch(ModelFileError):
    pass


class EmbeddingMismatch(ModelFileError):
    pass
