"""Exception hierarchy shared by all cfkit modules."""


class CfkitError(Exception):
    """Base class for all library errors."""


class ConfigError(CfkitError):
    """Invalid configuration or arguments (maps to CLI exit code 2)."""


class DuplicateRatingError(CfkitError):
    def __init__(self, user, item):
        self.user = user
        self.item = item
        super().__init__(f"duplicate rating for (user={user!r}, item={item!r})")


class UnknownEntityError(CfkitError):
    def __init__(self, axis, token):
        self.axis = axis
        self.token = token
        super().__init__(f"unknown {axis} {token!r}")


class EmptyScopeError(CfkitError):
    """A mean/model was requested over an empty rating set."""


class ParseError(CfkitError):
    """Base class for rating-file parse failures; carries the 1-based line number."""

    def __init__(self, line_no, message):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class MalformedLineError(ParseError):
    pass


class RatingValueError(ParseError):
    def __init__(self, line_no, text):
        self.text = text
        super().__init__(line_no, f"invalid rating value {text!r}")


class ModelFormatError(CfkitError):
    """Model file is missing, malformed, or has an unsupported version."""


class TrainingDivergedError(CfkitError):
    def __init__(self, epoch):
        self.epoch = epoch
        super().__init__(f"training diverged at epoch {epoch}: non-finite parameter")


class EmptyEvaluationError(CfkitError):
    """Evaluation was requested over an empty test sequence."""
