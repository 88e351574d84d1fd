"""Exception hierarchy shared across the package."""


class FormalMTError(Exception):
    """Base class for all errors raised by formalmt."""


class TagError(FormalMTError, ValueError):
    """Malformed ``[F]...[/F]`` annotation."""

    kind = "tag error"

    def __init__(self, offset: int, text: str = ""):
        self.offset = offset
        self.text = text
        super().__init__(f"{self.kind} at offset {offset}")


class UnbalancedTags(TagError):
    kind = "unbalanced formality tags"


class NestedTags(TagError):
    kind = "nested formality tags"


class EmptyPhrase(TagError):
    kind = "empty marked phrase"


class RowParseError(FormalMTError, ValueError):
    def __init__(self, row: int, column: str, cause: Exception):
        self.row = row
        self.column = column
        self.cause = cause
        super().__init__(f"row {row}, column {column!r}: {cause}")


class MissingColumn(FormalMTError, ValueError):
    def __init__(self, column: str):
        self.column = column
        super().__init__(f"missing required column {column!r}")


class LengthMismatch(FormalMTError, ValueError):
    def __init__(self, left: int, right: int, what: str = "inputs"):
        self.left = left
        self.right = right
        super().__init__(f"length mismatch between {what}: {left} != {right}")


class LineCountMismatch(LengthMismatch):
    def __init__(self, left: int, right: int):
        super().__init__(left, right, what="line-aligned files")


class NoMatchedSegments(FormalMTError):
    """No hypothesis was classified as formal or informal.

    The partially filled report is attached so callers can still show coverage.
    """

    def __init__(self, report):
        self.report = report
        super().__init__("no segment classified as formal or informal; M-Acc undefined")


class AllUndefined(FormalMTError, ValueError):
    pass


class InsufficientData(FormalMTError, ValueError):
    pass


class EmptyCorpus(FormalMTError, ValueError):
    pass


class InsufficientClass(FormalMTError, ValueError):
    def __init__(self, label, found: int, wanted: int):
        self.label = label
        self.found = found
        self.wanted = wanted
        super().__init__(f"only {found} {label} pairs available, {wanted} wanted")


class GenericTooSmall(FormalMTError, ValueError):
    def __init__(self, needed: int, available: int):
        self.needed = needed
        self.available = available
        super().__init__(f"generic bitext has {available} lines, {needed} needed")


class ConfigError(FormalMTError, ValueError):
    pass


class InvalidRegex(ConfigError):
    pass


class MissingGenderVariant(FormalMTError, KeyError):
    pass
