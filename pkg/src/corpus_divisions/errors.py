"""Exception types raised across the package.

Every error derives from :class:`CorpusError` (itself a ``ValueError``) so
callers can catch the whole family at once; the CLI maps them to exit codes.
"""

from __future__ import annotations


class CorpusError(ValueError):
    """Base class for all package errors."""


class DuplicateName(CorpusError):
    def __init__(self, name: str):
        super().__init__(f"duplicate document name: {name!r}")
        self.name = name


class InvalidManifest(CorpusError):
    def __init__(self, violations: list[str]):
        super().__init__("invalid manifest: " + "; ".join(violations))
        self.violations = violations


class MalformedLine(CorpusError):
    def __init__(self, line_no: int, reason: str = ""):
        msg = f"malformed line {line_no}"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)
        self.line_no = line_no
        self.reason = reason


class TreeSyntaxError(CorpusError):
    """A bracketed tree could not be parsed; ``position`` is a character offset."""

    def __init__(self, position: int, reason: str):
        super().__init__(f"{reason} at offset {position}")
        self.position = position
        self.reason = reason


class UnbalancedParens(TreeSyntaxError):
    def __init__(self, position: int):
        super().__init__(position, "unbalanced parentheses")


class DocumentError(CorpusError):
    """Wraps a counting error with the name of the document that caused it."""

    def __init__(self, document: str, cause: Exception):
        super().__init__(f"{document}: {cause}")
        self.document = document
        self.cause = cause


class EmptyCorpus(CorpusError):
    def __init__(self, corpus_id: str = ""):
        super().__init__(f"corpus {corpus_id!r} has a total word count of 0")
        self.corpus_id = corpus_id


class DivisionInfeasible(CorpusError):
    def __init__(self, reason: str, genre: str | None = None):
        prefix = f"[{genre}] " if genre is not None else ""
        super().__init__(prefix + reason)
        self.reason = reason
        self.genre = genre


class MissingGenre(CorpusError):
    def __init__(self, name: str):
        super().__init__(f"document {name!r} has no genre tag")
        self.name = name


class InsufficientTrain(CorpusError):
    pass


class LabelClash(CorpusError):
    def __init__(self, label: str):
        super().__init__(f"label {label!r} already in use")
        self.label = label


class UnknownScheme(CorpusError):
    def __init__(self, scheme: str):
        super().__init__(f"unknown scheme: {scheme!r}")
        self.scheme = scheme


class UnknownTreebank(CorpusError):
    def __init__(self, treebank: str, scheme: str | None = None):
        where = f" in scheme {scheme!r}" if scheme else ""
        super().__init__(f"unknown treebank: {treebank!r}{where}")
        self.treebank = treebank
        self.scheme = scheme


class IncompleteScheme(CorpusError):
    pass


class BoundaryNotFound(CorpusError):
    def __init__(self, doc: str):
        super().__init__(f"boundary document not in manifest: {doc!r}")
        self.doc = doc


class RangesOverlapOrGap(CorpusError):
    pass


class CountMismatch(CorpusError):
    def __init__(self, label: str, expected: int, actual: int, unit: str = "docs"):
        super().__init__(
            f"{label}: expected {expected} {unit}, found {actual}"
        )
        self.label = label
        self.expected = expected
        self.actual = actual
        self.unit = unit


class MismatchedCorpusSize(CorpusError):
    def __init__(self, size_a: int, size_b: int):
        super().__init__(f"schemes cover different corpus sizes: {size_a} vs {size_b}")
        self.size_a = size_a
        self.size_b = size_b


class UnknownLabel(CorpusError):
    def __init__(self, label: str):
        super().__init__(f"no division labelled {label!r}")
        self.label = label


class UniverseMismatch(CorpusError):
    def __init__(self, only_a: list[str], only_b: list[str]):
        shown = (only_a + only_b)[:10]
        super().__init__(
            f"assignments cover different documents "
            f"({len(only_a)} only in A, {len(only_b)} only in B): {shown}"
        )
        self.only_a = only_a
        self.only_b = only_b
