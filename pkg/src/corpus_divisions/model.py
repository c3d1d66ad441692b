"""Core domain types: documents, manifests and division assignments."""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping

from .errors import DuplicateName, InvalidManifest

DEV = "DEV"
TRAIN = "TRAIN"
TEST = "TEST"
CANONICAL_LABELS = (DEV, TRAIN, TEST)

_FORBIDDEN_NAME_CHARS = ("\t", "\n", "\r")


def normalize_label(label: str) -> str:
    """Canonicalize a division label.

    DEV/TRAIN/TEST match case-insensitively and are returned upper-case; any
    other label is kept verbatim. Genre-namespaced labels (``NW:dev``) have
    only the part after the last colon normalized.
    """
    prefix, sep, base = label.rpartition(":")
    if base.upper() in CANONICAL_LABELS:
        base = base.upper()
    return prefix + sep + base


def base_label(label: str) -> str:
    """Label with any ``GENRE:`` namespace stripped."""
    return normalize_label(label).rpartition(":")[2]


def name_key(name: str) -> bytes:
    """Sort key: bytewise order of the UTF-8 encoded name."""
    return name.encode("utf-8")


@dataclass(frozen=True)
class DocumentRecord:
    name: str
    word_count: int
    genre: str | None = None


@dataclass(frozen=True)
class CorpusManifest:
    corpus_id: str
    documents: tuple[DocumentRecord, ...] = ()

    def __post_init__(self):
        if not isinstance(self.documents, tuple):
            object.__setattr__(self, "documents", tuple(self.documents))

    @property
    def total_word_count(self) -> int:
        return sum(d.word_count for d in self.documents)

    @property
    def names(self) -> list[str]:
        return [d.name for d in self.documents]

    def __len__(self) -> int:
        return len(self.documents)

    def word_counts(self) -> dict[str, int]:
        return {d.name: d.word_count for d in self.documents}

    def subset(self, corpus_id: str, names: Iterable[str]) -> CorpusManifest:
        keep = set(names)
        return CorpusManifest(corpus_id, tuple(d for d in self.documents if d.name in keep))


def _check_unique(documents: Iterable[DocumentRecord]) -> None:
    seen: set[str] = set()
    for doc in documents:
        if doc.name in seen:
            raise DuplicateName(doc.name)
        seen.add(doc.name)


def sort_documents(manifest: CorpusManifest) -> list[DocumentRecord]:
    """Return the manifest's documents in ascending bytewise name order.

    Raises:
        DuplicateName: if two documents share a name.
    """
    _check_unique(manifest.documents)
    return sorted(manifest.documents, key=lambda d: name_key(d.name))


def validate_manifest(manifest: CorpusManifest) -> list[str]:
    """List every invariant violation in ``manifest``; empty means valid."""
    violations = []
    seen: set[str] = set()
    reported: set[str] = set()
    for i, doc in enumerate(manifest.documents):
        where = f"document #{i + 1} ({doc.name!r})"
        if not isinstance(doc.name, str) or doc.name == "":
            violations.append(f"{where}: empty name")
        elif any(c in doc.name for c in _FORBIDDEN_NAME_CHARS):
            violations.append(f"{where}: name contains a tab or newline")
        if isinstance(doc.word_count, bool) or not isinstance(doc.word_count, int):
            violations.append(f"{where}: word_count is not an integer")
        elif doc.word_count < 0:
            violations.append(f"{where}: negative word_count {doc.word_count}")
        if doc.genre is not None and (
            doc.genre == "" or any(c in doc.genre for c in _FORBIDDEN_NAME_CHARS)
        ):
            violations.append(f"{where}: genre must be non-empty without tabs or newlines")
        if doc.name in seen and doc.name not in reported:
            violations.append(f"duplicate name {doc.name!r}")
            reported.add(doc.name)
        seen.add(doc.name)
    return violations


def require_valid(manifest: CorpusManifest) -> None:
    """Raise on the first problem: DuplicateName, else InvalidManifest."""
    _check_unique(manifest.documents)
    violations = validate_manifest(manifest)
    if violations:
        raise InvalidManifest(violations)


@dataclass(frozen=True)
class LabelStats:
    doc_count: int
    word_count: int | None


@dataclass(frozen=True)
class DivisionAssignment:
    """A total map from document name to division label.

    ``stats`` word counts are ``None`` when the assignment was built without a
    manifest (for example from an externally supplied file list).
    """

    corpus_id: str
    entries: Mapping[str, str]
    stats: Mapping[str, LabelStats] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "entries", MappingProxyType(dict(self.entries)))
        object.__setattr__(self, "stats", MappingProxyType(dict(self.stats)))

    @classmethod
    def build(
        cls,
        entries: Mapping[str, str],
        manifest: CorpusManifest | None = None,
        corpus_id: str | None = None,
    ) -> DivisionAssignment:
        """Normalize labels, check the partition against ``manifest`` and
        compute per-label stats."""
        normalized = {name: normalize_label(label) for name, label in entries.items()}
        counts = None
        if manifest is not None:
            counts = manifest.word_counts()
            if len(counts) != len(manifest.documents):
                _check_unique(manifest.documents)
            missing = sorted(set(counts) - set(normalized), key=name_key)
            extra = sorted(set(normalized) - set(counts), key=name_key)
            problems = []
            if missing:
                problems.append(f"unassigned documents: {missing[:5]}")
            if extra:
                problems.append(f"names outside the manifest: {extra[:5]}")
            if problems:
                raise InvalidManifest(problems)
            if corpus_id is None:
                corpus_id = manifest.corpus_id
        stats = compute_stats(normalized, counts)
        return cls(corpus_id or "", normalized, stats)

    def labels(self) -> list[str]:
        """Labels ordered by their first document in sorted-name order."""
        out: list[str] = []
        for name in self.sorted_names():
            label = self.entries[name]
            if label not in out:
                out.append(label)
        return out

    def sorted_names(self) -> list[str]:
        return sorted(self.entries, key=name_key)

    def names_with(self, label: str) -> list[str]:
        label = normalize_label(label)
        return [n for n in self.sorted_names() if self.entries[n] == label]


def compute_stats(
    entries: Mapping[str, str], word_counts: Mapping[str, int] | None = None
) -> dict[str, LabelStats]:
    docs: dict[str, int] = {}
    words: dict[str, int] = {}
    for name in sorted(entries, key=name_key):
        label = entries[name]
        docs[label] = docs.get(label, 0) + 1
        if word_counts is not None:
            words[label] = words.get(label, 0) + word_counts[name]
    return {
        label: LabelStats(n, words[label] if word_counts is not None else None)
        for label, n in docs.items()
    }
