"""Overlap and contamination analysis between division schemes.

Schemes are compared either as half-open index intervals over one sorted
document list, or as explicit name sets when a division cannot be written as
ranges (random selections supplied as file lists).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import MismatchedCorpusSize, UniverseMismatch, UnknownLabel
from .model import CorpusManifest, DivisionAssignment, base_label, name_key, normalize_label

TRAIN_LABELS = frozenset({"TRAIN"})
EVAL_LABELS = frozenset({"DEV", "TEST", "DEVTEST"})


@dataclass(frozen=True)
class IntervalDivision:
    label: str
    start: int
    end: int

    def __post_init__(self):
        if not 0 <= self.start < self.end:
            raise ValueError(f"need 0 <= start < end, got [{self.start}, {self.end})")
        object.__setattr__(self, "label", normalize_label(self.label))

    def __len__(self) -> int:
        return self.end - self.start


def intersect_len(a: IntervalDivision, b: IntervalDivision) -> int:
    return max(0, min(a.end, b.end) - max(a.start, b.start))


@dataclass(frozen=True)
class PairOverlap:
    a: str
    b: str
    docs: int
    words: int | None = None


@dataclass(frozen=True)
class Contamination:
    train: str
    test: str
    docs: int


@dataclass(frozen=True)
class OverlapReport:
    corpus_size: int
    pairs: tuple[PairOverlap, ...]
    contamination: tuple[Contamination, ...] = ()
    name_a: str = "A"
    name_b: str = "B"

    def shared(self, a: str, b: str) -> int:
        a, b = normalize_label(a), normalize_label(b)
        for p in self.pairs:
            if p.a == a and p.b == b:
                return p.docs
        raise UnknownLabel(f"{a}/{b}")

    def to_dict(self) -> dict:
        pairs = []
        for p in self.pairs:
            row = {"a": p.a, "b": p.b, "docs": p.docs}
            if p.words is not None:
                row["words"] = p.words
            pairs.append(row)
        return {
            "corpus_size": self.corpus_size,
            "pairs": pairs,
            "contamination": [
                {"train": c.train, "test": c.test, "docs": c.docs} for c in self.contamination
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    def to_text(self) -> str:
        with_words = any(p.words is not None for p in self.pairs)
        header = [self.name_a, self.name_b, "docs"] + (["words"] if with_words else [])
        rows = [header]
        for p in self.pairs:
            row = [p.a, p.b, str(p.docs)]
            if with_words:
                row.append("" if p.words is None else str(p.words))
            rows.append(row)
        widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
        lines = [f"corpus_size {self.corpus_size}"]
        for r in rows:
            cells = [c.ljust(w) if i < 2 else c.rjust(w) for i, (c, w) in enumerate(zip(r, widths))]
            lines.append("  ".join(cells).rstrip())
        if self.contamination:
            lines.append("contamination (train documents inside an evaluation division):")
            for c in self.contamination:
                lines.append(f"  {c.train} x {c.test}: {c.docs} docs")
        else:
            lines.append("contamination: none")
        return "\n".join(lines) + "\n"


def _labels_in_order(divisions: Iterable[IntervalDivision]) -> list[str]:
    out: list[str] = []
    for d in sorted(divisions, key=lambda d: d.start):
        if d.label not in out:
            out.append(d.label)
    return out


def _corpus_size(divisions: Sequence[IntervalDivision]) -> int:
    """Size N of the [0, N) range the divisions tile; ValueError if they don't."""
    ordered = sorted(divisions, key=lambda d: d.start)
    pos = 0
    for d in ordered:
        if d.start != pos:
            raise ValueError(f"divisions do not tile a prefix range: gap or overlap at {pos}")
        pos = d.end
    return pos


def _contamination(
    shared: Mapping[tuple[str, str], int], name_a: str, name_b: str
) -> list[Contamination]:
    out = []
    for (a, b), n in shared.items():
        if n and base_label(a) in TRAIN_LABELS and base_label(b) in EVAL_LABELS:
            out.append(Contamination(f"{name_a}.{a}", f"{name_b}.{b}", n))
    for (a, b), n in shared.items():
        if n and base_label(b) in TRAIN_LABELS and base_label(a) in EVAL_LABELS:
            out.append(Contamination(f"{name_b}.{b}", f"{name_a}.{a}", n))
    return out


def overlap_intervals(
    scheme_a: Sequence[IntervalDivision],
    scheme_b: Sequence[IntervalDivision],
    name_a: str = "A",
    name_b: str = "B",
) -> OverlapReport:
    """Shared document counts for every (label of A, label of B) pair.

    Both schemes must tile the same ``[0, N)``.
    """
    size_a, size_b = _corpus_size(scheme_a), _corpus_size(scheme_b)
    if size_a != size_b:
        raise MismatchedCorpusSize(size_a, size_b)
    shared: dict[tuple[str, str], int] = {}
    for la in _labels_in_order(scheme_a):
        for lb in _labels_in_order(scheme_b):
            shared[la, lb] = sum(
                intersect_len(x, y)
                for x in scheme_a
                if x.label == la
                for y in scheme_b
                if y.label == lb
            )
    pairs = tuple(PairOverlap(a, b, n) for (a, b), n in shared.items())
    return OverlapReport(size_a, pairs, tuple(_contamination(shared, name_a, name_b)), name_a, name_b)


@dataclass(frozen=True)
class ContaminationResult:
    safe: bool
    shared: int


def contamination_check(
    train_of: Sequence[IntervalDivision],
    train_label: str,
    test_of: Sequence[IntervalDivision],
    test_label: str,
) -> ContaminationResult:
    """Is the ``train_label`` set of one scheme disjoint from the ``test_label``
    set of another?"""
    size_a, size_b = _corpus_size(train_of), _corpus_size(test_of)
    if size_a != size_b:
        raise MismatchedCorpusSize(size_a, size_b)
    train_label, test_label = normalize_label(train_label), normalize_label(test_label)
    train = [d for d in train_of if d.label == train_label]
    test = [d for d in test_of if d.label == test_label]
    if not train:
        raise UnknownLabel(train_label)
    if not test:
        raise UnknownLabel(test_label)
    shared = sum(intersect_len(x, y) for x in train for y in test)
    return ContaminationResult(shared == 0, shared)


def compare_assignments(
    asg_a: DivisionAssignment,
    asg_b: DivisionAssignment,
    manifest: CorpusManifest | None = None,
    name_a: str = "A",
    name_b: str = "B",
) -> OverlapReport:
    """Name-set overlap between two assignments over the same documents.

    Word totals per pair are included when ``manifest`` is given.
    """
    names_a, names_b = set(asg_a.entries), set(asg_b.entries)
    if names_a != names_b:
        raise UniverseMismatch(
            sorted(names_a - names_b, key=name_key), sorted(names_b - names_a, key=name_key)
        )
    counts = manifest.word_counts() if manifest is not None else None
    labels_a, labels_b = asg_a.labels(), asg_b.labels()
    docs: dict[tuple[str, str], int] = {(a, b): 0 for a in labels_a for b in labels_b}
    words: dict[tuple[str, str], int] = dict.fromkeys(docs, 0)
    for name, la in asg_a.entries.items():
        key = (la, asg_b.entries[name])
        docs[key] += 1
        if counts is not None:
            words[key] += counts[name]
    pairs = tuple(
        PairOverlap(a, b, n, words[a, b] if counts is not None else None)
        for (a, b), n in docs.items()
    )
    return OverlapReport(len(names_a), pairs, tuple(_contamination(docs, name_a, name_b)), name_a, name_b)


def intervals_to_assignment(
    divisions: Sequence[IntervalDivision], sorted_names: Sequence[str], corpus_id: str = ""
) -> DivisionAssignment:
    """Materialize index intervals over ``sorted_names`` as a name assignment."""
    size = _corpus_size(divisions)
    if size != len(sorted_names):
        raise MismatchedCorpusSize(size, len(sorted_names))
    entries = {}
    for d in divisions:
        for name in sorted_names[d.start : d.end]:
            entries[name] = d.label
    return DivisionAssignment.build(entries, corpus_id=corpus_id)


@dataclass(frozen=True)
class SupersetResult:
    ok: bool
    missing: tuple[str, ...] = field(default_factory=tuple)

    def __bool__(self) -> bool:
        return self.ok


def test_superset_check(new_test: Iterable[str], old_test: Iterable[str]) -> SupersetResult:
    """True iff every old TEST document is still in the new TEST set.

    Members may be document names or index positions from interval schemes.
    """
    new = set(new_test)
    missing = [n for n in set(old_test) if n not in new]
    missing.sort(key=lambda n: name_key(n) if isinstance(n, str) else n)
    return SupersetResult(not missing, tuple(missing))


# keep pytest from collecting the function above when it is imported into a test module
test_superset_check.__test__ = False


def interval_positions(divisions: Sequence[IntervalDivision], label: str) -> set[int]:
    """Index positions covered by ``label``, for set checks on interval schemes."""
    label = normalize_label(label)
    return {i for d in divisions if d.label == label for i in range(d.start, d.end)}
