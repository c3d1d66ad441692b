"""Reference registry of published treebank divisions.

Rows are stored exactly as printed. Only document counts and boundary names
are known, so a registry row can be turned into index intervals (for overlap
arithmetic) or resolved against a full manifest supplied by the user.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import _tables
from .compat import IntervalDivision
from .errors import (
    BoundaryNotFound,
    CountMismatch,
    IncompleteScheme,
    RangesOverlapOrGap,
    UnknownScheme,
    UnknownTreebank,
)
from .model import (
    CorpusManifest,
    DivisionAssignment,
    name_key,
    normalize_label,
    require_valid,
    sort_documents,
)

SCHEMES = ("10-80-10", "zitouni", "mada")

# Schemes known by name that have no range rows: their DEVTEST was drawn at
# random, so they can only be compared through explicit file lists.
UNRANGED_SCHEMES = {
    "jhu-stanford": (
        "ATB1+ATB2+ATB3 combined; TEST taken from the end of each sorted list, "
        "DEVTEST chosen at random. Not expressible as document ranges; compare "
        "it with an externally supplied file list (compare --assignment-a)."
    ),
}

_CATALOG_RE = re.compile(r"LDC\d{4}[A-Z]\d+")


@dataclass(frozen=True)
class ReferenceDivision:
    scheme: str
    treebank: str
    label: str
    n_docs: int
    n_words: int
    first_doc: str
    last_doc: str

    def as_tsv(self) -> str:
        return "\t".join(
            [self.scheme, self.treebank, self.label, str(self.n_docs), str(self.n_words),
             self.first_doc, self.last_doc]
        )


@dataclass(frozen=True)
class TreebankMeta:
    treebank: str
    version: str
    ldc_catalog: str


REFERENCE_ROWS: tuple[ReferenceDivision, ...] = tuple(
    ReferenceDivision(*row) for row in _tables.DIVISION_ROWS
)
TREEBANK_META: tuple[TreebankMeta, ...] = tuple(TreebankMeta(*row) for row in _tables.TREEBANK_META)


def _canonical_scheme(scheme: str) -> str:
    key = scheme.strip().lower()
    if key in SCHEMES or key in UNRANGED_SCHEMES:
        return key
    raise UnknownScheme(scheme)


def treebanks(scheme: str) -> list[str]:
    scheme = _canonical_scheme(scheme)
    out: list[str] = []
    for row in REFERENCE_ROWS:
        if row.scheme == scheme and row.treebank not in out:
            out.append(row.treebank)
    return out


def list_reference(scheme: str, treebank: str | None = None) -> list[ReferenceDivision]:
    """Registry rows for ``scheme``, optionally restricted to one treebank.

    Matching is case-insensitive for both selectors. Schemes without range
    rows (``jhu-stanford``) return an empty list.
    """
    scheme = _canonical_scheme(scheme)
    rows = [r for r in REFERENCE_ROWS if r.scheme == scheme]
    if treebank is None:
        return rows
    rows = [r for r in rows if r.treebank.lower() == treebank.strip().lower()]
    if not rows:
        raise UnknownTreebank(treebank, scheme)
    return rows


def treebank_meta(treebank: str) -> TreebankMeta:
    """Version and catalog data; sub-treebanks such as ``ATB6/NW`` share their parent's."""
    base = treebank.split("/")[0].lower()
    for meta in TREEBANK_META:
        if meta.treebank.lower() == base:
            return meta
    raise UnknownTreebank(treebank)


def _check_one_scheme(rows: Sequence[ReferenceDivision]) -> None:
    if not rows:
        raise IncompleteScheme("no rows given")
    keys = {(r.scheme, r.treebank) for r in rows}
    if len(keys) != 1:
        raise IncompleteScheme(f"rows mix several scheme/treebank pairs: {sorted(keys)}")
    labels = [normalize_label(r.label) for r in rows]
    if len(set(labels)) != len(labels):
        raise IncompleteScheme(f"repeated labels: {labels}")


def to_intervals(rows: Sequence[ReferenceDivision]) -> list[IntervalDivision]:
    """Half-open index intervals from cumulative document counts.

    Raises:
        IncompleteScheme: rows span several schemes/treebanks, are out of
            sorted-range order, or have non-positive document counts.
    """
    _check_one_scheme(rows)
    out = []
    pos = 0
    prev_last = None
    for row in rows:
        if row.n_docs <= 0:
            raise IncompleteScheme(f"{row.label} has {row.n_docs} documents")
        if name_key(row.first_doc) > name_key(row.last_doc):
            raise IncompleteScheme(f"{row.label} range is reversed")
        if prev_last is not None and name_key(row.first_doc) <= name_key(prev_last):
            raise IncompleteScheme(f"{row.label} does not start after the previous range")
        out.append(IntervalDivision(row.label, pos, pos + row.n_docs))
        pos += row.n_docs
        prev_last = row.last_doc
    return out


def scheme_intervals(scheme: str, treebank: str) -> list[IntervalDivision]:
    return to_intervals(list_reference(scheme, treebank))


def resolve_assignment(
    manifest: CorpusManifest, rows: Sequence[ReferenceDivision]
) -> DivisionAssignment:
    """Apply published document ranges to a user-supplied full manifest.

    Each document whose name falls inside ``[first_doc, last_doc]`` in sorted
    order gets that row's label. Checks, in order: every document covered
    exactly once (RangesOverlapOrGap), per-label document counts
    (CountMismatch), boundary names present (BoundaryNotFound), per-label
    word counts (CountMismatch with ``unit="words"``).
    """
    _check_one_scheme(rows)
    require_valid(manifest)
    docs = sort_documents(manifest)
    ranges = sorted(rows, key=lambda r: name_key(r.first_doc))
    for prev, row in zip(ranges, ranges[1:]):
        if name_key(row.first_doc) <= name_key(prev.last_doc):
            raise RangesOverlapOrGap(f"{prev.label} and {row.label} ranges overlap")

    entries: dict[str, str] = {}
    uncovered = []
    for doc in docs:
        key = name_key(doc.name)
        hit = [r for r in ranges if name_key(r.first_doc) <= key <= name_key(r.last_doc)]
        if not hit:
            uncovered.append(doc.name)
        else:
            entries[doc.name] = normalize_label(hit[0].label)
    if uncovered:
        raise RangesOverlapOrGap(
            f"{len(uncovered)} document(s) fall outside every range, first {uncovered[0]!r}"
        )

    asg = DivisionAssignment.build(entries, manifest)
    for row in rows:
        label = normalize_label(row.label)
        actual = asg.stats[label].doc_count if label in asg.stats else 0
        if actual != row.n_docs:
            raise CountMismatch(label, row.n_docs, actual)
    present = set(entries)
    for row in rows:
        for boundary in (row.first_doc, row.last_doc):
            if boundary not in present:
                raise BoundaryNotFound(boundary)
    for row in rows:
        label = normalize_label(row.label)
        actual = asg.stats[label].word_count
        if actual != row.n_words:
            raise CountMismatch(label, row.n_words, actual, unit="words")
    return asg


@dataclass
class SelfCheckReport:
    checks: list[tuple[str, bool, str]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append((name, ok, detail))

    @property
    def failures(self) -> list[tuple[str, bool, str]]:
        return [c for c in self.checks if not c[1]]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_text(self) -> str:
        lines = [f"{'PASS' if ok else 'FAIL'}  {name}  {detail}".rstrip() for name, ok, detail in self.checks]
        lines += [f"NOTE  {n}" for n in self.notes]
        lines.append(f"{len(self.checks) - len(self.failures)}/{len(self.checks)} checks passed")
        return "\n".join(lines) + "\n"


def _sums(rows: Iterable[ReferenceDivision]) -> tuple[int, int]:
    rows = list(rows)
    return sum(r.n_docs for r in rows), sum(r.n_words for r in rows)


_SERIAL_RE = re.compile(r"^(.*\.)(\d+)$")


def registry_selfcheck(rows: Sequence[ReferenceDivision] = REFERENCE_ROWS) -> SelfCheckReport:
    """Arithmetic and ordering consistency of the embedded tables."""
    report = SelfCheckReport()
    groups: dict[tuple[str, str], list[ReferenceDivision]] = {}
    for row in rows:
        groups.setdefault((row.scheme, row.treebank), []).append(row)

    expected_order = {"10-80-10": ["DEV", "TRAIN", "TEST"], "zitouni": ["TRAIN", "DEVTEST"]}
    for (scheme, tb), group in groups.items():
        labels = [r.label for r in group]
        want = expected_order.get(scheme)
        if scheme == "mada":
            want = ["TRAIN", "DEV", "TEST"] if len(group) == 3 else ["TRAIN"]
        report.add(f"{scheme} {tb} label order", labels == want, " ".join(labels))
        try:
            to_intervals(group)
            report.add(f"{scheme} {tb} ranges sorted", True)
        except IncompleteScheme as exc:
            report.add(f"{scheme} {tb} ranges sorted", False, str(exc))

        if scheme == "10-80-10":
            _, total = _sums(group)
            by_label = {r.label: r for r in group}
            for label in ("DEV", "TEST"):
                words = by_label[label].n_words if label in by_label else 0
                report.add(
                    f"{scheme} {tb} {label} > 1/10 of words",
                    words * 10 > total,
                    f"{words} x 10 vs {total}",
                )

        for prev, row in zip(group, group[1:]):
            a, b = _SERIAL_RE.match(prev.last_doc), _SERIAL_RE.match(row.first_doc)
            if a and b and a.group(1) == b.group(1) and int(b.group(2)) - int(a.group(2)) > 1:
                report.notes.append(
                    f"{scheme} {tb}: {prev.label} ends at {prev.last_doc} and {row.label} "
                    f"starts at {row.first_doc}; intermediate serial numbers are not listed"
                )

    def total(scheme, tb, labels=None):
        return _sums(r for r in groups.get((scheme, tb), []) if labels is None or r.label in labels)

    identities = [
        ("zitouni ATB3 = 10-80-10 ATB3", total("zitouni", "ATB3"), total("10-80-10", "ATB3")),
        ("mada ATB3 = 10-80-10 ATB3", total("mada", "ATB3"), total("10-80-10", "ATB3")),
        ("mada ATB1 TRAIN = 10-80-10 ATB1", total("mada", "ATB1"), total("10-80-10", "ATB1")),
        ("mada ATB2 TRAIN = 10-80-10 ATB2", total("mada", "ATB2"), total("10-80-10", "ATB2")),
        (
            "mada ATB3 TRAIN = zitouni ATB3 TRAIN",
            total("mada", "ATB3", {"TRAIN"}),
            total("zitouni", "ATB3", {"TRAIN"}),
        ),
    ]
    for name, left, right in identities:
        report.add(name, left == right and left != (0, 0), f"{left} vs {right} (docs, words)")
    dev_test_docs = total("mada", "ATB3", {"DEV", "TEST"})[0]
    devtest_docs = total("zitouni", "ATB3", {"DEVTEST"})[0]
    report.add(
        "mada ATB3 DEV+TEST docs = zitouni DEVTEST docs",
        dev_test_docs == devtest_docs,
        f"{dev_test_docs} vs {devtest_docs}",
    )

    for meta in TREEBANK_META:
        report.add(
            f"{meta.treebank} catalog number",
            bool(_CATALOG_RE.fullmatch(meta.ldc_catalog)),
            meta.ldc_catalog,
        )

    names = [n for r in rows for n in (r.first_doc, r.last_doc)]
    if any(n.endswith(".qtr") for n in names) and any(n.endswith(".qrtr") for n in names):
        report.notes.append("document names use both '.qtr' and '.qrtr' suffixes; kept as printed")
    return report


def export_rows(rows: Iterable[ReferenceDivision] = REFERENCE_ROWS) -> str:
    return "".join(r.as_tsv() + "\n" for r in rows)


def export_meta() -> str:
    return "".join(f"{m.treebank}\t{m.version}\t{m.ldc_catalog}\n" for m in TREEBANK_META)
