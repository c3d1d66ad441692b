"""Deterministic front/back greedy division of a sorted corpus.

DEV is the shortest prefix of the name-sorted document list whose word total
strictly exceeds ``dev_fraction`` of the corpus, TEST the shortest suffix
exceeding ``test_fraction``, and TRAIN whatever lies between. All threshold
comparisons use exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import (
    DivisionInfeasible,
    DuplicateName,
    EmptyCorpus,
    InsufficientTrain,
    LabelClash,
    MalformedLine,
    MissingGenre,
)
from .model import (
    CANONICAL_LABELS,
    DEV,
    TEST,
    TRAIN,
    CorpusManifest,
    DivisionAssignment,
    DocumentRecord,
    name_key,
    normalize_label,
    require_valid,
    sort_documents,
)


def _as_fraction(value) -> Fraction:
    if isinstance(value, float):
        # str() gives the shortest repr, so 0.1 becomes exactly 1/10
        return Fraction(str(value))
    return Fraction(value)


@dataclass(frozen=True)
class SplitPolicy:
    dev_fraction: Fraction = Fraction(1, 10)
    test_fraction: Fraction = Fraction(1, 10)
    stratify_by_genre: bool = False

    def __post_init__(self):
        dev = _as_fraction(self.dev_fraction)
        test = _as_fraction(self.test_fraction)
        if not (0 < dev and 0 < test and dev + test < 1):
            raise ValueError(
                f"need 0 < dev, 0 < test and dev + test < 1; got dev={dev}, test={test}"
            )
        object.__setattr__(self, "dev_fraction", dev)
        object.__setattr__(self, "test_fraction", test)


def greedy_bounds(
    counts: Sequence[int], dev_fraction: Fraction, test_fraction: Fraction
) -> tuple[int, int]:
    """Return ``(dev_end, test_start)`` for word counts in sorted order.

    DEV is ``counts[:dev_end]`` and TEST is ``counts[test_start:]``.

    Raises:
        EmptyCorpus: if the counts sum to zero.
        DivisionInfeasible: if DEV and TEST would overlap or leave TRAIN empty.
    """
    total = sum(counts)
    if total == 0:
        raise EmptyCorpus()
    n = len(counts)
    dev_limit = dev_fraction * total
    test_limit = test_fraction * total

    dev_end, dev_words = 0, 0
    while dev_words <= dev_limit:
        dev_words += counts[dev_end]
        dev_end += 1

    test_start, test_words = n, 0
    while test_words <= test_limit:
        test_start -= 1
        test_words += counts[test_start]

    if test_start < dev_end:
        raise DivisionInfeasible(
            f"DEV needs the first {dev_end} of {n} documents and TEST the last "
            f"{n - test_start}; they overlap"
        )
    if test_start == dev_end:
        raise DivisionInfeasible(
            f"DEV ({dev_end} docs) and TEST ({n - test_start} docs) use all {n} "
            f"documents, leaving TRAIN empty"
        )
    return dev_end, test_start


def split(manifest: CorpusManifest, policy: SplitPolicy = SplitPolicy()) -> DivisionAssignment:
    """Divide ``manifest`` into DEV, TRAIN and TEST."""
    if policy.stratify_by_genre:
        raise ValueError("policy asks for stratification; use split_stratified")
    require_valid(manifest)
    docs = sort_documents(manifest)
    counts = [d.word_count for d in docs]
    if sum(counts) == 0:
        raise EmptyCorpus(manifest.corpus_id)
    dev_end, test_start = greedy_bounds(counts, policy.dev_fraction, policy.test_fraction)
    entries = {}
    for i, doc in enumerate(docs):
        if i < dev_end:
            entries[doc.name] = DEV
        elif i < test_start:
            entries[doc.name] = TRAIN
        else:
            entries[doc.name] = TEST
    return DivisionAssignment.build(entries, manifest)


def genre_submanifests(manifest: CorpusManifest) -> dict[str, CorpusManifest]:
    """Partition a manifest by genre tag, keyed in sorted genre order."""
    groups: dict[str, list[DocumentRecord]] = {}
    for doc in manifest.documents:
        if doc.genre is None:
            raise MissingGenre(doc.name)
        groups.setdefault(doc.genre, []).append(doc)
    return {
        genre: CorpusManifest(f"{manifest.corpus_id}/{genre}", tuple(groups[genre]))
        for genre in sorted(groups, key=name_key)
    }


def split_stratified(
    manifest: CorpusManifest, policy: SplitPolicy = SplitPolicy(stratify_by_genre=True)
) -> dict[str, DivisionAssignment]:
    """Split each genre as an independent sub-corpus."""
    if not policy.stratify_by_genre:
        raise ValueError("policy does not ask for stratification; use split")
    require_valid(manifest)
    plain = SplitPolicy(policy.dev_fraction, policy.test_fraction)
    out = {}
    for genre, sub in genre_submanifests(manifest).items():
        try:
            out[genre] = split(sub, plain)
        except DivisionInfeasible as exc:
            raise DivisionInfeasible(exc.reason, genre=genre) from exc
        except EmptyCorpus as exc:
            raise DivisionInfeasible("genre has a total word count of 0", genre=genre) from exc
    return out


def merge_stratified(
    assignments: Mapping[str, DivisionAssignment], manifest: CorpusManifest | None = None
) -> DivisionAssignment:
    """Flatten per-genre assignments into one, namespacing labels ``GENRE:LABEL``."""
    entries = {}
    for genre, asg in assignments.items():
        for name, label in asg.entries.items():
            entries[name] = f"{genre}:{label}"
    return DivisionAssignment.build(entries, manifest)


def carve_extra(
    assignment: DivisionAssignment,
    manifest: CorpusManifest,
    new_label: str,
    target_fraction,
) -> DivisionAssignment:
    """Move the shortest front-of-TRAIN prefix exceeding ``target_fraction``
    of the corpus words into a new division. DEV and TEST are untouched.

    Raises:
        LabelClash: ``new_label`` is canonical or already used.
        InsufficientTrain: TRAIN would be emptied.
    """
    target = _as_fraction(target_fraction)
    if not 0 < target < 1:
        raise ValueError(f"target_fraction must lie in (0, 1), got {target}")
    new_label = normalize_label(new_label)
    if new_label in CANONICAL_LABELS or new_label in assignment.stats:
        raise LabelClash(new_label)
    counts = manifest.word_counts()
    train = assignment.names_with(TRAIN)
    if not train:
        raise InsufficientTrain("assignment has no TRAIN division")
    limit = target * manifest.total_word_count
    taken, words = 0, 0
    while words <= limit:
        if taken == len(train):
            raise InsufficientTrain(
                f"TRAIN holds {words} words, not more than {limit} "
                f"({target} of {manifest.total_word_count})"
            )
        words += counts[train[taken]]
        taken += 1
    if taken == len(train):
        raise InsufficientTrain(
            f"carving {new_label} at {target} would consume all {len(train)} TRAIN documents"
        )
    entries = dict(assignment.entries)
    for name in train[:taken]:
        entries[name] = new_label
    return DivisionAssignment.build(entries, manifest, assignment.corpus_id)


def write_assignment(assignment: DivisionAssignment) -> str:
    """Assignment TSV, ``name<TAB>LABEL`` in sorted-name order."""
    return "".join(
        f"{name}\t{assignment.entries[name]}\n" for name in assignment.sorted_names()
    )


def read_assignment_lines(text: str) -> list[tuple[str, str]]:
    """Parse assignment TSV rows without checking name uniqueness."""
    rows = []
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    for line_no, line in enumerate(lines, start=1):
        if line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 2 or not fields[0] or not fields[1]:
            raise MalformedLine(line_no, "expected name<TAB>label")
        rows.append((fields[0], normalize_label(fields[1])))
    return rows


def load_assignment(
    text: str, manifest: CorpusManifest | None = None, corpus_id: str = ""
) -> DivisionAssignment:
    entries: dict[str, str] = {}
    for name, label in read_assignment_lines(text):
        if name in entries:
            raise DuplicateName(name)
        entries[name] = label
    return DivisionAssignment.build(entries, manifest, corpus_id or None)


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


_EXPECTED_RUNS = [DEV, TRAIN, TEST]


def _check_family(
    docs: list[DocumentRecord],
    labels: Mapping[str, str],
    policy: SplitPolicy,
    prefix: str,
) -> list[Violation]:
    out = []
    where = f"[{prefix}] " if prefix else ""
    seq = [(d, labels[d.name].rpartition(":")[2]) for d in docs if d.name in labels]
    runs: list[str] = []
    for doc, label in seq:
        if not runs or runs[-1] != label:
            runs.append(label)
    if runs != _EXPECTED_RUNS:
        offender = None
        seen: list[str] = []
        for doc, label in seq:
            if not seen or seen[-1] != label:
                seen.append(label)
                if seen != _EXPECTED_RUNS[: len(seen)]:
                    offender = doc.name
                    break
        detail = f"label runs in sorted order are {runs}, expected {_EXPECTED_RUNS}"
        if offender is not None:
            detail += f"; first out-of-place document {offender!r}"
        out.append(Violation("contiguity", where + detail))

    total = sum(d.word_count for d in docs)
    for label, frac, edge in ((DEV, policy.dev_fraction, -1), (TEST, policy.test_fraction, 0)):
        members = [d for d, lab in seq if lab == label]
        words = sum(d.word_count for d in members)
        limit = frac * total
        kind = label.lower()
        if words <= limit:
            out.append(
                Violation(
                    f"{kind}-threshold",
                    f"{where}{label} has {words} words, not more than {frac} x {total} = {limit}",
                )
            )
        elif members:
            boundary = members[edge]
            if words - boundary.word_count > limit:
                out.append(
                    Violation(
                        f"{kind}-minimality",
                        f"{where}{label} still exceeds {limit} words without {boundary.name!r}",
                    )
                )
    if not any(lab == TRAIN for _, lab in seq):
        out.append(Violation("train-nonempty", f"{where}TRAIN is empty"))

    try:
        plain = SplitPolicy(policy.dev_fraction, policy.test_fraction)
        expected = split(CorpusManifest(prefix, tuple(docs)), plain)
    except (DivisionInfeasible, EmptyCorpus) as exc:
        out.append(Violation("rule-match", f"{where}the rule finds no feasible split: {exc}"))
    else:
        differ = [
            d.name
            for d in docs
            if labels.get(d.name, "").rpartition(":")[2] != expected.entries[d.name]
        ]
        if differ:
            out.append(
                Violation(
                    "rule-match",
                    f"{where}{len(differ)} document(s) differ from the rule-generated split, "
                    f"first {differ[0]!r}",
                )
            )
    return out


def verify_assignment(
    manifest: CorpusManifest,
    rows: Sequence[tuple[str, str]],
    policy: SplitPolicy = SplitPolicy(),
) -> list[Violation]:
    """Check an assignment against every property the division rule guarantees.

    ``rows`` are raw ``(name, label)`` pairs so that documents listed twice can
    be reported rather than rejected. An empty result means full compliance.
    """
    require_valid(manifest)
    out: list[Violation] = []
    labels: dict[str, str] = {}
    split_docs = []
    for name, label in rows:
        label = normalize_label(label)
        if name in labels:
            if labels[name] != label:
                split_docs.append(name)
            else:
                out.append(Violation("partition", f"{name!r} is listed more than once"))
            continue
        labels[name] = label
    for name in split_docs:
        out.append(Violation("no-split", f"{name!r} is assigned to more than one division"))

    known = manifest.word_counts()
    missing = [n for n in sorted(known, key=name_key) if n not in labels]
    extra = [n for n in sorted(labels, key=name_key) if n not in known]
    if missing:
        out.append(Violation("partition", f"{len(missing)} document(s) unassigned, first {missing[0]!r}"))
    if extra:
        out.append(Violation("partition", f"{len(extra)} name(s) not in the manifest, first {extra[0]!r}"))

    by_name = {d.name: d for d in manifest.documents}
    for name, label in sorted(labels.items(), key=lambda kv: name_key(kv[0])):
        if name not in by_name:
            continue
        genre, _, base = label.rpartition(":")
        if base not in CANONICAL_LABELS:
            out.append(Violation("labels", f"{name!r} has non-rule label {label!r}"))
        elif policy.stratify_by_genre and genre != by_name[name].genre:
            out.append(
                Violation("labels", f"{name!r} labelled {label!r} but its genre is {by_name[name].genre!r}")
            )
        elif not policy.stratify_by_genre and genre:
            out.append(Violation("labels", f"{name!r} has a genre-namespaced label {label!r}"))

    if policy.stratify_by_genre:
        for genre, sub in genre_submanifests(manifest).items():
            out.extend(_check_family(sort_documents(sub), labels, policy, genre))
    else:
        out.extend(_check_family(sort_documents(manifest), labels, policy, ""))
    return out
