import re

import pytest

from corpus_divisions import CorpusManifest, DocumentRecord, list_reference, registry_selfcheck, resolve_assignment, to_intervals
from corpus_divisions.compat import IntervalDivision
from corpus_divisions.errors import (
    BoundaryNotFound,
    CountMismatch,
    IncompleteScheme,
    RangesOverlapOrGap,
    UnknownScheme,
    UnknownTreebank,
)
from corpus_divisions.registry import (
    REFERENCE_ROWS,
    TREEBANK_META,
    ReferenceDivision,
    export_meta,
    export_rows,
    treebank_meta,
    treebanks,
)
from corpus_divisions.model import name_key

TEN_80_10 = ["ATB1", "ATB2", "ATB3", "ATB4", "ATB5", "ATB6/NW", "ATB6/NG", "ATB6/WL",
             "ATB7", "ATB8", "ATB9", "ATB10", "ATB11", "ATB12",
             "ARZ1", "ARZ2", "ARZ3", "ARZ4", "ARZ5", "ARZ6", "ARZ7", "ARZ8", "LEV"]


def rows(scheme, tb):
    return [(r.label, r.n_docs, r.n_words, r.first_doc, r.last_doc) for r in list_reference(scheme, tb)]


def test_atb1():
    assert rows("10-80-10", "ATB1") == [
        ("DEV", 71, 14635, "20000715_AFP_ARB.0001", "20000715_AFP_ARB.0073"),
        ("TRAIN", 568, 116198, "20000715_AFP_ARB.0074", "20001115_AFP_ARB.0128"),
        ("TEST", 95, 14553, "20001115_AFP_ARB.0129", "20001115_AFP_ARB.0236"),
    ]


def test_zitouni_atb3():
    assert rows("zitouni", "ATB3") == [
        ("TRAIN", 509, 288046, "ANN20020115.0001", "ANN20021015.0100"),
        ("DEVTEST", 90, 51664, "ANN20021015.0101", "ANN20021215.0045"),
    ]


def test_spot_rows_verbatim():
    assert rows("10-80-10", "ATB6/WL")[2] == ("TEST", 9, 2064, "arb-WL-7-88466-10669891-S1", "arb-WL-7-89199-10673129-S1")
    assert rows("10-80-10", "ATB8")[1][4] == "ALHURRA_THEWORLD TODAY_ARB_20080208_170000"
    assert rows("10-80-10", "ATB5")[1][3].endswith(".qtr")
    assert rows("10-80-10", "ATB7")[0] == ("DEV", 1, 4052, "ALFAYHA_NEWS_ARB_20080401_210000", "ALFAYHA_NEWS_ARB_20080401_210000")
    assert rows("10-80-10", "LEV") == [
        ("DEV", 3, 3535, "fsa_16902", "fsa_16920"),
        ("TRAIN", 18, 20871, "fsa_16921", "fsa_17781"),
        ("TEST", 3, 3030, "fsa_17920", "fsa_18520"),
    ]
    assert rows("mada", "ATB3")[1:] == [
        ("DEV", 45, 26359, "ANN20021015.0101", "ANN20021115.0066"),
        ("TEST", 45, 25305, "ANN20021115.0068", "ANN20021215.0045"),
    ]


def test_registry_coverage():
    assert treebanks("10-80-10") == TEN_80_10
    assert treebanks("zitouni") == ["ATB3"]
    assert treebanks("mada") == ["ATB1", "ATB2", "ATB3"]
    assert len(REFERENCE_ROWS) == 23 * 3 + 2 + 5
    assert list_reference("jhu-stanford") == []


def test_lookup_errors():
    with pytest.raises(UnknownTreebank):
        list_reference("10-80-10", "ATB99")
    with pytest.raises(UnknownTreebank):
        list_reference("zitouni", "ATB1")
    with pytest.raises(UnknownScheme):
        list_reference("random", "ATB1")
    assert rows("MADA", "atb1") == rows("mada", "ATB1")


def test_row_invariants():
    for r in REFERENCE_ROWS:
        assert r.n_docs > 0 and r.n_words > 0
        assert name_key(r.first_doc) <= name_key(r.last_doc)


def test_meta():
    assert treebank_meta("ATB3").ldc_catalog == "LDC2010T08"
    assert treebank_meta("ATB6/NG").version == "1.0"
    assert treebank_meta("LEV").ldc_catalog == "LDC2005E78"
    assert len(TREEBANK_META) == 21
    assert all(re.fullmatch(r"LDC\d{4}[A-Z]\d+", m.ldc_catalog) for m in TREEBANK_META)


def test_to_intervals():
    iv = lambda s, t: [(d.label, d.start, d.end) for d in to_intervals(list_reference(s, t))]
    assert iv("10-80-10", "ATB3") == [("DEV", 0, 58), ("TRAIN", 58, 538), ("TEST", 538, 599)]
    assert iv("zitouni", "ATB3") == [("TRAIN", 0, 509), ("DEVTEST", 509, 599)]
    assert iv("mada", "ATB3") == [("TRAIN", 0, 509), ("DEV", 509, 554), ("TEST", 554, 599)]


def test_to_intervals_tiles_every_scheme():
    for scheme in ("10-80-10", "zitouni", "mada"):
        for tb in treebanks(scheme):
            ivs = to_intervals(list_reference(scheme, tb))
            assert ivs[0].start == 0
            assert all(a.end == b.start for a, b in zip(ivs, ivs[1:]))
            assert ivs[-1].end == sum(r.n_docs for r in list_reference(scheme, tb))


def test_to_intervals_rejects_mixed_or_unordered():
    with pytest.raises(IncompleteScheme):
        to_intervals(list_reference("10-80-10", "ATB1") + list_reference("10-80-10", "ATB2"))
    with pytest.raises(IncompleteScheme):
        to_intervals(list(reversed(list_reference("10-80-10", "ATB1"))))
    with pytest.raises(IncompleteScheme):
        to_intervals([])


def synth_rows(n=2):
    return [
        ReferenceDivision("s", "T", "DEV", n, 2 * n, "a", "b"),
        ReferenceDivision("s", "T", "TRAIN", n, 2 * n, "c", "d"),
        ReferenceDivision("s", "T", "TEST", n, 2 * n, "e", "f"),
    ]


def synth_manifest(names="abcdef"):
    return CorpusManifest("s", tuple(DocumentRecord(n, 2) for n in names))


def test_resolve_assignment():
    asg = resolve_assignment(synth_manifest(), synth_rows())
    assert dict(asg.entries) == {"a": "DEV", "b": "DEV", "c": "TRAIN", "d": "TRAIN", "e": "TEST", "f": "TEST"}
    assert asg.stats["TRAIN"].word_count == 4


def test_resolve_count_mismatch():
    with pytest.raises(CountMismatch) as err:
        resolve_assignment(synth_manifest("abcef"), synth_rows())
    assert (err.value.label, err.value.expected, err.value.actual) == ("TRAIN", 2, 1)


def test_resolve_boundary_not_found():
    # counts still match, but the printed last TEST document is absent
    m = synth_manifest(["a", "b", "c", "d", "e", "e2"])
    with pytest.raises(BoundaryNotFound) as err:
        resolve_assignment(m, synth_rows())
    assert err.value.doc == "f"


def test_resolve_gap_and_overlap():
    with pytest.raises(RangesOverlapOrGap):
        resolve_assignment(synth_manifest("abcdefg"), synth_rows())
    bad = synth_rows()
    bad[1] = ReferenceDivision("s", "T", "TRAIN", 2, 4, "b", "d")
    with pytest.raises(RangesOverlapOrGap):
        resolve_assignment(synth_manifest(), bad)


def test_resolve_word_mismatch():
    m = CorpusManifest("s", tuple(DocumentRecord(n, 3 if n == "e" else 2) for n in "abcdef"))
    with pytest.raises(CountMismatch) as err:
        resolve_assignment(m, synth_rows())
    assert err.value.unit == "words"


def test_resolve_full_size_registry_scheme():
    # a stand-in ATB3 with the published boundaries and document counts
    tb = list_reference("10-80-10", "ATB3")
    names = []
    for r in tb:
        names += [r.first_doc] + [f"{r.first_doc}~{i:03d}" for i in range(r.n_docs - 2)] + [r.last_doc]
    per_doc = {}
    for r in tb:
        base, extra = divmod(r.n_words, r.n_docs)
        per_doc[r.label] = [base + (i < extra) for i in range(r.n_docs)]
    counts = [c for r in tb for c in per_doc[r.label]]
    m = CorpusManifest("ATB3", tuple(DocumentRecord(n, c) for n, c in zip(names, counts)))
    asg = resolve_assignment(m, tb)
    assert {k: (v.doc_count, v.word_count) for k, v in asg.stats.items()} == {
        "DEV": (58, 34033), "TRAIN": (480, 271646), "TEST": (61, 34031)
    }


def test_selfcheck_passes():
    report = registry_selfcheck()
    assert report.ok, report.failures
    assert any("ANN20021115.0066" in n for n in report.notes)


def test_selfcheck_detects_bad_row():
    broken = [r if not (r.treebank == "ATB1" and r.label == "DEV" and r.scheme == "10-80-10")
              else ReferenceDivision(r.scheme, r.treebank, r.label, r.n_docs, 14000, r.first_doc, r.last_doc)
              for r in REFERENCE_ROWS]
    failures = [c[0] for c in registry_selfcheck(broken).failures]
    assert "10-80-10 ATB1 DEV > 1/10 of words" in failures
    assert "mada ATB1 TRAIN = 10-80-10 ATB1" in failures


def test_exports():
    text = export_rows()
    assert text.count("\n") == len(REFERENCE_ROWS)
    assert all(len(line.split("\t")) == 7 for line in text.splitlines())
    assert "zitouni\tATB3\tDEVTEST\t90\t51664\tANN20021015.0101\tANN20021215.0045\n" in text
    assert export_meta().splitlines()[0] == "ATB1\t4.1\tLDC2010T13"
