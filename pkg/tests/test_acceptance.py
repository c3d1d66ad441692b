"""Exit criteria for the package, one test per criterion."""

import io
import random
import time

from corpus_divisions import (
    CorpusManifest,
    DocumentRecord,
    SplitPolicy,
    carve_extra,
    contamination_check,
    count_words_tree,
    list_reference,
    load_manifest,
    overlap_intervals,
    parse_trees,
    sort_documents,
    split,
    split_stratified,
    test_superset_check as superset,
    to_intervals,
    write_manifest,
)
from corpus_divisions.cli import main
from corpus_divisions.compat import interval_positions
from corpus_divisions.errors import DivisionInfeasible, EmptyCorpus, InsufficientTrain
from corpus_divisions.registry import treebanks

from _gen import random_manifest, records
from _oracle import oracle_split

TEN_80_10_SETS = ["ATB1", "ATB2", "ATB3", "ATB4", "ATB5", "ATB6/NW", "ATB6/NG", "ATB6/WL",
                  "ATB7", "ATB8", "ATB9", "ATB10", "ATB11", "ATB12",
                  "ARZ1", "ARZ2", "ARZ3", "ARZ4", "ARZ5", "ARZ6", "ARZ7", "ARZ8", "LEV"]


def totals(scheme, tb, labels=None):
    rows = [r for r in list_reference(scheme, tb) if labels is None or r.label in labels]
    return sum(r.n_docs for r in rows), sum(r.n_words for r in rows)


def test_ac1_registry_thresholds(criterion):
    start = time.perf_counter()
    assert treebanks("10-80-10") == TEN_80_10_SETS
    failures = []
    for tb in TEN_80_10_SETS:
        rows = {r.label: r for r in list_reference("10-80-10", tb)}
        total = sum(r.n_words for r in rows.values())
        for label in ("DEV", "TEST"):
            if not rows[label].n_words * 10 > total:
                failures.append(f"{tb} {label}")
    atb1 = {r.label: r.n_words for r in list_reference("10-80-10", "ATB1")}
    wl = {r.label: r.n_words for r in list_reference("10-80-10", "ATB6/WL")}
    spots = (
        totals("10-80-10", "ATB1")[1] == 145386 and atb1["DEV"] == 14635 and atb1["TEST"] == 14553
        and totals("10-80-10", "ATB6/WL")[1] == 19442 and wl["DEV"] == 1948 and wl["TEST"] == 2064
    )
    elapsed = time.perf_counter() - start
    criterion(
        "AC1 registry DEV/TEST > 10% of words for every 10-80-10 row set",
        not failures and spots and elapsed < 1,
        f"{len(TEN_80_10_SETS)} sets, failures={failures}, {elapsed:.3f}s",
    )


def test_ac2_cross_scheme_identities(criterion):
    start = time.perf_counter()
    checks = {
        "zitouni ATB3 = 599/339710": totals("zitouni", "ATB3") == (599, 339710),
        "10-80-10 ATB3 = 599/339710": totals("10-80-10", "ATB3") == (599, 339710),
        "509+90 docs": [r.n_docs for r in list_reference("zitouni", "ATB3")] == [509, 90],
        "58+480+61 docs": [r.n_docs for r in list_reference("10-80-10", "ATB3")] == [58, 480, 61],
        "288046+51664 words": [r.n_words for r in list_reference("zitouni", "ATB3")] == [288046, 51664],
        "34033+271646+34031 words": [r.n_words for r in list_reference("10-80-10", "ATB3")] == [34033, 271646, 34031],
        "mada ATB1 TRAIN = 734/145386 = ATB1 sums": totals("mada", "ATB1") == (734, 145386) == totals("10-80-10", "ATB1"),
        "mada ATB2 TRAIN = 501/144199 = ATB2 sums": totals("mada", "ATB2") == (501, 144199) == totals("10-80-10", "ATB2"),
    }
    elapsed = time.perf_counter() - start
    bad = [k for k, ok in checks.items() if not ok]
    criterion("AC2 cross-scheme identities", not bad and elapsed < 1, f"failed={bad}, {elapsed:.3f}s")


def test_ac3_overlap_reproduction(criterion):
    start = time.perf_counter()
    zit = to_intervals(list_reference("zitouni", "ATB3"))
    std = to_intervals(list_reference("10-80-10", "ATB3"))
    mada = to_intervals(list_reference("mada", "ATB3"))
    shared_29 = overlap_intervals(zit, std).shared("DEVTEST", "TRAIN")
    std_test, mada_test = interval_positions(std, "TEST"), interval_positions(mada, "TEST")
    delta = len(std_test) - len(mada_test)
    nested = superset(std_test, mada_test).ok
    safe = contamination_check(std, "TRAIN", mada, "TEST")
    elapsed = time.perf_counter() - start
    criterion(
        "AC3 overlap: zitouni DEVTEST/10-80-10 TRAIN = 29, TEST delta 16, MADA TEST nested, no contamination",
        shared_29 == 29 and delta == 16 and nested and safe.safe and safe.shared == 0 and elapsed < 1,
        f"shared={shared_29}, delta={delta}, nested={nested}, safe={safe.safe}, {elapsed:.3f}s",
    )


def _oracle_or_none(m):
    return oracle_split(records(m))


def test_ac4_oracle_equivalence(criterion):
    rng = random.Random(20131002)
    start = time.perf_counter()
    cases = feasible = mismatches = 0
    shapes = ("plain", "zeros", "giant", "uniform", "giant-edge")
    for i in range(1250):
        m = random_manifest(rng, shape=shapes[i % len(shapes)])
        expected = _oracle_or_none(m)
        try:
            got = dict(split(m).entries)
        except DivisionInfeasible:
            got = None
        cases += 1
        feasible += expected is not None
        if got != expected:
            mismatches += 1
    # small pathological manifests to make sure both sides agree on infeasibility
    for counts in ([10, 10], [1, 100, 1], [0, 5, 0], [3, 3, 3], [1, 1, 1, 1, 1000, 1, 1, 1, 1]):
        m = CorpusManifest("p", tuple(DocumentRecord(f"p{i}", c) for i, c in enumerate(counts)))
        expected = _oracle_or_none(m)
        try:
            got = dict(split(m).entries)
        except DivisionInfeasible:
            got = None
        cases += 1
        mismatches += got != expected
    elapsed = time.perf_counter() - start
    criterion(
        "AC4 splitter matches literal oracle on random manifests",
        cases >= 1000 and mismatches == 0 and 0 < feasible < cases and elapsed < 30,
        f"{cases} cases, {feasible} feasible, {mismatches} mismatches, {elapsed:.1f}s",
    )


def _property_failures(m, rng):
    out = []
    asg = split(m)
    ordered = sort_documents(m)
    labels = [asg.entries[d.name] for d in ordered]
    if sorted(asg.entries) != sorted(m.names) or sum(s.word_count for s in asg.stats.values()) != m.total_word_count:
        out.append("partition")
    runs = [lab for i, lab in enumerate(labels) if i == 0 or labels[i - 1] != lab]
    if runs != ["DEV", "TRAIN", "TEST"]:
        out.append("contiguity")
    total = m.total_word_count
    dev = [d.word_count for d in ordered if asg.entries[d.name] == "DEV"]
    test = [d.word_count for d in ordered if asg.entries[d.name] == "TEST"]
    if not (sum(dev) * 10 > total and (sum(dev) - dev[-1]) * 10 <= total):
        out.append("dev threshold/minimality")
    if not (sum(test) * 10 > total and (sum(test) - test[0]) * 10 <= total):
        out.append("test threshold/minimality")
    docs = list(m.documents)
    rng.shuffle(docs)
    if split(CorpusManifest(m.corpus_id, tuple(docs))).entries != asg.entries:
        out.append("permutation")
    try:
        carved = carve_extra(asg, m, "TUNE", rng.choice([0.01, 0.05, 0.1, 0.2]))
    except InsufficientTrain:
        pass
    else:
        before = "".join(f"{n}\t{l}\n" for n, l in sorted(asg.entries.items()) if l in ("DEV", "TEST"))
        after = "".join(f"{n}\t{l}\n" for n, l in sorted(carved.entries.items()) if l in ("DEV", "TEST"))
        if before.encode() != after.encode():
            out.append("carve")
    return out


def test_ac5_property_suite(criterion):
    rng = random.Random(5)
    start = time.perf_counter()
    checked = 0
    failures = []
    while checked < 600:
        m = random_manifest(rng)
        try:
            split(m)
        except (DivisionInfeasible, EmptyCorpus):
            continue
        checked += 1
        bad = _property_failures(m, rng)
        if bad:
            failures.append((m.corpus_id, bad))
    elapsed = time.perf_counter() - start
    criterion(
        "AC5 partition, contiguity, exceedance+minimality, permutation invariance, carve stability",
        not failures and elapsed < 30,
        f"{checked} feasible cases, failures={failures[:3]}, {elapsed:.1f}s",
    )


def _atb6_like(rng):
    # genre sizes and word totals shaped like the newswire/newsgroup/weblog sub-treebanks
    shape = {"NW": (122, 27484, "AFP_ARB_200805{:02d}.{:04d}-S1"),
             "NG": (35, 8015, "arb-NG-{}-{:06d}-S1"),
             "WL": (86, 19442, "arb-WL-{}-{:06d}-S2")}
    docs = []
    for genre, (n, words, pattern) in shape.items():
        weights = [rng.random() + 0.2 for _ in range(n)]
        scale = words / sum(weights)
        names = set()
        while len(names) < n:
            names.add(pattern.format(rng.randint(1, 30), rng.randint(1, 999999)))
        for name, w in zip(sorted(names), weights):
            docs.append(DocumentRecord(name, max(1, round(w * scale)), genre))
    rng.shuffle(docs)
    return CorpusManifest("ATB6-like", tuple(docs))


def test_ac6_stratified_equivalence(criterion):
    rng = random.Random(4)
    ok = True
    detail = []
    for _ in range(20):
        m = _atb6_like(rng)
        strat = split_stratified(m, SplitPolicy(stratify_by_genre=True))
        covered = sorted(n for a in strat.values() for n in a.entries)
        ok &= covered == sorted(m.names) and list(strat) == ["NG", "NW", "WL"]
        for genre, asg in strat.items():
            sub = CorpusManifest(genre, tuple(d for d in m.documents if d.genre == genre))
            ok &= dict(asg.entries) == dict(split(sub).entries)
            ok &= dict(asg.entries) == oracle_split(records(sub))
        detail = [f"{g}:{a.stats['DEV'].doc_count}/{a.stats['TRAIN'].doc_count}/{a.stats['TEST'].doc_count}"
                  for g, a in strat.items()]
    criterion("AC6 stratified split equals per-genre split", ok, f"20 corpora, last {' '.join(detail)}")


TREE_FIXTURES = [
    # (text, leaves counted by hand, non-empty leaves counted by hand)
    ("(S (NP (DT the) (NN cat)) (VP (VBD sat)))", 3, 3),
    ("(S (NP (DT the) (NN cat)) (VP (VBD sat)) (. .))", 4, 4),
    ("(S (NP-SBJ (-NONE- *T*)) (VP (VBD sat)))", 2, 1),
    ("(S (NP (DT the) (NN dog)) (VP (VBD barked)) (-NONE- *))\n"
     "(S (NP-SBJ (-NONE- *T*)) (VP (VB go) (ADVP (RB now))))", 7, 5),
    ("( (S (NP-SBJ (NNP Mr.) (NNP Vinken)) (VP (VBZ is) (NP-PRD (NN chairman))) (. .)) )\n"
     "( (S (NP-SBJ-1 (-NONE- *)) (VP (VBD left) (NP (-NONE- *T*-2)))) )", 8, 6),
    ("(NN x)", 1, 1),
    ("", 0, 0),
]

MANIFEST_FIXTURES = [
    "d1\t10\nd2\t20\n",
    "d1\t10\tweblog\n",
    "ALHURRA_THEWORLD TODAY_ARB_20080208_170000\t5\tNW\nb\t0\n",
    "".join(f"arb-WL-1-{i}-S1\t{i * 7}\tWL\n" for i in range(50)),
]


def test_ac7_ingestion_fixtures(criterion):
    tree_ok = all(
        sum(len(t.tokens()) for t in parse_trees(text)) == leaves and count_words_tree(text) == words
        for text, leaves, words in TREE_FIXTURES
    )
    tsv_ok = all(write_manifest(load_manifest(text)) == text for text in MANIFEST_FIXTURES)
    criterion("AC7 tree word counts and byte-exact manifest round-trip", tree_ok and tsv_ok,
              f"{len(TREE_FIXTURES)} tree fixtures, {len(MANIFEST_FIXTURES)} TSV fixtures")


def _cli(*argv):
    out = io.StringIO()
    return main(list(argv), out=out), out.getvalue()


def test_ac8_cli_round_trip(criterion, tmp_path):
    rng = random.Random(8)
    start = time.perf_counter()
    runs = round_trip_fail = mutation_fail = 0
    manifest_path, asg_path = tmp_path / "m.tsv", tmp_path / "a.tsv"
    while runs < 120:
        m = random_manifest(rng, n_max=300)
        manifest_path.write_text(write_manifest(m))
        code, out = _cli("split", "--manifest", str(manifest_path))
        if code == 1:
            continue
        runs += 1
        asg_path.write_text(out)
        code, _ = _cli("verify", "--manifest", str(manifest_path), "--assignment", str(asg_path))
        round_trip_fail += code != 0

        rows = [line.split("\t") for line in out.splitlines()]
        pair = rng.choice([("DEV", "TRAIN"), ("TRAIN", "TEST")])
        i = rng.choice([k for k, r in enumerate(rows) if r[1] == pair[0]])
        j = rng.choice([k for k, r in enumerate(rows) if r[1] == pair[1]])
        rows[i][1], rows[j][1] = rows[j][1], rows[i][1]
        asg_path.write_text("".join(f"{n}\t{lab}\n" for n, lab in rows))
        code, report = _cli("verify", "--manifest", str(manifest_path), "--assignment", str(asg_path))
        mutation_fail += not (code == 1 and "VIOLATION contiguity" in report)
    elapsed = time.perf_counter() - start
    criterion(
        "AC8 split | verify exits 0; swapped labels fail with a contiguity violation",
        round_trip_fail == 0 and mutation_fail == 0 and elapsed < 30,
        f"{runs} manifests, {round_trip_fail} round-trip failures, {mutation_fail} missed mutations, {elapsed:.1f}s",
    )
