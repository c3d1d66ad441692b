"""Command-line interface.

Exit codes: 0 success, 1 checks ran and found a problem (infeasible split,
failed verification, contamination), 2 usage, I/O or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import compat, registry
from .errors import CorpusError, DivisionInfeasible, EmptyCorpus, TreeSyntaxError, UnknownLabel
from .ingest import build_manifest, load_genre_map, load_manifest, write_manifest
from .model import CorpusManifest, DivisionAssignment, name_key, normalize_label
from .splitter import (
    SplitPolicy,
    load_assignment,
    merge_stratified,
    read_assignment_lines,
    split,
    split_stratified,
    verify_assignment,
    write_assignment,
)


class UsageError(Exception):
    pass


def parse_fraction(text: str) -> Fraction:
    """Exact rational from ``"1/10"`` or ``"0.1"``; never goes through a float."""
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a fraction: {text!r}") from None
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError(f"fraction must lie in (0, 1): {text!r}")
    return value


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _load_manifest_file(path: str) -> CorpusManifest:
    try:
        return load_manifest(_read_text(path), corpus_id=Path(path).stem if path != "-" else "stdin")
    except CorpusError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _policy(args) -> SplitPolicy:
    try:
        return SplitPolicy(args.dev_frac, args.test_frac, args.stratify)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _discover(paths: Sequence[str]) -> list[Path]:
    files = []
    for p in map(Path, paths):
        if p.is_dir():
            files.extend(sorted((f for f in p.rglob("*") if f.is_file()), key=lambda f: str(f)))
        elif p.exists():
            files.append(p)
        else:
            raise UsageError(f"{p}: no such file or directory")
    return files


def cmd_count(args, out) -> int:
    genre_map = None
    if args.genre_map:
        try:
            genre_map = load_genre_map(_read_text(args.genre_map))
        except CorpusError as exc:
            raise UsageError(f"{args.genre_map}: {exc}") from exc
    inputs = []
    origin: dict[str, Path] = {}
    for f in _discover(args.inputs):
        name = f.stem
        if name in origin:
            raise UsageError(f"duplicate document name {name!r}: {origin[name]} and {f}")
        origin[name] = f
        inputs.append((name, _read_text(str(f)), args.kind))
    try:
        manifest = build_manifest("", inputs, genre_map)
    except CorpusError as exc:
        cause = getattr(exc, "cause", None)
        doc = getattr(exc, "document", None)
        if isinstance(cause, TreeSyntaxError) and doc in origin:
            text = dict((n, c) for n, c, _ in inputs)[doc]
            line = text.count("\n", 0, cause.position) + 1
            raise UsageError(f"{origin[doc]}:{line}: {cause.reason}") from exc
        raise UsageError(str(exc)) from exc
    ordered = CorpusManifest("", tuple(sorted(manifest.documents, key=lambda d: name_key(d.name))))
    out.write(write_manifest(ordered))
    return 0


def cmd_split(args, out) -> int:
    manifest = _load_manifest_file(args.manifest)
    policy = _policy(args)
    try:
        if policy.stratify_by_genre:
            asg = merge_stratified(split_stratified(manifest, policy), manifest)
        else:
            asg = split(manifest, policy)
    except (DivisionInfeasible, EmptyCorpus) as exc:
        print(f"split infeasible: {exc}", file=sys.stderr)
        print(
            "the corpus is too small or too skewed for DEV/TEST fractions "
            f"{policy.dev_fraction}/{policy.test_fraction}",
            file=sys.stderr,
        )
        return 1
    except CorpusError as exc:
        raise UsageError(str(exc)) from exc
    out.write(write_assignment(asg))
    return 0


def cmd_verify(args, out) -> int:
    manifest = _load_manifest_file(args.manifest)
    try:
        rows = read_assignment_lines(_read_text(args.assignment))
    except CorpusError as exc:
        raise UsageError(f"{args.assignment}: {exc}") from exc
    try:
        violations = verify_assignment(manifest, rows, _policy(args))
    except CorpusError as exc:
        raise UsageError(str(exc)) from exc
    if not violations:
        out.write("OK: assignment matches the division rule\n")
        return 0
    for v in violations:
        out.write(f"VIOLATION {v}\n")
    return 1


def cmd_registry(args, out) -> int:
    if args.action == "list":
        for scheme in registry.SCHEMES:
            out.write(f"{scheme}\t{' '.join(registry.treebanks(scheme))}\n")
        for scheme, note in registry.UNRANGED_SCHEMES.items():
            out.write(f"{scheme}\t(no ranges) {note}\n")
        return 0
    if args.action == "show":
        rows = registry.list_reference(args.scheme or "10-80-10", args.treebank)
        out.write(registry.export_rows(rows))
        return 0
    if args.action == "export":
        out.write(registry.export_meta() if args.meta else registry.export_rows())
        return 0
    report = registry.registry_selfcheck()
    out.write(report.to_text())
    return 0 if report.ok else 1


def _split_pair(spec: str, names: Sequence[str]) -> tuple[tuple[str, str], tuple[str, str]]:
    """Parse ``NAME.LABEL:NAME.LABEL``; labels may themselves contain colons."""

    def side(text):
        for n in sorted(names, key=len, reverse=True):
            if text.lower().startswith(n.lower() + ".") and len(text) > len(n) + 1:
                return n, normalize_label(text[len(n) + 1 :])
        return None

    for i, ch in enumerate(spec):
        if ch == ":":
            left, right = side(spec[:i]), side(spec[i + 1 :])
            if left and right:
                return left, right
    raise UsageError(
        f"cannot parse contamination check {spec!r}; expected NAME.LABEL:NAME.LABEL "
        f"with NAME one of {list(names)}"
    )


def cmd_compare(args, out) -> int:
    check = None
    verdict = None
    if args.assignment_a or args.assignment_b:
        if not (args.assignment_a and args.assignment_b):
            raise UsageError("--assignment-a and --assignment-b go together")
        manifest = _load_manifest_file(args.manifest) if args.manifest else None
        try:
            a = load_assignment(_read_text(args.assignment_a))
            b = load_assignment(_read_text(args.assignment_b))
            if manifest is not None:
                a = DivisionAssignment.build(a.entries, manifest)
                b = DivisionAssignment.build(b.entries, manifest)
            report = compat.compare_assignments(a, b, manifest, args.name_a, args.name_b)
        except CorpusError as exc:
            raise UsageError(str(exc)) from exc
        if args.check_contamination:
            (tn, tl), (sn, sl) = _split_pair(args.check_contamination, [args.name_a, args.name_b])
            by_name = {args.name_a: a, args.name_b: b}
            train, test = by_name[tn], by_name[sn]
            for asg, label in ((train, tl), (test, sl)):
                if label not in asg.stats:
                    raise UsageError(str(UnknownLabel(label)))
            shared = sum(
                1 for n in train.entries if train.entries[n] == tl and test.entries[n] == sl
            )
            check = (f"{tn}.{tl}", f"{sn}.{sl}")
            verdict = compat.ContaminationResult(shared == 0, shared)
    else:
        if not args.treebank:
            raise UsageError("--treebank is required when comparing registry schemes")
        scheme_a, scheme_b = args.scheme_a, args.scheme_b
        pair = None
        if args.check_contamination:
            pair = _split_pair(args.check_contamination, registry.SCHEMES)
            scheme_a = scheme_a or pair[0][0]
            scheme_b = scheme_b or pair[1][0]
        if not (scheme_a and scheme_b):
            raise UsageError("give --scheme-a and --scheme-b, or two assignment files")
        try:
            ia = registry.scheme_intervals(scheme_a, args.treebank)
            ib = registry.scheme_intervals(scheme_b, args.treebank)
            report = compat.overlap_intervals(ia, ib, scheme_a, scheme_b)
            if pair is not None:
                (tn, tl), (sn, sl) = pair
                verdict = compat.contamination_check(
                    registry.scheme_intervals(tn, args.treebank),
                    tl,
                    registry.scheme_intervals(sn, args.treebank),
                    sl,
                )
                check = (f"{tn}.{tl}", f"{sn}.{sl}")
        except CorpusError as exc:
            raise UsageError(str(exc)) from exc

    if args.json:
        payload = report.to_dict()
        if verdict is not None:
            payload["check"] = {
                "train": check[0],
                "test": check[1],
                "docs": verdict.shared,
                "safe": verdict.safe,
            }
        out.write(json.dumps(payload, indent=2, ensure_ascii=False) + "\n")
    else:
        out.write(report.to_text())
        if verdict is not None:
            state = "safe" if verdict.safe else "UNSAFE"
            out.write(f"check {check[0]} vs {check[1]}: {state} ({verdict.shared} shared docs)\n")
    if verdict is not None and not verdict.safe:
        return 1
    return 0


def _add_fraction_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dev-frac", type=parse_fraction, default=Fraction(1, 10),
                   help="DEV word fraction, e.g. 1/10 or 0.1 (default 1/10)")
    p.add_argument("--test-frac", type=parse_fraction, default=Fraction(1, 10),
                   help="TEST word fraction (default 1/10)")
    p.add_argument("--stratify", action="store_true",
                   help="split each genre independently; labels become GENRE:LABEL")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corpus-divisions",
        description="Deterministic TRAIN/DEV/TEST corpus divisions and split compatibility checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="count words per file and print a manifest TSV")
    p.add_argument("inputs", nargs="+", help="files or directories (one document per file)")
    p.add_argument("--kind", choices=["raw", "tree"], default="raw")
    p.add_argument("--genre-map", help="TSV of name<TAB>genre")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("split", help="divide a manifest into DEV/TRAIN/TEST")
    p.add_argument("--manifest", required=True, help="manifest TSV path, or - for stdin")
    _add_fraction_flags(p)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("verify", help="check an assignment against the division rule")
    p.add_argument("--manifest", required=True)
    p.add_argument("--assignment", required=True, help="assignment TSV path, or - for stdin")
    _add_fraction_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("registry", help="inspect the reference division registry")
    p.add_argument("action", choices=["list", "show", "export", "selfcheck"])
    p.add_argument("--scheme")
    p.add_argument("--treebank")
    p.add_argument("--meta", action="store_true", help="export: treebank versions and catalog numbers")
    p.set_defaults(func=cmd_registry)

    p = sub.add_parser("compare", help="overlap report between two division schemes")
    p.add_argument("--scheme-a")
    p.add_argument("--scheme-b")
    p.add_argument("--treebank")
    p.add_argument("--assignment-a")
    p.add_argument("--assignment-b")
    p.add_argument("--name-a", default="A")
    p.add_argument("--name-b", default="B")
    p.add_argument("--manifest", help="adds word counts to assignment comparisons")
    p.add_argument("--check-contamination", metavar="X.TRAIN:Y.TEST")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    if out is None:
        out = sys.stdout
        if hasattr(out, "reconfigure"):
            out.reconfigure(encoding="utf-8", newline="\n")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CorpusError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
