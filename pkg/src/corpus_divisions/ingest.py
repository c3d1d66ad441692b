"""Build corpus manifests from raw text, bracketed treebank files or TSV."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union

from .errors import DocumentError, DuplicateName, MalformedLine, TreeSyntaxError, UnbalancedParens
from .model import CorpusManifest, DocumentRecord, validate_manifest

EMPTY_CATEGORY_TAG = "-NONE-"

_TOKEN_RE = re.compile(r"\(|\)|[^\s()]+")
_COUNT_RE = re.compile(r"0|[1-9][0-9]*")


def count_words_raw(text: str) -> int:
    """Number of maximal runs of non-whitespace characters."""
    return len(text.split())


@dataclass(frozen=True)
class TreeToken:
    surface: str
    tag: str = ""
    is_empty_category: bool = False


@dataclass
class Tree:
    label: str
    children: list[Union["Tree", TreeToken]] = field(default_factory=list)

    def tokens(self) -> list[TreeToken]:
        """Leaves in left-to-right order."""
        out: list[TreeToken] = []
        stack: list[Tree | TreeToken] = [self]
        while stack:
            node = stack.pop()
            if isinstance(node, TreeToken):
                out.append(node)
            else:
                stack.extend(reversed(node.children))
        return out

    def leaves(self) -> list[str]:
        return [t.surface for t in self.tokens()]


class _Group:
    __slots__ = ("start", "atoms", "children")

    def __init__(self, start: int):
        self.start = start
        self.atoms: list[str] = []
        self.children: list[Tree | TreeToken] = []


def _close(group: _Group) -> Tree | TreeToken:
    # (TAG surface) is a leaf; (TAG child...) or (child...) is internal.
    if group.children:
        if len(group.atoms) > 1:
            raise TreeSyntaxError(group.start, "bare token mixed with subtrees")
        return Tree(group.atoms[0] if group.atoms else "", group.children)
    if len(group.atoms) == 2:
        tag, surface = group.atoms
        return TreeToken(surface, tag, tag == EMPTY_CATEGORY_TAG)
    if not group.atoms:
        raise TreeSyntaxError(group.start, "empty bracket group")
    if len(group.atoms) == 1:
        raise TreeSyntaxError(group.start, "leafless bracket group")
    raise TreeSyntaxError(group.start, "preterminal with more than one surface token")


def parse_trees(text: str) -> list[Tree]:
    """Parse whitespace-separated bracketed trees.

    A top-level group that is itself a single preterminal, e.g. ``(NN x)``,
    becomes a one-leaf tree labelled with its tag.

    Raises:
        UnbalancedParens: on a stray ``)`` or an unclosed ``(``.
        TreeSyntaxError: on bare tokens outside brackets or leafless groups.
    """
    trees: list[Tree] = []
    stack: list[_Group] = []
    for m in _TOKEN_RE.finditer(text):
        tok = m.group()
        if tok == "(":
            stack.append(_Group(m.start()))
        elif tok == ")":
            if not stack:
                raise UnbalancedParens(m.start())
            node = _close(stack.pop())
            if stack:
                stack[-1].children.append(node)
            elif isinstance(node, TreeToken):
                trees.append(Tree(node.tag, [node]))
            else:
                trees.append(node)
        else:
            if not stack:
                raise TreeSyntaxError(m.start(), f"token {tok!r} outside brackets")
            if stack[-1].children:
                raise TreeSyntaxError(m.start(), "bare token mixed with subtrees")
            stack[-1].atoms.append(tok)
    if stack:
        raise UnbalancedParens(stack[-1].start)
    return trees


def count_words_tree(text: str) -> int:
    """Number of leaves across all trees, excluding ``-NONE-`` empty categories."""
    return sum(
        1 for tree in parse_trees(text) for tok in tree.tokens() if not tok.is_empty_category
    )


_COUNTERS = {"raw": count_words_raw, "tree": count_words_tree}


def build_manifest(
    corpus_id: str,
    inputs: Iterable[tuple[str, str, str]],
    genre_map: Mapping[str, str] | None = None,
) -> CorpusManifest:
    """Count words in each ``(name, content, kind)`` input, kind being
    ``"raw"`` or ``"tree"``, and assemble a manifest in input order."""
    genre_map = genre_map or {}
    docs = []
    seen: set[str] = set()
    for name, content, kind in inputs:
        if name in seen:
            raise DuplicateName(name)
        seen.add(name)
        try:
            counter = _COUNTERS[kind]
        except KeyError:
            raise ValueError(f"unknown content kind {kind!r}; expected raw or tree") from None
        try:
            n = counter(content)
        except TreeSyntaxError as exc:
            raise DocumentError(name, exc) from exc
        docs.append(DocumentRecord(name, n, genre_map.get(name)))
    return CorpusManifest(corpus_id, tuple(docs))


def load_manifest(text: str, corpus_id: str = "") -> CorpusManifest:
    """Parse manifest TSV: ``name<TAB>word_count[<TAB>genre]`` per line.

    Lines starting with ``#`` are comments. Word counts must be canonical
    non-negative decimals so that writing the manifest back is byte-exact.
    """
    docs = []
    seen: set[str] = set()
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    for line_no, line in enumerate(lines, start=1):
        if line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) not in (2, 3):
            raise MalformedLine(line_no, f"expected 2 or 3 tab-separated fields, got {len(fields)}")
        name, count = fields[0], fields[1]
        if name == "" or "\r" in name:
            raise MalformedLine(line_no, "empty or invalid document name")
        if not _COUNT_RE.fullmatch(count):
            raise MalformedLine(line_no, f"word count {count!r} is not a non-negative integer")
        genre = None
        if len(fields) == 3:
            genre = fields[2]
            if genre == "" or "\r" in genre:
                raise MalformedLine(line_no, "empty genre field")
        if name in seen:
            raise DuplicateName(name)
        seen.add(name)
        docs.append(DocumentRecord(name, int(count), genre))
    return CorpusManifest(corpus_id, tuple(docs))


def write_manifest(manifest: CorpusManifest) -> str:
    """Serialize to manifest TSV, preserving document order."""
    violations = validate_manifest(manifest)
    if violations:
        raise ValueError("cannot write invalid manifest: " + "; ".join(violations))
    out = []
    for doc in manifest.documents:
        row = f"{doc.name}\t{doc.word_count}"
        if doc.genre is not None:
            row += f"\t{doc.genre}"
        out.append(row + "\n")
    return "".join(out)


def load_genre_map(text: str) -> dict[str, str]:
    """Parse ``name<TAB>genre`` lines (``#`` comments allowed)."""
    mapping: dict[str, str] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 2 or not fields[0] or not fields[1]:
            raise MalformedLine(line_no, "expected name<TAB>genre")
        if fields[0] in mapping:
            raise DuplicateName(fields[0])
        mapping[fields[0]] = fields[1]
    return mapping
