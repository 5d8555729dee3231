"""Modality trigger lexicon.

The lexicon is a UTF-8 TSV file with five columns::

    lemma <TAB> category <TAB> pos <TAB> strength <TAB> subcategory

``lemma`` may hold several space-separated tokens ("as long as"). Strength
and subcategory may be empty; trailing empty columns may be omitted. Lines
starting with ``#`` are comments. A first row reading ``lemma category ...``
is taken as a header and skipped.
"""

from __future__ import annotations

import io
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from montee.errors import LexiconError

CATEGORIES = ("MOD", "COND", "ATT_SAY", "ATT_THINK", "LNEG")
SUBCATEGORIES = ("deontic", "intention", "desire", "epistemic")
WILDCARD_POS = ("", "*", "_")
NEGATIVE_STRENGTHS = (0, 1)


@dataclass(frozen=True)
class LexiconEntry:
    lemma_phrase: tuple[str, ...]
    category: str
    pos: str = "*"
    strength: int | None = None
    subcategory: str | None = None
    line: int = field(default=0, compare=False)

    def __post_init__(self):
        if not self.lemma_phrase or any(not tok.strip() for tok in self.lemma_phrase):
            raise LexiconError(f"empty lemma phrase, line {self.line}")
        if self.category not in CATEGORIES:
            raise LexiconError(f"unknown category {self.category!r}, line {self.line}")
        if self.strength is not None and not 0 <= self.strength <= 4:
            raise LexiconError(f"strength out of range, line {self.line}")
        if self.subcategory is not None and self.subcategory not in SUBCATEGORIES:
            raise LexiconError(f"unknown subcategory {self.subcategory!r}, line {self.line}")

    @property
    def phrase(self) -> str:
        return " ".join(self.lemma_phrase)

    @property
    def tag(self) -> str:
        """Tag category the entry triggers; strengths 0 and 1 mean lexical negation."""
        if self.strength in NEGATIVE_STRENGTHS:
            return "LNEG"
        return self.category

    @property
    def is_wildcard(self) -> bool:
        return self.pos in WILDCARD_POS

    def pos_matches(self, pos: str) -> bool:
        return self.is_wildcard or pos.startswith(self.pos)

    @property
    def specificity(self) -> int:
        return -1 if self.is_wildcard else len(self.pos)


class _TrieNode:
    __slots__ = ("children", "entries")

    def __init__(self):
        self.children: dict[str, _TrieNode] = {}
        self.entries: list[LexiconEntry] = []


class TriggerLexicon:
    """Immutable set of entries indexed by a token trie over lemma phrases."""

    def __init__(self, entries: Iterable[LexiconEntry] = (), duplicates=()):
        self._root = _TrieNode()
        self._entries: list[LexiconEntry] = []
        self.duplicates: tuple[tuple[LexiconEntry, tuple[int, ...]], ...] = tuple(duplicates)
        seen: dict[tuple, LexiconEntry] = {}
        for entry in sorted(entries, key=_entry_order):
            key = (entry.lemma_phrase, entry.pos)
            if key in seen:
                other = seen[key]
                if other == entry:
                    continue
                raise LexiconError(
                    f"conflicting entries for {entry.phrase!r}/{entry.pos}, "
                    f"lines {other.line} and {entry.line}"
                )
            seen[key] = entry
            self._entries.append(entry)
            node = self._root
            for tok in entry.lemma_phrase:
                node = node.children.setdefault(tok, _TrieNode())
            node.entries.append(entry)
        for node in self._walk():
            node.entries.sort(key=lambda e: (-e.specificity, e.pos))

    def _walk(self):
        stack = [self._root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(node.children.values())

    @property
    def entries(self) -> tuple[LexiconEntry, ...]:
        return tuple(self._entries)

    def __len__(self):
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries)

    def lookup(self, phrase: Sequence[str]) -> tuple[LexiconEntry, ...]:
        node = self._root
        for tok in phrase:
            node = node.children.get(tok)
            if node is None:
                return ()
        return tuple(node.entries)

    def match_at(self, lemmas: Sequence[str], pos_tags: Sequence[str], i: int):
        """Longest entry starting at ``i``, as ``(entry, span)``, or None.

        The POS constraint is checked against the first token of the phrase.
        Among entries with the same phrase the most specific POS wins.
        """
        head_pos = pos_tags[i]
        best = None
        node = self._root
        for k in range(i, len(lemmas)):
            node = node.children.get(lemmas[k])
            if node is None:
                break
            for entry in node.entries:
                if entry.pos_matches(head_pos):
                    best = (entry, k - i + 1)
                    break
        return best


def _entry_order(entry: LexiconEntry):
    return (entry.lemma_phrase, entry.pos, entry.line)


def match_at(lexicon: TriggerLexicon, lemmas, pos_tags, i: int):
    return lexicon.match_at(lemmas, pos_tags, i)


def parse_row(line: str, lineno: int) -> LexiconEntry:
    cols = line.rstrip("\r\n").split("\t")
    if not 3 <= len(cols) <= 5:
        raise LexiconError(f"expected 3 to 5 tab-separated columns, got {len(cols)}, line {lineno}")
    cols += [""] * (5 - len(cols))
    lemma, category, pos, strength, subcat = (c.strip() for c in cols)
    tokens = tuple(lemma.lower().split())
    if not tokens:
        raise LexiconError(f"empty lemma phrase, line {lineno}")
    if strength:
        try:
            value = int(strength)
        except ValueError:
            raise LexiconError(f"non-integer strength {strength!r}, line {lineno}") from None
    else:
        value = None
    return LexiconEntry(
        lemma_phrase=tokens,
        category=category.upper(),
        pos=pos.upper() if pos not in WILDCARD_POS else "*",
        strength=value,
        subcategory=subcat.lower() or None,
        line=lineno,
    )


def read_lexicon(stream: io.TextIOBase) -> TriggerLexicon:
    entries = []
    first_row = True
    for lineno, line in enumerate(stream, start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        if first_row and line.split("\t", 1)[0].strip().lower() == "lemma":
            first_row = False
            continue
        first_row = False
        entries.append(parse_row(line, lineno))

    groups: dict[LexiconEntry, list[int]] = {}
    for entry in entries:
        groups.setdefault(entry, []).append(entry.line)
    duplicates = [(e, tuple(lines)) for e, lines in groups.items() if len(lines) > 1]
    return TriggerLexicon(entries, duplicates)


def load_lexicon(path) -> TriggerLexicon:
    with open(path, encoding="utf-8") as f:
        return read_lexicon(f)


@dataclass
class LexiconReport:
    n_entries: int
    counts: dict[str, int]
    duplicates: list[str]
    errors: list[str]
    warnings: list[str]

    @property
    def ok(self) -> bool:
        return not self.errors

    def format(self) -> str:
        lines = [f"{self.n_entries} entries"]
        for cat in CATEGORIES:
            if self.counts.get(cat):
                lines.append(f"  {cat}: {self.counts[cat]}")
        for msg in self.duplicates:
            lines.append(f"warning: duplicate {msg}")
        for msg in self.warnings:
            lines.append(f"warning: {msg}")
        for msg in self.errors:
            lines.append(f"error: {msg}")
        return "\n".join(lines) + "\n"


def validate(lexicon: TriggerLexicon) -> LexiconReport:
    counts = Counter(e.category for e in lexicon)
    duplicates = [
        f"{e.phrase}/{e.pos} (lines {', '.join(map(str, lines))})" for e, lines in lexicon.duplicates
    ]
    errors, warnings = [], []
    for e in lexicon:
        where = f"{e.phrase}/{e.pos} (line {e.line})"
        if e.category == "LNEG" and e.strength is not None and e.strength not in NEGATIVE_STRENGTHS:
            errors.append(f"LNEG entry with positive strength {e.strength}: {where}")
        elif e.category not in ("MOD", "LNEG") and e.strength in NEGATIVE_STRENGTHS:
            warnings.append(f"{e.category} entry with strength {e.strength} is tagged LNEG: {where}")
    return LexiconReport(len(lexicon), dict(counts), duplicates, errors, warnings)


def lexicon_from_rows(rows: Iterable[str]) -> TriggerLexicon:
    return read_lexicon(io.StringIO("\n".join(rows) + "\n"))
