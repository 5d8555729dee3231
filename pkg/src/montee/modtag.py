"""Modal tagging of extracted events.

Trigger nodes come from three sources: lexicon matches, counterfactual
"had"/"if", and the closed class of negation function words. An event is
connected to every trigger whose node reaches the event's predicate head in
the dependency graph; the final tag is the connected category earliest in
``PRECEDENCE``.

A trigger lying inside the event's own predicate chain is not counted for
that event: the predicate already spells it out ("failed to investigate",
"say"). The modifier-stripped variant, which no longer contains the
trigger, does pick it up.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from montee.depgraph import DepGraph, check_cf, visit_reachable
from montee.lexicon import TriggerLexicon
from montee.relex import EventRelation

PRECEDENCE = ("MOD", "ATT_SAY", "ATT_THINK", "COND", "COUNT", "LNEG", "NEG")
TAG_CATEGORIES = frozenset(PRECEDENCE)
NEGATION_WORDS = frozenset({"not", "no", "never", "neither", "nor", "none", "without"})

_RANK = {cat: k for k, cat in enumerate(PRECEDENCE)}

# certainty labels
DID_NOT_HAPPEN, UNCERTAIN, HAPPENED = 0, 1, 2


@dataclass(frozen=True)
class TriggerNode:
    node: int               # syntactic head of the trigger span
    start: int
    length: int
    category: str
    source: str             # "lexicon" | "counterfactual" | "negation"
    phrase: str
    strength: int | None = None
    subcategory: str | None = None

    @property
    def span(self) -> range:
        return range(self.start, self.start + self.length)


@dataclass(frozen=True)
class ModalTag:
    category: str
    trigger: int
    phrase: str = ""
    strength: int | None = None
    subcategory: str | None = None

    def __post_init__(self):
        if self.category not in TAG_CATEGORIES:
            raise ValueError(f"unknown tag category {self.category!r}")


def tag_precedence(categories: Iterable[str]) -> str:
    cats = set(categories)
    if not cats:
        raise ValueError("tag_precedence needs at least one category")
    unknown = cats - TAG_CATEGORIES
    if unknown:
        raise ValueError(f"unknown tag categories: {sorted(unknown)}")
    return min(cats, key=_RANK.__getitem__)


def map_certainty(tag: str | None) -> int:
    if tag is None:
        return HAPPENED
    if tag not in TAG_CATEGORIES:
        raise ValueError(f"unknown tag category {tag!r}")
    if tag in ("LNEG", "NEG"):
        return DID_NOT_HAPPEN
    return UNCERTAIN


def _span_head(g: DepGraph, start: int, length: int) -> int:
    span = range(start, start + length)
    for k in span:
        if any(e.dep not in span for e in g.out_edges(k)):
            return k
    return start


def find_triggers(g: DepGraph, lex: TriggerLexicon) -> list[TriggerNode]:
    """Counterfactual, lexicon and negation-word triggers of a sentence.

    Lexicon matching is greedy left to right: tokens covered by a longest
    match are not matched again. A counterfactual node is not also matched
    against the lexicon, so a governing "if" is COUNT rather than COND.
    """
    triggers = []
    lemmas = [n.lemma.lower() for n in g.nodes]
    pos_tags = g.pos_tags
    covered = 0
    for i in range(len(g)):
        cf = check_cf(g, i)
        if cf:
            triggers.append(TriggerNode(i, i, 1, "COUNT", "counterfactual", lemmas[i]))
        elif i >= covered:
            hit = lex.match_at(lemmas, pos_tags, i)
            if hit is not None:
                entry, span = hit
                covered = i + span
                triggers.append(TriggerNode(
                    _span_head(g, i, span), i, span, entry.tag, "lexicon", entry.phrase,
                    entry.strength, entry.subcategory,
                ))
        if lemmas[i] in NEGATION_WORDS and not cf:
            triggers.append(TriggerNode(i, i, 1, "NEG", "negation", lemmas[i]))
    return triggers


def _connected(event: EventRelation, trigger: TriggerNode, reach: frozenset[int]) -> bool:
    own = set(event.pred_nodes)
    if any(k in own for k in trigger.span):
        return False
    return event.head in reach


def tag_events(g: DepGraph, events: Iterable[EventRelation], triggers: Iterable[TriggerNode]):
    """Pair each event with its final ModalTag, or None when nothing reaches it."""
    triggers = sorted(triggers, key=lambda t: (t.node, t.start))
    reach = {t.node: visit_reachable(g, t.node) for t in triggers}
    out = []
    for ev in events:
        hits = [t for t in triggers if _connected(ev, t, reach[t.node])]
        if not hits:
            out.append((ev, None))
            continue
        cat = tag_precedence(t.category for t in hits)
        t = next(t for t in hits if t.category == cat)
        out.append((ev, ModalTag(cat, t.node, t.phrase, t.strength, t.subcategory)))
    return out
