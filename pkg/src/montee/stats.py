"""Corpus statistics over tagged relations and entity-based domain filtering."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from montee.corpus import ParsedDocument, RelationRecord
from montee.modtag import PRECEDENCE

TAG_NAMES = {
    "MOD": "Modal",
    "ATT_SAY": "ATT_say",
    "ATT_THINK": "ATT_think",
    "COND": "Conditional",
    "COUNT": "Counterfactual",
    "NEG": "Negation",
    "LNEG": "Lexical Negation",
}
REPORT_ORDER = ("MOD", "ATT_SAY", "ATT_THINK", "COND", "COUNT", "NEG", "LNEG")


@dataclass(frozen=True)
class DomainFilterConfig:
    """Entity share a document needs to count as in-domain.

    A document qualifies when strictly more than ``min_fraction`` of its
    entity mentions have an in-domain type and there are at least
    ``min_count`` such mentions.
    """

    name: str
    type_prefixes: tuple[str, ...]
    min_fraction: float
    min_count: int = 0

    def __post_init__(self):
        if not 0 <= self.min_fraction <= 1:
            raise ValueError("min_fraction must be in [0, 1]")
        if self.min_count < 0:
            raise ValueError("min_count must be >= 0")

    def matches(self, figer_type: str | None) -> bool:
        if not figer_type:
            return False
        t = figer_type.strip("/")
        for prefix in self.type_prefixes:
            p = prefix.strip("/")
            if t == p or t.startswith(p + "/"):
                return True
        return False


POLITICS = DomainFilterConfig(
    "politics",
    ("government", "government_agency", "person/politician", "event/election",
     "organization/political_party"),
    0.40,
    2,
)
SPORTS = DomainFilterConfig(
    "sports",
    ("person/athlete", "person/coach", "organization/sports_team", "organization/sports_league",
     "event/sports_event", "building/sports_facility", "award/sports_award"),
    0.25,
    0,
)
PRESETS = {c.name: c for c in (POLITICS, SPORTS)}


def entity_mentions(doc: ParsedDocument) -> list[str | None]:
    """FIGER type of every entity mention; adjacent tokens sharing an id form one mention."""
    types = []
    for sent in doc.sentences:
        prev = None
        for node in sent.graph.nodes:
            ent = node.entity
            if ent is not None and (prev is None or prev.id != ent.id):
                types.append(ent.figer_type)
            prev = ent
    return types


def classify_domain(doc: ParsedDocument, cfg: DomainFilterConfig) -> bool:
    mentions = entity_mentions(doc)
    if not mentions:
        return False
    hits = sum(cfg.matches(t) for t in mentions)
    return Fraction(hits, len(mentions)) > Fraction(str(cfg.min_fraction)) and hits >= cfg.min_count


@dataclass
class TagDistribution:
    total: int = 0
    untagged: int = 0
    counts: dict[str, int] = field(default_factory=lambda: {c: 0 for c in PRECEDENCE})

    @property
    def tagged(self) -> int:
        return self.total - self.untagged

    def percent_tagged(self) -> float:
        return 100.0 * self.tagged / self.total if self.total else 0.0

    def percent_untagged(self) -> float:
        return 100.0 * self.untagged / self.total if self.total else 0.0

    def percent_of_tagged(self, category: str) -> float:
        return 100.0 * self.counts[category] / self.tagged if self.tagged else 0.0

    def merge(self, other: TagDistribution) -> TagDistribution:
        return TagDistribution(
            self.total + other.total,
            self.untagged + other.untagged,
            {c: self.counts[c] + other.counts[c] for c in PRECEDENCE},
        )

    def format(self) -> str:
        lines = [
            f"Relations\t{self.total}",
            "Distribution of tags (percentage of all relations)",
            f"none\t{self.percent_untagged():.2f}",
            f"Tag\t{self.percent_tagged():.2f}",
            "Distribution of types of tag (percentage of tagged relations)",
        ]
        for c in REPORT_ORDER:
            lines.append(f"{TAG_NAMES[c]}\t{self.percent_of_tagged(c):.2f}")
        return "\n".join(lines) + "\n"


def tag_distribution(records: Iterable[RelationRecord]) -> TagDistribution:
    dist = TagDistribution()
    for rec in records:
        dist.total += 1
        if rec.tag is None:
            dist.untagged += 1
        else:
            dist.counts[rec.tag.category] += 1
    return dist


def trigger_frequency(records: Iterable[RelationRecord], k: int = 10) -> list[tuple[str, int]]:
    """Top-``k`` trigger phrases by count; ties go to the lexicographically smaller phrase."""
    if k < 1:
        raise ValueError("k must be >= 1")
    counts = Counter(rec.tag.phrase for rec in records if rec.tag is not None and rec.tag.phrase)
    return sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:k]


def filter_documents(docs: Iterable[ParsedDocument], cfg: DomainFilterConfig):
    return (doc for doc in docs if classify_domain(doc, cfg))


def parse_prefixes(spec: str | Sequence[str]) -> tuple[str, ...]:
    if isinstance(spec, str):
        spec = spec.split(",")
    return tuple(p.strip() for p in spec if p.strip())
