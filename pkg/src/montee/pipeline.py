"""Document-level extraction: relations, triggers, tags."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable

from montee.corpus import ParsedDocument, RelationRecord
from montee.depgraph import DepGraph
from montee.lexicon import TriggerLexicon
from montee.modtag import find_triggers, map_certainty, tag_events
from montee.relex import extract_relations


@dataclass(frozen=True)
class ExtractOptions:
    strip_modifiers: bool = False
    nary: bool = False
    certainty: bool = False
    keep_prepositions: bool = False


def tag_sentence(g: DepGraph, lexicon: TriggerLexicon, opts: ExtractOptions = ExtractOptions()):
    events = extract_relations(
        g, strip_modifiers=opts.strip_modifiers, nary=opts.nary,
        keep_prepositions=opts.keep_prepositions,
    )
    return tag_events(g, events, find_triggers(g, lexicon))


def process_document(doc: ParsedDocument, lexicon: TriggerLexicon,
                     opts: ExtractOptions = ExtractOptions()) -> list[RelationRecord]:
    records = []
    for k, sent in enumerate(doc.sentences):
        for rel, tag in tag_sentence(sent.graph, lexicon, opts):
            certainty = map_certainty(tag.category if tag else None) if opts.certainty else None
            records.append(RelationRecord(doc.doc_id, k, rel, tag, certainty))
    return records


_worker_state: tuple[TriggerLexicon, ExtractOptions] | None = None


def _init_worker(lexicon, opts):
    global _worker_state
    _worker_state = (lexicon, opts)


def _process_in_worker(doc):
    lexicon, opts = _worker_state
    return process_document(doc, lexicon, opts)


def process_corpus(docs: Iterable[ParsedDocument], lexicon: TriggerLexicon,
                   opts: ExtractOptions = ExtractOptions(), workers: int = 1) -> list[RelationRecord]:
    """Records for all documents, sorted; the result does not depend on ``workers``."""
    if workers < 1:
        raise ValueError("workers must be >= 1")
    records: list[RelationRecord] = []
    if workers == 1:
        for doc in docs:
            records.extend(process_document(doc, lexicon, opts))
    else:
        with ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(lexicon, opts)) as pool:
            for chunk in pool.map(_process_in_worker, docs, chunksize=64):
                records.extend(chunk)
    records.sort(key=RelationRecord.sort_key)
    return records
