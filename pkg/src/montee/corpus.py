"""Line-delimited JSON formats for parsed documents and extracted relations.

Document lines::

    {"doc_id": "d1", "sentences": [
        {"text": "...",
         "tokens": [{"i": 0, "form": "Ed", "lemma": "ed", "pos": "NNP",
                     "supertag": "N/N", "entity": {"id": "Ed_Miliband",
                                                   "figer_type": "person/politician"}}],
         "edges": [[head, dep, slot]]}]}

A line may carry ``"schema": 1``; other values are rejected.

Relation lines hold one extracted relation each, see ``record_to_dict``.
"""

from __future__ import annotations

import contextlib
import json
import sys
from dataclasses import dataclass
from typing import IO, Iterable, Iterator

from montee import SCHEMA_VERSION
from montee.depgraph import DepGraph, DepNode, Entity
from montee.errors import CorpusFormatError, GraphError
from montee.modtag import ModalTag
from montee.relex import Argument, EventRelation


@dataclass(frozen=True)
class Sentence:
    text: str
    graph: DepGraph


@dataclass(frozen=True)
class ParsedDocument:
    doc_id: str
    sentences: tuple[Sentence, ...] = ()


@dataclass(frozen=True)
class RelationRecord:
    doc_id: str
    sent: int
    relation: EventRelation
    tag: ModalTag | None = None
    certainty: int | None = None

    def sort_key(self):
        return (self.doc_id, self.sent) + self.relation.sort_key()


# -- streams -------------------------------------------------------------

@contextlib.contextmanager
def open_text(path, mode="r"):
    """Open ``path`` as UTF-8 text; ``-`` means stdin/stdout."""
    if path == "-" or path is None:
        stream = sys.stdin if "r" in mode else sys.stdout
        yield stream
        if "w" in mode:
            stream.flush()
        return
    if hasattr(path, "read") or hasattr(path, "write"):
        yield path
        return
    with open(path, mode, encoding="utf-8", newline="\n") as f:
        yield f


def _json_line(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":")) + "\n"


def _iter_json_lines(f: IO[str]) -> Iterator[tuple[int, dict]]:
    for lineno, line in enumerate(f, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusFormatError(f"line {lineno}: invalid JSON ({exc.msg})") from None
        if not isinstance(obj, dict):
            raise CorpusFormatError(f"line {lineno}: expected a JSON object")
        if obj.get("schema", SCHEMA_VERSION) != SCHEMA_VERSION:
            raise CorpusFormatError(f"line {lineno}: unknown schema version {obj['schema']!r}")
        yield lineno, obj


# -- documents -------------------------------------------------------------

def _require(obj: dict, key: str, typ, where: str):
    if key not in obj:
        raise CorpusFormatError(f"{where}: missing {key!r} field")
    value = obj[key]
    if not isinstance(value, typ) or (typ is int and isinstance(value, bool)):
        raise CorpusFormatError(f"{where}: field {key!r} has wrong type")
    return value


def sentence_from_dict(obj: dict, where: str) -> Sentence:
    if not isinstance(obj, dict):
        raise CorpusFormatError(f"{where}: sentence must be an object")
    text = obj.get("text", "")
    tokens = _require(obj, "tokens", list, where)
    nodes = []
    for k, tok in enumerate(tokens):
        if not isinstance(tok, dict):
            raise CorpusFormatError(f"{where}: token {k} must be an object")
        i = _require(tok, "i", int, where)
        if i != k:
            raise CorpusFormatError(f"{where}: token {k} has index {i}")
        ent = tok.get("entity")
        entity = None
        if ent is not None:
            if not isinstance(ent, dict) or "id" not in ent:
                raise CorpusFormatError(f"{where}: token {k} has a malformed entity")
            entity = Entity(str(ent["id"]), ent.get("figer_type"))
        nodes.append(DepNode(
            index=i,
            form=_require(tok, "form", str, where),
            lemma=_require(tok, "lemma", str, where).lower(),
            pos=_require(tok, "pos", str, where),
            supertag=tok.get("supertag") or "",
            entity=entity,
        ))
    edges = obj.get("edges", [])
    if not isinstance(edges, list) or not all(
        isinstance(e, list) and len(e) == 3 and all(isinstance(x, int) for x in e) for e in edges
    ):
        raise CorpusFormatError(f"{where}: edges must be [head, dep, slot] integer triples")
    try:
        graph = DepGraph(tuple(nodes), tuple(tuple(e) for e in edges))
    except GraphError as exc:
        raise CorpusFormatError(f"{where}: {exc}") from None
    return Sentence(text, graph)


def document_from_dict(obj: dict, where: str = "document") -> ParsedDocument:
    doc_id = _require(obj, "doc_id", str, where)
    if not doc_id:
        raise CorpusFormatError(f"{where}: empty doc_id")
    sentences = _require(obj, "sentences", list, where)
    return ParsedDocument(
        doc_id, tuple(sentence_from_dict(s, f"{where}, sentence {k}") for k, s in enumerate(sentences))
    )


def document_to_dict(doc: ParsedDocument) -> dict:
    sentences = []
    for s in doc.sentences:
        tokens = []
        for n in s.graph.nodes:
            tok = {"i": n.index, "form": n.form, "lemma": n.lemma, "pos": n.pos, "supertag": n.supertag}
            if n.entity is not None:
                tok["entity"] = {"id": n.entity.id, "figer_type": n.entity.figer_type}
            tokens.append(tok)
        sentences.append({
            "text": s.text,
            "tokens": tokens,
            "edges": [list(e) for e in s.graph.edges],
        })
    return {"doc_id": doc.doc_id, "sentences": sentences}


def read_corpus(path, unique_ids: bool = True) -> Iterator[ParsedDocument]:
    """Stream documents from a JSONL file, in file order."""
    seen = set()
    with open_text(path) as f:
        for lineno, obj in _iter_json_lines(f):
            doc = document_from_dict(obj, f"line {lineno}")
            if unique_ids:
                if doc.doc_id in seen:
                    raise CorpusFormatError(f"line {lineno}: duplicate doc_id {doc.doc_id!r}")
                seen.add(doc.doc_id)
            yield doc


def write_corpus(docs: Iterable[ParsedDocument], path) -> None:
    with open_text(path, "w") as f:
        for doc in docs:
            f.write(_json_line(document_to_dict(doc)))


# -- relations -------------------------------------------------------------

def record_to_dict(rec: RelationRecord) -> dict:
    rel = rec.relation
    args = []
    for a in rel.args:
        arg = {"head": a.head, "text": a.text, "kind": a.kind}
        if a.figer_type is not None:
            arg["type"] = a.figer_type
        args.append(arg)
    out = {
        "doc_id": rec.doc_id,
        "sent": rec.sent,
        "head": rel.head,
        "kind": rel.kind,
        "pred": rel.pred_string,
        "slots": list(rel.slots),
        "args": args,
        "nodes": list(rel.pred_nodes),
        "display": rel.display,
    }
    if rel.variant:
        out["variant"] = rel.variant
    if rel.prepositional:
        out["prepositional"] = True
    if rec.tag is not None:
        out["tag"] = rec.tag.category
        out["trigger"] = rec.tag.phrase
        out["trigger_node"] = rec.tag.trigger
        if rec.tag.strength is not None:
            out["strength"] = rec.tag.strength
        if rec.tag.subcategory is not None:
            out["subcategory"] = rec.tag.subcategory
    if rec.certainty is not None:
        out["certainty"] = rec.certainty
    return out


def record_from_dict(obj: dict, where: str = "record") -> RelationRecord:
    try:
        rel = EventRelation(
            pred_nodes=tuple(obj["nodes"]),
            pred_string=obj["pred"],
            slots=tuple(obj["slots"]),
            args=tuple(
                Argument(a["head"], a["text"], a.get("kind", "general"), a.get("type"))
                for a in obj["args"]
            ),
            kind=obj["kind"],
            head=obj["head"],
            display=obj.get("display", obj["pred"]),
            variant=obj.get("variant"),
            prepositional=bool(obj.get("prepositional", False)),
        )
        tag = None
        if obj.get("tag") is not None:
            tag = ModalTag(
                obj["tag"], obj.get("trigger_node", -1), obj.get("trigger", ""),
                obj.get("strength"), obj.get("subcategory"),
            )
        return RelationRecord(obj["doc_id"], obj["sent"], rel, tag, obj.get("certainty"))
    except (KeyError, TypeError, ValueError) as exc:
        raise CorpusFormatError(f"{where}: malformed relation record ({exc})") from None


def read_relations(path) -> Iterator[RelationRecord]:
    with open_text(path) as f:
        for lineno, obj in _iter_json_lines(f):
            yield record_from_dict(obj, f"line {lineno}")


def write_relations(records: Iterable[RelationRecord], path) -> None:
    """Write records sorted by (doc_id, sentence, predicate head, ...)."""
    records = sorted(records, key=RelationRecord.sort_key)
    try:
        with open_text(path, "w") as f:
            for rec in records:
                f.write(_json_line(record_to_dict(rec)))
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write relations: {exc.strerror}", str(path)) from exc
