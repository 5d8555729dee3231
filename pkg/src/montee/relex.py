"""Event relation extraction from CCG dependency graphs.

Predicates are found by walking out of verb and preposition nodes until a
nominal argument is reached. The nodes crossed on the way (the verb, its
particles, infinitival "to", prepositions) make up the predicate chain.

A few structural rules decide what gets emitted:

* auxiliaries (be/have/do taking a verbal complement) are never predicates;
* a verb taking an infinitival complement ("failed to investigate") is a
  modifier: it yields one relation over the whole chain, and the embedded
  verb is not extracted on its own. The chain without the modifier is
  attached as ``stripped``;
* a copula with an adjectival or nominal complement yields
  ``be.<complement>`` ("be.willing", "be.climate.activist"), unless the
  adjective itself takes a verbal complement ("ready to talk");
* a preposition modifying a noun yields a bare prepositional relation,
  kept for n-ary composition and dropped from output by default;
* passive participles are mapped to the active predicate.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from montee.depgraph import DepGraph, DepNode

NOMINAL_POS = frozenset({"NN", "NNS", "NNP", "NNPS", "PRP", "CD"})
PREPOSITION_POS = frozenset({"IN", "TO"})
AUXILIARY_LEMMAS = frozenset({"be", "have", "do"})
COMPOUND_POS_PREFIXES = ("NN", "JJ", "CD")

KIND_ORDER = {"unary": 0, "binary": 1, "nary": 2}


@dataclass(frozen=True)
class Argument:
    head: int
    text: str
    kind: str = "general"
    figer_type: str | None = None


@dataclass(frozen=True)
class EventRelation:
    pred_nodes: tuple[int, ...]
    pred_string: str
    slots: tuple[int, ...]
    args: tuple[Argument, ...]
    kind: str
    head: int
    display: str
    variant: str | None = None
    prepositional: bool = False
    stripped: EventRelation | None = field(default=None, compare=False, repr=False)
    parts: tuple[EventRelation, EventRelation] | None = field(default=None, compare=False, repr=False)

    def labels(self) -> tuple[str, ...]:
        """Per-argument predicate labels, e.g. ``("attack.1", "attack.2")``."""
        return tuple(f"{self.pred_string}.{s}" for s in self.slots)

    def sort_key(self):
        return (
            self.head,
            KIND_ORDER[self.kind],
            self.pred_string,
            self.slots,
            tuple(a.head for a in self.args),
            self.variant or "",
            self.display,
        )

    def render(self, tag: str | None = None) -> str:
        """Human-readable form: ``NEG_(Protesters; attack; police)``."""
        if self.kind == "nary":
            a1, a2, a3 = self.args
            body = f"{a1.text}; {self.display}; {a3.text}"
        else:
            body = "; ".join([self.args[0].text, self.display] + [a.text for a in self.args[1:]])
        prefix = f"{tag}_" if tag else ""
        return f"{prefix}({body})"


@dataclass(frozen=True)
class _Arg:
    node: int
    slot: int
    via: tuple[int, ...] = ()
    shown: bool = True


# -- node classes -------------------------------------------------------------

def is_verb(node: DepNode) -> bool:
    return node.pos.startswith("VB")


def is_nominal(node: DepNode) -> bool:
    return node.pos in NOMINAL_POS or node.entity is not None


def is_adjective(node: DepNode) -> bool:
    return node.pos.startswith("JJ")


def is_auxiliary(g: DepGraph, i: int) -> bool:
    node = g[i]
    return (
        is_verb(node)
        and node.lemma in AUXILIARY_LEMMAS
        and any(is_verb(g[e.dep]) for e in g.out_edges(i))
    )


def prep_object(g: DepGraph, i: int) -> int | None:
    """Nominal object of preposition ``i`` (its highest-slot nominal dependent)."""
    if g[i].pos not in PREPOSITION_POS:
        return None
    best = None
    for e in g.out_edges(i):
        if is_nominal(g[e.dep]) and (best is None or (e.slot, e.dep) > best):
            best = (e.slot, e.dep)
    return best[1] if best else None


def _prep_object_slot(g: DepGraph, i: int, obj: int) -> int:
    return max(e.slot for e in g.out_edges(i) if e.dep == obj)


def prep_modifiee(g: DepGraph, i: int) -> int | None:
    """What an adjunct preposition modifies: its non-object dependent with the lowest slot."""
    obj = prep_object(g, i)
    cands = [(e.slot, e.dep) for e in g.out_edges(i) if e.dep != obj]
    return min(cands)[1] if cands else None


def is_passive(g: DepGraph, i: int) -> bool:
    node = g[i]
    if node.pos != "VBN":
        return False
    if "S[pss]" in node.supertag:
        return True
    return any(g[e.head].lemma == "be" and is_verb(g[e.head]) for e in g.in_edges(i))


def infinitival_complement(g: DepGraph, i: int) -> tuple[int, int] | None:
    """``(to, verb)`` when verb ``i`` takes a "to"-infinitive."""
    for e in g.out_edges(i):
        if g[e.dep].pos == "TO":
            for e2 in g.out_edges(e.dep):
                if is_verb(g[e2.dep]):
                    return e.dep, _main_verb(g, e2.dep)
    return None


def _main_verb(g: DepGraph, i: int) -> int:
    seen = {i}
    while is_auxiliary(g, i):
        nxt = [e.dep for e in g.out_edges(i) if is_verb(g[e.dep]) and e.dep not in seen]
        if not nxt:
            break
        i = nxt[0]
        seen.add(i)
    return i


def _is_modifier(g: DepGraph, i: int) -> bool:
    return is_verb(g[i]) and not is_auxiliary(g, i) and infinitival_complement(g, i) is not None


def governed_by_modifier(g: DepGraph, i: int) -> bool:
    """True if ``i`` (possibly through auxiliaries) is the infinitive of a modifier verb."""
    seen = {i}
    stack = [i]
    while stack:
        for e in g.in_edges(stack.pop()):
            head = e.head
            if g[head].pos == "TO":
                if any(_is_modifier(g, e2.head) for e2 in g.in_edges(head)):
                    return True
            elif head not in seen and is_auxiliary(g, head):
                seen.add(head)
                stack.append(head)
    return False


# -- argument spans -------------------------------------------------------------

def argument_span(g: DepGraph, i: int) -> list[int]:
    """Token indices of the mention headed by ``i``."""
    node = g[i]
    if node.entity is not None:
        lo = hi = i
        while lo > 0 and g[lo - 1].entity is not None and g[lo - 1].entity.id == node.entity.id:
            lo -= 1
        while hi + 1 < len(g) and g[hi + 1].entity is not None and g[hi + 1].entity.id == node.entity.id:
            hi += 1
        return list(range(lo, hi + 1))
    span = {i}
    frontier = [i]
    while frontier:
        cur = frontier.pop()
        for e in g.in_edges(cur):
            m = e.head
            if m not in span and g[m].pos.startswith(COMPOUND_POS_PREFIXES) and m < cur:
                span.add(m)
                frontier.append(m)
    # keep only the run contiguous with the head
    lo = i
    while lo - 1 in span:
        lo -= 1
    return list(range(lo, i + 1))


def make_argument(g: DepGraph, i: int) -> Argument:
    node = g[i]
    text = " ".join(g[k].form for k in argument_span(g, i))
    if node.entity is not None:
        return Argument(i, text, "named", node.entity.figer_type)
    return Argument(i, text, "general")


# -- predicate frames -------------------------------------------------------------

@dataclass
class _Frame:
    chain: tuple[int, ...]          # predicate words in traversal order
    args: list[_Arg]
    event_chain: tuple[int, ...]    # chain without modifiers
    modifier: bool = False


def _collect_args(g: DepGraph, v: int) -> tuple[list[_Arg], list[int]]:
    args: list[_Arg] = []
    particles: list[int] = []
    for e in g.out_edges(v):
        d = g[e.dep]
        if is_nominal(d):
            args.append(_Arg(e.dep, e.slot))
        elif d.pos == "RP":
            particles.append(e.dep)
        elif d.pos in PREPOSITION_POS:
            obj = prep_object(g, e.dep)
            if obj is not None and prep_modifiee(g, e.dep) is None:
                args.append(_Arg(obj, e.slot, (e.dep,), True))
    for e in g.in_edges(v):
        q = e.head
        obj = prep_object(g, q)
        if obj is not None and obj != v and prep_modifiee(g, q) == v:
            args.append(_Arg(obj, _prep_object_slot(g, q, obj), (q,), False))
    return args, sorted(particles)


def _merge_args(outer: Iterable[_Arg], inner: Iterable[_Arg]) -> list[_Arg]:
    merged: dict[int, _Arg] = {}
    for a in list(outer) + list(inner):
        merged.setdefault(a.node, a)
    return sorted(merged.values(), key=lambda a: (a.slot, a.node))


def _verb_frame(g: DepGraph, v: int, seen=frozenset()) -> _Frame:
    args, particles = _collect_args(g, v)
    chain = (v, *particles)
    comp = infinitival_complement(g, v)
    if comp is not None and comp[1] not in seen and comp[1] != v:
        to, w = comp
        inner = _verb_frame(g, w, seen | {v})
        return _Frame(chain + (to,) + inner.chain, _merge_args(args, inner.args), inner.event_chain, True)
    return _Frame(chain, _merge_args(args, ()), chain)


def _copula_frame(g: DepGraph, v: int) -> _Frame | None:
    """Frame for copular "be" with an adjectival or nominal complement."""
    subj, comp = [], None
    for e in g.out_edges(v):
        d = g[e.dep]
        if e.slot == 1 and is_nominal(d):
            subj.append(_Arg(e.dep, 1))
        elif e.slot >= 2 and comp is None and (is_adjective(d) or is_nominal(d)):
            comp = e.dep
    if comp is None:
        return None
    if is_adjective(g[comp]):
        if any(is_verb(g[e.dep]) or g[e.dep].pos == "TO" for e in g.out_edges(comp)):
            return _Frame((), [], ())
        extra, _ = _collect_args(g, comp)
        extra = [a for a in extra if a.via]
        chain = (v, comp)
        return _Frame(chain, _merge_args(subj, extra), chain)
    chain = (v, *argument_span(g, comp))
    return _Frame(chain, _merge_args(subj, ()), chain)


def _frames(g: DepGraph) -> list[_Frame]:
    frames = []
    for node in g.nodes:
        i = node.index
        if not is_verb(node) or is_auxiliary(g, i) or governed_by_modifier(g, i):
            continue
        frame = _copula_frame(g, i) if node.lemma == "be" else None
        if frame is None:
            frame = _verb_frame(g, i)
        if frame.chain:
            frames.append(frame)
    return frames


# -- rendering -------------------------------------------------------------

def _render_pred(g: DepGraph, nodes: Iterable[int]) -> str:
    return ".".join(g[k].lemma for k in nodes)


def _display(g: DepGraph, nodes: Iterable[int], surface: bool) -> str:
    if surface:
        return " ".join(g[k].form for k in sorted(nodes))
    return " ".join(g[k].lemma for k in nodes)


def _relation(g: DepGraph, frame: _Frame, picked: list[_Arg]) -> EventRelation:
    vias = tuple(k for a in picked for k in a.via)
    shown_vias = tuple(k for a in picked if a.shown for k in a.via)
    kind = "unary" if len(picked) == 1 else "binary"
    args = tuple(make_argument(g, a.node) for a in picked)
    slots = tuple(a.slot for a in picked)

    def build(chain, surface, variant=None):
        nodes = chain + vias
        return EventRelation(
            pred_nodes=nodes,
            pred_string=_render_pred(g, nodes),
            slots=slots,
            args=args,
            kind=kind,
            head=chain[0],
            display=_display(g, chain + shown_vias, surface),
            variant=variant,
        )

    rel = build(frame.chain, frame.modifier)
    if frame.modifier:
        rel = dataclasses.replace(rel, stripped=build(frame.event_chain, False, "stripped"))
    return rel


def _frame_relations(g: DepGraph, frame: _Frame, arity: int) -> list[EventRelation]:
    if arity == 1:
        picks = [[a] for a in frame.args] if len(frame.args) == 1 else []
    else:
        picks = [list(p) for p in combinations(frame.args, 2)]
    return [map_passive_to_active(_relation(g, frame, p), g) for p in picks]


def _preposition_relations(g: DepGraph) -> list[EventRelation]:
    rels = []
    for node in g.nodes:
        q = node.index
        obj = prep_object(g, q)
        mod = prep_modifiee(g, q) if obj is not None else None
        if mod is None or not is_nominal(g[mod]):
            continue
        mod_slot = min(e.slot for e in g.out_edges(q) if e.dep == mod)
        rels.append(EventRelation(
            pred_nodes=(q,),
            pred_string=node.lemma,
            slots=(mod_slot, _prep_object_slot(g, q, obj)),
            args=(make_argument(g, mod), make_argument(g, obj)),
            kind="binary",
            head=q,
            display=node.lemma,
            prepositional=True,
        ))
    return rels


# -- public operations -------------------------------------------------------------

def map_passive_to_active(rel: EventRelation, g: DepGraph) -> EventRelation:
    """Rewrite a passive relation with the active predicate.

    The surface subject moves to slot 2 and the by-phrase object, if any, to
    slot 1. Anything not headed by a passive participle is returned as is.
    """
    passive = [k for k in rel.pred_nodes if is_verb(g[k]) and is_passive(g, k)]
    if rel.kind == "nary" or not passive:
        return rel
    p = passive[-1]
    by = next(
        (k for k in rel.pred_nodes if g[k].lemma == "by" and g[k].pos in PREPOSITION_POS
         and (p in {e.dep for e in g.out_edges(k)} or k in {e.dep for e in g.out_edges(p)})),
        None,
    )
    agent = prep_object(g, by) if by is not None else None
    subjects = {e.dep for e in g.out_edges(p) if e.slot == 1}
    slots = []
    for a, s in zip(rel.args, rel.slots):
        if a.head == agent:
            slots.append(1)
        elif a.head in subjects:
            slots.append(2)
        else:
            slots.append(s)
    order = sorted(range(len(rel.args)), key=lambda k: (slots[k], rel.args[k].head))
    nodes = tuple(k for k in rel.pred_nodes if k != by)
    mapped = dataclasses.replace(
        rel,
        pred_nodes=nodes,
        pred_string=_render_pred(g, nodes),
        slots=tuple(slots[k] for k in order),
        args=tuple(rel.args[k] for k in order),
    )
    if rel.stripped is not None:
        mapped = dataclasses.replace(mapped, stripped=map_passive_to_active(rel.stripped, g))
    return mapped


def extract_binary(g: DepGraph) -> list[EventRelation]:
    """Binary relations, including bare prepositional ones used for composition."""
    rels = []
    for frame in _frames(g):
        rels.extend(_frame_relations(g, frame, 2))
    rels.extend(_preposition_relations(g))
    return sorted(set(rels), key=EventRelation.sort_key)


def extract_unary(g: DepGraph) -> list[EventRelation]:
    rels = []
    for frame in _frames(g):
        rels.extend(_frame_relations(g, frame, 1))
    return sorted(set(rels), key=EventRelation.sort_key)


def compose_nary(binaries: Iterable[EventRelation]) -> list[EventRelation]:
    """Join ``(a1; P; a2)`` with ``(a2; prep; a3)`` into ``(a1; P a2 prep; a3)``.

    The second relation must have a single-word predicate that is a
    preposition; the first must not be a bare preposition itself.
    """
    binaries = [r for r in binaries if r.kind == "binary"]
    by_first_arg: dict[int, list[EventRelation]] = {}
    for r in binaries:
        if r.prepositional:
            by_first_arg.setdefault(r.args[0].head, []).append(r)
    out = []
    for r in binaries:
        if r.prepositional or r.variant:
            continue
        for p in by_first_arg.get(r.args[1].head, ()):
            if p.args[1].head in (r.args[0].head, r.args[1].head):
                continue
            a1, a2, a3 = r.args[0], r.args[1], p.args[1]
            out.append(EventRelation(
                pred_nodes=r.pred_nodes + p.pred_nodes,
                pred_string=f"{r.pred_string}.{p.pred_string}",
                slots=(r.slots[0], r.slots[1], p.slots[1]),
                args=(a1, a2, a3),
                kind="nary",
                head=r.head,
                display=f"{r.display} {a2.text} {p.display}",
                parts=(r, p),
            ))
    return sorted(set(out), key=EventRelation.sort_key)


def extract_relations(
    g: DepGraph,
    strip_modifiers: bool = False,
    nary: bool = False,
    keep_prepositions: bool = False,
) -> list[EventRelation]:
    """All relations of a sentence in output order."""
    binaries = extract_binary(g)
    rels = list(extract_unary(g))
    rels += [r for r in binaries if keep_prepositions or not r.prepositional]
    if strip_modifiers:
        rels += [r.stripped for r in rels if r.stripped is not None]
    if nary:
        rels += compose_nary(binaries)
    return sorted(set(rels), key=EventRelation.sort_key)
