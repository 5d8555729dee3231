"""CCG dependency graphs.

Edges point from the functor (head) to its argument (dependent) and carry
the CCG argument slot. Graphs are not trees: a node may have several heads
and cycles are tolerated.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from montee.errors import GraphError

# Supertags of inverted "had" heading a counterfactual antecedent.
COUNTERFACTUAL_HAD_SUPERTAGS = frozenset({
    r"(((S\NP)\(S\NP))/(S[pt]\NP))/NP",
    r"((S/S)/(S[pt]\NP))/NP",
})


@dataclass(frozen=True)
class Entity:
    id: str
    figer_type: str | None = None


@dataclass(frozen=True)
class DepNode:
    index: int
    form: str
    lemma: str
    pos: str
    supertag: str = ""
    entity: Entity | None = None


class Edge(NamedTuple):
    head: int
    dep: int
    slot: int


@dataclass(frozen=True)
class DepGraph:
    nodes: tuple[DepNode, ...]
    edges: tuple[Edge, ...] = ()
    _out: dict = field(init=False, repr=False, compare=False)
    _in: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        nodes = tuple(self.nodes)
        for k, node in enumerate(nodes):
            if node.index != k:
                raise GraphError(f"node at position {k} has index {node.index}")
        edges = []
        for e in self.edges:
            e = Edge(*e)
            if not (0 <= e.head < len(nodes) and 0 <= e.dep < len(nodes)):
                raise GraphError(f"edge {tuple(e)} references a missing node")
            if e.slot < 1:
                raise GraphError(f"edge {tuple(e)} has non-positive slot")
            edges.append(e)
        edges = tuple(sorted(set(edges)))
        out: dict[int, list[Edge]] = {}
        inc: dict[int, list[Edge]] = {}
        for e in edges:
            out.setdefault(e.head, []).append(e)
            inc.setdefault(e.dep, []).append(e)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "_out", {k: tuple(v) for k, v in out.items()})
        object.__setattr__(self, "_in", {k: tuple(v) for k, v in inc.items()})

    def __len__(self):
        return len(self.nodes)

    def __getitem__(self, i: int) -> DepNode:
        return self.nodes[i]

    def out_edges(self, i: int) -> tuple[Edge, ...]:
        return self._out.get(i, ())

    def in_edges(self, i: int) -> tuple[Edge, ...]:
        return self._in.get(i, ())

    def without_edges(self, drop: Iterable[tuple[int, int]]) -> DepGraph:
        drop = set(drop)
        return DepGraph(self.nodes, tuple(e for e in self.edges if (e.head, e.dep) not in drop))

    @property
    def lemmas(self) -> list[str]:
        return [n.lemma for n in self.nodes]

    @property
    def pos_tags(self) -> list[str]:
        return [n.pos for n in self.nodes]


def visit_reachable(g: DepGraph, src: int) -> frozenset[int]:
    seen = {src}
    queue = deque([src])
    while queue:
        for e in g.out_edges(queue.popleft()):
            if e.dep not in seen:
                seen.add(e.dep)
                queue.append(e.dep)
    return frozenset(seen)


def path_between(g: DepGraph, src: int, dst: int) -> bool:
    """True iff ``dst`` can be reached from ``src`` along head-to-dependent edges."""
    return dst in visit_reachable(g, src)


def is_counterfactual_had(node: DepNode) -> bool:
    return (
        node.lemma == "have"
        and node.form.lower() == "had"
        and "".join(node.supertag.split()) in COUNTERFACTUAL_HAD_SUPERTAGS
    )


def check_cf(g: DepGraph, n: int) -> bool:
    """Counterfactual trigger test for node ``n``.

    Holds for an inverted "had" carrying one of the two antecedent supertags,
    and for any "if" from which such a "had" is reachable.
    """
    node = g[n]
    if is_counterfactual_had(node):
        return True
    if node.lemma == "if" and node.form.lower() == "if":
        return any(is_counterfactual_had(g[m]) for m in visit_reachable(g, n) if m != n)
    return False
