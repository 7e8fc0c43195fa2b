"""Labeled presentation graphs and their symmetries.

A presentation graph is a finite simplicial graph with an integer label
m_ab >= 2 on every edge; it presents an Artin group with one braid relation
per edge.  This module parses and validates such graphs, decides class
membership (large-type: all labels >= 3; free-of-infinity: complete graph),
enumerates label-preserving automorphisms, decides labeled isomorphism, and
builds barycentric subdivisions.

Graph file format (UTF-8): `#` starts a comment line, `edge u v m` declares
an edge with label m >= 2, `vertex u` declares an isolated vertex.  Vertex
names are identifiers; vertex order is first appearance.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field


class GraphFormatError(ValueError):
    """Raised on syntactically or semantically invalid graph input."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


def _edge_key(u: str, v: str) -> frozenset:
    return frozenset((u, v))


@dataclass(frozen=True)
class PresentationGraph:
    """Immutable labeled graph. `vertices` keeps first-appearance order."""

    vertices: tuple[str, ...]
    labels: dict  # frozenset({u, v}) -> int, m >= 2

    def __post_init__(self):
        seen = set()
        for v in self.vertices:
            if v in seen:
                raise GraphFormatError(f"duplicate vertex name {v!r}")
            seen.add(v)
        for e, m in self.labels.items():
            u, v = tuple(e) if len(e) == 2 else (None, None)
            if u is None:
                raise GraphFormatError("self-loop edge")
            if u not in seen or v not in seen:
                raise GraphFormatError(f"edge {set(e)} uses undeclared vertex")
            if not isinstance(m, int) or m < 2:
                raise GraphFormatError(f"label {m} < 2 on edge {set(e)}")

    # -- derived structure ---------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.vertices)

    def edges(self) -> list[frozenset]:
        """Edges sorted by vertex order (deterministic)."""
        idx = {v: i for i, v in enumerate(self.vertices)}
        return sorted(self.labels, key=lambda e: tuple(sorted(idx[v] for v in e)))

    def edge_pairs(self) -> list[tuple[str, str]]:
        idx = {v: i for i, v in enumerate(self.vertices)}
        return [tuple(sorted(e, key=idx.get)) for e in self.edges()]

    def label(self, u: str, v: str) -> int | None:
        return self.labels.get(_edge_key(u, v))

    def adjacent(self, u: str, v: str) -> bool:
        return _edge_key(u, v) in self.labels

    def neighbors(self, u: str) -> list[str]:
        return [v for v in self.vertices if v != u and self.adjacent(u, v)]

    def degree(self, u: str) -> int:
        return len(self.neighbors(u))

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        todo = [self.vertices[0]]
        seen = {self.vertices[0]}
        while todo:
            u = todo.pop()
            for v in self.neighbors(u):
                if v not in seen:
                    seen.add(v)
                    todo.append(v)
        return len(seen) == len(self.vertices)

    def is_complete(self) -> bool:
        n = self.rank
        return len(self.labels) == n * (n - 1) // 2

    def is_large_type(self) -> bool:
        return all(m >= 3 for m in self.labels.values())

    def incident_label_multiset(self, u: str) -> tuple:
        return tuple(sorted(self.label(u, v) for v in self.neighbors(u)))


@dataclass(frozen=True)
class LabeledGraphMap:
    """A label-preserving bijection between the vertex sets of two graphs."""

    mapping: tuple  # tuple of (source, target) pairs in source vertex order

    def __call__(self, v: str) -> str:
        for s, t in self.mapping:
            if s == v:
                return t
        raise KeyError(v)

    def as_dict(self) -> dict:
        return dict(self.mapping)

    def compose(self, other: "LabeledGraphMap") -> "LabeledGraphMap":
        """self after other (both must be automorphisms of one graph)."""
        d = self.as_dict()
        return LabeledGraphMap(tuple((s, d[t]) for s, t in other.mapping))

    def inverse(self) -> "LabeledGraphMap":
        sources = [s for s, _ in self.mapping]
        inv = {t: s for s, t in self.mapping}
        return LabeledGraphMap(tuple((s, inv[s]) for s in sources))


def parse_graph(text: str) -> PresentationGraph:
    """Parse the graph file format; raises GraphFormatError with line numbers."""
    vertices: list[str] = []
    seen: set[str] = set()
    labels: dict = {}

    def declare(name: str, line: int):
        if not _NAME_RE.match(name):
            raise GraphFormatError(f"bad vertex name {name!r}", line)
        if name not in seen:
            seen.add(name)
            vertices.append(name)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if parts[0] == "edge":
            if len(parts) != 4:
                raise GraphFormatError("expected `edge <u> <v> <m>`", lineno)
            u, v, mtxt = parts[1], parts[2], parts[3]
            if u == v:
                raise GraphFormatError(f"self-loop at {u!r}", lineno)
            try:
                m = int(mtxt)
            except ValueError:
                raise GraphFormatError(f"label {mtxt!r} is not an integer", lineno)
            if m < 2:
                raise GraphFormatError(f"label {m} < 2", lineno)
            declare(u, lineno)
            declare(v, lineno)
            key = _edge_key(u, v)
            if key in labels:
                raise GraphFormatError(f"duplicate edge {u} {v}", lineno)
            labels[key] = m
        elif parts[0] == "vertex":
            if len(parts) != 2:
                raise GraphFormatError("expected `vertex <u>`", lineno)
            declare(parts[1], lineno)
        else:
            raise GraphFormatError(f"unknown directive {parts[0]!r}", lineno)

    return PresentationGraph(tuple(vertices), labels)


def graph_to_text(G: PresentationGraph) -> str:
    lines = []
    in_edges = set()
    for u, v in G.edge_pairs():
        lines.append(f"edge {u} {v} {G.label(u, v)}")
        in_edges.update((u, v))
    for v in G.vertices:
        if v not in in_edges:
            lines.append(f"vertex {v}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ClassReport:
    large_type: bool
    free_of_infinity: bool
    rank: int
    connected: bool

    @property
    def rank_at_least_3(self) -> bool:
        return self.rank >= 3

    @property
    def in_scope(self) -> bool:
        return (
            self.large_type
            and self.free_of_infinity
            and self.rank_at_least_3
            and self.connected
        )

    def as_dict(self) -> dict:
        return {
            "large_type": self.large_type,
            "free_of_infinity": self.free_of_infinity,
            "rank": self.rank,
            "rank_at_least_3": self.rank_at_least_3,
            "connected": self.connected,
            "in_scope": self.in_scope,
        }


def validate_class(G: PresentationGraph) -> ClassReport:
    """Report (never raise) whether G presents a large-type free-of-infinity
    Artin group of rank at least 3."""
    return ClassReport(
        large_type=G.is_large_type(),
        free_of_infinity=G.is_complete(),
        rank=G.rank,
        connected=G.is_connected(),
    )


def _extend(G: PresentationGraph, H: PresentationGraph, partial: dict, used: set, order: list):
    """Backtracking search for label-preserving bijections G -> H."""
    if len(partial) == len(order):
        yield dict(partial)
        return
    u = order[len(partial)]
    for w in H.vertices:
        if w in used:
            continue
        if G.incident_label_multiset(u) != H.incident_label_multiset(w):
            continue
        ok = True
        for u2, w2 in partial.items():
            if G.label(u, u2) != H.label(w, w2):
                ok = False
                break
        if ok:
            partial[u] = w
            used.add(w)
            yield from _extend(G, H, partial, used, order)
            used.remove(w)
            del partial[u]


def _isomorphisms(G: PresentationGraph, H: PresentationGraph):
    """All label-preserving bijections G -> H, in lexicographic target order."""
    if G.rank != H.rank or len(G.labels) != len(H.labels):
        return
    if sorted(G.labels.values()) != sorted(H.labels.values()):
        return
    order = list(G.vertices)
    yield from _extend(G, H, {}, set(), order)


def graph_automorphisms(G: PresentationGraph) -> list[LabeledGraphMap]:
    """The full group of label-preserving graph automorphisms, identity first.

    The output is checked to be a group: closed under composition and inverse.
    """
    maps = [
        LabeledGraphMap(tuple((v, d[v]) for v in G.vertices))
        for d in _isomorphisms(G, G)
    ]
    ident = LabeledGraphMap(tuple((v, v) for v in G.vertices))
    maps.sort(key=lambda f: tuple(f(v) for v in G.vertices))
    maps.remove(ident)
    maps.insert(0, ident)
    table = {f.mapping for f in maps}
    for f in maps:
        assert f.inverse().mapping in table, "automorphism set not closed under inverse"
        for g in maps:
            assert f.compose(g).mapping in table, "automorphism set not closed under composition"
    return maps


def labeled_isomorphism(G: PresentationGraph, H: PresentationGraph):
    """Lexicographically least label-preserving isomorphism G -> H, or None."""
    best = None
    for d in _isomorphisms(G, H):
        key = tuple(d[v] for v in G.vertices)
        if best is None or key < best[0]:
            best = (key, d)
    if best is None:
        return None
    return LabeledGraphMap(tuple((v, best[1][v]) for v in G.vertices))


@dataclass(frozen=True)
class BarGraph:
    """Barycentric subdivision of a presentation graph.

    Bipartite: one node per vertex of the source graph (kind "v") and one per
    edge (kind "e"); node ("v", a) is adjacent to ("e", (a, b)) for every edge
    at a.  Edge nodes are named by a sorted vertex pair.
    """

    nodes: tuple  # tuple of ("v", name) and ("e", (u, v)) entries
    adjacency: tuple  # tuple of (node, node) pairs

    def node_list(self, kind: str) -> list:
        return [n for n in self.nodes if n[0] == kind]

    def neighbors(self, node) -> list:
        out = []
        for a, b in self.adjacency:
            if a == node:
                out.append(b)
            elif b == node:
                out.append(a)
        return out


def barycentric_subdivision(G: PresentationGraph) -> BarGraph:
    idx = {v: i for i, v in enumerate(G.vertices)}
    vnodes = [("v", v) for v in G.vertices]
    enodes = [("e", pair) for pair in G.edge_pairs()]
    adj = []
    for pair in G.edge_pairs():
        for end in pair:
            adj.append((("v", end), ("e", pair)))
    bar = BarGraph(tuple(vnodes + enodes), tuple(adj))
    assert len(bar.adjacency) == 2 * len(G.labels)
    return bar


# -- small builders used across the test-suite -------------------------------


def complete_graph(names, labels) -> PresentationGraph:
    """K_n on `names`; `labels` is one int for all edges or a dict keyed by
    sorted vertex pair."""
    names = tuple(names)
    table = {}
    for u, v in itertools.combinations(names, 2):
        m = labels if isinstance(labels, int) else labels[tuple(sorted((u, v)))]
        table[_edge_key(u, v)] = m
    return PresentationGraph(names, table)
