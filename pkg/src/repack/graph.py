"""Constraint graph, interference graph and the derived component views.

Vertices of the constraint graph are the in-domain station-channel pairs,
indexed densely in ``(station, channel)`` order.  The interference-only view
and its within-component augmentation reuse that indexing, so vertex ``i``
means the same pair in every view.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Literal, Mapping, Sequence

from .model import Instance, StationChannel, StationId

EdgeKind = Literal["interference", "at-most"]


@dataclass(frozen=True)
class GraphView:
    """Immutable simple graph: vertex labels plus sorted neighbour tuples."""

    vertices: tuple
    adj: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.vertices)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, nbrs in enumerate(self.adj):
            for v in nbrs:
                if u < v:
                    yield u, v

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def has_edge(self, u: int, v: int) -> bool:
        nbrs = self.adj[u]
        lo, hi = 0, len(nbrs)
        while lo < hi:
            mid = (lo + hi) // 2
            if nbrs[mid] < v:
                lo = mid + 1
            else:
                hi = mid
        return lo < len(nbrs) and nbrs[lo] == v

    def station_of(self, v: int) -> StationId:
        return self.vertices[v][0]


def _freeze(adj: Sequence[set]) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(sorted(a)) for a in adj)


@dataclass(frozen=True)
class ConstraintGraph(GraphView):
    """Constraint graph ``G`` with its edges split by kind.

    ``interference_adj`` holds the edges coming from interference
    constraints, ``atmost_adj`` the same-station clique edges.
    """

    interference_adj: tuple[tuple[int, ...], ...] = ()
    atmost_adj: tuple[tuple[int, ...], ...] = ()
    station_index: Mapping[StationId, tuple[int, ...]] = field(default_factory=dict)
    index: Mapping[StationChannel, int] = field(default_factory=dict, compare=False, repr=False)
    # elements touched while building, for the construction-cost contract
    build_ops: int = field(default=0, compare=False)

    def edge_kind(self, u: int, v: int) -> EdgeKind:
        if self.station_of(u) == self.station_of(v):
            if u != v and self.has_edge(u, v):
                return "at-most"
        elif v in self.interference_adj[u]:
            return "interference"
        raise KeyError(f"no edge between {u} and {v}")

    def labeled_edges(self) -> frozenset:
        """Edges as ``(pair, pair, kind)`` triples, independent of indexing."""
        out = set()
        for u, v in self.edges():
            kind = "at-most" if self.station_of(u) == self.station_of(v) else "interference"
            out.add((self.vertices[u], self.vertices[v], kind))
        return frozenset(out)

    def induced(self, keep: Iterable[int]) -> "ConstraintGraph":
        """Induced subgraph on ``keep``, re-indexed in vertex order."""
        keep = sorted(set(keep))
        remap = {old: new for new, old in enumerate(keep)}

        def sub(adj):
            return tuple(tuple(remap[w] for w in adj[v] if w in remap) for v in keep)

        vertices = tuple(self.vertices[v] for v in keep)
        return _assemble(vertices, sub(self.interference_adj), sub(self.atmost_adj), 0)


def _assemble(vertices, inter_adj, atmost_adj, ops) -> ConstraintGraph:
    adj = tuple(tuple(sorted(set(a) | set(b))) for a, b in zip(inter_adj, atmost_adj))
    stations: dict[StationId, list[int]] = {}
    for i, (s, _) in enumerate(vertices):
        stations.setdefault(s, []).append(i)
    return ConstraintGraph(
        vertices=vertices,
        adj=adj,
        interference_adj=tuple(tuple(a) for a in inter_adj),
        atmost_adj=tuple(tuple(a) for a in atmost_adj),
        station_index={s: tuple(v) for s, v in stations.items()},
        index={p: i for i, p in enumerate(vertices)},
        build_ops=ops,
    )


def build_constraint_graph(instance: Instance) -> ConstraintGraph:
    """Build ``G``: in-domain pairs joined by interference and at-most edges.

    Constraints touching an out-of-domain channel contribute no edge.
    """
    ops = 0
    vertices = []
    for s, chans in instance.domains.items():
        for c in sorted(chans):
            vertices.append(StationChannel(s, c))
            ops += 1
    index = {p: i for i, p in enumerate(vertices)}
    inter: list[set[int]] = [set() for _ in vertices]
    atmost: list[set[int]] = [set() for _ in vertices]
    for con in instance.constraints:
        ops += 1
        u, v = index.get(con.a), index.get(con.b)
        if u is not None and v is not None:
            inter[u].add(v)
            inter[v].add(u)
    start = 0
    while start < len(vertices):
        end = start
        while end < len(vertices) and vertices[end].station == vertices[start].station:
            end += 1
        for u in range(start, end):
            for v in range(u + 1, end):
                ops += 1
                atmost[u].add(v)
                atmost[v].add(u)
        start = end
    return _assemble(tuple(vertices), _freeze(inter), _freeze(atmost), ops)


@dataclass(frozen=True)
class InterferenceGraph(GraphView):
    """Station-level graph ``H``; ``vertices`` are station ids in ascending order."""

    position: Mapping[StationId, int] = field(default_factory=dict, compare=False, repr=False)

    def neighbors(self, s: StationId) -> tuple[StationId, ...]:
        return tuple(self.vertices[i] for i in self.adj[self.position[s]])

    def station_degree(self, s: StationId) -> int:
        return len(self.adj[self.position[s]])


def build_interference_graph(instance: Instance, effective_only: bool = False) -> InterferenceGraph:
    """Build ``H``: stations are adjacent iff they share an interference constraint.

    With ``effective_only`` only constraints whose both endpoints are inside
    the stations' domains count.
    """
    stations = instance.stations
    pos = {s: i for i, s in enumerate(stations)}
    adj: list[set[int]] = [set() for _ in stations]
    for con in instance.constraints:
        (s, c), (t, d) = con
        if effective_only and (c not in instance.domains[s] or d not in instance.domains[t]):
            continue
        adj[pos[s]].add(pos[t])
        adj[pos[t]].add(pos[s])
    return InterferenceGraph(vertices=stations, adj=_freeze(adj), position=pos)


def interference_subgraph(G: ConstraintGraph) -> GraphView:
    """``G_I = G - A``: same vertices, interference edges only."""
    return GraphView(G.vertices, G.interference_adj)


def component_labels(view: GraphView) -> list[int]:
    """Per-vertex component label; labels are numbered in order of smallest vertex."""
    label = [-1] * view.n
    count = 0
    for root in range(view.n):
        if label[root] >= 0:
            continue
        label[root] = count
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in view.adj[u]:
                if label[w] < 0:
                    label[w] = count
                    queue.append(w)
        count += 1
    return label


def components(view: GraphView) -> list[tuple[int, ...]]:
    """Connected components, ascending by size, ties broken by smallest vertex."""
    groups: dict[int, list[int]] = {}
    for v, lab in enumerate(component_labels(view)):
        groups.setdefault(lab, []).append(v)
    return sorted((tuple(g) for g in groups.values()), key=lambda g: (len(g), g[0]))


def augment_within_components(G: ConstraintGraph, G_I: GraphView | None = None) -> GraphView:
    """``G_I'``: ``G_I`` plus the at-most edges whose endpoints share a ``G_I`` component."""
    if G_I is None:
        G_I = interference_subgraph(G)
    label = component_labels(G_I)
    adj = []
    for u in range(G.n):
        extra = [w for w in G.atmost_adj[u] if label[w] == label[u]]
        adj.append(tuple(sorted(set(G_I.adj[u]).union(extra))))
    return GraphView(G.vertices, tuple(adj))


@dataclass(frozen=True)
class GraphStats:
    vertex_count: int
    edge_count: int
    min_degree: int
    max_degree: int
    component_count: int
    nontrivial_component_count: int
    isolated_vertex_count: int
    largest_component_sizes: tuple[int, ...]
    clique_lower_bound: int

    def to_dict(self) -> dict:
        return {
            "vertex_count": self.vertex_count,
            "edge_count": self.edge_count,
            "min_degree": self.min_degree,
            "max_degree": self.max_degree,
            "component_count": self.component_count,
            "nontrivial_component_count": self.nontrivial_component_count,
            "isolated_vertex_count": self.isolated_vertex_count,
            "largest_component_sizes": list(self.largest_component_sizes),
            "clique_lower_bound": self.clique_lower_bound,
        }


def _clique_lower_bound(view: GraphView) -> int:
    if view.n == 0:
        return 0
    if isinstance(view, ConstraintGraph):
        # each station's vertices form a clique
        return max(len(v) for v in view.station_index.values())
    start = max(range(view.n), key=lambda v: (len(view.adj[v]), -v))
    clique = [start]
    common = set(view.adj[start])
    for w in view.adj[start]:
        if w in common:
            clique.append(w)
            common.intersection_update(view.adj[w])
    return len(clique)


def stats(view: GraphView) -> GraphStats:
    degrees = [len(a) for a in view.adj]
    comps = components(view)
    sizes = sorted((len(c) for c in comps), reverse=True)
    return GraphStats(
        vertex_count=view.n,
        edge_count=view.edge_count,
        min_degree=min(degrees, default=0),
        max_degree=max(degrees, default=0),
        component_count=len(comps),
        nontrivial_component_count=sum(1 for c in comps if len(c) > 1),
        isolated_vertex_count=sum(1 for d in degrees if d == 0),
        largest_component_sizes=tuple(sizes[:3]),
        clique_lower_bound=_clique_lower_bound(view),
    )
