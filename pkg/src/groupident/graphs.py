"""Qualification graphs, auxiliary separator graphs, and minimum vertex cuts.

Vertices are identified by hashable labels: individual indices stay integers,
the two distinguished vertices are the strings "v*" (source) and "w" (sink).
"""

from __future__ import annotations

from collections import deque

from .model import QUALIFY, Society

SOURCE = "v*"
SINK = "w"


class Infeasible(RuntimeError):
    """No separator exists: the sink stays reachable even after removing
    every removable vertex."""


class SeedTargetConflict(RuntimeError):
    """A unanimously qualified individual sits inside the protected target
    set, so no deletion can cut it off."""


class DiGraph:
    """Immutable digraph over labelled vertices, no duplicate arcs."""

    def __init__(self, labels, arcs):
        self.labels = tuple(labels)
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate vertex labels")
        self.index = {lab: i for i, lab in enumerate(self.labels)}
        out = [set() for _ in self.labels]
        for u, v in arcs:
            out[self.index[u]].add(self.index[v])
        self.out = tuple(tuple(sorted(s)) for s in out)

    @property
    def n(self):
        return len(self.labels)

    def arcs(self):
        for u, neigh in enumerate(self.out):
            for v in neigh:
                yield self.labels[u], self.labels[v]

    def has_arc(self, u, v):
        return self.index[v] in set(self.out[self.index[u]])

    def out_neighbors(self, u):
        return tuple(self.labels[v] for v in self.out[self.index[u]])

    def reachable(self, start, removed=()):
        """Labels reachable from start without entering removed vertices."""
        removed = {self.index[r] for r in removed}
        s = self.index[start]
        if s in removed:
            return frozenset()
        seen = {s}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in self.out[u]:
                if v not in seen and v not in removed:
                    seen.add(v)
                    queue.append(v)
        return frozenset(self.labels[u] for u in seen)


def qualification_graph(society: Society) -> DiGraph:
    """Arc (a, b) iff a qualifies b, self-loops included."""
    n = society.n
    arcs = [(a, b) for a in range(n) for b in range(n)
            if society.phi[a][b] == QUALIFY]
    return DiGraph(range(n), arcs)


def _opinion_arcs(society: Society, members) -> list:
    # self-loops are irrelevant for separator questions, leave them out
    return [(a, b) for a in members for b in members
            if a != b and society.phi[a][b] == QUALIFY]


def lsr_aux_graph(society: Society, aminus) -> DiGraph:
    """Separator graph for destruction under the liberal-start rule.

    v* feeds every self-qualifier; every target individual keeps its own
    vertex and gains an arc to the sink w (targets stay deletable, which is
    why they are not merged away).
    """
    aminus = frozenset(aminus)
    if not aminus:
        raise ValueError("aminus must be nonempty")
    members = sorted(society.individuals())
    arcs = _opinion_arcs(society, members)
    for a in members:
        if society.phi[a][a] == QUALIFY:
            arcs.append((SOURCE, a))
    for a in sorted(aminus):
        arcs.append((a, SINK))
    return DiGraph(members + [SOURCE, SINK], arcs)


def csr_aux_graph(society: Society, aminus, merge: bool = True) -> DiGraph:
    """Separator graph for destruction under the consensus-start rule.

    v* feeds every unanimously qualified individual.  With merge=True the
    target individuals are merged into the sink w (they may not be deleted);
    merge=False keeps them as ordinary vertices with arcs to w, for
    diagnostics.  Raises SeedTargetConflict when a target individual is
    already unanimously qualified.
    """
    aminus = frozenset(aminus)
    if not aminus:
        raise ValueError("aminus must be nonempty")
    members = sorted(society.individuals())
    seed = [a for a in members
            if all(society.phi[b][a] == QUALIFY for b in members)]
    if aminus & set(seed):
        raise SeedTargetConflict(
            f"individuals {sorted(aminus & set(seed))} are qualified by everyone")
    arcs = _opinion_arcs(society, members)
    for a in seed:
        arcs.append((SOURCE, a))
    if not merge:
        for a in sorted(aminus):
            arcs.append((a, SINK))
        return DiGraph(members + [SOURCE, SINK], arcs)
    g = DiGraph(members + [SOURCE], arcs)
    return merge_vertices(g, aminus, SINK)


def merge_vertices(g: DiGraph, group, new_label) -> DiGraph:
    """Replace the vertices in group by one new vertex.

    The new vertex inherits arcs from in-neighbors outside the group and to
    out-neighbors outside the group; arcs inside the group disappear, so no
    self-loop is created.
    """
    group = frozenset(group)
    if not group:
        raise ValueError("group must be nonempty")
    if new_label in set(g.labels) - group:
        raise ValueError("new label collides with a surviving vertex")
    keep = [lab for lab in g.labels if lab not in group]
    arcs = []
    for u, v in g.arcs():
        iu, iv = u in group, v in group
        if iu and iv:
            continue
        if iu:
            arcs.append((new_label, v))
        elif iv:
            arcs.append((u, new_label))
        else:
            arcs.append((u, v))
    return DiGraph(keep + [new_label], arcs)


def min_vertex_separator(g: DiGraph, source=SOURCE, sink=SINK, forbidden=()) -> frozenset:
    """Minimum set of vertices (not source/sink/forbidden) whose removal cuts
    every source-to-sink path.

    Classic vertex-splitting max-flow: every removable vertex becomes an
    in/out pair joined by a unit-capacity arc, everything else gets effectively
    infinite capacity.  The returned cut is canonical: vertices whose in-node
    is residually reachable from the source while the out-node is not.
    Raises Infeasible when even removing all allowed vertices leaves a path.
    """
    forbidden = frozenset(forbidden)
    if source == sink:
        raise ValueError("source and sink must differ")
    if source in forbidden or sink in forbidden:
        raise ValueError("source and sink cannot be forbidden")
    # pre-check: a path through only forbidden vertices can never be cut
    blocked = [lab for lab in g.labels
               if lab not in forbidden and lab not in (source, sink)]
    if sink in g.reachable(source, removed=blocked):
        raise Infeasible("a source-sink path avoids every removable vertex")

    inf = g.n + 1
    node_in = {}
    node_out = {}
    count = 0
    for lab in g.labels:
        node_in[lab] = count
        node_out[lab] = count + 1
        count += 2

    cap = {}
    adj = [[] for _ in range(count)]

    def add_edge(u, v, c):
        if (u, v) not in cap:
            cap[(u, v)] = 0
            cap[(v, u)] = 0
            adj[u].append(v)
            adj[v].append(u)
        cap[(u, v)] += c

    for lab in g.labels:
        if lab in (source, sink):
            add_edge(node_in[lab], node_out[lab], inf)
        elif lab in forbidden:
            add_edge(node_in[lab], node_out[lab], inf)
        else:
            add_edge(node_in[lab], node_out[lab], 1)
    for u, v in g.arcs():
        if u == v:
            continue
        add_edge(node_out[u], node_in[v], inf)

    s, t = node_out[source], node_in[sink]

    def bfs_path():
        parent = {s: None}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            if u == t:
                break
            for v in adj[u]:
                if v not in parent and cap[(u, v)] > 0:
                    parent[v] = u
                    queue.append(v)
        if t not in parent:
            return None
        path = []
        v = t
        while parent[v] is not None:
            path.append((parent[v], v))
            v = parent[v]
        return path

    flow = 0
    while True:
        path = bfs_path()
        if path is None:
            break
        push = min(cap[e] for e in path)
        for u, v in path:
            cap[(u, v)] -= push
            cap[(v, u)] += push
        flow += push
        if flow > g.n:
            raise AssertionError("flow exceeded vertex count, infeasibility missed")

    # canonical cut from residual reachability
    seen = {s}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in seen and cap[(u, v)] > 0:
                seen.add(v)
                queue.append(v)
    cut = frozenset(
        lab for lab in g.labels
        if lab not in (source, sink) and lab not in forbidden
        and node_in[lab] in seen and node_out[lab] not in seen)
    if len(cut) != flow:
        raise AssertionError("cut size disagrees with flow value")
    return cut
