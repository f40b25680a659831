"""Graphs, directed graphs and ordered directed graphs.

A graph is a vertex set together with a set of arrows, a head map, and a
fixed-point-free involution ``sigma`` on the arrows; edges are the orbits of
``sigma`` and the tail of an arrow is the head of its partner.  Identifiers
are strings and must be distinct across vertices and arrows of one graph.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence

STAR = "*"


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    pair: frozenset
    representative: str


@dataclass(frozen=True, eq=False)
class Graph:
    vertices: tuple[str, ...]
    arrows: tuple[str, ...]
    head: Mapping[str, str]
    sigma: Mapping[str, str]
    name: str | None = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "arrows", tuple(self.arrows))
        object.__setattr__(self, "head", dict(self.head))
        object.__setattr__(self, "sigma", dict(self.sigma))
        ids = set(self.vertices)
        if len(ids) != len(self.vertices):
            raise GraphError("duplicate vertex identifier")
        if len(set(self.arrows)) != len(self.arrows):
            raise GraphError("duplicate arrow identifier")
        if ids & set(self.arrows):
            raise GraphError("vertex and arrow identifiers must be distinct")
        if STAR in ids or STAR in self.arrows:
            raise GraphError(f"{STAR!r} is reserved for the deletion symbol")
        for a in self.arrows:
            if self.head.get(a) not in ids:
                raise GraphError(f"arrow {a!r} has no valid head")
            s = self.sigma.get(a)
            if s is None or s not in self.sigma or s == a or self.sigma[s] != a:
                raise GraphError(f"sigma is not a fixed-point-free involution at {a!r}")

    @cached_property
    def _key(self):
        return (self.vertices, self.arrows,
                tuple(self.head[a] for a in self.arrows),
                tuple(self.sigma[a] for a in self.arrows))

    def __eq__(self, other):
        return isinstance(other, Graph) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        label = self.name or "Graph"
        return f"<{label}: {len(self.vertices)} vertices, {len(self.edges)} edges>"

    @cached_property
    def tail(self) -> dict[str, str]:
        return {a: self.head[self.sigma[a]] for a in self.arrows}

    @cached_property
    def vertex_index(self) -> dict[str, int]:
        return {v: k for k, v in enumerate(self.vertices)}

    @cached_property
    def arrow_index(self) -> dict[str, int]:
        return {a: k for k, a in enumerate(self.arrows)}

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        """Edges ordered by the position of their representative arrow."""
        out = []
        for a in self.arrows:
            b = self.sigma[a]
            if self.arrow_index[a] < self.arrow_index[b]:
                out.append(Edge(frozenset((a, b)), a))
        return tuple(out)

    @cached_property
    def edge_index(self) -> dict[str, int]:
        """Map every arrow to the index of its edge in ``edges``."""
        idx = {}
        for k, e in enumerate(self.edges):
            for a in e.pair:
                idx[a] = k
        return idx

    def edge_of(self, arrow: str) -> Edge:
        return self.edges[self.edge_index[arrow]]

    def endpoints(self, edge: Edge) -> tuple[str, str]:
        a = edge.representative
        return self.head[a], self.tail[a]

    def is_loop(self, edge: Edge) -> bool:
        h, t = self.endpoints(edge)
        return h == t

    def arrows_at(self, v: str) -> tuple[str, ...]:
        """Arrows with head ``v`` in graph arrow order."""
        return tuple(a for a in self.arrows if self.head[a] == v)

    @property
    def num_edges(self) -> int:
        return len(self.arrows) // 2

    def multiplicity_matrix(self) -> list[list[int]]:
        """Edge multiplicities between vertex positions; loops on the diagonal."""
        n = len(self.vertices)
        vi = self.vertex_index
        mult = [[0] * n for _ in range(n)]
        for e in self.edges:
            h, t = (vi[x] for x in self.endpoints(e))
            if h == t:
                mult[h][h] += 1
            else:
                mult[h][t] += 1
                mult[t][h] += 1
        return mult

    def renamed(self, name: str | None) -> "Graph":
        return Graph(self.vertices, self.arrows, self.head, self.sigma, name)

    @classmethod
    def from_edges(cls, vertices: Iterable[str], edges: Iterable[tuple[str, str, str]],
                   name: str | None = None) -> "Graph":
        """Build a graph from ``(edge_id, head, tail)`` triples.

        Each edge contributes arrows ``edge_id:+`` (head ``head``) and
        ``edge_id:-`` (head ``tail``), in that order.
        """
        arrows, head, sigma = [], {}, {}
        for eid, h, t in edges:
            plus, minus = f"{eid}:+", f"{eid}:-"
            arrows += [plus, minus]
            head[plus], head[minus] = h, t
            sigma[plus], sigma[minus] = minus, plus
        return cls(tuple(vertices), tuple(arrows), head, sigma, name)


@dataclass(frozen=True, eq=False)
class DirectedGraph:
    vertices: tuple[str, ...]
    arrows: tuple[str, ...]
    head: Mapping[str, str]
    tail: Mapping[str, str]
    name: str | None = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "arrows", tuple(self.arrows))
        object.__setattr__(self, "head", dict(self.head))
        object.__setattr__(self, "tail", dict(self.tail))
        ids = set(self.vertices)
        if len(ids) != len(self.vertices) or len(set(self.arrows)) != len(self.arrows):
            raise GraphError("duplicate identifier")
        if ids & set(self.arrows):
            raise GraphError("vertex and arrow identifiers must be distinct")
        if STAR in ids or STAR in self.arrows:
            raise GraphError(f"{STAR!r} is reserved for the deletion symbol")
        for a in self.arrows:
            if self.head.get(a) not in ids or self.tail.get(a) not in ids:
                raise GraphError(f"arrow {a!r} needs a head and a tail")

    @cached_property
    def _key(self):
        return (type(self).__name__, self.vertices, self.arrows,
                tuple(self.head[a] for a in self.arrows),
                tuple(self.tail[a] for a in self.arrows))

    def __eq__(self, other):
        return isinstance(other, DirectedGraph) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        label = self.name or type(self).__name__
        return f"<{label}: {len(self.vertices)} vertices, {len(self.arrows)} arrows>"

    @cached_property
    def vertex_index(self) -> dict[str, int]:
        return {v: k for k, v in enumerate(self.vertices)}

    @cached_property
    def arrow_index(self) -> dict[str, int]:
        return {a: k for k, a in enumerate(self.arrows)}

    @classmethod
    def from_arrows(cls, vertices: Iterable[str], arrows: Iterable[tuple[str, str, str]],
                    name: str | None = None):
        """Build from ``(arrow_id, head, tail)`` triples, keeping their order."""
        ids, head, tail = [], {}, {}
        for a, h, t in arrows:
            ids.append(a)
            head[a], tail[a] = h, t
        return cls(tuple(vertices), tuple(ids), head, tail, name)


class OrderedDirectedGraph(DirectedGraph):
    """A directed graph whose arrow tuple order is its linear order."""

    def less(self, a: str, b: str) -> bool:
        return self.arrow_index[a] < self.arrow_index[b]


def underlying(d: DirectedGraph) -> Graph:
    """Underlying graph: arrow ``a`` becomes ``a:+`` (head h(a)) and ``a:-`` (head t(a))."""
    return Graph.from_edges(d.vertices, ((a, d.head[a], d.tail[a]) for a in d.arrows),
                            name=d.name)


# structural predicates ------------------------------------------------------

def _components(vertices: Sequence[str], pairs: Iterable[tuple[str, str]]) -> int:
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, w in pairs:
        ru, rw = find(u), find(w)
        if ru != rw:
            parent[ru] = rw
    return len({find(v) for v in vertices})


def _as_graph(g) -> Graph:
    return underlying(g) if isinstance(g, DirectedGraph) else g


def is_connected(g: Graph | DirectedGraph) -> bool:
    g = _as_graph(g)
    if not g.vertices:
        return False
    return _components(g.vertices, (g.endpoints(e) for e in g.edges)) == 1


def is_forest(g: Graph | DirectedGraph) -> bool:
    """True when the graph has no loops and no cycles (parallel edges count as a cycle)."""
    g = _as_graph(g)
    if any(g.is_loop(e) for e in g.edges):
        return False
    comps = _components(g.vertices, (g.endpoints(e) for e in g.edges))
    return len(g.edges) == len(g.vertices) - comps


def is_tree(g: Graph | DirectedGraph) -> bool:
    return bool(_as_graph(g).vertices) and is_connected(g) and is_forest(g)


def genus(g: Graph) -> int:
    if not g.vertices or not is_connected(g):
        raise GraphError("genus is defined for nonempty connected graphs")
    return len(g.edges) - len(g.vertices) + 1


# canonical forms ------------------------------------------------------------

def _refine(colors: list[int], mult: list[list[int]]) -> list[int]:
    n = len(colors)
    while True:
        sigs = []
        for u in range(n):
            nbrs = sorted((colors[w], mult[u][w]) for w in range(n) if w != u and mult[u][w])
            sigs.append((colors[u], mult[u][u], tuple(nbrs)))
        ranking = {s: k for k, s in enumerate(sorted(set(sigs)))}
        new = [ranking[s] for s in sigs]
        if len(ranking) == len(set(colors)):
            return new
        colors = new


def _twins(u: int, w: int, mult: list[list[int]]) -> bool:
    if mult[u][u] != mult[w][w]:
        return False
    return all(mult[u][x] == mult[w][x] for x in range(len(mult)) if x not in (u, w))


def _canonical_multigraph(mult: list[list[int]]) -> tuple:
    n = len(mult)
    best = None

    def encode(colors):
        order = sorted(range(n), key=colors.__getitem__)
        return tuple(mult[order[i]][order[j]] for i in range(n) for j in range(i, n))

    def search(colors):
        nonlocal best
        colors = _refine(colors, mult)
        if len(set(colors)) == n:
            enc = encode(colors)
            if best is None or enc < best:
                best = enc
            return
        cells = {}
        for v, c in enumerate(colors):
            cells.setdefault(c, []).append(v)
        target = min(c for c, vs in cells.items() if len(vs) > 1)
        reps = []
        for v in cells[target]:
            if not any(_twins(v, r, mult) for r in reps):
                reps.append(v)
        for v in reps:
            # individualize v: it moves ahead of the rest of its cell
            individual = [2 * c + (0 if (x == v or c != target) else 1) for x, c in enumerate(colors)]
            search(individual)

    if n:
        search([0] * n)
    return (n, best or ())


def canonical_form(g: Graph) -> tuple:
    """Isomorphism invariant of a multigraph: ``(|V|, minimal multiplicity encoding)``.

    Loops and parallel edges are allowed.  Search is exhaustive over vertex
    orderings after colour refinement, skipping interchangeable twins.
    """
    return _canonical_multigraph(g.multiplicity_matrix())


def is_isomorphic(g: Graph, h: Graph) -> bool:
    return canonical_form(g) == canonical_form(h)


def od_canonical_form(d: DirectedGraph) -> tuple:
    """Complete invariant of an ordered directed graph under order-preserving isomorphism.

    Vertices are labelled by first appearance while scanning arrows in order
    (tail, then head); arrow-free vertices are only counted.
    """
    label: dict[str, int] = {}
    seq = []
    for a in d.arrows:
        for v in (d.tail[a], d.head[a]):
            if v not in label:
                label[v] = len(label)
        seq.append((label[d.tail[a]], label[d.head[a]]))
    return (len(d.vertices), len(label), tuple(seq))


# enumeration ----------------------------------------------------------------

def _graph_from_pairs(nv: int, pairs: Sequence[tuple[int, int]], name=None) -> Graph:
    return Graph.from_edges([str(v) for v in range(nv)],
                            [(f"e{k}", str(h), str(t)) for k, (h, t) in enumerate(pairs)], name)


def enumerate_connected_graphs(max_edges: int) -> list[Graph]:
    """One representative per isomorphism class of nonempty connected multigraphs.

    Ordered by (edges, vertices, canonical form).  Every connected graph with
    at least one edge arises from one with fewer edges by adding a loop, an
    edge between existing vertices, or a pendant edge.
    """
    if max_edges < 0:
        raise GraphError("max_edges must be nonnegative")
    found: dict[tuple, tuple[int, tuple]] = {}
    layer = {canonical_form(point()): (1, ())}
    found.update(layer)
    for _ in range(max_edges):
        nxt = {}
        for nv, pairs in layer.values():
            candidates = [(u, w) for u in range(nv) for w in range(u, nv)]
            candidates += [(nv, u) for u in range(nv)]
            for h, t in candidates:
                size = nv + (1 if h == nv else 0)
                new_pairs = pairs + ((h, t),)
                cf = _canonical_multigraph(_graph_from_pairs(size, new_pairs).multiplicity_matrix())
                if cf not in found and cf not in nxt:
                    nxt[cf] = (size, new_pairs)
        found.update(nxt)
        layer = nxt
    ordered = sorted(found.items(), key=lambda kv: (len(kv[1][1]), kv[1][0], kv[0]))
    return [_graph_from_pairs(nv, pairs, name=graph_label(_graph_from_pairs(nv, pairs)))
            for _, (nv, pairs) in ordered]


def enumerate_ordered_directed_graphs(max_arrows: int) -> list[OrderedDirectedGraph]:
    """One representative per iso class of nonempty connected ordered directed graphs."""
    out: dict[tuple, OrderedDirectedGraph] = {}

    def build(nv, seq):
        return OrderedDirectedGraph.from_arrows(
            [str(v) for v in range(nv)],
            [(f"a{k}", str(h), str(t)) for k, (t, h) in enumerate(seq)])

    # vertices are numbered by first appearance, so a new arrow may only
    # introduce the next one or two labels; prefixes may be disconnected
    def extend(nv, seq):
        if seq:
            d = build(nv, seq)
            if is_connected(d):
                out.setdefault(od_canonical_form(d), d)
        if len(seq) == max_arrows:
            return
        for t in range(nv + 1):
            for h in range(nv + (2 if t == nv else 1)):
                extend(max(nv, t + 1, h + 1), seq + ((t, h),))

    out[od_canonical_form(build(1, ()))] = build(1, ())
    extend(0, ())
    return sorted(out.values(), key=lambda d: (len(d.arrows), len(d.vertices), od_canonical_form(d)))


# builders -------------------------------------------------------------------

def point() -> Graph:
    return Graph(("0",), (), {}, {}, name="*")


def star(k: int) -> Graph:
    return _graph_from_pairs(k + 1, [(j + 1, 0) for j in range(k)], name=f"K1,{k}")


def path(k: int) -> Graph:
    return _graph_from_pairs(k + 1, [(j + 1, j) for j in range(k)], name=f"P{k}")


def cycle(k: int) -> Graph:
    if k < 1:
        raise GraphError("cycle needs at least one edge")
    return _graph_from_pairs(k, [((j + 1) % k, j) for j in range(k)], name=f"C{k}")


def rose(k: int) -> Graph:
    return _graph_from_pairs(1, [(0, 0)] * k, name=f"R{k}")


def complete(k: int) -> Graph:
    if k < 1:
        raise GraphError("complete graph needs a vertex")
    return _graph_from_pairs(k, [(j, i) for i, j in itertools.combinations(range(k), 2)],
                             name=f"K{k}")


def complete_bipartite(p: int, q: int) -> Graph:
    if p + q < 1:
        raise GraphError("complete bipartite graph needs a vertex")
    return _graph_from_pairs(p + q, [(p + j, i) for i in range(p) for j in range(q)],
                             name=f"K{p},{q}")


def lollipop() -> Graph:
    return _graph_from_pairs(2, [(0, 0), (1, 0)], name="L")


_NAMED = {
    "*": point, "point": point, "L": lollipop, "lollipop": lollipop,
}
_PATTERNS = [
    (re.compile(r"^(?:R|rose:?)(\d+)$"), lambda m: rose(int(m[1]))),
    (re.compile(r"^(?:P|path:?)(\d+)$"), lambda m: path(int(m[1]))),
    (re.compile(r"^(?:C|cycle:?)(\d+)$"), lambda m: cycle(int(m[1]))),
    (re.compile(r"^(?:K|complete:?)(\d+)$"), lambda m: complete(int(m[1]))),
    (re.compile(r"^(?:K|bipartite:?)(\d+),(\d+)$"), lambda m: complete_bipartite(int(m[1]), int(m[2]))),
    (re.compile(r"^star:?(\d+)$"), lambda m: star(int(m[1]))),
]


def from_spec(spec: str) -> Graph:
    """Resolve a builder spec such as ``K5``, ``K3,3``, ``R2``, ``P3``, ``C2``, ``L`` or ``*``."""
    spec = spec.strip()
    if spec in _NAMED:
        return _NAMED[spec]()
    for pattern, make in _PATTERNS:
        m = pattern.match(spec)
        if m:
            return make(m)
    raise GraphError(f"unknown graph spec {spec!r}")


def graph_label(g: Graph) -> str:
    """Name a small graph by its iso class when it matches a standard family."""
    e, v = len(g.edges), len(g.vertices)
    if e == 0 and v == 1:
        return "*"
    cf = canonical_form(g)
    candidates = [rose(e), path(e), cycle(e) if e else None, star(e)]
    if e == 2:
        candidates.append(lollipop())
    for k in range(3, 7):
        if k * (k - 1) // 2 == e:
            candidates.append(complete(k))
    for p in range(1, e + 1):
        if e % p == 0 and p <= e // p:
            candidates.append(complete_bipartite(p, e // p))
    for c in candidates:
        if c is not None and canonical_form(c) == cf:
            return c.name
    return "G" + "".join(str(x) for x in cf[1]) + f"v{v}"


# text format ----------------------------------------------------------------

def parse_graph_text(text: str, directed: bool = False) -> Graph | OrderedDirectedGraph:
    """Parse the line format ``graph <name>`` / ``vertex <vid>`` / ``edge <eid> <head> <tail>``.

    With ``directed=True`` each edge line becomes one arrow ``eid`` and the
    arrow order is the line order.
    """
    name, vertices, edges = None, [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "graph" and len(parts) == 2:
            name = parts[1]
        elif kind == "vertex" and len(parts) == 2:
            vertices.append(parts[1])
        elif kind == "edge" and len(parts) == 4:
            edges.append((parts[1], parts[2], parts[3]))
        else:
            raise GraphError(f"line {lineno}: cannot parse {raw!r}")
    known = set(vertices)
    for eid, h, t in edges:
        if h not in known or t not in known:
            raise GraphError(f"edge {eid!r} uses an undeclared vertex")
    if directed:
        return OrderedDirectedGraph.from_arrows(vertices, edges, name)
    return Graph.from_edges(vertices, edges, name)


def format_graph_text(g: Graph) -> str:
    lines = [f"graph {g.name or 'G'}"] + [f"vertex {v}" for v in g.vertices]
    for k, e in enumerate(g.edges):
        a = e.representative
        eid = a[:-2] if a.endswith(":+") and g.sigma[a] == a[:-2] + ":-" else f"e{k}"
        lines.append(f"edge {eid} {g.head[a]} {g.tail[a]}")
    return "\n".join(lines) + "\n"


def load_graph(source: str) -> Graph:
    """Load a graph from a text file path, or resolve a builder spec."""
    p = Path(source)
    if p.is_file():
        g = parse_graph_text(p.read_text())
        return g if g.name else g.renamed(p.stem)
    return from_spec(source)


def graph_to_json(g: Graph | DirectedGraph) -> dict:
    if isinstance(g, DirectedGraph):
        return {"name": g.name, "vertices": list(g.vertices),
                "arrows": [[a, g.head[a], g.tail[a]] for a in g.arrows]}
    return {"name": g.name, "vertices": list(g.vertices), "arrows": list(g.arrows),
            "head": dict(g.head), "sigma": dict(g.sigma)}


def graph_from_json(obj) -> Graph | OrderedDirectedGraph:
    """Inverse of :func:`graph_to_json`; a string is resolved via :func:`load_graph`."""
    if isinstance(obj, str):
        return load_graph(obj)
    if "sigma" in obj:
        return Graph(obj["vertices"], obj["arrows"], obj["head"], obj["sigma"], obj.get("name"))
    return OrderedDirectedGraph.from_arrows(obj["vertices"], [tuple(x) for x in obj["arrows"]],
                                            obj.get("name"))


def simplify(g: Graph) -> Graph:
    """Drop loops and merge parallel edges."""
    vi = g.vertex_index
    seen, pairs = set(), []
    for e in g.edges:
        h, t = g.endpoints(e)
        key = (min(vi[h], vi[t]), max(vi[h], vi[t]))
        if h != t and key not in seen:
            seen.add(key)
            pairs.append((h, t))
    return Graph.from_edges(g.vertices, [(f"e{k}", h, t) for k, (h, t) in enumerate(pairs)],
                            name=g.name)


def is_planar(g: Graph) -> bool:
    """Planarity via Wagner's criterion: no K5 or K3,3 minor in the simplified graph."""
    from .minors import has_minor

    s = simplify(g)
    if not s.vertices:
        return True
    obstructions = (complete(5), complete_bipartite(3, 3))
    vi = s.vertex_index
    parent = list(range(len(s.vertices)))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for e in s.edges:
        h, t = (vi[x] for x in s.endpoints(e))
        parent[find(h)] = find(t)
    for root in {find(k) for k in range(len(s.vertices))}:
        keep = [v for v in s.vertices if find(vi[v]) == root]
        comp = Graph.from_edges(keep, [(f"e{k}", *s.endpoints(e)) for k, e in enumerate(s.edges)
                                       if find(vi[s.endpoints(e)[0]]) == root])
        if any(has_minor(comp, h) for h in obstructions):
            return False
    return True
