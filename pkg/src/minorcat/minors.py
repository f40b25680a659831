"""Minor morphisms between graphs and between ordered directed graphs.

A morphism is stored as its assignment on vertices and arrows; the image of
an arrow is a target arrow, a target vertex (contracted) or ``STAR``
(deleted).  The deletion symbol itself is implicit.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Mapping

from .graphs import (STAR, DirectedGraph, Edge, Graph, GraphError, OrderedDirectedGraph,
                     graph_from_json, graph_to_json, is_connected, underlying)


class MorphismError(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: str
    detail: str = ""

    def __str__(self):
        return f"{self.axiom}: {self.witness}" + (f" ({self.detail})" if self.detail else "")


@dataclass(frozen=True, eq=False)
class MinorMorphism:
    source: Graph
    target: Graph
    vertex_map: Mapping[str, str]
    arrow_map: Mapping[str, str]

    def __post_init__(self):
        object.__setattr__(self, "vertex_map", dict(self.vertex_map))
        object.__setattr__(self, "arrow_map", dict(self.arrow_map))

    @cached_property
    def _key(self):
        return (self.source, self.target,
                tuple(self.vertex_map.get(v) for v in self.source.vertices),
                tuple(self.arrow_map.get(a) for a in self.source.arrows))

    def __eq__(self, other):
        return type(other) is type(self) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __call__(self, x: str) -> str:
        if x == STAR:
            return STAR
        if x in self.vertex_map:
            return self.vertex_map[x]
        return self.arrow_map[x]

    def __repr__(self):
        kept = sum(1 for a in self.source.arrows if self.is_surviving(a))
        return (f"<{type(self).__name__} {self.source!r} -> {self.target!r}, "
                f"{kept} surviving arrows>")

    def is_deleted(self, a: str) -> bool:
        return self.arrow_map[a] == STAR

    def is_contracted(self, a: str) -> bool:
        return self.arrow_map[a] in self.target.vertex_index

    def is_surviving(self, a: str) -> bool:
        return self.arrow_map[a] in self.target.arrow_index

    @cached_property
    def arrow_injection(self) -> dict[str, str]:
        """The injection from target arrows to source arrows."""
        return {b: a for a, b in self.arrow_map.items() if b in self.target.arrow_index}

    def restriction_to_arrows(self) -> tuple:
        return tuple(self.arrow_map[a] for a in self.source.arrows)

    def to_json(self) -> dict:
        return {"source": graph_to_json(self.source), "target": graph_to_json(self.target),
                "vertex_map": dict(self.vertex_map), "arrow_map": dict(self.arrow_map)}

    @classmethod
    def from_json(cls, obj) -> "MinorMorphism":
        if isinstance(obj, str):
            obj = json.loads(obj)
        source, target = graph_from_json(obj["source"]), graph_from_json(obj["target"])
        kind = OrderedMinorMorphism if isinstance(source, DirectedGraph) else MinorMorphism
        return kind(source, target, obj["vertex_map"], obj["arrow_map"])


class OrderedMinorMorphism(MinorMorphism):
    """Minor morphism between ordered directed graphs; no involution."""


# validation -----------------------------------------------------------------

def _tail(g, a):
    return g.tail[a]


def validate(phi: MinorMorphism) -> list[Violation]:
    """Check the minor-morphism axioms; an empty list means the morphism is valid."""
    src, tgt = phi.source, phi.target
    out: list[Violation] = []
    tv, ta = tgt.vertex_index, tgt.arrow_index
    for v in src.vertices:
        img = phi.vertex_map.get(v)
        if img not in tv:
            out.append(Violation("vertices-to-vertices", v, f"image {img!r} is not a target vertex"))
    for a in src.arrows:
        img = phi.arrow_map.get(a)
        if img is None or (img != STAR and img not in tv and img not in ta):
            out.append(Violation("total", a, f"image {img!r} is not a target element"))
    extra = (set(phi.vertex_map) - set(src.vertices)) | (set(phi.arrow_map) - set(src.arrows))
    for x in sorted(extra):
        out.append(Violation("total", x, "not an element of the source"))
    if out:
        return out

    preimages: dict[str, list[str]] = {b: [] for b in tgt.arrows}
    for a in src.arrows:
        if phi.arrow_map[a] in ta:
            preimages[phi.arrow_map[a]].append(a)
    for b, pre in preimages.items():
        if len(pre) != 1:
            out.append(Violation("unique-preimage", b, f"{len(pre)} preimage arrows"))

    for a in src.arrows:
        img = phi.arrow_map[a]
        h, t = src.head[a], _tail(src, a)
        if img in ta:
            if phi.vertex_map[h] != tgt.head[img] or phi.vertex_map[t] != _tail(tgt, img):
                out.append(Violation("incidence", a, "head/tail not preserved"))
        elif img in tv:
            if not (phi.vertex_map[h] == img == phi.vertex_map[t]):
                out.append(Violation("contraction", a, "endpoints do not map to the contracted vertex"))

    if isinstance(src, Graph):
        for a in src.arrows:
            img, img_s = phi.arrow_map[a], phi.arrow_map[src.sigma[a]]
            expected = tgt.sigma[img] if img in ta else img
            if img_s != expected:
                out.append(Violation("equivariance", a, f"sigma({a}) maps to {img_s!r}, expected {expected!r}"))
    else:
        order = [phi.arrow_injection[b] for b in tgt.arrows if b in phi.arrow_injection]
        if [src.arrow_index[a] for a in order] != sorted(src.arrow_index[a] for a in order):
            out.append(Violation("order", phi.target.name or "target", "arrow injection does not preserve order"))

    out.extend(_tree_violations(phi))
    return out


def _edge_key(src, a):
    return frozenset((a, src.sigma[a])) if isinstance(src, Graph) else frozenset((a,))


def _tree_violations(phi) -> list[Violation]:
    src, tgt = phi.source, phi.target
    out = []
    for w in tgt.vertices:
        verts = [v for v in src.vertices if phi.vertex_map[v] == w]
        edges = {_edge_key(src, a) for a in src.arrows if phi.arrow_map[a] == w}
        if not verts:
            out.append(Violation("tree-preimage", w, "empty preimage"))
            continue
        vs = set(verts)
        parent = {v: v for v in verts}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        ok = True
        for e in edges:
            a = min(e, key=src.arrow_index.__getitem__)
            h, t = src.head[a], _tail(src, a)
            if h not in vs or t not in vs:
                ok = False
                break
            rh, rt = find(h), find(t)
            if rh == rt:
                ok = False
                break
            parent[rh] = rt
        if not ok or len({find(v) for v in verts}) != 1:
            out.append(Violation("tree-preimage", w, "preimage is not a tree"))
    return out


def is_valid(phi: MinorMorphism) -> bool:
    return not validate(phi)


# category structure ---------------------------------------------------------

def identity(g: Graph | DirectedGraph) -> MinorMorphism:
    kind = OrderedMinorMorphism if isinstance(g, DirectedGraph) else MinorMorphism
    return kind(g, g, {v: v for v in g.vertices}, {a: a for a in g.arrows})


def compose(phi: MinorMorphism, psi: MinorMorphism) -> MinorMorphism:
    """``psi`` after ``phi``: for ``phi: G -> G'`` and ``psi: G' -> G''``."""
    if phi.target != psi.source:
        raise MorphismError("target of the first morphism is not the source of the second")
    vmap = {v: psi.vertex_map[w] for v, w in phi.vertex_map.items()}
    amap = {}
    for a, img in phi.arrow_map.items():
        if img == STAR:
            amap[a] = STAR
        elif img in psi.vertex_map:
            amap[a] = psi.vertex_map[img]
        else:
            amap[a] = psi.arrow_map[img]
    return type(phi)(phi.source, psi.target, vmap, amap)


def edge_injection(phi: MinorMorphism) -> dict[Edge, Edge]:
    """The induced injection from edges of the target to edges of the source."""
    src, tgt = phi.source, phi.target
    return {e: src.edge_of(phi.arrow_injection[e.representative]) for e in tgt.edges}


def forget(phi: OrderedMinorMorphism) -> MinorMorphism:
    """Apply the underlying-graph construction to an ordered morphism."""
    src, tgt = underlying(phi.source), underlying(phi.target)
    amap = {}
    for a, img in phi.arrow_map.items():
        if img in phi.target.arrow_index:
            amap[f"{a}:+"], amap[f"{a}:-"] = f"{img}:+", f"{img}:-"
        else:
            amap[f"{a}:+"] = amap[f"{a}:-"] = img
    return MinorMorphism(src, tgt, phi.vertex_map, amap)


# hom-set enumeration --------------------------------------------------------

class _Quotient:
    """Contract a forest of edges and delete a set of edges; track surviving edges."""

    def __init__(self, nv: int, ends: list[tuple[int, int]], contracted, deleted):
        parent = list(range(nv))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        self.ok = True
        for k in contracted:
            h, t = ends[k]
            rh, rt = find(h), find(t)
            if rh == rt:
                self.ok = False
                return
            parent[rh] = rt
        roots = sorted({find(v) for v in range(nv)})
        label = {r: i for i, r in enumerate(roots)}
        self.cls = [label[find(v)] for v in range(nv)]
        self.size = len(roots)
        gone = set(contracted) | set(deleted)
        self.survivors = [k for k in range(len(ends)) if k not in gone]
        self.ends = {k: (self.cls[ends[k][0]], self.cls[ends[k][1]]) for k in self.survivors}


def _split_choices(n_edges: int, n_contract: int, n_delete: int, ends, nv) -> Iterator[tuple]:
    for contracted in itertools.combinations(range(n_edges), n_contract):
        rest = [k for k in range(n_edges) if k not in contracted]
        probe = _Quotient(nv, ends, contracted, ())
        if not probe.ok:
            continue
        for deleted in itertools.combinations(rest, n_delete):
            yield contracted, deleted, _Quotient(nv, ends, contracted, deleted)


def _vertex_bijections(qmult, hmult) -> Iterator[list[int]]:
    n = len(qmult)
    qdeg = [(qmult[v][v], sum(qmult[v]) - qmult[v][v]) for v in range(n)]
    hdeg = [(hmult[v][v], sum(hmult[v]) - hmult[v][v]) for v in range(n)]
    assign = [-1] * n
    used = [False] * n

    def rec(v):
        if v == n:
            yield list(assign)
            return
        for w in range(n):
            if used[w] or qdeg[v] != hdeg[w]:
                continue
            if any(qmult[v][u] != hmult[w][assign[u]] for u in range(v)):
                continue
            assign[v], used[w] = w, True
            yield from rec(v + 1)
            used[w] = False
        assign[v] = -1

    yield from rec(0)


def _multiplicities(size, ends_by_edge):
    mult = [[0] * size for _ in range(size)]
    for h, t in ends_by_edge.values():
        if h == t:
            mult[h][h] += 1
        else:
            mult[h][t] += 1
            mult[t][h] += 1
    return mult


def iter_hom(g: Graph, h: Graph) -> Iterator[MinorMorphism]:
    """Enumerate minor morphisms ``g -> h`` without repetition.

    Choose a contracted forest and a deleted edge set, form the quotient, and
    extend each isomorphism of the quotient onto ``h``.
    """
    if not (g.vertices and h.vertices and is_connected(g) and is_connected(h)):
        raise GraphError("hom-sets are defined between nonempty connected graphs")
    n_contract = len(g.vertices) - len(h.vertices)
    n_delete = len(g.edges) - len(h.edges) - n_contract
    if n_contract < 0 or n_delete < 0:
        return
    gv, hv = g.vertex_index, h.vertex_index
    g_ends = [(gv[g.head[e.representative]], gv[g.tail[e.representative]]) for e in g.edges]
    h_ends = [(hv[h.head[e.representative]], hv[h.tail[e.representative]]) for e in h.edges]
    hmult = h.multiplicity_matrix()
    # target edges grouped by unordered endpoint pair
    h_groups: dict[tuple[int, int], list[int]] = {}
    for k, (x, y) in enumerate(h_ends):
        h_groups.setdefault((min(x, y), max(x, y)), []).append(k)

    for contracted, deleted, q in _split_choices(len(g.edges), n_contract, n_delete, g_ends, len(g.vertices)):
        qmult = _multiplicities(q.size, q.ends)
        q_groups: dict[tuple[int, int], list[int]] = {}
        for k in q.survivors:
            x, y = q.ends[k]
            q_groups.setdefault((min(x, y), max(x, y)), []).append(k)
        for pi in _vertex_bijections(qmult, hmult):
            per_group = []
            for (x, y), ks in sorted(q_groups.items()):
                px, py = pi[x], pi[y]
                targets = h_groups[(min(px, py), max(px, py))]
                options = []
                for perm in itertools.permutations(targets):
                    if x == y:
                        for flips in itertools.product((False, True), repeat=len(ks)):
                            options.append(tuple(zip(ks, perm, flips)))
                    else:
                        options.append(tuple((k, t, None) for k, t in zip(ks, perm)))
                per_group.append(options)
            for choice in itertools.product(*per_group):
                yield _assemble(g, h, q, pi, contracted, deleted, choice)


def _assemble(g, h, q, pi, contracted, deleted, choice) -> MinorMorphism:
    gv = g.vertex_index
    vmap = {v: h.vertices[pi[q.cls[gv[v]]]] for v in g.vertices}
    amap = {}
    for k in contracted:
        e = g.edges[k]
        w = vmap[g.head[e.representative]]
        for a in e.pair:
            amap[a] = w
    for k in deleted:
        for a in g.edges[k].pair:
            amap[a] = STAR
    for group in choice:
        for k, t, flip in group:
            a = g.edges[k].representative
            b = h.edges[t].representative
            if flip is None:
                # non-loop: orientation is forced by the vertex bijection
                if vmap[g.head[a]] != h.head[b]:
                    b = h.sigma[b]
            elif flip:
                b = h.sigma[b]
            amap[a], amap[g.sigma[a]] = b, h.sigma[b]
    return MinorMorphism(g, h, vmap, amap)


def hom_set(g: Graph, h: Graph) -> list[MinorMorphism]:
    return list(iter_hom(g, h))


def automorphisms(g: Graph) -> list[MinorMorphism]:
    return hom_set(g, g)


def has_minor(g: Graph, h: Graph) -> bool:
    if len(h.vertices) > len(g.vertices) or len(h.edges) > len(g.edges):
        return False
    if len(h.edges) - len(h.vertices) > len(g.edges) - len(g.vertices):
        return False
    return next(iter_hom(g, h), None) is not None


def find_isomorphism(g: Graph, h: Graph) -> MinorMorphism | None:
    """Some isomorphism ``g -> h``, used to transport morphisms between isomorphic objects."""
    if len(g.vertices) != len(h.vertices) or len(g.edges) != len(h.edges):
        return None
    return next(iter_hom(g, h), None)


def transport(phi: MinorMorphism, source_iso: MinorMorphism | None = None,
              target_iso: MinorMorphism | None = None) -> MinorMorphism:
    """Conjugate ``phi`` by isomorphisms: ``target_iso . phi . source_iso``."""
    out = phi
    if source_iso is not None:
        out = compose(source_iso, out)
    if target_iso is not None:
        out = compose(out, target_iso)
    return out


# ordered directed graphs ----------------------------------------------------

def iter_od_hom(d: OrderedDirectedGraph, e: OrderedDirectedGraph) -> Iterator[OrderedMinorMorphism]:
    """Order-preserving minor morphisms ``d -> e`` between connected ordered directed graphs.

    The surviving arrows of ``d``, read in order, must map onto the arrows of
    ``e`` in order, so the arrow bijection is forced for each split.
    """
    if not (d.vertices and e.vertices and is_connected(d) and is_connected(e)):
        raise GraphError("hom-sets are defined between nonempty connected graphs")
    n_contract = len(d.vertices) - len(e.vertices)
    n_delete = len(d.arrows) - len(e.arrows) - n_contract
    if n_contract < 0 or n_delete < 0:
        return
    dv, ev = d.vertex_index, e.vertex_index
    ends = [(dv[d.head[a]], dv[d.tail[a]]) for a in d.arrows]
    e_ends = [(ev[e.head[b]], ev[e.tail[b]]) for b in e.arrows]
    for contracted, deleted, q in _split_choices(len(d.arrows), n_contract, n_delete, ends, len(d.vertices)):
        cls_to_target: dict[int, int] = {}
        ok = True
        for k, t in zip(q.survivors, range(len(e.arrows))):
            for c, w in zip(q.ends[k], e_ends[t]):
                if cls_to_target.setdefault(c, w) != w:
                    ok = False
        if not ok:
            continue
        if not e.arrows:
            cls_to_target = {0: 0}
        if len(cls_to_target) != q.size or len(set(cls_to_target.values())) != q.size:
            continue
        vmap = {v: e.vertices[cls_to_target[q.cls[dv[v]]]] for v in d.vertices}
        amap = {}
        for k in contracted:
            amap[d.arrows[k]] = vmap[d.head[d.arrows[k]]]
        for k in deleted:
            amap[d.arrows[k]] = STAR
        for k, t in zip(q.survivors, range(len(e.arrows))):
            amap[d.arrows[k]] = e.arrows[t]
        yield OrderedMinorMorphism(d, e, vmap, amap)


def od_hom_set(d: OrderedDirectedGraph, e: OrderedDirectedGraph) -> list[OrderedMinorMorphism]:
    return list(iter_od_hom(d, e))
