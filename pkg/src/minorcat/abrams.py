"""Discretized configuration spaces: an independent route to configuration-space homology.

The graph is subdivided so that each edge becomes a path of ``n + 1``
segments.  Cells of the discretized space are ``n``-element sets of vertices
and segments with pairwise disjoint closures; a cell with ``k`` segments is a
``k``-cube.  Cellular homology is then computed with exact integer
elimination.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .graphs import Graph
from .homology import HomologyGroup, IntMatrix, homology

DEFAULT_CELL_LIMIT = 250_000


class ResourceLimitExceeded(RuntimeError):
    def __init__(self, message: str, sizes: dict):
        super().__init__(f"{message}: {sizes}")
        self.sizes = sizes


@dataclass(frozen=True)
class SubdividedGraph:
    num_vertices: int
    segments: tuple[tuple[int, int], ...]  # (tail, head), never loops


def subdivide(g: Graph, pieces: int) -> SubdividedGraph:
    vi = g.vertex_index
    nv = len(g.vertices)
    segments = []
    for e in g.edges:
        a = e.representative
        chain = [vi[g.tail[a]]]
        for _ in range(pieces - 1):
            chain.append(nv)
            nv += 1
        chain.append(vi[g.head[a]])
        segments.extend(zip(chain, chain[1:]))
    return SubdividedGraph(nv, tuple(segments))


def _cells(sg: SubdividedGraph, n: int, dim: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Cells as (sorted segment indices, sorted vertex indices)."""
    out = []
    for segs in itertools.combinations(range(len(sg.segments)), dim):
        used = set()
        ok = True
        for s in segs:
            t, h = sg.segments[s]
            if t in used or h in used or t == h:
                ok = False
                break
            used.update((t, h))
        if not ok:
            continue
        free = [v for v in range(sg.num_vertices) if v not in used]
        for verts in itertools.combinations(free, n - dim):
            out.append((segs, verts))
    return out


class DiscretizedConfigurationSpace:
    def __init__(self, g: Graph, n: int, cell_limit: int = DEFAULT_CELL_LIMIT):
        self.graph, self.n = g, n
        self.sub = subdivide(g, n + 1 if n >= 1 else 1)
        self.cells: dict[int, list] = {}
        total = 0
        for dim in range(n + 1):
            if n == 0:
                cells = [((), ())] if dim == 0 else []
            else:
                cells = _cells(self.sub, n, dim)
            total += len(cells)
            if total > cell_limit:
                raise ResourceLimitExceeded(
                    "discretized configuration space too large",
                    {"n": n, "segments": len(self.sub.segments),
                     "vertices": self.sub.num_vertices, "cells_so_far": total})
            self.cells[dim] = cells
        self.index = {d: {c: k for k, c in enumerate(cs)} for d, cs in self.cells.items()}

    def cell_count(self, dim: int) -> int:
        return len(self.cells.get(dim, []))

    def boundary(self, dim: int) -> IntMatrix:
        """Cellular boundary from ``dim``-cells to ``(dim - 1)``-cells."""
        src = self.cells.get(dim, [])
        if dim == 0:
            return IntMatrix.zeros(0, len(src))
        tgt = self.index.get(dim - 1, {})
        data = [{} for _ in range(len(tgt))]
        for col, (segs, verts) in enumerate(src):
            for j, s in enumerate(segs):
                rest = segs[:j] + segs[j + 1:]
                t, h = self.sub.segments[s]
                sign = -1 if j % 2 else 1
                for endpoint, c in ((h, sign), (t, -sign)):
                    face = (rest, tuple(sorted(verts + (endpoint,))))
                    row = tgt[face]
                    data[row][col] = data[row].get(col, 0) + c
        return IntMatrix(len(tgt), len(src), data)

    def homology(self, i: int) -> HomologyGroup:
        return homology(self.boundary(i), self.boundary(i + 1))


def abrams_oracle(g: Graph, n: int, i: int, cell_limit: int = DEFAULT_CELL_LIMIT) -> HomologyGroup:
    """Homology ``H_i`` of the unordered ``n``-point configuration space of ``g``."""
    return DiscretizedConfigurationSpace(g, n, cell_limit).homology(i)
