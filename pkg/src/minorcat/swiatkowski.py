"""The reduced Świątkowski complex of a graph, bidegree by bidegree, over the integers.

At a vertex ``v`` with incoming arrows ``A_v = (b, a_1, a_2, ...)`` the local
module has the degree-0 generator ``∅`` and the degree-1 generators
``b - a_k``.  A basis element of the complex in bidegree ``(i, n)`` is a
choice of ``i`` distinguished vertices, one local degree-1 generator at each,
and a monomial of degree ``n - i`` in the edge variables.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property

from .graphs import Edge, Graph, GraphError, enumerate_connected_graphs, graph_label, is_connected
from .homology import HomologyGroup, IntMatrix, elementary_divisors, homology
from .minors import MinorMorphism, hom_set, validate


@dataclass(frozen=True)
class LocalModule:
    vertex: str
    arrow_list: tuple[str, ...]

    @property
    def base_arrow(self) -> str | None:
        return self.arrow_list[0] if self.arrow_list else None

    @property
    def generators(self) -> tuple[str, ...]:
        """Arrows ``a`` naming the degree-1 generators ``base_arrow - a``."""
        return self.arrow_list[1:]

    @property
    def rank(self) -> int:
        return 1 + max(0, len(self.arrow_list) - 1)


@dataclass(frozen=True)
class BasisElement:
    distinguished: tuple[tuple[str, str], ...]  # (vertex, a) for the generator base(vertex) - a
    monomial: tuple[int, ...]

    @property
    def bidegree(self) -> tuple[int, int]:
        i = len(self.distinguished)
        return i, i + sum(self.monomial)


def monomials(num_vars: int, degree: int) -> list[tuple[int, ...]]:
    """Exponent vectors of the given total degree, in a fixed lexicographic order."""
    if degree < 0:
        return []
    out = []
    for combo in itertools.combinations_with_replacement(range(num_vars), degree):
        exps = [0] * num_vars
        for k in combo:
            exps[k] += 1
        out.append(tuple(exps))
    return out


def _bump(m: tuple[int, ...], k: int) -> tuple[int, ...]:
    return m[:k] + (m[k] + 1,) + m[k + 1:]


class SwiatkowskiComplex:
    """Bases and differentials of the reduced complex for ``0 <= i <= i_max``, ``n <= n_max``.

    Bidegrees are materialized lazily and cached.
    """

    def __init__(self, graph: Graph, i_max: int, n_max: int):
        if not graph.vertices or not is_connected(graph):
            raise GraphError("the complex is defined for nonempty connected graphs")
        if i_max < 0 or n_max < 0:
            raise ValueError("bounds must be nonnegative")
        self.graph, self.i_max, self.n_max = graph, i_max, n_max
        self._bases: dict[tuple[int, int], list[BasisElement]] = {}
        self._index: dict[tuple[int, int], dict[BasisElement, int]] = {}
        self._diff: dict[tuple[int, int], IntMatrix] = {}

    def __repr__(self):
        return f"<SwiatkowskiComplex {self.graph!r} i<={self.i_max} n<={self.n_max}>"

    @cached_property
    def local_modules(self) -> tuple[LocalModule, ...]:
        return tuple(LocalModule(v, self.graph.arrows_at(v)) for v in self.graph.vertices)

    @cached_property
    def _local(self) -> dict[str, LocalModule]:
        return {m.vertex: m for m in self.local_modules}

    def _check(self, i, n):
        if not (0 <= i <= self.i_max and 0 <= n <= self.n_max):
            raise ValueError(f"bidegree ({i}, {n}) outside the bounds ({self.i_max}, {self.n_max})")

    def basis(self, i: int, n: int) -> list[BasisElement]:
        self._check(i, n)
        if (i, n) not in self._bases:
            out = []
            if n >= i:
                mons = monomials(len(self.graph.edges), n - i)
                active = [m for m in self.local_modules if m.generators]
                for chosen in itertools.combinations(active, i):
                    for gens in itertools.product(*(m.generators for m in chosen)):
                        dist = tuple((m.vertex, a) for m, a in zip(chosen, gens))
                        out.extend(BasisElement(dist, mon) for mon in mons)
            self._bases[i, n] = out
            self._index[i, n] = {b: k for k, b in enumerate(out)}
        return self._bases[i, n]

    def index(self, i: int, n: int) -> dict[BasisElement, int]:
        self.basis(i, n)
        return self._index[i, n]

    def rank(self, i: int, n: int) -> int:
        return len(self.basis(i, n))

    def boundary(self, elem: BasisElement) -> dict[BasisElement, int]:
        """Leibniz expansion with the Koszul sign (-1)^(distinguished vertices before the active one)."""
        g = self.graph
        out: dict[BasisElement, int] = {}
        for j, (v, a) in enumerate(elem.distinguished):
            sign = -1 if j % 2 else 1
            rest = elem.distinguished[:j] + elem.distinguished[j + 1:]
            b = self._local[v].base_arrow
            for arrow, coeff in ((b, sign), (a, -sign)):
                key = BasisElement(rest, _bump(elem.monomial, g.edge_index[arrow]))
                out[key] = out.get(key, 0) + coeff
        return {k: v for k, v in out.items() if v}

    def differential(self, i: int, n: int) -> IntMatrix:
        """Matrix of the differential from bidegree (i, n) to (i - 1, n); zero rows when i = 0."""
        self._check(i, n)
        if (i, n) not in self._diff:
            src = self.basis(i, n)
            if i == 0:
                self._diff[i, n] = IntMatrix.zeros(0, len(src))
            else:
                tgt = self.index(i - 1, n)
                data = [{} for _ in range(len(tgt))]
                for col, elem in enumerate(src):
                    for key, c in self.boundary(elem).items():
                        data[tgt[key]][col] = c
                self._diff[i, n] = IntMatrix(len(tgt), len(src), data)
        return self._diff[i, n]

    def homology(self, i: int, n: int) -> HomologyGroup:
        """Homology at bidegree (i, n); needs ``i + 1 <= i_max``."""
        self._check(i + 1, n)
        return homology(self.differential(i, n), self.differential(i + 1, n))

    def stabilization(self, edge: Edge | int, i: int, n: int) -> IntMatrix:
        """Multiplication by the variable of ``edge``, bidegree (i, n) to (i, n + 1)."""
        k = edge if isinstance(edge, int) else self._edge_position(edge)
        src, tgt = self.basis(i, n), self.index(i, n + 1)
        data = [{} for _ in range(len(tgt))]
        for col, elem in enumerate(src):
            data[tgt[BasisElement(elem.distinguished, _bump(elem.monomial, k))]][col] = 1
        return IntMatrix(len(tgt), len(src), data)

    def _edge_position(self, edge: Edge) -> int:
        try:
            return self.graph.edges.index(edge)
        except ValueError:
            raise GraphError(f"unknown edge {edge!r}") from None

    def to_json(self, emit_matrices: bool = False) -> dict:
        degrees = []
        for i in range(self.i_max + 1):
            for n in range(self.n_max + 1):
                row = {"i": i, "n": n, "rank": self.rank(i, n)}
                if emit_matrices and i > 0:
                    row["differential"] = self.differential(i, n).to_dense()
                degrees.append(row)
        return {"graph": self.graph.name, "i_max": self.i_max, "n_max": self.n_max,
                "bidegrees": degrees}


def build(graph: Graph, i_max: int, n_max: int) -> SwiatkowskiComplex:
    return SwiatkowskiComplex(graph, i_max, n_max)


def swiatkowski_homology(graph: Graph, i: int, n: int) -> HomologyGroup:
    return SwiatkowskiComplex(graph, i + 1, n).homology(i, n)


def rank_formula(graph: Graph, i: int, n: int) -> int:
    """Closed-form rank of bidegree (i, n)."""
    if n < i or i < 0:
        return 0
    weights = [len(graph.arrows_at(v)) - 1 for v in graph.vertices]
    weights = [w for w in weights if w > 0]
    subsets = sum(math.prod(c) for c in itertools.combinations(weights, i))
    e, d = len(graph.edges), n - i
    mons = 1 if d == 0 else (math.comb(e + d - 1, d) if e else 0)
    return subsets * mons


# functoriality --------------------------------------------------------------

class _PullbackData:
    """Per-morphism data: images of the local degree-1 generators of the target."""

    def __init__(self, phi: MinorMorphism, root: str = "min"):
        self.phi = phi
        g, h = phi.source, phi.target
        self.edge_map = [g.edge_index[phi.arrow_injection[e.representative]] for e in h.edges]
        self.images: dict[tuple[str, str], dict[tuple[str, str], int]] = {}
        base = {v: (g.arrows_at(v) or (None,))[0] for v in g.vertices}
        for w in h.vertices:
            tree_vertices = [v for v in g.vertices if phi.vertex_map[v] == w]
            tree_arrows = [a for a in g.arrows if phi.arrow_map[a] == w]
            with_arrows = [v for v in tree_vertices if g.arrows_at(v)]
            if not with_arrows:
                continue
            root_v = with_arrows[0] if root == "min" else with_arrows[-1]
            # parent arrow: the tree arrow with head u pointing away from the root
            toward: dict[str, str] = {}
            seen, frontier = {root_v}, [root_v]
            while frontier:
                x = frontier.pop()
                for a in tree_arrows:
                    if g.head[a] == x and g.tail[a] not in seen:
                        y = g.tail[a]
                        toward[y] = g.sigma[a]  # arrow with head y on the edge back to x
                        seen.add(y)
                        frontier.append(y)

            def rho(target_arrow):
                lift = phi.arrow_injection[target_arrow]
                terms: dict[tuple[str, str], int] = {}
                u, incoming = g.head[lift], lift
                while True:
                    terms[u, incoming] = terms.get((u, incoming), 0) + 1
                    if u == root_v:
                        break
                    out = toward[u]
                    terms[u, out] = terms.get((u, out), 0) - 1
                    incoming = g.sigma[out]
                    u = g.head[incoming]
                return terms

            arrows_w = h.arrows_at(w)
            if len(arrows_w) < 2:
                continue
            rho_base = rho(arrows_w[0])
            for a in arrows_w[1:]:
                formal = dict(rho_base)
                for key, c in rho(a).items():
                    formal[key] = formal.get(key, 0) - c
                image: dict[tuple[str, str], int] = {}
                for (u, x), c in formal.items():
                    if c and x != base[u]:
                        # sum_x c_x x with sum c_x = 0 equals -sum_x c_x (base - x)
                        image[u, x] = image.get((u, x), 0) - c
                self.images[w, a] = {k: c for k, c in image.items() if c}


def _sort_sign(positions: list[int]) -> int:
    inversions = sum(1 for p, q in itertools.combinations(positions, 2) if p > q)
    return -1 if inversions % 2 else 1


def pullback_matrix(phi: MinorMorphism, i: int, n: int, root: str = "min",
                    source_complex: SwiatkowskiComplex | None = None,
                    target_complex: SwiatkowskiComplex | None = None,
                    _data: _PullbackData | None = None) -> IntMatrix:
    """Matrix of the induced map from bidegree (i, n) of the target to (i, n) of the source.

    ``root`` picks the tree root (minimal or maximal vertex carrying an
    arrow) in each contracted tree; the result does not depend on it.
    """
    problems = validate(phi)
    if problems:
        raise ValueError(f"invalid morphism: {problems[0]}")
    g, h = phi.source, phi.target
    src = source_complex or SwiatkowskiComplex(g, i, n)
    tgt = target_complex or SwiatkowskiComplex(h, i, n)
    data = _data or _PullbackData(phi, root)
    vi = g.vertex_index
    row_index = src.index(i, n)
    cols = tgt.basis(i, n)
    out = [{} for _ in range(len(row_index))]
    for col, elem in enumerate(cols):
        mono = [0] * len(g.edges)
        for k, e in enumerate(elem.monomial):
            mono[data.edge_map[k]] += e
        mono = tuple(mono)
        factors = [list(data.images[w, a].items()) for w, a in elem.distinguished]
        for choice in itertools.product(*factors):
            coeff = 1
            for _, c in choice:
                coeff *= c
            picked = [key for key, _ in choice]
            coeff *= _sort_sign([vi[u] for u, _ in picked])
            key = BasisElement(tuple(sorted(picked, key=lambda ux: vi[ux[0]])), mono)
            row = row_index[key]
            out[row][col] = out[row].get(col, 0) + coeff
    return IntMatrix(len(row_index), len(cols), out)


def pullback(phi: MinorMorphism, i_max: int, n_max: int, root: str = "min",
             source_complex: SwiatkowskiComplex | None = None,
             target_complex: SwiatkowskiComplex | None = None) -> dict[tuple[int, int], IntMatrix]:
    """Pullback matrices for every bidegree within the bounds; complexes may be shared across calls."""
    src = source_complex or SwiatkowskiComplex(phi.source, i_max, n_max)
    tgt = target_complex or SwiatkowskiComplex(phi.target, i_max, n_max)
    data = _PullbackData(phi, root)
    return {(i, n): pullback_matrix(phi, i, n, root, src, tgt, data)
            for i in range(i_max + 1) for n in range(n_max + 1)}


# generators -----------------------------------------------------------------

@dataclass(frozen=True)
class GeneratorRow:
    graph: str
    edges: int
    rank: int           # rank of bidegree (i, i)
    image_rank: int     # rank of the span of pullbacks from proper minors
    cokernel_rank: int
    torsion: tuple[int, ...]
    minimal_generators: int

    def to_json(self) -> dict:
        return {"graph": self.graph, "edges": self.edges, "rank": self.rank,
                "image_rank": self.image_rank, "cokernel_rank": self.cokernel_rank,
                "torsion": list(self.torsion), "minimal_generators": self.minimal_generators}


def generator_search(i: int, graphs: list[Graph] | None = None) -> list[GeneratorRow]:
    """Count generators in bidegree (i, i) not pulled back from proper minors.

    Ranges over isomorphism classes with at most ``2 i`` edges.  Bidegree
    (i, i) has no positive-degree monomials, so only pullbacks contribute.
    """
    if i < 1:
        raise ValueError("generator search needs i >= 1")
    graphs = graphs if graphs is not None else enumerate_connected_graphs(2 * i)
    complexes = {g: SwiatkowskiComplex(g, i, i) for g in graphs}
    rows = []
    for g in graphs:
        r = complexes[g].rank(i, i)
        blocks = []
        if r:
            for h in graphs:
                if len(h.edges) >= len(g.edges) or not complexes[h].rank(i, i):
                    continue
                for phi in hom_set(g, h):
                    blocks.append(pullback_matrix(phi, i, i, source_complex=complexes[g],
                                                  target_complex=complexes[h]))
        divisors = elementary_divisors(IntMatrix.hstack(blocks, r)) if blocks else []
        units = sum(1 for d in divisors if d == 1)
        rows.append(GeneratorRow(g.name or graph_label(g), len(g.edges), r, len(divisors),
                                 r - len(divisors), tuple(d for d in divisors if d > 1), r - units))
    return rows
