"""Batch experiments: homology tables, torsion audits, generator searches and growth checks.

Work is split into stateless tasks (one per graph and number of points),
optionally fanned out over processes, and the rows are sorted at the end so
reports do not depend on scheduling.
"""
from __future__ import annotations

import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .abrams import DEFAULT_CELL_LIMIT, ResourceLimitExceeded, abrams_oracle
from .graphs import (Graph, enumerate_connected_graphs, genus, graph_label,
                     graph_to_json, is_planar, load_graph)
from .minors import automorphisms, hom_set
from .swiatkowski import SwiatkowskiComplex, generator_search, rank_formula

log = logging.getLogger(__name__)

DEFAULT_MAX_RANK = 60_000


@dataclass
class ExperimentConfig:
    command: str = "homology"
    graphs: list[str] = field(default_factory=list)   # file paths or builder specs
    i_max: int = 1
    n_max: int = 2
    n_min: int = 1
    max_edges: int | None = None
    out: str | None = None
    jobs: int = 1
    oracle: bool = False
    timing: bool = False
    max_rank: int = DEFAULT_MAX_RANK
    cell_limit: int = DEFAULT_CELL_LIMIT

    def __post_init__(self):
        for name in ("i_max", "n_max", "n_min"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")
        if self.max_edges is not None and self.max_edges < 0:
            raise ValueError("max_edges must be nonnegative")
        if self.n_min > self.n_max:
            raise ValueError("empty n range")

    def resolve_graphs(self, default_max_edges: int = 3) -> list[Graph]:
        if self.graphs:
            return [load_graph(s) for s in self.graphs]
        limit = self.max_edges if self.max_edges is not None else default_max_edges
        return enumerate_connected_graphs(limit)


@dataclass
class ReportRow:
    graph: str
    i: int
    n: int
    rank: int | None
    torsion: list[int]
    seconds: float | None = None
    status: str = "ok"
    oracle: str = "unchecked"     # unchecked | agree | disagree | skipped (size) | not compared

    def __post_init__(self):
        for k, t in enumerate(self.torsion):
            if t < 2 or (k and t % self.torsion[k - 1]):
                raise ValueError(f"bad torsion list {self.torsion}")

    @property
    def group(self) -> str:
        if self.rank is None:
            return "-"
        parts = ([f"Z^{self.rank}" if self.rank > 1 else "Z"] if self.rank else [])
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) or "0"

    def sort_key(self):
        return (self.graph, self.i, self.n)

    def to_json(self) -> dict:
        return asdict(self)


def name_of(g: Graph) -> str:
    return g.name or graph_label(g)


def run_tasks(fn: Callable, tasks: Sequence, jobs: int = 1) -> list:
    """Map ``fn`` over ``tasks``, in-process for ``jobs <= 1``; results keep task order."""
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks, chunksize=1))


def write_jsonl(rows: Iterable, path: str | Path) -> None:
    with open(path, "w") as fh:
        for r in rows:
            fh.write(json.dumps(r.to_json() if hasattr(r, "to_json") else r, sort_keys=True) + "\n")


def format_table(rows: Sequence[dict], columns: Sequence[str]) -> str:
    cells = [[str(r.get(c, "")) for c in columns] for r in rows]
    widths = [max([len(c)] + [len(row[k]) for row in cells]) for k, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(x.ljust(w) for x, w in zip(row, widths)).rstrip() for row in cells]
    return "\n".join(lines)


def homology_table(rows: Sequence[ReportRow]) -> str:
    view = []
    for r in rows:
        d = {"graph": r.graph, "i": r.i, "n": r.n, "H": r.group, "status": r.status, "oracle": r.oracle}
        if r.seconds is not None:
            d["seconds"] = f"{r.seconds:.3f}"
        view.append(d)
    cols = ["graph", "i", "n", "H", "status", "oracle"]
    if any(r.seconds is not None for r in rows):
        cols.append("seconds")
    return format_table(view, cols)


# homology -------------------------------------------------------------------

@dataclass(frozen=True)
class _HomologyTask:
    graph: Graph
    name: str
    n: int
    i_values: tuple[int, ...]
    oracle: bool
    timing: bool
    max_rank: int
    cell_limit: int


def _oracle_applies(g: Graph, i: int) -> bool:
    # the reduced complex drops the basepoint class in degree zero
    return i > 0 or len(g.edges) > 0


def _homology_rows(task: _HomologyTask) -> list[ReportRow]:
    g, n = task.graph, task.n
    rows = []
    complex_ = None
    for i in task.i_values:
        sizes = (rank_formula(g, i, n), rank_formula(g, i + 1, n))
        if max(sizes) > task.max_rank:
            rows.append(ReportRow(task.name, i, n, None, [], status="skipped (size)",
                                  oracle="unchecked"))
            continue
        if complex_ is None:
            complex_ = SwiatkowskiComplex(g, max(task.i_values) + 1, n)
        start = time.perf_counter()
        h = complex_.homology(i, n)
        seconds = time.perf_counter() - start if task.timing else None
        row = ReportRow(task.name, i, n, h.rank, list(h.torsion), seconds)
        if task.oracle:
            if not _oracle_applies(g, i):
                row.oracle = "not compared"
            else:
                try:
                    ref = abrams_oracle(g, n, i, task.cell_limit)
                except ResourceLimitExceeded:
                    row.oracle = "skipped (size)"
                else:
                    row.oracle = "agree" if ref == h else "disagree"
                    if ref != h:
                        row.status = "mismatch"
                        log.error("oracle mismatch on %s (i=%d, n=%d): %s vs %s",
                                  task.name, i, n, h, ref)
        rows.append(row)
    return rows


def cmd_homology(config: ExperimentConfig, graphs: Sequence[Graph] | None = None) -> list[ReportRow]:
    graphs = list(graphs) if graphs is not None else config.resolve_graphs()
    i_values = tuple(range(config.i_max + 1))
    tasks = [_HomologyTask(g, name_of(g), n, i_values, config.oracle, config.timing,
                           config.max_rank, config.cell_limit)
             for g in graphs for n in range(config.n_min, config.n_max + 1)]
    rows = [r for batch in run_tasks(_homology_rows, tasks, config.jobs) for r in batch]
    return sorted(rows, key=ReportRow.sort_key)


# torsion audit --------------------------------------------------------------

@dataclass
class AuditReport:
    rows: list[ReportRow]
    planar: dict[str, bool]
    violations: list[str]
    epsilon2_candidate: int | None   # lcm of torsion exponents seen at i = 2
    reproducer: str | None = None

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"rows": [r.to_json() for r in self.rows], "planar": self.planar,
                "violations": self.violations, "epsilon2_candidate": self.epsilon2_candidate,
                "reproducer": self.reproducer}


def audit_row(row: ReportRow, planar: bool) -> list[str]:
    """Problems with an i = 1 row: a divisor other than 2, or torsion disagreeing with planarity."""
    out = []
    if row.i != 1 or row.rank is None:
        return out
    bad = [t for t in row.torsion if t != 2]
    if bad:
        out.append(f"{row.graph} n={row.n}: torsion divisors {bad} are not 2")
    if row.n >= 2 and bool(row.torsion) == planar:
        kind = "planar" if planar else "non-planar"
        out.append(f"{row.graph} n={row.n}: {kind} graph with torsion {row.torsion}")
    return out


def cmd_torsion_audit(config: ExperimentConfig, graphs: Sequence[Graph] | None = None,
                      reproducer_dir: str | Path = ".") -> AuditReport:
    """Check i = 1 torsion against the 2-torsion and planarity criteria; record i = 2 exponents.

    The first counterexample stops the audit and writes a reproducer JSON file.
    """
    graphs = list(graphs) if graphs is not None else config.resolve_graphs(default_max_edges=5)
    i_values = (1, 2) if config.i_max >= 2 else (1,)
    planar = {name_of(g): is_planar(g) for g in graphs}
    rows: list[ReportRow] = []
    eps2 = None
    for g in graphs:
        tasks = [_HomologyTask(g, name_of(g), n, i_values, False, config.timing,
                               config.max_rank, config.cell_limit)
                 for n in range(config.n_min, config.n_max + 1)]
        batch = sorted((r for b in run_tasks(_homology_rows, tasks, config.jobs) for r in b),
                       key=ReportRow.sort_key)
        rows.extend(batch)
        for row in batch:
            if row.i == 2 and row.torsion:
                eps2 = math.lcm(eps2 or 1, *row.torsion)
            problems = audit_row(row, planar[row.graph])
            if problems:
                path = Path(reproducer_dir) / "torsion_counterexample.json"
                path.write_text(json.dumps({"graph": graph_to_json(g), "i": row.i, "n": row.n,
                                            "rank": row.rank, "torsion": row.torsion,
                                            "planar": planar[row.graph], "problems": problems},
                                           indent=2, sort_keys=True))
                log.error("torsion audit halted: %s (reproducer %s)", problems, path)
                return AuditReport(rows, planar, problems, eps2, str(path))
    return AuditReport(rows, planar, [], eps2)


# generators -----------------------------------------------------------------

def cmd_generators(config: ExperimentConfig, i: int | None = None):
    i = config.i_max if i is None else i
    graphs = [load_graph(s) for s in config.graphs] if config.graphs else None
    return generator_search(i, graphs)


def generator_graphs(i: int) -> list[tuple[Graph, int]]:
    """Classes carrying minimal generators in bidegree (i, i), with their generator counts."""
    graphs = enumerate_connected_graphs(2 * i)
    rows = generator_search(i, graphs)
    return [(g, r.minimal_generators) for g, r in zip(graphs, rows) if r.minimal_generators]


def alpha(i: int) -> int:
    """Growth constant: automorphism counts of generator classes, weighted by generator count."""
    return sum(len(automorphisms(g)) * k for g, k in generator_graphs(i))


# growth check ---------------------------------------------------------------

def binomial(n: int, k: int) -> int:
    return math.comb(n, k) if 0 <= k <= n else 0


@dataclass
class MorphismCountRow:
    graph: str
    minor: str
    count: int
    bound: int

    @property
    def ok(self) -> bool:
        return self.count <= self.bound

    def to_json(self) -> dict:
        return {"graph": self.graph, "minor": self.minor, "count": self.count,
                "bound": self.bound, "ok": self.ok}


@dataclass
class RankBoundRow:
    graph: str
    i: int
    n: int
    rank: int
    bound: int

    @property
    def ok(self) -> bool:
        return self.rank <= self.bound

    def to_json(self) -> dict:
        return {"graph": self.graph, "i": self.i, "n": self.n, "rank": self.rank,
                "bound": self.bound, "ok": self.ok}


def morphism_count_bound(g: Graph, h: Graph) -> int:
    e, ej = len(g.edges), len(h.edges)
    return len(automorphisms(h)) * binomial(e, ej) * binomial(e - ej, genus(g) - genus(h))


def _count_row(pair: tuple[Graph, Graph]) -> MorphismCountRow:
    g, h = pair
    return MorphismCountRow(name_of(g), name_of(h), len(hom_set(g, h)), morphism_count_bound(g, h))


def _rank_rows(task: tuple[Graph, int, int, int]) -> list[RankBoundRow]:
    g, i, n_max, a = task
    cx = SwiatkowskiComplex(g, i + 1, n_max)
    e, gg = len(g.edges), genus(g)
    return [RankBoundRow(name_of(g), i, n, cx.homology(i, n).rank, a * e ** (i + n + gg))
            for n in range(n_max + 1)]


@dataclass
class GrowthReport:
    alpha: int
    counts: list[MorphismCountRow]
    ranks: list[RankBoundRow]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.counts) and all(r.ok for r in self.ranks)


def cmd_growth_check(config: ExperimentConfig, i: int = 1,
                     graphs: Sequence[Graph] | None = None) -> GrowthReport:
    """Morphism-count inequality against every class with at most ``2 i`` edges, and rank bounds."""
    graphs = list(graphs) if graphs is not None else config.resolve_graphs(default_max_edges=5)
    minors = enumerate_connected_graphs(2 * i)
    pairs = [(g, h) for g in graphs for h in minors]
    counts = run_tasks(_count_row, pairs, config.jobs)
    a = alpha(i)
    rank_tasks = [(g, i, config.n_max, a) for g in graphs
                  if rank_formula(g, i + 1, config.n_max) <= config.max_rank]
    ranks = [r for batch in run_tasks(_rank_rows, rank_tasks, config.jobs) for r in batch]
    counts.sort(key=lambda r: (r.graph, r.minor))
    ranks.sort(key=lambda r: (r.graph, r.i, r.n))
    return GrowthReport(a, counts, ranks)

