"""Quartets for ordered directed graphs with the arrow functor, and principal projectives over Z.

Morphisms are stored in the direction of ordered directed graphs.  A quartet
``(d, d', phi, m)`` has ``phi`` an ordered minor morphism ``d' -> d`` (a
morphism ``d -> d'`` in the opposite category) and ``m`` an exponent for
each arrow of ``d'``.  A morphism ``d' -> d''`` of the opposite category is
likewise an ordered minor morphism ``d'' -> d'`` and acts on quartets by
precomposition.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

from .graphs import OrderedDirectedGraph, graph_from_json, graph_to_json, od_canonical_form
from .minors import MorphismError, OrderedMinorMorphism, compose, iter_od_hom, od_hom_set

LT, EQ, GT = -1, 0, 1


@dataclass(frozen=True, eq=False)
class Quartet:
    d: OrderedDirectedGraph
    d_prime: OrderedDirectedGraph
    phi: OrderedMinorMorphism
    m: tuple[int, ...]

    def __post_init__(self):
        if isinstance(self.m, Mapping):
            object.__setattr__(self, "m", tuple(self.m.get(a, 0) for a in self.d_prime.arrows))
        object.__setattr__(self, "m", tuple(self.m))
        if self.phi.source != self.d_prime or self.phi.target != self.d:
            raise MorphismError("quartet morphism must go from d' to d")
        if len(self.m) != len(self.d_prime.arrows) or any(x < 0 for x in self.m):
            raise ValueError("exponents must be natural numbers on every arrow of d'")

    @cached_property
    def _key(self):
        return (self.phi, self.m)

    def __eq__(self, other):
        return isinstance(other, Quartet) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"Quartet({self.d_prime.arrows} -> {self.d.arrows}, m={self.m})"

    def exponent(self, arrow: str) -> int:
        return self.m[self.d_prime.arrow_index[arrow]]

    @cached_property
    def order_key(self) -> tuple:
        """Sort key of the admissible well-order; equal keys exactly for equivalent quartets."""
        dp, phi = self.d_prime, self.phi
        idx = dp.arrow_index
        star = tuple(idx[phi.arrow_injection[a]] for a in self.d.arrows)
        kinds = tuple(2 if phi.is_surviving(a) else (1 if phi.is_deleted(a) else 0)
                      for a in dp.arrows)
        return (len(dp.arrows), len(dp.vertices), od_canonical_form(dp), star, kinds, self.m)

    def to_json(self) -> dict:
        return {"d": graph_to_json(self.d), "d_prime": graph_to_json(self.d_prime),
                "phi": {"vertex_map": dict(self.phi.vertex_map), "arrow_map": dict(self.phi.arrow_map)},
                "m": dict(zip(self.d_prime.arrows, self.m))}

    @classmethod
    def from_json(cls, obj) -> "Quartet":
        if isinstance(obj, str):
            obj = json.loads(obj)
        d, dp = graph_from_json(obj["d"]), graph_from_json(obj["d_prime"])
        phi = OrderedMinorMorphism(dp, d, obj["phi"]["vertex_map"], obj["phi"]["arrow_map"])
        return cls(d, dp, phi, obj.get("m", {}))


def zero_exponents(d: OrderedDirectedGraph) -> tuple[int, ...]:
    return (0,) * len(d.arrows)


def push(psi: OrderedMinorMorphism, mu: Quartet) -> Quartet:
    """Act by ``psi: d'' -> d'`` (a morphism ``d' -> d''`` of the opposite category).

    The composite morphism is ``phi . psi`` and exponents are carried along the
    arrow injection of ``psi``, with zeros off its image.
    """
    if psi.target != mu.d_prime:
        raise MorphismError("psi must end at the middle object of the quartet")
    dpp = psi.source
    m = [0] * len(dpp.arrows)
    for a, e in zip(mu.d_prime.arrows, mu.m):
        m[dpp.arrow_index[psi.arrow_injection[a]]] = e
    return Quartet(mu.d, dpp, compose(psi, mu.phi), tuple(m))


def add(mu: Quartet, n: Sequence[int] | Mapping[str, int]) -> Quartet:
    if isinstance(n, Mapping):
        n = [n.get(a, 0) for a in mu.d_prime.arrows]
    if len(n) != len(mu.m):
        raise ValueError("exponent shift must cover every arrow of d'")
    return Quartet(mu.d, mu.d_prime, mu.phi, tuple(x + y for x, y in zip(mu.m, n)))


def factorizations(mu1: Quartet, mu2: Quartet):
    """All ``(psi, n)`` with ``mu2 = push(psi, mu1) + n``."""
    if mu1.d != mu2.d:
        raise MorphismError("quartets must share their first object")
    for psi in iter_od_hom(mu2.d_prime, mu1.d_prime):
        if compose(psi, mu1.phi) != mu2.phi:
            continue
        pushed = push(psi, mu1).m
        n = tuple(b - a for a, b in zip(pushed, mu2.m))
        if all(x >= 0 for x in n):
            yield psi, n


def factorization(mu1: Quartet, mu2: Quartet):
    return next(factorizations(mu1, mu2), None)


def leq(mu1: Quartet, mu2: Quartet) -> bool:
    return factorization(mu1, mu2) is not None


def equivalent(mu1: Quartet, mu2: Quartet) -> bool:
    return leq(mu1, mu2) and leq(mu2, mu1)


def admissible_compare(mu1: Quartet, mu2: Quartet) -> int:
    """Compare classes: iso class of ``d'`` by (arrows, vertices, canonical form), then the
    arrow injection, then contracted/deleted pattern, then exponents lexicographically."""
    if mu1.d != mu2.d:
        raise MorphismError("quartets must share their first object")
    k1, k2 = mu1.order_key, mu2.order_key
    return (k1 > k2) - (k1 < k2)


# principal projectives ------------------------------------------------------

class PPElement:
    """Finite Z-combination of basis elements ``x^m . phi`` of a principal projective at ``(d, d')``."""

    def __init__(self, d: OrderedDirectedGraph, d_prime: OrderedDirectedGraph,
                 terms: Mapping[Quartet, int] | None = None):
        self.d, self.d_prime = d, d_prime
        self.terms: dict[Quartet, int] = {}
        for mu, c in (terms or {}).items():
            if mu.d != d or mu.d_prime != d_prime:
                raise MorphismError("term does not live at (d, d')")
            if c:
                self.terms[mu] = self.terms.get(mu, 0) + c
        self.terms = {mu: c for mu, c in self.terms.items() if c}

    @classmethod
    def basis(cls, mu: Quartet, coeff: int = 1) -> "PPElement":
        return cls(mu.d, mu.d_prime, {mu: coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (isinstance(other, PPElement) and self.d == other.d
                and self.d_prime == other.d_prime and self.terms == other.terms)

    def __repr__(self):
        return f"PPElement({len(self.terms)} terms)"

    def _combine(self, other: "PPElement", scale: int) -> "PPElement":
        if self.d != other.d or self.d_prime != other.d_prime:
            raise MorphismError("elements live in different modules")
        terms = dict(self.terms)
        for mu, c in other.terms.items():
            terms[mu] = terms.get(mu, 0) + scale * c
        return PPElement(self.d, self.d_prime, terms)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scale(self, c: int) -> "PPElement":
        return PPElement(self.d, self.d_prime, {mu: c * v for mu, v in self.terms.items()})

    def act(self, psi: OrderedMinorMorphism, n: Sequence[int] | None = None) -> "PPElement":
        """``x^n . psi(p)`` for ``psi: d'' -> d'`` in ordered directed graphs."""
        terms: dict[Quartet, int] = {}
        for mu, c in self.terms.items():
            nu = push(psi, mu)
            if n is not None:
                nu = add(nu, n)
            terms[nu] = terms.get(nu, 0) + c
        return PPElement(self.d, psi.source, terms)


class ZeroElementError(ValueError):
    pass


def leading(p: PPElement) -> tuple[Quartet, PPElement, int]:
    """Leading quartet, leading term and leading coefficient."""
    if p.is_zero():
        raise ZeroElementError("the zero element has no leading term")
    mu = max(p.terms, key=lambda q: q.order_key)
    c = p.terms[mu]
    return mu, PPElement.basis(mu, c), c


def reduce(p: PPElement, basis: Sequence[PPElement], trace: list | None = None) -> PPElement:
    """Cancel leading terms of ``p`` by scaled, pushed basis elements until none applies.

    A basis element ``q`` reduces ``p`` when its leading quartet lies below the
    leading quartet of ``p`` and its leading coefficient divides that of ``p``.
    Factorizations need not be unique; among all candidate steps the one
    leaving the fewest terms is taken (ties go to the first found).  Leading
    quartets strictly decrease, so this terminates.  When ``trace`` is given,
    the leading quartet before each step is appended to it.
    """
    for q in basis:
        if q.d != p.d:
            raise MorphismError("basis elements must share the source object")
    live = [q for q in basis if not q.is_zero()]
    heads = [leading(q) for q in live]
    while not p.is_zero():
        mu, _, lam = leading(p)
        best = None
        for q, (nu, _, c) in zip(live, heads):
            if lam % c:
                continue
            for psi, n in factorizations(nu, mu):
                cand = p - q.act(psi, n).scale(lam // c)
                if best is None or len(cand.terms) < len(best.terms):
                    best = cand
                if best.is_zero():
                    break
            if best is not None and best.is_zero():
                break
        if best is None:
            return p
        if trace is not None:
            trace.append(mu)
        p = best
    return p


# exhaustive checks ----------------------------------------------------------

def quartets_at(d: OrderedDirectedGraph, d_prime: OrderedDirectedGraph, max_exponent: int) -> list[Quartet]:
    """Every quartet at ``(d, d')`` with exponents at most ``max_exponent``."""
    out = []
    for phi in iter_od_hom(d_prime, d):
        for m in itertools.product(range(max_exponent + 1), repeat=len(d_prime.arrows)):
            out.append(Quartet(d, d_prime, phi, m))
    return out


def admissibility_counterexamples(objects: Sequence[OrderedDirectedGraph], max_exponent: int,
                                  limit: int = 10):
    """Search for ``mu1 < mu2`` at a common ``(d, d')`` with ``psi(mu1) + n`` not below ``psi(mu2) + n``.

    The comparator is a total order on each ``Q_{d,d'}``, so it is enough to
    sort each block once and check that every pushed sequence stays strictly
    increasing.  Shifts ``n`` range over ``0..max_exponent`` on every arrow.
    Returns ``(checked, counterexamples)``.
    """
    homs = {}
    for a in objects:
        for b in objects:
            if a.vertices and b.vertices:
                h = od_hom_set(a, b)
                if h:
                    homs[a, b] = h
    into: dict = {}
    for (a, b), h in homs.items():
        into.setdefault(b, []).extend(h)
    checked, bad = 0, []
    for (d_prime, d), phis in homs.items():
        block = sorted(quartets_at(d, d_prime, max_exponent), key=lambda q: q.order_key)
        for psi in into.get(d_prime, ()):
            pushed = [push(psi, q) for q in block]
            for n in itertools.product(range(max_exponent + 1), repeat=len(psi.source.arrows)):
                keys = [add(q, n).order_key for q in pushed]
                for k in range(len(keys) - 1):
                    checked += 1
                    if not keys[k] < keys[k + 1]:
                        bad.append((block[k], block[k + 1], psi, n))
                        if len(bad) >= limit:
                            return checked, bad
    return checked, bad
