"""Automorphism groups of discretized graphons, finite graphs and graphings.

Two search routes are provided and must agree:

* ``naive`` enumerates every permutation of the points;
* ``pruned`` runs color refinement on the kernel's value classes and
  then an individualization search that builds a stabilizer chain.  The
  group order is the product of the basic orbit lengths, and every
  element factors uniquely through the stored transversals.

Permutations are integer arrays ``p`` acting by ``i -> p[i]``; composition
``(p * q)[i] = p[q[i]]`` applies ``q`` first.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .core import Graphon, GraphonError, metric_graphon_from_matrix
from .groups import GroupModel, translation_permutation
from .metrics import neighborhood_matrix

NAIVE_CAP = 10
PRUNED_CAP = 64
WEIGHT_TOL = 1e-12
MAX_ENUMERATION = 2_000_000


class SearchCapExceeded(RuntimeError):
    pass


def compose(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    return p[q]


def invert(p: np.ndarray) -> np.ndarray:
    out = np.empty_like(p)
    out[p] = np.arange(p.size)
    return out


class PermutationGroup:
    """Permutation group stored by generators and, when known, a stabilizer chain."""

    def __init__(self, degree: int, generators: Sequence, order: int, chain=None, elements=None):
        self.degree = int(degree)
        self.generators = [np.asarray(g, dtype=int) for g in generators]
        self.order = int(order)
        self._chain = chain  # list of (base point, {image: transversal perm})
        self._elements = elements

    @classmethod
    def from_elements(cls, degree: int, elements: Sequence) -> "PermutationGroup":
        uniq = sorted({tuple(int(x) for x in e) for e in elements})
        if not uniq:
            uniq = [tuple(range(degree))]
        ident = tuple(range(degree))
        gens = [np.array(e) for e in uniq if e != ident]
        return cls(degree, gens, len(uniq), elements=[np.array(e) for e in uniq])

    @classmethod
    def trivial(cls, degree: int) -> "PermutationGroup":
        return cls.from_elements(degree, [tuple(range(degree))])

    def elements(self) -> Iterator[np.ndarray]:
        if self._elements is not None:
            yield from self._elements
            return
        if self.order > MAX_ENUMERATION:
            raise SearchCapExceeded(f"refusing to enumerate {self.order} elements")
        if self._chain is None:
            raise RuntimeError("group has neither elements nor a stabilizer chain")
        transversals = [list(t.values()) for _, t in self._chain]
        ident = np.arange(self.degree)
        for combo in itertools.product(*transversals):
            p = ident
            for t in combo:
                p = compose(p, t)
            yield p

    def element_set(self) -> set[tuple[int, ...]]:
        return {tuple(int(x) for x in p) for p in self.elements()}

    def __contains__(self, perm) -> bool:
        p = np.asarray(perm, dtype=int)
        if self._chain is None:
            return tuple(p.tolist()) in self.element_set()
        for b, trans in self._chain:
            t = trans.get(int(p[b]))
            if t is None:
                return False
            p = compose(invert(t), p)
        return bool(np.array_equal(p, np.arange(self.degree)))

    def is_closed(self) -> bool:
        """Group axioms on the enumerated element set."""
        elems = self.element_set()
        ident = tuple(range(self.degree))
        if ident not in elems or len(elems) != self.order:
            return False
        arrs = [np.array(e) for e in elems]
        for p in arrs:
            if tuple(invert(p).tolist()) not in elems:
                return False
            for q in arrs:
                if tuple(compose(p, q).tolist()) not in elems:
                    return False
        return True

    def to_dict(self) -> dict:
        return {"order": self.order, "generators": [g.tolist() for g in self.generators]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def __repr__(self):
        return f"PermutationGroup(degree={self.degree}, order={self.order})"


def value_classes(values: np.ndarray, tol: float) -> np.ndarray:
    """Integer labels for ``values`` merging entries closer than ``tol`` (single linkage).

    Any permutation preserving values within ``tol`` preserves these labels
    exactly, so they are safe inputs to exact refinement.
    """
    flat = np.asarray(values, dtype=float).ravel()
    order = np.argsort(flat, kind="stable")
    srt = flat[order]
    breaks = np.concatenate([[0], (np.diff(srt) > tol).astype(int)])
    labels = np.empty(flat.size, dtype=int)
    labels[order] = np.cumsum(breaks)
    return labels.reshape(np.shape(values))


class _Structure:
    """Points with initial colors and an exact label matrix, plus the true
    values for the final tolerance check."""

    def __init__(self, values: np.ndarray, point_values: np.ndarray, tol: float, point_tol: float):
        self.values = np.asarray(values, dtype=float)
        self.point_values = np.asarray(point_values, dtype=float)
        self.tol = tol
        self.point_tol = point_tol
        self.n = self.values.shape[0]
        self.labels = value_classes(self.values, tol)
        diag = self.labels[np.arange(self.n), np.arange(self.n)]
        pcls = value_classes(self.point_values, point_tol)
        self.initial = _rank(list(zip(pcls.tolist(), diag.tolist())))
        self.nlabels = int(self.labels.max()) + 1 if self.n else 1

    def is_automorphism(self, p: np.ndarray) -> bool:
        if np.any(np.abs(self.point_values[p] - self.point_values) > self.point_tol):
            return False
        return bool(np.all(np.abs(self.values[np.ix_(p, p)] - self.values) <= self.tol))


def _rank(keys: list) -> np.ndarray:
    uniq = {k: i for i, k in enumerate(sorted(set(keys)))}
    return np.array([uniq[k] for k in keys], dtype=int)


def _refine(s: _Structure, colors: np.ndarray) -> tuple[np.ndarray, tuple]:
    """Iterate to the coarsest equitable refinement; return colors and a trace
    that two corresponding branches must share."""
    trace = []
    c = colors
    ncol = int(c.max()) + 1
    while True:
        codes = s.labels * ncol + c[None, :]
        sig = [(int(c[i]),) + tuple(np.sort(codes[i]).tolist()) for i in range(s.n)]
        new = _rank(sig)
        counts = tuple(sorted((k, sig.count(k)) for k in set(sig)))
        trace.append(counts)
        nnew = int(new.max()) + 1
        if nnew == ncol:
            return new, tuple(trace)
        c, ncol = new, nnew


def _individualize(colors: np.ndarray, v: int) -> np.ndarray:
    keys = [(int(c), 0) for c in colors]
    keys[v] = (int(colors[v]), 1)
    return _rank(keys)


def _target_cell(colors: np.ndarray) -> int | None:
    counts = np.bincount(colors)
    multi = np.flatnonzero(counts > 1)
    return None if multi.size == 0 else int(multi[0])


def _extend(s: _Structure, left: np.ndarray, right: np.ndarray) -> np.ndarray | None:
    """Find one automorphism mapping the left coloring onto the right one."""
    cell = _target_cell(left)
    if cell is None:
        p = np.empty(s.n, dtype=int)
        p[np.argsort(left)] = np.argsort(right)
        return p if s.is_automorphism(p) else None
    v = int(np.flatnonzero(left == cell)[0])
    lc, ltrace = _refine(s, _individualize(left, v))
    for w in np.flatnonzero(right == cell):
        rc, rtrace = _refine(s, _individualize(right, int(w)))
        if rtrace != ltrace:
            continue
        p = _extend(s, lc, rc)
        if p is not None:
            return p
    return None


def _orbit_transversal(base: int, gens: list[np.ndarray], n: int) -> dict[int, np.ndarray]:
    trans = {base: np.arange(n)}
    frontier = [base]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = int(g[x])
                if y not in trans:
                    trans[y] = compose(g, trans[x])
                    nxt.append(y)
        frontier = nxt
    return trans


def _pruned_search(s: _Structure) -> PermutationGroup:
    colors, _ = _refine(s, s.initial)
    chain = []
    generators: list[np.ndarray] = []
    while (cell := _target_cell(colors)) is not None:
        members = np.flatnonzero(colors == cell)
        b = int(members[0])
        lc, ltrace = _refine(s, _individualize(colors, b))
        level_gens: list[np.ndarray] = []
        trans = {b: np.arange(s.n)}
        for w in members[1:]:
            w = int(w)
            if w in trans:
                continue
            rc, rtrace = _refine(s, _individualize(colors, w))
            if rtrace != ltrace:
                continue
            p = _extend(s, lc, rc)
            if p is not None:
                level_gens.append(p)
                trans = _orbit_transversal(b, level_gens, s.n)
        chain.append((b, trans))
        generators.extend(level_gens)
        colors = lc
    order = math.prod(len(t) for _, t in chain)
    return PermutationGroup(s.n, generators, order, chain=chain)


def _naive_search(s: _Structure) -> PermutationGroup:
    n = s.n
    found = []
    chunk = 50_000
    perms = itertools.permutations(range(n))
    while True:
        block = np.array(list(itertools.islice(perms, chunk)), dtype=int).reshape(-1, n)
        if block.size == 0 and n > 0:
            break
        if n == 0:
            found.append(np.zeros(0, dtype=int))
            break
        ok = np.all(np.abs(s.point_values[block] - s.point_values) <= s.point_tol, axis=1)
        sub = s.values[block[:, :, None], block[:, None, :]]
        ok &= np.all(np.abs(sub - s.values) <= s.tol, axis=(1, 2))
        found.extend(block[ok])
    return PermutationGroup.from_elements(n, found)


def _search(s: _Structure, method: str, cap: int | None) -> PermutationGroup:
    if method not in ("pruned", "naive"):
        raise ValueError(f"unknown search method {method!r}")
    limit = cap if cap is not None else (NAIVE_CAP if method == "naive" else PRUNED_CAP)
    if s.n > limit:
        raise SearchCapExceeded(f"{s.n} points exceeds the {method} search cap of {limit}")
    return _naive_search(s) if method == "naive" else _pruned_search(s)


def graphon_automorphisms(g: Graphon, tol: float = 0.0, method: str = "pruned", cap: int | None = None) -> PermutationGroup:
    """Weight-preserving permutations with ``|K[p i, p j] - K[i, j]| <= tol``."""
    return _search(_Structure(g.K, g.weights, tol, WEIGHT_TOL), method, cap)


@dataclass(frozen=True)
class SimpleGraph:
    num_vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        norm = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"loop at {u}")
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise ValueError(f"edge {u}-{v} out of range")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    @classmethod
    def from_adjacency(cls, adj) -> "SimpleGraph":
        a = np.asarray(adj)
        iu, ju = np.nonzero(np.triu(a, k=1))
        return cls(a.shape[0], tuple(zip(iu.tolist(), ju.tolist())))

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.num_vertices, self.num_vertices), dtype=int)
        for u, v in self.edges:
            a[u, v] = a[v, u] = 1
        return a

    def to_json(self) -> str:
        return json.dumps({"num_vertices": self.num_vertices, "edges": [list(e) for e in self.edges]})


def graph_automorphisms(graph, method: str = "pruned", cap: int | None = None) -> PermutationGroup:
    """Edge-preserving vertex permutations of a simple graph."""
    adj = graph.adjacency() if isinstance(graph, SimpleGraph) else np.asarray(graph)
    a = adj.astype(float)
    if not np.array_equal(a, a.T) or np.any(np.diag(a) != 0):
        raise ValueError("adjacency must be symmetric with zero diagonal")
    return _search(_Structure(a, np.zeros(a.shape[0]), 0.0, 0.0), method, cap)


def trivial_automorphisms(g: Graphon, auts: PermutationGroup, tol: float = 0.0) -> PermutationGroup:
    """Automorphisms moving every point to one at neighborhood distance 0."""
    rw = neighborhood_matrix(g)
    idx = np.arange(len(g))
    keep = [p for p in auts.elements() if np.all(rw[idx, p] <= tol)]
    return PermutationGroup.from_elements(len(g), keep)


def frucht_realize(group: GroupModel, generators: Sequence[int]) -> SimpleGraph:
    """Graph whose automorphism group is ``group``, acting freely on the first ``|G|`` vertices.

    Each directed Cayley edge ``u -> u s_k`` becomes a path ``u - a - b - v``
    with a pendant path of length ``k`` at ``a`` and one of length ``k + |S|``
    at ``b`` (``k`` counts generators from 1).  Distinct tail lengths encode
    both the generator and the edge direction.
    """
    gens = [int(s) for s in generators]
    if not gens:
        raise ValueError("generating set must be nonempty")
    m = len(gens)
    edges: list[tuple[int, int]] = []
    nxt = group.order

    def fresh() -> int:
        nonlocal nxt
        nxt += 1
        return nxt - 1

    def tail(at: int, length: int) -> None:
        prev = at
        for _ in range(length):
            t = fresh()
            edges.append((prev, t))
            prev = t

    for u in range(group.order):
        for k, s in enumerate(gens, start=1):
            v = int(group.mul(u, s))
            a, b = fresh(), fresh()
            edges.extend([(u, a), (a, b), (b, v)])
            tail(a, k)
            tail(b, k + m)
    return SimpleGraph(nxt, tuple(edges))


def is_cayley_transitive(g: Graphon, group: GroupModel, tol: float = 0.0) -> bool:
    """True iff every left translation preserves weights and kernel and the action is transitive."""
    if group.order != len(g):
        raise GraphonError(f"group order {group.order} differs from grid size {len(g)}")
    reached = {group.identity}
    for h in range(group.order):
        p = translation_permutation(group, h)
        if np.any(np.abs(g.weights[p] - g.weights) > WEIGHT_TOL):
            return False
        if np.any(np.abs(g.K[np.ix_(p, p)] - g.K) > tol):
            return False
        reached.add(int(p[group.identity]))
    return len(reached) == len(g)


def realize_metric_group(dist, group: PermutationGroup, weights=None, coords=None, tol: float = 0.0) -> Graphon:
    """Metric graphon with ``group``-invariant weights.

    ``weights`` (default uniform) are averaged over the action, which keeps
    them positive and makes every element of ``group`` measure preserving.
    """
    d = np.asarray(dist, dtype=float)
    n = d.shape[0]
    w = np.full(n, 1.0 / n) if weights is None else np.asarray(weights, dtype=float)
    if np.any(w <= 0):
        raise ValueError("initial weights must be positive")
    elems = list(group.elements())
    for p in elems:
        if np.any(np.abs(d[np.ix_(p, p)] - d) > tol):
            raise ValueError("group does not act by isometries")
    avg = np.mean([w[p] for p in elems], axis=0)
    avg = avg / avg.sum()
    return metric_graphon_from_matrix(d, avg, coords)
