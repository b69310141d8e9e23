"""Homomorphism densities t(F, W) and convergence reports."""

from __future__ import annotations

import csv
import io
import math
import string
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Sequence

import numpy as np

from .core import Graphon

DEFAULT_MAX_VERTICES = 4
DEFAULT_MAX_GRID = 256


class PatternError(ValueError):
    pass


class DensityCapExceeded(RuntimeError):
    """Exact summation refused; use :func:`hom_density_mc` or pass ``force=True``."""


@dataclass(frozen=True)
class PatternGraph:
    num_vertices: int
    edges: tuple[tuple[int, int], ...]
    name: str = ""

    def __post_init__(self):
        if self.num_vertices < 0:
            raise PatternError("num_vertices must be >= 0")
        seen = set()
        norm = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise PatternError(f"loop at vertex {u}")
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise PatternError(f"edge {u}-{v} out of range")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise PatternError(f"duplicate edge {u}-{v}")
            seen.add(key)
            norm.append(key)
        object.__setattr__(self, "edges", tuple(norm))
        if not self.name:
            object.__setattr__(self, "name", self.to_string())

    def to_string(self) -> str:
        return f"{self.num_vertices}:" + ",".join(f"{u}-{v}" for u, v in self.edges)

    def is_connected(self) -> bool:
        if self.num_vertices <= 1:
            return True
        adj = {v: set() for v in range(self.num_vertices)}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        seen, stack = {0}, [0]
        while stack:
            for w in adj[stack.pop()] - seen:
                seen.add(w)
                stack.append(w)
        return len(seen) == self.num_vertices


def parse_pattern(text: str, name: str = "") -> PatternGraph:
    """Parse ``"3:0-1,1-2,0-2"`` (vertex count, then comma-separated edges)."""
    head, sep, body = text.strip().partition(":")
    if not sep:
        raise PatternError(f"missing ':' in pattern {text!r}")
    try:
        n = int(head)
        edges = [tuple(int(x) for x in e.split("-")) for e in body.split(",") if e.strip()]
    except ValueError as exc:
        raise PatternError(f"cannot parse pattern {text!r}") from exc
    if any(len(e) != 2 for e in edges):
        raise PatternError(f"malformed edge in {text!r}")
    return PatternGraph(n, tuple(edges), name)


NAMED_PATTERNS = {
    "vertex": "1:",
    "edge": "2:0-1",
    "path-2": "3:0-1,1-2",
    "triangle": "3:0-1,1-2,0-2",
    "path-3": "4:0-1,1-2,2-3",
    "star-3": "4:0-1,0-2,0-3",
    "4-cycle": "4:0-1,1-2,2-3,0-3",
    "diamond": "4:0-1,0-2,1-2,1-3,2-3",
    "K4": "4:0-1,0-2,0-3,1-2,1-3,2-3",
}


def pattern(name_or_spec: str) -> PatternGraph:
    """Look up a named pattern, or parse an edge-list string."""
    if name_or_spec in NAMED_PATTERNS:
        return parse_pattern(NAMED_PATTERNS[name_or_spec], name_or_spec)
    return parse_pattern(name_or_spec)


def _support(g: Graphon) -> tuple[np.ndarray, np.ndarray]:
    # Zero-mass atoms contribute nothing to any density.
    keep = np.flatnonzero(g.weights > 0)
    if keep.size == len(g):
        return g.weights, g.K
    return g.weights[keep], g.K[np.ix_(keep, keep)]


def hom_density_exact(
    f: PatternGraph,
    g: Graphon,
    max_vertices: int = DEFAULT_MAX_VERTICES,
    max_grid: int = DEFAULT_MAX_GRID,
    force: bool = False,
) -> float:
    """Exact ``sum over maps V->grid of prod_edges K * prod_vertices w``.

    The sum is evaluated as a tensor contraction (variable elimination),
    which is algebraically the full sum over all assignments.
    """
    w, k = _support(g)
    if not force and f.num_vertices > max_vertices and w.size > max_grid:
        raise DensityCapExceeded(
            f"pattern has {f.num_vertices} vertices and grid has {w.size} points; "
            f"caps are {max_vertices} / {max_grid}"
        )
    if f.num_vertices == 0:
        return 1.0
    letters = string.ascii_letters
    if f.num_vertices > len(letters):
        raise DensityCapExceeded("pattern too large for contraction")
    # Fold each vertex weight into one incident edge matrix; this halves the
    # operand count, which keeps contraction-path planning cheap.
    pending = set(range(f.num_vertices))
    terms, ops = [], []
    for u, v in f.edges:
        m = k
        if u in pending:
            m = w[:, None] * m
            pending.discard(u)
        if v in pending:
            m = m * w[None, :]
            pending.discard(v)
        terms.append(letters[u] + letters[v])
        ops.append(m)
    scale = math.fsum(w.tolist()) ** len(pending)
    if not ops:
        return float(scale)
    subscripts = ",".join(terms) + "->"
    return scale * float(np.einsum(subscripts, *ops, optimize=_contraction_path(subscripts)))


@lru_cache(maxsize=256)
def _contraction_path(subscripts: str) -> list:
    # Paths depend only on shapes, so plan once per pattern against a
    # representative grid size and reuse.
    operands = subscripts[:-2].split(",")
    shapes = [np.empty((256,) * len(t)) for t in operands]
    strategy = "optimal" if len(operands) <= 8 else "greedy"
    return np.einsum_path(subscripts, *shapes, optimize=strategy)[0]


def hom_density_bruteforce(f: PatternGraph, g: Graphon) -> float:
    """Literal sum over all ``n^|V|`` assignments; only for tiny inputs."""
    import itertools

    n = len(g)
    total = 0.0
    for xs in itertools.product(range(n), repeat=f.num_vertices):
        term = 1.0
        for x in xs:
            term *= g.weights[x]
        for u, v in f.edges:
            term *= g.K[xs[u], xs[v]]
        total += term
    return total


def hom_density_mc(f: PatternGraph, g: Graphon, samples: int, seed: int) -> tuple[float, float]:
    """Plain i.i.d. Monte Carlo estimate and its standard error."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    xs = rng.choice(len(g), size=(samples, f.num_vertices), p=g.weights)
    vals = np.ones(samples)
    for u, v in f.edges:
        vals = vals * g.K[xs[:, u], xs[:, v]]
    if np.all(vals == vals[0]):
        return float(vals[0]), 0.0
    stderr = float(vals.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    return float(vals.mean()), stderr


def density_profile(g: Graphon, patterns: Sequence[PatternGraph], **kwargs) -> list[float]:
    return [hom_density_exact(f, g, **kwargs) for f in patterns]


@dataclass(frozen=True)
class ReportRow:
    index: int
    pattern_name: str
    density: float
    delta: float | None


def convergence_report(
    graphons: Sequence[Graphon], patterns: Sequence[PatternGraph], labels: Sequence | None = None, **kwargs
) -> list[ReportRow]:
    """Densities per graphon and absolute change from the previous graphon."""
    if not graphons:
        raise ValueError("need at least one graphon")
    labels = list(range(len(graphons))) if labels is None else list(labels)
    rows: list[ReportRow] = []
    prev: list[float] | None = None
    for label, g in zip(labels, graphons):
        cur = density_profile(g, patterns, **kwargs)
        for j, (f, d) in enumerate(zip(patterns, cur)):
            delta = None if prev is None else abs(d - prev[j])
            rows.append(ReportRow(label, f.name, d, delta))
        prev = cur
    return rows


def report_to_csv(rows: Sequence[ReportRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "pattern_name", "density", "delta"])
    for r in rows:
        w.writerow([r.index, r.pattern_name, repr(r.density), "" if r.delta is None else repr(r.delta)])
    return buf.getvalue()


def cyclic_fourier_coefficients(profile) -> np.ndarray:
    """``c_a = (1/N) sum_j f(j) e^{-2 pi i a j / N}`` for a profile on Z/N.

    For a symmetric real profile these are real and are the eigenvalues of
    the Cayley kernel operator on L^2 of the Haar measure.
    """
    f = np.asarray(profile, dtype=float)
    return np.real(np.fft.fft(f)) / f.size


def cayley_cycle_density(coefficients, length: int) -> float:
    """t(C_length) for an abelian Cayley graphon: ``sum_a c_a^length``."""
    c = np.asarray(coefficients, dtype=float)
    return float(reduce(lambda acc, x: acc + x, (c**length).tolist(), 0.0))
