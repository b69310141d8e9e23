"""Finite models of compact groups and Cayley graphons over them.

Elements are integer indices ``0..order-1``; group operations are
vectorized over numpy integer arrays.  Circle and torus grids stand in
for S^1 and T^k, and their uniform weights are exactly the Haar measure
of the finite model.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import Graphon, GraphonError, Kernel, SignedKernel, WeightedGrid, make_graphon


class GroupError(ValueError):
    pass


def _flat_circle(a, b, n: int):
    """Arc length between grid points ``a`` and ``b`` on a unit-circumference circle."""
    diff = np.abs(np.asarray(a) - np.asarray(b)) % n
    return np.minimum(diff, n - diff) / n


class GroupModel:
    """Finite group on the carrier ``range(order)`` with a bi-invariant metric."""

    kind = "abstract"
    identity = 0

    def __init__(self, order: int):
        self.order = int(order)

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def metric(self, a, b):
        raise NotImplementedError

    def elements(self) -> np.ndarray:
        return np.arange(self.order)

    @property
    def haar_weights(self) -> np.ndarray:
        return np.full(self.order, 1.0 / self.order)

    def distance_matrix(self) -> np.ndarray:
        e = self.elements()
        return np.asarray(self.metric(e[:, None], e[None, :]), dtype=float)

    def is_abelian(self) -> bool:
        e = self.elements()
        return bool(np.array_equal(self.mul(e[:, None], e[None, :]), self.mul(e[None, :], e[:, None])))

    def check_axioms(self, samples: int | None = None, seed: int = 0) -> None:
        """Verify identity, inverses and associativity.

        Associativity is checked exhaustively when ``samples`` is None,
        otherwise on ``samples`` random triples.
        """
        e = self.elements()
        if not np.array_equal(self.mul(self.identity, e), e) or not np.array_equal(self.mul(e, self.identity), e):
            raise GroupError("identity law fails")
        if np.any(self.mul(e, self.inv(e)) != self.identity) or np.any(self.mul(self.inv(e), e) != self.identity):
            raise GroupError("inverse law fails")
        if samples is None:
            a, b, c = e[:, None, None], e[None, :, None], e[None, None, :]
        else:
            rng = np.random.default_rng(seed)
            a, b, c = rng.integers(0, self.order, size=(3, samples))
        if not np.array_equal(self.mul(self.mul(a, b), c), self.mul(a, self.mul(b, c))):
            raise GroupError("associativity fails")

    def to_dict(self) -> dict:
        raise NotImplementedError

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def __eq__(self, other):
        return isinstance(other, GroupModel) and self.to_dict() == other.to_dict()

    def __hash__(self):
        return hash(json.dumps(self.to_dict(), sort_keys=True))

    def __repr__(self):
        return f"{type(self).__name__}({self.to_dict()})"


class CyclicGroup(GroupModel):
    """Z/N as the N-th roots of unity with flat unit-circumference metric."""

    kind = "cyclic"

    def __init__(self, n: int):
        if n < 1:
            raise GroupError(f"cyclic group order must be >= 1, got {n}")
        super().__init__(n)
        self.n = n

    def mul(self, a, b):
        return (np.asarray(a) + np.asarray(b)) % self.n

    def inv(self, a):
        return (-np.asarray(a)) % self.n

    def metric(self, a, b):
        return _flat_circle(a, b, self.n)

    def to_dict(self):
        return {"kind": "cyclic", "N": self.n}


class TorusGroup(GroupModel):
    """(Z/N)^k with Euclidean flat metric rescaled to diameter 1.

    Element index is the base-N number ``j_1 j_2 ... j_k`` with ``j_1``
    most significant.
    """

    kind = "torus"

    def __init__(self, k: int, n: int):
        if k < 1 or n < 1:
            raise GroupError(f"invalid torus parameters k={k}, N={n}")
        super().__init__(n**k)
        self.k = k
        self.n = n
        self._radix = n ** np.arange(k - 1, -1, -1)

    def coords(self, a) -> np.ndarray:
        a = np.asarray(a)
        return (a[..., None] // self._radix) % self.n

    def index(self, coords) -> np.ndarray:
        c = np.asarray(coords) % self.n
        return (c * self._radix).sum(axis=-1)

    def mul(self, a, b):
        return self.index(self.coords(a) + self.coords(b))

    def inv(self, a):
        return self.index(-self.coords(a))

    def metric(self, a, b):
        flat = _flat_circle(self.coords(a), self.coords(b), self.n)
        return np.sqrt((flat**2).sum(axis=-1)) / (math.sqrt(self.k) / 2)

    def to_dict(self):
        return {"kind": "torus", "k": self.k, "N": self.n}


class ProductGroup(GroupModel):
    """Direct product; the metric is the max of the factor metrics."""

    kind = "product"

    def __init__(self, factors: Sequence[GroupModel]):
        if not factors:
            raise GroupError("product needs at least one factor")
        self.factors = tuple(factors)
        orders = [f.order for f in self.factors]
        super().__init__(math.prod(orders))
        self._orders = np.array(orders)
        self._radix = np.array([math.prod(orders[i + 1:]) for i in range(len(orders))])

    def split(self, a) -> list:
        a = np.asarray(a)
        return [(a // r) % o for r, o in zip(self._radix, self._orders)]

    def join(self, parts) -> np.ndarray:
        return sum(np.asarray(p) * r for p, r in zip(parts, self._radix))

    def mul(self, a, b):
        return self.join([f.mul(x, y) for f, x, y in zip(self.factors, self.split(a), self.split(b))])

    def inv(self, a):
        return self.join([f.inv(x) for f, x in zip(self.factors, self.split(a))])

    def metric(self, a, b):
        ds = [np.asarray(f.metric(x, y), dtype=float) for f, x, y in zip(self.factors, self.split(a), self.split(b))]
        return np.maximum.reduce(np.broadcast_arrays(*ds))

    def to_dict(self):
        return {"kind": "product", "factors": [f.to_dict() for f in self.factors]}


class TableGroup(GroupModel):
    """Group given by its multiplication table; discrete metric."""

    kind = "table"

    def __init__(self, table, identity: int | None = None, check: bool = True):
        t = np.asarray(table, dtype=int)
        n = t.shape[0]
        if t.shape != (n, n) or n < 1:
            raise GroupError("multiplication table must be square and nonempty")
        if t.min() < 0 or t.max() >= n:
            raise GroupError("table entries out of range")
        super().__init__(n)
        self.table = t
        e = np.arange(n)
        if identity is None:
            hits = [i for i in range(n) if np.array_equal(t[i], e) and np.array_equal(t[:, i], e)]
            if not hits:
                raise GroupError("table has no identity element")
            identity = hits[0]
        self.identity = int(identity)
        rows, cols = np.nonzero(t == self.identity)
        if len(rows) != n or len(set(rows.tolist())) != n:
            raise GroupError("not every element has an inverse")
        self._inv = np.empty(n, dtype=int)
        self._inv[rows] = cols
        if check:
            self.check_axioms(None if n <= 128 else 20000)

    def mul(self, a, b):
        return self.table[np.asarray(a), np.asarray(b)]

    def inv(self, a):
        return self._inv[np.asarray(a)]

    def metric(self, a, b):
        return (np.asarray(a) != np.asarray(b)).astype(float)

    def to_dict(self):
        return {"kind": "table", "table": self.table.tolist(), "identity": self.identity}


def cyclic_group(n: int) -> CyclicGroup:
    return CyclicGroup(n)


def torus_group(k: int, n: int) -> TorusGroup:
    return TorusGroup(k, n)


def product_group(*factors: GroupModel) -> ProductGroup:
    return ProductGroup(factors)


def table_group(table, identity: int | None = None) -> TableGroup:
    return TableGroup(table, identity)


def symmetric_group_table(n: int) -> tuple[np.ndarray, list[tuple[int, ...]]]:
    """Multiplication table of S_n with elements listed lexicographically.

    Product ``a*b`` is composition ``a o b`` (apply ``b`` first).
    """
    import itertools

    perms = list(itertools.permutations(range(n)))
    pos = {p: i for i, p in enumerate(perms)}
    table = np.array([[pos[tuple(a[b[i]] for i in range(n))] for b in perms] for a in perms])
    return table, perms


def group_from_dict(obj: dict) -> GroupModel:
    kind = obj.get("kind")
    if kind == "cyclic":
        return CyclicGroup(int(obj["N"]))
    if kind == "torus":
        return TorusGroup(int(obj["k"]), int(obj["N"]))
    if kind == "product":
        return ProductGroup([group_from_dict(f) for f in obj["factors"]])
    if kind == "table":
        return TableGroup(obj["table"], obj.get("identity"))
    raise GroupError(f"unknown group kind {kind!r}")


def group_from_json(text: str) -> GroupModel:
    return group_from_dict(json.loads(text))


@dataclass(frozen=True, eq=False)
class GroupMorphism:
    source: GroupModel
    target: GroupModel
    map: np.ndarray
    check: bool = True

    def __post_init__(self):
        m = np.array(self.map, dtype=int, copy=True)
        if m.shape != (self.source.order,):
            raise GroupError("morphism map must assign an image to every source element")
        if m.size and (m.min() < 0 or m.max() >= self.target.order):
            raise GroupError("morphism image out of target range")
        m.setflags(write=False)
        object.__setattr__(self, "map", m)
        if self.check:
            self.verify()

    def verify(self) -> None:
        m_id = int(self.map[self.source.identity])
        if m_id != self.target.identity:
            raise GroupError(f"identity maps to {m_id}")
        e = self.source.elements()
        lhs = self.map[self.source.mul(e[:, None], e[None, :])]
        rhs = self.target.mul(self.map[:, None], self.map[None, :])
        if not np.array_equal(lhs, rhs):
            raise GroupError("map is not a homomorphism")

    def __call__(self, a):
        return self.map[np.asarray(a)]

    def image(self) -> np.ndarray:
        return np.unique(self.map)

    def to_dict(self) -> dict:
        return {"source": self.source.to_dict(), "target": self.target.to_dict(), "map": self.map.tolist()}

    @classmethod
    def from_dict(cls, obj: dict) -> "GroupMorphism":
        return cls(group_from_dict(obj["source"]), group_from_dict(obj["target"]), np.asarray(obj["map"]))


def biinvariant_profile(g: GroupModel) -> np.ndarray:
    """``f(x) = d(x, 1)`` for the model's bi-invariant metric."""
    e = g.elements()
    return np.asarray(g.metric(e, g.identity), dtype=float)


def check_profile(g: GroupModel, f) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if f.shape != (g.order,):
        raise GroupError(f"profile has shape {f.shape}, group has order {g.order}")
    if f.size and (f.min() < 0.0 or f.max() > 1.0):
        raise GroupError("profile values must lie in [0, 1]")
    if not np.array_equal(f, f[g.inv(g.elements())]):
        raise GroupError("profile is not symmetric: f(x) != f(x^-1)")
    return f


def cayley_graphon(g: GroupModel, f) -> Graphon:
    """Graphon on ``g`` with Haar weights and kernel ``W(x, y) = f(x y^-1)``."""
    f = check_profile(g, f)
    e = g.elements()
    diff = g.mul(e[:, None], g.inv(e)[None, :])
    return make_graphon(WeightedGrid(g.haar_weights), Kernel(f[diff]))


def _cos_turn(r: np.ndarray, n: int) -> np.ndarray:
    # Fold r and -r to the same residue so the profile is exactly symmetric.
    r = np.asarray(r) % n
    return np.cos(2.0 * np.pi * np.minimum(r, n - r) / n)


def winding_frequencies(exponents: Sequence[int]) -> list[int]:
    """Frequencies ``1, n_1, n_1 n_2, ..., n_1...n_k``."""
    freqs = [1]
    for e in exponents:
        if int(e) < 1:
            raise GroupError("exponents must be positive integers")
        freqs.append(freqs[-1] * int(e))
    return freqs


def winding_kernel_profile(k: int, exponents: Sequence[int], n: int) -> np.ndarray:
    """Profile on Z/N averaging ``k+1`` characters with frequencies ``1, n_1, n_1 n_2, ...``.

    ``f(j) = (k+1 + sum_i cos(2 pi m_i j / N)) / (2(k+1))``.
    """
    if n < 1:
        raise GroupError("N must be >= 1")
    if len(exponents) != k:
        raise GroupError(f"expected {k} exponents, got {len(exponents)}")
    j = np.arange(n, dtype=np.int64)
    total = np.full(n, float(k + 1))
    for m in winding_frequencies(exponents):
        total = total + _cos_turn((m % n) * j, n)
    return total / (2 * (k + 1))


def torus_limit_profile(k: int, n: int) -> np.ndarray:
    """Profile on (Z/N)^(k+1): ``(k+1 + sum_i cos(2 pi j_i / N)) / (2(k+1))``."""
    if k < 1:
        raise GroupError("k must be >= 1")
    t = TorusGroup(k + 1, n)
    c = t.coords(t.elements())
    total = np.full(t.order, float(k + 1))
    for i in range(k + 1):
        total = total + _cos_turn(c[:, i], n)
    return total / (2 * (k + 1))


def winding_morphism(n: int, exponents: Sequence[int], check: bool = True) -> GroupMorphism:
    """``j -> (j, n_1 j, n_1 n_2 j, ...)`` from Z/N into (Z/N)^(k+1)."""
    src = CyclicGroup(n)
    tgt = TorusGroup(len(exponents) + 1, n)
    j = np.arange(n, dtype=np.int64)
    coords = np.stack([(m % n) * j % n for m in winding_frequencies(exponents)], axis=-1)
    return GroupMorphism(src, tgt, tgt.index(coords), check=check)


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, math.isqrt(p) + 1))


def padic_tower(p: int, m: int, n: int) -> GroupMorphism:
    """Embed Z/p^m in the circle grid Z/N as the p^m-th roots of unity."""
    if not _is_prime(p):
        raise GroupError(f"{p} is not prime")
    if m < 0:
        raise GroupError("m must be >= 0")
    q = p**m
    if n % q:
        raise GroupError(f"N={n} is not divisible by {p}^{m}={q}")
    return GroupMorphism(CyclicGroup(q), CyclicGroup(n), np.arange(q) * (n // q) % n)


def _as_map(phi) -> tuple[np.ndarray, int | None]:
    if isinstance(phi, GroupMorphism):
        return phi.map, phi.target.order
    return np.asarray(phi, dtype=int), None


def pushforward_measure(phi, weights, target_size: int | None = None) -> np.ndarray:
    """Fiber sums: ``out[t] = sum(weights[s] for s with phi(s) == t)``."""
    m, size = _as_map(phi)
    w = np.asarray(weights, dtype=float)
    if w.shape != m.shape:
        raise GroupError("weights and map differ in length")
    if size is None:
        size = target_size if target_size is not None else int(m.max()) + 1
    return np.bincount(m, weights=w, minlength=size)


def pullback_graphon(phi, g: Graphon, source_weights=None) -> Graphon:
    """Graphon on the source with kernel ``W(phi x, phi y)``.

    Source weights default to the Haar measure of a morphism's source,
    or uniform weights for a bare index map.
    """
    m, size = _as_map(phi)
    if size is not None and size != len(g):
        raise GroupError(f"graphon has {len(g)} points, morphism target has order {size}")
    if m.size and m.max() >= len(g):
        raise GroupError("map points outside the graphon's grid")
    if source_weights is None:
        source_weights = phi.source.haar_weights if isinstance(phi, GroupMorphism) else np.full(m.size, 1.0 / m.size)
    kern = type(g.kernel)(g.K[np.ix_(m, m)])
    return make_graphon(WeightedGrid(source_weights), kern)


def induce_graphon(g: Graphon, m: int) -> Graphon:
    """``m`` disjoint copies with masses divided by ``m`` and zero cross-block kernel."""
    if m < 1:
        raise GraphonError("m must be >= 1")
    if m == 1:
        return g
    kern = type(g.kernel)(np.kron(np.eye(m), g.K))
    return make_graphon(WeightedGrid(np.tile(g.weights, m) / m), kern)


def translation_permutation(g: GroupModel, h: int) -> np.ndarray:
    """Left translation ``x -> h x`` as an index array."""
    return np.asarray(g.mul(h, g.elements()))
