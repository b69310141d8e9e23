import itertools
import json
import math

import numpy as np
import pytest

from conftest import random_graphon
from graphonlab.core import GraphonError, WeightedGrid, constant_graphon, make_graphon, metric_graphon_from_matrix
from graphonlab.groups import (
    biinvariant_profile,
    cayley_graphon,
    cyclic_group,
    induce_graphon,
    product_group,
    symmetric_group_table,
    table_group,
    torus_group,
    winding_kernel_profile,
)
from graphonlab.symmetry import (
    PermutationGroup,
    SearchCapExceeded,
    SimpleGraph,
    compose,
    frucht_realize,
    graph_automorphisms,
    graphon_automorphisms,
    invert,
    is_cayley_transitive,
    realize_metric_group,
    trivial_automorphisms,
)


def cycle(n):
    return SimpleGraph(n, tuple((i, (i + 1) % n) for i in range(n)))


def kernel_graphon(adj):
    a = np.asarray(adj, dtype=float)
    return make_graphon(WeightedGrid.uniform(a.shape[0]), a)


def brute_force_order(adj):
    a = np.asarray(adj)
    n = a.shape[0]
    return sum(np.array_equal(a[np.ix_(p, p)], a) for p in map(list, itertools.permutations(range(n))))


class TestPermutationGroup:
    def test_compose_invert(self):
        p = np.array([1, 2, 0])
        assert compose(p, invert(p)).tolist() == [0, 1, 2]

    def test_from_elements(self):
        g = PermutationGroup.from_elements(3, [(0, 1, 2), (1, 2, 0), (2, 0, 1)])
        assert g.order == 3 and g.is_closed()

    def test_not_closed(self):
        assert not PermutationGroup.from_elements(3, [(0, 1, 2), (1, 2, 0)]).is_closed()

    def test_json(self):
        d = json.loads(graph_automorphisms(cycle(4)).to_json())
        assert d["order"] == 8 and all(len(g) == 4 for g in d["generators"])

    def test_membership(self):
        auts = graph_automorphisms(cycle(6))
        assert [1, 2, 3, 4, 5, 0] in auts
        assert [1, 0, 2, 3, 4, 5] not in auts


class TestGraphAutomorphisms:
    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_complete(self, n):
        a = np.ones((n, n)) - np.eye(n)
        assert graph_automorphisms(a).order == math.factorial(n)

    def test_k4(self):
        assert graph_automorphisms(np.ones((4, 4)) - np.eye(4)).order == 24

    def test_p3(self):
        assert graph_automorphisms(SimpleGraph(3, ((0, 1), (1, 2)))).order == 2

    @pytest.mark.parametrize("n", [3, 5, 8, 12])
    def test_cycles(self, n):
        assert graph_automorphisms(cycle(n)).order == 2 * n

    def test_petersen(self):
        outer = [(i, (i + 1) % 5) for i in range(5)]
        spokes = [(i, i + 5) for i in range(5)]
        inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
        assert graph_automorphisms(SimpleGraph(10, tuple(outer + spokes + inner))).order == 120

    def test_large_complete_closed(self):
        g = graph_automorphisms(np.ones((6, 6)) - np.eye(6))
        assert g.order == 720 and g.is_closed()

    def test_empty_graph_enumerates(self):
        g = graph_automorphisms(np.zeros((5, 5)))
        assert g.order == 120 and len(g.element_set()) == 120

    def test_caps(self):
        with pytest.raises(SearchCapExceeded):
            graph_automorphisms(cycle(11), method="naive")
        with pytest.raises(SearchCapExceeded):
            graph_automorphisms(cycle(65))
        assert graph_automorphisms(cycle(65), cap=100).order == 130

    def test_bad_method(self):
        with pytest.raises(ValueError):
            graph_automorphisms(cycle(4), method="fast")

    def test_asymmetric_adjacency(self):
        with pytest.raises(ValueError):
            graph_automorphisms(np.array([[0, 1], [0, 0]]))


class TestGraphonAutomorphisms:
    def test_g2(self, g2):
        assert graphon_automorphisms(g2).order == 2

    def test_five_cycle(self):
        g = kernel_graphon(cycle(5).adjacency())
        assert graphon_automorphisms(g).order == 10
        assert graphon_automorphisms(g, method="naive").order == 10

    def test_weights_break_symmetry(self):
        g = make_graphon(WeightedGrid([0.2, 0.3, 0.5]), np.ones((3, 3)))
        assert graphon_automorphisms(g).order == 1

    def test_tolerance(self):
        k = np.array([[0.5, 0.2, 0.2], [0.2, 0.5, 0.2 + 1e-11], [0.2, 0.2 + 1e-11, 0.5]])
        g = make_graphon(WeightedGrid.uniform(3), k)
        assert graphon_automorphisms(g).order == 2
        assert graphon_automorphisms(g, tol=1e-9).order == 6

    @pytest.mark.parametrize("seed", range(10))
    def test_group_axioms(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 8))
        a = np.triu(rng.integers(0, 2, (n, n)), 1)
        auts = graphon_automorphisms(kernel_graphon(a + a.T))
        assert auts.is_closed()

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_pruned_equals_naive_exhaustive(self, n):
        pairs = list(itertools.combinations(range(n), 2))
        for bits in itertools.product((0, 1), repeat=len(pairs)):
            a = np.zeros((n, n))
            for (i, j), b in zip(pairs, bits):
                a[i, j] = a[j, i] = b
            g = kernel_graphon(a)
            assert graphon_automorphisms(g).element_set() == graphon_automorphisms(g, method="naive").element_set()

    @pytest.mark.parametrize("n", [5, 6])
    def test_pruned_equals_naive_sampled(self, n):
        rng = np.random.default_rng(n)
        for _ in range(60):
            a = np.triu(rng.integers(0, 2, (n, n)), 1)
            g = kernel_graphon(a + a.T)
            assert graphon_automorphisms(g).element_set() == graphon_automorphisms(g, method="naive").element_set()

    @pytest.mark.parametrize("seed", range(20))
    def test_pruned_equals_naive_weighted(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 7))
        vals = rng.choice([0.1, 0.4, 0.9], (n, n))
        k = np.triu(vals) + np.triu(vals, 1).T
        w = rng.choice([1.0, 2.0], n)
        g = make_graphon(WeightedGrid(w / w.sum()), k)
        assert graphon_automorphisms(g).element_set() == graphon_automorphisms(g, method="naive").element_set()

    def test_brute_force_oracle(self):
        a = np.zeros((6, 6), dtype=int)
        for i, j in [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5)]:
            a[i, j] = a[j, i] = 1
        assert graph_automorphisms(a).order == brute_force_order(a)

    @pytest.mark.parametrize(
        "group",
        [cyclic_group(6), cyclic_group(12), torus_group(2, 4), product_group(cyclic_group(2), cyclic_group(4))],
        ids=lambda g: f"{g.kind}-{g.order}",
    )
    def test_translations_divide_order(self, group):
        g = cayley_graphon(group, biinvariant_profile(group))
        assert graphon_automorphisms(g).order % group.order == 0

    def test_winding_translations_divide_order(self):
        n = 32
        g = cayley_graphon(cyclic_group(n), winding_kernel_profile(1, (3,), n))
        auts = graphon_automorphisms(g)
        assert auts.order % n == 0
        assert list(np.roll(np.arange(n), -1)) in auts

    def test_induced_blockwise_embedding(self):
        base = random_graphon(3, 2, binary=True, uniform=True)
        m = 2
        induced = induce_graphon(base, m)
        big = graphon_automorphisms(induced)
        for p in graphon_automorphisms(base).elements():
            # Point (i, c) of the induced grid sits at index i * m + c.
            lifted = (p[:, None] * m + np.arange(m)[None, :]).ravel()
            assert lifted in big


class TestTrivialAutomorphisms:
    def test_g2(self, g2):
        assert trivial_automorphisms(g2, graphon_automorphisms(g2)).order == 1

    def test_constant(self):
        g = constant_graphon(4, 0.5)
        auts = graphon_automorphisms(g)
        assert trivial_automorphisms(g, auts).order == auts.order == 24

    def test_twins(self):
        # Points 0 and 1 have identical rows; swapping them is trivial.
        k = np.array([[0.2, 0.2, 0.7], [0.2, 0.2, 0.7], [0.7, 0.7, 0.1]])
        g = make_graphon(WeightedGrid.uniform(3), k)
        assert trivial_automorphisms(g, graphon_automorphisms(g)).order == 2

    @pytest.mark.parametrize("seed", range(10))
    def test_separated_square(self, seed):
        rng = np.random.default_rng(seed)
        jitter = 1 + 0.1 * rng.random()
        x = np.array([[0, 0], [1, 0], [1, 1], [0, 1]]) * jitter
        d = np.sqrt(((x[:, None] - x[None]) ** 2).sum(-1))
        g = metric_graphon_from_matrix(d, np.full(4, 0.25), x)
        auts = graphon_automorphisms(g, tol=1e-12)
        assert auts.order == 8
        assert trivial_automorphisms(g, auts).order == 1


class TestFrucht:
    @pytest.mark.parametrize(
        "group,gens,order",
        [
            (cyclic_group(1), [0], 1),
            (cyclic_group(2), [1], 2),
            (cyclic_group(3), [1], 3),
            (cyclic_group(4), [1], 4),
            (product_group(cyclic_group(2), cyclic_group(2)), [1, 2], 4),
            (cyclic_group(5), [1], 5),
            (cyclic_group(6), [2, 3], 6),
        ],
    )
    def test_orders(self, group, gens, order):
        graph = frucht_realize(group, gens)
        assert graph_automorphisms(graph, cap=256).order == order

    def test_s3(self):
        table, perms = symmetric_group_table(3)
        gens = [perms.index((1, 0, 2)), perms.index((1, 2, 0))]
        graph = frucht_realize(table_group(table), gens)
        assert graph_automorphisms(graph, cap=256).order == 6

    def test_z3_matches_brute_force_on_cayley_vertices(self):
        graph = frucht_realize(cyclic_group(3), [1])
        auts = graph_automorphisms(graph)
        images = {tuple(int(x) for x in p[:3]) for p in auts.elements()}
        assert images == {(0, 1, 2), (1, 2, 0), (2, 0, 1)}

    def test_empty_generators(self):
        with pytest.raises(ValueError):
            frucht_realize(cyclic_group(3), [])


class TestCayleyTransitive:
    @pytest.mark.parametrize(
        "group",
        [cyclic_group(1), cyclic_group(7), cyclic_group(64), torus_group(2, 8), torus_group(3, 4),
         product_group(cyclic_group(3), cyclic_group(5)), table_group(symmetric_group_table(4)[0])],
        ids=lambda g: f"{g.kind}-{g.order}",
    )
    def test_cayley_graphons(self, group):
        assert is_cayley_transitive(cayley_graphon(group, biinvariant_profile(group)), group)

    def test_g2(self, g2):
        assert is_cayley_transitive(g2, cyclic_group(2))

    def test_random_kernel(self):
        g = random_graphon(5, 3, uniform=True)
        assert not is_cayley_transitive(g, cyclic_group(5))

    def test_nonuniform_weights(self):
        g = make_graphon(WeightedGrid([0.25, 0.75]), np.ones((2, 2)))
        assert not is_cayley_transitive(g, cyclic_group(2))

    def test_size_mismatch(self, g2):
        with pytest.raises(GraphonError):
            is_cayley_transitive(g2, cyclic_group(3))


class TestRealizeMetricGroup:
    def square(self):
        x = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float)
        return np.sqrt(((x[:, None] - x[None]) ** 2).sum(-1)), x

    def test_square_rotations(self):
        d, x = self.square()
        rot = PermutationGroup.from_elements(4, [np.roll(np.arange(4), -k) for k in range(4)])
        g = realize_metric_group(d, rot, coords=x)
        auts = graphon_automorphisms(g)
        assert auts.order == 8
        assert rot.element_set() <= auts.element_set()

    def test_skewed_weights_averaged(self):
        swap = PermutationGroup.from_elements(2, [(0, 1), (1, 0)])
        g = realize_metric_group([[0, 1], [1, 0]], swap, weights=[0.9, 0.1])
        assert np.allclose(g.weights, [0.5, 0.5], atol=1e-15)

    def test_group_preserves_weights(self):
        d, x = self.square()
        rot = PermutationGroup.from_elements(4, [np.roll(np.arange(4), -k) for k in range(4)])
        g = realize_metric_group(d, rot, weights=[0.1, 0.2, 0.3, 0.4])
        auts = graphon_automorphisms(g, tol=1e-12)
        assert rot.element_set() <= auts.element_set()

    def test_non_isometric(self):
        d = np.array([[0, 1, 2], [1, 0, 1], [2, 1, 0]], dtype=float)
        bad = PermutationGroup.from_elements(3, [(0, 1, 2), (1, 0, 2)])
        with pytest.raises(ValueError):
            realize_metric_group(d, bad)
