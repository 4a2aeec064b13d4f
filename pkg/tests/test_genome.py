import copy
from collections import Counter

import numpy as np
import pytest
from scipy import stats

from src.errors import GenomeError
from src.genome import (
    PipelineGenome,
    SearchBounds,
    applicable_moves,
    crossover,
    genome_digest,
    is_valid,
    mutate,
    random_genome,
    shape_label,
    validate_genome,
)
from src.genome import operators
from src.seeding import derive_seed

TWO_PRIMITIVES = ("decision_tree", "knn")


def is_one_step(a: PipelineGenome, b: PipelineGenome) -> bool:
    """True when ``b`` differs from ``a`` by exactly one move of the mutation taxonomy."""
    A, B = a.layers, b.layers
    if len(B) == len(A) + 1:
        return any(B[:p] + B[p + 1:] == A for p in range(len(B) - 1))
    if len(B) == len(A) - 1:
        return any(A[:p] + A[p + 1:] == B for p in range(len(A) - 1))
    if len(A) != len(B):
        return False
    changed = [i for i in range(len(A)) if A[i] != B[i]]
    if len(changed) != 1:
        return False
    la, lb = A[changed[0]], B[changed[0]]
    if len(lb) == len(la) + 1:
        return lb[:-1] == la
    if len(lb) == len(la) - 1:
        return any(la[:j] + la[j + 1:] == lb for j in range(len(la)))
    if len(la) != len(lb):
        return False
    nodes = [j for j in range(len(la)) if la[j] != lb[j]]
    if len(nodes) != 1:
        return False
    x, y = la[nodes[0]], lb[nodes[0]]
    if x.primitive != y.primitive:
        return True
    return sum(x.hyper_values[k] != y.hyper_values[k] for k in x.hyper_values) == 1


def sample_genomes(bounds, n, tag="sample"):
    return [random_genome(bounds, derive_seed(tag, i), genome_id=i) for i in range(n)]


class TestSearchBounds:
    def test_rejects_unknown_primitive(self):
        with pytest.raises(GenomeError):
            SearchBounds(allowed_primitives=("svc",))

    def test_rejects_bad_fixed_shape(self):
        with pytest.raises(GenomeError):
            SearchBounds(fixed_shape=(3, 2))
        with pytest.raises(GenomeError):
            SearchBounds(max_nodes=2, fixed_shape=(3, 1))


class TestRandomGenome:
    def test_forced_single_node(self):
        bounds = SearchBounds(max_layers=1, max_nodes=1)
        for g in sample_genomes(bounds, 50):
            assert g.shape == (1,)

    def test_same_seed_same_genome(self):
        bounds = SearchBounds()
        assert random_genome(bounds, 17) == random_genome(bounds, 17)

    def test_all_valid(self):
        bounds = SearchBounds()
        assert all(is_valid(g, bounds) for g in sample_genomes(bounds, 500))

    def test_shape_coverage_is_uniform(self):
        bounds = SearchBounds(max_layers=5, max_nodes=3)
        genomes = sample_genomes(bounds, 10_000, tag="coverage")
        layers = Counter(g.n_layers for g in genomes)
        widths = Counter(n for g in genomes for n in g.shape[:-1])
        assert set(layers) == {1, 2, 3, 4, 5}
        assert set(widths) == {1, 2, 3}
        assert stats.chisquare([layers[k] for k in range(1, 6)]).pvalue > 0.001
        assert stats.chisquare([widths[k] for k in range(1, 4)]).pvalue > 0.001

    def test_fixed_shape(self):
        bounds = SearchBounds(fixed_shape=(3, 2, 1))
        assert all(g.shape == (3, 2, 1) for g in sample_genomes(bounds, 20))


class TestMutate:
    def test_single_node_only_node_moves(self):
        bounds = SearchBounds(max_layers=1, max_nodes=1, allowed_primitives=TWO_PRIMITIVES)
        g = random_genome(bounds, 3)
        kinds = {m[0] for m in applicable_moves(g, bounds)}
        assert kinds == {"primitive", "hyper"}
        for s in range(100):
            child = mutate(g, bounds, derive_seed("m", s), genome_id=1)
            assert child.shape == (1,)
            assert child.layers != g.layers

    def test_full_depth_never_inserts(self):
        bounds = SearchBounds(max_layers=5, max_nodes=3)
        g = next(g for g in sample_genomes(bounds, 200) if g.n_layers == 5)
        kinds = {m[0] for m in applicable_moves(g, bounds)}
        assert "insert_layer" not in kinds
        assert "delete_layer" in kinds

    def test_every_mutation_is_one_valid_step(self):
        bounds = SearchBounds()
        g = next(g for g in sample_genomes(bounds, 200) if g.shape[0] >= 2 and g.n_layers >= 3)
        before = copy.deepcopy(g.to_dict())
        for s in range(1000):
            child = mutate(g, bounds, derive_seed("step", s), genome_id=999)
            validate_genome(child, bounds)
            assert is_one_step(g, child), (g.shape, child.shape)
            assert child.id == 999
        assert g.to_dict() == before

    def test_deleting_only_node_drops_the_layer(self):
        bounds = SearchBounds()
        final = sample_genomes(bounds, 1)[0].layers[-1]
        g = PipelineGenome(layers=(final, final))
        layers = operators._apply_move(g, ("delete_node", 0, 0), bounds, np.random.default_rng(0))
        assert [len(layer) for layer in layers] == [1]

    def test_no_applicable_move_raises(self, monkeypatch):
        bounds = SearchBounds(max_layers=1, max_nodes=1)
        g = random_genome(bounds, 0)
        monkeypatch.setattr(operators, "applicable_moves", lambda genome, b: [])
        with pytest.raises(GenomeError):
            operators.mutate(g, bounds, 1)

    def test_fixed_shape_keeps_topology(self):
        bounds = SearchBounds(fixed_shape=(3, 2, 1))
        g = random_genome(bounds, 4)
        kinds = {m[0] for m in applicable_moves(g, bounds)}
        assert kinds <= {"primitive", "hyper"}
        for s in range(200):
            assert mutate(g, bounds, s).shape == (3, 2, 1)


class TestCrossover:
    def test_single_layer_parents_swap(self):
        bounds = SearchBounds(max_layers=1, max_nodes=1)
        a, b = random_genome(bounds, 1, genome_id=1), random_genome(bounds, 2, genome_id=2)
        c1, c2 = crossover(a, b, bounds, 5, child_ids=(10, 11))
        assert c1.layers == b.layers and c2.layers == a.layers
        assert (c1.id, c2.id) == (10, 11)

    def test_hand_computed_splice(self, monkeypatch):
        bounds = SearchBounds(max_layers=5, max_nodes=3)
        a = next(g for g in sample_genomes(bounds, 300, "a") if g.n_layers == 3)
        b = next(g for g in sample_genomes(bounds, 300, "b") if g.n_layers == 2)
        monkeypatch.setattr(operators, "_draw_cuts", lambda x, y, bounds, rng: (1, 1))
        c1, c2 = crossover(a, b, bounds, 0)
        assert c1.layers == (a.layers[0], b.layers[1])
        assert c2.layers == (b.layers[0], a.layers[1], a.layers[2])

    def test_falls_back_to_clones(self, monkeypatch):
        bounds = SearchBounds(max_layers=3, max_nodes=3)
        a = next(g for g in sample_genomes(bounds, 300, "a") if g.n_layers == 3)
        b = next(g for g in sample_genomes(bounds, 300, "b") if g.n_layers == 3)
        # cuts (2, 0) give a 2 + 3 = 5-layer child, over the bound every time
        monkeypatch.setattr(operators, "_draw_cuts", lambda x, y, bounds, rng: (2, 0))
        c1, c2 = crossover(a, b, bounds, 0, child_ids=(7, 8))
        assert c1.layers == a.layers and c2.layers == b.layers
        assert (c1.id, c2.id) == (7, 8)

    def test_fixed_shape_uses_equal_cuts(self):
        bounds = SearchBounds(fixed_shape=(3, 2, 1))
        a, b = random_genome(bounds, 1), random_genome(bounds, 2)
        for s in range(100):
            c1, c2 = crossover(a, b, bounds, s)
            assert c1.shape == c2.shape == (3, 2, 1)

    def test_children_are_valid(self):
        bounds = SearchBounds(max_layers=5, max_nodes=3)
        pool = sample_genomes(bounds, 100, "pool")
        for s in range(1000):
            a, b = pool[s % 100], pool[(s * 7 + 3) % 100]
            for child in crossover(a, b, bounds, derive_seed("x", s)):
                validate_genome(child, bounds)


class TestClosure:
    def test_operators_stay_in_bounds(self):
        bounds = SearchBounds(max_layers=5, max_nodes=3)
        pool = sample_genomes(bounds, 200, "closure")
        snapshot = [g.to_dict() for g in pool]
        for t in range(10_000):
            a = pool[t % 200]
            if t % 2:
                children = crossover(a, pool[(t * 13 + 1) % 200], bounds, derive_seed("c", t))
            else:
                children = (mutate(a, bounds, derive_seed("m", t)),)
            assert all(is_valid(c, bounds) for c in children)
        assert [g.to_dict() for g in pool] == snapshot


class TestIdentity:
    def test_digest_ignores_id(self):
        g = random_genome(SearchBounds(), 8, genome_id=1)
        h = PipelineGenome(layers=g.layers, id=2)
        assert genome_digest(g) == genome_digest(h)
        assert len(genome_digest(g)) == 12

    def test_round_trip_and_label(self):
        g = random_genome(SearchBounds(fixed_shape=(2, 1)), 8, genome_id=4)
        assert PipelineGenome.from_dict(g.to_dict()) == g
        assert shape_label(g) == "2-1"
