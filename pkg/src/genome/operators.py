"""Variation operators over PipelineGenome.

All three operators are pure: the result depends only on the inputs and the seed,
and parents are never modified.
"""
from __future__ import annotations

import logging
from typing import Any, List, Tuple

import numpy as np

from src.errors import GenomeError
from src.primitives import NodeSpec, get_spec
from src.seeding import make_rng

from .model import Layer, PipelineGenome, SearchBounds

logger = logging.getLogger(__name__)

CROSSOVER_ATTEMPTS = 16


def _pick(rng: np.random.Generator, options) -> Any:
    return options[int(rng.integers(len(options)))]


def random_node(bounds: SearchBounds, rng: np.random.Generator) -> NodeSpec:
    primitive = _pick(rng, bounds.allowed_primitives)
    return _random_hypers(primitive, rng)


def _random_hypers(primitive: str, rng: np.random.Generator) -> NodeSpec:
    grid = get_spec(primitive).hyper_grid
    return NodeSpec(primitive, {key: _pick(rng, values) for key, values in grid.items()})


def _random_layer(n_nodes: int, bounds: SearchBounds, rng: np.random.Generator) -> Layer:
    return tuple(random_node(bounds, rng) for _ in range(n_nodes))


def random_genome(bounds: SearchBounds, rng_seed: int, genome_id: int = 0) -> PipelineGenome:
    rng = make_rng(rng_seed)
    if bounds.fixed_shape is not None:
        shape = list(bounds.fixed_shape)
    else:
        n_layers = int(rng.integers(1, bounds.max_layers + 1))
        shape = [int(rng.integers(1, bounds.max_nodes + 1)) for _ in range(n_layers - 1)] + [1]
    return PipelineGenome(layers=tuple(_random_layer(n, bounds, rng) for n in shape), id=genome_id)


def applicable_moves(g: PipelineGenome, bounds: SearchBounds) -> List[Tuple]:
    """Enumerate every concrete one-step change allowed under ``bounds``.

    Move tuples:
      ("primitive", layer, node)        re-draw the node's primitive type
      ("hyper", layer, node, key)       re-draw one hyperparameter value
      ("insert_layer", position)        insert a random non-final layer
      ("delete_layer", position)        delete a non-final layer
      ("add_node", layer)               add a random node to a non-final layer
      ("delete_node", layer, node)      delete a node from a non-final layer
    """
    moves: List[Tuple] = []
    for i, j, node in g.nodes():
        if len(bounds.allowed_primitives) >= 2:
            moves.append(("primitive", i, j))
        for key, values in get_spec(node.primitive).hyper_grid.items():
            if len(values) >= 2:
                moves.append(("hyper", i, j, key))
    if bounds.fixed_shape is not None:
        return moves

    n_layers = g.n_layers
    if n_layers < bounds.max_layers:
        moves.extend(("insert_layer", p) for p in range(n_layers))
    moves.extend(("delete_layer", p) for p in range(n_layers - 1))
    for i in range(n_layers - 1):
        size = len(g.layers[i])
        if size < bounds.max_nodes:
            moves.append(("add_node", i))
        # a 1-node layer loses the whole layer, which keeps this move always available
        moves.extend(("delete_node", i, j) for j in range(size))
    return moves


def _apply_move(g: PipelineGenome, move: Tuple, bounds: SearchBounds, rng: np.random.Generator) -> List[Layer]:
    layers = [list(layer) for layer in g.layers]
    kind = move[0]
    if kind == "primitive":
        _, i, j = move
        current = layers[i][j].primitive
        choices = [p for p in bounds.allowed_primitives if p != current]
        layers[i][j] = _random_hypers(_pick(rng, choices), rng)
    elif kind == "hyper":
        _, i, j, key = move
        node = layers[i][j]
        values = [v for v in get_spec(node.primitive).hyper_grid[key] if v != node.hyper_values[key]]
        layers[i][j] = node.with_value(key, _pick(rng, values))
    elif kind == "insert_layer":
        n_nodes = int(rng.integers(1, bounds.max_nodes + 1))
        layers.insert(move[1], list(_random_layer(n_nodes, bounds, rng)))
    elif kind == "delete_layer":
        del layers[move[1]]
    elif kind == "add_node":
        layers[move[1]].append(random_node(bounds, rng))
    elif kind == "delete_node":
        _, i, j = move
        del layers[i][j]
        if not layers[i]:
            del layers[i]
    else:
        raise GenomeError(f"unknown move {move!r}")
    return [tuple(layer) for layer in layers]


def mutate(g: PipelineGenome, bounds: SearchBounds, rng_seed: int, genome_id: int = 0) -> PipelineGenome:
    """One-step mutation: exactly one change, drawn uniformly over applicable moves."""
    moves = applicable_moves(g, bounds)
    if not moves:
        raise GenomeError(f"genome {g.id} admits no mutation under the current bounds")
    rng = make_rng(rng_seed)
    move = moves[int(rng.integers(len(moves)))]
    logger.debug("mutate genome %d with %s", g.id, move)
    return PipelineGenome(layers=tuple(_apply_move(g, move, bounds, rng)), id=genome_id)


def _draw_cuts(a: PipelineGenome, b: PipelineGenome, bounds: SearchBounds, rng: np.random.Generator) -> Tuple[int, int]:
    if bounds.fixed_shape is not None:
        c = int(rng.integers(a.n_layers))
        return c, c
    return int(rng.integers(a.n_layers)), int(rng.integers(b.n_layers))


def crossover(
    a: PipelineGenome,
    b: PipelineGenome,
    bounds: SearchBounds,
    rng_seed: int,
    child_ids: Tuple[int, int] = (0, 0),
) -> Tuple[PipelineGenome, PipelineGenome]:
    """Swap layer suffixes of two parents.

    Cuts fall before the final layer, so every suffix carries a single-node output
    layer. Over-long children cause a re-draw; after CROSSOVER_ATTEMPTS failures the
    parents are cloned under the new ids.
    """
    rng = make_rng(rng_seed)
    for _ in range(CROSSOVER_ATTEMPTS):
        ca, cb = _draw_cuts(a, b, bounds, rng)
        first = a.layers[:ca] + b.layers[cb:]
        second = b.layers[:cb] + a.layers[ca:]
        if len(first) <= bounds.max_layers and len(second) <= bounds.max_layers:
            return (
                PipelineGenome(layers=first, id=child_ids[0]),
                PipelineGenome(layers=second, id=child_ids[1]),
            )
    logger.debug("crossover of %d and %d fell back to cloning", a.id, b.id)
    return PipelineGenome(layers=a.layers, id=child_ids[0]), PipelineGenome(layers=b.layers, id=child_ids[1])
