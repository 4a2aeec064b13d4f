from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from src.errors import GenomeError, PrimitiveError
from src.primitives import NodeSpec, catalog_names, validate_node

Layer = Tuple[NodeSpec, ...]


@dataclass(frozen=True)
class SearchBounds:
    """Limits on pipeline topology and the primitives a search may use.

    The final single-node layer counts toward ``max_layers``.
    """

    max_layers: int = 5
    max_nodes: int = 3
    allowed_primitives: Tuple[str, ...] = field(default_factory=lambda: tuple(catalog_names()))
    fixed_shape: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "allowed_primitives", tuple(self.allowed_primitives))
        if self.fixed_shape is not None:
            object.__setattr__(self, "fixed_shape", tuple(int(n) for n in self.fixed_shape))
        if self.max_layers < 1 or self.max_nodes < 1:
            raise GenomeError(f"max_layers and max_nodes must be >= 1, got ({self.max_layers}, {self.max_nodes})")
        if not self.allowed_primitives:
            raise GenomeError("allowed_primitives must not be empty")
        known = set(catalog_names())
        unknown = [p for p in self.allowed_primitives if p not in known]
        if unknown:
            raise GenomeError(f"unknown primitives in allow-list: {unknown}")
        if len(set(self.allowed_primitives)) != len(self.allowed_primitives):
            raise GenomeError("allowed_primitives contains duplicates")
        if self.fixed_shape is not None:
            check_shape(self.fixed_shape, self.max_layers, self.max_nodes)


def check_shape(shape: Sequence[int], max_layers: int, max_nodes: int) -> None:
    if not 1 <= len(shape) <= max_layers:
        raise GenomeError(f"pipeline has {len(shape)} layers; allowed 1..{max_layers}")
    if shape[-1] != 1:
        raise GenomeError(f"final layer must have exactly one node, has {shape[-1]}")
    for i, n in enumerate(shape[:-1]):
        if not 1 <= n <= max_nodes:
            raise GenomeError(f"layer {i} has {n} nodes; allowed 1..{max_nodes}")


@dataclass(frozen=True)
class PipelineGenome:
    layers: Tuple[Layer, ...]
    id: int = 0

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(tuple(layer) for layer in self.layers))

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(len(layer) for layer in self.layers)

    @property
    def n_layers(self) -> int:
        return len(self.layers)

    @property
    def total_nodes(self) -> int:
        return sum(self.shape)

    def nodes(self):
        for i, layer in enumerate(self.layers):
            for j, node in enumerate(layer):
                yield i, j, node

    def to_dict(self, with_id: bool = True) -> Dict[str, Any]:
        d: Dict[str, Any] = {"layers": [[node.to_dict() for node in layer] for layer in self.layers]}
        if with_id:
            d["id"] = self.id
        return d

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "PipelineGenome":
        try:
            layers = tuple(tuple(NodeSpec.from_dict(n) for n in layer) for layer in d["layers"])
        except (KeyError, TypeError) as e:
            raise GenomeError(f"malformed genome document: {e}") from e
        return cls(layers=layers, id=int(d.get("id", 0)))


def validate_genome(g: PipelineGenome, bounds: SearchBounds) -> None:
    check_shape(g.shape, bounds.max_layers, bounds.max_nodes)
    if bounds.fixed_shape is not None and g.shape != bounds.fixed_shape:
        raise GenomeError(f"shape {g.shape} differs from fixed shape {bounds.fixed_shape}")
    for i, j, node in g.nodes():
        if node.primitive not in bounds.allowed_primitives:
            raise GenomeError(f"layer {i} node {j}: primitive {node.primitive!r} is not allowed")
        try:
            validate_node(node)
        except PrimitiveError as e:
            raise GenomeError(f"layer {i} node {j}: {e}") from e


def is_valid(g: PipelineGenome, bounds: SearchBounds) -> bool:
    try:
        validate_genome(g, bounds)
    except GenomeError:
        return False
    return True


def genome_digest(g: PipelineGenome) -> str:
    canonical = json.dumps(g.to_dict(with_id=False), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:12]


def shape_label(g: PipelineGenome) -> str:
    return "-".join(str(n) for n in g.shape)

