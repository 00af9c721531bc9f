"""Signed weighted digraph model, fixture loading, degrees, and column perturbation.

A graph is a dense n x n weight matrix: entry (i, j) is the weight of the
directed edge i -> j, and an edge exists exactly when its weight is nonzero
(no epsilon thresholding; fixture weights are exact decimal literals).
Self-loops are allowed. Graphs are immutable after construction; every
operation returns a new value, so concurrent reads are safe.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import BadNode, BadParameter, MalformedModel

_FIXTURE_DIR = Path(__file__).parent / "fixtures"
_FIXTURE_ALIAS = "piezo"
_VARIANTS = ("appendix", "printed")


class DegreeConvention(Enum):
    """How a node's degree is counted.

    TOTAL_WITH_SELF_LOOPS_BOTH_WAYS: number of nonzero entries in the node's
    row plus number of nonzero entries in its column; a self-loop therefore
    contributes 2. This is the only convention required by the analyses here.
    """

    TOTAL_WITH_SELF_LOOPS_BOTH_WAYS = "total_with_self_loops_both_ways"


@dataclass(frozen=True)
class SignedWeightedDigraph:
    """Dense signed weighted digraph; weights[i, j] is the weight of edge i -> j."""

    weights: np.ndarray
    node_labels: np.ndarray | None = None
    cluster_of: tuple | None = None

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise MalformedModel(f"adjacency must be square, got shape {w.shape}")
        if w.size == 0:
            raise MalformedModel("adjacency must have at least one node")
        if not np.all(np.isfinite(w)):
            raise MalformedModel("adjacency contains non-finite entries")
        w = w.copy()
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        if self.node_labels is not None:
            lab = np.asarray(self.node_labels, dtype=float)
            if lab.shape != (w.shape[0],):
                raise MalformedModel(
                    f"labels must have one entry per node, got {lab.shape[0]} for n={w.shape[0]}"
                )
            lab.setflags(write=False)
            object.__setattr__(self, "node_labels", lab)
        if self.cluster_of is not None:
            cl = tuple(self.cluster_of)
            if len(cl) != w.shape[0]:
                raise MalformedModel(
                    f"clusters must have one entry per node, got {len(cl)} for n={w.shape[0]}"
                )
            object.__setattr__(self, "cluster_of", cl)

    @property
    def n(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True)
class FeatureMatrix:
    """Per-node feature table, one row per node."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2:
            raise MalformedModel(f"features must be a 2-d table, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise MalformedModel("features contain non-finite entries")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]


def fixture_path(variant: str = "appendix") -> Path:
    """Path of the bundled piezo actuator fixture for the given variant.

    The two variants differ in the sign of coupling entry (3, 1): `appendix`
    carries +1.3083 (canonical; every reference score value assumes it),
    `printed` carries -1.3083.
    """
    if variant not in _VARIANTS:
        raise BadParameter(f"variant must be one of {_VARIANTS}, got {variant!r}")
    return _FIXTURE_DIR / f"piezo_{variant}.json"


def load_model(source, variant: str = "appendix") -> tuple[SignedWeightedDigraph, FeatureMatrix]:
    """Load a model file and return its graph and feature matrix.

    `source` is either a path to a model JSON document or the bundled-fixture
    alias "piezo"; for the alias (or a path inside the bundled fixture
    directory) `variant` selects which fixture file is read. For any other
    path the document is loaded as-is and `variant` has no effect.
    """
    if variant not in _VARIANTS:
        raise BadParameter(f"variant must be one of {_VARIANTS}, got {variant!r}")
    path = Path(source)
    if str(source) == _FIXTURE_ALIAS or path.parent == _FIXTURE_DIR:
        path = fixture_path(variant)
    if not path.exists():
        raise MalformedModel(f"model file not found: {path}")
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise MalformedModel(f"model file is not valid JSON: {exc}") from exc
    return model_from_dict(doc)


def model_from_dict(doc: dict) -> tuple[SignedWeightedDigraph, FeatureMatrix]:
    """Build (graph, features) from a parsed model document."""
    for key in ("n", "adjacency", "features"):
        if key not in doc:
            raise MalformedModel(f"model document is missing field {key!r}")
    n = doc["n"]
    if not isinstance(n, int) or n < 1:
        raise MalformedModel(f"field 'n' must be a positive integer, got {n!r}")
    adj = np.asarray(doc["adjacency"], dtype=float)
    if adj.shape != (n, n):
        raise MalformedModel(f"adjacency must be {n}x{n}, got shape {adj.shape}")
    feat = np.asarray(doc["features"], dtype=float)
    if feat.ndim != 2 or feat.shape[0] != n:
        raise MalformedModel(f"features must have {n} rows, got shape {feat.shape}")
    graph = SignedWeightedDigraph(
        weights=adj,
        node_labels=doc.get("labels"),
        cluster_of=doc.get("clusters"),
    )
    return graph, FeatureMatrix(values=feat)


def model_to_dict(graph: SignedWeightedDigraph, features: FeatureMatrix) -> dict:
    """Serialize (graph, features) to a model document round-trippable by load_model."""
    doc = {
        "n": graph.n,
        "adjacency": graph.weights.tolist(),
        "features": features.values.tolist(),
    }
    if graph.node_labels is not None:
        doc["labels"] = graph.node_labels.tolist()
    if graph.cluster_of is not None:
        doc["clusters"] = list(graph.cluster_of)
    return doc


def save_model(path, graph: SignedWeightedDigraph, features: FeatureMatrix) -> None:
    Path(path).write_text(json.dumps(model_to_dict(graph, features), indent=1))


def total_degree(
    graph: SignedWeightedDigraph,
    node: int,
    convention: DegreeConvention = DegreeConvention.TOTAL_WITH_SELF_LOOPS_BOTH_WAYS,
) -> int:
    """Count of nonzero entries in the node's row plus those in its column.

    A self-loop appears in both the row and the column, so it contributes 2.
    """
    _check_node(graph, node)
    w = graph.weights
    return int(np.count_nonzero(w[node, :]) + np.count_nonzero(w[:, node]))


def perturb_column(graph: SignedWeightedDigraph, node: int, delta: float) -> SignedWeightedDigraph:
    """Return a copy with `delta` added to every nonzero entry of column `node`.

    Structural zeros in the column stay zero and no other column changes;
    the input graph is left untouched.
    """
    _check_node(graph, node)
    if not np.isfinite(delta):
        raise BadParameter(f"delta must be finite, got {delta!r}")
    w = graph.weights.copy()
    mask = w[:, node] != 0
    w[mask, node] += delta
    return SignedWeightedDigraph(
        weights=w, node_labels=graph.node_labels, cluster_of=graph.cluster_of
    )


def _check_node(graph: SignedWeightedDigraph, node: int) -> None:
    if not (isinstance(node, (int, np.integer)) and 0 <= node < graph.n):
        raise BadNode(f"node index {node!r} outside graph with n={graph.n}")
