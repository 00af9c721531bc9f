"""Directed simple-cycle enumeration and the imbalanced-motif cost per node.

A motif here is a directed simple cycle of 3 to 6 distinct nodes (self-loops
are never cycle edges). A cycle is imbalanced when the product of its edge
weights is negative, i.e. it carries an odd number of negative edges. For a
node and cycle length k, the score sums the weight products of the imbalanced
k-cycles through the node, normalized by the squared total degree; the total
cost combines the four lengths as the cube root of the absolute product.

Enumeration is exact. Graphs beyond the guard size are rejected rather than
sampled, since the scores are only meaningful under exhaustive counting.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import BadParameter, TooLarge
from .graph import SignedWeightedDigraph, _check_node, total_degree

MIN_CYCLE_LEN = 3
MAX_CYCLE_LEN = 6
DEFAULT_NODE_GUARD = 16


@dataclass(frozen=True)
class DirectedCycle:
    """Simple cycle in canonical rotation: nodes[0] is the smallest index."""

    nodes: tuple[int, ...]
    weight_product: float

    @property
    def imbalanced(self) -> bool:
        return self.weight_product < 0


@dataclass(frozen=True)
class MotifScoreRow:
    node: int
    w3: float
    w4: float
    w5: float
    w6: float
    total_cost: float


def enumerate_simple_cycles(
    graph: SignedWeightedDigraph, length: int, max_nodes: int = DEFAULT_NODE_GUARD
) -> list[DirectedCycle]:
    """All directed simple cycles with exactly `length` distinct nodes.

    Each cycle is reported once, rotated so its smallest node index comes
    first. Depth-first search from each start node only visits larger-indexed
    nodes, which yields the canonical rotation directly.
    """
    if not (MIN_CYCLE_LEN <= length <= MAX_CYCLE_LEN):
        raise BadParameter(
            f"cycle length must be in [{MIN_CYCLE_LEN}, {MAX_CYCLE_LEN}], got {length}"
        )
    if graph.n > max_nodes:
        raise TooLarge(
            f"exact enumeration guarded at n <= {max_nodes}, got n={graph.n}; "
            "raise max_nodes explicitly to override"
        )
    w = graph.weights
    n = graph.n
    cycles: list[DirectedCycle] = []
    path = [0] * length
    in_path = [False] * n

    def extend(start: int, node: int, depth: int, product: float) -> None:
        if depth == length:
            back = w[node, start]
            if back != 0:
                cycles.append(DirectedCycle(tuple(path), float(product * back)))
            return
        for nxt in range(start + 1, n):
            if in_path[nxt] or w[node, nxt] == 0:
                continue
            path[depth] = nxt
            in_path[nxt] = True
            extend(start, nxt, depth + 1, product * w[node, nxt])
            in_path[nxt] = False

    for start in range(n):
        path[0] = start
        in_path[start] = True
        extend(start, start, 1, 1.0)
        in_path[start] = False
    return cycles


def imbalanced_motif_score(
    graph: SignedWeightedDigraph,
    node: int,
    length: int,
    cycles: list[DirectedCycle] | None = None,
    max_nodes: int = DEFAULT_NODE_GUARD,
) -> float:
    """Sum of weight products of imbalanced `length`-cycles through `node`, over degree^2.

    Pass `cycles` (from enumerate_simple_cycles for the same length) to reuse
    one enumeration across nodes. A node on no imbalanced cycle scores 0.
    """
    _check_node(graph, node)
    if cycles is None:
        cycles = enumerate_simple_cycles(graph, length, max_nodes=max_nodes)
    total = sum(c.weight_product for c in cycles if c.imbalanced and node in c.nodes)
    if total == 0:
        return 0.0
    deg = total_degree(graph, node)
    return total / deg**2


def total_cost(
    graph: SignedWeightedDigraph,
    node: int,
    max_length: int = MAX_CYCLE_LEN,
    cycles_by_length: dict[int, list[DirectedCycle]] | None = None,
    max_nodes: int = DEFAULT_NODE_GUARD,
) -> MotifScoreRow:
    """Per-length imbalance scores and their combined cost for one node.

    total_cost = |w3 * w4 * w5 * w6| ** (1/3); any zero factor forces 0.
    """
    if not (MIN_CYCLE_LEN <= max_length <= MAX_CYCLE_LEN):
        raise BadParameter(f"max_length must be in [3, 6], got {max_length}")
    if cycles_by_length is None:
        cycles_by_length = {
            k: enumerate_simple_cycles(graph, k, max_nodes=max_nodes)
            for k in range(MIN_CYCLE_LEN, max_length + 1)
        }
    ws = {}
    for k in range(MIN_CYCLE_LEN, MAX_CYCLE_LEN + 1):
        if k <= max_length:
            ws[k] = imbalanced_motif_score(graph, node, k, cycles=cycles_by_length[k])
        else:
            ws[k] = 0.0
    product = ws[3] * ws[4] * ws[5] * ws[6]
    return MotifScoreRow(
        node=node,
        w3=ws[3],
        w4=ws[4],
        w5=ws[5],
        w6=ws[6],
        total_cost=abs(product) ** (1.0 / 3.0),
    )


def motif_table(
    graph: SignedWeightedDigraph,
    max_length: int = MAX_CYCLE_LEN,
    max_nodes: int = DEFAULT_NODE_GUARD,
) -> list[MotifScoreRow]:
    """Scores for every node, enumerating each cycle length once."""
    if not (MIN_CYCLE_LEN <= max_length <= MAX_CYCLE_LEN):
        raise BadParameter(f"max_length must be in [3, 6], got {max_length}")
    cycles_by_length = {
        k: enumerate_simple_cycles(graph, k, max_nodes=max_nodes)
        for k in range(MIN_CYCLE_LEN, max_length + 1)
    }
    return [
        total_cost(graph, node, max_length=max_length, cycles_by_length=cycles_by_length)
        for node in range(graph.n)
    ]
