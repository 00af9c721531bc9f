"""Two-step random-walk enumeration and the transition-cost node ranking.

From a start node k the walker takes two directed steps along nonzero-weight
edges, never using a self-loop and never returning to the start: k -> i -> j
with i != k, j != i, j != k. The score of a start node is the mean over all
its walks of the product of the two traversed edge weights; strongly negative
values mark a polarity-reversing local flow structure, and nodes are ranked
most-negative-first as the strongest instability spreaders.
"""
from __future__ import annotations

from dataclasses import dataclass

from .graph import SignedWeightedDigraph, _check_node
from .scores import NodeScoreTable, ranked_table


@dataclass(frozen=True)
class TwoStepWalk:
    start: int
    mid: int
    end: int
    w1: float  # weight of start -> mid
    w2: float  # weight of mid -> end

    @property
    def product(self) -> float:
        return self.w1 * self.w2


@dataclass(frozen=True)
class NstcRow:
    node: int
    n_paths: int
    nstc: float
    no_walks: bool = False


def two_step_walks(graph: SignedWeightedDigraph, start: int) -> list[TwoStepWalk]:
    """Exhaustive, deterministic enumeration of two-step walks from `start`."""
    _check_node(graph, start)
    w = graph.weights
    n = graph.n
    out = []
    for mid in range(n):
        if mid == start or w[start, mid] == 0:
            continue
        for end in range(n):
            if end == mid or end == start or w[mid, end] == 0:
                continue
            out.append(TwoStepWalk(start, mid, end, float(w[start, mid]), float(w[mid, end])))
    return out


def nstc(graph: SignedWeightedDigraph, node: int) -> NstcRow:
    """Normalized summation of transition cost: mean walk weight product.

    A node with no two-step walks gets score 0 with the no_walks flag set.
    """
    walks = two_step_walks(graph, node)
    if not walks:
        return NstcRow(node=node, n_paths=0, nstc=0.0, no_walks=True)
    total = sum(wk.product for wk in walks)
    return NstcRow(node=node, n_paths=len(walks), nstc=total / len(walks))


def nstc_table(graph: SignedWeightedDigraph) -> list[NstcRow]:
    return [nstc(graph, k) for k in range(graph.n)]


def nstc_ranking(graph: SignedWeightedDigraph) -> NodeScoreTable:
    """Rank all nodes ascending by score: most negative first (strongest spreader)."""
    rows = nstc_table(graph)
    return ranked_table("nstc", [r.nstc for r in rows], descending=False)


def all_walks(graph: SignedWeightedDigraph) -> list[TwoStepWalk]:
    """Every two-step walk in the graph, grouped by start node (for tree export)."""
    out = []
    for k in range(graph.n):
        out.extend(two_step_walks(graph, k))
    return out
