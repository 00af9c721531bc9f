"""Dense nonsymmetric eigenvalues and the per-node column-perturbation sweep.

The sweep adds a level delta to one node's column of the weight matrix and
tracks the largest negative eigenvalue (the negative real part closest to
zero). Nodes whose value drifts toward zero as delta grows are the ones able
to tip the network into instability.

Two column-perturbation modes exist. "dense" adds delta to every entry of the
column, including structural zeros; "nonzero" only shifts existing edges
(graph.perturb_column). Dense is the default: it is the variant under which
the piezo fixture shows its reference drive-to-zero signature on nodes 2
and 6, and its trajectories are the archived reference.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadMatrix, BadParameter, NumericalFailure
from .graph import SignedWeightedDigraph, perturb_column

# residual acceptance for a computed eigenvalue: smallest singular value of
# (m - lambda I) relative to the matrix scale
RESIDUAL_RTOL = 1e-9
# eigenvalues with |Re| below this times max(1, scale) count as zero, not
# negative; rank-deficient matrices otherwise leak +-1e-16 noise eigenvalues
# into the "largest negative" pick
ZERO_RTOL = 1e-9


@dataclass(frozen=True)
class EigenSet:
    """All n eigenvalues of a real matrix, with verification metadata."""

    values: tuple  # complex eigenvalues
    residual_bound: float = 0.0  # max over values of sigma_min(m - v I)
    zero_tol: float = 0.0  # |Re| at or below this counts as zero


def eigenvalues(matrix) -> EigenSet:
    """Eigenvalues of a square real matrix, residual-verified.

    Every returned value v satisfies sigma_min(m - v I) <= 1e-9 * ||m||, i.e.
    it is the exact eigenvalue of a matrix within that distance of m.
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.size == 0:
        raise BadMatrix(f"expected a nonempty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise BadMatrix("matrix contains non-finite entries")
    n = m.shape[0]
    scale = float(np.linalg.norm(m, 2)) if n > 1 else float(abs(m[0, 0]))
    try:
        vals = np.linalg.eigvals(m)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigenvalue iteration failed to converge: {exc}") from exc
    ident = np.eye(n)
    worst = 0.0
    for v in vals:
        sigma = np.linalg.svd(m - v * ident, compute_uv=False)[-1]
        worst = max(worst, float(sigma))
    if worst > RESIDUAL_RTOL * max(1.0, scale):
        raise NumericalFailure(
            f"eigenvalue residual {worst:.3e} exceeds bound {RESIDUAL_RTOL * max(1.0, scale):.3e}"
        )
    if abs(vals.sum() - np.trace(m)) > 1e-6 * max(1.0, scale):
        raise NumericalFailure("eigenvalue sum does not match matrix trace")
    return EigenSet(
        values=tuple(complex(v) for v in vals),
        residual_bound=worst,
        zero_tol=ZERO_RTOL * max(1.0, scale),
    )


def largest_negative_eigenvalue(eigen: EigenSet) -> float | None:
    """Max real part among eigenvalues with real part < -zero_tol; None if none.

    Complex pairs contribute through their real part; the reported value is
    the real part alone.
    """
    negatives = [v.real for v in eigen.values if v.real < -eigen.zero_tol]
    return max(negatives) if negatives else None


@dataclass(frozen=True)
class SweepCell:
    node: int
    delta: float
    value: float | None  # largest negative eigenvalue; None if absent
    status: str  # "ok", "no_negative", or "failed"


@dataclass(frozen=True)
class PerturbationSweepTable:
    deltas: tuple[float, ...]  # ascending, always contains 0.0
    nodes: tuple[int, ...]
    cells: dict  # (node, delta) -> SweepCell

    def value(self, node: int, delta: float) -> float | None:
        return self.cells[(node, delta)].value

    def trajectory(self, node: int) -> list[float | None]:
        return [self.cells[(node, d)].value for d in self.deltas]


def perturbation_sweep(
    graph: SignedWeightedDigraph,
    deltas,
    nodes=None,
    mode: str = "dense",
) -> PerturbationSweepTable:
    """Largest negative eigenvalue per (node, delta) under column perturbation.

    The delta=0 baseline is always included. A cell whose eigenvalue
    computation fails is marked "failed" without aborting the other cells.
    """
    if mode not in ("dense", "nonzero"):
        raise BadParameter(f"mode must be 'dense' or 'nonzero', got {mode!r}")
    deltas = [float(d) for d in deltas]
    if any(not np.isfinite(d) for d in deltas):
        raise BadParameter("deltas must be finite")
    if nodes is None:
        nodes = range(graph.n)
    nodes = tuple(int(j) for j in nodes)
    grid = sorted(set(deltas) | {0.0})
    cells = {}
    for node in nodes:
        for delta in grid:
            if mode == "dense":
                w = graph.weights.copy()
                w[:, node] += delta
            else:
                w = perturb_column(graph, node, delta).weights
            try:
                value = largest_negative_eigenvalue(eigenvalues(w))
            except NumericalFailure:
                cells[(node, delta)] = SweepCell(node, delta, None, "failed")
                continue
            status = "ok" if value is not None else "no_negative"
            cells[(node, delta)] = SweepCell(node, delta, value, status)
    return PerturbationSweepTable(deltas=tuple(grid), nodes=nodes, cells=cells)


def sweep_end_scores(table: PerturbationSweepTable) -> list[float | None]:
    """Per-node scalar from the sweep: the value at the largest delta.

    Orientation for ranking: closer to zero means more unstable.
    """
    end = table.deltas[-1]
    return [table.value(node, end) for node in table.nodes]
