"""Analysis orchestration: run selected methods on a model file, emit CSV/JSON
artifacts, and measure agreement between the resulting node rankings.

Rankings are oriented so rank 1 is "most unstable" (or most attended):
attention and motif cost rank larger scores first, the walk score ranks more
negative first, and the spectral sweep ranks the end-of-sweep largest negative
eigenvalue closest to zero first. Artifacts use fixed 6-significant-digit
float formatting so identical configs reproduce byte-identical files.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import agcn, motifs, spectral, walks
from .errors import BadParameter
from .graph import load_model
from .scores import NodeScoreTable, ranked_table, spearman_rho, top_k_jaccard

METHODS = ("attention", "spectral", "motifs", "nstc")
CONVERGENCE_LOSS = 0.005  # a training run at or below this counts as converged


@dataclass(frozen=True)
class AnalysisConfig:
    model_path: str = "piezo"
    variant: str = "appendix"
    methods: tuple[str, ...] = METHODS
    output_dir: str = "out"
    seeds: tuple[int, ...] = (0,)
    iterations: int = 500
    learning_rate: float = 0.5
    leaky_slope: float = 0.01
    perturb_node: int | None = None
    perturb_factor: float = 2.0
    delta_min: float = 0.5
    delta_max: float = 3.0
    delta_step: float = 0.5
    max_motif_size: int = 6
    top_k: int = 2

    def __post_init__(self):
        if not self.methods:
            raise BadParameter("methods must not be empty")
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown:
            raise BadParameter(f"unknown methods {unknown}; valid: {list(METHODS)}")
        if self.delta_step <= 0:
            raise BadParameter(f"delta_step must be > 0, got {self.delta_step}")
        if self.top_k < 1:
            raise BadParameter(f"top_k must be >= 1, got {self.top_k}")
        if not self.seeds:
            raise BadParameter("seeds must not be empty")


@dataclass(frozen=True)
class MethodPairConcordance:
    top_k_jaccard: float
    spearman_rho: float
    top_k: dict  # method name -> sorted top-k node list


@dataclass(frozen=True)
class ConcordanceReport:
    top_k: int
    pairs: dict  # "a|b" (alphabetical) -> MethodPairConcordance


def concordance(tables: dict[str, NodeScoreTable], top_k: int) -> ConcordanceReport:
    """Pairwise top-k Jaccard and Spearman rank agreement between rankings."""
    if top_k < 1:
        raise BadParameter(f"top_k must be >= 1, got {top_k}")
    sizes = {name: t.n for name, t in tables.items()}
    if len(set(sizes.values())) > 1:
        raise BadParameter(f"tables cover different node sets: {sizes}")
    names = sorted(tables)
    pairs = {}
    for i, a in enumerate(names):
        for b in names[i + 1 :]:
            pairs[f"{a}|{b}"] = MethodPairConcordance(
                top_k_jaccard=top_k_jaccard(tables[a], tables[b], top_k),
                spearman_rho=spearman_rho(tables[a], tables[b]),
                top_k={
                    a: sorted(tables[a].top(top_k)),
                    b: sorted(tables[b].top(top_k)),
                },
            )
    return ConcordanceReport(top_k=top_k, pairs=pairs)


def _fmt(value) -> str:
    if value is None:
        return ""
    return f"{value:.6g}"


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(cell if isinstance(cell, str) else _fmt(cell) for cell in row))
    path.write_text("\n".join(lines) + "\n")


def _delta_grid(config: AnalysisConfig) -> list[float]:
    grid = []
    k = 0
    while True:
        d = config.delta_min + k * config.delta_step
        if d > config.delta_max + 1e-12:
            break
        grid.append(round(d, 12))
        k += 1
    if not grid:
        raise BadParameter(
            f"empty delta grid: delta_min={config.delta_min} delta_max={config.delta_max}"
        )
    return grid


def _run_attention(config: AnalysisConfig, graph, features, out: Path) -> dict:
    if graph.node_labels is None:
        raise BadParameter("model has no 'labels' field; the attention method needs targets")
    feats = features
    if config.perturb_node is not None:
        feats = agcn.perturb_features(features, config.perturb_node, config.perturb_factor)
    per_seed = {}
    for seed in config.seeds:
        hyper = agcn.AgcnHyperparams(
            leaky_slope=config.leaky_slope,
            learning_rate=config.learning_rate,
            iterations=config.iterations,
            seed=seed,
        )
        state = agcn.train(graph, feats, graph.node_labels, hyper)
        table = agcn.node_attention_scores(state.alpha)
        per_seed[seed] = {
            "state": state,
            "table": table,
            "converged": state.final_loss <= CONVERGENCE_LOSS,
        }
    representative = next(
        (s for s in config.seeds if per_seed[s]["converged"]), config.seeds[0]
    )
    rep = per_seed[representative]
    state, table = rep["state"], rep["table"]

    _write_csv(
        out / "loss_history.csv",
        ["iteration", "loss"],
        [[i, loss] for i, loss in enumerate(state.loss_history)],
    )
    _write_csv(
        out / "alpha.csv",
        [f"to_{j}" for j in range(graph.n)],
        [list(row) for row in state.alpha],
    )
    _write_csv(
        out / "attention_scores.csv",
        ["node", "score", "rank"],
        [[node, table.scores[node], table.rank_of(node)] for node in range(graph.n)],
    )
    return {
        "table": table,
        "summary": {
            "representative_seed": representative,
            "perturb_node": config.perturb_node,
            "perturb_factor": config.perturb_factor if config.perturb_node is not None else None,
            "alpha": [[float(v) for v in row] for row in state.alpha],
            "scores": [table.scores[node] for node in range(graph.n)],
            "ranks": [table.rank_of(node) for node in range(graph.n)],
            "seeds": {
                str(seed): {
                    "initial_loss": rec["state"].loss_history[0],
                    "final_loss": rec["state"].final_loss,
                    "converged": rec["converged"],
                    "loss_history": [float(l) for l in rec["state"].loss_history],
                    "scores": [rec["table"].scores[node] for node in range(graph.n)],
                    "ranks": [rec["table"].rank_of(node) for node in range(graph.n)],
                }
                for seed, rec in per_seed.items()
            },
        },
    }


def _run_spectral(config: AnalysisConfig, graph, out: Path) -> dict:
    table = spectral.perturbation_sweep(graph, _delta_grid(config))
    rows = []
    for node in table.nodes:
        for delta in table.deltas:
            cell = table.cells[(node, delta)]
            rows.append([node, delta, cell.value, cell.status])
    _write_csv(out / "spectral_sweep.csv", ["node", "delta", "largest_negative_eigenvalue", "status"], rows)
    end_scores = spectral.sweep_end_scores(table)
    score_table = ranked_table("spectral", end_scores, descending=True)  # closest to zero first
    return {
        "table": score_table,
        "summary": {
            "deltas": list(table.deltas),
            "cells": [
                {
                    "node": cell.node,
                    "delta": cell.delta,
                    "value": cell.value,
                    "status": cell.status,
                }
                for key in sorted(table.cells)
                for cell in [table.cells[key]]
            ],
            "scores": list(score_table.scores),
            "ranks": [score_table.rank_of(node) for node in range(graph.n)],
        },
    }


def _run_motifs(config: AnalysisConfig, graph, out: Path) -> dict:
    rows = motifs.motif_table(graph, max_length=config.max_motif_size)
    _write_csv(
        out / "motif_costs.csv",
        ["node", "w3", "w4", "w5", "w6", "total_cost"],
        [[r.node, r.w3, r.w4, r.w5, r.w6, r.total_cost] for r in rows],
    )
    score_table = ranked_table("motifs", [r.total_cost for r in rows], descending=True)
    return {
        "table": score_table,
        "summary": {
            "rows": [
                {
                    "node": r.node,
                    "w3": r.w3,
                    "w4": r.w4,
                    "w5": r.w5,
                    "w6": r.w6,
                    "total_cost": r.total_cost,
                }
                for r in rows
            ],
            "scores": list(score_table.scores),
            "ranks": [score_table.rank_of(node) for node in range(graph.n)],
        },
    }


def _run_nstc(config: AnalysisConfig, graph, out: Path) -> dict:
    rows = walks.nstc_table(graph)
    score_table = walks.nstc_ranking(graph)
    _write_csv(
        out / "nstc.csv",
        ["node", "n_paths", "nstc", "rank"],
        [[r.node, r.n_paths, r.nstc, score_table.rank_of(r.node)] for r in rows],
    )
    walk_rows = walks.all_walks(graph)
    _write_csv(
        out / "walk_tree.csv",
        ["start", "mid", "end", "w1", "w2", "product"],
        [[w.start, w.mid, w.end, w.w1, w.w2, w.product] for w in walk_rows],
    )
    return {
        "table": score_table,
        "summary": {
            "rows": [
                {
                    "node": r.node,
                    "n_paths": r.n_paths,
                    "nstc": r.nstc,
                    "no_walks": r.no_walks,
                }
                for r in rows
            ],
            "walks": [
                [w.start, w.mid, w.end, w.w1, w.w2, w.product] for w in walk_rows
            ],
            "scores": list(score_table.scores),
            "ranks": [score_table.rank_of(node) for node in range(graph.n)],
        },
    }


def run(config: AnalysisConfig) -> dict:
    """Run the configured methods, write artifacts, and return the summary.

    Writes one set of CSV artifacts per method plus summary.json into the
    output directory. The summary is self-contained: every number in the
    per-method CSVs appears in it. Deterministic given the config.
    """
    graph, features = load_model(config.model_path, config.variant)
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)

    tables: dict[str, NodeScoreTable] = {}
    method_summaries = {}
    for method in METHODS:
        if method not in config.methods:
            continue
        if method == "attention":
            result = _run_attention(config, graph, features, out)
        elif method == "spectral":
            result = _run_spectral(config, graph, out)
        elif method == "motifs":
            result = _run_motifs(config, graph, out)
        else:
            result = _run_nstc(config, graph, out)
        tables[method] = result["table"]
        method_summaries[method] = result["summary"]

    summary = {
        "config": asdict(config),
        "n": graph.n,
        "methods": method_summaries,
    }
    if len(tables) >= 2:
        report = concordance(tables, config.top_k)
        summary["concordance"] = concordance_to_dict(report)
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True))
    return summary


def concordance_to_dict(report: ConcordanceReport) -> dict:
    return {
        "top_k": report.top_k,
        "pairs": {
            key: {
                "top_k_jaccard": pair.top_k_jaccard,
                "spearman_rho": pair.spearman_rho,
                "top_k": pair.top_k,
            }
            for key, pair in report.pairs.items()
        },
    }


_METHOD_ORIENTATION = {
    "attention": True,  # larger score ranks first
    "motifs": True,
    "nstc": False,  # more negative ranks first
    "spectral": True,  # closest to zero (max real part) ranks first
}


def tables_from_summary(summary: dict) -> dict[str, NodeScoreTable]:
    """Rebuild the per-method score tables stored in a summary document."""
    tables = {}
    for method, data in summary.get("methods", {}).items():
        if "scores" not in data:
            continue
        tables[method] = ranked_table(method, data["scores"], descending=_METHOD_ORIENTATION[method])
    return tables


def concordance_from_summary(summary: dict, top_k: int | None = None) -> ConcordanceReport:
    """Recompute the concordance report from a summary document."""
    tables = tables_from_summary(summary)
    if len(tables) < 2:
        raise BadParameter("summary holds fewer than two method score tables")
    if top_k is None:
        top_k = summary.get("config", {}).get("top_k", 2)
    return concordance(tables, top_k)
