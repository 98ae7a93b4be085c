"""
Seeded verification campaigns over planted and clique-free random graphs.

Every trial draws its own generator from (seed, trial index), so trials are
independent of each other and of the worker count, and a failing trial can be
rerun alone.
"""

import logging
import os
from dataclasses import dataclass
from multiprocessing import Pool
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from tagclique.encoding import Graph
from tagclique.errors import Disagreement
from tagclique.formats import write_graph
from tagclique.reduction import VerificationReport, find_clique, verify_instance

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CampaignConfig:
    """Parameters of a verification campaign."""
    seed: int
    n_values: Tuple[int, ...]
    k: int = 1
    trials: int = 30
    planted_fraction: float = 0.5  # Share of trials with a forced 6k-clique
    edge_probability: float = 0.35  # Density of the background G(n, p) graph
    workers: int = 1
    repro_dir: str = "repro"  # Where graphs of failing trials are written

    def __post_init__(self):
        object.__setattr__(self, "n_values", tuple(self.n_values))
        if self.k < 1:
            raise ValueError("k must be positive")
        if self.trials < 0:
            raise ValueError("trials must be non-negative")
        if self.trials and not self.n_values:
            raise ValueError("n_values must not be empty")
        if any(n < 1 for n in self.n_values):
            raise ValueError("vertex counts must be positive")
        if not 0.0 <= self.planted_fraction <= 1.0:
            raise ValueError("planted_fraction must lie in [0, 1]")
        if not 0.0 <= self.edge_probability <= 1.0:
            raise ValueError("edge_probability must lie in [0, 1]")
        if self.planted_fraction > 0 and any(n < 6 * self.k for n in self.n_values):
            raise ValueError(f"planted instances need at least {6 * self.k} vertices")
        if self.workers < 1:
            raise ValueError("workers must be positive")


def random_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    """A G(n, p) sample."""
    upper = np.triu(rng.random((n, n)) < p, k=1)
    return Graph(n, upper | upper.T)


def planted_instance(n: int, k: int, p: float, rng: np.random.Generator) -> Graph:
    """A G(n, p) sample with a 6k-clique forced onto random vertices."""
    chosen = rng.choice(n, size=6 * k, replace=False) + 1
    return random_graph(n, p, rng).with_clique(int(v) for v in chosen)


def clique_free_instance(n: int, k: int, p: float, rng: np.random.Generator) -> Graph:
    """A G(n, p) sample with edges removed until it has no 6k-clique."""
    g = random_graph(n, p, rng)
    clique = find_clique(g, 6 * k)
    while clique is not None:
        u, v = rng.choice(clique, size=2, replace=False)
        g = g.without_edge(int(u), int(v))
        clique = find_clique(g, 6 * k)
    return g


@dataclass(frozen=True)
class TrialResult:
    index: int
    planted: bool
    graph: Graph
    report: VerificationReport


def _run_trial(job: Tuple[CampaignConfig, int]) -> TrialResult:
    config, index = job
    rng = np.random.default_rng([config.seed, index])
    n = int(rng.choice(config.n_values))
    planted = bool(rng.random() < config.planted_fraction)
    if planted:
        g = planted_instance(n, config.k, config.edge_probability, rng)
    else:
        g = clique_free_instance(n, config.k, config.edge_probability, rng)
    return TrialResult(index, planted, g, verify_instance(g, config.k))


def _write_repro(config: CampaignConfig, trial: TrialResult) -> str:
    os.makedirs(config.repro_dir, exist_ok=True)
    stem = os.path.join(config.repro_dir, f"trial-{trial.index:04d}")
    write_graph(stem + ".graph", trial.graph)
    command = (f"tagclique verify --n {' '.join(str(n) for n in config.n_values)} "
               f"--k {config.k} --trials {trial.index + 1} --seed {config.seed}\n")
    with open(stem + ".cmd", "w", encoding="utf-8") as handle:
        handle.write(command)
    return stem


@dataclass
class CampaignSummary:
    config: CampaignConfig
    trials: List[TrialResult]

    @property
    def positives(self) -> int:
        return sum(1 for t in self.trials if t.report.oracle_result)

    @property
    def negatives(self) -> int:
        return len(self.trials) - self.positives

    @property
    def disagreements(self) -> int:
        return sum(1 for t in self.trials if not t.report.passed)

    def to_text(self) -> str:
        """Deterministic summary without timings."""
        lines = [
            f"seed={self.config.seed}",
            f"k={self.config.k}",
            f"n_values={','.join(str(n) for n in self.config.n_values)}",
            f"trials={len(self.trials)}",
            f"positive={self.positives}",
            f"negative={self.negatives}",
            f"disagreements={self.disagreements}",
        ]
        for t in sorted(self.trials, key=lambda t: t.index):
            r = t.report
            lines.append(
                f"trial={t.index} n={r.n} edges={r.edges} planted={t.planted} "
                f"oracle={r.oracle_result} decomp={r.decomp_result} "
                f"constructive={r.constructive_result} length={r.encoded_length}")
        return "\n".join(lines) + "\n"


def run_campaign(config: CampaignConfig) -> CampaignSummary:
    """Run all trials, stopping at the first inconsistent one.

    Raises:
        Disagreement: a trial failed; its graph and command line have been
            written under ``config.repro_dir``.
    """
    jobs = [(config, index) for index in range(config.trials)]
    results: List[TrialResult] = []
    pool = Pool(config.workers) if config.workers > 1 and jobs else None
    try:
        outcomes: Iterable[TrialResult] = (
            pool.imap(_run_trial, jobs) if pool else map(_run_trial, jobs))
        for trial in outcomes:
            logger.info("trial %d/%d: n=%d planted=%s passed=%s",
                        trial.index + 1, config.trials, trial.report.n,
                        trial.planted, trial.report.passed)
            if not trial.report.passed:
                bundle = _write_repro(config, trial)
                raise Disagreement(trial.index, f"verdicts disagree: {format_report(trial.report)}",
                                   bundle)
            results.append(trial)
    finally:
        if pool is not None:
            pool.terminate()
    return CampaignSummary(config, results)


_REPORT_FIELDS = ("n", "edges", "k", "oracle_result", "decomp_result", "constructive_result",
                  "witness", "witness_valid", "encoded_length")


def format_report(report: VerificationReport, trial: Optional[int] = None) -> str:
    """One key=value line per field, timings last."""
    lines = [] if trial is None else [f"trial={trial}"]
    for name in _REPORT_FIELDS:
        value = getattr(report, name)
        if isinstance(value, tuple):
            value = ",".join(str(v) for v in value)
        lines.append(f"{name}={value}")
    lines.append(f"passed={report.passed}")
    for phase in ("oracle", "encode", "decomp", "constructive"):
        if phase in report.elapsed:
            lines.append(f"time_{phase}={report.elapsed[phase]:.6f}")
    return "\n".join(lines) + "\n"


def write_report(reports: Sequence[VerificationReport], path: str) -> None:
    """Write reports as blank-line separated key=value blocks."""
    blocks = [format_report(r, trial=i) for i, r in enumerate(reports)]
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(blocks))
