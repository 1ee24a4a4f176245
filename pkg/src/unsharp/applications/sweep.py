"""Seed splitting, sweep results and their CSV / JSON-lines emission."""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

CSV_HEADER = ("grid_value", "mean_fidelity", "stderr_fidelity", "mean_count", "stderr_count", "n_traj", "seed")
SWEEP_VARIABLES = ("P_w", "P_sp")


def trajectory_rng(master_seed: int, sweep_index: int, trajectory_index: int) -> np.random.Generator:
    """Independent generator for one trajectory.

    A pure function of ``(master_seed, sweep_index, trajectory_index)``, so the
    stream of a trajectory does not depend on how work is split across processes.
    """
    return np.random.default_rng(np.random.SeedSequence([int(master_seed), int(sweep_index), int(trajectory_index)]))


def fmt_real(x: float) -> str:
    return format(float(x), ".17g")


def mean_stderr(values) -> tuple[float, float]:
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        return float("nan"), float("nan")
    se = float(np.std(v, ddof=1) / np.sqrt(v.size)) if v.size > 1 else 0.0
    return float(np.mean(v)), se


@dataclass
class SweepPoint:
    grid_value: float
    fidelities: np.ndarray
    counts: np.ndarray
    converged: np.ndarray | None = None
    extra: dict = field(default_factory=dict)

    @property
    def n_traj(self) -> int:
        return int(self.fidelities.size)

    @property
    def fidelity(self) -> tuple[float, float]:
        return mean_stderr(self.fidelities)

    @property
    def count(self) -> tuple[float, float]:
        return mean_stderr(self.counts)


@dataclass
class SweepResult:
    variable: str
    seed: int
    points: list[SweepPoint]

    def grid(self) -> np.ndarray:
        return np.array([p.grid_value for p in self.points])

    def fidelity_curve(self) -> tuple[np.ndarray, np.ndarray]:
        stats = np.array([p.fidelity for p in self.points])
        return stats[:, 0], stats[:, 1]

    def count_curve(self) -> tuple[np.ndarray, np.ndarray]:
        stats = np.array([p.count for p in self.points])
        return stats[:, 0], stats[:, 1]

    def rows(self) -> list[tuple]:
        out = []
        for p in self.points:
            f, fse = p.fidelity
            c, cse = p.count
            out.append((p.grid_value, f, fse, c, cse, p.n_traj, self.seed))
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for row in self.rows():
            w.writerow([fmt_real(v) if isinstance(v, float) else v for v in row])
        return buf.getvalue()

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(self.to_csv())


def monotone_within(values, stderrs, increasing: bool = False, nsigma: float = 3.0) -> bool:
    """True if no step goes the wrong way by more than ``nsigma`` combined standard errors."""
    v = np.asarray(values, dtype=float)
    s = np.asarray(stderrs, dtype=float)
    step = np.diff(v) if increasing else -np.diff(v)
    allowed = nsigma * np.sqrt(s[1:] ** 2 + s[:-1] ** 2)
    return bool(np.all(step >= -allowed))


def _jsonable(x):
    if isinstance(x, np.ndarray):
        if np.iscomplexobj(x):
            return {"re": x.real.tolist(), "im": x.imag.tolist()}
        return x.tolist()
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    return x


def dump_jsonl(records, fh) -> None:
    """One JSON object per trajectory record."""
    for rec in records:
        fh.write(json.dumps({k: _jsonable(v) for k, v in rec.to_dict().items()}, sort_keys=True))
        fh.write("\n")


@dataclass
class TrajectoryRecord:
    """Per-step history and summary of one Monte-Carlo trajectory.

    ``times`` are seconds for estimation runs and measurement indices for
    preparation runs.  ``fidelities`` compare the estimate with the true state
    (estimation) or the true state with the target (preparation).
    """

    times: np.ndarray
    true_states: np.ndarray
    estimate_states: np.ndarray
    outcomes: np.ndarray
    reported_outcomes: np.ndarray
    collapse_flags: np.ndarray
    fidelities: np.ndarray
    mean_fidelity: float
    measurement_count: int
    summary: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {k: getattr(self, k) for k in (
            "times", "true_states", "estimate_states", "outcomes", "reported_outcomes",
            "collapse_flags", "fidelities", "mean_fidelity", "measurement_count")}
        d.update(self.summary)
        return d


def run_chunks(worker, tasks: list, jobs: int = 1) -> list:
    """Evaluate ``worker(*task)`` for each task, results in task order.

    ``jobs > 1`` uses a process pool; ordering and hence output are unchanged.
    """
    if jobs is None or jobs < 1:
        raise ValueError("jobs must be >= 1")
    if jobs == 1 or len(tasks) <= 1:
        return [worker(*t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(worker, *t) for t in tasks]
        return [f.result() for f in futures]


def chunk_ranges(n: int, size: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + size, n)) for lo in range(0, n, size)]
