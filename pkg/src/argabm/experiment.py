"""Batch harness: grid expansion, seeded repetitions, aggregation, export and
cell-to-cell comparisons."""

from __future__ import annotations

import csv
import itertools
import json
import math
import os
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, NamedTuple, Optional, Sequence, Union

from scipy import stats

from .engine import RunResult, SimulationConfig, run_simulation
from .social import HETEROGENEOUS, HOMOGENEOUS

RELIABLE = "reliable"
BIASED = "biased"

GRID_AGENT_COUNTS = (10, 20, 30, 40, 70, 100)
GRID_SHARE_PROBABILITIES = (0.0, 0.3, 0.5, 1.0)
GRID_THEORY_COUNTS = (2, 3)

CSV_COLUMNS = (
    "num_agents",
    "num_theories",
    "share_probability",
    "composition",
    "reliability",
    "repetitions",
    "success_rate",
    "mean_rounds",
    "median_rounds",
    "std_rounds",
    "cap_hits",
)

MASK64 = (1 << 64) - 1


class SweepError(RuntimeError):
    def __init__(self, failures: dict, table: list):
        self.failures = failures
        self.table = table
        lines = [f"{cell}: {msg}" for cell, msg in failures.items()]
        super().__init__(f"{len(failures)} cell(s) failed:\n" + "\n".join(lines))


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def derive_seed(base_seed: int, cell_index: int, repetition: int) -> int:
    """64-bit run seed. ``cell << 32 | repetition`` is offset by a hash of the
    base seed and pushed through the splitmix64 finaliser, which is a
    bijection, so distinct (cell, repetition) pairs below 2**32 never collide
    for a fixed base seed."""
    if not (0 <= cell_index < 1 << 32 and 0 <= repetition < 1 << 32):
        raise ValueError("cell_index and repetition must fit in 32 bits")
    packed = (cell_index << 32) | repetition
    return _splitmix64((_splitmix64(base_seed & MASK64) + packed) & MASK64)


class Cell(NamedTuple):
    num_agents: int
    num_theories: int
    share_probability: float
    composition: str
    reliability: str

    def config(self, template: SimulationConfig, seed: int) -> SimulationConfig:
        return template.with_(
            num_agents=self.num_agents,
            composition=self.composition,
            biased=self.reliability == BIASED,
            seed=seed,
            **{
                "landscape.num_theories": self.num_theories,
                "sharing.share_probability": self.share_probability,
            },
        )


@dataclass(frozen=True)
class SweepSpec:
    agent_counts: tuple = GRID_AGENT_COUNTS
    share_probabilities: tuple = GRID_SHARE_PROBABILITIES
    compositions: tuple = (HOMOGENEOUS, HETEROGENEOUS)
    reliabilities: tuple = (RELIABLE, BIASED)
    theory_counts: tuple = GRID_THEORY_COUNTS
    repetitions: int = 100
    base_seed: int = 0
    # everything not swept over comes from here
    template: SimulationConfig = field(default_factory=SimulationConfig)

    def validate(self) -> None:
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        for f in ("agent_counts", "share_probabilities", "compositions", "reliabilities", "theory_counts"):
            if not getattr(self, f):
                raise ValueError(f"{f} must be nonempty")
        for c in self.compositions:
            if c not in (HOMOGENEOUS, HETEROGENEOUS):
                raise ValueError(f"unknown composition {c!r}")
        for r in self.reliabilities:
            if r not in (RELIABLE, BIASED):
                raise ValueError(f"unknown reliability {r!r}")
        for p in self.share_probabilities:
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"share probability {p} outside [0, 1]")

    def cells(self) -> list[Cell]:
        """Grid cells; a cell's position in this list is its seed index."""
        return [
            Cell(n, m, p, c, r)
            for m, n, p, c, r in itertools.product(
                self.theory_counts,
                self.agent_counts,
                self.share_probabilities,
                self.compositions,
                self.reliabilities,
            )
        ]


def full_grid(repetitions: int = 100, base_seed: int = 0, **overrides) -> SweepSpec:
    return SweepSpec(repetitions=repetitions, base_seed=base_seed, **overrides)


@dataclass(frozen=True)
class CellSummary:
    num_agents: int
    num_theories: int
    share_probability: float
    composition: str
    reliability: str
    repetitions: int
    success_rate: float
    mean_rounds: float
    median_rounds: float
    std_rounds: float
    cap_hits: int
    # raw per-run outcomes; not exported
    rounds: tuple = field(default=(), compare=False, repr=False)
    successes: tuple = field(default=(), compare=False, repr=False)

    @property
    def cell(self) -> Cell:
        return Cell(self.num_agents, self.num_theories, self.share_probability, self.composition, self.reliability)

    def row(self) -> dict:
        return {name: getattr(self, name) for name in CSV_COLUMNS}


def summarize(cell: Cell, results: Sequence[RunResult]) -> CellSummary:
    rounds = [r.rounds for r in results]
    successes = [r.success for r in results]
    n = len(results)
    return CellSummary(
        *cell[:2],
        round(cell.share_probability, 2),
        *cell[3:],
        repetitions=n,
        success_rate=round(sum(successes) / n, 3),
        mean_rounds=round(statistics.fmean(rounds), 3),
        median_rounds=round(float(statistics.median(rounds)), 3),
        std_rounds=round(statistics.stdev(rounds), 3) if n > 1 else 0.0,
        cap_hits=sum(r.terminated_by_cap for r in results),
        rounds=tuple(rounds),
        successes=tuple(successes),
    )


def _run_job(job):
    cell_index, rep, config = job
    try:
        return cell_index, rep, run_simulation(config), None
    except Exception as exc:  # reported per cell by run_sweep
        return cell_index, rep, None, f"{type(exc).__name__}: {exc}"


def default_parallelism() -> int:
    return int(os.environ.get("ARGABM_PARALLELISM", "1"))


def run_sweep(
    spec: SweepSpec,
    parallelism: Optional[int] = None,
    progress: Optional[Callable[[int, int], None]] = None,
) -> list[CellSummary]:
    """Run every cell ``spec.repetitions`` times and aggregate.

    Results are folded by (cell, repetition) index, so the table does not
    depend on ``parallelism`` or completion order. Cells with a failing run
    are dropped from the table and reported through :class:`SweepError`.
    """
    spec.validate()
    cells = spec.cells()
    jobs = [
        (ci, rep, cell.config(spec.template, derive_seed(spec.base_seed, ci, rep)))
        for ci, cell in enumerate(cells)
        for rep in range(spec.repetitions)
    ]
    results: dict[int, dict[int, RunResult]] = {ci: {} for ci in range(len(cells))}
    failures: dict[Cell, str] = {}
    workers = parallelism if parallelism is not None else default_parallelism()

    def collect(outcomes: Iterable):
        for done, (ci, rep, res, err) in enumerate(outcomes, 1):
            if err is not None:
                failures.setdefault(cells[ci], f"repetition {rep}: {err}")
            else:
                results[ci][rep] = res
            if progress is not None:
                progress(done, len(jobs))

    if workers <= 1:
        collect(map(_run_job, jobs))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            collect(pool.map(_run_job, jobs, chunksize=max(1, len(jobs) // (workers * 8))))

    table = [
        summarize(cell, [results[ci][rep] for rep in range(spec.repetitions)])
        for ci, cell in enumerate(cells)
        if cell not in failures
    ]
    if failures:
        raise SweepError(failures, table)
    return table


def _format(name: str, value) -> str:
    if name == "share_probability":
        return f"{value:.2f}"
    if name in ("success_rate", "mean_rounds", "median_rounds", "std_rounds"):
        return f"{value:.3f}"
    return str(value)


def export_results(table: Sequence[CellSummary], path: Union[str, Path], fmt: Optional[str] = None) -> Path:
    """Write ``table`` as CSV or JSON (inferred from the suffix by default)."""
    if not table:
        raise ValueError("refusing to export an empty table")
    path = Path(path)
    fmt = fmt or ("json" if path.suffix.lower() == ".json" else "csv")
    if fmt == "csv":
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_COLUMNS)
            for s in table:
                writer.writerow([_format(name, getattr(s, name)) for name in CSV_COLUMNS])
    elif fmt == "json":
        rows = [s.row() for s in table]
        path.write_text(json.dumps(rows, indent=2) + "\n")
    else:
        raise ValueError(f"unknown export format {fmt!r}")
    return path


_CASTS = {
    "num_agents": int,
    "num_theories": int,
    "repetitions": int,
    "cap_hits": int,
    "composition": str,
    "reliability": str,
}


def read_results(path: Union[str, Path]) -> list[CellSummary]:
    path = Path(path)
    if path.suffix.lower() == ".json":
        rows = json.loads(path.read_text())
    else:
        with path.open(newline="") as fh:
            rows = list(csv.DictReader(fh))
    return [
        CellSummary(**{k: _CASTS.get(k, float)(row[k]) for k in CSV_COLUMNS})
        for row in rows
    ]


class Comparison(NamedTuple):
    metric: str
    difference: float
    statistic: float
    p_value: float

    @property
    def direction(self) -> int:
        return (self.difference > 0) - (self.difference < 0)


def two_proportion_ztest(k1: int, n1: int, k2: int, n2: int, alternative: str = "two-sided") -> tuple[float, float]:
    """Pooled two-proportion z statistic and p-value. Identical pooled rates
    of 0 or 1 give ``(0, 1)``."""
    pooled = (k1 + k2) / (n1 + n2)
    se = math.sqrt(pooled * (1 - pooled) * (1 / n1 + 1 / n2))
    if se == 0:
        return 0.0, 1.0
    z = (k1 / n1 - k2 / n2) / se
    if alternative == "two-sided":
        p = 2 * stats.norm.sf(abs(z))
    elif alternative == "greater":
        p = stats.norm.sf(z)
    elif alternative == "less":
        p = stats.norm.cdf(z)
    else:
        raise ValueError(f"unknown alternative {alternative!r}")
    return z, float(p)


def _lookup(table: Sequence[CellSummary], cell) -> CellSummary:
    if isinstance(cell, CellSummary):
        return cell
    key = Cell(*cell)
    for s in table:
        if s.cell == key:
            return s
    raise KeyError(f"cell {key} not in table")


def compare_cells(
    table: Sequence[CellSummary],
    cell_a,
    cell_b,
    metric: str = "success_rate",
    alternative: str = "two-sided",
) -> Comparison:
    """Difference ``a - b`` on a metric with its test: two-proportion z-test
    for ``success_rate``, Mann-Whitney rank-sum for ``rounds``."""
    a, b = _lookup(table, cell_a), _lookup(table, cell_b)
    if a.repetitions != b.repetitions:
        raise ValueError(f"repetitions differ: {a.repetitions} vs {b.repetitions}")
    if metric == "success_rate":
        ka = round(a.success_rate * a.repetitions)
        kb = round(b.success_rate * b.repetitions)
        z, p = two_proportion_ztest(ka, a.repetitions, kb, b.repetitions, alternative)
        return Comparison(metric, a.success_rate - b.success_rate, z, p)
    if metric in ("rounds", "mean_rounds"):
        if not a.rounds or not b.rounds:
            raise ValueError("rank-sum comparison needs raw per-run rounds")
        if set(a.rounds) == set(b.rounds) and len(set(a.rounds)) == 1:
            return Comparison("rounds", 0.0, 0.0, 1.0)
        res = stats.mannwhitneyu(a.rounds, b.rounds, alternative=alternative)
        diff = statistics.fmean(a.rounds) - statistics.fmean(b.rounds)
        return Comparison("rounds", diff, float(res.statistic), float(res.pvalue))
    raise ValueError(f"unknown metric {metric!r}")
