"""Benchmark harness and statistics: run matrix with median-of-N timing,
reduction/spread percentages, one-sided Wilcoxon signed-rank test, Spearman
rank correlation, and best-configuration rankings.

CSV output schema (header mandatory, '.' decimal separator, UTF-8):
formula_id,config_id,status,median_seconds,run1,...,runN,sat_calls,backbone_size
"""

from __future__ import annotations

import csv
import math
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence, TextIO

from .algorithms import AlgorithmConfig, BackboneTimeoutError, compute_backbone
from .cnf import parse_dimacs

STATUS_OK = "OK"
STATUS_TIMEOUT = "TIMEOUT"
STATUS_ERROR = "ERROR"


@dataclass(frozen=True)
class RunRecord:
    """One (formula, config) measurement: per-run times and their median."""

    formula_id: str
    config_id: str
    status: str
    median_time: float | None
    times: tuple[float, ...]
    sat_calls: int | None
    backbone_size: int | None


@dataclass(frozen=True)
class StatsSummary:
    """Wilcoxon test outcome. Effect size bands: small < 0.3, medium 0.3-0.5,
    large > 0.5."""

    p_value: float
    effect_r: float
    n_effective: int


class BackboneMismatchError(RuntimeError):
    """Two configurations returned different backbones for the same formula:
    the correctness tripwire of every matrix run."""


def percent_reduction(t_base: float, t_new: float) -> float:
    """(t_base - t_new) / t_base * 100; negative when t_new is slower."""
    if t_base <= 0:
        raise ValueError("percent reduction undefined for non-positive base time")
    return (t_base - t_new) / t_base * 100


def spread_percent(t_best: float, t_worst: float) -> float:
    """Percentage difference between best and worst times, relative to their mean."""
    if t_best > t_worst:
        raise ValueError("t_best must not exceed t_worst")
    if t_best + t_worst <= 0:
        raise ValueError("spread undefined when both times are zero")
    return (t_worst - t_best) / ((t_worst + t_best) / 2) * 100


def _average_ranks(values: Sequence[float]) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        rank = (i + j) / 2 + 1  # average of 1-based positions i..j
        for k in range(i, j + 1):
            ranks[order[k]] = rank
        i = j + 1
    return ranks


def _normal_cdf(z: float) -> float:
    return 0.5 * (1 + math.erf(z / math.sqrt(2)))


def wilcoxon_signed_rank(pairs: Sequence[tuple[float, float]]) -> StatsSummary:
    """One-sided Wilcoxon signed-rank test that the second elements are
    smaller than the first.

    Zero differences are dropped; absolute differences are ranked with
    average ranks on ties; p is the upper tail of the positive-rank sum under
    the normal approximation with continuity correction and tie-corrected
    variance; effect_r = |z| / sqrt(n_effective).
    """
    if not pairs:
        raise ValueError("wilcoxon requires at least one pair")
    diffs = [a - b for a, b in pairs if a != b]
    n = len(diffs)
    if n == 0:
        return StatsSummary(p_value=1.0, effect_r=0.0, n_effective=0)

    ranks = _average_ranks([abs(d) for d in diffs])
    w_plus = sum(r for r, d in zip(ranks, diffs) if d > 0)

    mean = n * (n + 1) / 4
    variance = n * (n + 1) * (2 * n + 1) / 24
    counts: dict[float, int] = {}
    for d in diffs:
        counts[abs(d)] = counts.get(abs(d), 0) + 1
    variance -= sum(t ** 3 - t for t in counts.values()) / 48
    if variance <= 0:
        return StatsSummary(p_value=1.0, effect_r=0.0, n_effective=n)

    sigma = math.sqrt(variance)
    z = (w_plus - mean - 0.5) / sigma
    p_value = min(1.0, max(0.0, 1 - _normal_cdf(z)))
    effect_r = abs((w_plus - mean) / sigma) / math.sqrt(n)
    return StatsSummary(p_value=p_value, effect_r=effect_r, n_effective=n)


def spearman_rho(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Pearson correlation of the rank vectors, with average ranks on ties."""
    if len(xs) != len(ys) or len(xs) < 2:
        raise ValueError("spearman needs two equally long samples of size >= 2")
    if len(set(xs)) == 1 or len(set(ys)) == 1:
        raise ValueError("spearman undefined for a constant sample")
    rx = _average_ranks(xs)
    ry = _average_ranks(ys)
    mean_x = sum(rx) / len(rx)
    mean_y = sum(ry) / len(ry)
    cov = sum((a - mean_x) * (b - mean_y) for a, b in zip(rx, ry))
    var_x = sum((a - mean_x) ** 2 for a in rx)
    var_y = sum((b - mean_y) ** 2 for b in ry)
    return cov / math.sqrt(var_x * var_y)


def load_corpus(source: str | Path) -> list[Path]:
    """Corpus from a directory (scanned for ``*.cnf``) or a manifest file of
    newline-separated paths."""
    path = Path(source)
    if path.is_dir():
        return sorted(path.glob("*.cnf"))
    lines = path.read_text(encoding="utf-8").splitlines()
    return [Path(line.strip()) for line in lines if line.strip()]


def _measure_cell(path: Path, config: AlgorithmConfig, repeats: int,
                  timeout: float | None) -> tuple[str, float | None, tuple[float, ...],
                                                  int | None, frozenset | None]:
    """Time one (formula, config) cell. Parsing is excluded from the timings."""
    formula = parse_dimacs(path.read_text(encoding="utf-8")).formula
    times = []
    report = None
    for _ in range(repeats):
        started = time.perf_counter()
        try:
            report = compute_backbone(formula, config, timeout=timeout)
        except BackboneTimeoutError:
            return STATUS_TIMEOUT, None, tuple(times), None, None
        times.append(time.perf_counter() - started)
    assert report is not None
    backbone = frozenset(report.backbone)
    return STATUS_OK, statistics.median(times), tuple(times), report.sat_calls, backbone


def _run_cell(args) -> tuple[str, str, str, float | None, tuple[float, ...],
                             int | None, int | None, frozenset | None]:
    formula_id, path, config_id, config, repeats, timeout = args
    try:
        status, median, times, calls, backbone = _measure_cell(path, config, repeats, timeout)
    except Exception:
        return formula_id, config_id, STATUS_ERROR, None, (), None, None, None
    size = len(backbone) if backbone is not None else None
    return formula_id, config_id, status, median, times, calls, size, backbone


def run_matrix(corpus: Sequence[str | Path],
               configs: Sequence[tuple[str, AlgorithmConfig]],
               repeats: int = 3,
               timeout: float | None = None,
               parallel: int = 1) -> list[RunRecord]:
    """Run every configuration against every corpus formula.

    Each cell is timed ``repeats`` times and reported with its median.
    Unreadable corpus files yield ERROR records and the run continues. OK
    backbones are cross-checked for equality across configurations per
    formula; a mismatch raises :class:`BackboneMismatchError`. With
    ``parallel`` > 1 cells run in worker processes (one solver session per
    cell either way); use the default sequential mode for low-noise timing.
    """
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    cells = [
        (Path(path).name, Path(path), config_id, config, repeats, timeout)
        for path in corpus
        for config_id, config in configs
    ]
    if parallel > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            raw = list(pool.map(_run_cell, cells))
    else:
        raw = [_run_cell(cell) for cell in cells]

    records = []
    backbones: dict[str, tuple[str, frozenset]] = {}
    for formula_id, config_id, status, median, times, calls, size, backbone in raw:
        records.append(RunRecord(
            formula_id=formula_id, config_id=config_id, status=status,
            median_time=median, times=times, sat_calls=calls, backbone_size=size,
        ))
        if status != STATUS_OK:
            continue
        seen = backbones.get(formula_id)
        if seen is None:
            backbones[formula_id] = (config_id, backbone)
        elif seen[1] != backbone:
            raise BackboneMismatchError(
                f"{formula_id}: configs {seen[0]} and {config_id} disagree on the backbone"
            )
    return records


def write_records_csv(records: Iterable[RunRecord], out: TextIO, repeats: int = 3) -> None:
    writer = csv.writer(out)
    writer.writerow(
        ["formula_id", "config_id", "status", "median_seconds"]
        + [f"run{i + 1}" for i in range(repeats)]
        + ["sat_calls", "backbone_size"]
    )
    for record in records:
        runs = [f"{t:.9f}" for t in record.times]
        runs += [""] * (repeats - len(runs))
        writer.writerow([
            record.formula_id,
            record.config_id,
            record.status,
            "" if record.median_time is None else f"{record.median_time:.9f}",
            *runs[:repeats],
            "" if record.sat_calls is None else record.sat_calls,
            "" if record.backbone_size is None else record.backbone_size,
        ])


def best_config_ranking(records: Sequence[RunRecord]) -> list[tuple[str, float]]:
    """Per-config percentage of formulas where it had the shortest median time.

    Only formulas with at least one OK record count; ties award every tied
    configuration. Sorted by win percentage descending, then by id.
    """
    by_formula: dict[str, list[RunRecord]] = {}
    all_configs: set[str] = set()
    for record in records:
        all_configs.add(record.config_id)
        if record.status == STATUS_OK and record.median_time is not None:
            by_formula.setdefault(record.formula_id, []).append(record)

    wins: dict[str, int] = {config: 0 for config in all_configs}
    counted = 0
    for cells in by_formula.values():
        counted += 1
        best = min(cell.median_time for cell in cells)
        for cell in cells:
            if cell.median_time == best:
                wins[cell.config_id] += 1
    if counted == 0:
        return sorted((config, 0.0) for config in all_configs)
    ranking = [(config, 100.0 * n / counted) for config, n in wins.items()]
    ranking.sort(key=lambda item: (-item[1], item[0]))
    return ranking
