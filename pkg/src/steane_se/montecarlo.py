"""Sampling harness: physical-rate and cycle-count sweeps with Wilson
intervals and a fixed CSV schema.

Shots are partitioned into fixed-size chunks (see `noise.CHUNK`) and run by
a thread pool; chunk outcomes are integer counts summed commutatively, so a
sweep's output is byte-identical for any worker count.  Each sweep point
derives its own RNG seed from the sweep seed and the point index, and every
CSV row records the seed and the per-extraction-cycle counting convention.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from statistics import NormalDist
from typing import Callable, Iterable, Sequence

import numpy as np

from .noise import CHUNK, NoiseParams
from .protocol import ChunkCounts, simulate_chunk
from .reference import ReferencePair

#: Desk-scale cap on shots per sweep point; raise via the `shot_cap`
#: argument (or the CLI flag) for full-scale runs.
DEFAULT_SHOT_CAP = 1_000_000

#: Default physical-rate grid: log-spaced over two decades.
DEFAULT_P_GRID = tuple(float(p) for p in np.geomspace(1e-4, 1e-2, 9))

#: Default cycle-count grid for the fixed-noise sweep.
DEFAULT_CYCLE_GRID = (1, 2, 3, 4, 6, 8, 12, 16)

CSV_HEADER = "p_phys,n_cycles,shots,failures,fail_z,fail_x,p_l,wilson_lo,wilson_hi,seed,convention"


def wilson_interval(
    failures: int, shots: int, confidence: float = 0.95
) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    if not 0 <= failures <= shots:
        raise ValueError("failures must lie in [0, shots]")
    z = NormalDist().inv_cdf(0.5 + confidence / 2.0)
    n = shots
    p = failures / n
    denom = 1.0 + z * z / n
    center = (p + z * z / (2 * n)) / denom
    half = (z / denom) * math.sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n))
    return max(0.0, center - half), min(1.0, center + half)


@dataclass(frozen=True)
class SweepPoint:
    """One sweep point; the fields mirror the CSV columns one to one."""

    p_phys: float
    n_cycles: int
    shots: int
    failures: int
    fail_z: int
    fail_x: int
    p_l: float
    wilson_lo: float
    wilson_hi: float
    seed: int
    convention: str

    @property
    def p_l_over_p_phys_sq(self) -> float:
        """The quadratic-suppression figure of merit."""
        return self.p_l / (self.p_phys * self.p_phys)

    @property
    def p_l_per_cycle(self) -> float:
        return self.p_l / self.n_cycles

    def csv_row(self) -> str:
        return ",".join(
            (
                repr(float(self.p_phys)),
                str(self.n_cycles),
                str(self.shots),
                str(self.failures),
                str(self.fail_z),
                str(self.fail_x),
                repr(float(self.p_l)),
                repr(float(self.wilson_lo)),
                repr(float(self.wilson_hi)),
                str(self.seed),
                self.convention,
            )
        )


@dataclass(frozen=True)
class SweepResult:
    points: tuple[SweepPoint, ...]

    def to_csv(self) -> str:
        return "\n".join([CSV_HEADER, *(p.csv_row() for p in self.points)]) + "\n"


def default_shot_rule(p_phys: float, cap: int = DEFAULT_SHOT_CAP) -> int:
    """20000 / p_phys shots, capped; a fixed small batch when p_phys = 0
    (nothing can fail there, but the point stays plottable)."""
    if p_phys <= 0.0:
        return 10_000
    return min(math.ceil(20_000.0 / p_phys), cap)


def _point_seed(seed: int, index: int) -> int:
    # Distinct, stable per-point streams regardless of list composition order.
    return (seed * 0x9E3779B97F4A7C15 + index * 0xBF58476D1CE4E5B9 + 1) & (2**63 - 1)


def _run_point(
    noise: NoiseParams,
    n_cycles: int,
    shots: int,
    seed: int,
    basis_order: str,
    use_remap: bool,
    pair: ReferencePair | None,
    threads: int | None,
) -> ChunkCounts:
    jobs = [
        (chunk, min(CHUNK, shots - chunk * CHUNK))
        for chunk in range(math.ceil(shots / CHUNK))
    ]

    def work(job: tuple[int, int]) -> ChunkCounts:
        chunk, n = job
        return simulate_chunk(
            chunk,
            n,
            n_cycles,
            noise,
            seed,
            basis_order=basis_order,
            use_remap=use_remap,
            pair=pair,
        )

    if threads is not None and threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, jobs))
    else:
        results = [work(j) for j in jobs]
    total = ChunkCounts()
    for r in results:
        total = total + r
    return total


def _convention(basis_order: str) -> str:
    return f"per-extraction-cycle;basis_order={basis_order.upper()}"


def simulate_point(
    noise: NoiseParams,
    n_cycles: int,
    shots: int,
    seed: int,
    *,
    basis_order: str = "ZX",
    use_remap: bool = True,
    pair: ReferencePair | None = None,
    threads: int | None = None,
) -> SweepPoint:
    """One fully specified configuration; the point's p_phys column records
    the two-qubit depolarizing rate."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    if n_cycles < 1:
        raise ValueError("n_cycles must be >= 1")
    counts = _run_point(
        noise, n_cycles, shots, seed, basis_order, use_remap, pair, threads
    )
    return _to_point(noise.p2, n_cycles, counts, seed, basis_order)


def sweep_physical_rate(
    p_list: Sequence[float],
    cycles: int = 2,
    shot_rule: Callable[[float], int] | int | None = None,
    *,
    seed: int = 0,
    basis_order: str = "ZX",
    use_remap: bool = True,
    pair: ReferencePair | None = None,
    threads: int | None = None,
    shot_cap: int = DEFAULT_SHOT_CAP,
) -> SweepResult:
    """Logical error rate vs physical rate, with p2 = p_spam = p_phys and
    p_mem = p_phys / 10 at every point."""
    if not p_list:
        raise ValueError("p_list must be nonempty")
    for p in p_list:
        if not 0.0 <= p < 0.5:
            raise ValueError(f"p_phys = {p} outside [0, 0.5)")
    points = []
    for i, p in enumerate(p_list):
        if isinstance(shot_rule, int):
            shots = shot_rule
        elif shot_rule is not None:
            shots = shot_rule(p)
        else:
            shots = default_shot_rule(p, cap=shot_cap)
        point_seed = _point_seed(seed, i)
        counts = _run_point(
            NoiseParams.from_p_phys(p),
            cycles,
            shots,
            point_seed,
            basis_order,
            use_remap,
            pair,
            threads,
        )
        points.append(_to_point(p, cycles, counts, point_seed, basis_order))
    return SweepResult(tuple(points))


def sweep_cycles(
    n_list: Sequence[int],
    fixed_noise: NoiseParams = NoiseParams(p2=1e-3, p_spam=1e-3, p_mem=1e-4),
    shots: int = 200_000,
    *,
    seed: int = 0,
    basis_order: str = "ZX",
    use_remap: bool = True,
    pair: ReferencePair | None = None,
    threads: int | None = None,
) -> SweepResult:
    """Logical error rate vs cycle count at fixed noise; the CSV's p_phys
    column records the two-qubit rate p2."""
    if list(n_list) != sorted(n_list) or not n_list:
        raise ValueError("n_list must be nonempty and ascending")
    if any(n < 1 for n in n_list):
        raise ValueError("cycle counts must be >= 1")
    points = [
        simulate_point(
            fixed_noise,
            n_cycles,
            shots,
            _point_seed(seed, i),
            basis_order=basis_order,
            use_remap=use_remap,
            pair=pair,
            threads=threads,
        )
        for i, n_cycles in enumerate(n_list)
    ]
    return SweepResult(tuple(points))


def _to_point(
    p_phys: float,
    n_cycles: int,
    counts: ChunkCounts,
    seed: int,
    basis_order: str,
) -> SweepPoint:
    lo, hi = wilson_interval(counts.failures, counts.shots)
    return SweepPoint(
        p_phys=p_phys,
        n_cycles=n_cycles,
        shots=counts.shots,
        failures=counts.failures,
        fail_z=counts.fail_z,
        fail_x=counts.fail_x,
        p_l=counts.failures / counts.shots,
        wilson_lo=lo,
        wilson_hi=hi,
        seed=seed,
        convention=_convention(basis_order),
    )


def fit_loglog_slope(points: Iterable[SweepPoint]) -> float:
    """Least-squares slope of log p_l against log p_phys over the points
    with at least one failure (needs >= 2 such points)."""
    xs, ys = [], []
    for pt in points:
        if pt.failures > 0 and pt.p_phys > 0:
            xs.append(math.log(pt.p_phys))
            ys.append(math.log(pt.p_l))
    if len(xs) < 2:
        raise ValueError("need >= 2 points with failures to fit a slope")
    slope, _ = np.polyfit(np.asarray(xs), np.asarray(ys), 1)
    return float(slope)
