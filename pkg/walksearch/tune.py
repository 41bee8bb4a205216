"""
Parameter tuning: s-scans maximising the peak probability, the theta
diagnostic and minimisation of the return amplitude A(t1)
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .evolve import MarkedSet, StopRule, WalkParams, return_amplitude, run_search
from .exceptions import ContractViolation, NoPeakError
from .lattice import LatticeConfig
from .peaks import PeakResult, detect_first_peak

logger = logging.getLogger(__name__)

S_RESOLUTION = 1e-4
REFINE_FACTOR = 10

# fixed (t1, s) pairs used for every finite-size scaling run
SCALING_PRESETS: Dict[int, float] = {
    2: 0.9539,
    3: 1.0 / math.sqrt(2.0),
    4: 0.5410,
}

__all__ = [
    "SCALING_PRESETS",
    "ReturnAmpScan",
    "ScanResult",
    "ScanSample",
    "detect_first_peak",
    "effective_queries",
    "scan_return_amplitude",
    "scan_s",
    "theta",
]


@dataclass(frozen=True)
class ScanSample:
    s: float
    P: float
    t2: int
    valid: bool
    theta: float


@dataclass(frozen=True)
class ScanResult:
    """All evaluated grid points (sorted by s) and the optimum"""

    t1: int
    samples: Tuple[ScanSample, ...]
    best_s: float
    best: PeakResult
    theta: float

    def rows(self) -> List[dict]:
        return [{"s": x.s, "P": x.P, "t2": x.t2, "theta": x.theta} for x in self.samples]


@dataclass(frozen=True)
class ReturnAmpScan:
    t1: int
    samples: Tuple[Tuple[float, float], ...]
    s_min: float
    A_min: float

    def rows(self) -> List[dict]:
        return [{"s": s, "A": a, "theta": theta(s, self.t1)} for s, a in self.samples]


def theta(s: float, t1: int) -> float:
    """Effective rotation sqrt(2) t1 asin(s) of W^t1"""
    if not 0.0 <= s <= 1.0:
        raise ContractViolation(f"mixing amplitude s must lie in [0, 1], got {s}")
    if t1 < 1:
        raise ContractViolation(f"t1 must be >= 1, got {t1}")
    return math.sqrt(2.0) * t1 * math.asin(s)


def effective_queries(P: float, t2: int) -> float:
    """Query cost t2 / sqrt(P) once amplitude amplification is accounted for"""
    if P <= 0:
        raise ContractViolation(f"peak probability must be positive, got {P}")
    return t2 / math.sqrt(P)


def grid(lo: float, hi: float, step: float) -> List[float]:
    """Closed grid lo, lo + step, ..., hi (hi always included)"""
    if step <= 0:
        raise ContractViolation(f"grid step must be positive, got {step}")
    if not 0.0 <= lo <= hi <= 1.0:
        raise ContractViolation(f"need 0 <= s_lo <= s_hi <= 1, got [{lo}, {hi}]")
    count = int(math.floor((hi - lo) / step + 1e-9))
    points = [round(lo + k * step, 12) for k in range(count + 1)]
    if hi - points[-1] > 1e-12:
        points.append(round(hi, 12))
    return points


def _refine(
    evaluate: Callable[[Sequence[float]], Dict[float, object]],
    score: Callable[[float, object], tuple],
    lo: float,
    hi: float,
    step: float,
    resolution: float,
) -> Dict[float, object]:
    """Coarse grid, then repeated 10x shrinking around the current best point"""
    results = dict(evaluate(grid(lo, hi, step)))
    while step > resolution and results:
        best_s = min(results, key=lambda s: score(s, results[s]))
        window_lo = max(lo, best_s - step)
        window_hi = min(hi, best_s + step)
        step /= REFINE_FACTOR
        todo = [s for s in grid(window_lo, window_hi, step) if s not in results]
        logger.debug("refining around s=%.6g with step %.1e (%d new points)", best_s, step, len(todo))
        results.update(evaluate(todo))
    return results


def _search_point(args: tuple) -> Tuple[float, PeakResult]:
    cfg, t1, marked, s, stop = args
    _, outcome = run_search(cfg, WalkParams(s=s, t1=t1), marked, stop)
    return s, outcome.peak


def scan_s(
    cfg: LatticeConfig,
    t1: int,
    marked: MarkedSet,
    s_lo: float,
    s_hi: float,
    coarse_step: float,
    max_queries: Optional[int] = None,
    resolution: float = S_RESOLUTION,
    workers: int = 1,
) -> ScanResult:
    """Maximise the first-cycle peak probability over s; ties go to smaller t2, then smaller s"""
    if t1 == 1:
        logger.warning("t1 = 1 has no tuning with theta close to pi")
    stop = StopRule(max_queries=max_queries)

    def evaluate(points: Sequence[float]) -> Dict[float, PeakResult]:
        jobs = [(cfg, t1, marked, s, stop) for s in points]
        if workers > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                done = list(pool.map(_search_point, jobs))
        else:
            done = [_search_point(job) for job in jobs]
        return dict(done)

    def score(s: float, peak: PeakResult) -> tuple:
        if not peak.valid:
            return (1, 0.0, 0, s)
        return (0, -peak.P, peak.t2, s)

    results = _refine(evaluate, score, s_lo, s_hi, coarse_step, resolution)
    best_s = min(results, key=lambda s: score(s, results[s]))
    best = results[best_s]
    if not best.valid:
        raise NoPeakError(f"no valid peak for s in [{s_lo}, {s_hi}] (d={cfg.d}, L={cfg.L}, t1={t1})")

    samples = tuple(
        ScanSample(s=s, P=p.P, t2=p.t2, valid=p.valid, theta=theta(s, t1))
        for s, p in sorted(results.items())
    )
    logger.info("best s=%.4f P=%.6g t2=%d", best_s, best.P, best.t2)
    return ScanResult(t1=t1, samples=samples, best_s=best_s, best=best, theta=theta(best_s, t1))


def scan_return_amplitude(
    cfg: LatticeConfig,
    t1: int,
    s_lo: float,
    s_hi: float,
    coarse_step: float,
    resolution: float = S_RESOLUTION,
) -> ReturnAmpScan:
    """Minimise A(t1) over s with the same grid refinement as scan_s"""

    def evaluate(points: Sequence[float]) -> Dict[float, float]:
        return {s: return_amplitude(cfg, WalkParams(s=s, t1=t1)) for s in points}

    def score(s: float, value: float) -> tuple:
        return (value, s)

    results = _refine(evaluate, score, s_lo, s_hi, coarse_step, resolution)
    s_min = min(results, key=lambda s: score(s, results[s]))
    samples = tuple(sorted((s, float(a)) for s, a in results.items()))
    return ReturnAmpScan(t1=t1, samples=samples, s_min=s_min, A_min=float(results[s_min]))


def rescaled_curve(result: ScanResult) -> np.ndarray:
    """(s, P(s) / P(s_best)) pairs over the valid samples"""
    rows = [(x.s, x.P / result.best.P) for x in result.samples if x.valid]
    return np.array(rows)
