"""
First-cycle peak detection on marked-probability series
"""

from dataclasses import dataclass
from typing import Iterable, Optional, Protocol, Sequence, Union

import numpy as np

DROP_FRACTION = 0.5
MIN_LAG = 10
MIN_POINTS = 3


class SearchTraceLike(Protocol):
    t2: Sequence[int]
    prob: Sequence[float]


@dataclass(frozen=True)
class PeakResult:
    """Peak probability P reached after t2 queries; valid only once the peak is confirmed"""

    P: float
    t2: int
    valid: bool

    @classmethod
    def invalid(cls) -> "PeakResult":
        return cls(P=0.0, t2=0, valid=False)


class PeakTracker:
    """Streaming first-peak detector fed one (t2, probability) record at a time

    The running maximum only moves on a strict increase and is frozen once the
    probability falls below drop_fraction of it. The peak is confirmed when the
    maximum is frozen and at least min_lag queries have passed since it.
    """

    def __init__(self, drop_fraction: float = DROP_FRACTION, min_lag: int = MIN_LAG):
        self.drop_fraction = drop_fraction
        self.min_lag = min_lag
        self.best = -1.0
        self.best_t2 = 0
        self.count = 0
        self.dropped = False
        self.confirmed = False

    def update(self, t2: int, prob: float) -> bool:
        """Feed one record; returns True once the peak is confirmed"""
        self.count += 1
        if self.confirmed:
            return True
        if not self.dropped:
            if prob > self.best:
                self.best = prob
                self.best_t2 = t2
            elif prob < self.drop_fraction * self.best:
                self.dropped = True
        if self.dropped and t2 - self.best_t2 >= self.min_lag:
            self.confirmed = True
        return self.confirmed

    def result(self) -> PeakResult:
        if self.count < MIN_POINTS or self.best < 0:
            return PeakResult.invalid()
        return PeakResult(P=float(self.best), t2=int(self.best_t2), valid=self.confirmed)


def detect_first_peak(
    trace: Union[SearchTraceLike, Sequence[float], np.ndarray],
    t2: Optional[Iterable[int]] = None,
) -> PeakResult:
    """Peak of a trace object (with .t2/.prob) or of a bare probability series

    A bare series is indexed from query 1 unless explicit query numbers are given.
    """
    if hasattr(trace, "prob"):
        probs = np.asarray(trace.prob, dtype=float)
        queries = np.asarray(trace.t2, dtype=int)
    else:
        probs = np.asarray(trace, dtype=float)
        queries = (
            np.arange(1, len(probs) + 1) if t2 is None else np.asarray(list(t2), dtype=int)
        )
    if len(probs) != len(queries):
        raise ValueError("query numbers and probabilities differ in length")

    tracker = PeakTracker()
    for query, prob in zip(queries, probs):
        if tracker.update(int(query), float(prob)):
            break
    return tracker.result()

