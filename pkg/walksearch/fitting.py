"""
Least-squares scaling analysis

Finite-size fits in 1/L, dimension fits of the asymptotic coefficients,
fixed-side fits in 1/d, and a sinusoid fit for single traces.
"""

import logging
import math
from dataclasses import dataclass, field
from itertools import groupby
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .exceptions import FitError
from .reference import GROVER_CONSTANT

logger = logging.getLogger(__name__)

MIN_FIT_SIDE = 6
MAX_FIT_DIMENSION = 7
DIMENSION_RANGE = tuple(range(3, 9))


@dataclass(frozen=True)
class ScalingSample:
    """One search result; the derived columns are always computed from the primaries"""

    d: int
    L: int
    s: float
    t1: int
    P: float
    t2: int

    @property
    def N(self) -> int:
        return self.L**self.d

    @property
    def t2_over_sqrt_N(self) -> float:
        return self.t2 / math.sqrt(self.N)

    @property
    def t2_over_sqrt_NP(self) -> float:
        return self.t2 / math.sqrt(self.N * self.P)

    @classmethod
    def from_row(cls, row: Mapping[str, object]) -> "ScalingSample":
        return cls(
            d=int(row["d"]),
            L=int(row["L"]),
            s=float(row["s"]),
            t1=int(row["t1"]),
            P=float(row["P"]),
            t2=int(row["t2"]),
        )

    def as_row(self) -> dict:
        return {"d": self.d, "L": self.L, "s": self.s, "t1": self.t1, "P": self.P, "t2": self.t2}


@dataclass(frozen=True)
class FitResult:
    """y = intercept + slope * x with the r.m.s. residual over the n fitted points"""

    intercept: float
    slope: float
    rms: float
    model: str
    n: int
    labels: Dict[str, object] = field(default_factory=dict)

    def predict(self, x: float) -> float:
        return self.intercept + self.slope * x

    def as_row(self) -> dict:
        row = dict(self.labels)
        row.update(
            {
                "model": self.model,
                "intercept": self.intercept,
                "slope": self.slope,
                "rms": self.rms,
                "n": self.n,
            }
        )
        return row


def fit_linear(
    xs: Sequence[float], ys: Sequence[float], model: str = "linear", **labels: object
) -> FitResult:
    """Ordinary least squares for y = a + b x"""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise FitError("xs and ys must be 1-d sequences of equal length")
    if len(x) < 2 or np.ptp(x) == 0:
        raise FitError("need at least two distinct x values")

    design = np.column_stack([np.ones_like(x), x])
    (a, b), *_ = np.linalg.lstsq(design, y, rcond=None)
    residual = y - (a + b * x)
    rms = float(np.sqrt(np.mean(residual**2)))
    return FitResult(float(a), float(b), rms, model, len(x), dict(labels))


def select(
    samples: Iterable[ScalingSample],
    d: Optional[int] = None,
    t1: Optional[int] = None,
    s: Optional[float] = None,
    L: Optional[int] = None,
    s_tol: float = 1e-6,
) -> List[ScalingSample]:
    return [
        x
        for x in samples
        if (d is None or x.d == d)
        and (t1 is None or x.t1 == t1)
        and (s is None or abs(x.s - s) <= s_tol)
        and (L is None or x.L == L)
    ]


def _side_fit_points(samples: Iterable[ScalingSample], d: int) -> List[ScalingSample]:
    if d > MAX_FIT_DIMENSION:
        raise FitError(f"not enough lattice sizes in d={d} for a 1/L fit")
    points = sorted((x for x in samples if x.L >= MIN_FIT_SIDE), key=lambda x: x.L)
    if len({x.L for x in points}) < 2:
        raise FitError(f"need at least two lattice sizes (L >= {MIN_FIT_SIDE}) for d={d}")
    return points


def fit_P_vs_L(
    samples: Iterable[ScalingSample], d: int, t1: int, s: Optional[float] = None
) -> FitResult:
    """P = a1 + b1 / L"""
    points = _side_fit_points(select(samples, d=d, t1=t1, s=s), d)
    return fit_linear(
        [1.0 / x.L for x in points], [x.P for x in points], "inverse-L", quantity="P", d=d, t1=t1
    )


def fit_t2_vs_L(
    samples: Iterable[ScalingSample], d: int, t1: int, s: Optional[float] = None
) -> FitResult:
    """t2 / sqrt(N) = a2 + b2 / L"""
    points = _side_fit_points(select(samples, d=d, t1=t1, s=s), d)
    return fit_linear(
        [1.0 / x.L for x in points],
        [x.t2_over_sqrt_N for x in points],
        "inverse-L",
        quantity="t2/sqrt(N)",
        d=d,
        t1=t1,
    )


def fit_dimension_scaling(
    values_by_d: Mapping[int, float],
    dims: Sequence[int] = DIMENSION_RANGE,
    quantity: str = "a",
    **labels: object,
) -> FitResult:
    """log2(a) = c + slope * d over the requested dimensions"""
    chosen = sorted(d for d in values_by_d if d in dims)
    if any(values_by_d[d] <= 0 for d in chosen):
        raise FitError("log2 fit needs positive coefficients")
    return fit_linear(
        chosen,
        [math.log2(values_by_d[d]) for d in chosen],
        "log2-d",
        quantity=quantity,
        **labels,
    )


def fit_ratio_vs_inverse_d(
    ratios_by_d: Mapping[int, float], dims: Sequence[int] = DIMENSION_RANGE, **labels: object
) -> FitResult:
    """a2 / sqrt(a1) = c3 + d3 / d"""
    chosen = sorted(d for d in ratios_by_d if d in dims)
    return fit_linear(
        [1.0 / d for d in chosen],
        [ratios_by_d[d] for d in chosen],
        "inverse-d",
        quantity="a2/sqrt(a1)",
        **labels,
    )


def fit_queries_vs_inverse_d_at_fixed_L(
    samples: Iterable[ScalingSample], L: int, t1: int, s: Optional[float] = None
) -> FitResult:
    """t2 / sqrt(N P) = a_l + b_l / d at one lattice side"""
    if L < MIN_FIT_SIDE:
        raise FitError(f"lattice side {L} is excluded from fits")
    points = sorted(select(samples, L=L, t1=t1, s=s), key=lambda x: x.d)
    if any(x.P <= 0 for x in points):
        raise FitError("effective-query fit needs positive peak probabilities")
    return fit_linear(
        [1.0 / x.d for x in points],
        [x.t2_over_sqrt_NP for x in points],
        "fixed-L",
        quantity="t2/sqrt(NP)",
        L=L,
        t1=t1,
    )


@dataclass(frozen=True)
class ScalingRow:
    s: float
    t1: int
    d: int
    sides: Tuple[int, ...]
    a1: float
    b1: Optional[float]
    rms1: Optional[float]
    a2: float
    b2: Optional[float]
    rms2: Optional[float]

    @property
    def ratio(self) -> float:
        return self.a2 / math.sqrt(self.a1)

    @property
    def grover_excess(self) -> float:
        """Relative excess of a2/sqrt(a1) over pi/4"""
        return self.ratio / GROVER_CONSTANT - 1.0

    def as_row(self) -> dict:
        return {
            "s": self.s,
            "t1": self.t1,
            "d": self.d,
            "L": " ".join(str(L) for L in self.sides),
            "a1": self.a1,
            "b1": self.b1,
            "rms1": self.rms1,
            "a2": self.a2,
            "b2": self.b2,
            "rms2": self.rms2,
            "ratio": self.ratio,
            "grover_excess": self.grover_excess,
        }


def scaling_table(samples: Iterable[ScalingSample]) -> List[ScalingRow]:
    """One row per (s, t1, d); dimensions without a usable 1/L fit report the largest-L values"""

    def key(x: ScalingSample) -> tuple:
        return (round(x.s, 6), x.t1, x.d)

    rows = []
    for (s, t1, d), group in groupby(sorted(samples, key=key), key=key):
        group = list(group)
        sides = tuple(sorted({x.L for x in group if x.L >= MIN_FIT_SIDE}))
        if not sides:
            logger.debug("skipping d=%d t1=%d: only L < %d", d, t1, MIN_FIT_SIDE)
            continue
        try:
            fp = fit_P_vs_L(group, d, t1)
            ft = fit_t2_vs_L(group, d, t1)
            rows.append(
                ScalingRow(
                    s, t1, d, sides, fp.intercept, fp.slope, fp.rms, ft.intercept, ft.slope, ft.rms
                )
            )
        except FitError:
            largest = [x for x in group if x.L == sides[-1]][-1]
            rows.append(
                ScalingRow(s, t1, d, sides, largest.P, None, None, largest.t2_over_sqrt_N, None, None)
            )
    return rows


@dataclass(frozen=True)
class SinusoidFit:
    """y ~ offset + amplitude * cos(2 omega t + phase)"""

    offset: float
    amplitude: float
    omega: float
    phase: float
    relative_residual: float

    @property
    def peak(self) -> float:
        return self.offset + self.amplitude

    @property
    def period(self) -> float:
        return math.pi / self.omega


def _harmonic_fit(t: np.ndarray, y: np.ndarray, omega: float) -> Tuple[np.ndarray, float]:
    design = np.column_stack([np.ones_like(t), np.cos(2 * omega * t), np.sin(2 * omega * t)])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    residual = y - design @ coef
    return coef, float(np.dot(residual, residual))


def fit_sinusoid(t: Sequence[float], y: Sequence[float], rounds: int = 5) -> SinusoidFit:
    """Fit P sin^2(omega (t + phi)) written as a + b cos 2wt + c sin 2wt

    The angular frequency starts from the dominant FFT bin and is refined by
    repeated grid shrinking around the best residual.
    """
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(t) < 8 or len(t) != len(y):
        raise FitError("sinusoid fit needs at least 8 equally long samples")
    dt = float(np.mean(np.diff(t)))
    spectrum = np.abs(np.fft.rfft(y - y.mean()))
    freqs = np.fft.rfftfreq(len(y), d=dt)
    k = int(np.argmax(spectrum[1:]) + 1)
    two_omega = 2 * math.pi * freqs[k]

    width = 2 * math.pi * (freqs[1] - freqs[0])
    for _ in range(rounds):
        candidates = np.linspace(max(two_omega - width, 1e-9), two_omega + width, 41)
        errors = [_harmonic_fit(t, y, w / 2)[1] for w in candidates]
        two_omega = float(candidates[int(np.argmin(errors))])
        width /= 10

    omega = two_omega / 2
    (a, b, c), sse = _harmonic_fit(t, y, omega)
    amplitude = math.hypot(b, c)
    phase = math.atan2(-c, b)
    relative = math.sqrt(sse) / float(np.linalg.norm(y)) if np.any(y) else 0.0
    return SinusoidFit(float(a), amplitude, omega, phase, relative)
