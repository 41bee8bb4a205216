"""
State evolution for the staggered Dirac walk and the search iteration

One query applies the oracle R and then t1 walk steps W = U_e U_o. All amplitudes
are real; every half-step is an in-place rotation of the 2^d corners of each
block of one parity class.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from .dirac import rotation_stencil
from .exceptions import ContractViolation, NormDriftError
from .kernels import rotate_blocks
from .lattice import (
    LatticeConfig,
    Parity,
    block_member_table,
    check_coords,
    coords_of_index,
    vertex_index,
)
from .peaks import PeakResult, PeakTracker

logger = logging.getLogger(__name__)

NORM_DRIFT_LIMIT = 1e-8
QUERY_BUDGET_FACTOR = 3.0


class WalkParams(BaseModel):
    """Mixing amplitude s and walk steps per oracle query t1"""

    model_config = ConfigDict(frozen=True)

    s: float = Field(ge=0.0, le=1.0)
    t1: int = Field(ge=1)

    @property
    def c(self) -> float:
        return math.sqrt(1.0 - self.s * self.s)

    def tau(self, d: int) -> float:
        """Half-step duration with s = sin(sqrt(d) tau / 2)"""
        return 2.0 * math.asin(self.s) / math.sqrt(d)


class MarkedSet(BaseModel):
    """Distinct flat indices whose amplitude the oracle negates"""

    model_config = ConfigDict(frozen=True)

    vertices: Tuple[int, ...]

    @field_validator("vertices")
    @classmethod
    def _check_vertices(cls, value: Tuple[int, ...]) -> Tuple[int, ...]:
        if not value:
            raise ValueError("marked set must not be empty")
        if len(set(value)) != len(value):
            raise ValueError(f"marked vertices must be distinct, got {value}")
        if min(value) < 0:
            raise ValueError("marked vertices must be non-negative flat indices")
        return value

    @classmethod
    def single(cls, vertex: int = 0) -> "MarkedSet":
        return cls(vertices=(vertex,))

    @classmethod
    def from_coords(cls, coords: Iterable[Sequence[int]], cfg: LatticeConfig) -> "MarkedSet":
        return cls(vertices=tuple(vertex_index(x, cfg) for x in coords))

    @property
    def M(self) -> int:
        return len(self.vertices)

    def check(self, cfg: LatticeConfig) -> None:
        if max(self.vertices) >= cfg.N:
            raise ContractViolation(f"marked vertex {max(self.vertices)} outside [0, {cfg.N})")

    def index_array(self) -> np.ndarray:
        return np.asarray(self.vertices, dtype=np.int64)


class StopRule(BaseModel):
    """Query budget of a search run; None means ceil(3 sqrt(N))"""

    model_config = ConfigDict(frozen=True)

    max_queries: Optional[int] = Field(default=None, ge=1)
    stop_after_peak: bool = True

    def budget(self, cfg: LatticeConfig) -> int:
        if self.max_queries is not None:
            return self.max_queries
        return default_query_budget(cfg)


def default_query_budget(cfg: LatticeConfig) -> int:
    return int(math.ceil(QUERY_BUDGET_FACTOR * math.sqrt(cfg.N)))


class AmplitudeField:
    """Real amplitudes over all N vertices in flat-index order"""

    def __init__(self, amp: np.ndarray, cfg: LatticeConfig):
        amp = np.ascontiguousarray(amp, dtype=np.float64)
        if amp.shape != (cfg.N,):
            raise ContractViolation(f"expected {cfg.N} amplitudes, got shape {amp.shape}")
        self.amp = amp
        self.cfg = cfg

    def norm_squared(self) -> float:
        return float(np.sum(self.amp * self.amp))

    def norm_error(self) -> float:
        return abs(self.norm_squared() - 1.0)

    def probabilities(self) -> np.ndarray:
        """Probability field in lattice shape (axis 0 is dimension d)"""
        return (self.amp * self.amp).reshape(self.cfg.shape)

    def copy(self) -> "AmplitudeField":
        return AmplitudeField(self.amp.copy(), self.cfg)


class WalkOperator:
    """Block member tables and rotation stencils for one (lattice, s)

    Member tables come from a two-entry lattice cache and stencils are shared
    per (d, parity). Operators themselves are not cached.
    """

    def __init__(self, cfg: LatticeConfig, s: float):
        if not 0.0 <= s <= 1.0:
            raise ContractViolation(f"mixing amplitude s must lie in [0, 1], got {s}")
        self.cfg = cfg
        self.s = float(s)
        self.c = math.sqrt(1.0 - self.s * self.s)
        self._members = {p: block_member_table(p, cfg) for p in Parity}
        self._signs = {p: rotation_stencil(cfg.d, p) for p in Parity}
        self.coef = self.s / math.sqrt(cfg.d)

    def half_step(self, amp: np.ndarray, parity: Parity) -> None:
        rotate_blocks(amp, self._members[parity], self._signs[parity], self.c, self.coef)

    def walk(self, amp: np.ndarray, steps: int = 1) -> None:
        """W^steps in place, odd half-step first"""
        for _ in range(steps):
            self.half_step(amp, Parity.ODD)
            self.half_step(amp, Parity.EVEN)


def walk_operator(cfg: LatticeConfig, s: float) -> WalkOperator:
    return WalkOperator(cfg, s)


@dataclass
class SearchTrace:
    """Marked probability after every query; per_vertex holds one column per marked vertex"""

    t2: List[int] = field(default_factory=list)
    prob: List[float] = field(default_factory=list)
    norm_err: List[float] = field(default_factory=list)
    per_vertex: List[Tuple[float, ...]] = field(default_factory=list)

    def record(self, t2: int, prob: float, norm_err: float, per_vertex: Tuple[float, ...]) -> None:
        self.t2.append(t2)
        self.prob.append(prob)
        self.norm_err.append(norm_err)
        self.per_vertex.append(per_vertex)

    def __len__(self) -> int:
        return len(self.t2)

    def rows(self) -> List[dict]:
        return [
            {"t2": t, "prob": p, "norm_err": e}
            for t, p, e in zip(self.t2, self.prob, self.norm_err)
        ]

    def vertex_series(self, k: int) -> np.ndarray:
        return np.array([row[k] for row in self.per_vertex])


@dataclass(frozen=True)
class SearchOutcome:
    peak: PeakResult
    per_vertex: Tuple[PeakResult, ...]
    effective_queries: Optional[float]
    queries_run: int

    @property
    def valid(self) -> bool:
        return self.peak.valid


def uniform_state(cfg: LatticeConfig) -> AmplitudeField:
    return AmplitudeField(np.full(cfg.N, 1.0 / math.sqrt(cfg.N)), cfg)


def point_state(cfg: LatticeConfig, v: int) -> AmplitudeField:
    if not 0 <= v < cfg.N:
        raise ContractViolation(f"vertex index {v} outside [0, {cfg.N})")
    amp = np.zeros(cfg.N)
    amp[v] = 1.0
    return AmplitudeField(amp, cfg)


def apply_half_step(state: AmplitudeField, parity: Parity, params: WalkParams) -> None:
    walk_operator(state.cfg, params.s).half_step(state.amp, parity)


def walk_step(state: AmplitudeField, params: WalkParams, steps: int = 1) -> None:
    walk_operator(state.cfg, params.s).walk(state.amp, steps)


def apply_oracle(state: AmplitudeField, marked: MarkedSet) -> None:
    idx = marked.index_array()
    state.amp[idx] = -state.amp[idx]


def marked_probability(state: AmplitudeField, marked: MarkedSet) -> float:
    values = state.amp[marked.index_array()]
    return float(np.sum(values * values))


def run_search(
    cfg: LatticeConfig,
    params: WalkParams,
    marked: MarkedSet,
    stop: Optional[StopRule] = None,
) -> Tuple[SearchTrace, SearchOutcome]:
    """Iterate [W^t1 R] from the uniform state and track the first-cycle peak"""
    stop = stop or StopRule()
    marked.check(cfg)
    budget = stop.budget(cfg)
    op = walk_operator(cfg, params.s)
    state = uniform_state(cfg)
    idx = marked.index_array()

    overall = PeakTracker()
    vertex_trackers = [PeakTracker() for _ in idx] if marked.M > 1 else []
    trace = SearchTrace()

    logger.debug(
        "search d=%d L=%d s=%.6g t1=%d M=%d budget=%d",
        cfg.d, cfg.L, params.s, params.t1, marked.M, budget,
    )
    for query in range(1, budget + 1):
        state.amp[idx] = -state.amp[idx]
        op.walk(state.amp, params.t1)

        norm_err = state.norm_error()
        if norm_err > NORM_DRIFT_LIMIT:
            raise NormDriftError(f"norm drifted by {norm_err:.3e} after {query} queries")
        values = state.amp[idx]
        squares = values * values
        prob = float(np.sum(squares))
        trace.record(query, prob, norm_err, tuple(float(p) for p in squares))

        done = overall.update(query, prob)
        for tracker, p in zip(vertex_trackers, squares):
            done = tracker.update(query, float(p)) and done
        if done and stop.stop_after_peak:
            break

    peak = overall.result()
    per_vertex = tuple(t.result() for t in vertex_trackers) if vertex_trackers else (peak,)
    effective = peak.t2 / math.sqrt(peak.P) if peak.valid and peak.P > 0 else None
    outcome = SearchOutcome(
        peak=peak, per_vertex=per_vertex, effective_queries=effective, queries_run=len(trace)
    )
    if peak.valid:
        logger.info("peak P=%.6g at t2=%d after %d queries", peak.P, peak.t2, len(trace))
    else:
        logger.warning("no confirmed peak within %d queries", len(trace))
    return trace, outcome


def _resolve_vertex(cfg: LatticeConfig, start: Union[int, Sequence[int]]) -> int:
    if isinstance(start, (int, np.integer)):
        if not 0 <= start < cfg.N:
            raise ContractViolation(f"vertex index {start} outside [0, {cfg.N})")
        return int(start)
    check_coords(start, cfg)
    return vertex_index(start, cfg)


def return_amplitude(
    cfg: LatticeConfig, params: WalkParams, start: Union[int, Sequence[int]] = 0
) -> float:
    """A(t1) = <x|W^t1|x>, by default from the origin"""
    v = _resolve_vertex(cfg, start)
    state = point_state(cfg, v)
    walk_step(state, params, params.t1)
    value = float(state.amp[v])
    if not -1.0 + 2.0 / cfg.N - 1e-10 <= value <= 1.0 + 1e-10:
        raise ContractViolation(f"return amplitude {value} outside [-1 + 2/N, 1]")
    return value


def search_plane_basis(N: int, marked: int = 0) -> Tuple[np.ndarray, np.ndarray]:
    """|s> and the unit vector orthogonal to it in span{|s>, |marked>}"""
    s = np.full(N, 1.0 / math.sqrt(N))
    s_perp = s.copy()
    s_perp[marked] -= math.sqrt(N)
    s_perp /= math.sqrt(N - 1)
    return s, s_perp


def projection_matrix(cfg: LatticeConfig, params: WalkParams, marked: int = 0) -> np.ndarray:
    """Restriction of W^t1 R to the |s>, |s_perp> plane, by direct evolution"""
    basis = search_plane_basis(cfg.N, marked)
    oracle = MarkedSet.single(marked)
    proj = np.empty((2, 2))
    for j, column in enumerate(basis):
        state = AmplitudeField(column.copy(), cfg)
        apply_oracle(state, oracle)
        walk_step(state, params, params.t1)
        for i, row in enumerate(basis):
            proj[i, j] = float(np.dot(row, state.amp))
    return proj


def projection_closed_form(N: int, A: float) -> np.ndarray:
    """diag(1, (1 - N A)/(N - 1)) times the Grover rotation G R in the same plane"""
    off = 2.0 * math.sqrt(N - 1) / N
    grover = np.array([[1.0 - 2.0 / N, off], [-off, 1.0 - 2.0 / N]])
    return np.diag([1.0, (1.0 - N * A) / (N - 1)]) @ grover


def evolve_to_query(
    cfg: LatticeConfig, params: WalkParams, marked: MarkedSet, t2: int
) -> AmplitudeField:
    """State after exactly t2 queries"""
    if t2 < 0:
        raise ContractViolation(f"query count must be >= 0, got {t2}")
    marked.check(cfg)
    state = uniform_state(cfg)
    for _ in range(t2):
        apply_oracle(state, marked)
        walk_step(state, params, params.t1)
    return state


def peak_snapshot(
    cfg: LatticeConfig,
    params: WalkParams,
    marked: MarkedSet,
    t2: int,
    through: Optional[Sequence[int]] = None,
) -> List[dict]:
    """Probability on the plane spanned by axes 1 and 2 after t2 queries

    The plane passes through `through` (default: the first marked vertex).
    """
    if cfg.d < 2:
        raise ContractViolation("a planar snapshot needs d >= 2")
    probs = evolve_to_query(cfg, params, marked, t2).probabilities()
    anchor = tuple(through) if through is not None else coords_of_index(marked.vertices[0], cfg)
    check_coords(anchor, cfg)

    # array axis k holds dimension d - k
    index = [anchor[cfg.d - 1 - k] for k in range(cfg.d)]
    index[-1] = slice(None)
    index[-2] = slice(None)
    plane = probs[tuple(index)]
    return [
        {"x1": x1, "x2": x2, "prob": float(plane[x2, x1])}
        for x2 in range(cfg.L)
        for x1 in range(cfg.L)
    ]

