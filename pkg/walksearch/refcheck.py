"""
Dense-matrix reference operators for small lattices

Ground truth for the block kernel: every operator here is an explicit N x N
matrix, built either from the block rotations or by exponentiating the
link-assembled Hamiltonian.
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Union

import numpy as np

from .config import resolve_dense_limit
from .dirac import assemble_dense_partition, build_block_rotation
from .evolve import MarkedSet, WalkParams, search_plane_basis
from .exceptions import ContractViolation, DenseLimitError
from .lattice import LatticeConfig, Parity, block_member_table

logger = logging.getLogger(__name__)

UNITARY_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class DenseOperator:
    """Explicit N x N operator with a short label (U_o, U_e, W, R, W^t1 R, G R)"""

    matrix: np.ndarray
    label: str

    @property
    def N(self) -> int:
        return self.matrix.shape[0]

    def power(self, k: int) -> "DenseOperator":
        return DenseOperator(np.linalg.matrix_power(self.matrix, k), f"({self.label})^{k}")

    def apply(self, vector: np.ndarray) -> np.ndarray:
        return self.matrix @ vector


def _guard(N: int, limit: Optional[int] = None) -> None:
    cap = resolve_dense_limit(limit)
    if N > cap:
        raise DenseLimitError(f"refusing a dense {N} x {N} operator (cap {cap})")


def _marked_indices(marked: Union[MarkedSet, Iterable[int]]) -> np.ndarray:
    if isinstance(marked, MarkedSet):
        return marked.index_array()
    return np.asarray(list(marked), dtype=np.int64)


def is_unitary(op: DenseOperator, tol: float = UNITARY_TOLERANCE) -> bool:
    m = op.matrix
    return bool(np.abs(m.conj().T @ m - np.eye(op.N)).max() < tol)


def dense_half_step(
    cfg: LatticeConfig, parity: Parity, params: WalkParams, method: str = "blocks"
) -> DenseOperator:
    """U_o or U_e as a dense matrix

    method="blocks" places the block rotation on every block of the parity
    class; method="exponential" diagonalises the link-assembled Hamiltonian
    and exponentiates it in complex arithmetic.
    """
    _guard(cfg.N)
    label = "U_o" if parity is Parity.ODD else "U_e"
    if method == "blocks":
        block = build_block_rotation(cfg.d, parity, params.s).matrix
        u = np.zeros((cfg.N, cfg.N))
        for members in block_member_table(parity, cfg):
            u[np.ix_(members, members)] = block
        return DenseOperator(u, label)
    if method == "exponential":
        h = assemble_dense_partition(cfg, parity)
        values, vectors = np.linalg.eigh(h)
        phases = np.exp(-1j * values * params.tau(cfg.d))
        return DenseOperator((vectors * phases) @ vectors.conj().T, label)
    raise ContractViolation(f"unknown dense construction method: {method}")


def dense_walk(cfg: LatticeConfig, params: WalkParams, method: str = "blocks") -> DenseOperator:
    """W = U_e U_o"""
    u_odd = dense_half_step(cfg, Parity.ODD, params, method)
    u_even = dense_half_step(cfg, Parity.EVEN, params, method)
    return DenseOperator(u_even.matrix @ u_odd.matrix, "W")


def dense_oracle(N: int, marked: Union[MarkedSet, Iterable[int]]) -> DenseOperator:
    """R = I - 2 sum_m |m><m|"""
    _guard(N)
    r = np.eye(N)
    idx = _marked_indices(marked)
    r[idx, idx] = -1.0
    return DenseOperator(r, "R")


def dense_search_step(
    cfg: LatticeConfig,
    params: WalkParams,
    marked: Union[MarkedSet, Iterable[int]],
    method: str = "blocks",
) -> DenseOperator:
    """One query W^t1 R"""
    walk = dense_walk(cfg, params, method).power(params.t1)
    return DenseOperator(walk.matrix @ dense_oracle(cfg.N, marked).matrix, "W^t1 R")


def grover_step(N: int, marked: Union[MarkedSet, Iterable[int]] = (0,)) -> DenseOperator:
    """G R with the diffusion G = 2|s><s| - I"""
    if N < 2:
        raise ContractViolation(f"Grover iteration needs N >= 2, got {N}")
    _guard(N)
    g = np.full((N, N), 2.0 / N) - np.eye(N)
    return DenseOperator(g @ dense_oracle(N, marked).matrix, "G R")


def dense_trace(
    op: DenseOperator,
    marked: Union[MarkedSet, Iterable[int]],
    queries: int,
    start: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Marked probability after each of `queries` applications of op, from |s> by default"""
    idx = _marked_indices(marked)
    psi = np.full(op.N, 1.0 / math.sqrt(op.N), dtype=op.matrix.dtype) if start is None else start
    probs = np.empty(queries)
    for q in range(queries):
        psi = op.apply(psi)
        probs[q] = float(np.sum(np.abs(psi[idx]) ** 2))
    return probs


def project_onto_search_plane(op: DenseOperator, marked: int = 0) -> np.ndarray:
    """2 x 2 matrix <b_i|op|b_j> in the basis |s>, |s_perp>"""
    basis = np.column_stack(search_plane_basis(op.N, marked))
    proj = basis.T @ op.matrix @ basis
    if np.iscomplexobj(proj):
        if np.abs(proj.imag).max() > UNITARY_TOLERANCE:
            return proj
        proj = proj.real
    return proj
