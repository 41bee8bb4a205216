"""
Staggered-fermion block Hamiltonians and their exact exponentials

All matrices are stored in the corner ordering of lattice.block_members:
tensor slot j of the Pauli products acts on local bit b_j (stride 2^(j-1)).
"""

from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import List, Optional, Sequence

import numpy as np

from .config import resolve_dense_limit
from .exceptions import ContractViolation, DenseLimitError
from .lattice import LatticeConfig, Parity, coords_of_index, vertex_index

IDENTITY_2 = np.eye(2, dtype=complex)
SIGMA_2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_3 = np.array([[1, 0], [0, -1]], dtype=complex)

MAX_BLOCK_DIMENSION = 12


def _check_dimension(d: int) -> None:
    if not 1 <= d <= MAX_BLOCK_DIMENSION:
        raise ContractViolation(
            f"block dimension must lie in [1, {MAX_BLOCK_DIMENSION}], got {d}"
        )


def hamiltonian_summands(d: int) -> List[np.ndarray]:
    """The d Pauli products I^(d-j) x sigma_2 x sigma_3^(j-1), j = 1..d"""
    _check_dimension(d)
    terms = []
    for j in range(1, d + 1):
        factors = [IDENTITY_2] * (d - j) + [SIGMA_2] + [SIGMA_3] * (j - 1)
        terms.append(reduce(np.kron, factors))
    return terms


@dataclass(frozen=True, eq=False)
class BlockHamiltonian:
    """Purely imaginary block H^B, kept as its real companion K = -2i H^B / sqrt(d)"""

    d: int
    parity: Parity
    generator: np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        """H^B itself (complex, Hermitian)"""
        return 0.5j * np.sqrt(self.d) * self.generator


@lru_cache(maxsize=32)
def build_block_hamiltonian(d: int, parity: Parity) -> BlockHamiltonian:
    """Odd block from the Pauli sum; even block is -P H_o P with P complementing all bits"""
    h_odd = -0.5 * sum(hamiltonian_summands(d))
    h = h_odd if parity is Parity.ODD else -h_odd[::-1, ::-1]

    k = -2j * h / np.sqrt(d)
    if np.abs(k.imag).max() > 1e-14:
        raise ContractViolation("block generator is not real")
    generator = np.ascontiguousarray(k.real)
    generator.flags.writeable = False
    return BlockHamiltonian(d=d, parity=parity, generator=generator)


@dataclass(frozen=True, eq=False)
class BlockRotation:
    """Real orthogonal block U^B = c I + s K applied per elementary hypercube"""

    d: int
    parity: Parity
    s: float
    c: float
    matrix: np.ndarray
    generator: np.ndarray

    def stencil(self) -> np.ndarray:
        return rotation_stencil(self.d, self.parity)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self.matrix)


@lru_cache(maxsize=32)
def rotation_stencil(d: int, parity: Parity) -> np.ndarray:
    """Signs of K in sparse form: K[k, k ^ 2^j] = signs[k, j] / sqrt(d)

    K has exactly d nonzero entries per row, one per flipped bit, which is
    what keeps a half-step at O(d N) work. The stencil does not depend on s.
    """
    generator = build_block_hamiltonian(d, parity).generator
    corners = 2**d
    scale = np.sqrt(d)
    signs = np.empty((corners, d))
    for k in range(corners):
        for j in range(d):
            signs[k, j] = np.rint(scale * generator[k, k ^ (1 << j)])
    signs.flags.writeable = False
    return signs


@lru_cache(maxsize=64)
def build_block_rotation(d: int, parity: Parity, s: float) -> BlockRotation:
    """Exact exponential of one block: exp(-i H^B tau) with s = sin(sqrt(d) tau / 2)"""
    if not 0.0 <= s <= 1.0:
        raise ContractViolation(f"mixing amplitude s must lie in [0, 1], got {s}")
    generator = build_block_hamiltonian(d, parity).generator
    c = float(np.sqrt(1.0 - s * s))
    matrix = c * np.eye(2**d) + s * generator
    matrix.flags.writeable = False
    return BlockRotation(d=d, parity=parity, s=float(s), c=c, matrix=matrix, generator=generator)


def link_sign(x: Sequence[int], n: int) -> int:
    """Staggered sign eta_n(x) = prod_{j<n} (-1)^{x_j}"""
    if not 1 <= n <= len(x):
        raise ContractViolation(f"direction must lie in [1, {len(x)}], got {n}")
    return -1 if sum(x[: n - 1]) % 2 else 1


def assemble_dense_partition(
    cfg: LatticeConfig, parity: Parity, limit: Optional[int] = None
) -> np.ndarray:
    """Link-by-link N x N matrix of H_o or H_e

    The link from x to x + n lands in the odd part iff x_n is even, with
    <x+n|H|x> = -(i/2) eta_n(x) and the Hermitian conjugate on the reverse entry.
    """
    cap = resolve_dense_limit(limit)
    if cfg.N > cap:
        raise DenseLimitError(f"refusing dense {cfg.N} x {cfg.N} assembly (cap {cap})")

    h = np.zeros((cfg.N, cfg.N), dtype=complex)
    for v in range(cfg.N):
        x = coords_of_index(v, cfg)
        for n in range(1, cfg.d + 1):
            if x[n - 1] % 2 != parity.offset:
                continue
            forward = list(x)
            forward[n - 1] = (forward[n - 1] + 1) % cfg.L
            w = vertex_index(forward, cfg)
            eta = link_sign(x, n)
            h[w, v] = -0.5j * eta
            h[v, w] = 0.5j * eta
    return h
