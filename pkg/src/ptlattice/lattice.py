"""Builders for open-chain and ring lattice Hamiltonians.

Sign conventions are fixed once for the whole package: the subdiagonal is
the negative of the superdiagonal (b_i = -c_i), and a ring closes through
corner entries (1, n) = -c_n and (n, 1) = +c_n.  Every model in scope obeys
this antisymmetric pattern, so the builders deliberately do not accept
independent lower couplings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InvalidSpecError
from .tolerances import EPS_STRUCT


class Topology(Enum):
    OPEN = "open"
    RING = "ring"


@dataclass(frozen=True)
class LatticeSpec:
    """One Hamiltonian family member: n sites, diagonal a_i, couplings c_i.

    ``upper`` holds n-1 couplings for an open chain and n for a ring (the
    last one being the corner bond closing the ring).
    """

    n: int
    diag: tuple[float, ...]
    upper: tuple[float, ...]
    topology: Topology

    def __post_init__(self):
        object.__setattr__(self, "diag", tuple(float(x) for x in self.diag))
        object.__setattr__(self, "upper", tuple(float(x) for x in self.upper))
        if self.n < 1:
            raise InvalidSpecError(f"dimension must be positive, got n={self.n}")
        if len(self.diag) != self.n:
            raise InvalidSpecError(
                f"diag length {len(self.diag)} does not match n={self.n}"
            )
        expected = self.n - 1 if self.topology is Topology.OPEN else self.n
        if len(self.upper) != expected:
            raise InvalidSpecError(
                f"{self.topology.value} topology with n={self.n} needs "
                f"{expected} couplings, got {len(self.upper)}"
            )
        if self.topology is Topology.RING:
            if self.n % 2 != 0:
                raise InvalidSpecError(f"ring requires even n, got n={self.n}")
            # n=2 would let the corner bond overwrite the single band bond.
            if self.n < 4:
                raise InvalidSpecError("ring requires n >= 4")
        if not all(math.isfinite(x) for x in self.diag + self.upper):
            raise InvalidSpecError("matrix entries must be finite")


def build_open_chain(spec: LatticeSpec) -> np.ndarray:
    """Tridiagonal matrix with diagonal a_i, superdiagonal c_i, subdiagonal -c_i."""
    if spec.topology is not Topology.OPEN:
        raise InvalidSpecError("build_open_chain requires open topology")
    h = np.diag(np.asarray(spec.diag, dtype=float))
    for i, c in enumerate(spec.upper):
        h[i, i + 1] = c
        h[i + 1, i] = -c
    return h


def build_ring(spec: LatticeSpec) -> np.ndarray:
    """Tridiagonal-plus-corners matrix; corners (1,n) = -c_n, (n,1) = +c_n."""
    if spec.topology is not Topology.RING:
        raise InvalidSpecError("build_ring requires ring topology")
    n = spec.n
    h = np.diag(np.asarray(spec.diag, dtype=float))
    for i, c in enumerate(spec.upper[: n - 1]):
        h[i, i + 1] = c
        h[i + 1, i] = -c
    corner = spec.upper[n - 1]
    h[0, n - 1] = -corner
    h[n - 1, 0] = corner
    return h


def build_matrix(spec: LatticeSpec) -> np.ndarray:
    """Dispatch on topology."""
    if spec.topology is Topology.OPEN:
        return build_open_chain(spec)
    return build_ring(spec)


def parity(n: int) -> np.ndarray:
    """Alternating-sign diagonal parity operator diag(+1, -1, +1, ...)."""
    if n < 1:
        raise InvalidSpecError(f"dimension must be positive, got n={n}")
    signs = np.ones(n)
    signs[1::2] = -1.0
    return np.diag(signs)


def check_square(h: np.ndarray) -> np.ndarray:
    """Validate a real square matrix with finite entries; return as float array."""
    h = np.asarray(h, dtype=float)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise InvalidSpecError(f"expected a square matrix, got shape {h.shape}")
    if not np.all(np.isfinite(h)):
        raise InvalidSpecError("matrix entries must be finite")
    return h


def is_pt_symmetric(h: np.ndarray, *, eps_struct: float = EPS_STRUCT) -> bool:
    """Check the structural symmetry H^T P = P H with the alternating parity.

    For real matrices transposition plays the role of time reversal, so this
    is the whole symmetry condition.  The threshold is absolute: registry
    matrices satisfy the identity to rounding of single square-root entries.
    """
    h = check_square(h)
    p = parity(h.shape[0])
    return float(np.max(np.abs(h.T @ p - p @ h))) <= eps_struct
