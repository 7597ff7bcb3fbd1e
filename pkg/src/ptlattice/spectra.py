"""Spectra, eigenpairs, and PT-phase classification for small real matrices.

Dense spectra come from LAPACK via numpy; grid sweeps batch all matrices
into one stacked eigenvalue call.  Near-degenerate sweep points are
re-solved through the arbitrary-precision characteristic-polynomial path,
because a backward-stable QR eigensolver can only resolve an order-k
coalescence to about u^(1/k) (u = machine epsilon), while the polynomial of
the same matrix loses nothing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import (
    ConsistencyError,
    DegenerateSpectrumError,
    InvalidSpecError,
    ModelDomainError,
    SolverError,
)
from .lattice import check_square, is_pt_symmetric, parity
from .tolerances import EPS_GAP, EPS_REAL, EPS_SPEC

MAX_DENSE_N = 64


def matching_distance(a, b) -> float:
    """Max elementwise distance between two spectra under optimal matching.

    Bipartite matching makes the comparison independent of the ordering
    conventions of the two sources (canonical sorting alone can pair wrong
    partners when real parts nearly tie).
    """
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    if a.shape != b.shape:
        raise InvalidSpecError(f"spectra sizes differ: {a.size} vs {b.size}")
    if a.size == 0:
        return 0.0
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def canonical_sort(values: np.ndarray) -> np.ndarray:
    """Sort complex values by (real part, then imaginary part)."""
    values = np.asarray(values, dtype=complex).ravel()
    order = np.lexsort((values.imag, values.real))
    return values[order]


def min_pairwise_gap(values) -> float:
    """Smallest |lambda_i - lambda_j| over distinct index pairs."""
    values = np.asarray(values, dtype=complex).ravel()
    n = values.size
    if n < 2:
        return math.inf
    diff = np.abs(values[:, None] - values[None, :])
    diff[np.diag_indices(n)] = math.inf
    return float(diff.min())


@dataclass(frozen=True)
class Spectrum:
    """Canonically sorted complex eigenvalues of one real matrix."""

    values: np.ndarray

    def __post_init__(self):
        vals = canonical_sort(self.values)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return int(self.values.size)

    @classmethod
    def from_values(
        cls,
        values,
        *,
        trace: float | None = None,
        check: bool = True,
        tol: float = EPS_SPEC,
    ) -> "Spectrum":
        values = np.asarray(values, dtype=complex).ravel()
        if not np.all(np.isfinite(values)):
            raise ConsistencyError("spectrum contains non-finite values")
        spec = cls(values)
        if check and spec.n:
            scale = max(1.0, float(np.abs(spec.values).max()))
            closure = matching_distance(spec.values, np.conj(spec.values))
            if closure > tol * scale:
                raise ConsistencyError(
                    f"non-real eigenvalues are not conjugate-paired "
                    f"(closure defect {closure:.3e})"
                )
            if trace is not None:
                drift = abs(complex(spec.values.sum()) - complex(trace))
                if drift > tol * scale * spec.n:
                    raise ConsistencyError(
                        f"eigenvalue sum differs from trace by {drift:.3e}"
                    )
        return spec


def eigenvalues(h) -> Spectrum:
    """All eigenvalues of a small dense real matrix, verified for closure."""
    h = check_square(h)
    n = h.shape[0]
    if n > MAX_DENSE_N:
        raise InvalidSpecError(f"dense solver limited to n <= {MAX_DENSE_N}, got {n}")
    try:
        vals = np.linalg.eigvals(h)
    except np.linalg.LinAlgError as exc:
        raise SolverError(
            f"eigensolver failed to converge: {exc}",
            diagnostics={"n": n, "frobenius_norm": float(np.linalg.norm(h))},
        ) from exc
    return Spectrum.from_values(vals, trace=float(np.trace(h)))


def sweep_eigenvalues(matrix_fn, ts, *, polish_rel: float = 1e-5) -> np.ndarray:
    """Eigenvalues along a parameter grid, one canonically sorted row per t.

    All grid matrices go through a single stacked LAPACK call.  Rows whose
    minimal eigenvalue gap falls below polish_rel * max(1, ||H||_F) sit near
    a coalescence where QR accuracy degrades to u^(1/k); those rows are
    re-solved through the characteristic polynomial of the same matrix in
    arbitrary precision.  Pass polish_rel=0 to disable the refinement.
    """
    ts = np.asarray(ts, dtype=float).ravel()
    mats = [check_square(matrix_fn(float(t))) for t in ts]
    if not mats:
        return np.zeros((0, 0), dtype=complex)
    stack = np.stack(mats)
    try:
        vals = np.linalg.eigvals(stack)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"stacked eigensolver failed: {exc}") from exc
    out = np.empty(vals.shape, dtype=complex)
    for i in range(vals.shape[0]):
        row = canonical_sort(np.asarray(vals[i], dtype=complex))
        if polish_rel > 0:
            scale = max(1.0, float(np.linalg.norm(stack[i])))
            if min_pairwise_gap(row) < polish_rel * scale:
                from .charpoly import eigenvalues_charpoly_oracle

                row = eigenvalues_charpoly_oracle(stack[i]).values
        out[i] = row
    return out


def count_real(spectrum, eps_real: float = EPS_REAL) -> int:
    """Number of eigenvalues with |Im| <= eps_real * max(1, spectral radius)."""
    values = spectrum.values if isinstance(spectrum, Spectrum) else None
    if values is None:
        values = np.asarray(spectrum, dtype=complex).ravel()
    if values.size == 0:
        return 0
    threshold = eps_real * max(1.0, float(np.abs(values).max()))
    count = int((np.abs(values.imag) <= threshold).sum())
    if (values.size - count) % 2 != 0:
        raise ConsistencyError(
            f"{values.size - count} eigenvalues classified complex; "
            "conjugate pairing demands an even number"
        )
    return count


def normalize_vector(v: np.ndarray) -> np.ndarray:
    """Unit Euclidean norm with the first significant component positive real."""
    v = np.asarray(v, dtype=complex).ravel()
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        raise InvalidSpecError("cannot normalize a zero vector")
    v = v / norm
    magnitudes = np.abs(v)
    k = int(np.argmax(magnitudes > 1e-8 * magnitudes.max()))
    phase = v[k] / abs(v[k])
    return v * np.conj(phase)


def vector_angle(u, v) -> float:
    """Angle in [0, pi/2] between the rays of two complex vectors.

    Computed from the rejection norm, which stays accurate for nearly
    parallel vectors where 1 - |cos| cancels.
    """
    u = normalize_vector(u)
    v = normalize_vector(v)
    rejection = u - np.vdot(v, u) * v
    s = float(np.linalg.norm(rejection))
    return math.asin(min(1.0, s))


@dataclass(frozen=True)
class EigenPair:
    """One eigenvalue with unit-norm right and left eigenvectors."""

    eigenvalue: complex
    right: np.ndarray
    left: np.ndarray


def left_right_pairs(h, *, eps_gap: float = EPS_GAP) -> list[EigenPair]:
    """Biorthogonal eigenpairs of a real matrix with a simple spectrum.

    Left vectors are right eigenvectors of the transpose: for real H the
    left vector of eigenvalue lambda satisfies H^T L = conj(lambda) L.
    """
    h = check_square(h)
    n = h.shape[0]
    scale = max(1.0, float(np.linalg.norm(h)))
    try:
        w, vr = np.linalg.eig(h)
        wt, vl = np.linalg.eig(h.T)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"eigensolver failed to converge: {exc}") from exc
    gap = min_pairwise_gap(w)
    if gap <= eps_gap * scale:
        raise DegenerateSpectrumError(
            f"minimal eigenvalue gap {gap:.3e} is below the gate "
            f"{eps_gap * scale:.3e}; use degeneracy_order instead"
        )
    cost = np.abs(wt[:, None] - np.conj(w)[None, :])
    rows, cols = linear_sum_assignment(cost)
    if float(cost[rows, cols].max()) > 1e-8 * scale:
        raise ConsistencyError(
            "eigenvalues of H and H^T do not match as conjugates"
        )
    left_of = np.empty(n, dtype=int)
    left_of[cols] = rows
    pairs = []
    for j in range(n):
        lam = complex(w[j])
        right = normalize_vector(vr[:, j])
        left = normalize_vector(vl[:, left_of[j]])
        res_r = float(np.linalg.norm(h @ right - lam * right))
        res_l = float(np.linalg.norm(h.T @ left - np.conj(lam) * left))
        bound = max(EPS_SPEC * scale, 64 * np.finfo(float).eps * scale)
        if res_r > bound or res_l > bound:
            raise SolverError(
                f"eigenpair residual too large ({max(res_r, res_l):.3e})",
                diagnostics={"eigenvalue": lam, "bound": bound},
            )
        pairs.append(EigenPair(eigenvalue=lam, right=right, left=left))
    pairs.sort(key=lambda p: (p.eigenvalue.real, p.eigenvalue.imag))
    return pairs


class Phase(Enum):
    UNBROKEN = "unbroken"
    BROKEN = "broken"


@dataclass(frozen=True)
class PtPhase:
    """Phase verdict plus per-eigenvalue proportionality defects.

    evidence[k] is the sine of the angle between P|R_k> and |L_k>; in the
    unbroken phase the two rays coincide for every k.
    """

    value: Phase
    evidence: np.ndarray

    @property
    def unbroken(self) -> bool:
        return self.value is Phase.UNBROKEN

    @property
    def max_defect(self) -> float:
        return float(self.evidence.max()) if self.evidence.size else 0.0


def pt_phase(
    h,
    *,
    eps_real: float = EPS_REAL,
    defect_tol: float = 1e-6,
    eps_gap: float = EPS_GAP,
) -> PtPhase:
    """Classify the PT phase by two independent criteria and cross-check them.

    Criterion one: every eigenvalue real within eps_real.  Criterion two:
    P|R_k> proportional to |L_k> for every k.  The two must agree; a
    disagreement beyond defect_tol raises.
    """
    h = check_square(h)
    if not is_pt_symmetric(h):
        raise InvalidSpecError("matrix is not PT-symmetric under the alternating parity")
    pairs = left_right_pairs(h, eps_gap=eps_gap)
    p = parity(h.shape[0])
    defects = np.array(
        [math.sin(vector_angle(p @ pair.right, pair.left)) for pair in pairs]
    )
    values = np.array([pair.eigenvalue for pair in pairs])
    all_real = count_real(values, eps_real) == h.shape[0]
    all_proportional = bool(defects.max() <= defect_tol)
    if all_real != all_proportional:
        raise ConsistencyError(
            f"reality ({all_real}) and proportionality ({all_proportional}) "
            f"criteria disagree; defects={defects}"
        )
    phase = Phase.UNBROKEN if all_real else Phase.BROKEN
    return PtPhase(value=phase, evidence=defects)


def ec4_closed_form(t: float) -> Spectrum:
    """Closed-form spectrum of the equal-coupling 4-site ring.

    {-(9-4t^2)^(1/2), -1, 1, (9-4t^2)^(1/2)}; the radical turns imaginary
    for |t| > 3/2, complexifying the outer pair.
    """
    r = np.sqrt(complex(9 - 4 * t * t))
    return Spectrum.from_values([-r, -1.0, 1.0, r], trace=0.0)


def ec4_pair_vectors(t: float) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form eigenvectors of the equal-coupling ring for E=1 and E=+sqrt(9-4t^2).

    Returned unnormalized, exactly as the closed forms read; their rays
    coincide at t = +-sqrt(2).  The fourth component of the second vector
    divides by t, so t=0 is excluded; beyond |t|=3/2 the radical is
    imaginary and the forms leave the real domain.
    """
    if t == 0.0:
        raise ModelDomainError(
            "closed-form eigenvector component divides by t; t=0 not admissible"
        )
    if abs(t) > 1.5:
        raise ModelDomainError(
            "closed-form eigenvectors need |t| <= 3/2 (real radical)",
            radical="sqrt(9 - 4t^2)",
        )
    r = math.sqrt(9 - 4 * t * t)
    psi2 = np.array([0.0, t, 2.0, t])
    psi3 = np.array(
        [
            t * t - 2,
            (r + 1) * t / 2,
            3 - t * t + r,
            ((4 - t * t) * r + 12 - 5 * t * t) / (2 * t),
        ]
    )
    return psi2, psi3
