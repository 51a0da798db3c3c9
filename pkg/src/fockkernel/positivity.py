"""Certification of positive, strictly positive, and conditionally negative matrices.

Certificates carry eigenvalue evidence from a full Hermitian eigendecomposition.
The separation search realizes the almost-every-vector existence argument as a
seeded randomized draw with a retry budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .errors import (
    DimensionMismatch,
    EigenFailure,
    NotHermitian,
    SeparationFailed,
)
from .kernel_core import (
    GramMatrix,
    KernelSpec,
    Point,
    gram,
    require_distinct,
)

VERDICT_STRICTLY_POSITIVE = "strictly_positive"
VERDICT_POSITIVE_SEMIDEFINITE = "positive_semidefinite"
VERDICT_INDEFINITE = "indefinite"
VERDICT_NOT_HERMITIAN = "not_hermitian"

CND_CONDITIONALLY_NEGATIVE = "conditionally_negative"
CND_NOT_CONDITIONALLY_NEGATIVE = "not_conditionally_negative"

METHOD_EIGH = "eigendecomposition"
METHOD_CHOLESKY = "pivoted_cholesky"

HERMITIAN_RTOL = 1e-12
#: relative strictness floor: lambda_min must clear 1e-10 * max(1, lambda_max)
STRICTNESS_FACTOR = 1e-10
#: separation gap floor, relative to 1 + max |psi|
SEPARATION_GAP_FACTOR = 1e-10


@dataclass(frozen=True)
class PDCertificate:
    verdict: str
    min_eigenvalue: float
    max_eigenvalue: float
    tolerance: float
    method: str
    n: int
    kernel: Optional[str] = None

    def to_json_dict(self) -> dict:
        out = {
            "verdict": self.verdict,
            "min_eigenvalue": self.min_eigenvalue,
            "max_eigenvalue": self.max_eigenvalue,
            "tolerance": self.tolerance,
            "method": self.method,
            "n": self.n,
        }
        if self.kernel is not None:
            out["kernel"] = self.kernel
        return out


@dataclass(frozen=True)
class CNDCertificate:
    verdict: str
    max_projected_eigenvalue: float
    tolerance: float
    n: int
    kernel: Optional[str] = None

    def to_json_dict(self) -> dict:
        out = {
            "verdict": self.verdict,
            "max_projected_eigenvalue": self.max_projected_eigenvalue,
            "tolerance": self.tolerance,
            "n": self.n,
        }
        if self.kernel is not None:
            out["kernel"] = self.kernel
        return out


@dataclass
class SeparatingFunctional:
    """psi = sum_j c_j k(. , x_j) with pairwise-distinct values on the base points."""

    points: tuple[Point, ...]
    coefficients: np.ndarray
    values: np.ndarray
    min_pairwise_gap: float
    seed: int
    tries_used: int


@dataclass(frozen=True)
class VandermondeReport:
    nonsingular: bool
    min_pairwise_gap: float
    condition_estimate: float


def _as_matrix(G: Union[GramMatrix, np.ndarray]) -> tuple[np.ndarray, Optional[str]]:
    if isinstance(G, GramMatrix):
        return G.entries, G.kernel
    a = np.asarray(G)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    return a, None


def is_hermitian(M: np.ndarray, rtol: float = HERMITIAN_RTOL) -> bool:
    scale = max(1.0, float(np.max(np.abs(M))) if M.size else 0.0)
    return float(np.max(np.abs(M - M.conj().T))) <= rtol * scale


def certify_psd(G: Union[GramMatrix, np.ndarray], tol: Optional[float] = None) -> PDCertificate:
    """Verdict from the full Hermitian eigendecomposition.

    StrictlyPositive if lambda_min > tol, Indefinite if lambda_min < -tol,
    PositiveSemidefinite in between; default tol = 1e-10 * max(1, lambda_max).
    A matrix failing the Hermitian check at 1e-12 relative is judged
    NotHermitian without decomposition.
    """
    m, kernel = _as_matrix(G)
    n = m.shape[0]
    if not is_hermitian(m):
        return PDCertificate(
            verdict=VERDICT_NOT_HERMITIAN,
            min_eigenvalue=math.nan,
            max_eigenvalue=math.nan,
            tolerance=tol if tol is not None else math.nan,
            method=METHOD_EIGH,
            n=n,
            kernel=kernel,
        )
    try:
        eigs = np.linalg.eigvalsh(m)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(f"eigendecomposition failed: {exc}") from exc
    lo, hi = float(eigs[0]), float(eigs[-1])
    if tol is None:
        tol = STRICTNESS_FACTOR * max(1.0, hi)
    elif tol <= 0:
        raise ValueError("tol must be positive")
    if lo > tol:
        verdict = VERDICT_STRICTLY_POSITIVE
    elif lo < -tol:
        verdict = VERDICT_INDEFINITE
    else:
        verdict = VERDICT_POSITIVE_SEMIDEFINITE
    return PDCertificate(
        verdict=verdict,
        min_eigenvalue=lo,
        max_eigenvalue=hi,
        tolerance=float(tol),
        method=METHOD_EIGH,
        n=n,
        kernel=kernel,
    )


def posdef_quick(G: Union[GramMatrix, np.ndarray]) -> bool:
    """Cholesky fast path: True means numerically positive definite,
    False means inconclusive (fall back to certify_psd for evidence)."""
    m, _ = _as_matrix(G)
    try:
        np.linalg.cholesky(m)
        return True
    except np.linalg.LinAlgError:
        return False


def certify_strict(
    k: KernelSpec, points: Sequence[Point], tol: Optional[float] = None
) -> PDCertificate:
    """certify_psd of the Gram matrix, after rejecting coincident points."""
    pts = tuple(points)
    require_distinct(pts)
    return certify_psd(gram(k, pts), tol)


def householder_sum_zero_basis(n: int) -> np.ndarray:
    """Orthonormal basis (n x (n-1)) of {c : sum c_j = 0}.

    Columns 2..n of the Householder reflection mapping e_1 to ones/sqrt(n).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return np.zeros((1, 0))
    u = np.full(n, 1.0 / math.sqrt(n))
    v = u.copy()
    v[0] -= 1.0
    H = np.eye(n) - 2.0 * np.outer(v, v) / (v @ v)
    return H[:, 1:]


def certify_cnd(M: Union[GramMatrix, np.ndarray], tol: Optional[float] = None) -> CNDCertificate:
    """Test the quadratic form on the sum-zero subspace {c : sum c_j = 0}.

    Conditionally negative iff the largest eigenvalue of Q* M Q is <= tol.
    For n = 1 the subspace is trivial and the verdict holds vacuously
    (max_projected_eigenvalue reported as 0).
    """
    m, kernel = _as_matrix(M)
    if not is_hermitian(m):
        raise NotHermitian("matrix is not Hermitian at 1e-12 relative")
    n = m.shape[0]
    Q = householder_sum_zero_basis(n)
    if Q.shape[1] == 0:
        max_eig = 0.0
    else:
        projected = Q.conj().T @ m @ Q
        projected = 0.5 * (projected + projected.conj().T)  # kill roundoff skew
        try:
            eigs = np.linalg.eigvalsh(projected)
        except np.linalg.LinAlgError as exc:
            raise EigenFailure(f"eigendecomposition failed: {exc}") from exc
        max_eig = float(eigs[-1])
    if tol is None:
        scale = max(1.0, abs(max_eig))
        tol = STRICTNESS_FACTOR * scale
    verdict = (
        CND_CONDITIONALLY_NEGATIVE
        if max_eig <= tol
        else CND_NOT_CONDITIONALLY_NEGATIVE
    )
    return CNDCertificate(
        verdict=verdict,
        max_projected_eigenvalue=max_eig,
        tolerance=float(tol),
        n=n,
        kernel=kernel,
    )


def schur_product(A: GramMatrix, B: GramMatrix) -> GramMatrix:
    """Entrywise product; Hermitian (and PSD-closed) when both inputs are."""
    if A.entries.shape != B.entries.shape:
        raise DimensionMismatch(
            f"shapes differ: {A.entries.shape} vs {B.entries.shape}"
        )
    entries = A.entries * B.entries
    points = A.points if (A.points is not None and A.points == B.points) else None
    return GramMatrix(entries, points, f"schur({A.kernel},{B.kernel})")


def complexify(m: np.ndarray) -> np.ndarray:
    return m.astype(complex) if not np.iscomplexobj(m) else m


def find_separating(
    k: KernelSpec,
    points: Sequence[Point],
    seed: int,
    max_tries: int = 64,
) -> SeparatingFunctional:
    """Seeded random search for coefficients c with pairwise-distinct psi values.

    psi(x_i) = sum_j c_j k(x_i, x_j); c is drawn from a standard Gaussian per
    try.  Success needs min gap > 1e-10 * (1 + max |psi|).  Deterministic for a
    fixed seed.
    """
    pts = tuple(points)
    require_distinct(pts)
    if max_tries < 1:
        raise ValueError("max_tries must be >= 1")
    n = len(pts)
    if n == 1:
        c = np.ones(1)
        values = np.array([complexify(gram(k, pts).entries)[0, 0]])
        return SeparatingFunctional(
            points=pts,
            coefficients=c,
            values=values,
            min_pairwise_gap=math.inf,
            seed=seed,
            tries_used=0,
        )
    G = complexify(gram(k, pts).entries)
    rng = np.random.default_rng(seed)
    best_gap = -math.inf
    for attempt in range(1, max_tries + 1):
        c = rng.standard_normal(n)
        psi = G @ c
        gap = min(
            abs(psi[i] - psi[j]) for i in range(n) for j in range(i + 1, n)
        )
        scale = 1.0 + float(np.max(np.abs(psi)))
        if gap > SEPARATION_GAP_FACTOR * scale:
            return SeparatingFunctional(
                points=pts,
                coefficients=c,
                values=psi,
                min_pairwise_gap=float(gap),
                seed=seed,
                tries_used=attempt,
            )
        best_gap = max(best_gap, gap)
    raise SeparationFailed(best_gap, max_tries)


def vandermonde_independence(values) -> VandermondeReport:
    """Distinct values make the Vandermonde matrix [v_j^i] nonsingular.

    nonsingular iff the min pairwise gap exceeds 1e-10 * (1 + max |value|);
    the condition estimate comes from the explicit matrix.
    """
    v = np.asarray(values, dtype=complex).ravel()
    n = v.size
    if n < 1:
        raise ValueError("need at least one value")
    if n == 1:
        return VandermondeReport(True, math.inf, 1.0)
    gap = min(abs(v[i] - v[j]) for i in range(n) for j in range(i + 1, n))
    scale = 1.0 + float(np.max(np.abs(v)))
    V = np.vander(v, increasing=True).T  # rows are powers 0..n-1
    cond = float(np.linalg.cond(V))
    return VandermondeReport(
        nonsingular=bool(gap > SEPARATION_GAP_FACTOR * scale),
        min_pairwise_gap=float(gap),
        condition_estimate=cond,
    )
