"""Kernel abstraction over heterogeneous point domains and Gram-matrix assembly.

A kernel is a named, parameterized evaluation rule k(x, y) that is self-adjoint:
k(y, x) = conj(k(x, y)).  Values are complex internally; kernels flagged real
have their imaginary parts checked against a 1e-14 relative floor.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from . import free_group
from .errors import (
    DimensionMismatch,
    DomainMismatch,
    DuplicatePoints,
    NonRealKernel,
    NotAKernelEvidence,
    ParseError,
)
from .free_group import GroupWord

DOMAIN_REAL_VECTOR = "real_vector"
DOMAIN_COMPLEX_SCALAR = "complex_scalar"
DOMAIN_GROUP_WORD = "group_word"

#: two points closer than this (domain-native distance) count as coincident
DISTINCTNESS_TOL = 1e-12

#: relative floor for the imaginary part of a real-flagged kernel value
REAL_IMAG_TOL = 1e-14

THREADS_ENV_VAR = "FOCKKERNEL_THREADS"


@dataclass(frozen=True)
class Point:
    """Tagged value in one of the supported domains."""

    domain: str
    value: Union[tuple, complex, GroupWord]

    @staticmethod
    def real(*coords: float) -> "Point":
        if len(coords) == 1 and isinstance(coords[0], (tuple, list, np.ndarray)):
            coords = tuple(coords[0])
        if len(coords) < 1:
            raise ValueError("real vector needs at least one coordinate")
        return Point(DOMAIN_REAL_VECTOR, tuple(float(c) for c in coords))

    @staticmethod
    def scalar(z: complex) -> "Point":
        return Point(DOMAIN_COMPLEX_SCALAR, complex(z))

    @staticmethod
    def word(w: GroupWord) -> "Point":
        return Point(DOMAIN_GROUP_WORD, w)

    @property
    def dim(self) -> int:
        if self.domain != DOMAIN_REAL_VECTOR:
            raise DomainMismatch("dim is only defined for real vectors")
        return len(self.value)

    def as_array(self) -> np.ndarray:
        if self.domain != DOMAIN_REAL_VECTOR:
            raise DomainMismatch("as_array is only defined for real vectors")
        return np.asarray(self.value, dtype=float)


@dataclass
class KernelSpec:
    """A named kernel with an evaluation contract k(x, y) = conj(k(y, x)).

    ``fn`` receives two Points whose variants were already checked against
    ``domains``; it is responsible for any further constraint (disk radius,
    matching dimension, matching alphabet).
    """

    name: str
    domains: frozenset[str]
    is_real: bool
    params: dict[str, float] = field(default_factory=dict)
    fn: Callable[[Point, Point], complex] = None

    def describe(self) -> dict:
        return {"name": self.name, "params": dict(self.params)}


def eval_kernel(k: KernelSpec, x: Point, y: Point) -> complex:
    """Evaluate k(x, y) after domain checks; complex in general."""
    for p in (x, y):
        if p.domain not in k.domains:
            raise DomainMismatch(
                f"kernel {k.name!r} expects {sorted(k.domains)}, got {p.domain}"
            )
    if x.domain != y.domain:
        raise DomainMismatch("both points must use the same variant")
    value = complex(k.fn(x, y))
    if k.is_real and abs(value.imag) > REAL_IMAG_TOL * (1.0 + abs(value)):
        raise NonRealKernel(
            f"kernel {k.name!r} is flagged real but produced imag {value.imag:.3e}"
        )
    return value


def eval_kernel_real(k: KernelSpec, x: Point, y: Point) -> float:
    """Evaluate a real-flagged kernel and return the real value."""
    if not k.is_real:
        raise NonRealKernel(f"kernel {k.name!r} is not flagged real")
    return eval_kernel(k, x, y).real


@dataclass
class GramMatrix:
    """Hermitian matrix of kernel evaluations over an ordered point list."""

    entries: np.ndarray
    points: Optional[tuple[Point, ...]]
    kernel: str

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.entries)

    @staticmethod
    def from_array(arr, kernel: str = "custom", points=None) -> "GramMatrix":
        a = np.asarray(arr)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
        if not np.iscomplexobj(a):
            a = a.astype(float)
        return GramMatrix(a, tuple(points) if points else None, kernel)


def _thread_count() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV_VAR, "1")))
    except ValueError:
        return 1


def gram(k: KernelSpec, points: Sequence[Point]) -> GramMatrix:
    """Assemble [k(x_i, x_j)]: upper triangle evaluated, lower mirrored by conjugation."""
    pts = tuple(points)
    if not pts:
        raise ValueError("gram needs a nonempty point list")
    n = len(pts)
    dtype = float if k.is_real else complex
    m = np.zeros((n, n), dtype=dtype)

    def fill_row(i):
        for j in range(i, n):
            try:
                v = eval_kernel(k, pts[i], pts[j])
            except Exception as exc:
                raise type(exc)(f"at point pair ({i},{j}): {exc}") from exc
            m[i, j] = v.real if k.is_real else v

    threads = _thread_count()
    if threads > 1 and n >= 4:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(fill_row, range(n)))
    else:
        for i in range(n):
            fill_row(i)

    for i in range(n):
        m[i, i] = m[i, i].real  # Hermitian diagonal
        for j in range(i + 1, n):
            m[j, i] = np.conj(m[i, j])
    return GramMatrix(m, pts, k.name)


def feature_distance_sq(k: KernelSpec, x: Point, y: Point) -> float:
    """||k_x - k_y||^2 = k(x,x) - 2 Re k(x,y) + k(y,y), clamped at zero.

    Both cross evaluations are averaged so the result is exactly symmetric in
    (x, y).  A value below -1e-10 * max(1, |k(x,x)|+|k(y,y)|) is evidence the
    supplied function is not positive semidefinite.
    """
    kxx = eval_kernel(k, x, x).real
    kyy = eval_kernel(k, y, y).real
    re2 = eval_kernel(k, x, y).real + eval_kernel(k, y, x).real
    val = (kxx + kyy) - re2
    scale = max(1.0, abs(kxx) + abs(kyy))
    if val < -1e-10 * scale:
        raise NotAKernelEvidence(
            f"negative squared feature distance {val:.3e} for kernel {k.name!r}"
        )
    return max(val, 0.0)


def point_distance(x: Point, y: Point) -> float:
    """Domain-native distance used by the distinctness predicate."""
    if x.domain != y.domain:
        raise DomainMismatch("cannot compare points of different variants")
    if x.domain == DOMAIN_REAL_VECTOR:
        if len(x.value) != len(y.value):
            raise DimensionMismatch(
                f"vector dimensions differ: {len(x.value)} vs {len(y.value)}"
            )
        return float(np.linalg.norm(x.as_array() - y.as_array()))
    if x.domain == DOMAIN_COMPLEX_SCALAR:
        return abs(x.value - y.value)
    return float(free_group.word_distance(x.value, y.value))


def points_distinct(points: Sequence[Point], tol: float = DISTINCTNESS_TOL):
    """Return None if pairwise distinct, else the first offending index pair."""
    pts = list(points)
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if point_distance(pts[i], pts[j]) <= tol:
                return (i, j)
    return None


def require_distinct(points: Sequence[Point], tol: float = DISTINCTNESS_TOL):
    pair = points_distinct(points, tol)
    if pair is not None:
        raise DuplicatePoints(*pair)


# -- point file format ---------------------------------------------------------
# one point per line; '#' comments and blank lines ignored.
#   real vectors:    whitespace-separated decimals
#   complex scalars: "re im"
#   group words:     free_group word syntax, after a "N=<k>" header line


def read_points(path, domain: str) -> list[Point]:
    if domain == DOMAIN_GROUP_WORD:
        _, words = free_group.read_words(path)
        return [Point.word(w) for w in words]
    with open(path, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh]
    rows = [ln for ln in lines if ln and not ln.startswith("#")]
    points: list[Point] = []
    dim = None
    for ln in rows:
        try:
            nums = [float(tok) for tok in ln.split()]
        except ValueError as exc:
            raise ParseError(f"bad point line {ln!r}") from exc
        if domain == DOMAIN_COMPLEX_SCALAR:
            if len(nums) != 2:
                raise ParseError(
                    f'complex scalar line must be "re im", got {ln!r}'
                )
            points.append(Point.scalar(complex(nums[0], nums[1])))
        elif domain == DOMAIN_REAL_VECTOR:
            if not nums:
                raise ParseError(f"empty point line {ln!r}")
            if dim is None:
                dim = len(nums)
            elif len(nums) != dim:
                raise DimensionMismatch(
                    f"point dimension {len(nums)} differs from first point ({dim})"
                )
            points.append(Point.real(*nums))
        else:
            raise ValueError(f"unknown domain {domain!r}")
    return points
