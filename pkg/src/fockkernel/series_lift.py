"""Power series with positive coefficients applied to kernels.

The lifted kernel is evaluated scalar-wise as phi(k(x, y)); exp and geometric
series use their closed forms, explicit coefficient lists use Horner.  Tail
bounds are elementary ratio/geometric comparisons on |k(x, y)|.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import Divergent, TailBoundExceeded
from .kernel_core import KernelSpec, Point, eval_kernel

KIND_EXP = "exp"
KIND_GEOMETRIC = "geometric"
KIND_EXPLICIT = "explicit"

#: margin below the geometric radius inside which diagonals must stay
CONVERGENCE_MARGIN = 1e-12


@dataclass(frozen=True)
class PowerSeries:
    """phi(z) = sum a_n z^n with every a_n > 0.

    Kinds: "exp" (a_n = t^n/n!, entire), "geometric" (a_n = 1, radius 1), and
    "explicit" (finite positive list).  A finite list is a polynomial, so it
    supports the lift but not strictness claims.
    """

    kind: str
    t: float = 1.0
    coefficients: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in (KIND_EXP, KIND_GEOMETRIC, KIND_EXPLICIT):
            raise ValueError(f"unknown series kind {self.kind!r}")
        if self.kind == KIND_EXP and self.t <= 0:
            raise ValueError("exp series needs t > 0")
        if self.kind == KIND_EXPLICIT:
            if not self.coefficients:
                raise ValueError("explicit series needs a nonempty coefficient list")
            if any(a <= 0 for a in self.coefficients):
                raise ValueError("all series coefficients must be positive")

    @staticmethod
    def exp(t: float = 1.0) -> "PowerSeries":
        return PowerSeries(KIND_EXP, t=float(t))

    @staticmethod
    def geometric() -> "PowerSeries":
        return PowerSeries(KIND_GEOMETRIC)

    @staticmethod
    def explicit(coefficients: Sequence[float]) -> "PowerSeries":
        return PowerSeries(KIND_EXPLICIT, coefficients=tuple(float(a) for a in coefficients))

    @property
    def radius(self) -> float:
        return 1.0 if self.kind == KIND_GEOMETRIC else math.inf

    @property
    def strictness_supported(self) -> bool:
        """False for finite lists: a polynomial lift carries no strictness claim."""
        return self.kind != KIND_EXPLICIT

    def coefficient(self, n: int) -> float:
        if self.kind == KIND_EXP:
            if n <= 170:  # factorial exact; direct form is ~1 ulp accurate
                try:
                    return self.t**n / math.factorial(n)
                except OverflowError:
                    pass
            return math.exp(n * math.log(self.t) - math.lgamma(n + 1))
        if self.kind == KIND_GEOMETRIC:
            return 1.0
        return self.coefficients[n] if n < len(self.coefficients) else 0.0

    @staticmethod
    def from_config(cfg: dict) -> "PowerSeries":
        kind = cfg.get("kind")
        if kind == KIND_EXP:
            return PowerSeries.exp(cfg.get("t", 1.0))
        if kind == KIND_GEOMETRIC:
            return PowerSeries.geometric()
        if kind == KIND_EXPLICIT:
            return PowerSeries.explicit(cfg.get("coefficients", ()))
        raise ValueError(f"unknown series config {cfg!r}")

    def to_config(self) -> dict:
        if self.kind == KIND_EXP:
            return {"kind": KIND_EXP, "t": self.t}
        if self.kind == KIND_GEOMETRIC:
            return {"kind": KIND_GEOMETRIC}
        return {"kind": KIND_EXPLICIT, "coefficients": list(self.coefficients)}


@dataclass(frozen=True)
class Truncation:
    """Partial-sum evaluation policy: fixed term count, or auto from a tail tolerance."""

    max_terms: Optional[int] = None
    tail_tol: float = 1e-12


@dataclass(frozen=True)
class LiftedKernel:
    base: KernelSpec
    series: PowerSeries
    truncation: Optional[Truncation] = None


def check_convergence(series: PowerSeries, k: KernelSpec, points) -> bool:
    """True iff every k(x, x) lies strictly inside the series' radius."""
    if series.kind != KIND_GEOMETRIC:
        return True
    for p in points:
        if eval_kernel(k, p, p).real >= 1.0 - CONVERGENCE_MARGIN:
            return False
    return True


def tail_bound(series: PowerSeries, c: float, N: int) -> float:
    """Upper bound for |sum_{n>N} a_n c^n| at c = |k(x, y)|.

    exp:       (tc)^{N+1}/(N+1)! * 1/(1 - tc/(N+2)) when tc < N+2, else +inf
    geometric: c^{N+1}/(1 - c); Divergent at c >= 1
    explicit:  the exact remaining partial sum
    """
    if c < 0:
        raise ValueError("c must be nonnegative")
    if N < 0:
        raise ValueError("N must be nonnegative")
    if c == 0.0:
        return 0.0
    if series.kind == KIND_EXP:
        tc = series.t * c
        if tc >= N + 2:
            return math.inf
        lead = math.exp((N + 1) * math.log(tc) - math.lgamma(N + 2))
        return lead / (1.0 - tc / (N + 2))
    if series.kind == KIND_GEOMETRIC:
        if c >= 1.0:
            raise Divergent(f"geometric series diverges at c = {c:.17g}")
        return c ** (N + 1) / (1.0 - c)
    total = 0.0
    for n in range(N + 1, len(series.coefficients)):
        total += series.coefficients[n] * c**n
    return total


def terms_for_tolerance(series: PowerSeries, c: float, tol: float) -> int:
    """Smallest N with tail_bound(series, c, N) <= tol."""
    if series.kind == KIND_GEOMETRIC and c >= 1.0:
        raise Divergent(f"geometric series diverges at c = {c:.17g}")
    N = 0
    while tail_bound(series, c, N) > tol:
        N += 1
        if N > 100_000:
            raise TailBoundExceeded(
                f"no truncation at tolerance {tol:.3e} within 100000 terms"
            )
    return N


def _horner(series: PowerSeries, z: complex, N: int) -> complex:
    coeffs = [series.coefficient(n) for n in range(N + 1)]
    acc = 0.0 + 0.0j
    for a in reversed(coeffs):
        acc = acc * z + a
    return acc


def lift_eval(L: LiftedKernel, x: Point, y: Point) -> complex:
    """phi(k(x, y)): closed form unless a truncation policy is set."""
    if not check_convergence(L.series, L.base, (x, y)):
        raise Divergent(
            f"diagonal of {L.base.name!r} is outside the series' radius of convergence"
        )
    z = eval_kernel(L.base, x, y)
    s = L.series
    if L.truncation is None:
        if s.kind == KIND_EXP:
            return cmath.exp(s.t * z)
        if s.kind == KIND_GEOMETRIC:
            return 1.0 / (1.0 - z)
        return _horner(s, z, len(s.coefficients) - 1)
    tr = L.truncation
    if tr.max_terms is not None:
        N = tr.max_terms
        if tail_bound(s, abs(z), N) > tr.tail_tol:
            raise TailBoundExceeded(
                f"tail bound at N={N} exceeds tolerance {tr.tail_tol:.3e}"
            )
    else:
        N = terms_for_tolerance(s, abs(z), tr.tail_tol)
    if s.kind == KIND_EXPLICIT:
        N = min(N, len(s.coefficients) - 1)
    return _horner(s, z, N)


def lifted_kernel_spec(
    base: KernelSpec, series: PowerSeries, truncation: Optional[Truncation] = None
) -> KernelSpec:
    """Wrap a lift as a KernelSpec so Gram assembly and certification apply."""
    lifted = LiftedKernel(base, series, truncation)
    label = {"exp": f"exp[t={series.t:g}]", "geometric": "geometric", "explicit": "poly"}[
        series.kind
    ]

    def fn(x: Point, y: Point) -> complex:
        return lift_eval(lifted, x, y)

    return KernelSpec(
        name=f"{label}_lift({base.name})",
        domains=base.domains,
        is_real=base.is_real,
        params=dict(base.params),
        fn=fn,
    )


def exp_lift(base: KernelSpec, t: float = 1.0) -> KernelSpec:
    """exp(t k(x, y)) as a KernelSpec."""
    return lifted_kernel_spec(base, PowerSeries.exp(t))


def gaussian_from_lift(base: KernelSpec, t: float) -> KernelSpec:
    """exp(-t ||k_x - k_y||^2) built from the three-factor product.

    (x, y) |-> exp(-t k(x,x)) exp(2t Re k(x,y)) exp(-t k(y,y)); real-valued, and
    equal to exp(-t * feature_distance_sq(base, x, y)).
    """
    if t <= 0:
        raise ValueError("t must be positive")

    def fn(x: Point, y: Point) -> complex:
        kxx = eval_kernel(base, x, x).real
        kyy = eval_kernel(base, y, y).real
        kxy = eval_kernel(base, x, y)
        return complex(
            math.exp(-t * kxx) * math.exp(2.0 * t * kxy.real) * math.exp(-t * kyy)
        )

    return KernelSpec(
        name=f"feature_gaussian({base.name},t={t:g})",
        domains=base.domains,
        is_real=True,
        params={**base.params, "t_lift": float(t)},
        fn=fn,
    )
