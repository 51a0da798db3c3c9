"""Concrete kernel families: Gaussian, Drury-Arveson, pseudo-hyperbolic, word-metric.

Inner products are linear in the first argument and conjugate-linear in the
second, so k(x, y) = <x, y> is self-adjoint without reinterpretation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import free_group
from .errors import AlphabetMismatch, DimensionMismatch, OutOfDomain
from .kernel_core import (
    DOMAIN_COMPLEX_SCALAR,
    DOMAIN_GROUP_WORD,
    DOMAIN_REAL_VECTOR,
    KernelSpec,
    Point,
)

#: admission margin below the unit-circle boundary where d and the Szego
#: overlap degenerate
DISK_MARGIN = 1e-12


@dataclass(frozen=True)
class DiskPoint:
    """Point of the open unit disk, validated at construction."""

    z: complex

    def __post_init__(self):
        object.__setattr__(self, "z", complex(self.z))
        if abs(self.z) >= 1.0 - DISK_MARGIN:
            raise OutOfDomain(f"|z| = {abs(self.z):.17g} is not inside the unit disk")

    def to_point(self) -> Point:
        return Point.scalar(self.z)


def _as_disk_scalar(p) -> complex:
    """Accept DiskPoint, Point, or raw complex; enforce the disk margin."""
    if isinstance(p, DiskPoint):
        return p.z
    z = complex(p.value) if isinstance(p, Point) else complex(p)
    if abs(z) >= 1.0 - DISK_MARGIN:
        raise OutOfDomain(f"|z| = {abs(z):.17g} is not inside the unit disk")
    return z


def _real_pair(x: Point, y: Point):
    xv, yv = x.as_array(), y.as_array()
    if xv.shape != yv.shape:
        raise DimensionMismatch(f"dimensions differ: {xv.shape[0]} vs {yv.shape[0]}")
    return xv, yv


def gaussian(t: float) -> KernelSpec:
    """k(x, y) = exp(-t ||x - y||^2) on real vectors; values in (0, 1]."""
    if t <= 0:
        raise ValueError("bandwidth t must be positive")

    def fn(x: Point, y: Point) -> complex:
        xv, yv = _real_pair(x, y)
        d = xv - yv
        return complex(math.exp(-t * float(d @ d)))

    return KernelSpec(
        name="gaussian",
        domains=frozenset({DOMAIN_REAL_VECTOR}),
        is_real=True,
        params={"t": float(t)},
        fn=fn,
    )


def dot_kernel(scale: float = 1.0) -> KernelSpec:
    """k(x, y) = scale * <x, y>: the base kernel of the geometric and exp lifts."""

    def fn(x: Point, y: Point) -> complex:
        if x.domain == DOMAIN_REAL_VECTOR:
            xv, yv = _real_pair(x, y)
            return complex(scale * float(xv @ yv))
        return scale * x.value * np.conj(y.value)

    return KernelSpec(
        name="dot",
        domains=frozenset({DOMAIN_REAL_VECTOR, DOMAIN_COMPLEX_SCALAR}),
        is_real=False,
        params={"scale": float(scale)},
        fn=fn,
    )


def drury_arveson() -> KernelSpec:
    """k(x, y) = 1 / (1 - <x, y>) on the open unit ball (real or complex points)."""

    def fn(x: Point, y: Point) -> complex:
        if x.domain == DOMAIN_REAL_VECTOR:
            xv, yv = _real_pair(x, y)
            for v, label in ((xv, "x"), (yv, "y")):
                if float(np.linalg.norm(v)) >= 1.0:
                    raise OutOfDomain(f"||{label}|| >= 1 is outside the unit ball")
            ip = complex(float(xv @ yv))
        else:
            for v, label in ((x.value, "x"), (y.value, "y")):
                if abs(v) >= 1.0:
                    raise OutOfDomain(f"|{label}| >= 1 is outside the unit ball")
            ip = x.value * np.conj(y.value)
        return 1.0 / (1.0 - ip)

    return KernelSpec(
        name="drury_arveson",
        domains=frozenset({DOMAIN_REAL_VECTOR, DOMAIN_COMPLEX_SCALAR}),
        is_real=False,
        params={},
        fn=fn,
    )


def pseudo_hyperbolic_distance(lam, mu) -> float:
    """d(lam, mu) = |(lam - mu) / (1 - conj(mu) lam)| in [0, 1)."""
    a = _as_disk_scalar(lam)
    b = _as_disk_scalar(mu)
    return abs((a - b) / (1.0 - np.conj(b) * a))


def szego_normalized_overlap(lam, mu) -> float:
    """|<s_lam, s_mu>|^2 = (1-|lam|^2)(1-|mu|^2) / |1 - conj(mu) lam|^2."""
    a = _as_disk_scalar(lam)
    b = _as_disk_scalar(mu)
    num = (1.0 - abs(a) ** 2) * (1.0 - abs(b) ** 2)
    return num / abs(1.0 - np.conj(b) * a) ** 2


def ph_base_kernel() -> KernelSpec:
    """k(lam, mu) = -d(lam, mu)^2 + |lam|^2 + |mu|^2; real and symmetric."""

    def fn(x: Point, y: Point) -> complex:
        a = _as_disk_scalar(x)
        b = _as_disk_scalar(y)
        d = pseudo_hyperbolic_distance(a, b)
        return complex(-(d * d) + abs(a) ** 2 + abs(b) ** 2)

    return KernelSpec(
        name="ph_base",
        domains=frozenset({DOMAIN_COMPLEX_SCALAR}),
        is_real=True,
        params={},
        fn=fn,
    )


def ph_gaussian(t: float) -> KernelSpec:
    """K_t(lam, mu) = exp(-t d(lam, mu)^2); values in (0, 1]."""
    if t <= 0:
        raise ValueError("bandwidth t must be positive")

    def fn(x: Point, y: Point) -> complex:
        d = pseudo_hyperbolic_distance(x, y)
        return complex(math.exp(-t * d * d))

    return KernelSpec(
        name="ph_gaussian",
        domains=frozenset({DOMAIN_COMPLEX_SCALAR}),
        is_real=True,
        params={"t": float(t)},
        fn=fn,
    )


def _word_pair(x: Point, y: Point):
    g, h = x.value, y.value
    if g.n_generators != h.n_generators:
        raise AlphabetMismatch(
            f"alphabet sizes differ: {g.n_generators} vs {h.n_generators}"
        )
    return g, h


def word_metric_kernel(t: float) -> KernelSpec:
    """K_t(g, h) = exp(-t |h^-1 g|) with |.| the reduced word length."""
    if t <= 0:
        raise ValueError("bandwidth t must be positive")

    def fn(x: Point, y: Point) -> complex:
        g, h = _word_pair(x, y)
        return complex(math.exp(-t * free_group.word_distance(g, h)))

    return KernelSpec(
        name="word_metric",
        domains=frozenset({DOMAIN_GROUP_WORD}),
        is_real=True,
        params={"t": float(t)},
        fn=fn,
    )


def haagerup_inner_kernel() -> KernelSpec:
    """k(g, h) = <Phi(g), Phi(h)>: integer inner product of prefix-edge embeddings."""

    def fn(x: Point, y: Point) -> complex:
        g, h = _word_pair(x, y)
        return complex(
            free_group.edge_inner(
                free_group.haagerup_embed(g), free_group.haagerup_embed(h)
            )
        )

    return KernelSpec(
        name="haagerup_inner",
        domains=frozenset({DOMAIN_GROUP_WORD}),
        is_real=True,
        params={},
        fn=fn,
    )


#: kernels addressable by name in configs and on the command line
KERNEL_BUILDERS = {
    "gaussian": lambda params: gaussian(params.get("t", 1.0)),
    "drury_arveson": lambda params: drury_arveson(),
    "ph_base": lambda params: ph_base_kernel(),
    "ph_gaussian": lambda params: ph_gaussian(params.get("t", 1.0)),
    "word_metric": lambda params: word_metric_kernel(params.get("t", 1.0)),
    "dot": lambda params: dot_kernel(params.get("scale", 1.0)),
    "haagerup_inner": lambda params: haagerup_inner_kernel(),
}


def kernel_from_config(name: str, params: dict | None = None) -> KernelSpec:
    try:
        builder = KERNEL_BUILDERS[name]
    except KeyError:
        raise ValueError(
            f"unknown kernel {name!r}; expected one of {sorted(KERNEL_BUILDERS)}"
        ) from None
    return builder(params or {})
