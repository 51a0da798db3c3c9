"""Sup-norm approximation on a box by finite expansions sum_j c_j exp k(x, a_j).

The compact set is represented by two nested lattices (train/validate); the
validation grid is the error contract.  Coefficients come from ridge-regularized
least squares on the training grid; centers default to an equispaced subset of
the training lattice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .errors import (
    DimensionMismatch,
    DuplicatePoints,
    GridTooLarge,
    NonRealKernel,
    SeparationFailed,
    SolveFailure,
    WrongForm,
)
from .kernel_core import DOMAIN_REAL_VECTOR, KernelSpec, Point, eval_kernel_real
from .kernel_zoo import dot_kernel, gaussian
from . import positivity

FORM_EXP_KERNEL = "exp_kernel"
FORM_GAUSSIAN_BUMP = "gaussian_bump"

DEFAULT_MAX_GRID_POINTS = 1_000_000
#: ridge scale: lambda = RIDGE_FACTOR * trace(AtA) / n_centers
RIDGE_FACTOR = 1e-10

#: named 1-d target functions usable in experiment configs
TARGETS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "sin_pi": lambda x: np.sin(np.pi * x[:, 0]),
    "square": lambda x: x[:, 0] ** 2,
    "exp": lambda x: np.exp(x[:, 0]),
    "zero": lambda x: np.zeros(x.shape[0]),
    "one": lambda x: np.ones(x.shape[0]),
}


@dataclass(frozen=True, eq=False)
class CompactGrid:
    """Deterministic lattice over a box, tagged training or validation."""

    box: tuple[tuple[float, float], ...]
    spacing: float
    points: np.ndarray  # (n_points, dim)
    role: str

    @property
    def n_points(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


def _axis_points(lo: float, hi: float, h: float) -> np.ndarray:
    pts = []
    i = 0
    scale = max(1.0, abs(hi - lo))
    while lo + i * h < hi - 1e-12 * scale:
        pts.append(lo + i * h)
        i += 1
    pts.append(hi)
    return np.asarray(pts)


def sample_grid(
    box, h: float, role: str = "training", max_points: int = DEFAULT_MAX_GRID_POINTS
) -> CompactGrid:
    """Lattice with per-axis step h, always including both endpoints."""
    if h <= 0:
        raise ValueError("spacing h must be positive")
    axes = []
    box_t = []
    total = 1
    for lo, hi in box:
        lo, hi = float(lo), float(hi)
        if not lo < hi:
            raise ValueError(f"box axis needs lo < hi, got [{lo}, {hi}]")
        ax = _axis_points(lo, hi, h)
        axes.append(ax)
        box_t.append((lo, hi))
        total *= ax.size
        if total > max_points:
            raise GridTooLarge(f"lattice would exceed {max_points} points")
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=-1)
    return CompactGrid(tuple(box_t), float(h), pts, role)


def evaluate_target(target: Union[str, Callable], grid: CompactGrid) -> np.ndarray:
    if callable(target):
        return np.asarray([float(target(x)) for x in grid.points])
    try:
        fn = TARGETS[target]
    except KeyError:
        raise ValueError(
            f"unknown target {target!r}; expected one of {sorted(TARGETS)}"
        ) from None
    return fn(grid.points)


@dataclass
class ApproxModel:
    """Finite expansion over centers: Gaussian bumps or exp-of-kernel sections."""

    form: str
    centers: np.ndarray  # (N, d)
    coefficients: np.ndarray  # (N,)
    bandwidth: float = 1.0
    base_kernel: Optional[KernelSpec] = None
    ridge_lambda: float = 0.0
    gram_condition: float = math.nan
    n_training: int = 0
    training_spacing: float = math.nan

    @property
    def n_centers(self) -> int:
        return self.centers.shape[0]

    @property
    def dim(self) -> int:
        return self.centers.shape[1]


@dataclass(frozen=True)
class ApproxReport:
    sup_error: float
    rms_error: float
    gram_condition: float
    ridge_lambda: float
    n_centers: int
    n_training: int
    n_validation: int
    m_k_diagnostic: float

    def to_json_dict(self) -> dict:
        return {
            "sup_error": self.sup_error,
            "rms_error": self.rms_error,
            "gram_condition": self.gram_condition,
            "ridge_lambda": self.ridge_lambda,
            "n_centers": self.n_centers,
            "n_training": self.n_training,
            "n_validation": self.n_validation,
            "m_k_diagnostic": self.m_k_diagnostic,
        }


def _design_matrix(
    X: np.ndarray,
    centers: np.ndarray,
    form: str,
    bandwidth: float,
    kernel: Optional[KernelSpec],
) -> np.ndarray:
    if X.shape[1] != centers.shape[1]:
        raise DimensionMismatch(
            f"point dimension {X.shape[1]} vs center dimension {centers.shape[1]}"
        )
    if form == FORM_GAUSSIAN_BUMP:
        d2 = ((X[:, None, :] - centers[None, :, :]) ** 2).sum(axis=-1)
        return np.exp(-bandwidth * d2)
    if form == FORM_EXP_KERNEL:
        if kernel is None:
            raise ValueError("exp_kernel form needs a base kernel")
        if not kernel.is_real:
            raise NonRealKernel(f"kernel {kernel.name!r} is not flagged real")
        if kernel.name == "dot":  # fast path for the scaled inner product
            scale = kernel.params.get("scale", 1.0)
            return np.exp(scale * (X @ centers.T))
        A = np.empty((X.shape[0], centers.shape[0]))
        cpts = [Point.real(*c) for c in centers]
        for i, x in enumerate(X):
            px = Point.real(*x)
            A[i, :] = [math.exp(eval_kernel_real(kernel, px, pc)) for pc in cpts]
        return A
    raise ValueError(f"unknown form {form!r}")


def scaled_dot_kernel(scale: float = 2.0) -> KernelSpec:
    """Real-flagged scale * <x, y> on real vectors (the rescaling base kernel)."""
    base = dot_kernel(scale)
    return KernelSpec(
        name="dot",
        domains=frozenset({DOMAIN_REAL_VECTOR}),
        is_real=True,
        params={"scale": float(scale)},
        fn=base.fn,
    )


def default_centers(training: CompactGrid, count: int) -> np.ndarray:
    """Equispaced subset of the training lattice (default center policy)."""
    if count < 1:
        raise ValueError("need at least one center")
    idx = np.round(np.linspace(0, training.n_points - 1, count)).astype(int)
    return training.points[idx]


#: centers may overhang each box axis by this fraction of its length
DEFAULT_CENTER_INFLATION = 0.25


def fit(
    f_values: np.ndarray,
    training: CompactGrid,
    centers: np.ndarray,
    *,
    form: str,
    kernel: Optional[KernelSpec] = None,
    bandwidth: float = 1.0,
    ridge: Optional[float] = None,
    center_inflation: float = DEFAULT_CENTER_INFLATION,
) -> ApproxModel:
    """Ridge least squares on the training grid via the normal equations.

    Default ridge is 1e-10 * trace(AtA) / n_centers; pass ridge=0 for plain
    least squares (still solved through the normal equations).  Centers must
    stay within the box inflated per axis by center_inflation.
    """
    f = np.asarray(f_values, dtype=float)
    centers = np.asarray(centers, dtype=float)
    if centers.ndim == 1:
        centers = centers[:, None]
    if f.shape[0] != training.n_points:
        raise DimensionMismatch(
            f"{f.shape[0]} samples for {training.n_points} grid points"
        )
    if centers.shape[1] != len(training.box):
        raise DimensionMismatch(
            f"center dimension {centers.shape[1]} vs box dimension {len(training.box)}"
        )
    for axis, (lo, hi) in enumerate(training.box):
        pad = center_inflation * (hi - lo)
        col = centers[:, axis]
        if np.any(col < lo - pad) or np.any(col > hi + pad):
            raise ValueError(
                f"centers leave the inflated box on axis {axis} "
                f"([{lo - pad:g}, {hi + pad:g}])"
            )
    for i in range(centers.shape[0]):
        for j in range(i + 1, centers.shape[0]):
            if float(np.linalg.norm(centers[i] - centers[j])) <= 1e-12:
                raise DuplicatePoints(i, j, f"centers {i} and {j} coincide")
    if ridge is not None and ridge < 0:
        raise ValueError("ridge must be nonnegative")
    A = _design_matrix(training.points, centers, form, bandwidth, kernel)
    AtA = A.T @ A
    n = centers.shape[0]
    lam = RIDGE_FACTOR * float(np.trace(AtA)) / n if ridge is None else float(ridge)
    system = AtA + lam * np.eye(n)
    try:
        coef = np.linalg.solve(system, A.T @ f)
    except np.linalg.LinAlgError as exc:
        raise SolveFailure(f"normal equations singular beyond ridge repair: {exc}") from exc
    if not np.all(np.isfinite(coef)):
        raise SolveFailure("non-finite coefficients from the normal equations")
    return ApproxModel(
        form=form,
        centers=centers,
        coefficients=coef,
        bandwidth=float(bandwidth),
        base_kernel=kernel,
        ridge_lambda=lam,
        gram_condition=float(np.linalg.cond(system)),
        n_training=training.n_points,
        training_spacing=training.spacing,
    )


def eval_model_grid(m: ApproxModel, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    A = _design_matrix(X, m.centers, m.form, m.bandwidth, m.base_kernel)
    return A @ m.coefficients


def eval_model(m: ApproxModel, x) -> float:
    return float(eval_model_grid(m, np.atleast_2d(np.asarray(x, dtype=float)))[0])


def _m_k_diagnostic(m: ApproxModel, grid: CompactGrid) -> float:
    """sup over the grid of exp(k(x, x) / 2) for the relevant base kernel."""
    if m.form == FORM_EXP_KERNEL and m.base_kernel is not None:
        if m.base_kernel.name == "dot":
            scale = m.base_kernel.params.get("scale", 1.0)
            diag = scale * (grid.points**2).sum(axis=1)
        else:
            diag = np.array(
                [
                    eval_kernel_real(m.base_kernel, Point.real(*x), Point.real(*x))
                    for x in grid.points
                ]
            )
    else:
        # bump form corresponds to the base k(x, y) = 2 <x, y>
        diag = 2.0 * (grid.points**2).sum(axis=1)
    return float(np.exp(0.5 * np.max(diag)))


def sup_error(
    m: ApproxModel, validation: CompactGrid, f_values: np.ndarray
) -> ApproxReport:
    """Max and rms deviation on the validation grid (never the training grid)."""
    if validation.role != "validation":
        raise ValueError("sup_error expects a validation-role grid")
    if math.isfinite(m.training_spacing) and validation.spacing >= m.training_spacing:
        raise ValueError(
            "validation spacing must be strictly finer than training spacing"
        )
    f = np.asarray(f_values, dtype=float)
    if f.shape[0] != validation.n_points:
        raise DimensionMismatch(
            f"{f.shape[0]} samples for {validation.n_points} grid points"
        )
    resid = eval_model_grid(m, validation.points) - f
    return ApproxReport(
        sup_error=float(np.max(np.abs(resid))),
        rms_error=float(np.sqrt(np.mean(resid**2))),
        gram_condition=m.gram_condition,
        ridge_lambda=m.ridge_lambda,
        n_centers=m.n_centers,
        n_training=m.n_training,
        n_validation=validation.n_points,
        m_k_diagnostic=_m_k_diagnostic(m, validation),
    )


def rescale_exp_to_bump(m: ApproxModel) -> ApproxModel:
    """Convert sum d_j exp(2<x, a_j>) to sum c_j exp(-||x - a_j||^2), c_j = d_j e^{||a_j||^2}.

    Pointwise, bump_model(x) = e^{-||x||^2} * exp_model(x) exactly.
    """
    if m.form != FORM_EXP_KERNEL:
        raise WrongForm("rescaling needs an exp_kernel model")
    k = m.base_kernel
    if k is None or k.name != "dot" or k.params.get("scale") != 2.0:
        raise WrongForm("rescaling needs base kernel k(x, y) = 2<x, y>")
    c = m.coefficients * np.exp((m.centers**2).sum(axis=1))
    return ApproxModel(
        form=FORM_GAUSSIAN_BUMP,
        centers=m.centers.copy(),
        coefficients=c,
        bandwidth=1.0,
        base_kernel=None,
        ridge_lambda=m.ridge_lambda,
        gram_condition=m.gram_condition,
        n_training=m.n_training,
        training_spacing=m.training_spacing,
    )


# -- experiment driver ----------------------------------------------------------


def run_experiment(config: dict):
    """Run one approximation experiment from a config dict.

    Config keys: target (name), box ([[lo, hi], ...]), train_h, validate_h,
    centers ({"count": N} or {"list": [[...], ...]}), form, bandwidth or
    kernel ({"name", "params"}), lambda (optional), seed (optional, for the
    center-separation diagnostic).

    Returns (report_dict, csv_rows, model).
    """
    box = [tuple(ax) for ax in config["box"]]
    training = sample_grid(box, float(config["train_h"]), role="training")
    validation = sample_grid(box, float(config["validate_h"]), role="validation")
    if validation.spacing >= training.spacing:
        raise ValueError("validate_h must be strictly finer than train_h")

    target = config["target"]
    f_train = evaluate_target(target, training)
    f_val = evaluate_target(target, validation)

    centers_cfg = config.get("centers", {"count": 10})
    if "list" in centers_cfg:
        centers = np.asarray(centers_cfg["list"], dtype=float)
        if centers.ndim == 1:
            centers = centers[:, None]
    else:
        centers = default_centers(training, int(centers_cfg["count"]))

    form = config.get("form", FORM_GAUSSIAN_BUMP)
    bandwidth = float(config.get("bandwidth", 1.0))
    kernel = None
    if "kernel" in config:
        from .kernel_zoo import kernel_from_config

        kcfg = config["kernel"]
        kernel = kernel_from_config(kcfg["name"], kcfg.get("params"))
        if kernel.name == "dot":
            kernel = scaled_dot_kernel(kernel.params.get("scale", 1.0))

    ridge = config.get("lambda")
    model = fit(
        f_train,
        training,
        centers,
        form=form,
        kernel=kernel,
        bandwidth=bandwidth,
        ridge=None if ridge is None else float(ridge),
    )
    report = sup_error(model, validation, f_val)

    # opportunistic separation diagnostic on the center set (reported, not enforced)
    sep: dict = {"checked": False}
    if centers.shape[0] >= 2:
        sep_kernel = kernel if form == FORM_EXP_KERNEL and kernel else gaussian(bandwidth)
        try:
            found = positivity.find_separating(
                sep_kernel,
                [Point.real(*c) for c in centers],
                seed=int(config.get("seed", 0)),
            )
            sep = {
                "checked": True,
                "separated": True,
                "min_pairwise_gap": found.min_pairwise_gap,
                "tries_used": found.tries_used,
            }
        except SeparationFailed as exc:
            sep = {
                "checked": True,
                "separated": False,
                "min_pairwise_gap": exc.min_gap,
            }

    model_vals = eval_model_grid(model, validation.points)
    csv_rows = [
        list(validation.points[i]) + [float(f_val[i]), float(model_vals[i]), float(model_vals[i] - f_val[i])]
        for i in range(validation.n_points)
    ]

    report_dict = {
        "target": target if isinstance(target, str) else "custom",
        "box": [list(ax) for ax in box],
        "train_h": training.spacing,
        "validate_h": validation.spacing,
        "form": form,
        "bandwidth": bandwidth,
        "kernel": kernel.describe() if kernel else None,
        "centers": [list(c) for c in centers],
        "center_separation": sep,
        **report.to_json_dict(),
    }
    return report_dict, csv_rows, model
