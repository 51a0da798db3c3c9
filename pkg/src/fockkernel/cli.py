"""Command-line experiment runner: certification, embedding, lifting, approximation.

Exit codes: 0 verdict matches expectation (or no expectation), 1 verdict
mismatch / failed search, 2 usage or domain errors (machine-readable JSON on
stderr).  Reports are written atomically and contain no timestamps or absolute
paths, so a fixed seed reproduces them byte for byte.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import free_group, positivity, report, series_lift
from .approximator import run_experiment
from .errors import FockKernelError, ParseError, SeparationFailed
from .kernel_core import (
    DOMAIN_COMPLEX_SCALAR,
    DOMAIN_GROUP_WORD,
    DOMAIN_REAL_VECTOR,
    GramMatrix,
    gram,
    read_points,
)
from .kernel_zoo import kernel_from_config, pseudo_hyperbolic_distance


def _kernel_from_args(args):
    params = {}
    if getattr(args, "t", None) is not None:
        params["t"] = args.t
    if getattr(args, "scale", None) is not None:
        params["scale"] = args.scale
    return kernel_from_config(args.kernel, params)


def _points_for_kernel(args, kernel):
    if DOMAIN_GROUP_WORD in kernel.domains:
        domain = DOMAIN_GROUP_WORD
    elif kernel.domains == frozenset({DOMAIN_COMPLEX_SCALAR}):
        domain = DOMAIN_COMPLEX_SCALAR
    elif getattr(args, "points_complex", False):
        domain = DOMAIN_COMPLEX_SCALAR
    else:
        domain = DOMAIN_REAL_VECTOR
    return read_points(args.points, domain)


def _expect_verdict(expected: str | None, actual: str) -> int:
    if expected is None:
        return 0
    return 0 if expected.replace("-", "_") == actual else 1


def _figure_path(out_path: str, suffix: str) -> str:
    stem, _ = os.path.splitext(out_path)
    return f"{stem}_{suffix}.png"


def _print_report(payload):
    print(json.dumps(payload, indent=2, default=report._json_default))


# -- subcommand handlers -------------------------------------------------------


def cmd_certify(args) -> int:
    kernel = _kernel_from_args(args)
    points = _points_for_kernel(args, kernel)
    cert = positivity.certify_strict(kernel, points, tol=args.tol)
    payload = report.write_json_report(
        args.out,
        {
            "command": "certify",
            "points_file": os.path.basename(args.points),
            **cert.to_json_dict(),
            "kernel": kernel.describe(),
        },
    )
    _print_report(payload)
    if args.plot:
        eigs = np.linalg.eigvalsh(gram(kernel, points).entries)
        report.plot_spectrum(
            _figure_path(args.out, "spectrum"),
            eigs,
            tolerance=cert.tolerance,
            title=f"{kernel.name} Gram spectrum (n={cert.n})",
        )
    return _expect_verdict(args.expect, cert.verdict)


def cmd_cnd(args) -> int:
    if not args.matrix and not args.points:
        raise ParseError("cnd needs --points or --matrix")
    if args.matrix:
        rows = np.loadtxt(args.matrix, delimiter=",", ndmin=2)
        M = GramMatrix.from_array(rows, kernel="matrix_file")
        source = os.path.basename(args.matrix)
    else:
        points = read_points(args.points, DOMAIN_COMPLEX_SCALAR)
        n = len(points)
        psi = np.empty((n, n))
        for i in range(n):
            for j in range(i, n):
                d = pseudo_hyperbolic_distance(points[i].value, points[j].value)
                psi[i, j] = psi[j, i] = d * d
        M = GramMatrix.from_array(psi, kernel="ph_dist_sq")
        source = os.path.basename(args.points)
    cert = positivity.certify_cnd(M, tol=args.tol)
    payload = report.write_json_report(
        args.out,
        {"command": "cnd", "source": source, **cert.to_json_dict()},
    )
    _print_report(payload)
    if args.plot:
        Q = positivity.householder_sum_zero_basis(M.n)
        proj = Q.conj().T @ M.entries @ Q
        eigs = np.linalg.eigvalsh(0.5 * (proj + proj.conj().T)) if M.n > 1 else np.zeros(0)
        report.plot_spectrum(
            _figure_path(args.out, "spectrum"),
            eigs,
            tolerance=cert.tolerance,
            title=f"projected spectrum on sum-zero subspace (n={M.n})",
        )
    return _expect_verdict(args.expect, cert.verdict)


def cmd_separate(args) -> int:
    kernel = _kernel_from_args(args)
    points = _points_for_kernel(args, kernel)
    base = {
        "command": "separate",
        "kernel": kernel.describe(),
        "points_file": os.path.basename(args.points),
        "n": len(points),
        "seed": args.seed,
        "max_tries": args.max_tries,
    }
    try:
        sep = positivity.find_separating(
            kernel, points, seed=args.seed, max_tries=args.max_tries
        )
    except SeparationFailed as exc:
        payload = report.write_json_report(
            args.out,
            {
                **base,
                "status": "failed",
                "best_gap": exc.min_gap,
                "tries_used": exc.tries,
            },
        )
        _print_report(payload)
        return 1
    vdm = positivity.vandermonde_independence(sep.values)
    payload = report.write_json_report(
        args.out,
        {
            **base,
            "status": "separated",
            "tries_used": sep.tries_used,
            "min_pairwise_gap": sep.min_pairwise_gap,
            "coefficients": [float(c) for c in sep.coefficients],
            "values": [[z.real, z.imag] for z in sep.values],
            "vandermonde": {
                "nonsingular": vdm.nonsingular,
                "min_pairwise_gap": vdm.min_pairwise_gap,
                "condition_estimate": vdm.condition_estimate,
            },
        },
    )
    _print_report(payload)
    if args.plot:
        report.plot_separation(_figure_path(args.out, "values"), sep.values)
    return 0


def cmd_lift(args) -> int:
    kernel = _kernel_from_args(args)
    points = _points_for_kernel(args, kernel)
    series_cfg = args.series
    if os.path.exists(series_cfg):
        with open(series_cfg, encoding="utf-8") as fh:
            series_cfg = fh.read()
    series = series_lift.PowerSeries.from_config(json.loads(series_cfg))
    convergent = series_lift.check_convergence(series, kernel, points)
    base = {
        "command": "lift",
        "kernel": kernel.describe(),
        "series": series.to_config(),
        "points_file": os.path.basename(args.points),
        "n": len(points),
        "convergent": convergent,
        "strictness_supported": series.strictness_supported,
    }
    if not convergent:
        payload = report.write_json_report(args.out, {**base, "verdict": "divergent"})
        _print_report(payload)
        return 1
    lifted = series_lift.lifted_kernel_spec(kernel, series)
    G = gram(lifted, points)
    cert = positivity.certify_psd(G, tol=args.tol)
    payload = report.write_json_report(
        args.out,
        {
            **base,
            **cert.to_json_dict(),
            "kernel": kernel.describe(),
            "lifted_kernel": lifted.name,
        },
    )
    _print_report(payload)
    if args.csv:
        rows = []
        for i in range(G.n):
            for j in range(G.n):
                v = complex(G.entries[i, j])
                rows.append([i, j, v.real, v.imag])
        report.write_csv(args.csv, ["i", "j", "re", "im"], rows)
    if args.plot:
        report.plot_spectrum(
            _figure_path(args.out, "spectrum"),
            np.linalg.eigvalsh(G.entries),
            tolerance=cert.tolerance,
            title=f"{lifted.name} Gram spectrum (n={G.n})",
        )
    return _expect_verdict(args.expect, cert.verdict)


def cmd_embed(args) -> int:
    n_generators, words = free_group.read_words(args.words)
    embeddings = [free_group.haagerup_embed(w) for w in words]
    rows = []
    deviations = 0
    max_dev = 0
    pairs = 0
    if args.pairs:
        for i in range(len(words)):
            for j in range(i + 1, len(words)):
                d2 = (embeddings[i] - embeddings[j]).norm_sq()
                wl = free_group.word_distance(words[i], words[j])
                equal = d2 == wl
                if not equal:
                    deviations += 1
                    max_dev = max(max_dev, abs(d2 - wl))
                rows.append([str(words[i]), str(words[j]), d2, wl, equal])
                pairs += 1
    else:
        for w, emb in zip(words, embeddings):
            d2 = emb.norm_sq()
            equal = d2 == w.length
            if not equal:
                deviations += 1
                max_dev = max(max_dev, abs(d2 - w.length))
            rows.append([str(w), "e", d2, w.length, equal])
            pairs += 1
    payload = report.write_json_report(
        args.out,
        {
            "command": "embed",
            "words_file": os.path.basename(args.words),
            "n_generators": n_generators,
            "n_words": len(words),
            "pairs_checked": pairs,
            "identity_holds": deviations == 0,
            "deviating_pairs": deviations,
            "max_abs_deviation": max_dev,
        },
    )
    _print_report(payload)
    if args.csv:
        report.write_csv(
            args.csv, ["g", "h", "dist_sq", "word_length", "equal"], rows
        )
    if args.plot:
        report.plot_embedding_check(
            _figure_path(args.out, "identity"),
            [r[3] for r in rows],
            [r[2] for r in rows],
        )
    return 0 if deviations == 0 else 1


def cmd_approximate(args) -> int:
    config = {
        "target": args.target,
        "box": [[args.lo, args.hi]],
        "train_h": args.train_h,
        "validate_h": args.validate_h,
        "centers": {"count": args.centers},
        "form": args.form,
        "bandwidth": args.bandwidth,
        "seed": args.seed,
    }
    if args.ridge is not None:
        config["lambda"] = args.ridge
    if args.kernel is not None:
        params = {}
        if args.scale is not None:
            params["scale"] = args.scale
        if args.t is not None:
            params["t"] = args.t
        config["kernel"] = {"name": args.kernel, "params": params}
    if args.experiment:
        with open(args.experiment, encoding="utf-8") as fh:
            config.update(json.load(fh))
    report_dict, csv_rows, model = run_experiment(config)
    csv_path = args.csv or (os.path.splitext(args.out)[0] + "_data.csv")
    dim = len(config["box"])
    header = [f"x{i}" for i in range(dim)] + ["f", "model", "error"]
    report.write_csv(csv_path, header, csv_rows)
    payload = report.write_json_report(
        args.out,
        {
            "command": "approximate",
            **report_dict,
            "csv": os.path.basename(csv_path),
        },
    )
    _print_report(payload)
    if args.plot:
        if dim == 1:
            xs = [row[0] for row in csv_rows]
            report.plot_fit(
                _figure_path(args.out, "fit"),
                xs,
                [row[-3] for row in csv_rows],
                [row[-2] for row in csv_rows],
            )
        else:
            print("plotting skipped: fit figures are 1-d only", file=sys.stderr)
    return 0


# -- parser ---------------------------------------------------------------------


def _add_kernel_opts(p, default="gaussian"):
    p.add_argument("--kernel", default=default, help="kernel name (see kernel_zoo)")
    p.add_argument("--t", type=float, default=None, help="bandwidth parameter")
    p.add_argument("--scale", type=float, default=None, help="dot-kernel scale")
    p.add_argument(
        "--points-complex",
        action="store_true",
        help="parse the point file as complex scalars for ball kernels",
    )


def _add_common_opts(p, command):
    p.add_argument("--out", default=f"{command}_report.json", help="JSON report path")
    p.add_argument(
        "--plot",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="render figures next to the report",
    )
    p.add_argument(
        "--config",
        default=None,
        help="JSON file whose keys override the command-line flags",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fockkernel",
        description="Kernel positivity certification, series lifts, free-group "
        "embeddings, and Gaussian sup-norm approximation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("certify", help="certify strict positivity of a kernel Gram matrix")
    _add_kernel_opts(p)
    p.add_argument("--points", required=True, help="point file")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument(
        "--expect",
        choices=[
            "strictly-positive",
            "positive-semidefinite",
            "indefinite",
            "not-hermitian",
        ],
        default=None,
    )
    _add_common_opts(p, "certify")
    p.set_defaults(handler=cmd_certify)

    p = sub.add_parser("cnd", help="certify conditional negativity on the sum-zero subspace")
    p.add_argument("--points", help="disk point file; tests the squared pseudo-hyperbolic distance")
    p.add_argument("--matrix", help="CSV file with an explicit Hermitian matrix")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument(
        "--expect",
        choices=["conditionally-negative", "not-conditionally-negative"],
        default=None,
    )
    _add_common_opts(p, "cnd")
    p.set_defaults(handler=cmd_cnd)

    p = sub.add_parser("separate", help="find a separating functional over the points")
    _add_kernel_opts(p)
    p.add_argument("--points", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-tries", type=int, default=64)
    _add_common_opts(p, "separate")
    p.set_defaults(handler=cmd_separate)

    p = sub.add_parser("lift", help="apply a positive power series to a kernel and certify")
    _add_kernel_opts(p)
    p.add_argument("--points", required=True)
    p.add_argument(
        "--series",
        default='{"kind":"exp","t":1.0}',
        help="series config JSON (inline or a file path)",
    )
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--csv", default=None, help="write the lifted Gram matrix as CSV")
    p.add_argument(
        "--expect",
        choices=[
            "strictly-positive",
            "positive-semidefinite",
            "indefinite",
            "not-hermitian",
        ],
        default=None,
    )
    _add_common_opts(p, "lift")
    p.set_defaults(handler=cmd_lift)

    p = sub.add_parser("embed", help="check the prefix-edge embedding distance identity")
    p.add_argument("--words", required=True, help='word file with an "N=<k>" header')
    p.add_argument("--pairs", action="store_true", help="check all unordered pairs")
    p.add_argument("--csv", default=None, help="write the per-pair table as CSV")
    _add_common_opts(p, "embed")
    p.set_defaults(handler=cmd_embed)

    p = sub.add_parser("approximate", help="fit a finite bump/exp-kernel expansion on a box")
    p.add_argument("--target", default="sin_pi", help="named target function")
    p.add_argument("--lo", type=float, default=-1.0)
    p.add_argument("--hi", type=float, default=1.0)
    p.add_argument("--train-h", type=float, default=0.01)
    p.add_argument("--validate-h", type=float, default=0.001)
    p.add_argument("--centers", type=int, default=15)
    p.add_argument("--form", default="gaussian_bump", choices=["gaussian_bump", "exp_kernel"])
    p.add_argument("--bandwidth", type=float, default=1.0)
    p.add_argument("--kernel", default=None, help="base kernel for the exp_kernel form")
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--scale", type=float, default=None)
    p.add_argument("--ridge", type=float, default=None, help="override the default ridge")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", default=None, help="grid data CSV path (default next to the report)")
    p.add_argument(
        "--experiment",
        default=None,
        help="experiment config JSON file; its keys override the flags",
    )
    _add_common_opts(p, "approximate")
    p.set_defaults(handler=cmd_approximate)

    return parser


def _apply_config_overrides(args):
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as fh:
            overrides = json.load(fh)
        if not isinstance(overrides, dict):
            raise ParseError("--config must contain a JSON object")
        for key, value in overrides.items():
            setattr(args, key.replace("-", "_"), value)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config_overrides(args)
        return args.handler(args)
    except (FockKernelError, OSError, ValueError, json.JSONDecodeError) as exc:
        print(report.json_error(exc), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
