"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines and measured values.
"""

import itertools
import json
import math
import time

import mpmath as mp
import numpy as np

from fockkernel import (
    GramMatrix,
    PowerSeries,
    certify_cnd,
    certify_strict,
    drury_arveson,
    edge_dist_sq,
    enumerate_words,
    eval_kernel,
    feature_distance_sq,
    find_separating,
    gaussian,
    gaussian_from_lift,
    default_centers,
    fit,
    ph_base_kernel,
    ph_gaussian,
    pseudo_hyperbolic_distance,
    sample_grid,
    sup_error,
    szego_normalized_overlap,
    vandermonde_independence,
    word_distance,
    word_metric_kernel,
)
from fockkernel.approximator import evaluate_target
from fockkernel.cli import main as cli_main
from fockkernel.free_group import random_word
from fockkernel.series_lift import tail_bound, terms_for_tolerance
from fockkernel.positivity import VERDICT_STRICTLY_POSITIVE

from _util import (
    random_ball_points,
    random_disk_points,
    random_real_points,
    random_word_points,
)


def _line(num, ok, detail):
    print(f"\nCRITERION {num:02d} {'PASS' if ok else 'FAIL'} - {detail}")
    return ok


def test_criterion_01_exact_haagerup_identity():
    start = time.perf_counter()
    failures = 0

    words = enumerate_words(2, 4)
    assert len(words) == 161
    for g, h in itertools.combinations(words, 2):
        if edge_dist_sq(g, h) != word_distance(g, h):
            failures += 1

    rng = np.random.default_rng(1001)
    for _ in range(500):
        g = random_word(rng, 3, int(rng.integers(0, 21)))
        h = random_word(rng, 3, int(rng.integers(0, 21)))
        if edge_dist_sq(g, h) != word_distance(g, h):
            failures += 1

    elapsed = time.perf_counter() - start
    ok = failures == 0 and elapsed < 5.0
    assert _line(
        1, ok, f"161 words exhaustive + 500 random pairs, {failures} failures, {elapsed:.2f}s"
    )


def test_criterion_02_disk_distance_identities():
    start = time.perf_counter()
    rng = np.random.default_rng(1002)
    k = ph_base_kernel()
    worst_szego = 0.0
    worst_feature = 0.0
    for _ in range(200):
        lam, mu = random_disk_points(rng, 2, rmax=0.95, min_sep=0.0)
        d2 = pseudo_hyperbolic_distance(lam.value, mu.value) ** 2
        worst_szego = max(
            worst_szego,
            abs(d2 - (1.0 - szego_normalized_overlap(lam.value, mu.value))),
        )
        worst_feature = max(
            worst_feature, abs(0.5 * feature_distance_sq(k, lam, mu) - d2)
        )
    elapsed = time.perf_counter() - start
    ok = worst_szego <= 1e-12 and worst_feature <= 1e-12 and elapsed < 1.0
    assert _line(
        2,
        ok,
        f"max |d^2-(1-overlap)|={worst_szego:.2e}, max |fd/2-d^2|={worst_feature:.2e}, {elapsed:.2f}s",
    )


def test_criterion_03_strict_positivity_desk_scale():
    start = time.perf_counter()
    rng = np.random.default_rng(1003)
    cases = {
        "gaussian": (gaussian(1.0), lambda n: random_real_points(rng, n)),
        "drury_arveson": (drury_arveson(), lambda n: random_ball_points(rng, n)),
        "ph_gaussian": (ph_gaussian(1.0), lambda n: random_disk_points(rng, n)),
        "word_metric": (word_metric_kernel(1.0), lambda n: random_word_points(rng, n)),
    }
    failures = []
    min_margin = math.inf
    for name, (kernel, sampler) in cases.items():
        for trial in range(20):
            n = int(rng.integers(2, 21))
            pts = sampler(n)
            cert = certify_strict(kernel, pts)
            floor = 1e-10 * cert.max_eigenvalue
            if cert.verdict != VERDICT_STRICTLY_POSITIVE or cert.min_eigenvalue <= floor:
                failures.append((name, trial, n, cert.min_eigenvalue))
            else:
                min_margin = min(min_margin, cert.min_eigenvalue / max(floor, 1e-300))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 30.0
    assert _line(
        3,
        ok,
        f"4 kernels x 20 sets, failures={failures}, min margin over floor {min_margin:.1e}x, {elapsed:.2f}s",
    )


def test_criterion_04_conditional_negativity():
    start = time.perf_counter()
    rng = np.random.default_rng(1004)
    worst = -math.inf
    failures = 0
    for _ in range(20):
        pts = random_disk_points(rng, int(rng.integers(2, 16)), min_sep=0.0)
        n = len(pts)
        psi = np.empty((n, n))
        for i in range(n):
            for j in range(i, n):
                d = pseudo_hyperbolic_distance(pts[i].value, pts[j].value)
                psi[i, j] = psi[j, i] = d * d
        cert = certify_cnd(GramMatrix.from_array(psi, kernel="ph_dist_sq"))
        worst = max(worst, cert.max_projected_eigenvalue)
        if cert.verdict != "conditionally_negative" or cert.max_projected_eigenvalue > 1e-10:
            failures += 1
    elapsed = time.perf_counter() - start
    ok = failures == 0 and elapsed < 5.0
    assert _line(
        4, ok, f"20 sets, max projected eigenvalue {worst:.2e} <= 1e-10, {elapsed:.2f}s"
    )


def test_criterion_05_feature_gaussian_consistency():
    rng = np.random.default_rng(1005)
    cases = {
        "gaussian": (gaussian(1.0), lambda n: random_real_points(rng, n)),
        "drury_arveson": (drury_arveson(), lambda n: random_disk_points(rng, n)),
        "ph_base": (ph_base_kernel(), lambda n: random_disk_points(rng, n)),
        "ph_gaussian": (ph_gaussian(1.0), lambda n: random_disk_points(rng, n)),
        "word_metric": (word_metric_kernel(1.0), lambda n: random_word_points(rng, n)),
    }
    worst_rel = 0.0
    verdicts = []
    for name, (base, sampler) in cases.items():
        t = float(rng.uniform(0.3, 1.5))
        lifted = gaussian_from_lift(base, t)
        for _ in range(100):
            x, y = sampler(2)
            expected = math.exp(-t * feature_distance_sq(base, x, y))
            got = eval_kernel(lifted, x, y).real
            worst_rel = max(worst_rel, abs(got - expected) / abs(expected))
        for n in (12, 20):
            cert = certify_strict(lifted, sampler(n))
            verdicts.append(cert.verdict == VERDICT_STRICTLY_POSITIVE)
    ok = worst_rel <= 1e-12 and all(verdicts)
    assert _line(
        5,
        ok,
        f"5 base kernels x 100 pairs, max rel dev {worst_rel:.2e}; "
        f"{sum(verdicts)}/{len(verdicts)} lifted Grams strictly positive",
    )


def test_criterion_06_truncated_lift_correctness():
    rng = np.random.default_rng(1006)
    mp.mp.dps = 50
    worst_diff = 0.0
    dominated = True
    for _ in range(100):
        t = float(rng.uniform(0.2, 2.0))
        r = float(rng.uniform(0.0, 5.0 / t))
        theta = float(rng.uniform(0.0, 2.0 * math.pi))
        z = complex(r * math.cos(theta), r * math.sin(theta))
        series = PowerSeries.exp(t)
        c = abs(z)
        N = terms_for_tolerance(series, c, 1e-12)
        coeffs = [series.coefficient(n) for n in range(N + 1)]
        acc = 0j
        for a in reversed(coeffs):
            acc = acc * z + a
        closed = complex(np.exp(t * z))
        worst_diff = max(worst_diff, abs(acc - closed))
        # brute-force oracle: the true tail at 50 digits must sit below the bound
        zm = mp.mpc(z.real, z.imag)
        tm = mp.mpf(t)
        partial = mp.mpc(0)
        for n in range(N + 1):
            partial += tm**n * zm**n / mp.factorial(n)
        true_tail = abs(mp.exp(tm * zm) - partial)
        if float(true_tail) > tail_bound(series, c, N):
            dominated = False
    ok = worst_diff <= 1e-12 and dominated
    assert _line(
        6,
        ok,
        f"100 cases |t k|<=5: max |truncated-closed|={worst_diff:.2e}, "
        f"tail bound dominated the true tail: {dominated}",
    )


def test_criterion_07_universal_approximation():
    start = time.perf_counter()
    training = sample_grid([(-1.0, 1.0)], 0.01, "training")
    validation = sample_grid([(-1.0, 1.0)], 0.001, "validation")
    f_train = evaluate_target("sin_pi", training)
    f_val = evaluate_target("sin_pi", validation)

    model = fit(
        f_train, training, default_centers(training, 15),
        form="gaussian_bump", bandwidth=1.0,
    )
    rep = sup_error(model, validation, f_val)

    sups = []
    for n in (5, 10, 20, 40):
        m = fit(
            f_train, training, default_centers(training, n),
            form="gaussian_bump", bandwidth=1.0,
        )
        sups.append(sup_error(m, validation, f_val).sup_error)
    decay_ok = all(nxt <= 1.05 * prev for prev, nxt in zip(sups, sups[1:]))
    elapsed = time.perf_counter() - start

    sup_ok = rep.sup_error < 1e-3
    ok = sup_ok and decay_ok and elapsed < 10.0
    assert _line(
        7,
        ok,
        f"15-center sup_error={rep.sup_error:.6e} (< 1e-3 required: {sup_ok}); "
        f"decay {['%.3e' % s for s in sups]} non-increasing at 5% slack: {decay_ok}; "
        f"{elapsed:.2f}s",
    ), (
        f"15-center sup_error {rep.sup_error:.6e} must be < 1e-3: the exact minimizer "
        f"of the pinned objective (ridge = 1e-10*trace(AtA)/N = {rep.ridge_lambda:.3e}) "
        f"already sits at this error level, so the bound cannot be met without "
        f"changing the pinned ridge"
    )


def test_criterion_08_rescaling_identity():
    from fockkernel import ApproxModel, eval_model_grid, rescale_exp_to_bump
    from fockkernel.approximator import FORM_EXP_KERNEL, scaled_dot_kernel

    rng = np.random.default_rng(1008)
    k2 = scaled_dot_kernel(2.0)
    worst = 0.0
    for _ in range(10):
        centers = rng.uniform(-1.0, 1.0, (5, 2))
        coeffs = rng.standard_normal(5)
        exp_model = ApproxModel(FORM_EXP_KERNEL, centers, coeffs, base_kernel=k2)
        bump_model = rescale_exp_to_bump(exp_model)
        X = rng.uniform(-1.0, 1.0, (100, 2))
        lhs = eval_model_grid(bump_model, X)
        exp_vals = eval_model_grid(exp_model, X)
        rhs = np.exp(-(X**2).sum(axis=1)) * exp_vals
        dev = np.abs(lhs - rhs) / (1.0 + np.abs(exp_vals))
        worst = max(worst, float(dev.max()))
    ok = worst <= 1e-13
    assert _line(8, ok, f"10 models x 100 points, max scaled deviation {worst:.2e} <= 1e-13")


def test_criterion_09_separation_machinery():
    rng = np.random.default_rng(1009)
    successes = 0
    nonsingular = 0
    for trial in range(50):
        n = int(rng.integers(2, 11))
        if trial % 2 == 0:
            kernel = gaussian(1.0)
            pts = random_real_points(rng, n)
        else:
            kernel = drury_arveson()
            pts = random_disk_points(rng, n)
        sep = find_separating(kernel, pts, seed=3000 + trial, max_tries=64)
        successes += 1
        if vandermonde_independence(sep.values).nonsingular:
            nonsingular += 1
    ok = successes == 50 and nonsingular == 50
    assert _line(
        9, ok, f"{successes}/50 separations succeeded, {nonsingular}/50 Vandermonde nonsingular"
    )


def test_criterion_10_deterministic_reports(tmp_path):
    pts = tmp_path / "pts.txt"
    pts.write_text("0\n0.7\n1.9\n")
    disk = tmp_path / "disk.txt"
    disk.write_text("0.1 0.2\n-0.3 0.4\n0.5 -0.1\n")
    words = tmp_path / "words.txt"
    words.write_text("N=2\ne\na1\na2 a1'\n")

    jobs = [
        (["certify", "--kernel", "gaussian", "--t", "1", "--points", str(pts)], "certify.json"),
        (["cnd", "--points", str(disk)], "cnd.json"),
        (["separate", "--kernel", "gaussian", "--points", str(pts), "--seed", "11"], "separate.json"),
        (["lift", "--kernel", "gaussian", "--points", str(pts)], "lift.json"),
        (["embed", "--words", str(words), "--pairs"], "embed.json"),
        (
            ["approximate", "--target", "sin_pi", "--train-h", "0.05",
             "--validate-h", "0.02", "--centers", "8", "--seed", "4"],
            "approximate.json",
        ),
    ]
    identical = []
    for argv, name in jobs:
        runs = []
        for sub in ("a", "b"):
            outdir = tmp_path / sub
            outdir.mkdir(exist_ok=True)
            out = outdir / name
            code = cli_main(argv + ["--out", str(out)])
            assert code == 0, f"{name} exited {code}"
            runs.append(out.read_bytes())
        identical.append(runs[0] == runs[1])
        json.loads(runs[0])  # every report re-parses
    ok = all(identical)
    assert _line(10, ok, f"{sum(identical)}/{len(identical)} seeded reports byte-identical on rerun")
