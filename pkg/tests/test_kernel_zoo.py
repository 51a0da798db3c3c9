import math

import numpy as np
import pytest

from fockkernel import (
    AlphabetMismatch,
    DiskPoint,
    OutOfDomain,
    Point,
    certify_psd,
    certify_strict,
    dot_kernel,
    drury_arveson,
    edge_dist_sq,
    eval_kernel,
    feature_distance_sq,
    gaussian,
    gaussian_from_lift,
    gram,
    haagerup_inner_kernel,
    kernel_from_config,
    parse_word,
    ph_base_kernel,
    ph_gaussian,
    pseudo_hyperbolic_distance,
    szego_normalized_overlap,
    word_metric_kernel,
)
from fockkernel.positivity import VERDICT_INDEFINITE, VERDICT_STRICTLY_POSITIVE

from _util import random_disk_points, random_word_points


def test_disk_point_admission():
    DiskPoint(0.999999)
    with pytest.raises(OutOfDomain):
        DiskPoint(1.0)
    with pytest.raises(OutOfDomain):
        DiskPoint(1.0 - 1e-13)
    assert DiskPoint(0.5j).to_point().value == 0.5j


def test_pseudo_hyperbolic_examples(rng):
    assert pseudo_hyperbolic_distance(0.5, -0.5) == pytest.approx(0.8, abs=1e-15)
    for _ in range(20):
        (lam,) = random_disk_points(rng, 1)
        z = lam.value
        assert pseudo_hyperbolic_distance(z, 0.0) == pytest.approx(abs(z), abs=1e-15)
        assert pseudo_hyperbolic_distance(z, z) == 0.0


def test_pseudo_hyperbolic_symmetry_and_range(rng):
    for _ in range(50):
        lam, mu = random_disk_points(rng, 2)
        d = pseudo_hyperbolic_distance(lam.value, mu.value)
        assert 0.0 <= d < 1.0
        assert d == pytest.approx(
            pseudo_hyperbolic_distance(mu.value, lam.value), abs=1e-15
        )


def test_szego_overlap_examples():
    assert szego_normalized_overlap(0.3 + 0.1j, 0.3 + 0.1j) == pytest.approx(1.0, abs=1e-14)
    assert szego_normalized_overlap(0.5, 0.0) == pytest.approx(0.75, abs=1e-15)


def test_szego_overlap_distance_identity(rng):
    # 1 - |<s_lam, s_mu>|^2 == d(lam, mu)^2
    for _ in range(200):
        lam, mu = random_disk_points(rng, 2, rmax=0.95, min_sep=0.0)
        d2 = pseudo_hyperbolic_distance(lam.value, mu.value) ** 2
        assert 1.0 - szego_normalized_overlap(lam.value, mu.value) == pytest.approx(
            d2, abs=1e-12
        )


def test_ph_base_examples(rng):
    k = ph_base_kernel()
    for _ in range(10):
        (lam,) = random_disk_points(rng, 1)
        assert eval_kernel(k, lam, Point.scalar(0.0)).real == pytest.approx(0.0, abs=1e-15)
        assert eval_kernel(k, lam, lam).real == pytest.approx(
            2 * abs(lam.value) ** 2, abs=1e-15
        )


def test_ph_base_gram_not_indefinite(rng):
    k = ph_base_kernel()
    for _ in range(5):
        pts = random_disk_points(rng, 8)
        cert = certify_psd(gram(k, pts))
        assert cert.verdict != VERDICT_INDEFINITE


def test_ph_base_half_feature_distance_is_dist_sq(rng):
    k = ph_base_kernel()
    for _ in range(100):
        lam, mu = random_disk_points(rng, 2, min_sep=0.0)
        d2 = pseudo_hyperbolic_distance(lam.value, mu.value) ** 2
        assert 0.5 * feature_distance_sq(k, lam, mu) == pytest.approx(d2, abs=1e-12)


def test_ph_injectivity_witness(rng):
    # lam != mu  =>  d > 0  =>  the feature vectors of ph_base are distinct
    k = ph_base_kernel()
    for _ in range(30):
        lam, mu = random_disk_points(rng, 2, min_sep=0.01)
        assert pseudo_hyperbolic_distance(lam.value, mu.value) > 0
        assert feature_distance_sq(k, lam, mu) > 0


def test_ph_gaussian_examples(rng):
    k = ph_gaussian(1.0)
    (lam,) = random_disk_points(rng, 1)
    assert eval_kernel(k, lam, lam).real == 1.0
    v = eval_kernel(k, Point.scalar(0.5), Point.scalar(-0.5)).real
    assert v == pytest.approx(math.exp(-0.64), rel=1e-14)


def test_ph_gaussian_strictly_positive_on_disk_points(rng):
    pts = random_disk_points(rng, 8)
    cert = certify_strict(ph_gaussian(1.0), pts)
    assert cert.verdict == VERDICT_STRICTLY_POSITIVE


def test_gaussian_value_range(rng):
    k = gaussian(0.7)
    for _ in range(20):
        x = Point.real(*rng.uniform(-3, 3, 2))
        y = Point.real(*rng.uniform(-3, 3, 2))
        v = eval_kernel(k, x, y).real
        assert 0.0 < v <= 1.0


def test_drury_arveson_strictly_positive_on_ball_points():
    pts = [
        Point.real(0.0, 0.0),
        Point.real(0.5, 0.0),
        Point.real(0.0, 0.5),
        Point.real(-0.3, 0.2),
        Point.real(0.1, -0.4),
    ]
    cert = certify_strict(drury_arveson(), pts)
    assert cert.verdict == VERDICT_STRICTLY_POSITIVE


def test_word_metric_examples():
    k = word_metric_kernel(1.0)
    g = Point.word(parse_word("a1 a2", 2))
    assert eval_kernel(k, g, g).real == 1.0
    a1 = Point.word(parse_word("a1", 2))
    e = Point.word(parse_word("e", 2))
    assert eval_kernel(k, a1, e).real == pytest.approx(math.exp(-1), rel=1e-15)
    a1a2 = Point.word(parse_word("a1 a2", 2))
    assert eval_kernel(k, a1a2, a1).real == pytest.approx(math.exp(-1), rel=1e-15)


def test_word_metric_alphabet_mismatch():
    k = word_metric_kernel(1.0)
    with pytest.raises(AlphabetMismatch):
        eval_kernel(k, Point.word(parse_word("a1", 2)), Point.word(parse_word("a1", 3)))


def test_word_metric_matches_embedding_distance_bitwise(rng):
    # exp(-t ||Phi(g)-Phi(h)||^2) == exp(-t |h^-1 g|): identical float inputs to exp
    t = 0.85
    k = word_metric_kernel(t)
    pts = random_word_points(rng, 10)
    for i in range(len(pts)):
        for j in range(len(pts)):
            g, h = pts[i].value, pts[j].value
            lhs = math.exp(-t * edge_dist_sq(g, h))
            assert eval_kernel(k, pts[i], pts[j]).real == lhs


def test_word_metric_is_feature_gaussian_of_haagerup_inner(rng):
    # the three-factor lift of <Phi(g), Phi(h)> agrees with exp(-t |h^-1 g|)
    t = 0.5
    lifted = gaussian_from_lift(haagerup_inner_kernel(), t)
    k = word_metric_kernel(t)
    pts = random_word_points(rng, 8)
    for i in range(len(pts)):
        for j in range(len(pts)):
            a = eval_kernel(lifted, pts[i], pts[j]).real
            b = eval_kernel(k, pts[i], pts[j]).real
            assert a == pytest.approx(b, rel=1e-12)


def test_word_metric_strictly_positive(rng):
    pts = [Point.word(parse_word(s, 2)) for s in ("e", "a1", "a1 a2")]
    cert = certify_strict(word_metric_kernel(1.0), pts)
    assert cert.verdict == VERDICT_STRICTLY_POSITIVE
    # oracle: the 3x3 matrix exp(-|h^-1 g|) has these distances
    oracle = np.array(
        [
            [1.0, math.exp(-1), math.exp(-2)],
            [math.exp(-1), 1.0, math.exp(-1)],
            [math.exp(-2), math.exp(-1), 1.0],
        ]
    )
    assert np.linalg.eigvalsh(oracle)[0] == pytest.approx(cert.min_eigenvalue, rel=1e-12)


def test_dot_kernel_inner_product_convention():
    k = dot_kernel(1.0)
    x = Point.scalar(0.3 + 0.4j)
    y = Point.scalar(0.1 - 0.2j)
    v = eval_kernel(k, x, y)
    assert v == (0.3 + 0.4j) * np.conj(0.1 - 0.2j)
    w = eval_kernel(k, y, x)
    assert w == np.conj(v)


def test_kernel_from_config():
    k = kernel_from_config("gaussian", {"t": 2.0})
    assert k.params["t"] == 2.0
    assert kernel_from_config("ph_gaussian", {"t": 0.5}).name == "ph_gaussian"
    assert kernel_from_config("drury_arveson").name == "drury_arveson"
    with pytest.raises(ValueError):
        kernel_from_config("mystery")


def test_bandwidth_validation():
    for bad in (0.0, -1.0):
        with pytest.raises(ValueError):
            gaussian(bad)
        with pytest.raises(ValueError):
            ph_gaussian(bad)
        with pytest.raises(ValueError):
            word_metric_kernel(bad)
