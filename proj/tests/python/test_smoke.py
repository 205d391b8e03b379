import os
from pathlib import Path

import numpy as np
import pytest

import lacircle

SUITES = Path(os.environ.get("LACIRCLE_SUITES_DIR", Path(__file__).resolve().parents[2] / "suites"))


def desk_config():
    return lacircle.DetectorConfig.from_dict({"r-min": 15, "r-max": 100, "beta-accept": 0.3})


def test_detect_single_circle():
    image, truth = lacircle.generate_scene(r_lo=60, r_hi=60, seed=3)
    assert image.shape == (256, 256) and image.dtype == np.uint8
    result = lacircle.detect(image, desk_config(), seed=7)
    assert len(result.circles) == 1
    assert lacircle.error_score(result.circles[0].circle, truth[0]) < 1.0
    again = lacircle.detect(image, desk_config(), seed=7)
    assert result.to_dict(False) == again.to_dict(False)


def test_edge_mask_input_matches_image_input():
    image, _ = lacircle.generate_scene(r_lo=50, r_hi=50, seed=1, noise=0.02)
    cfg = desk_config()
    mask = lacircle.detect_edges(image, cfg.edges)
    assert mask.dtype == np.bool_ and mask.shape == image.shape
    a = lacircle.detect(image, cfg, seed=4).to_dict(False)
    b = lacircle.detect(mask, cfg, seed=4).to_dict(False)
    assert a == b


def test_blank_image_raises():
    with pytest.raises(lacircle.TooFewEdgePoints):
        lacircle.detect(np.full((64, 64), 90, dtype=np.uint8))
    assert issubclass(lacircle.TooFewEdgePoints, lacircle.DetectionError)


def test_geometry():
    c = lacircle.circle_from_triplet((1, 0), (0, 1), (-1, 0))
    assert c.x0 == pytest.approx(0) and c.y0 == pytest.approx(0) and c.r == pytest.approx(1)
    with pytest.raises(lacircle.CollinearPoints):
        lacircle.circle_from_triplet((0, 0), (1, 1), (2, 2))
    points, clipped = lacircle.rasterize_circle(lacircle.Circle(100, 100, 1), 200, 200)
    assert sorted(points) == [(99, 100), (100, 99), (100, 101), (101, 100)] and clipped == 0
    assert lacircle.distinctiveness(lacircle.Circle(10, 10, 50), lacircle.Circle(12, 13, 55)) == 10
    assert lacircle.distinctiveness_threshold(40, 150, 2) == 55


def test_automaton_primitives():
    p = lacircle.lri_update([0.25] * 4, 0, 1.0, 0.1)
    assert p == pytest.approx([0.325, 0.225, 0.225, 0.225])
    assert lacircle.select_action([0.2, 0.3, 0.5], 0.25) == 1


def test_metrics_and_noise():
    assert lacircle.error_score(lacircle.Circle(112, 108, 50), lacircle.Circle(100, 100, 50)) == 1.0
    truth = [lacircle.Circle(50, 50, 30), lacircle.Circle(150, 150, 40)]
    me, es, match = lacircle.match_circles([lacircle.Circle(52, 52, 30)], truth)
    assert me == pytest.approx(1.1) and match == [0, -1]
    assert lacircle.success_rate([0.5, 1.5]) == 50.0
    img = np.full((40, 50), 128, dtype=np.uint8)
    noisy = lacircle.add_salt_pepper(img, 1.0, seed=2)
    assert set(np.unique(noisy)) <= {0, 255}


def test_config_errors():
    with pytest.raises(lacircle.ConfigError):
        lacircle.DetectorConfig.from_dict({"no-such-key": 1})
    cfg = lacircle.DetectorConfig()
    cfg.r_max = 10
    with pytest.raises(lacircle.ConfigError):
        cfg.validate()


def test_benchmark_report():
    report = lacircle.run_benchmark(SUITES / "single_circle.json", trials=3)
    assert report["trials"] == 3
    row = report["rows"][0]
    assert row["sr"] == 100.0
    assert row["elapsed_mean_s"] is None
