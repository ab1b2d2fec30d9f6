import numpy as np
import pytest

import agglo


def test_single_pixel_growth():
    img = np.zeros((41, 41), dtype=bool)
    img[20, 20] = True
    counts = []
    for element in agglo.schedule():
        counts.append(int(img.sum()))
        img = agglo.dilate(img, "square" if element == "II" else "cross")
    assert counts == [1, 9, 21, 37, 69, 97, 129, 185, 229, 277]


def test_euler_number_paths_agree():
    rng = np.random.default_rng(0)
    for _ in range(50):
        img = rng.random((37, 71)) < rng.uniform(0.05, 0.95)
        for conn in ("8-4", "4-8"):
            assert agglo.euler_number(img, conn) == agglo.euler_by_components(img, conn)


def test_generate_and_rasterize():
    config = agglo.generate_configuration(gamma=0.3, p=0.2, box_size=400, seed=3)
    assert config.centers.shape == (len(config), 2)
    img = agglo.rasterize(config)
    assert img.shape == (400, 400)
    assert agglo.volume_fraction(img) == config.achieved_p
    again = agglo.generate_configuration(gamma=0.3, p=0.2, box_size=400, seed=3)
    assert np.array_equal(again.centers, config.centers)


def test_pipeline_and_delta():
    cal = agglo.calibrate(0.2, box_size=400, seeds=[1, 2, 3])
    assert cal.min <= cal.mean <= cal.max
    img = agglo.rasterize(agglo.generate_configuration(gamma=0.9, p=0.2, box_size=400, seed=5))
    chis, areas = agglo.thicken_trace(img)
    assert len(chis) == 11 and list(areas) == sorted(areas)
    value = agglo.cade(chis, 1, 10)
    assert value == agglo.image_cade(img, 10)
    result = agglo.analyze_image(img, 10, calibration=[cal])
    assert result["cade"] == value
    assert result["delta"] == pytest.approx(agglo.delta_agg(value, cal.mean))
    assert result["delta"] > 0.3
    assert agglo.delta_agg(0, 100.0) == pytest.approx(1.2)


def test_rotation_invariance():
    img = agglo.rasterize(agglo.generate_configuration(gamma=0.6, p=0.25, box_size=300, seed=2))
    assert agglo.image_cade(np.rot90(img), 10) == agglo.image_cade(img, 10)
    assert agglo.euler_number(np.fliplr(img)) == agglo.euler_number(img)


def test_point_statistics():
    pts = np.array([[100.0, 100.0], [130.0, 140.0]])
    assert agglo.clark_evans(pts, 1000.0) == pytest.approx(50.0 / (1000.0 / (2 * np.sqrt(2))))
    e, a, l = agglo.minkowski_reference(2.0)
    assert e == pytest.approx(-np.exp(-2.0))
    assert agglo.euler_radius_curve(pts, [5.0, 30.0], 300) == [2, 1]


def test_io_round_trips(tmp_path):
    config = agglo.generate_configuration(gamma=0.0, p=0.1, box_size=300, seed=1)
    agglo.save_configuration(tmp_path / "c.csv", config)
    assert np.array_equal(agglo.load_configuration(tmp_path / "c.csv").centers, config.centers)
    img = agglo.rasterize(config)[:, :297]
    agglo.save_image(tmp_path / "m.pbm", img)
    assert np.array_equal(agglo.load_image(tmp_path / "m.pbm"), img)


def test_errors():
    with pytest.raises(ValueError):
        agglo.generate_configuration(gamma=0.0, p=0.7)
    with pytest.raises(ValueError):
        agglo.analyze_image(np.zeros((50, 50), dtype=bool), 10)
    with pytest.raises(ValueError):
        agglo.euler_number(np.zeros((3, 3, 3)))


def test_small_experiment():
    report = agglo.run_experiment(p=[0.1], gamma=[0.0, 0.9], seeds=[1, 2], box_size=300)
    assert not report["failures"]
    assert len(report["runs"]) == 4
    zero = [r["delta"] for r in report["runs"] if r["gamma"] == 0.0]
    assert sum(zero) == pytest.approx(0.0, abs=1e-12)
