import json

import pytest

from wulffkit.cli import main


@pytest.fixture
def cache_dir(tmp_path, monkeypatch):
    d = tmp_path / "cache"
    monkeypatch.setenv("WULFFKIT_CACHE_DIR", str(d))
    return d


def write_scene(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def test_body_command(tmp_path, cache_dir):
    scene = write_scene(tmp_path, "b.json",
                        {"body": {"dim": 2, "kind": "ball", "radius": 1.0}})
    out = tmp_path / "out"
    assert main(["body", "--scene", scene, "--out", str(out)]) == 0
    rep = json.loads((out / "body.json").read_text())
    assert rep["seed"] == 0
    assert abs(rep["wulff_area"] - 2 * rep["volume"]) < 1e-8


def test_negative_radius_is_schema_error(tmp_path, cache_dir, capsys):
    scene = write_scene(tmp_path, "b.json",
                        {"body": {"dim": 2, "kind": "ball", "radius": -2.0}})
    assert main(["body", "--scene", scene, "--out", str(tmp_path)]) == 2
    assert "radius" in capsys.readouterr().err


def test_unknown_keys_rejected(tmp_path, cache_dir):
    scene = write_scene(tmp_path, "b.json",
                        {"body": {"dim": 2, "kind": "ball", "radius": 1.0},
                         "extra": 1})
    assert main(["body", "--scene", scene, "--out", str(tmp_path)]) == 2


def test_variation_command(tmp_path, cache_dir):
    scene = write_scene(tmp_path, "v.json",
                        {"scene_name": "circle_ball_const"})
    out = tmp_path / "out"
    assert main(["variation", "--scene", scene, "--out", str(out)]) == 0
    rep = json.loads((out / "variation.json").read_text())
    # dilation of the unit disk: A'(0) = 2 pi
    assert abs(rep["a_prime_analytic"] - 6.283185307179586) < 1e-10


def test_profile_command_and_cache(tmp_path, cache_dir):
    scene = write_scene(tmp_path, "p.json", {
        "body": {"dim": 2, "kind": "ball", "radius": 1.0},
        "domain": {"kind": "polygon2d",
                   "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]},
        "grid": 7})
    out1, out2 = tmp_path / "o1", tmp_path / "o2"
    assert main(["profile", "--scene", scene, "--seed", "7",
                 "--out", str(out1)]) == 0
    for name in ("profile.csv", "reports.json", "profile.svg"):
        assert (out1 / name).exists()
    assert main(["profile", "--scene", scene, "--seed", "7",
                 "--out", str(out2)]) == 0
    assert (out1 / "profile.csv").read_bytes() == \
        (out2 / "profile.csv").read_bytes()
    assert "# seed=7" in (out1 / "profile.csv").read_text()


def test_bad_tol_flag(tmp_path, cache_dir):
    assert main(["suite", "--tol", "nonsense"]) == 2


def test_missing_scene_flag(cache_dir):
    assert main(["profile"]) == 2
