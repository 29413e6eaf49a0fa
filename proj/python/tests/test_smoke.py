import json
import os
import pathlib

import pytest

import cubeflat

FIXTURES = pathlib.Path(os.environ.get("CUBEFLAT_FIXTURES", pathlib.Path(__file__).parents[2] / "fixtures"))


def load(name):
    return json.loads((FIXTURES / name).read_text())


def test_figure1_is_not_cocompact():
    report = cubeflat.dichotomy(load("figure1.json"), rank=1, radius=8)
    assert report["verdict"] == "NonCocompact"
    assert report["witness"]["kind"] == "SemiCrossingWitness"
    assert [p["min_displacement"] for p in report["witness"]["pushoffs"]] == [1, 2, 3]


def test_standard_grid_is_a_product():
    report = cubeflat.dichotomy(load("standard-grid.json"), rank=2, radius=4)
    assert report["verdict"] == "ProductOfQuasilines"
    assert report["hull_vertex_count"] == 81


def test_dual_of_two_crossing_walls_is_a_square():
    c = cubeflat.dual({"points": 4, "walls": [[0, 1], [0, 2]]})
    assert c["vertices"] == 4
    assert len(c["edges"]) == 4


def test_obstruction_fires_on_three_directions():
    r = cubeflat.obstruct(load("example43.json"))
    assert r["fired"] and r["class_count"] == 3 and r["threshold"] == 3


def test_presentation_text():
    r = cubeflat.obstruct_presentation((FIXTURES / "generic-p3-r2.txt").read_text())
    assert r["class_count"] == 4 and r["fired"]


def test_validation_error_names_lemma():
    data = load("figure1.json")
    data["classes"][0]["crossing"]["(1,0)"] = {"kind": "atleast", "lo": 0}
    data["classes"][0]["crossing"]["(0,1)"] = {"kind": "atleast", "lo": 0}
    with pytest.raises(cubeflat.ValidationError) as info:
        cubeflat.validate(data)
    assert info.value.args[1] == "PartialOrderAntisymmetry"


def test_hnf_and_binomial():
    assert cubeflat.hnf(2, [[2, 0], [1, 1]]) == [[1, 1], [0, 2]]
    assert cubeflat.binomial(3, 1) == 3


def test_run_reports_io_error():
    code, report = cubeflat.run("classify", [FIXTURES / "missing.json"])
    assert code == 1
    assert report["status"] == "io-error"
