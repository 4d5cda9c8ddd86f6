import json
from pathlib import Path

import pytest

import flexdse

FIXTURES = Path(__file__).resolve().parents[2] / "fixtures"


def test_fixtures_match_disk():
    for name, value in flexdse.fixtures().items():
        assert flexdse.load(FIXTURES / name) == value, name


def test_flexion_counts():
    model = {"name": "one", "layers": [{"name": "c", "kind": "CONV2D", "K": 32, "C": 3, "Y": 224, "X": 224, "R": 3, "S": 3}]}
    accel = flexdse.load(FIXTURES / "accels" / "desk" / "FullFlex-0010.json")
    out = flexdse.flexion(model, accel)
    layer = out["layers"][0]
    by_axis = {a["axis"]: a for a in layer["per_axis"]}
    assert by_axis["T"]["w_count"] == 6912
    assert by_axis["P"]["a_count"] == 30


def test_mse_inflex_vs_fullflex():
    model = flexdse.load(FIXTURES / "models" / "tiny_gemv.json")
    inflex = flexdse.mse(model, flexdse.load(FIXTURES / "accels" / "tiny" / "InFlex-0000.json"), seed=1)
    full = flexdse.mse(model, flexdse.load(FIXTURES / "accels" / "tiny" / "FullFlex-1111.json"), seed=1)
    assert full["total_runtime"] <= inflex["total_runtime"]
    again = flexdse.mse(model, flexdse.load(FIXTURES / "accels" / "tiny" / "FullFlex-1111.json"), seed=1)
    assert again == full


def test_evaluate_reports_illegal_mapping():
    layer = {"name": "g", "kind": "GEMM", "M": 4, "N": 4, "K": 4}
    accel = flexdse.load(FIXTURES / "accels" / "tiny" / "FullFlex-1111.json")
    best = flexdse.mse({"name": "m", "layers": [layer]}, accel, mode="exhaustive")
    mapping = best["layers"][0]["mapping"]
    ok = flexdse.evaluate(layer, accel, mapping)
    assert ok["legal"] and ok["cost"]["runtime_cycles"] == best["layers"][0]["cost"]["runtime_cycles"]
    mapping["tiles"]["K"] = 3
    bad = flexdse.evaluate(layer, accel, mapping)
    assert not bad["legal"] and bad["reason"].startswith("factor")


def test_overhead_zero_for_inflex():
    inflex = flexdse.overhead(flexdse.load(FIXTURES / "accels" / "desk" / "InFlex-0000.json"))
    full = flexdse.overhead(flexdse.load(FIXTURES / "accels" / "desk" / "FullFlex-1111.json"))
    assert inflex["overhead_fraction"] == 0
    assert 0 < full["overhead_fraction"] < 0.01


def test_experiment_files():
    files = flexdse.run_experiment(FIXTURES / "experiments" / "tiny_future_proof.json", jobs=2)
    assert "matrix.csv" in files
    assert json.loads(files["manifest.json"])["baseline_variant"] == "InFlex-0000"


def test_cli_in_process(tmp_path):
    code, _, err = flexdse.run_cli("flexion", "--model", FIXTURES / "models" / "nope.json",
                                   "--accel", FIXTURES / "accels" / "tiny" / "InFlex-0000.json")
    assert code == 1 and "does not exist" in err
    code, out, _ = flexdse.run_cli("--help")
    assert code == 0 and "flexion" in out


def test_validation_error_maps_to_value_error():
    with pytest.raises(ValueError):
        flexdse.mse({"name": "m", "layers": []}, flexdse.load(FIXTURES / "accels" / "tiny" / "InFlex-0000.json"))
