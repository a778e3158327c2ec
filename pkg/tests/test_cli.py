import csv
import io
import json

import pytest

from polarlist.cli import main


def _run(capsys, *argv):
    assert main(list(argv)) == 0
    return capsys.readouterr().out


def test_construct(capsys):
    out = json.loads(_run(capsys, "construct", "--N", "64", "--K", "40", "--variant", "fsl", "--nodes"))
    assert len(out["frozen"]) == 24
    assert out["census"] and out["nodes"]


def test_encode_then_decode(capsys, tmp_path):
    enc = json.loads(_run(capsys, "encode", "--N", "64", "--K", "40", "--seed", "3", "--ebn0", "6"))
    assert len(enc["codeword"]) == 64 and len(enc["llr"]) == 64
    path = tmp_path / "llr.json"
    path.write_text(json.dumps({"llr": enc["llr"]}))
    for variant in ("ca-scl", "fsl", "fpl-p", "sota-tsp22"):
        out = _run(capsys, "decode", "--N", "64", "--K", "40", "--variant", variant, "--L", "4", str(path))
        assert out.strip() == enc["msg"]


def test_encode_given_message(capsys):
    enc = json.loads(_run(capsys, "encode", "--N", "16", "--K", "12", "--msg", "1011"))
    assert enc["msg"] == "1011" and len(enc["codeword"]) == 16


def test_simulate_writes_csv_and_json(capsys, tmp_path):
    out = tmp_path / "fer.csv"
    _run(capsys, "simulate", "--N", "64", "--K", "32", "--L", "2", "--variant", "fpl-f", "--ebn0", "1", "2",
         "--max-frames", "100", "--batch", "50", "--seed", "1", "--baseline", "ca-scl", "--out", str(out))
    rows = list(csv.DictReader(out.open()))
    assert [r["snr_db"] for r in rows] == ["1.0", "2.0"]
    assert set(rows[0]) == {"snr_db", "frames", "errors", "fer", "ber", "ci_lo", "ci_hi"}
    doc = json.loads(out.with_suffix(".json").read_text())
    assert doc["variant"] == "fpl-f" and len(doc["points"]) == 2


def test_simulate_reads_config(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"N": 32, "K": 20, "L": 2, "ebn0_db": [3.0], "max_frames": 50, "batch": 50}))
    rows = list(csv.DictReader(io.StringIO(_run(capsys, "simulate", "--config", str(cfg), "--tmax", "1"))))
    assert rows[0]["frames"] == "50"


def test_mcs_gen(capsys):
    sets = json.loads(_run(capsys, "mcs-gen", "--kind", "spc", "--list-size", "8", "--gamma", "0"))
    assert len(sets) == 13 and [] in sets and [1, 2, 3, 4] in sets
    sets = json.loads(_run(capsys, "mcs-gen", "--kind", "spc", "--list-size", "8", "--gamma", "0", "--i-max", "6"))
    assert sorted(map(tuple, sets)) == sorted([(), (1, 2), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4)])
    assert len(json.loads(_run(capsys, "mcs-gen", "--kind", "r1", "--list-size", "4"))) == 5


def test_latency_csv(capsys):
    out = _run(capsys, "latency", "--N", "128", "--K", "96", "--L", "8", "--variants", "fpl-f,sota-tsp22,fsl",
               "--upsilon", "3")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["node_id", "type", "variant", "steps"]
    totals = {r[2]: int(r[3]) for r in rows if r[0] == "total"}
    assert set(totals) == {"fpl-f", "sota-tsp22", "fsl"}
    assert totals["fpl-f"] < totals["sota-tsp22"]


def test_bad_input_is_reported(capsys):
    assert main(["construct", "--N", "48", "--K", "10"]) == 2
    assert "error" in capsys.readouterr().err
    with pytest.raises(SystemExit):
        main(["latency", "--variant", "nope"])


def test_rsr1_rule_option(capsys):
    # both rules decode the same noisy frames; an unknown rule is an argparse error
    rows = {}
    for rule in ("bound", "gap"):
        out = _run(capsys, "simulate", "--N", "128", "--K", "64", "--L", "4", "--variant", "fsl", "--ebn0", "3",
                   "--max-frames", "50", "--seed", "2", "--rsr1-rule", rule)
        rows[rule] = list(csv.DictReader(io.StringIO(out)))[0]
    assert rows["bound"]["frames"] == rows["gap"]["frames"] == "50"
    with pytest.raises(SystemExit):
        main(["simulate", "--rsr1-rule", "threshold"])
