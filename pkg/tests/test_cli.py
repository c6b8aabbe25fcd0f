"""End-to-end CLI tests: file contracts, determinism, exit codes."""

import json
import os

import pytest

from gfs.cli import main


def run_cli(tmp_path, *argv):
    code = main([str(a) for a in argv])
    return code


def read_meta(prefix):
    with open(f"{prefix}.meta.json", encoding="utf-8") as fh:
        return json.load(fh)


def read_csv(prefix):
    with open(f"{prefix}.csv", encoding="utf-8") as fh:
        return fh.read()


def test_decay_run(tmp_path):
    out = tmp_path / "w"
    assert run_cli(tmp_path, "decay", "--system", "walsh", "--N", "128", "--out", out) == 0
    text = read_csv(out)
    assert text.splitlines()[0] == "n,n_times_sup"
    meta = read_meta(out)
    assert meta["command"] == "decay"
    assert meta["results"]["max"] <= 2.0
    # every flag echoed, defaults included
    assert meta["params"]["N"] == 128
    assert meta["params"]["weight_mode"] == "paper"
    assert meta["params"]["json"] is False
    assert meta["params"]["plot"] is False
    assert meta["params"]["gfs_threads"] == 1


def test_plateau_meta_contains_norm(tmp_path):
    out = tmp_path / "p"
    assert run_cli(tmp_path, "plateau", "--n", "100", "--i", "37", "--out", out) == 0
    meta = read_meta(out)
    assert meta["results"]["norm_A"] == 2.0
    assert meta["results"]["total_variation"] == 1.0
    rows = read_csv(out).splitlines()
    assert rows[0] == "node,left,right"
    assert len(rows) == 5  # header + 4 nodes


def test_lemma_residuals(tmp_path):
    out = tmp_path / "l"
    assert run_cli(tmp_path, "lemma", "--n", "7", "--out", out) == 0
    meta = read_meta(out)
    assert meta["results"]["max_abs_residual"] <= 1e-10
    assert meta["results"]["cases"] == 162  # 6 functions x 3 systems x 9 g


def test_coeffs_default_naming(tmp_path):
    os.chdir(tmp_path)
    assert run_cli(tmp_path, "coeffs", "--system", "walsh", "--function", "identity", "--N", "8") == 0
    assert (tmp_path / "identity__walsh__N8.csv").exists()
    assert (tmp_path / "identity__walsh__N8.meta.json").exists()
    lines = (tmp_path / "identity__walsh__N8.csv").read_text().splitlines()
    assert lines[0] == "n,coefficient"
    assert lines[1] == "1,-0.25"


def test_coeffs_inline_and_file_function(tmp_path):
    inline = '{"nodes": [0.0, 1.0], "right": [0.0], "left": [2.0]}'
    out = tmp_path / "inline"
    assert run_cli(tmp_path, "coeffs", "--system", "trig", "--function", inline,
                   "--N", "4", "--out", out) == 0
    spec_file = tmp_path / "fn.json"
    spec_file.write_text(inline, encoding="utf-8")
    out2 = tmp_path / "fromfile"
    assert run_cli(tmp_path, "coeffs", "--system", "trig", "--function", f"@{spec_file}",
                   "--N", "4", "--out", out2) == 0
    assert read_csv(out)[read_csv(out).index("\n"):] == read_csv(out2)[read_csv(out2).index("\n"):]


def test_byte_identical_reruns(tmp_path):
    fixtures = [
        ("decay", "--system", "walsh", "--N", "64"),
        ("ratio", "--system", "walsh", "--sequence", "random", "--seed", "42", "--n-list", "16,64"),
        ("subseq", "--system", "haar", "--K", "6"),
        ("parseval", "--system", "haar+const", "--x", "0.3333333333333333", "--N", "256"),
        ("converge", "--system", "walsh", "--function", "step13", "--multiplier", "power:0.4",
         "--n-list", "16,32,64", "--grid-size", "16"),
    ]
    for i, fixture in enumerate(fixtures):
        a = tmp_path / f"a{i}"
        b = tmp_path / f"b{i}"
        assert run_cli(tmp_path, *fixture, "--out", a) == 0
        assert run_cli(tmp_path, *fixture, "--out", b) == 0
        assert read_csv(a) == read_csv(b)
        ma, mb = read_meta(a), read_meta(b)
        ma["params"].pop("out"), mb["params"].pop("out")
        assert ma == mb


def test_csv_numbers_roundtrip(tmp_path):
    out = tmp_path / "r"
    assert run_cli(tmp_path, "ratio", "--system", "walsh", "--sequence", "random", "--seed", "7",
                   "--n-list", "16", "--out", out) == 0
    header, row = read_csv(out).splitlines()
    cells = row.split(",")
    meta = read_meta(out)
    assert float(cells[3]) == meta["results"]["max_ratio"]  # 17 digits round-trip


def test_ratio_warning_path(tmp_path):
    out = tmp_path / "z"
    assert run_cli(tmp_path, "ratio", "--system", "walsh", "--sequence", "unit:1",
                   "--n-list", "2,4", "--out", out) == 0
    meta = read_meta(out)
    assert meta["warning"] == "all-T-zero"
    assert read_csv(out).splitlines() == ["n,G,T,ratio,S,cauchy_gap"]


def test_logsum_and_converge(tmp_path):
    out = tmp_path / "s"
    assert run_cli(tmp_path, "logsum", "--system", "walsh", "--function", "identity",
                   "--multiplier", "const:1", "--N", "4", "--out", out) == 0
    lines = read_csv(out).splitlines()
    assert lines[0] == "n,G,T,ratio,S,cauchy_gap"
    assert lines[-1].startswith("4,,,,0.03125")
    out2 = tmp_path / "c"
    assert run_cli(tmp_path, "converge", "--system", "walsh", "--function", "step13",
                   "--multiplier", "power:0.4", "--n-list", "64,128,256", "--out", out2) == 0
    meta = read_meta(out2)
    assert meta["results"]["consistent_with_convergence"] is True
    assert len(meta["results"]["gaps"]) == 2


def test_un_sweep(tmp_path):
    out = tmp_path / "u"
    assert run_cli(tmp_path, "un", "--system", "walsh", "--sequence", "random", "--seed", "5",
                   "--n-list", "8,16", "--out", out) == 0
    lines = read_csv(out).splitlines()
    assert lines[0] == "n,i,U,G,T"
    assert len(lines) == 3
    # fixed-function mode leaves the ramp column empty
    out2 = tmp_path / "uf"
    assert run_cli(tmp_path, "un", "--system", "walsh", "--sequence", "unit:2", "--function", "identity",
                   "--n-list", "4", "--out", out2) == 0
    row = read_csv(out2).splitlines()[1].split(",")
    assert row[1] == ""
    assert float(row[2]) == -0.125  # reduces to the second coefficient


def test_admissible_command(tmp_path):
    out = tmp_path / "h"
    assert run_cli(tmp_path, "admissible", "--multiplier", "sqrtlog", "--N", "64", "--out", out) == 0
    meta = read_meta(out)
    assert meta["results"] == {"admissible": True, "argmax": 1, "constant": 1.0}


def test_gram_command(tmp_path):
    out = tmp_path / "g"
    assert run_cli(tmp_path, "gram", "--system", "haar", "--N", "8", "--out", out) == 0
    meta = read_meta(out)
    assert meta["results"]["max_abs_deviation"] <= 1e-12
    assert len(read_csv(out).splitlines()) == 65


def test_subseq_selection_payload(tmp_path):
    out = tmp_path / "sel"
    assert run_cli(tmp_path, "subseq", "--system", "walsh", "--K", "3", "--out", out) == 0
    meta = read_meta(out)
    assert meta["results"]["selection"] == {
        "base": "walsh", "K": 3, "indices": [1, 4, 8], "witnesses": [0.5, 0.125, 0.0625],
    }


def test_exit_codes(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["not-a-command"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["decay", "--system", "walsh"])  # missing required flags
    assert exc.value.code == 2
    # precondition violations exit 3
    out = tmp_path / "x"
    assert main(["parseval", "--system", "haar", "--x", "0.5", "--N", "4", "--out", str(out)]) == 3
    assert main(["coeffs", "--system", "walsh", "--function", "nope", "--N", "4",
                 "--out", str(out)]) == 3
    assert main(["subseq", "--system", "haar", "--K", "3", "--scan-cap", "4",
                 "--out", str(out)]) == 3


def test_json_and_plot_outputs(tmp_path):
    out = tmp_path / "full"
    assert run_cli(tmp_path, "decay", "--system", "haar", "--N", "32", "--out", out,
                   "--json", "--plot") == 0
    assert (tmp_path / "full.json").exists()
    assert (tmp_path / "full.png").exists()
    payload = json.loads((tmp_path / "full.json").read_text())
    assert payload["columns"] == ["n", "n_times_sup"]
    assert len(payload["rows"]) == 32


def test_plot_every_report_kind(tmp_path):
    fixtures = [
        ("coeffs", "--system", "walsh", "--function", "identity", "--N", "16"),
        ("gram", "--system", "trig", "--N", "4"),
        ("ratio", "--system", "walsh", "--sequence", "random", "--seed", "1", "--n-list", "8,16"),
        ("logsum", "--system", "walsh", "--function", "identity", "--multiplier", "const:1", "--N", "8"),
        ("converge", "--system", "walsh", "--function", "step13", "--multiplier", "power:0.4",
         "--n-list", "16,32", "--grid-size", "8"),
        ("plateau", "--n", "10", "--i", "3"),
        ("subseq", "--system", "haar", "--K", "4"),
        ("parseval", "--system", "haar+const", "--x", "0.5", "--N", "16"),
        ("un", "--system", "walsh", "--sequence", "random", "--seed", "2", "--n-list", "8"),
        ("lemma", "--n", "3", "--elements", "2"),
        ("admissible", "--multiplier", "const:1", "--N", "32"),
    ]
    for i, fixture in enumerate(fixtures):
        out = tmp_path / f"plot{i}"
        assert run_cli(tmp_path, *fixture, "--out", out, "--plot") == 0
        assert (tmp_path / f"plot{i}.png").stat().st_size > 0


def test_threads_env_does_not_change_output(tmp_path, monkeypatch):
    fixture = ("coeffs", "--system", "haar", "--function", "saw8", "--N", "20")
    a = tmp_path / "t1"
    assert run_cli(tmp_path, *fixture, "--out", a) == 0
    monkeypatch.setenv("GFS_THREADS", "4")
    b = tmp_path / "t4"
    assert run_cli(tmp_path, *fixture, "--out", b) == 0
    ca, cb = read_csv(a), read_csv(b)
    av = [line.split(",")[1] for line in ca.splitlines()[1:]]
    bv = [line.split(",")[1] for line in cb.splitlines()[1:]]
    assert [float(x) for x in av] == pytest.approx([float(x) for x in bv], abs=1e-15)
    assert read_meta(b)["params"]["gfs_threads"] == 4
    monkeypatch.setenv("GFS_THREADS", "zero")
    assert run_cli(tmp_path, *fixture, "--out", tmp_path / "t0") == 3


def test_sequence_table_and_multiplier_table(tmp_path):
    seq = tmp_path / "seq.json"
    seq.write_text(json.dumps([0.5, 0.25, 0.125, 0.0625]), encoding="utf-8")
    mult = tmp_path / "mult.json"
    mult.write_text(json.dumps([1.0, 1.0, 1.0, 1.0]), encoding="utf-8")
    out = tmp_path / "tables"
    assert run_cli(tmp_path, "ratio", "--system", "walsh", "--sequence", f"table:@{seq}",
                   "--multiplier", f"table:@{mult}", "--n-list", "4", "--out", out) == 0
    meta = read_meta(out)
    assert meta["results"]["max_ratio"] is not None
