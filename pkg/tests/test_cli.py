import csv
import io
import json
import subprocess
import sys

import jsonschema
import pytest

from stripsym import model as dm
from stripsym.cli import SCHEMAS, main
from stripsym.sim import analytic_rep, fmt

from conftest import REFERENCE_STATS


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, command, *argv):
    code, out, _ = run(capsys, command, *argv, "--format", "json")
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMAS[command])
    return code, doc


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


# --- stats -------------------------------------------------------------------


def test_stats_all_rows(capsys):
    code, out, _ = run(capsys, "stats", "--families", "all", "--L", "3,4,5")
    assert code == 0
    got = [tuple([r["family"]] + [int(v) for k, v in r.items() if k != "family"]) for r in rows(out)]
    assert got == REFERENCE_STATS


def test_stats_single_row(capsys):
    code, out, _ = run(capsys, "stats", "--families", "XZZX", "--L", "4")
    assert code == 0
    assert out.splitlines()[1] == "XZZX,4,5,1,3,0,0,9,16"


def test_stats_byte_identical(capsys):
    a = run(capsys, "stats", "--families", "all", "--L", "3,4,5")[1]
    b = run(capsys, "stats", "--families", "all", "--L", "3,4,5")[1]
    assert a == b


def test_stats_json(capsys):
    code, doc = run_json(capsys, "stats", "--families", "DSR,CSR", "--L", "5")
    assert code == 0 and len(doc["rows"]) == 2
    assert doc["rows"][0]["n_det"] == 16


def test_stats_bad_family(capsys):
    with pytest.raises(SystemExit) as info:
        main(["stats", "--families", "BOGUS"])
    assert info.value.code == 2


def test_unknown_flag(capsys):
    with pytest.raises(SystemExit) as info:
        main(["stats", "--colour"])
    assert info.value.code == 2


def test_out_file(capsys, tmp_path):
    p = tmp_path / "t.csv"
    assert run(capsys, "stats", "--families", "CSR", "--L", "3", "--out", str(p))[1] == ""
    assert p.read_text().splitlines()[1] == "CSR,3,3,2,2,0,0,6,9"


# --- check -------------------------------------------------------------------


def test_check_family_with_virtual_boundaries(capsys):
    code, out, _ = run(capsys, "check", "--family", "CSR", "--L", "4", "--virtual-boundaries")
    assert code == 0
    [r] = rows(out)
    assert r["condition1"] == r["condition2"] == "1"
    assert r["one_form"] == "1;1;1;1"


def test_check_without_augmentation_fails(capsys):
    assert run(capsys, "check", "--family", "CSR", "--L", "4")[0] == 1


def test_check_nonlocal_fixture(capsys, data_dir):
    code, doc = run_json(capsys, "check", "--file", str(data_dir / "nonlocal.detmodel"))
    assert code == 1
    [r] = doc["rows"]
    assert not r["condition1"] and not r["condition2"] and not r["strip_local"]


def test_check_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "check", "--file", str(tmp_path / "missing.detmodel"))
    assert code == 2 and "missing" in err


def test_check_parse_error(capsys, tmp_path):
    p = tmp_path / "bad.detmodel"
    p.write_text("DETMODEL v1\ndets two\n")
    assert run(capsys, "check", "--file", str(p))[0] == 2


def test_check_needs_source(capsys):
    assert run(capsys, "check", "--family", "CSR")[0] == 2


# --- decode ------------------------------------------------------------------


def test_decode_both(capsys):
    code, doc = run_json(capsys, "decode", "--family", "CSR", "--L", "3", "--defects", "2")
    assert code == 0
    mono, strip = doc["rows"]
    assert mono["correction"] == strip["correction"]
    assert mono["weight"] == 1


def test_decode_file_syndrome(capsys, data_dir):
    code, out, _ = run(capsys, "decode", "--file", str(data_dir / "csr3.detmodel"), "--syndrome", "110000")
    assert code == 0
    assert {r["correction"] for r in rows(out)} == {"000100000"}


@pytest.mark.parametrize(
    "extra",
    [["--syndrome", "10"], ["--syndrome", "1x0000"], ["--defects", "9"], ["--syndrome", "100000", "--defects", "1"]],
)
def test_decode_bad_syndrome(capsys, data_dir, extra):
    assert run(capsys, "decode", "--file", str(data_dir / "csr3.detmodel"), *extra)[0] == 2


def test_decode_stripwise_rejects_nonlocal(capsys, data_dir):
    code = run(capsys, "decode", "--file", str(data_dir / "nonlocal.detmodel"), "--decoder", "stripwise")[0]
    assert code == 2


# --- simulate ----------------------------------------------------------------

SIM = ["simulate", "--family", "DSR", "--L", "5", "--p", "0.1", "--shots", "100000", "--seed", "7"]


def test_simulate_row(capsys):
    code, out, _ = run(capsys, *SIM, "--decoder", "stripwise")
    assert code == 0
    [r] = rows(out)
    assert r["analytic"] == fmt(analytic_rep(5, 0.1))
    assert int(r["shots"]) == 100000


def test_simulate_deterministic(capsys):
    assert run(capsys, *SIM)[1] == run(capsys, *SIM)[1]


def test_simulate_json(capsys):
    code, doc = run_json(capsys, "simulate", "--family", "CSR", "--L", "3", "--p", "0.1,0.2", "--shots", "100", "--seed", "1")
    assert code == 0 and [r["p"] for r in doc["rows"]] == [0.1, 0.2]


@pytest.mark.parametrize("p", ["0.6", "0.5"])
def test_simulate_rejects_large_p(capsys, p):
    assert run(capsys, "simulate", "--family", "DSR", "--L", "3", "--p", p, "--seed", "1")[0] == 2


def test_simulate_requires_seed(capsys):
    with pytest.raises(SystemExit) as info:
        main(["simulate", "--family", "DSR", "--L", "3", "--p", "0.1"])
    assert info.value.code == 2


# --- bench -------------------------------------------------------------------


def test_bench_dsr(capsys):
    code, out, _ = run(capsys, "bench", "--family", "DSR", "--L", "5")
    assert code == 0
    [r] = rows(out)
    assert (r["mono_work"], r["strip_work"], r["ratio"]) == ("256", "44", fmt(256 / 44))


def test_bench_balanced_json(capsys):
    code, doc = run_json(capsys, "bench", "--balanced", "4,4", "--repeats", "1")
    assert code == 0
    [r] = doc["rows"]
    assert r["ratio"] == 4 and r["m"] == 4
    assert set(r["wall_times"]) == {"monolithic", "stripwise"}


def test_bench_bad_alpha(capsys):
    assert run(capsys, "bench", "--family", "DSR", "--L", "3", "--alpha", "1")[0] == 2


# --- deform ------------------------------------------------------------------


def test_deform_x_chain(capsys, tmp_path):
    p = tmp_path / "dets.txt"
    p.write_text("# two strips of X chains\nXXIIII\nIXXIII\nIIIXXI 1\nIIIIXX\n")
    code, doc = run_json(
        capsys, "deform", "--detectors", str(p), "--qubit-strips", "0,0,0,1,1,1", "--cliffords", "H,H"
    )
    assert code == 0
    [r] = doc["rows"]
    assert r["incidence_equal"] and r["deformed_strip_symmetric"]
    assert r["deformed_detectors"][0] == "ZZIIII"


def test_deform_not_bias_shifting(capsys, tmp_path):
    p = tmp_path / "dets.txt"
    p.write_text("ZZ\n")
    code = run(capsys, "deform", "--detectors", str(p), "--qubit-strips", "0,0", "--cliffords", "H", "--parent-axes", "Z")[0]
    assert code == 1


@pytest.mark.parametrize(
    "content,extra",
    [("XQ\n", []), ("XXX\n", []), ("XX\n", ["--cliffords", "H,H"]), ("XIX\n", [])],
)
def test_deform_input_errors(capsys, tmp_path, content, extra):
    p = tmp_path / "dets.txt"
    p.write_text(content)
    qs = "0,0,1" if content.startswith("XIX") else "0,0"
    argv = ["deform", "--detectors", str(p), "--qubit-strips", qs]
    argv += extra or ["--cliffords", "H" if qs == "0,0" else "H,I"]
    assert run(capsys, *argv)[0] == 2


# --- export ------------------------------------------------------------------


def test_export_detmodel_roundtrip(capsys, data_dir):
    code, out, _ = run(capsys, "export", "--family", "CSR", "--L", "3")
    assert code == 0
    assert out == (data_dir / "csr3.detmodel").read_text()


def test_export_json_roundtrip(capsys):
    code, doc = run_json(capsys, "export", "--family", "HCSR", "--L", "4")
    m = dm.DetectorModel(doc["n_det"], tuple(map(tuple, doc["fault_supports"])), tuple(doc["strip_of_detector"]), doc["n_strips"])
    assert dm.strip_stats(m).as_tuple() == (2, 3, 3, 0, 0, 6, 16)


def test_export_csv(capsys):
    code, out, _ = run(capsys, "export", "--family", "CSR", "--L", "2", "--format", "csv")
    assert rows(out) == [
        {"fault": "0", "detector": "0", "strip": "0"},
        {"fault": "1", "detector": "1", "strip": "1"},
        {"fault": "2", "detector": "0", "strip": "0"},
        {"fault": "3", "detector": "1", "strip": "1"},
    ]


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "stripsym", "stats", "--families", "DSR", "--L", "3"], capture_output=True, text=True
    )
    assert res.returncode == 0
    assert res.stdout.splitlines()[1] == "DSR,3,3,1,2,0,0,4,9"
