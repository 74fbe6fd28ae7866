import io
import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from modsums.cli import flatten, parse_range, run
from modsums.schemas import envelope_schema

GOLDEN = Path(__file__).parent / "golden"


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def envelope(*argv):
    code, out, err = invoke(*argv)
    assert code == 0, err
    doc = json.loads(out)
    jsonschema.validate(doc, envelope_schema(argv[0]))
    return doc


class TestBound:
    def test_wraparound(self):
        assert envelope("bound", "--n", "6", "--k", "1", "--q", "3")["result"]["value"] == "22"

    def test_small_window_regime(self):
        assert envelope("bound", "--n", "4", "--k", "1", "--q", "9")["result"]["value"] == "6"

    def test_k_exceeds_q(self):
        code, out, err = invoke("bound", "--n", "4", "--k", "5", "--q", "3")
        assert code == 2 and out == ""
        assert "k exceeds q" in err

    @pytest.mark.parametrize(
        "kind,args,value",
        [("cor2", ["--n", "4", "--q", "3"], "5"), ("cor3", ["--n", "3", "--k", "1", "--q", "4"], "4")],
    )
    def test_kinds(self, kind, args, value):
        doc = envelope("bound", "--kind", kind, *args, "--witness")
        assert doc["result"]["value"] == value
        assert doc["result"]["witness"] is not None

    def test_witness(self):
        w = envelope("bound", "--n", "6", "--q", "3", "--witness")["result"]["witness"]
        assert w == {"configuration": {"q": "3", "a": ["1", "1", "1", "2", "2", "2"]}, "target": ["0"]}

    def test_big_integers_are_strings(self):
        doc = envelope("bound", "--n", "300", "--k", "2", "--q", "2")
        assert doc["result"]["value"] == str(2**300)


class TestDist:
    def test_subset(self):
        r = envelope("dist", "--q", "3", "--a", "1,1,1,-1,-1,-1")["result"]
        assert r["counts"] == ["22", "21", "21"] and r["total"] == "64"

    def test_signed(self):
        r = envelope("dist", "--q", "4", "--a", "1,1,1", "--signed")["result"]
        assert r["counts"] == ["0", "4", "0", "4"]

    def test_negative_first_entry(self):
        r = envelope("dist", "--q", "5", "--a", "-1")["result"]
        assert r["counts"] == ["1", "0", "0", "0", "1"]

    def test_not_reduced_names_index(self):
        code, _, err = invoke("dist", "--q", "6", "--a", "1,5,2")
        assert code == 2 and "a_3" in err

    def test_garbage(self):
        code, _, err = invoke("dist", "--q", "6", "--a", "1,x")
        assert code == 2


class TestPartition:
    def test_envelope(self):
        r = envelope("partition", "--q", "3", "--a", "1,1", "--cert-bound", "2")["result"]
        assert r["blocks"] == [["0", "1", "3"], ["2"]]
        assert r["verification"]["ok"] is True
        assert r["certificate_bound"] == {"k": "2", "value": "3", "formula": "3"}

    def test_text_matches_golden(self):
        code, out, _ = invoke("partition", "--q", "3", "--a", "1,1,1,-1,-1,-1", "--text")
        assert code == 0
        assert out == (GOLDEN / "q3_n6_wraparound.txt").read_text()

    def test_write(self, tmp_path):
        path = tmp_path / "p.txt"
        code, _, _ = invoke("partition", "--q", "5", "--a", "2,3,1,4", "--write", str(path))
        assert code == 0
        assert path.read_text() == (GOLDEN / "q5_n4_mixed.txt").read_text()

    def test_limit_flag(self):
        code, _, err = invoke("partition", "--q", "3", "--a", "1,1,1", "--limit", "2")
        assert code == 2 and "limit" in err

    def test_limit_env(self, monkeypatch):
        monkeypatch.setenv("MODSUMS_LIMIT", "2")
        assert invoke("partition", "--q", "3", "--a", "1,1,1")[0] == 2
        assert invoke("partition", "--q", "3", "--a", "1,1,1", "--limit", "3")[0] == 0


class TestExtremal:
    def test_split(self):
        r = envelope("extremal", "--kind", "split", "--n", "5", "--k", "2", "--q", "7")["result"]
        assert r["configuration"]["a"] == ["1", "1", "1", "6", "6"]
        assert r["target"] == ["0", "1"] and r["claimed"] == "20"

    def test_cor2(self):
        r = envelope("extremal", "--kind", "cor2", "--n", "4", "--q", "3")["result"]
        assert r["target"] == ["1"] and r["claimed"] == "5"


class TestVerify:
    def test_max_grid(self):
        r = envelope("verify", "--kind", "max", "--n", "1-4", "--q", "2-4")["result"]
        assert r["all_agree"] is True
        assert len(r["results"]) == 4 * (2 + 3 + 4)

    def test_min_skips_small_n(self):
        r = envelope("verify", "--kind", "min", "--n", "1-5", "--q", "4")["result"]
        assert [x["n"] for x in r["results"]] == ["3", "4", "5"]

    def test_signed_selected_k(self):
        r = envelope("verify", "--kind", "signed", "--n", "3", "--q", "4", "--k", "1,3", "--no-prune")["result"]
        assert [x["k"] for x in r["results"]] == ["1", "3"]
        assert all(x["pruned"] is False for x in r["results"])

    def test_certificate(self):
        r = envelope("verify", "--kind", "certificate", "--n", "0-6", "--q", "4")["result"]
        assert r["all_agree"] and len(r["results"]) == 7

    def test_budget_is_usage_error(self):
        code, _, err = invoke("verify", "--n", "8", "--q", "5", "--budget", "10")
        assert code == 2 and "budget" in err

    def test_disagreement_exits_1(self, monkeypatch):
        import modsums.verify as v

        monkeypatch.setattr(v, "theorem1_bound", lambda n, k, q: -1)
        code, out, _ = invoke("verify", "--n", "2", "--q", "3", "--k", "1")
        assert code == 1
        assert json.loads(out)["result"]["all_agree"] is False


class TestUniformity:
    def test_rational(self):
        r = envelope("uniformity", "--n", "4", "--q", "3")["result"]
        assert r["max_deviation"] == {"numerator": "1", "denominator": "24"}

    def test_with_configuration(self):
        r = envelope("uniformity", "--n", "2", "--q", "5", "--a", "1,-1")["result"]
        assert r["counts"] == ["2", "1", "0", "0", "1"]

    def test_length_mismatch(self):
        assert invoke("uniformity", "--n", "3", "--q", "5", "--a", "1")[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["bound", "--n", "9", "--k", "3", "--q", "4", "--witness"],
        ["dist", "--q", "7", "--a", "1,2,3,-3"],
        ["partition", "--q", "4", "--a", "1,3,1", "--cert-bound", "2"],
        ["extremal", "--n", "6", "--k", "2", "--q", "5"],
        ["verify", "--n", "2-3", "--q", "3"],
        ["uniformity", "--n", "10", "--q", "6"],
    ],
)
def test_tsv_encodes_same_values_as_json(argv):
    _, js, _ = invoke(*argv)
    _, tsv, _ = invoke(*argv, "--format", "tsv")
    rows = [line.split("\t") for line in tsv.splitlines()]
    assert [tuple(r) for r in rows] == flatten(json.loads(js))


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["bound", "--n", "3"], ["bound", "--n", "x", "--q", "3"]])
def test_usage_errors_exit_2(argv, capsys):
    assert invoke(*argv)[0] == 2
    assert "usage" in capsys.readouterr().err


def test_parse_range():
    assert parse_range("1-3,7") == [1, 2, 3, 7]
    assert parse_range("5") == [5]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "modsums", "bound", "--n", "6", "--q", "3", "--format", "tsv"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "result.value\t22" in proc.stdout
