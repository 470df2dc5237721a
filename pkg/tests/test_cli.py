import csv
import io
import json

import pytest

from endtn.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestEnumerate:
    def test_json(self, capsys):
        code, out, _ = run(capsys, "enumerate", "--n", "2", "--format", "json")
        assert code == 0
        data = json.loads(out)
        assert len(data) == 7
        assert {row["component"] for row in data} <= {"Aut", "E_1", "E_2", "C"}

    def test_csv_columns(self, capsys):
        code, out, _ = run(capsys, "enumerate", "--n", "3", "--format", "csv")
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["element", "rank", "type", "component"]
        assert len(rows) == 41

    def test_deterministic(self, capsys):
        _, first, _ = run(capsys, "enumerate", "--n", "3", "--format", "json")
        _, second, _ = run(capsys, "enumerate", "--n", "3", "--format", "json")
        assert first == second

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "out.json"
        code, out, _ = run(
            capsys, "enumerate", "--n", "2", "--format", "json",
            "--output", str(target),
        )
        assert code == 0 and out == ""
        assert len(json.loads(target.read_text())) == 7


class TestVerification:
    def test_verify_mult_exhaustive(self, capsys):
        code, out, _ = run(capsys, "verify-mult", "--n", "3")
        assert code == 0
        assert "all pairs agree" in out

    def test_verify_mult_sampled_deterministic(self, capsys):
        args = ("verify-mult", "--n", "5", "--samples", "2000", "--seed", "11")
        code1, out1, _ = run(capsys, *args)
        code2, out2, _ = run(capsys, *args)
        assert code1 == code2 == 0 and out1 == out2

    def test_counts_with_brute(self, capsys):
        code, out, _ = run(
            capsys, "counts", "--n", "3", "--verify", "--format", "csv"
        )
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["t", "formula", "constructive", "brute"]
        for row in rows[1:]:
            assert row[1] == row[2] == row[3]

    def test_presentation_check(self, capsys):
        code, out, _ = run(
            capsys, "presentation-check", "--n", "5", "--samples", "50"
        )
        assert code == 0 and "all sound" in out


class TestStructureVerbs:
    def test_green_single_relation(self, capsys):
        code, out, _ = run(
            capsys, "green", "--n", "3", "--relation", "L", "--format", "json"
        )
        assert code == 0
        data = json.loads(out)
        assert data[0]["relation"] == "L"

    def test_extended_summary(self, capsys):
        code, out, _ = run(capsys, "extended", "--n", "3")
        assert code == 0
        assert "left_abundant" in out

    def test_ideals(self, capsys):
        code, out, _ = run(capsys, "ideals", "--n", "3", "--format", "json")
        data = json.loads(out)
        assert code == 0 and len(data) == 7

    def test_idempotents(self, capsys):
        code, out, _ = run(capsys, "idempotents", "--n", "4", "--format", "csv")
        rows = {r[0]: r[1] for r in csv.reader(io.StringIO(out)) if r}
        assert rows["E_7"] == "4"

    def test_regular(self, capsys):
        code, out, _ = run(capsys, "regular", "--n", "3", "--format", "csv")
        assert code == 0
        assert len(out.strip().splitlines()) == 1 + 28

    def test_gens(self, capsys):
        code, out, _ = run(capsys, "gens", "--n", "5", "--format", "json")
        data = json.loads(out)
        assert code == 0
        assert data["size"] == 3 + data["r_3"] + data["r_2"]

    def test_fix(self, capsys):
        code, out, _ = run(
            capsys, "fix", "--n", "5", "--t", "1 3 2 1 5", "--e", "1 1 1 1 1"
        )
        assert code == 0
        assert out.strip().splitlines()[1:] == ["1 2 3 4 5", "1 3 2 4 5"]


class TestExitCodes:
    def test_capacity(self, capsys):
        code, _, err = run(capsys, "enumerate", "--n", "9")
        assert code == 3 and "capacity" in err

    def test_usage_bad_relation(self, capsys):
        code, _, err = run(capsys, "green", "--n", "3", "--relation", "Q")
        assert code == 2 and "unknown" in err

    def test_usage_bad_flag(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            main(["enumerate", "--n", "not-a-number"])
        assert excinfo.value.code == 2
        capsys.readouterr()

    def test_usage_bad_fix_pair(self, capsys):
        code, _, err = run(
            capsys, "fix", "--n", "3", "--t", "2 3 1", "--e", "1 1 1"
        )
        assert code == 2 and "permissible" in err
