import csv
import io
import json
from pathlib import Path

import numpy as np
import pytest

from vqsci.cli import main
from vqsci.matrix_model import (
    DeterminantSet,
    HermitianMatrix,
    MatrixFixture,
    save_fixture,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
GOLDEN = str(FIXTURES / "h2_golden.json")


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestEncode:
    def test_golden_three_lines(self, capsys):
        code, out, _ = _run(capsys, "encode", "--matrix", GOLDEN)
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 3
        parsed = {line.split()[2]: float(line.split()[0]) for line in lines}
        assert parsed == {"I": -1.0431, "X": 0.1814, "Z": -0.7835}

    def test_stream_flag_matches_batch(self, capsys):
        code, batch, _ = _run(capsys, "encode", "--matrix", GOLDEN)
        assert code == 0
        code, streamed, _ = _run(capsys, "encode", "--matrix", GOLDEN, "--stream")
        assert code == 0
        assert batch == streamed

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "terms.txt"
        code, out, _ = _run(capsys, "encode", "--matrix", GOLDEN, "--output", str(target))
        assert code == 0
        assert out == ""
        assert len(target.read_text().strip().splitlines()) == 3

    def test_register_override_rejects_undersized_matrix(self, capsys):
        code, _, err = _run(capsys, "encode", "--matrix", GOLDEN, "--qubits", "2")
        assert code == 1
        assert "error" in err

    def test_register_override_with_extension(self, capsys):
        code, out, _ = _run(
            capsys, "encode", "--matrix", GOLDEN, "--qubits", "2", "--padding", "extend"
        )
        assert code == 0
        axes = {line.split()[2] for line in out.strip().splitlines()}
        assert all(len(a) == 2 for a in axes)


class TestSolve:
    def test_exact_json(self, capsys):
        code, out, _ = _run(
            capsys, "solve", "--matrix", GOLDEN, "--qubits", "1", "--layers", "0"
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["mode"] == "exact"
        assert payload["qubits"] == 1
        assert payload["tail_mean_hartree"] == pytest.approx(-1.8473252234293573, abs=1e-6)
        assert payload["iterations_used"] <= 50
        assert "wall_clock_seconds" not in payload

    def test_csv_single_row_scalars_only(self, capsys):
        code, out, _ = _run(
            capsys, "solve", "--matrix", GOLDEN, "--qubits", "1", "--format", "csv"
        )
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert len(rows) == 1
        assert "tail_mean_hartree" in rows[0]
        assert "energy_trace_hartree" not in rows[0]

    def test_seeded_rerun_is_byte_identical(self, capsys, tmp_path):
        first = tmp_path / "a.json"
        second = tmp_path / "b.json"
        argv = [
            "solve", "--matrix", GOLDEN, "--qubits", "1", "--layers", "0",
            "--mode", "sampled", "--shots", "2000", "--seed", "11",
        ]
        assert main(argv + ["--output", str(first)]) == 0
        assert main(argv + ["--output", str(second)]) == 0
        capsys.readouterr()
        assert first.read_bytes() == second.read_bytes()

    def test_seed_changes_sampled_output(self, capsys):
        argv = [
            "solve", "--matrix", GOLDEN, "--qubits", "1", "--layers", "0",
            "--mode", "sampled", "--shots", "2000",
        ]
        code, out_a, _ = _run(capsys, *argv, "--seed", "1")
        assert code == 0
        code, out_b, _ = _run(capsys, *argv, "--seed", "2")
        assert code == 0
        assert out_a != out_b

    def test_noise_and_mitigation_flags(self, capsys):
        code, out, _ = _run(
            capsys, "solve", "--matrix", GOLDEN, "--qubits", "1", "--layers", "0",
            "--mode", "sampled", "--shots", "4000", "--noise", "0.02,0.02",
            "--mitigation", "on",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["delta_sci_hartree"] < 0.05


class TestExitCodes:
    def test_missing_fixture(self, capsys):
        code, _, err = _run(capsys, "solve", "--matrix", "/does/not/exist.json")
        assert code == 1
        assert "vqsci: error" in err

    def test_unknown_flag(self, capsys):
        code, _, err = _run(capsys, "solve", "--matrix", GOLDEN, "--frobnicate")
        assert code == 1
        assert "error" in err

    def test_unknown_subcommand(self, capsys):
        code, _, _ = _run(capsys, "transmogrify")
        assert code == 1

    def test_missing_subcommand(self, capsys):
        code, _, _ = _run(capsys)
        assert code == 1

    def test_malformed_fixture(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        code, _, _ = _run(capsys, "encode", "--matrix", str(bad))
        assert code == 1

    def test_unwritable_output(self, capsys):
        code, _, err = _run(
            capsys, "encode", "--matrix", GOLDEN, "--output", "/no/dir/out.txt"
        )
        assert code == 2
        assert "cannot write output" in err

    def test_bad_noise_format(self, capsys):
        code, _, _ = _run(
            capsys, "solve", "--matrix", GOLDEN, "--mode", "sampled",
            "--noise", "0.02",
        )
        assert code == 1

    def test_help_exits_clean(self, capsys):
        for name in ("encode", "solve", "curve", "study", "resources", "mitigate-demo"):
            code, out, _ = _run(capsys, name, "--help")
            assert code == 0
            assert "--output" in out


class TestResources:
    def test_default_table_csv(self, capsys):
        code, out, _ = _run(capsys, "resources", "--format", "csv")
        assert code == 0
        rows = {row["molecule"]: row for row in csv.DictReader(io.StringIO(out))}
        assert set(rows) == {"H2", "LiH", "BeH2", "H2O", "NH3", "C2H4"}
        assert rows["H2O"]["d_fci"] == "441"
        assert rows["H2O"]["q_sci"] == "5"
        assert rows["C2H4"]["d_fci"] == "9018009"
        assert rows["C2H4"]["q_vqe"] == "28"

    def test_single_molecule_json(self, capsys):
        code, out, _ = _run(capsys, "resources", "--molecule", "NH3")
        assert code == 0
        (payload,) = json.loads(out)
        expected = {
            "molecule": "NH3",
            "n_electrons": 10,
            "n_spin_orbitals": 16,
            "d_fci": 3136,
            "d_sci": 64,
            "q_vqe": 16,
            "q_fci": 12,
            "q_sci": 6,
            "p_upper_sci": 4096,
        }
        assert expected.items() <= payload.items()

    def test_custom_triple(self, capsys):
        code, out, _ = _run(
            capsys, "resources", "--electrons", "16", "--orbitals", "28",
            "--dsci", "4096",
        )
        assert code == 0
        payload = json.loads(out)[0]
        assert payload["q_sci"] == 12
        assert payload["q_fci"] == 24

    def test_partial_custom_flags_rejected(self, capsys):
        code, _, err = _run(capsys, "resources", "--electrons", "16")
        assert code == 1
        assert "together" in err

    def test_unknown_molecule(self, capsys):
        code, _, err = _run(capsys, "resources", "--molecule", "XeF6")
        assert code == 1
        assert "known" in err


class TestSweeps:
    def test_study_csv(self, capsys):
        code, out, _ = _run(
            capsys, "study", "--matrix", GOLDEN, "--q-min", "1", "--q-max", "1",
            "--layers", "0", "--format", "csv",
        )
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert len(rows) == 1
        assert rows[0]["determinant_count"] == "2"
        assert rows[0]["chemically_accurate"] == "True"

    def test_study_bad_range(self, capsys):
        code, _, _ = _run(
            capsys, "study", "--matrix", GOLDEN, "--q-min", "3", "--q-max", "1"
        )
        assert code == 1

    def test_curve_two_fixtures(self, capsys, tmp_path):
        other = tmp_path / "wide.json"
        fixture = MatrixFixture(
            HermitianMatrix(np.array([[-1.5, 0.3], [0.3, -0.4]])),
            DeterminantSet(("20", "02")),
            {"bond_length_angstrom": "1.100"},
        )
        save_fixture(fixture, other)
        code, out, _ = _run(
            capsys, "curve", "--matrix", GOLDEN, str(other), "--qubits", "1",
            "--layers", "0",
        )
        assert code == 0
        rows = json.loads(out)
        assert [row["distance_angstrom"] for row in rows] == [0.745, 1.1]


class TestMitigateDemo:
    def test_reports_bias_pair(self, capsys):
        code, out, _ = _run(
            capsys, "mitigate-demo", "--matrix", GOLDEN, "--noise", "0.02,0.02",
            "--shots", "20000",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["qubits"] == 1
        assert payload["mitigated_bias_hartree"] < payload["unmitigated_bias_hartree"]
        assert payload["bias_ratio"] > 1.0

    def test_noise_is_required(self, capsys):
        code, _, _ = _run(capsys, "mitigate-demo", "--matrix", GOLDEN)
        assert code == 1
