import io
import json
from contextlib import redirect_stdout

import numpy as np
import pytest

from qalab import fileio
from qalab.cli import main
from qalab.paulis import SIGMA_X, SIGMA_Z


@pytest.fixture
def files(tmp_path):
    fileio.save_matrix(tmp_path / "sx.json", SIGMA_X.entries)
    fileio.save_matrix(tmp_path / "sz.json", SIGMA_Z.entries)
    fileio.save_matrix(tmp_path / "a.json", np.array([[2, 1], [1, 2]], dtype=complex))
    fileio.save_matrix(tmp_path / "rho0.json", np.diag([1.0, 0.0]).astype(complex))
    fileio.save_matrix(tmp_path / "mixed.json", np.diag([0.5, 0.5]).astype(complex))
    return tmp_path


def run_cli(argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


class TestSpectrum:
    def test_json_output(self, files):
        code, out = run_cli(["spectrum", "--in", str(files / "a.json")])
        assert code == 0
        payload = json.loads(out)
        assert payload["values"] == [1.0, 3.0]
        assert payload["multiplicities"] == [1, 1]

    def test_csv_output(self, files):
        code, out = run_cli(["spectrum", "--in", str(files / "a.json"), "--format", "csv"])
        assert code == 0
        assert out.splitlines()[0] == "value,multiplicity"

    def test_malformed_file_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("not json at all")
        code, _ = run_cli(["spectrum", "--in", str(bad)])
        assert code == 2

    def test_missing_file_exits_2(self, tmp_path):
        code, _ = run_cli(["spectrum", "--in", str(tmp_path / "nope.json")])
        assert code == 2

    def test_missing_required_flag_exits_2(self):
        code, _ = run_cli(["spectrum"])
        assert code == 2


class TestConverge:
    def test_csv_columns(self, files):
        code, out = run_cli(
            [
                "converge",
                "--state",
                str(files / "rho0.json"),
                "--observable",
                str(files / "sx.json"),
                "--trials",
                "2000",
                "--seed",
                "5",
            ]
        )
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "n,running_mean,exact_mean,abs_error,bound"
        last = lines[-1].split(",")
        assert int(last[0]) == 2000

    def test_certainty_case(self, files):
        code, out = run_cli(
            [
                "converge",
                "--state",
                str(files / "rho0.json"),
                "--observable",
                str(files / "sz.json"),
                "--trials",
                "100",
                "--seed",
                "1",
                "--format",
                "json",
            ]
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["within_bound_at_n"]
        assert payload["rows"][-1]["running_mean"] == 1.0

    def test_seed_required(self, files):
        code, _ = run_cli(
            [
                "converge",
                "--state",
                str(files / "rho0.json"),
                "--observable",
                str(files / "sx.json"),
                "--trials",
                "100",
            ]
        )
        assert code == 2


class TestLinearity:
    def test_pass(self, files):
        code, out = run_cli(
            [
                "linearity",
                "--state",
                str(files / "rho0.json"),
                "--a",
                str(files / "sx.json"),
                "--b",
                str(files / "sz.json"),
                "--trials",
                "20000",
                "--seed",
                "3",
            ]
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["pass"]
        assert payload["exact"]["residual"] <= 1e-10


class TestGnsCheck:
    def test_certificate(self, files):
        code, out = run_cli(["gns-check", "--state", str(files / "mixed.json")])
        assert code == 0
        payload = json.loads(out)
        assert payload["carrier_dim"] == 4
        assert all(c["pass"] for c in payload["checks"])

    def test_with_element_files(self, files):
        code, out = run_cli(
            [
                "gns-check",
                "--state",
                str(files / "mixed.json"),
                "--element",
                str(files / "sx.json"),
                "--element",
                str(files / "sz.json"),
            ]
        )
        assert code == 0
        assert json.loads(out)["carrier_dim"] == 4


class TestChsh:
    ANGLES = "0,1.5707963267948966,0.7853981633974483,2.356194490192345"

    def test_summary(self, files):
        code, out = run_cli(["chsh", "--angles", self.ANGLES, "--trials", "4000", "--seed", "7"])
        assert code == 0
        payload = json.loads(out)
        assert payload["abs_S_sampled"] == pytest.approx(2 * np.sqrt(2), abs=0.1)
        assert payload["formulas_agree"]
        assert payload["no_signaling"]["pass"]

    def test_out_prefix_writes_files(self, files, tmp_path):
        prefix = str(tmp_path / "chsh_run")
        code, out = run_cli(
            ["chsh", "--angles", self.ANGLES, "--trials", "2000", "--seed", "7", "--out", prefix]
        )
        assert code == 0
        assert out == ""
        summary = json.loads((tmp_path / "chsh_run.json").read_text())
        assert "S_sampled" in summary
        csv_lines = (tmp_path / "chsh_run.csv").read_text().splitlines()
        assert csv_lines[0].startswith("pair,angle_a,angle_b,n,sampled")
        assert len(csv_lines) == 5

    def test_bad_angles_exit_2(self):
        code, _ = run_cli(["chsh", "--angles", "1,2", "--trials", "10", "--seed", "1"])
        assert code == 2


class TestKs:
    def test_payload(self, files):
        code, out = run_cli(["ks", "--trials", "100", "--seed", "1"])
        assert code == 0
        payload = json.loads(out)
        assert payload["bruteforce_count"] == 0
        assert payload["contextual_violations"] == 0
        assert payload["multivaluedness_witness_rate"] > 0.9
        assert payload["structure"]["pass"]


class TestPostulates:
    def test_small_suite(self):
        code, out = run_cli(
            [
                "postulates",
                "--seed",
                "11",
                "--dims",
                "2,3",
                "--pairs",
                "3",
                "--attainment-trials",
                "1000",
                "--mc-trials",
                "4000",
            ]
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["passed"]
        assert payload["seed"] == 11
        assert {c["name"] for c in payload["checks"]} >= {
            "square_root_and_faithfulness",
            "character_homomorphism",
            "outcome_value_properties",
            "separation",
            "ensemble_linearity",
        }


class TestDeterminism:
    def test_identical_invocations_byte_identical(self, files):
        argv = ["ks", "--trials", "60", "--seed", "4"]
        assert run_cli(argv) == run_cli(argv)

    def test_backends_byte_identical(self):
        # the compiled and pure-python kernels must not be distinguishable
        # from the outside
        import os
        import subprocess
        import sys

        argv = [sys.executable, "-m", "qalab.cli", "ks", "--trials", "80", "--seed", "21"]
        outputs = []
        for backend in ("cython", "python"):
            env = dict(os.environ, QALAB_KERNEL=backend)
            proc = subprocess.run(argv, env=env, capture_output=True, check=False)
            if backend == "cython" and proc.returncode != 0:
                pytest.skip("compiled kernel not built")
            assert proc.returncode == 0
            outputs.append(proc.stdout)
        assert outputs[0] == outputs[1]

    def test_chsh_files_byte_identical(self, files, tmp_path):
        angles = TestChsh.ANGLES
        outputs = []
        for tag in ("one", "two"):
            prefix = str(tmp_path / tag)
            run_cli(["chsh", "--angles", angles, "--trials", "1500", "--seed", "9", "--out", prefix])
            outputs.append(
                (tmp_path / f"{tag}.json").read_bytes() + (tmp_path / f"{tag}.csv").read_bytes()
            )
        assert outputs[0] == outputs[1]
