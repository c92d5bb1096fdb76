import json

import numpy as np
import pytest

from qalab import fileio
from qalab.errors import FileFormatError, InvalidStateError


def _write(path, payload):
    path.write_text(json.dumps(payload))
    return str(path)


class TestLoadMatrix:
    def test_round_trip(self, tmp_path):
        m = np.array([[1.0, 2.0 - 1j], [2.0 + 1j, -0.5]])
        fileio.save_matrix(tmp_path / "m.json", m)
        np.testing.assert_allclose(fileio.load_matrix(tmp_path / "m.json"), m)

    def test_rejects_nan(self, tmp_path):
        path = _write(
            tmp_path / "bad.json",
            {"dim": 2, "re": [[float("nan"), 0], [0, 0]], "im": [[0, 0], [0, 0]]},
        )
        with pytest.raises(FileFormatError, match="NaN or Inf"):
            fileio.load_matrix(path)

    def test_rejects_inf(self, tmp_path):
        path = _write(
            tmp_path / "bad.json",
            {"dim": 2, "re": [[0, 0], [0, 0]], "im": [[0, float("inf")], [0, 0]]},
        )
        with pytest.raises(FileFormatError, match="NaN or Inf"):
            fileio.load_matrix(path)

    def test_rejects_shape_mismatch(self, tmp_path):
        path = _write(
            tmp_path / "bad.json",
            {"dim": 3, "re": [[0, 0], [0, 0]], "im": [[0, 0], [0, 0]]},
        )
        with pytest.raises(FileFormatError, match="shape"):
            fileio.load_matrix(path)

    def test_rejects_ragged_rows(self, tmp_path):
        path = _write(
            tmp_path / "bad.json",
            {"dim": 2, "re": [[0, 0], [0]], "im": [[0, 0], [0, 0]]},
        )
        with pytest.raises(FileFormatError):
            fileio.load_matrix(path)

    def test_rejects_missing_field(self, tmp_path):
        path = _write(tmp_path / "bad.json", {"dim": 2, "re": [[0, 0], [0, 0]]})
        with pytest.raises(FileFormatError, match="missing field 'im'"):
            fileio.load_matrix(path)

    def test_rejects_non_object(self, tmp_path):
        path = _write(tmp_path / "bad.json", [1, 2, 3])
        with pytest.raises(FileFormatError, match="object"):
            fileio.load_matrix(path)

    def test_rejects_bad_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(FileFormatError):
            fileio.load_matrix(str(path))

    def test_rejects_non_numeric(self, tmp_path):
        path = _write(
            tmp_path / "bad.json",
            {"dim": 2, "re": [["a", 0], [0, 0]], "im": [[0, 0], [0, 0]]},
        )
        with pytest.raises(FileFormatError):
            fileio.load_matrix(path)


class TestLoadState:
    def test_valid_state(self, tmp_path):
        fileio.save_matrix(tmp_path / "rho.json", np.diag([0.25, 0.75]).astype(complex))
        rho = fileio.load_state(tmp_path / "rho.json")
        assert rho.dim == 2

    def test_invalid_state_rejected(self, tmp_path):
        fileio.save_matrix(tmp_path / "rho.json", np.diag([0.8, 0.8]).astype(complex))
        with pytest.raises(InvalidStateError):
            fileio.load_state(tmp_path / "rho.json")

    def test_load_element(self, tmp_path):
        fileio.save_matrix(tmp_path / "a.json", np.eye(3).astype(complex))
        assert fileio.load_element(tmp_path / "a.json").dim == 3
