import numpy as np
import pytest

from vqsd import io
from vqsd.ansatz import AnsatzDescriptor, AnsatzParams
from vqsd.errors import InvalidInputError
from vqsd.state import basis_probabilities, random_density_matrix


def test_density_matrix_round_trip(tmp_path):
    rho = random_density_matrix(3, rank=2, seed=1)
    io.save_density_matrix(tmp_path / "rho.json", rho, seed=1)
    back = io.load_density_matrix(tmp_path / "rho.json")
    assert np.array_equal(back.matrix, rho.matrix)


def test_params_round_trip(tmp_path):
    params = AnsatzParams(AnsatzDescriptor("brick-wall", 2, 3), np.linspace(-3, 3, 18) / 7)
    io.save_params(tmp_path / "p.json", params)
    back = io.load_params(tmp_path / "p.json")
    assert back.descriptor == params.descriptor
    assert np.array_equal(back.theta, params.theta)


def test_bad_json(tmp_path):
    (tmp_path / "x.json").write_text("{")
    with pytest.raises(InvalidInputError):
        io.read_json(tmp_path / "x.json")
    (tmp_path / "p.json").write_text('{"theta": [1]}')
    with pytest.raises(InvalidInputError):
        io.load_params(tmp_path / "p.json")


def test_table_round_trip_is_exact(tmp_path):
    io.write_table(tmp_path / "sub" / "t.csv", ("a", "b"), [(1, 0.1 + 0.2), (2, 1e-17)])
    rows = io.read_table(tmp_path / "sub" / "t.csv")
    assert float(rows[0]["b"]) == 0.1 + 0.2
    assert rows[1] == {"a": "2", "b": "1e-17"}


def test_distribution_table(tmp_path):
    dist = basis_probabilities(random_density_matrix(2, seed=0))
    io.write_distribution(tmp_path / "d.csv", dist)
    rows = io.read_table(tmp_path / "d.csv")
    assert [r["basis"] for r in rows] == ["00", "01", "10", "11"]
    assert sum(float(r["probability"]) for r in rows) == pytest.approx(1)
