import numpy as np
import pytest
from hypothesis import given

from helpers import dense_tensors, tensors01
from tenspec import TnsFormatError, read_tns, write_tns
from tenspec.tnsio import dumps, loads


@given(tensors01())
def test_sparse_round_trip(T):
    assert loads(dumps(T)) == T
    assert dumps(loads(dumps(T))) == dumps(T)


@given(dense_tensors())
def test_dense_round_trip_is_exact(A):
    B = loads(dumps(A))
    assert np.array_equal(A.data, B.data)
    assert dumps(B) == dumps(A)


def test_file_round_trip(tmp_path):
    T = loads("# comment\n3 2 sparse01\n1 1 1\n2 2 2\n")
    path = tmp_path / "t.tns"
    write_tns(T, path)
    assert read_tns(path) == T
    assert path.read_text().splitlines()[0] == "3 2 sparse01"


@pytest.mark.parametrize(
    "text",
    [
        "",
        "3 2\n",
        "3 two sparse01\n",
        "3 2 sparse01\n1 1 2\n1 1 1\n",
        "3 2 sparse01\n1 1 1\n1 1 1\n",
        "3 2 sparse01\n1 1 x\n",
        "3 2 sparse01\n1 1 3\n",
        "2 2 dense\n1 2 3\n",
        "2 2 dense\n1 2 3 -4\n",
        "2 2 dense\n1 2 3 a\n",
        "3 2 coo\n",
    ],
)
def test_malformed_input(text):
    with pytest.raises(TnsFormatError):
        loads(text)
