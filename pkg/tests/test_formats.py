import numpy as np
import pytest

from pools import random_pool
from tmodarcs.arc import Arc
from tmodarcs.formats import (
    FormatError,
    dumps_arc,
    dumps_matrix,
    dumps_points,
    loads_arc,
    loads_matrix,
    loads_points,
    read_arc,
    write_arc,
)


def test_round_trip():
    for arc in random_pool(25, seed=3):
        back = loads_arc(dumps_arc(arc))
        assert back == arc


def test_file_round_trip(tmp_path, arc143):
    path = tmp_path / "a.arc"
    write_arc(arc143, path)
    assert read_arc(path) == arc143
    assert path.read_text().splitlines()[0] == "q 5 p 5 e 1 r 3"


def test_unnormalised_coordinates_and_comments(pg35):
    text = "# header follows\nq 5 p 5 e 1 r 3\n0 0 2 3 : 4  # scaled\n\n3 0 0 0 : 1\n"
    arc = loads_arc(text)
    assert arc.space is pg35
    assert arc[[0, 0, 1, 4]] == 4
    assert arc[[1, 0, 0, 0]] == 1
    assert arc.cardinality == 5


def test_extension_field_header():
    arc = loads_arc("q 9 p 3 e 2 r 2\n0 1 8 : 3\n")
    assert arc.space.q == 9 and arc.cardinality == 3


@pytest.mark.parametrize(
    "text",
    [
        "",
        "q 5 r 3\n",
        "q 6 p 2 e 3 r 2\n",
        "q 5 p 5 e 1 r 3\n0 0 1 : 1\n",
        "q 5 p 5 e 1 r 3\n0 0 1 5 : 1\n",
        "q 5 p 5 e 1 r 3\n0 0 0 0 : 1\n",
        "q 5 p 5 e 1 r 3\n0 0 1 0 : -1\n",
        "q 5 p 5 e 1 r 3\n0 0 1 0 1\n",
        "q 5 p 5 e 1 r 3\n0 0 1 0 : x\n",
        "q 5 p 5 e 1 r 3\n0 0 1 0 : 1\n0 0 2 0 : 1\n",
    ],
)
def test_parse_errors(text):
    with pytest.raises(FormatError):
        loads_arc(text)


def test_points_and_matrix(pg35):
    pts = frozenset([0, 5, 77, 155])
    assert loads_points(pg35, dumps_points(pg35, pts)) == pts
    A = np.array([[1, 2, 3], [4, 5, 6]])
    assert (loads_matrix(dumps_matrix(A)) == A).all()
    with pytest.raises(FormatError):
        loads_matrix("1 2\n3\n")
    with pytest.raises(FormatError):
        loads_matrix("1 a\n")
    assert Arc.from_points(pg35, pts).cardinality == 4
