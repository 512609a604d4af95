from pathlib import Path
import sys

import pytest

ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from equitable.fixtures import (  # noqa: E402
    cycle_graph,
    h_gadget,
    path_graph,
    platonic_graph,
    star_graph,
)
from equitable.plane_graph import build_plane_graph  # noqa: E402


@pytest.fixture
def triangle():
    return build_plane_graph({'vertices': [0, 1, 2], 'rotation': {'0': [1, 2], '1': [2, 0], '2': [0, 1]}})


@pytest.fixture
def k4():
    return build_plane_graph({
        'vertices': [0, 1, 2, 3],
        'rotation': {'0': [1, 2, 3], '1': [2, 0, 3], '2': [3, 0, 1], '3': [1, 0, 2]},
    })


@pytest.fixture
def path8():
    return path_graph(8)


@pytest.fixture
def cycle5():
    return cycle_graph(5)


@pytest.fixture
def star6():
    return star_graph(6)


@pytest.fixture
def octahedron():
    return platonic_graph('octahedron')


@pytest.fixture
def icosahedron():
    return platonic_graph('icosahedron')


@pytest.fixture
def dodecahedron():
    return platonic_graph('dodecahedron')


@pytest.fixture
def h_graph():
    return h_gadget()
