import numpy as np
import pytest

from selcol.errors import InstanceFormatError
from selcol.graph import empty_graph
from selcol.instance import SelColInstance, cube_instance
from selcol.io import parse_instance, read_instance, save_instance, write_instance
from selcol.perfectgen import GenConfig, generate_partition, generate_perfect
from selcol.solver import solve

MINIMAL = "p selcol 2 1 2\ne 1 2\nk 1 1\nk 2 2\n"


def test_minimal_file():
    inst = parse_instance(MINIMAL)
    assert inst.n == 2 and inst.graph.m == 1 and inst.clusters == ((0,), (1,))
    assert solve(inst).ub == 2


def test_cube_text():
    text = write_instance(cube_instance())
    lines = text.splitlines()
    assert sum(ln.startswith("e ") for ln in lines) == 12
    assert sum(ln.startswith("k ") for ln in lines) == 4
    assert lines[0] == "p selcol 8 12 4"
    assert solve(parse_instance(text)).ub == 1


def test_empty_edge_instance():
    text = write_instance(SelColInstance(empty_graph(3), ((0, 1), (2,))))
    assert text == "p selcol 3 0 2\nk 1 1 2\nk 2 3\n"


def test_comments_and_blank_lines():
    text = "c hello\n\n" + MINIMAL.replace("e 1 2", "e 2 1\nc inline")
    assert parse_instance(text).graph.has_edge(0, 1)
    assert write_instance(parse_instance(MINIMAL), comment="a\nb").startswith("c a\nc b\n")


def test_roundtrip_generated(rng):
    for k in range(100):
        n = int(rng.integers(8, 20))
        g = generate_perfect(GenConfig(n, 0.5, epsilon=0.2, seed=k))
        inst = SelColInstance(g, tuple(generate_partition(n, 1, 4, rng)))
        text = write_instance(inst)
        back = parse_instance(text)
        assert back.graph == inst.graph and back.clusters == inst.clusters
        assert write_instance(back) == text


def test_file_helpers(tmp_path):
    path = tmp_path / "cube.selcol"
    save_instance(cube_instance(), path)
    inst = read_instance(path)
    assert inst.name == "cube" and inst.graph == cube_instance().graph


@pytest.mark.parametrize("text,line,fragment", [
    ("p selcol 2 2 2\ne 1 2\ne 2 1\nk 1 1\nk 2 2\n", 3, "duplicate edge"),
    ("p selcol 2 1 2\ne 1 1\nk 1 1\nk 2 2\n", 2, "self-loop"),
    ("p selcol 2 1 2\ne 1 3\nk 1 1\nk 2 2\n", 2, "out of range"),
    ("p selcol 3 0 2\nk 1 1 2\nk 2 2 3\n", 3, "vertex 2 in clusters 1 and 2"),
    ("p selcol 2 2 2\ne 1 2\nk 1 1\nk 2 2\n", 4, "declares 2 edges"),
    ("p selcol 2 0 3\nk 1 1\nk 2 2\n", 3, "declares 3 clusters"),
    ("p selcol 5 0 2\nk 1 1 2\nk 2 3 4\n", 3, "vertex 5 unassigned"),
    ("e 1 2\n", 1, "before the problem line"),
    ("p selcol 2 0 1\nx 1\n", 2, "unknown line type"),
    ("p selcol 2 0 1\nk 1 a\n", 2, "expected integers"),
    ("p graph 2 0 1\n", 1, "p selcol"),
    ("c nothing\n", 1, "missing problem line"),
])
def test_parse_errors(text, line, fragment):
    with pytest.raises(InstanceFormatError) as info:
        parse_instance(text)
    assert info.value.line == line
    assert fragment in str(info.value)
    assert str(info.value).startswith(f"line {line}:")
