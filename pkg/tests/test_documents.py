import pytest

from realdim.documents import (
    FrameworkDocument,
    GraphDocument,
    parse_framework_document,
    parse_graph_document,
    parse_weights_document,
    serialize_framework_document,
    serialize_graph_document,
)
from realdim.errors import DocumentError
from test_frameworks import ladder_framework, ladder_stress
from test_graphs import ladder_graph

LADDER_TEXT = """\
framework v1
name worked-example
dimension 2
vertices 3
edge 1 2 0
edge 3 1 0
edge 3 1 1
edge 3 2 0
edge 3 2 1
position 1 4 0
position 2 4 2
position 3 6 1
lattice 4 0
stress e1 -1
stress e2 1
stress e3 1
stress e4 1
stress e5 1
stress L -1
"""


def test_graph_document_roundtrip_text():
    doc = GraphDocument.from_graph(ladder_graph(), name="ladder")
    text = serialize_graph_document(doc)
    back = parse_graph_document(text)
    assert back == doc
    assert back.to_graph() == ladder_graph()


def test_graph_document_roundtrip_json():
    doc = GraphDocument.from_graph(ladder_graph())
    text = serialize_graph_document(doc, as_json=True)
    assert parse_graph_document(text) == doc


def test_framework_document_roundtrip_both_ways():
    doc = FrameworkDocument.from_framework(ladder_framework(), ladder_stress(), "worked-example")
    for as_json in (False, True):
        text = serialize_framework_document(doc, as_json=as_json)
        back = parse_framework_document(text)
        assert back == doc


def test_parse_ladder_text():
    doc = parse_framework_document(LADDER_TEXT)
    fw, stress = doc.to_framework()
    assert fw.dim == 2 and fw.n == 3
    assert stress is not None
    assert stress.as_list(fw.graph) == [-1, 1, 1, 1, 1, -1]


def test_duplicate_edges_error_names_lines():
    text = "gaingraph v1\nvertices 2\nedge 1 2 0\nedge 1 2 0\n"
    doc = parse_graph_document(text)
    with pytest.raises(DocumentError) as err:
        doc.to_graph()
    assert "lines 3, 4" in str(err.value)


def test_zero_lattice_rejected():
    text = LADDER_TEXT.replace("lattice 4 0", "lattice 0 0")
    with pytest.raises(DocumentError) as err:
        parse_framework_document(text).to_framework()
    assert "nonzero" in str(err.value)


def test_malformed_lines_carry_position():
    with pytest.raises(DocumentError) as err:
        parse_graph_document("gaingraph v1\nvertices 2\nedge 1 two 0\n")
    assert "line 3" in str(err.value)


def test_missing_header():
    with pytest.raises(DocumentError):
        parse_graph_document("vertices 2\n")


def test_unknown_directive_rejected():
    with pytest.raises(DocumentError):
        parse_framework_document(
            "framework v1\ndimension 1\nvertices 1\nlattice 1\nwibble 3\n"
        )


def test_weights_document():
    g = ladder_graph()
    text = "stress e1 -1\nstress e2 1\nstress e3 1\nstress e4 1\nstress e5 1\nstress L -1\n"
    sv = parse_weights_document(text, g)
    assert sv.as_list(g) == [-1, 1, 1, 1, 1, -1]
    with pytest.raises(DocumentError):
        parse_weights_document("stress e1 -1\n", g)  # missing entries


def test_position_coordinate_precision():
    import numpy as np

    from realdim.frameworks import QuotientFramework

    fw = ladder_framework()
    skewed = QuotientFramework(fw.graph, fw.positions + 1 / 3, fw.lattice * (1 / 7))
    text = serialize_framework_document(FrameworkDocument.from_framework(skewed))
    back, _ = parse_framework_document(text).to_framework()
    assert np.array_equal(back.positions, skewed.positions)
    assert np.array_equal(back.lattice, skewed.lattice)


def test_out_of_range_edge_vertices():
    with pytest.raises(DocumentError):
        parse_graph_document("gaingraph v1\nvertices 2\nedge 1 3 0\n")
