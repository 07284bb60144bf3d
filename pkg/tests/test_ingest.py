import io

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conflictnet.errors import DuplicateEdgeError, EmptyInputError, ParseError
from conflictnet.ingest import (
    WWI_LABELS,
    EdgeRecord,
    build_bias_matrix,
    export_matrix_csv,
    load_edge_list,
    load_matrix_csv,
    load_network,
    load_wwi_1913,
    wwi_1913_path,
)
from conflictnet.spectral import eigendecompose

from .conftest import random_symmetric


def parse(text):
    return load_edge_list(io.StringIO(text))


def test_parse_basic():
    recs = parse("# comment\nnode_a,node_b,weight,layer\nA,B,1.5,alliance\n\nB,C,-0.5\n")
    assert recs == [EdgeRecord("A", "B", 1.5, "alliance"), EdgeRecord("B", "C", -0.5, "raw")]


def test_layer_signs():
    assert EdgeRecord("A", "B", 2.0, "rivalry").signed_weight == -2.0
    assert EdgeRecord("A", "B", -2.0, "alliance").signed_weight == 2.0
    assert EdgeRecord("A", "B", 2.0, "mid_opposed").signed_weight == -2.0
    assert EdgeRecord("A", "B", -2.0, "raw").signed_weight == -2.0
    assert parse("node_a,node_b,weight,layer\nA,B,1,treaty\n")[0].layer == "raw"


@pytest.mark.parametrize(
    "text,line",
    [
        ("a,b,c\nA,B,1\n", 1),
        ("node_a,node_b,weight\nA,B\n", 2),
        ("node_a,node_b,weight\nA,B,x\n", 2),
        ("node_a,node_b,weight\nA,A,1\n", 2),
        ("node_a,node_b,weight\n# c\nA,B,nan\n", 3),
        ("node_a,node_b,weight\nA,,1\n", 2),
    ],
)
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.line == line


def test_duplicates_per_layer():
    with pytest.raises(DuplicateEdgeError):
        parse("node_a,node_b,weight,layer\nA,B,1,alliance\nB,A,2,alliance\n")
    assert len(parse("node_a,node_b,weight,layer\nA,B,1,alliance\nA,B,2,rivalry\n")) == 2


def test_single_edge_scales_to_range():
    x = build_bias_matrix(parse("node_a,node_b,weight\nA,B,0.3\n")).weights
    np.testing.assert_allclose(x, [[0, 2], [2, 0]])
    x = build_bias_matrix(parse("node_a,node_b,weight,layer\nA,B,0.3,rivalry\n"), scale_to=(-1, 3)).weights
    np.testing.assert_allclose(x, [[0, -1], [-1, 0]])


def test_layers_sum_before_scaling():
    net = build_bias_matrix(parse("node_a,node_b,weight,layer\nA,B,3,alliance\nA,B,1,rivalry\nB,C,4,rivalry\n"))
    np.testing.assert_allclose(net.weights, [[0, 1, 0], [1, 0, -2], [0, -2, 0]])
    assert net.labels == ("A", "B", "C")


def test_build_errors():
    with pytest.raises(EmptyInputError):
        build_bias_matrix([])
    with pytest.raises(ValueError):
        build_bias_matrix([EdgeRecord("A", "B", 1.0)], scale_to=(0, 2))
    with pytest.raises(ValueError):
        build_bias_matrix([EdgeRecord("A", "B", 1.0)], labels=["A", "C"])


def test_explicit_labels_fix_order_and_allow_isolates():
    net = build_bias_matrix([EdgeRecord("B", "A", 1.0)], labels=["A", "B", "Z"])
    assert net.labels == ("A", "B", "Z")
    assert net.weights[0, 1] == 2.0 and not net.weights[2].any()


def test_wwi_fixture():
    net = load_wwi_1913()
    assert net.labels == WWI_LABELS
    assert eigendecompose(net.weights).leading_value == pytest.approx(6.01, abs=0.01)
    assert np.max(np.abs(net.weights)) == pytest.approx(2.0)
    assert net.weights[net.index("FRN"), net.index("GMY")] < 0
    assert net.weights[net.index("GMY"), net.index("AUH")] > 0
    np.testing.assert_array_equal(load_network(wwi_1913_path()).weights, net.weights)


def test_rivalry_makes_tie_negative():
    base = "node_a,node_b,weight,layer\nA,B,1,alliance\nB,C,1,alliance\n"
    x = build_bias_matrix(parse(base + "A,C,1,rivalry\n")).weights
    assert x[0, 2] < 0 < x[0, 1]


def test_matrix_round_trip_is_bit_exact(tmp_path):
    x = random_symmetric(6, 2) * 1e-3 + np.pi
    path = tmp_path / "m.csv"
    export_matrix_csv(x, path, labels=list("abcdef"))
    back = load_matrix_csv(path)
    assert back.labels == tuple("abcdef")
    assert np.array_equal(back.weights, x)
    assert np.array_equal(load_network(path).weights, x)


def test_matrix_parse_errors(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text(",a,b\na,0,1\n")
    with pytest.raises(ParseError):
        load_matrix_csv(p)
    p.write_text(",a,b\na,0,1\nc,1,0\n")
    with pytest.raises(ParseError):
        load_matrix_csv(p)
    p.write_text("")
    with pytest.raises(EmptyInputError):
        load_matrix_csv(p)


records = st.lists(
    st.tuples(
        st.sampled_from("ABCDEF"),
        st.sampled_from("ABCDEF"),
        st.floats(0.01, 10.0),
        st.sampled_from(["alliance", "rivalry", "raw", "mid_opposed", "mid_same_side"]),
    ).filter(lambda r: r[0] != r[1]),
    min_size=1,
    max_size=15,
    unique_by=lambda r: (frozenset(r[:2]), r[3]),
)


@pytest.mark.property
@given(records, st.floats(-5, -0.1), st.floats(0.1, 5))
def test_scaled_matrix_stays_in_range(recs, lo, hi):
    x = build_bias_matrix([EdgeRecord(*r) for r in recs], scale_to=(lo, hi)).weights
    assert np.all(x >= lo - 1e-12) and np.all(x <= hi + 1e-12)
    assert not np.diag(x).any()
    if np.any(x):
        assert np.max(np.abs(x)) == pytest.approx(min(-lo, hi))


@pytest.mark.property
@given(records, st.randoms(use_true_random=False))
def test_record_order_only_relabels(recs, rnd):
    edges = [EdgeRecord(*r) for r in recs]
    shuffled = edges[:]
    rnd.shuffle(shuffled)
    a = build_bias_matrix(edges)
    b = build_bias_matrix(shuffled)
    perm = [b.labels.index(lab) for lab in a.labels]
    np.testing.assert_allclose(b.weights[np.ix_(perm, perm)], a.weights, atol=1e-12)


@pytest.mark.property
@given(st.integers(0, 10_000), st.integers(2, 8))
def test_round_trip_any_matrix(tmp_path_factory, seed, n):
    x = random_symmetric(n, seed, scale=10 ** (seed % 7 - 3))
    path = tmp_path_factory.mktemp("rt") / "m.csv"
    export_matrix_csv(x, path)
    assert np.array_equal(load_matrix_csv(path).weights, x)
