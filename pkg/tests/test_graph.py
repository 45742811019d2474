import itertools
import json
import random

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from lfgraph.gf import field_from_order
from lfgraph.graph import (FUN, VEC, build, domination_number, export,
                           graph6_bytes, is_dominating, parse_edgelist_json,
                           parse_graph6, to_edgelist_json, to_graph6)
from lfgraph.linalg import dot

from conftest import graph_for


def test_build_guards():
    with pytest.raises(ValueError):
        build(field_from_order(2), 1)
    with pytest.raises(ValueError):
        build(field_from_order(7), 9)


def test_smallest_instance_exact():
    """Six vertices, three disjoint edges, each vector paired with the
    functional orthogonal to it."""
    g = graph_for(2, 2)
    assert g.num_vertices == 6
    assert g.vec_id((0, 1)) == 0
    assert g.vec_id((1, 0)) == 1
    assert g.vec_id((1, 1)) == 2
    assert g.fun_id((0, 1)) == 3
    assert g.edges() == [(0, 4), (1, 3), (2, 5)]


def test_vertex_indexing_round_trip():
    g = graph_for(3, 3)
    for vid in range(g.num_vertices):
        side, coords = g.coords_of(vid)
        back = g.vec_id(coords) if side == VEC else g.fun_id(coords)
        assert back == vid
    with pytest.raises(ValueError):
        g.vec_id((0, 0, 0))
    with pytest.raises(ValueError):
        g.coords_of(g.num_vertices)


def test_adjacency_matches_dot_product():
    for q, n in [(2, 2), (3, 2), (2, 3), (3, 3)]:
        g = graph_for(q, n)
        F = g.field
        for v in range(g.nv):
            _, vc = g.coords_of(v)
            for f in range(g.nv, g.num_vertices):
                _, fc = g.coords_of(f)
                expect = dot(F, fc, vc) == 0
                assert bool((g.adj[v] >> f) & 1) == expect


def test_edge_count_3_2():
    # 8 vectors, each adjacent to the q^(n-1)-1 = 2 functionals killing it
    g = graph_for(3, 2)
    assert g.num_vertices == 16
    assert len(g.edges()) == 16


@pytest.mark.parametrize("q", [2, 3, 4, 5])
@pytest.mark.parametrize("n", [2, 3])
def test_regularity(q, n):
    g = graph_for(q, n)
    assert g.num_vertices == 2 * (q ** n - 1)
    assert g.check_regular()
    want = q ** (n - 1) - 1
    assert all(g.degree(v) == want for v in range(g.num_vertices))


@pytest.mark.parametrize("q,n", [(2, 2), (3, 2), (4, 2), (5, 2)])
def test_n2_components(q, n):
    g = graph_for(q, n)
    comps = g.components()
    assert len(comps) == q + 1
    for comp in comps:
        vecs = [v for v in comp if g.is_vec(v)]
        funs = [v for v in comp if not g.is_vec(v)]
        assert len(vecs) == len(funs) == q - 1
        for v in vecs:
            assert g.adj[v] == sum(1 << f for f in funs)


@pytest.mark.parametrize("q,n", [(2, 3), (3, 3), (4, 3), (2, 4)])
def test_high_dim_connected(q, n):
    assert len(graph_for(q, n).components()) == 1


@pytest.mark.parametrize("q,n", [(2, 2), (3, 2), (4, 2), (2, 3), (3, 3)])
def test_lines_partition_and_sizes(q, n):
    g = graph_for(q, n)
    lines = g.lines()
    m = (q ** n - 1) // (q - 1)
    assert len(lines) == 2 * m
    assert sum(1 for line in lines if line.side == VEC) == m
    covered = set()
    for line in lines:
        assert len(line.members) == q - 1
        covered.update(line.members)
    assert covered == set(range(g.num_vertices))
    for vid in range(g.num_vertices):
        assert vid in lines[g.line_of(vid)].members


@pytest.mark.parametrize("q,n", [(2, 2), (3, 2), (4, 2), (2, 3), (3, 3)])
def test_twins_are_scalar_classes(q, n):
    g = graph_for(q, n)
    assert sorted(line.members for line in g.lines()) == sorted(g.twin_classes())


def test_line_neighborhoods_distinct():
    g = graph_for(3, 3)
    lines = g.lines()
    masks = {g.neighbor_set(line) for line in lines if line.side == VEC}
    assert len(masks) == len(lines) // 2


# ---------- domination ----------

def test_is_dominating_basics():
    g = graph_for(2, 2)
    # each functional covers exactly its orthogonal vector
    assert is_dominating(g, [3, 4, 5], target=VEC, mode="standard")
    assert not is_dominating(g, [3, 4], target=VEC, mode="standard")
    # standard whole-graph: members are exempt, so the three vectors do it
    assert is_dominating(g, [0, 1, 2], target="all", mode="standard")
    # total whole-graph: members need neighbors too
    assert not is_dominating(g, [0, 1, 2], target="all", mode="total")
    assert is_dominating(g, list(range(6)), target="all", mode="total")


@pytest.mark.parametrize("q,n", [(2, 2), (3, 2), (2, 3), (3, 3)])
def test_one_sided_domination_number(q, n):
    g = graph_for(q, n)
    size, witness = domination_number(g, target=VEC, mode="standard")
    assert size == q + 1
    assert is_dominating(g, witness, target=VEC, mode="standard")
    assert len(witness) == size


@pytest.mark.parametrize("q,n", [(2, 2), (3, 2), (2, 3), (3, 3)])
def test_explicit_one_sided_witness(q, n):
    """q+1 functional classes through e1, e2 cover every vector."""
    g = graph_for(q, n)
    F = g.field
    wit = [g.fun_id((1, a) + (0,) * (n - 2)) for a in F.elements()]
    wit.append(g.fun_id((0, 1) + (0,) * (n - 2)))
    assert is_dominating(g, wit, target=VEC, mode="standard")


def test_whole_graph_domination_small():
    g22 = graph_for(2, 2)
    assert domination_number(g22, target="all", mode="standard")[0] == 3
    assert domination_number(g22, target="all", mode="total")[0] == 6
    g32 = graph_for(3, 2)
    assert domination_number(g32, target="all", mode="standard")[0] == 8
    assert domination_number(g32, target="all", mode="total")[0] == 8
    # the point-line incidence structure at (2,3) beats 2q+2
    g23 = graph_for(2, 3)
    assert domination_number(g23, target="all", mode="standard")[0] == 4
    assert domination_number(g23, target="all", mode="total")[0] == 6


@pytest.mark.parametrize("q,n", [(2, 2), (3, 2), (4, 2), (2, 3)])
def test_total_domination_matches_split_bound(q, n):
    """Total domination separates over sides: no vertex covers its own
    side, so the optimum is the sum of the two one-sided optima."""
    g = graph_for(q, n)
    tot, wit = domination_number(g, target="all", mode="total")
    side_v = domination_number(g, target=VEC, mode="standard")[0]
    side_f = domination_number(g, target=FUN, mode="standard")[0]
    assert tot == side_v + side_f == 2 * q + 2
    assert is_dominating(g, wit, target="all", mode="total")


def test_branch_agrees_with_exhaustive():
    rng = random.Random(99)
    for q, n in [(2, 2), (3, 2), (2, 3)]:
        g = graph_for(q, n)
        for target, mode in [(VEC, "standard"), ("all", "standard"),
                             ("all", "total")]:
            b, wb = domination_number(g, target=target, mode=mode,
                                      method="branch")
            e, we = domination_number(g, target=target, mode=mode,
                                      method="exhaustive")
            assert b == e, (q, n, target, mode)
            assert is_dominating(g, wb, target=target, mode=mode)
            assert is_dominating(g, we, target=target, mode=mode)


def test_domination_argument_validation():
    g = graph_for(2, 2)
    with pytest.raises(ValueError):
        domination_number(g, target="nope")
    with pytest.raises(ValueError):
        domination_number(g, mode="nope")
    with pytest.raises(ValueError):
        domination_number(g, method="nope")
    with pytest.raises(ValueError):
        domination_number(graph_for(3, 3), method="exhaustive")  # > 20 vertices


# ---------- serialization ----------

def _nx_from_edges(n, edges):
    G = nx.Graph()
    G.add_nodes_from(range(n))
    G.add_edges_from(edges)
    return G


@pytest.mark.parametrize("q,n", [(2, 2), (3, 2), (2, 3), (3, 3)])
def test_graph6_against_networkx(q, n):
    g = graph_for(q, n)
    ours = to_graph6(g).decode("ascii").strip()
    theirs = nx.to_graph6_bytes(_nx_from_edges(g.num_vertices, g.edges()),
                                header=False).decode("ascii").strip()
    assert ours == theirs


def test_graph6_long_form():
    # 126 vertices forces the multi-byte vertex-count header
    g = graph_for(4, 3)
    assert g.num_vertices == 126
    data = to_graph6(g)
    assert data[0] == 126
    n, edges = parse_graph6(data)
    assert n == 126
    assert sorted(edges) == g.edges()
    theirs = nx.from_graph6_bytes(data.strip())
    assert set(theirs.edges()) == {tuple(e) for e in g.edges()}


def test_parse_graph6_round_trip_and_prefix():
    g = graph_for(3, 2)
    data = to_graph6(g)
    n, edges = parse_graph6(data)
    assert n == 16 and sorted(edges) == g.edges()
    n2, edges2 = parse_graph6(b">>graph6<<" + data)
    assert (n2, sorted(edges2)) == (n, sorted(edges))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 12), st.data())
def test_graph6_random_round_trip(nverts, data):
    pairs = list(itertools.combinations(range(nverts), 2))
    edges = [p for p in pairs if data.draw(st.booleans())]
    enc = graph6_bytes(nverts, edges)
    dec_n, dec_edges = parse_graph6(enc)
    assert dec_n == nverts
    assert sorted(dec_edges) == sorted(edges)
    assert enc.strip() == nx.to_graph6_bytes(_nx_from_edges(nverts, edges),
                                             header=False).strip()


def test_edgelist_json_round_trip():
    g = graph_for(3, 2)
    doc = parse_edgelist_json(to_edgelist_json(g))
    assert doc["q"] == 3 and doc["n"] == 2
    assert len(doc["vertices"]) == 16
    assert sorted(map(tuple, doc["edges"])) == g.edges()
    by_id = {v["id"]: v for v in doc["vertices"]}
    assert by_id[0]["side"] == "vec"
    assert by_id[8]["side"] == "fun"
    assert tuple(by_id[g.vec_id((1, 2))]["coords"]) == (1, 2)


def test_export_dispatch():
    g = graph_for(2, 2)
    assert export(g, "graph6") == to_graph6(g)
    assert export(g, "json") == to_edgelist_json(g)
    assert export(g, "edge-list-json") == to_edgelist_json(g)
    with pytest.raises(ValueError):
        export(g, "dot")
    assert json.loads(export(g, "json"))["q"] == 2
