import itertools

import pytest

from artinkit.presentation import (
    GraphFormatError,
    barycentric_subdivision,
    complete_graph,
    graph_automorphisms,
    graph_to_text,
    labeled_isomorphism,
    parse_graph,
    validate_class,
)

G333_TEXT = "edge a b 3\nedge b c 3\nedge a c 3\n"
G345_TEXT = "edge a b 3\nedge a c 4\nedge b c 5\n"


def g333():
    return parse_graph(G333_TEXT)


def g345():
    return parse_graph(G345_TEXT)


def test_parse_k3():
    G = g333()
    assert G.vertices == ("a", "b", "c")
    assert G.rank == 3
    assert G.label("a", "b") == 3 and G.label("c", "a") == 3


def test_parse_rejects_label_below_2():
    with pytest.raises(GraphFormatError) as exc:
        parse_graph("edge a b 1\n")
    assert "line 1" in str(exc.value)


def test_parse_rejects_duplicate_edge():
    with pytest.raises(GraphFormatError):
        parse_graph("edge a b 3\nedge a b 4\n")


def test_parse_rejects_self_loop_and_junk():
    with pytest.raises(GraphFormatError):
        parse_graph("edge a a 3\n")
    with pytest.raises(GraphFormatError):
        parse_graph("frobnicate a b\n")


def test_parse_comments_and_isolated_vertices():
    G = parse_graph("# a comment\nvertex z\nedge a b 5\n")
    assert G.vertices == ("z", "a", "b")
    assert G.degree("z") == 0


def test_roundtrip_text():
    G = g345()
    assert parse_graph(graph_to_text(G)).labels == G.labels


def test_validate_class_in_scope():
    rep = validate_class(g333())
    assert rep.in_scope and rep.large_type and rep.free_of_infinity and rep.connected


def test_validate_class_path_graph_not_free_of_infinity():
    rep = validate_class(parse_graph("edge a b 3\nedge b c 3\n"))
    assert not rep.free_of_infinity and not rep.in_scope
    assert rep.large_type and rep.connected


def test_validate_class_rank2():
    rep = validate_class(parse_graph("edge a b 5\n"))
    assert rep.rank == 2 and not rep.in_scope


def test_validate_class_small_label():
    rep = validate_class(parse_graph("edge a b 2\nedge b c 3\nedge a c 3\n"))
    assert not rep.large_type and not rep.in_scope


def test_automorphisms_all_equal_labels_is_symmetric_group():
    auts = graph_automorphisms(g333())
    assert len(auts) == 6
    ident = auts[0]
    assert all(ident(v) == v for v in "abc")


def test_automorphisms_distinct_labels_trivial():
    auts = graph_automorphisms(g345())
    assert len(auts) == 1


def test_automorphisms_k4():
    # Brute-force oracle over all 4! vertex bijections.
    G = complete_graph("abcd", 3)
    count = 0
    for perm in itertools.permutations("abcd"):
        f = dict(zip("abcd", perm))
        if all(
            G.label(u, v) == G.label(f[u], f[v])
            for u, v in itertools.combinations("abcd", 2)
        ):
            count += 1
    assert count == 24
    assert len(graph_automorphisms(G)) == count


def test_automorphisms_preserve_labels_edgewise():
    G = complete_graph("abcd", {("a", "b"): 3, ("a", "c"): 3, ("a", "d"): 4,
                                ("b", "c"): 4, ("b", "d"): 3, ("c", "d"): 3})
    for f in graph_automorphisms(G):
        for u, v in itertools.combinations("abcd", 2):
            assert G.label(u, v) == G.label(f(u), f(v))


def test_isomorphism_relabeling():
    H = parse_graph("edge x y 3\nedge y z 3\nedge x z 3\n")
    f = labeled_isomorphism(g333(), H)
    assert f is not None
    assert f("a") == "x" and f("b") == "y" and f("c") == "z"


def test_isomorphism_absent_when_labels_differ():
    assert labeled_isomorphism(g333(), g345()) is None


def test_isomorphism_k4_cycled():
    labels = {("a", "b"): 3, ("a", "c"): 3, ("a", "d"): 4,
              ("b", "c"): 4, ("b", "d"): 3, ("c", "d"): 3}
    G = complete_graph("abcd", labels)
    # Relabel through the 4-cycle a->b->c->d->a.
    cyc = {"a": "b", "b": "c", "c": "d", "d": "a"}
    relabeled = {
        tuple(sorted((cyc[u], cyc[v]))): m for (u, v), m in labels.items()
    }
    H = complete_graph("abcd", relabeled)
    f = labeled_isomorphism(G, H)
    assert f is not None
    # Oracle: brute force over all bijections.
    assert any(
        all(G.label(u, v) == H.label(p[u], p[v])
            for u, v in itertools.combinations("abcd", 2))
        for p in (dict(zip("abcd", q)) for q in itertools.permutations("abcd"))
    )


def test_isomorphism_symmetric():
    G, H = g333(), parse_graph("edge p q 3\nedge q r 3\nedge p r 3\n")
    assert (labeled_isomorphism(G, H) is None) == (labeled_isomorphism(H, G) is None)


def test_barycentric_k3_is_hexagon():
    bar = barycentric_subdivision(g333())
    assert len(bar.node_list("v")) == 3 and len(bar.node_list("e")) == 3
    assert len(bar.adjacency) == 6
    assert all(len(bar.neighbors(n)) == 2 for n in bar.nodes)


def test_barycentric_single_edge_is_path():
    bar = barycentric_subdivision(parse_graph("edge a b 4\n"))
    assert len(bar.nodes) == 3 and len(bar.adjacency) == 2


def test_barycentric_k4_counts():
    bar = barycentric_subdivision(complete_graph("abcd", 3))
    assert len(bar.nodes) == 4 + 6
    assert len(bar.adjacency) == 12


def test_barycentric_bipartite():
    bar = barycentric_subdivision(g345())
    for x, y in bar.adjacency:
        assert {x[0], y[0]} == {"v", "e"}
