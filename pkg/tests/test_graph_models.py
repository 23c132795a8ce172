import pytest

from app.services import fixtures, graph_models
from app.services.abelian import FinAbGroup
from app.services.kpipeline import boundary_k_of_size
from app.services.words import contains, presentation
from app.utils import PreconditionError


def _k(graph):
    k = graph_models.graph_k_theory(graph)
    return k.k0, k.k1


class TestBuiltinFamilies:
    """K-theory of the explicit vertex lists."""

    @pytest.mark.parametrize("m", [3, 5, 7])
    def test_dihedral_odd(self, m):
        """(Z/(m-2), 0) for odd m."""
        k0, k1 = _k(graph_models.builtin_model("dihedral", m=m))
        assert k0 == FinAbGroup.cyclic(m - 2)
        assert k1.is_trivial

    @pytest.mark.parametrize("m", [4, 6, 8])
    def test_dihedral_even(self, m):
        """(Z + Z/((m-2)/2), Z) for even m."""
        k0, k1 = _k(graph_models.builtin_model("dihedral", m=m))
        assert k0 == FinAbGroup.from_invariants([(m - 2) // 2, 0])
        assert k1 == FinAbGroup.free(1)

    @pytest.mark.parametrize("p,q,k0,k1", [
        (2, 2, FinAbGroup.free(1), FinAbGroup.free(1)),
        (2, 3, FinAbGroup.trivial(), FinAbGroup.trivial()),
        (3, 3, FinAbGroup.cyclic(3), FinAbGroup.trivial()),
        (2, 5, FinAbGroup.cyclic(3), FinAbGroup.trivial()),
    ])
    def test_torus(self, p, q, k0, k1):
        """K0 is Z/((p-1)(q-1)-1) away from (2,2)."""
        assert _k(graph_models.builtin_model("torus", p=p, q=q)) == (k0, k1)

    def test_torus_adjacency(self):
        """a, ba, bba with the junction rule."""
        g = graph_models.builtin_model("torus", p=2, q=3)
        assert [g.label(i) for i in range(3)] == ["a", "ba", "bba"]
        a = graph_models.adjacency(g)
        assert a.tolist() == [[0, 1, 1], [1, 0, 0], [0, 1, 0]]


class TestGenericModels:
    """Constructions from a presentation."""

    def test_case1_braid(self):
        """braid3 gives four vertices and six edges."""
        g = graph_models.build_reversible_graph_case1(fixtures.braid3())
        assert [g.label(i) for i in range(len(g.vertices))] == ["aa", "ab", "ba", "bb"]
        assert len(g.edges) == 6
        a = graph_models.adjacency(g)
        assert a.tolist() == [[1, 1, 0, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 0, 1, 1]]

    @pytest.mark.parametrize("family,params", [
        ("dihedral", {"m": 3}), ("dihedral", {"m": 4}), ("dihedral", {"m": 5}),
        ("dihedral", {"m": 6}), ("dihedral", {"m": 7}), ("dihedral", {"m": 8}),
        ("torus", {"p": 2, "q": 2}), ("torus", {"p": 2, "q": 3}),
        ("torus", {"p": 3, "q": 3}), ("torus", {"p": 2, "q": 5}),
    ])
    def test_builtin_matches_generic(self, family, params):
        """The explicit lists and the case-1 construction agree in K-theory."""
        builtin = graph_models.builtin_model(family, **params)
        generic = graph_models.build_reversible_graph_case1(
            graph_models.family_presentation(family, **params))
        assert _k(builtin) == _k(generic)

    def test_unpruned_keeps_lower_layers(self):
        """Without pruning the empty word and single letters stay."""
        g = graph_models.build_reversible_graph_case1(fixtures.braid3(), pruned=False)
        assert () in g.vertices and ("a",) in g.vertices
        assert not g.pruned

    def test_case2_overlap(self):
        """Overlapping relators fail the case-2 conditions."""
        with pytest.raises(PreconditionError):
            graph_models.build_reversible_graph_case2(fixtures.braid3(), ("a", "b", "a"))

    def test_case2_ex_u_bj(self):
        """bb = aba with w = bbb keeps six vertices avoiding v and every spelling of w."""
        p = fixtures.ex_u_bj()
        g = graph_models.build_reversible_graph_case2(p, ("b", "b", "b"))
        assert sorted(g.provenance["W"]) == ["abab", "baba", "bbb"]
        assert g.provenance["v"] == "aba"
        forbidden = [tuple(z) for z in g.provenance["W"]] + [("a", "b", "a")]
        assert not any(contains(x, z) for x in g.vertices for z in forbidden)
        assert sorted("".join(x) for x in g.vertices) == ["aaa", "aab", "abb", "baa", "bab", "bba"]
        assert len(g.edges) == 9
        assert not graph_models.graph_properties(g).has_sources
        k0, k1 = _k(g)
        assert k0.is_trivial and k1.is_trivial

    def test_nonreversible_top_layer(self):
        """⟨a,b,c | cc = ab⟩ lives on the words of length |v| - 1."""
        p = presentation(["a", "b", "c"], ["cc = ab"])
        g = graph_models.build_nonreversible_graph(p)
        assert len(g.vertices) == 3
        assert len(g.edges) == 8
        k0, k1 = _k(g)
        assert k0.is_trivial and k1.is_trivial

    @pytest.mark.parametrize("n,relation", [(3, "cc = ab"), (4, "ab = cd"), (5, "ab = cd")])
    def test_nonreversible_matches_boundary(self, n, relation):
        """Graph K-theory agrees with the boundary quotient, K0 = Z/(n-2)."""
        p = presentation("abcde"[:n], [relation])
        k = graph_models.graph_k_theory(graph_models.build_nonreversible_graph(p))
        assert k.k0 == boundary_k_of_size(n).k0
        assert k.k1.is_trivial

    def test_nonreversible_all_layers(self):
        """The shorter words come back only on request."""
        p = presentation(["a", "b", "c"], ["cc = ab"])
        g = graph_models.build_nonreversible_graph(p, all_layers=True)
        assert len(g.vertices) == 4
        assert len(g.edges) == 3 + 8

    def test_nonreversible_outer_letters(self):
        """Extra loops build over the relation letters and loop the rest."""
        p = presentation(["a", "b", "c", "d"], ["cc = ab"])
        g = graph_models.build_nonreversible_graph(p, extra_loops=1)
        assert g.provenance["relator_letters"] == ["a", "b", "c"]
        assert g.provenance["loop_letters"] == ["d", "extra1"]
        assert g.vertices == [("a",), ("b",), ("c",)]
        assert len(g.edges) == 8 + 2 * 3
        assert all(e.src == e.dst for e in g.edges if e.letter in ("d", "extra1"))
        k0, k1 = _k(g)
        assert k0 == FinAbGroup.cyclic(5)
        assert k1.is_trivial

    def test_nonreversible_needs_three_letters(self):
        """Two-letter presentations are handled by the reversible models."""
        with pytest.raises(PreconditionError):
            graph_models.build_nonreversible_graph(fixtures.braid3())


class TestAnalysesAndExport:
    """Graph properties and serialisation."""

    def test_properties(self):
        """The dihedral model is irreducible and every cycle has an exit."""
        props = graph_models.graph_properties(graph_models.builtin_model("dihedral", m=5))
        assert props.irreducible
        assert props.every_cycle_has_exit
        assert not props.has_sources

    def test_vertex_order_is_irrelevant(self):
        """Relabelling vertices leaves K-theory unchanged."""
        g = graph_models.builtin_model("dihedral", m=6)
        order = list(reversed(range(len(g.vertices))))
        assert _k(g) == _k(g.reordered(order))

    def test_dot(self):
        """DOT output lists labelled edges."""
        dot = graph_models.export_dot(graph_models.build_reversible_graph_case1(fixtures.braid3()))
        assert dot.startswith("digraph {")
        assert '"aa" -> "aa" [label="a"];' in dot

    def test_json_import(self):
        """import_json reads what export_json writes."""
        g = graph_models.builtin_model("torus", p=3, q=3)
        back = graph_models.import_json(graph_models.export_json(g))
        assert back.vertices == g.vertices
        assert back.edges == g.edges
