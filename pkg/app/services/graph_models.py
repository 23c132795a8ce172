"""
Finite graph models for one-relator monoids and their K-theory.

A graph has words as vertices and letter-labelled edges y -> x.  An edge
y -> x with letter σ is present when σx avoids every forbidden factor and y
is the vertex that begins σx.  K-theory of the graph algebra is read off the
adjacency matrix A as coker and ker of I - Aᵗ.
"""
import json
import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
from sympy import Matrix

from ..config import settings
from ..utils import BudgetExceededError, ConsistencyError, PreconditionError, ValidationError, timer
from . import fixtures
from .abelian import AbHom, FinAbGroup, cokernel, identity, kernel
from .reversing import find_garside_like_w, orient_case2, verify_condition_2_3prime
from .words import Presentation, Word, contains, count, equivalence_class, overlap_set, spell, words_equal

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ModelEdge:
    src: int
    dst: int
    letter: str


@dataclass
class ModelGraph:
    vertices: List[Word]
    edges: List[ModelEdge]
    provenance: Dict[str, Any] = field(default_factory=dict)
    pruned: bool = False

    def index(self, word: Word) -> int:
        return self.vertices.index(tuple(word))

    def label(self, i: int) -> str:
        return spell(self.vertices[i])

    def to_networkx(self) -> nx.MultiDiGraph:
        g = nx.MultiDiGraph()
        g.add_nodes_from(range(len(self.vertices)))
        for e in self.edges:
            g.add_edge(e.src, e.dst, letter=e.letter)
        return g

    def reordered(self, order: Sequence[int]) -> "ModelGraph":
        """Same graph with vertices listed in ``order`` (old indices)."""
        position = {old: new for new, old in enumerate(order)}
        edges = [ModelEdge(position[e.src], position[e.dst], e.letter) for e in self.edges]
        return ModelGraph([self.vertices[i] for i in order], edges, dict(self.provenance), self.pruned)


# ---------------------------------------------------------------------------
# Construction helpers
# ---------------------------------------------------------------------------

def _free_of(word: Word, forbidden: Iterable[Word]) -> bool:
    return not any(contains(word, z) for z in forbidden)


def _junction_edges(vertices: Sequence[Word], forbidden: Sequence[Word],
                    alphabet: Sequence[str]) -> List[ModelEdge]:
    """Edges y -> x labelled σ for σx forbidden-free and y the vertex that begins σx."""
    edges = []
    for dst, x in enumerate(vertices):
        for sigma in alphabet:
            junction = (sigma,) + x
            if not _free_of(junction, forbidden):
                continue
            starts = [i for i, y in enumerate(vertices) if junction[:len(y)] == y]
            if len(starts) > 1:
                raise ConsistencyError(
                    f"Several vertices begin {spell(junction)}: {[spell(vertices[i]) for i in starts]}")
            if starts:
                edges.append(ModelEdge(starts[0], dst, sigma))
    return edges


def _prune(vertices: List[Word], edges: List[ModelEdge]) -> Tuple[List[Word], List[ModelEdge]]:
    """Iteratively drop vertices without incoming or without outgoing edges."""
    alive = set(range(len(vertices)))
    while True:
        live_edges = [e for e in edges if e.src in alive and e.dst in alive]
        has_out = {e.src for e in live_edges}
        has_in = {e.dst for e in live_edges}
        keep = alive & has_out & has_in
        if keep == alive:
            break
        alive = keep
    order = sorted(alive)
    position = {old: new for new, old in enumerate(order)}
    kept = [ModelEdge(position[e.src], position[e.dst], e.letter)
            for e in edges if e.src in alive and e.dst in alive]
    return [vertices[i] for i in order], kept


def _words(alphabet: Sequence[str], length: int) -> List[Word]:
    return [tuple(w) for w in product(alphabet, repeat=length)]


def _layered_model(p: Presentation, forbidden: List[Word], l: int, pruned: bool,
                   provenance: Dict[str, Any]) -> ModelGraph:
    top = [w for w in _words(p.alphabet, l) if _free_of(w, forbidden)]
    edges = _junction_edges(top, forbidden, p.alphabet)
    if pruned:
        vertices, edges = _prune(top, edges)
        if not vertices:
            raise PreconditionError("Pruning removed every vertex; no forbidden-free infinite words")
        return ModelGraph(vertices, edges, provenance, True)
    lower = [w for n in range(l) for w in _words(p.alphabet, n) if _free_of(w, forbidden)]
    shift = len(lower)
    edges = [ModelEdge(e.src + shift, e.dst + shift, e.letter) for e in edges]
    return ModelGraph(lower + top, edges, provenance, False)


# ---------------------------------------------------------------------------
# Non-reversible presentations
# ---------------------------------------------------------------------------

def nonreversible_orientation(p: Presentation) -> Tuple[Word, Word]:
    """(u, v) satisfying the overlap, letter-count and separation conditions."""
    if len(p.alphabet) < 3:
        raise PreconditionError("the non-reversible model needs at least three generators")
    failures = []
    for u, v in (p.relation, p.relation[::-1]):
        if overlap_set(v) != [()]:
            failures.append("OVL(v) = {ε} fails")
        elif not any(count(u, s) < count(v, s) for s in p.alphabet):
            failures.append("no letter occurs less often in u than in v")
        elif contains(v, u):
            failures.append("u is a subword of v")
        elif any(u[:k] == v[-k:] for k in range(1, min(len(u), len(v)) + 1)):
            failures.append("a prefix of u is a suffix of v")
        elif any(u[-k:] == v[:k] for k in range(1, min(len(u), len(v)) + 1)):
            failures.append("a suffix of u is a prefix of v")
        else:
            return u, v
    raise PreconditionError("; ".join(sorted(set(failures))))


@timer
def build_nonreversible_graph(p: Presentation, all_layers: bool = False,
                              extra_loops: int = 0) -> ModelGraph:
    """Vertices: words of length |v| − 1; edges y -> x when yτ = σx ≠ v.

    With ``extra_loops`` > 0 the alphabet is read as Σ_R plus outer letters:
    vertices and junction edges use only the letters of u and v, and every
    vertex gets a loop for each generator outside the relation and for each
    of the ``extra_loops`` synthetic letters ``extra1``, ``extra2``, ...

    Shorter words only span disjoint full-shift components, so they are
    added when ``all_layers`` is set and never by default.
    """
    u, v = nonreversible_orientation(p)
    if extra_loops < 0:
        raise ValidationError("extra_loops must be non-negative")
    if extra_loops:
        letters = [s for s in p.alphabet if s in u or s in v]
        outer = [s for s in p.alphabet if s not in letters]
        outer += [f"extra{k + 1}" for k in range(extra_loops)]
    else:
        letters, outer = list(p.alphabet), []
    lengths = range(len(v)) if all_layers else [len(v) - 1]
    vertices = [w for n in lengths for w in _words(letters, n)]
    position = {w: i for i, w in enumerate(vertices)}
    edges = []
    for x in vertices:
        for sigma in letters:
            junction = (sigma,) + x
            if junction == v:
                continue
            y = junction[:len(x)]
            edges.append(ModelEdge(position[y], position[x], sigma))
    for i in range(len(vertices)):
        edges.extend(ModelEdge(i, i, sigma) for sigma in outer)
    provenance = {"model": "nonreversible", "u": spell(u), "v": spell(v),
                  "all_layers": all_layers, "extra_loops": extra_loops,
                  "relator_letters": letters, "loop_letters": outer}
    return ModelGraph(vertices, edges, provenance, False)


# ---------------------------------------------------------------------------
# Reversible presentations
# ---------------------------------------------------------------------------

def _check_case1(p: Presentation) -> None:
    u, v = p.relation
    candidate = find_garside_like_w(p, max(len(u), len(v)))
    if candidate is None:
        raise PreconditionError("no Garside-like element up to the relator length")
    if words_equal(candidate.w, u, p, settings.verify_budget).status != "equal":
        raise PreconditionError(f"the Garside-like element {spell(candidate.w)} is not the relator")


@timer
def build_reversible_graph_case1(p: Presentation, pruned: bool = True,
                                 check: bool = True) -> ModelGraph:
    """Relator-free words of length max(|u|, |v|) − 1."""
    if len(p.alphabet) != 2:
        raise PreconditionError("reversible models need a two-letter alphabet")
    if check:
        _check_case1(p)
    u, v = p.relation
    l = max(len(u), len(v)) - 1
    provenance = {"model": "reversible-case1", "u": spell(u), "v": spell(v), "l": l}
    return _layered_model(p, [u, v], l, pruned, provenance)


def _check_case2(p: Presentation, u: Word, v: Word, w: Word) -> None:
    if contains(v, u):
        raise PreconditionError("condition 2.2 fails: u is a subword of v")
    for k in range(1, min(len(u), len(v)) + 1):
        if u[:k] == v[-k:] or u[-k:] == v[:k]:
            raise PreconditionError("condition 2.2 fails: u and v overlap")
    report = verify_condition_2_3prime(p, w)
    if report.holds is not True:
        where = report.witness if report.witness is not None else "an undetermined prefix"
        raise PreconditionError(f"condition 2.3' fails at l = {where}")


@timer
def build_reversible_graph_case2(p: Presentation, w: Word, pruned: bool = True,
                                 check: bool = True, budget: Optional[int] = None) -> ModelGraph:
    """Words avoiding v and every spelling of w."""
    u, v = orient_case2(p)
    try:
        spellings = equivalence_class(tuple(w), p, budget or settings.verify_budget)
    except BudgetExceededError:
        raise PreconditionError("condition 2.1 fails: w has too many spellings within the budget")
    if check:
        _check_case2(p, u, v, tuple(w))
    forbidden = [v] + spellings
    l = max(len(z) for z in forbidden) - 1
    provenance = {"model": "reversible-case2", "u": spell(u), "v": spell(v), "w": spell(tuple(w)),
                  "W": [spell(z) for z in spellings], "l": l}
    return _layered_model(p, forbidden, l, pruned, provenance)


# ---------------------------------------------------------------------------
# Built-in families
# ---------------------------------------------------------------------------

def _ab(k: int) -> Word:
    return ("a", "b") * k


def _ba(k: int) -> Word:
    return ("b", "a") * k


def dihedral_vertices(m: int) -> List[Word]:
    if m < 3:
        raise ValidationError("the dihedral model needs m ≥ 3")
    if m % 2 == 0:
        h = (m - 2) // 2
        return ([_ab(k) + ("a", "a") for k in range(h)]
                + [_ab(h) + ("a",)]
                + [_ab(k) + ("b",) for k in range(h, 0, -1)]
                + [_ba(k) + ("a",) for k in range(1, h + 1)]
                + [_ba(h) + ("b",)]
                + [_ba(k) + ("b", "b") for k in range(h - 1, -1, -1)])
    h = (m - 1) // 2
    return ([_ab(k) + ("a", "a") for k in range(h)]
            + [_ab(h)]
            + [_ab(k) + ("b",) for k in range(h - 1, 0, -1)]
            + [_ba(k) + ("a",) for k in range(1, h)]
            + [_ba(h)]
            + [_ba(k) + ("b", "b") for k in range(h - 1, -1, -1)])


def torus_vertices(p: int, q: int) -> List[Word]:
    if p < 2 or q < 2:
        raise ValidationError("the torus model needs p, q ≥ 2")
    return ([("a",) * k + ("b",) for k in range(1, p - 1)]
            + [("a",) * (p - 1)]
            + [("b",) * k + ("a",) for k in range(1, q)])


def builtin_model(family: str, m: Optional[int] = None, p: Optional[int] = None,
                  q: Optional[int] = None) -> ModelGraph:
    """The explicit vertex lists for dihedral(m) and torus(p, q)."""
    if family == "dihedral":
        if m is None:
            raise ValidationError("dihedral needs m")
        vertices = dihedral_vertices(m)
        forbidden = list(fixtures.dihedral(m).relators)
        provenance = {"model": "builtin", "family": "dihedral", "m": m}
    elif family == "torus":
        if p is None or q is None:
            raise ValidationError("torus needs p and q")
        vertices = torus_vertices(p, q)
        forbidden = list(fixtures.torus(p, q).relators)
        provenance = {"model": "builtin", "family": "torus", "p": p, "q": q}
    else:
        raise ValidationError(f"Unknown family {family!r}")
    edges = _junction_edges(vertices, forbidden, ("a", "b"))
    return ModelGraph(vertices, edges, provenance, True)


def family_presentation(family: str, m: Optional[int] = None, p: Optional[int] = None,
                        q: Optional[int] = None) -> Presentation:
    if family == "dihedral":
        return fixtures.dihedral(m)
    if family == "torus":
        return fixtures.torus(p, q)
    raise ValidationError(f"Unknown family {family!r}")


# ---------------------------------------------------------------------------
# Analyses
# ---------------------------------------------------------------------------

def adjacency(g: ModelGraph) -> Matrix:
    """A[i, j] = number of edges i -> j."""
    n = len(g.vertices)
    a = Matrix.zeros(n, n)
    for e in g.edges:
        a[e.src, e.dst] += 1
    return a


@dataclass
class GraphProperties:
    irreducible: bool
    every_cycle_has_exit: bool
    has_sources: bool
    has_sinks: bool


def graph_properties(g: ModelGraph) -> GraphProperties:
    graph = g.to_networkx()
    n = graph.number_of_nodes()
    irreducible = n > 0 and nx.is_strongly_connected(graph)
    exitless = False
    for component in nx.strongly_connected_components(graph):
        nontrivial = len(component) > 1 or any(graph.has_edge(x, x) for x in component)
        if nontrivial and all(graph.out_degree(x) == 1 for x in component):
            exitless = True
            break
    return GraphProperties(
        irreducible=irreducible,
        every_cycle_has_exit=not exitless,
        has_sources=any(graph.out_degree(x) == 0 for x in graph.nodes),
        has_sinks=any(graph.in_degree(x) == 0 for x in graph.nodes),
    )


@dataclass
class GraphKTheory:
    k0: FinAbGroup
    k1: FinAbGroup


def coker_ker(m: Matrix) -> Tuple[FinAbGroup, FinAbGroup]:
    """Cokernel and kernel of the square integer matrix m acting on Z^n."""
    free = FinAbGroup.free(m.rows)
    f = AbHom(free, free, m, check=False)
    return cokernel(f)[0], kernel(f)[0]


def graph_k_theory(g: ModelGraph) -> GraphKTheory:
    props = graph_properties(g)
    if props.has_sources:
        raise PreconditionError("the graph has vertices without outgoing edges; build it pruned")
    a = adjacency(g)
    k0, k1 = coker_ker(identity(a.rows) - a.T)
    logger.info(f"Graph K-theory: K0 = {k0}, K1 = {k1}")
    return GraphKTheory(k0, k1)


# ---------------------------------------------------------------------------
# Export
# ---------------------------------------------------------------------------

def export_dot(g: ModelGraph) -> str:
    lines = ["digraph {"]
    lines += [f'  "{g.label(i)}";' for i in range(len(g.vertices)) if not any(
        e.src == i or e.dst == i for e in g.edges)]
    lines += [f'  "{g.label(e.src)}" -> "{g.label(e.dst)}" [label="{e.letter}"];' for e in g.edges]
    lines.append("}")
    return "\n".join(lines)


def to_dict(g: ModelGraph) -> Dict[str, Any]:
    return {
        "vertices": [{"id": i, "label": g.label(i)} for i in range(len(g.vertices))],
        "edges": [{"src": e.src, "dst": e.dst, "letter": e.letter} for e in g.edges],
        "provenance": g.provenance,
        "pruned": g.pruned,
    }


def export_json(g: ModelGraph) -> str:
    return json.dumps(to_dict(g), ensure_ascii=False, sort_keys=True)


def import_json(text: str) -> ModelGraph:
    try:
        data = json.loads(text)
        if "vertices" not in data and isinstance(data.get("result"), dict):
            # graph-model report envelope
            data = data["result"]
        vertices = sorted(data["vertices"], key=lambda v: v["id"])
        words = [() if v["label"] == "ε" else tuple(v["label"].split(" ")) if " " in v["label"]
                 else tuple(v["label"]) for v in vertices]
        edges = [ModelEdge(int(e["src"]), int(e["dst"]), str(e["letter"])) for e in data["edges"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"Malformed graph JSON: {exc}")
    if [v["id"] for v in vertices] != list(range(len(vertices))):
        raise ValidationError("Vertex ids must be 0..n-1")
    return ModelGraph(words, edges, data.get("provenance", {}), bool(data.get("pruned", False)))
