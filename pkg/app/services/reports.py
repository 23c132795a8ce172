"""
JSON report builders shared by the command line and the HTTP routers.

Every builder returns an envelope ``{"schema_version", "command",
"determined", "result"}``; ``determined`` is False when the answer is a
verdict of the "unknown" kind (budget, candidates, undetermined extension).
"""
import logging
import random
from typing import Any, Dict, Iterable, List, Optional, Sequence

from ..config import settings
from ..utils import ValidationError, WorkbenchException, jsonable
from . import garside, graph_models, kpipeline
from .abelian import random_valid_diagram, splice
from .reversing import (
    SignedWord, check_cube_condition, check_left_reversible, check_r_homogeneity,
    complement_rules, divides, find_garside_like_w, format_trace, lcm, reverse,
    verify_condition_2_3prime,
)
from .words import Presentation, check_presentation, parse_word, render_word, spell, words_equal

logger = logging.getLogger(__name__)


def envelope(command: str, result: Dict[str, Any], determined: bool = True) -> Dict[str, Any]:
    return {
        "schema_version": settings.schema_version,
        "command": command,
        "determined": determined,
        "result": jsonable(result),
    }


def _presentation_summary(p: Presentation) -> Dict[str, Any]:
    return {"generators": list(p.alphabet),
            "relations": [[spell(u, p), spell(v, p)] for u, v in p.relations]}


# ---------------------------------------------------------------------------
# Words and reversing
# ---------------------------------------------------------------------------

def presentation_check(p: Presentation) -> Dict[str, Any]:
    report = check_presentation(p)
    result = {
        "presentation": _presentation_summary(p),
        "passed": report.passed,
        "one_relator": report.one_relator,
        "flags": report.flags,
    }
    if report.passed and p.is_one_relator and report.first_letters_differ:
        rules = complement_rules(p)
        result["complement_rules"] = [
            {"pair": [s, t], "rule": f"{s}^-1 {t} -> {render_word(x, p)} {render_word(y, p)}^-1"}
            for (s, t), (x, y) in sorted(rules.items())
        ]
    return envelope("presentation check", result)


def word_equal(p: Presentation, x_text: str, y_text: str, budget: Optional[int] = None) -> Dict[str, Any]:
    x, y = parse_word(x_text, p), parse_word(y_text, p)
    verdict = words_equal(x, y, p, budget)
    result = {
        "x": render_word(x, p), "y": render_word(y, p),
        "status": verdict.status, "method": verdict.method, "budget_used": verdict.budget_used,
        "witness": [render_word(w, p) for w in verdict.witness] if verdict.witness else None,
    }
    return envelope("word equal", result, verdict.status != "unknown")


def reverse_word(p: Presentation, text: str, trace: bool = False,
                 budget: Optional[int] = None) -> Dict[str, Any]:
    signed = SignedWord.parse(text, p)
    run = reverse(signed, p, budget, record=trace)
    result: Dict[str, Any] = {
        "start": signed.render(p), "status": run.status,
        "terminal": run.terminal.render(p), "steps": run.step_count,
    }
    if run.terminated:
        x, y = run.split()
        result["numerator"], result["denominator"] = render_word(x, p), render_word(y, p)
    if run.stuck_at:
        result["stuck_at"] = list(run.stuck_at)
    if trace:
        result["trace"] = format_trace(run, p)
    return envelope("reverse", result, run.status != "budget")


def lcm_report(p: Presentation, x_text: str, y_text: str, budget: Optional[int] = None) -> Dict[str, Any]:
    x, y = parse_word(x_text, p), parse_word(y_text, p)
    found = lcm(x, y, p, budget)
    result: Dict[str, Any] = {"x": render_word(x, p), "y": render_word(y, p), "status": found.status}
    if found.status == "found":
        result.update(lcm=render_word(found.join, p), complement_x=render_word(found.comp_x, p),
                      complement_y=render_word(found.comp_y, p), verified=found.verified)
    return envelope("lcm", result, found.status != "unknown")


def divides_report(p: Presentation, x_text: str, z_text: str, budget: Optional[int] = None) -> Dict[str, Any]:
    x, z = parse_word(x_text, p), parse_word(z_text, p)
    verdict = divides(x, z, p, budget)
    result = {"x": render_word(x, p), "z": render_word(z, p), "status": verdict.status,
              "quotient": render_word(verdict.quotient, p) if verdict.quotient is not None else None}
    return envelope("divides", result, verdict.status != "unknown")


def cube_report(p: Presentation, budget: Optional[int] = None) -> Dict[str, Any]:
    report = check_cube_condition(p, budget)
    result = {"status": report.status, "triples_checked": report.triples_checked,
              "counterexample": list(report.counterexample) if report.counterexample else None}
    return envelope("cube", result, report.status != "undetermined")


def homogeneity_report(p: Presentation) -> Dict[str, Any]:
    weights = check_r_homogeneity(p)
    if weights is None:
        return envelope("homog", {"certified": False, "reason": "no homogeneity certificate"})
    return envelope("homog", {"certified": True, "weights": weights.weights, "method": weights.method})


def reversible_report(p: Presentation, bound: int = 8, budget: Optional[int] = None) -> Dict[str, Any]:
    verdict = check_left_reversible(p, bound, budget)
    result = {"status": verdict.status, "reason": verdict.reason,
              "closure": [render_word(w, p) for w in verdict.sigma_prime] if verdict.sigma_prime else None}
    return envelope("reversible", result, verdict.status != "unknown")


def garside_w_report(p: Presentation, length_bound: Optional[int] = None,
                     budget: Optional[int] = None) -> Dict[str, Any]:
    candidate = find_garside_like_w(p, length_bound, budget=budget)
    if candidate is None:
        return envelope("garside-w", {"found": False}, determined=False)
    result: Dict[str, Any] = {
        "found": True, "w": render_word(candidate.w, p),
        "alpha": render_word(candidate.alpha, p), "beta": render_word(candidate.beta, p),
        "gamma": render_word(candidate.gamma, p), "delta": render_word(candidate.delta, p),
    }
    try:
        condition = verify_condition_2_3prime(p, candidate.w, budget)
    except WorkbenchException as e:
        logger.info(f"Prefix condition not applicable: {e.message}")
    else:
        result["prefix_condition"] = {
            "holds": condition.holds,
            "entries": [{"l": e.l, "prefix": render_word(e.prefix, p), "status": e.status,
                         "join": render_word(e.join, p) if e.join is not None else None}
                        for e in condition.entries],
        }
    return envelope("garside-w", result)


# ---------------------------------------------------------------------------
# Graph models
# ---------------------------------------------------------------------------

GRAPH_MODES = ("builtin", "case1", "case2", "nonreversible")


def build_graph(mode: str, p: Optional[Presentation] = None, family: Optional[str] = None,
                m: Optional[int] = None, pq: Sequence[Optional[int]] = (None, None),
                w: Optional[str] = None, pruned: bool = True, all_layers: bool = False,
                extra_loops: int = 0) -> graph_models.ModelGraph:
    if mode == "builtin":
        return graph_models.builtin_model(family or "", m, pq[0], pq[1])
    if p is None:
        if family is None:
            raise ValidationError(f"mode {mode!r} needs a presentation or a family")
        p = graph_models.family_presentation(family, m, pq[0], pq[1])
    if mode == "case1":
        return graph_models.build_reversible_graph_case1(p, pruned)
    if mode == "case2":
        if w is None:
            candidate = find_garside_like_w(p)
            if candidate is None:
                raise ValidationError("no Garside-like element found; pass one explicitly")
            element = candidate.w
        else:
            element = parse_word(w, p)
        return graph_models.build_reversible_graph_case2(p, element, pruned)
    if mode == "nonreversible":
        return graph_models.build_nonreversible_graph(p, all_layers, extra_loops)
    raise ValidationError(f"Unknown graph mode {mode!r}; expected one of {', '.join(GRAPH_MODES)}")


def graph_model_report(graph: graph_models.ModelGraph, dot: bool = False) -> Dict[str, Any]:
    result = graph_models.to_dict(graph)
    props = graph_models.graph_properties(graph)
    result["properties"] = {
        "irreducible": props.irreducible, "every_cycle_has_exit": props.every_cycle_has_exit,
        "has_sources": props.has_sources, "has_sinks": props.has_sinks,
    }
    if dot:
        result["dot"] = graph_models.export_dot(graph)
    return envelope("graph-model", result)


def graph_k_report(graph: graph_models.ModelGraph) -> Dict[str, Any]:
    k = graph_models.graph_k_theory(graph)
    a = graph_models.adjacency(graph)
    result = {
        "vertices": [graph.label(i) for i in range(len(graph.vertices))],
        "adjacency": [[int(a[i, j]) for j in range(a.cols)] for i in range(a.rows)],
        "K0": k.k0.render(), "K1": k.k1.render(),
        "K0_invariants": list(k.k0.invariant_factors), "K1_invariants": list(k.k1.invariant_factors),
    }
    return envelope("graph-k", result)


# ---------------------------------------------------------------------------
# Artin-Tits monoids
# ---------------------------------------------------------------------------

def coxeter_system(type_label: Optional[str] = None,
                   matrix: Optional[List[List[int]]] = None,
                   generators: Optional[List[str]] = None) -> garside.CoxeterSystem:
    if type_label:
        return garside.CoxeterSystem.from_type(type_label, generators)
    if matrix:
        return garside.CoxeterSystem.from_matrix(matrix, generators)
    raise ValidationError("give a Coxeter type or a Coxeter matrix")


def _system_summary(sys: garside.CoxeterSystem) -> Dict[str, Any]:
    return {"label": sys.label, "generators": list(sys.generators),
            "matrix": [list(row) for row in sys.matrix]}


def artin_nf(sys: garside.CoxeterSystem, text: str) -> Dict[str, Any]:
    word = sys.parse_word(text)
    nf = garside.normal_form(word, sys)
    p = sys.presentation()
    result = {
        "system": _system_summary(sys), "word": render_word(word, p),
        "normal_form": [render_word(g.word, p) for g in nf.factors], "nu": nf.nu,
        "left_set": sorted(garside.left_set(nf, sys), key=sys.generators.index),
        "right_set": sorted(garside.right_set(nf, sys), key=sys.generators.index),
    }
    return envelope("artin nf", result)


def artin_equiv(sys: garside.CoxeterSystem, subset: str, source: str, target: str) -> Dict[str, Any]:
    t_set, s_set, r_set = sys.parse_subset(subset), sys.parse_subset(source), sys.parse_subset(target)
    found = garside.equiv_search(sys, t_set, s_set, r_set)
    p = sys.presentation()
    order = sys.generators.index
    result = {
        "system": _system_summary(sys),
        "subset": sorted(t_set, key=order), "source": sorted(s_set, key=order),
        "target": sorted(r_set, key=order), "equivalent": found is not None,
        "witness": [render_word(g.word, p) for g in found.factors] if found is not None else None,
    }
    return envelope("artin equiv", result)


def artin_count_nf(sys: garside.CoxeterSystem, n: int) -> Dict[str, Any]:
    result = {"system": _system_summary(sys), "n": n,
              "elements": len(sys.tables), "p_zero": len(garside.p_zero(sys)),
              "count": garside.infinite_nf_count(sys, n)}
    return envelope("artin count-nf", result)


def artin_delta(sys: garside.CoxeterSystem, subset: Optional[str] = None) -> Dict[str, Any]:
    p = sys.presentation()
    element = garside.delta_T(sys, sys.parse_subset(subset)) if subset else garside.delta(sys)
    result = {"system": _system_summary(sys), "subset": subset,
              "delta": render_word(element.word, p), "length": element.length,
              "elements": len(sys.tables)}
    return envelope("artin delta", result)


# ---------------------------------------------------------------------------
# K-theory
# ---------------------------------------------------------------------------

def ktheory_pipeline(case: kpipeline.PipelineCase, act: kpipeline.CoeffAction,
                     hints: Iterable[str] = (), budget: Optional[int] = None) -> Dict[str, Any]:
    report = kpipeline.k_of_crossed_product(case, act, hints, budget)
    result = report.to_dict()
    k0, k1 = report.groups
    result["K0"] = k0.render() if k0 is not None else None
    result["K1"] = k1.render() if k1 is not None else None
    return envelope("ktheory pipeline", result, report.status == "unique")


def ktheory_boundary(n: Optional[int] = None, p: Optional[Presentation] = None,
                     infinite: bool = False) -> Dict[str, Any]:
    if p is not None:
        k = kpipeline.boundary_quotient_k(p, infinite)
    else:
        k = kpipeline.boundary_k_of_size(None if infinite else n)
    return envelope("ktheory boundary", k.to_dict())


def splice_check(count: int, seed: int) -> Dict[str, Any]:
    """Splice ``count`` random valid ladders and certify each result."""
    rng = random.Random(seed)
    failures = []
    for trial in range(count):
        result = splice(random_valid_diagram(rng))
        if not result.report.exact:
            failures.append({"trial": trial, "node": result.report.failing_node,
                             "reason": result.report.reason})
    return envelope("splice-check", {"count": count, "seed": seed, "passed": count - len(failures),
                                     "failures": failures})
