"""
Command-line front end: ``python -m app.cli <command> ...``.

Reports are JSON on stdout (or ``--out FILE``).  Exit codes: 0 on success,
1 on malformed input or a failed precondition, 2 when the answer is
undetermined (budget exhausted, extension candidates, unknown verdicts).
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from .config import settings
from .dependencies import get_fixture_registry
from .services import graph_models, reports
from .services.kpipeline import KNOWN_HINTS, CoeffAction, PipelineCase
from .services.words import Presentation, parse_presentation
from .utils import ValidationError, WorkbenchException

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_UNDETERMINED = 2


class WorkbenchArgumentParser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# Input helpers
# ---------------------------------------------------------------------------

def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ValidationError(f"Cannot read {path}: {e.strerror}")


def load_presentation(args: argparse.Namespace, required: bool = True,
                      degenerate_ok: bool = False) -> Optional[Presentation]:
    if getattr(args, "presentation", None):
        return parse_presentation(_read(args.presentation), degenerate_ok)
    if getattr(args, "fixture", None):
        loaded = get_fixture_registry().load(args.fixture)
        if not isinstance(loaded, Presentation):
            raise ValidationError(f"{args.fixture!r} is not a presentation fixture")
        return loaded
    if required:
        raise ValidationError("give --presentation FILE or --fixture NAME")
    return None


def load_coefficients(spec: str) -> CoeffAction:
    if spec.strip().lower() == "trivial":
        return CoeffAction.trivial()
    path = Path(spec)
    if path.is_file():
        try:
            data = json.loads(_read(spec))
        except json.JSONDecodeError as e:
            raise ValidationError(f"Coefficient file {spec} is not JSON: {e.msg}")
        return CoeffAction.from_dict(data, name=path.stem)
    return get_fixture_registry().coefficients(spec)


def _coxeter(args: argparse.Namespace):
    matrix = None
    if args.matrix:
        rows = [line.split() for line in _read(args.matrix).splitlines()
                if line.strip() and not line.strip().startswith("#")]
        try:
            matrix = [[int(x) for x in row] for row in rows]
        except ValueError:
            raise ValidationError(f"Coxeter matrix file {args.matrix} has non-integer entries")
    generators = args.generators.split() if args.generators else None
    return reports.coxeter_system(args.type, matrix, generators)


def _graph(args: argparse.Namespace) -> graph_models.ModelGraph:
    if getattr(args, "graph", None):
        return graph_models.import_json(_read(args.graph))
    p = load_presentation(args, required=False)
    return reports.build_graph(
        args.mode, p, args.family, args.m, (args.p, args.q), args.w,
        pruned=not args.unpruned, all_layers=args.all_layers, extra_loops=args.extra_loops,
    )


# ---------------------------------------------------------------------------
# Command handlers
# ---------------------------------------------------------------------------

def _presentation_check(args) -> Dict[str, Any]:
    return reports.presentation_check(load_presentation(args, degenerate_ok=True))


def _word_equal(args) -> Dict[str, Any]:
    return reports.word_equal(load_presentation(args), args.x, args.y, args.budget)


def _reverse(args) -> Dict[str, Any]:
    return reports.reverse_word(load_presentation(args), args.word, args.trace, args.budget)


def _lcm(args) -> Dict[str, Any]:
    return reports.lcm_report(load_presentation(args), args.x, args.y, args.budget)


def _divides(args) -> Dict[str, Any]:
    return reports.divides_report(load_presentation(args), args.x, args.z, args.budget)


def _cube(args) -> Dict[str, Any]:
    return reports.cube_report(load_presentation(args), args.budget)


def _homog(args) -> Dict[str, Any]:
    return reports.homogeneity_report(load_presentation(args))


def _reversible(args) -> Dict[str, Any]:
    return reports.reversible_report(load_presentation(args), args.bound, args.budget)


def _garside_w(args) -> Dict[str, Any]:
    return reports.garside_w_report(load_presentation(args), args.length_bound, args.budget)


def _graph_model(args) -> Dict[str, Any]:
    return reports.graph_model_report(_graph(args), dot=args.format == "dot")


def _graph_k(args) -> Dict[str, Any]:
    return reports.graph_k_report(_graph(args))


def _artin_nf(args) -> Dict[str, Any]:
    return reports.artin_nf(_coxeter(args), args.word)


def _artin_equiv(args) -> Dict[str, Any]:
    return reports.artin_equiv(_coxeter(args), args.subset, args.source, args.target)


def _artin_count(args) -> Dict[str, Any]:
    return reports.artin_count_nf(_coxeter(args), args.n)


def _artin_delta(args) -> Dict[str, Any]:
    return reports.artin_delta(_coxeter(args), args.subset)


def _ktheory_pipeline(args) -> Dict[str, Any]:
    case = PipelineCase.build(args.case, args.m, args.p, args.q)
    return reports.ktheory_pipeline(case, load_coefficients(args.coeff), args.hint or (), args.budget)


def _ktheory_boundary(args) -> Dict[str, Any]:
    p = load_presentation(args, required=False)
    if p is None and args.generators is None and not args.infinite:
        raise ValidationError("give --generators N, --infinite or a presentation")
    return reports.ktheory_boundary(args.generators, p, args.infinite)


def _splice_check(args) -> Dict[str, Any]:
    return reports.splice_check(args.count, args.seed)


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _output_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--pretty", action="store_true", help="Human-readable output instead of JSON.")
    parser.add_argument("--out", help="Write the report to this file.")


def _presentation_options(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--presentation", metavar="FILE", help="Presentation text file.")
    source.add_argument("--fixture", metavar="NAME", help="Built-in fixture, e.g. braid3 or torus(2,3).")
    parser.add_argument("--budget", type=int, default=None, help="Search budget (steps or states).")
    _output_options(parser)


def _graph_options(parser: argparse.ArgumentParser) -> None:
    _presentation_options(parser)
    parser.add_argument("--mode", choices=reports.GRAPH_MODES, default="builtin")
    parser.add_argument("--family", choices=("dihedral", "torus"))
    parser.add_argument("--m", type=int)
    parser.add_argument("--p", type=int)
    parser.add_argument("--q", type=int)
    parser.add_argument("--w", help="Garside-like element for the case-2 model.")
    parser.add_argument("--unpruned", action="store_true", help="Keep lower layers and dead vertices.")
    parser.add_argument("--all-layers", action="store_true")
    parser.add_argument("--extra-loops", type=int, default=0)


def _coxeter_options(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--type", help="Finite type such as A3, B3, D4, E6, H3 or I2(5).")
    source.add_argument("--matrix", metavar="FILE", help="Coxeter matrix file.")
    parser.add_argument("--generators", help="Space separated generator names.")
    _output_options(parser)


def build_parser() -> argparse.ArgumentParser:
    parser = WorkbenchArgumentParser(prog="workbench", description="One-relator monoid and Artin-Tits workbench")
    commands = parser.add_subparsers(dest="command", required=True)

    presentation = commands.add_parser("presentation", help="Presentation checks.")
    presentation_sub = presentation.add_subparsers(dest="action", required=True)
    check = presentation_sub.add_parser("check", help="Validate a presentation and list complement rules.")
    _presentation_options(check)
    check.set_defaults(handler=_presentation_check)

    word = commands.add_parser("word", help="Word problem.")
    word_sub = word.add_subparsers(dest="action", required=True)
    equal = word_sub.add_parser("equal", help="Decide x = y in the monoid.")
    _presentation_options(equal)
    equal.add_argument("x")
    equal.add_argument("y")
    equal.set_defaults(handler=_word_equal)

    rev = commands.add_parser("reverse", help="Right reversing of a signed word such as a^-1 b.")
    _presentation_options(rev)
    rev.add_argument("word")
    rev.add_argument("--trace", action="store_true", help="Include every reversing step.")
    rev.set_defaults(handler=_reverse)

    lcm = commands.add_parser("lcm", help="Right lcm of two words.")
    _presentation_options(lcm)
    lcm.add_argument("x")
    lcm.add_argument("y")
    lcm.set_defaults(handler=_lcm)

    div = commands.add_parser("divides", help="Whether x left-divides z.")
    _presentation_options(div)
    div.add_argument("x")
    div.add_argument("z")
    div.set_defaults(handler=_divides)

    cube = commands.add_parser("cube", help="Cube condition on generator triples.")
    _presentation_options(cube)
    cube.set_defaults(handler=_cube)

    homog = commands.add_parser("homog", help="Homogeneity weights.")
    _presentation_options(homog)
    homog.set_defaults(handler=_homog)

    reversible = commands.add_parser("reversible", help="Left reversibility.")
    _presentation_options(reversible)
    reversible.add_argument("--bound", type=int, default=8, help="Length bound for the closure search.")
    reversible.set_defaults(handler=_reversible)

    garside_w = commands.add_parser("garside-w", help="Search for a Garside-like element.")
    _presentation_options(garside_w)
    garside_w.add_argument("--length-bound", type=int, default=None)
    garside_w.set_defaults(handler=_garside_w)

    graph_model = commands.add_parser("graph-model", help="Build a finite graph model.")
    _graph_options(graph_model)
    graph_model.add_argument("--format", choices=("json", "dot"), default="json")
    graph_model.set_defaults(handler=_graph_model)

    graph_k = commands.add_parser("graph-k", help="K-theory of a graph model.")
    _graph_options(graph_k)
    graph_k.add_argument("--graph", metavar="FILE", help="Graph JSON written by graph-model.")
    graph_k.set_defaults(handler=_graph_k)

    artin = commands.add_parser("artin", help="Artin-Tits monoids of finite type.")
    artin_sub = artin.add_subparsers(dest="action", required=True)
    nf = artin_sub.add_parser("nf", help="Greedy normal form of a word.")
    _coxeter_options(nf)
    nf.add_argument("word")
    nf.set_defaults(handler=_artin_nf)
    equiv = artin_sub.add_parser("equiv", help="Search a normal form linking two subsets.")
    _coxeter_options(equiv)
    equiv.add_argument("--subset", required=True)
    equiv.add_argument("--source", required=True)
    equiv.add_argument("--target", required=True)
    equiv.set_defaults(handler=_artin_equiv)
    count_nf = artin_sub.add_parser("count-nf", help="Count admissible sequences of length n.")
    _coxeter_options(count_nf)
    count_nf.add_argument("--n", type=int, required=True)
    count_nf.set_defaults(handler=_artin_count)
    delta = artin_sub.add_parser("delta", help="The longest element, or Δ_T for a subset.")
    _coxeter_options(delta)
    delta.add_argument("--subset")
    delta.set_defaults(handler=_artin_delta)

    ktheory = commands.add_parser("ktheory", help="K-theory computations.")
    ktheory_sub = ktheory.add_subparsers(dest="action", required=True)
    pipeline = ktheory_sub.add_parser("pipeline", help="K-theory of the boundary crossed product.")
    pipeline.add_argument("--case", choices=("dihedral", "torus"), required=True)
    pipeline.add_argument("--m", type=int)
    pipeline.add_argument("--p", type=int)
    pipeline.add_argument("--q", type=int)
    pipeline.add_argument("--coeff", default="trivial", help="trivial, a fixture name or a JSON file.")
    pipeline.add_argument("--hint", action="append", choices=sorted(KNOWN_HINTS))
    pipeline.add_argument("--budget", type=int, default=None)
    _output_options(pipeline)
    pipeline.set_defaults(handler=_ktheory_pipeline)
    boundary = ktheory_sub.add_parser("boundary", help="K-theory of the boundary quotient.")
    _presentation_options(boundary)
    boundary.add_argument("--generators", type=int)
    boundary.add_argument("--infinite", action="store_true")
    boundary.set_defaults(handler=_ktheory_boundary)

    splice_check = commands.add_parser("splice-check", help="Randomised splicing property check.")
    splice_check.add_argument("--count", type=int, default=200)
    splice_check.add_argument("--seed", type=int, default=0)
    _output_options(splice_check)
    splice_check.set_defaults(handler=_splice_check)
    return parser


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------

def _pretty_lines(value: Any, indent: int = 0) -> List[str]:
    pad = "  " * indent
    if isinstance(value, dict):
        lines = []
        for key, item in value.items():
            if isinstance(item, (dict, list)) and item:
                lines.append(f"{pad}{key}:")
                lines.extend(_pretty_lines(item, indent + 1))
            else:
                lines.append(f"{pad}{key}: {item}")
        return lines
    if isinstance(value, list):
        if all(not isinstance(x, (dict, list)) for x in value):
            return [pad + ", ".join(str(x) for x in value)]
        lines = []
        for item in value:
            lines.extend(_pretty_lines(item, indent))
            lines.append(f"{pad}-")
        return lines[:-1]
    return [f"{pad}{value}"]


def render(payload: Dict[str, Any], pretty: bool = False) -> str:
    if pretty:
        return "\n".join(_pretty_lines(payload))
    return json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=2)


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload = args.handler(args)
    except WorkbenchException as e:
        logger.error(f"{args.command}: {e.message}")
        print(f"error: {e.message}", file=sys.stderr)
        return EXIT_INPUT
    text = render(payload, args.pretty)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return EXIT_OK if payload["determined"] else EXIT_UNDETERMINED


def main() -> None:
    logging.basicConfig(level=getattr(logging, settings.log_level), stream=sys.stderr)
    raise SystemExit(run())


if __name__ == "__main__":
    main()
