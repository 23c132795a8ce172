"""
Built-in presentations and coefficient data.

Names are written like ``braid3``, ``dihedral(5)``, ``torus(2,3)``,
``remstillLCM(1,1)`` or ``ex-u-bj(1,2)``; parameters default where the
family allows it.
"""
import re
from typing import Any, Callable, Dict, List, Tuple

from ..utils import NotFoundError, ValidationError
from .words import Presentation, Word

_NAME = re.compile(r"^\s*([A-Za-z][\w-]*)\s*(?:[(:]\s*([-\d,\s]*)\)?)?\s*$")


def alternating(first: str, second: str, m: int) -> Word:
    return tuple(first if k % 2 == 0 else second for k in range(m))


def braid3() -> Presentation:
    return Presentation(("a", "b"), ((("a", "b", "a"), ("b", "a", "b")),))


def braid4() -> Presentation:
    return Presentation(("a", "b", "c"), (
        (("a", "b", "a"), ("b", "a", "b")),
        (("b", "c", "b"), ("c", "b", "c")),
        (("a", "c"), ("c", "a")),
    ))


def dihedral(m: int) -> Presentation:
    """⟨a, b | (ab)_m = (ba)_m⟩."""
    if m < 2:
        raise ValidationError("dihedral(m) needs m ≥ 2")
    return Presentation(("a", "b"), ((alternating("a", "b", m), alternating("b", "a", m)),))


def torus(p: int, q: int) -> Presentation:
    """⟨a, b | a^p = b^q⟩."""
    if p < 2 or q < 2:
        raise ValidationError("torus(p, q) needs p, q ≥ 2")
    return Presentation(("a", "b"), ((("a",) * p, ("b",) * q),))


def remstill_lcm(d: int = 1, c: int = 1) -> Presentation:
    """⟨a, b | b^d a b^c = a⟩: right LCM without a homogeneity certificate."""
    if d < 1 or c < 1:
        raise ValidationError("remstillLCM(d, c) needs d, c ≥ 1")
    return Presentation(("a", "b"), ((("b",) * d + ("a",) + ("b",) * c, ("a",)),))


def ex_u_bj(i: int = 1, j: int = 2, k: int = 1) -> Presentation:
    """⟨a, b | b^j = (a b^i)^k a⟩."""
    if i < 1 or j < 1 or k < 1:
        raise ValidationError("ex-u-bj(i, j, k) needs positive parameters")
    v = (("a",) + ("b",) * i) * k + ("a",)
    return Presentation(("a", "b"), ((("b",) * j, v),))


PRESENTATION_FIXTURES: Dict[str, Callable[..., Presentation]] = {
    "braid3": braid3,
    "braid4": braid4,
    "dihedral": dihedral,
    "torus": torus,
    "remstilllcm": remstill_lcm,
    "ex-u-bj": ex_u_bj,
}

COEFFICIENT_FIXTURES: Dict[str, Dict[str, Any]] = {
    "b4-coeff": {
        "family": "dihedral", "params": {"m": 3},
        "rank0": 1, "rank1": 2,
        "alpha0": [[1]], "beta0": [[1]],
        "alpha1": [[1, 1], [0, 1]], "beta1": [[2, 1], [-1, 0]],
    },
    "artin-rep-coeff": {
        "family": "dihedral", "params": {"m": 3},
        "rank0": 1, "rank1": 3,
        "alpha0": [[1]], "beta0": [[1]],
        "alpha1": [[0, 1, 0], [1, 0, 0], [0, 0, 1]],
        "beta1": [[1, 0, 0], [0, 0, 1], [0, 1, 0]],
    },
}


def parse_fixture_name(name: str) -> Tuple[str, List[int]]:
    match = _NAME.match(name)
    if not match:
        raise ValidationError(f"Malformed fixture name {name!r}")
    key = match.group(1).lower()
    raw = match.group(2) or ""
    try:
        params = [int(x) for x in raw.split(",") if x.strip()]
    except ValueError:
        raise ValidationError(f"Malformed fixture parameters in {name!r}")
    return key, params


def presentation_fixture(name: str) -> Presentation:
    key, params = parse_fixture_name(name)
    builder = PRESENTATION_FIXTURES.get(key)
    if builder is None:
        raise NotFoundError(f"Unknown fixture {name!r}")
    try:
        return builder(*params)
    except TypeError:
        raise ValidationError(f"Wrong number of parameters for fixture {key!r}")


def coefficient_fixture(name: str) -> Dict[str, Any]:
    key, _ = parse_fixture_name(name)
    if key not in COEFFICIENT_FIXTURES:
        raise NotFoundError(f"Unknown coefficient fixture {name!r}")
    return COEFFICIENT_FIXTURES[key]


def fixture_names() -> List[str]:
    return sorted(PRESENTATION_FIXTURES) + sorted(COEFFICIENT_FIXTURES)
