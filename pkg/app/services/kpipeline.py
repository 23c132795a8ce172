"""
K-theory of boundary crossed products for the dihedral and torus-knot families.

The pipeline works over the vertex basis of a built-in graph model.  For
each degree i the coefficient group is Z^{r_i} with letter matrices
alpha_i (for a) and beta_i (for b), and a word x = x1...xn acts through
gamma_x = mat(xn) ... mat(x1).

Per degree it assembles the full map j = I - M on the vertex sum, the row
map φ, restricts j to ker φ and reduces the result by tracked unimodular
pivots until the 2r x r block j̃ remains.  K(I) comes from the six-term
sequence through j; K of the crossed product comes from the second
sequence through ι, whose values on the vertex generators are ι∘π.
"""
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from sympy import Matrix

from ..config import settings
from ..utils import BudgetExceededError, ConsistencyError, PreconditionError, ValidationError, timer
from . import fixtures
from .abelian import (
    SUB_IS_DIRECT_SUMMAND, AbHom, ExactnessReport, ExactSeq, ExtensionResult, FinAbGroup,
    check_exact, cokernel, hstack, identity, int_matrix, integer_kernel, is_unimodular,
    is_zero_matrix, kernel, mul, power, solve_extension, vstack, zeros,
)
from .graph_models import ModelGraph, _junction_edges, dihedral_vertices, torus_vertices
from .reversing import divides, lcm
from .words import CanonicalForms, Presentation, Word, spell

logger = logging.getLogger(__name__)

HINT_UNIT_SUMMAND = "unit-summand"
KNOWN_HINTS = frozenset({HINT_UNIT_SUMMAND})


# ---------------------------------------------------------------------------
# Coefficients
# ---------------------------------------------------------------------------

@dataclass
class CoeffAction:
    """Free coefficient groups Z^{rank_i} with invertible letter matrices."""
    rank0: int
    rank1: int
    alpha: Tuple[Matrix, Matrix]
    beta: Tuple[Matrix, Matrix]
    name: str = "custom"

    def __post_init__(self):
        for i, r in enumerate((self.rank0, self.rank1)):
            if r < 0:
                raise ValidationError(f"rank{i} must be non-negative")
            for letter, m in (("alpha", self.alpha[i]), ("beta", self.beta[i])):
                if m.shape != (r, r):
                    raise ValidationError(f"{letter}{i} must be {r}x{r}, got {m.rows}x{m.cols}")
                if not is_unimodular(m):
                    raise ValidationError(f"{letter}{i} is not invertible over the integers")

    @classmethod
    def trivial(cls) -> "CoeffAction":
        return cls(1, 0, (identity(1), zeros(0, 0)), (identity(1), zeros(0, 0)), name="trivial")

    @classmethod
    def from_dict(cls, data: Dict[str, Any], name: str = "custom") -> "CoeffAction":
        try:
            rank0, rank1 = int(data["rank0"]), int(data["rank1"])
            alpha = (int_matrix(data["alpha0"], rank0, rank0), int_matrix(data["alpha1"], rank1, rank1))
            beta = (int_matrix(data["beta0"], rank0, rank0), int_matrix(data["beta1"], rank1, rank1))
        except KeyError as exc:
            raise ValidationError(f"Coefficient data is missing {exc}")
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"Malformed coefficient data: {exc}")
        return cls(rank0, rank1, alpha, beta, name=name)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rank0": self.rank0, "rank1": self.rank1,
            "alpha0": _rows(self.alpha[0]), "beta0": _rows(self.beta[0]),
            "alpha1": _rows(self.alpha[1]), "beta1": _rows(self.beta[1]),
        }

    def rank(self, degree: int) -> int:
        return (self.rank0, self.rank1)[degree]

    def letter(self, degree: int, letter: str) -> Matrix:
        if letter == "a":
            return self.alpha[degree]
        if letter == "b":
            return self.beta[degree]
        raise ValidationError(f"No coefficient matrix for letter {letter!r}")

    def gamma(self, degree: int, word: Word) -> Matrix:
        g = identity(self.rank(degree))
        for letter in word:
            g = mul(self.letter(degree, letter), g)
        return g


def _rows(m: Matrix) -> List[List[int]]:
    return [[int(m[i, j]) for j in range(m.cols)] for i in range(m.rows)]


def coefficient_action(name: str) -> CoeffAction:
    """``trivial`` or one of the built-in coefficient fixtures."""
    if name.strip().lower() == "trivial":
        return CoeffAction.trivial()
    return CoeffAction.from_dict(fixtures.coefficient_fixture(name), name=name)


# ---------------------------------------------------------------------------
# Cases
# ---------------------------------------------------------------------------

@dataclass
class PipelineCase:
    family: str
    params: Dict[str, int]
    presentation: Presentation
    graph: ModelGraph
    w: Word

    @classmethod
    def dihedral(cls, m: int) -> "PipelineCase":
        if m < 3:
            raise ValidationError("dihedral pipeline needs m ≥ 3")
        p = fixtures.dihedral(m)
        vertices = dihedral_vertices(m)
        edges = _junction_edges(vertices, list(p.relators), p.alphabet)
        graph = ModelGraph(vertices, edges, {"model": "builtin", "family": "dihedral", "m": m}, True)
        return cls("dihedral", {"m": m}, p, graph, fixtures.alternating("a", "b", m))

    @classmethod
    def torus(cls, p: int, q: int) -> "PipelineCase":
        if p < 2 or q < 2:
            raise ValidationError("torus pipeline needs p, q ≥ 2")
        if p == q == 2:
            raise PreconditionError("torus(2,2) admits no surjective φ on the built-in vertex list")
        pres = fixtures.torus(p, q)
        if p == 2:
            swap = {"a": "b", "b": "a"}
            vertices = [tuple(swap[x] for x in v) for v in torus_vertices(q, p)]
        else:
            vertices = torus_vertices(p, q)
        edges = _junction_edges(vertices, list(pres.relators), pres.alphabet)
        graph = ModelGraph(vertices, edges, {"model": "builtin", "family": "torus", "p": p, "q": q}, True)
        return cls("torus", {"p": p, "q": q}, pres, graph, ("a",) * p)

    @classmethod
    def build(cls, family: str, m: Optional[int] = None, p: Optional[int] = None,
              q: Optional[int] = None) -> "PipelineCase":
        if family == "dihedral":
            if m is None:
                raise ValidationError("dihedral needs m")
            return cls.dihedral(m)
        if family == "torus":
            if p is None or q is None:
                raise ValidationError("torus needs p and q")
            return cls.torus(p, q)
        raise ValidationError(f"Unknown family {family!r}")

    def reordered(self, order: Sequence[int]) -> "PipelineCase":
        return PipelineCase(self.family, dict(self.params), self.presentation,
                            self.graph.reordered(order), self.w)

    @property
    def label(self) -> str:
        args = ",".join(str(v) for v in self.params.values())
        return f"{self.family}({args})"


def action_mismatches(case: PipelineCase, act: CoeffAction) -> List[str]:
    problems = []
    for u, v in case.presentation.relations:
        for degree in (0, 1):
            left, right = act.gamma(degree, u), act.gamma(degree, v)
            if left != right:
                problems.append(
                    f"degree {degree}: {spell(u)} gives {_rows(left)}, {spell(v)} gives {_rows(right)}")
    return problems


def validate_action(case: PipelineCase, act: CoeffAction) -> bool:
    """Whether the relation holds for the letter matrices in both degrees."""
    problems = action_mismatches(case, act)
    for problem in problems:
        logger.warning(f"Coefficient relation fails for {case.label}: {problem}")
    return not problems


def _require_valid(case: PipelineCase, act: CoeffAction) -> None:
    problems = action_mismatches(case, act)
    if problems:
        raise PreconditionError("Coefficient action violates the relation: " + "; ".join(problems))


# ---------------------------------------------------------------------------
# The full maps j and φ
# ---------------------------------------------------------------------------

def build_full_j(case: PipelineCase, act: CoeffAction, degree: int) -> Matrix:
    """I - M on the vertex sum; block [x][y] of M adds the letter matrix of each edge y -> x."""
    _require_valid(case, act)
    r = act.rank(degree)
    n = len(case.graph.vertices) * r
    out = identity(n)
    for e in case.graph.edges if r else ():
        x, y = e.dst * r, e.src * r
        out[x:x + r, y:y + r] = out[x:x + r, y:y + r] - act.letter(degree, e.letter)
    return out


def _excluded_multiples(case: PipelineCase, vertex: int) -> List[Word]:
    graph = case.graph
    words = [case.w]
    for e in graph.edges:
        if e.src == vertex:
            words.append((e.letter,) + graph.vertices[e.dst])
    return words


def vertex_elements(case: PipelineCase, vertex: int, budget: Optional[int] = None) -> List[Word]:
    """Canonical words of the elements z ∈ vP outside the excluded principal ideals."""
    p = case.presentation
    budget = budget or settings.effective_bfs_budget
    canon = CanonicalForms(p, budget)
    excluded = _excluded_multiples(case, vertex)
    start = case.graph.vertices[vertex]
    seen = set()
    found: List[Word] = []
    queue = deque([start])
    while queue:
        z = queue.popleft()
        key = canon(z)
        if key in seen:
            continue
        seen.add(key)
        if len(seen) > budget:
            raise BudgetExceededError(f"Element search below {spell(start)} exceeded {budget}")
        blocked = False
        for x in excluded:
            verdict = divides(x, z, p)
            if verdict.status == "unknown":
                raise BudgetExceededError(f"Could not decide whether {spell(x)} divides {spell(z)}")
            if verdict.holds:
                blocked = True
                break
        if blocked:
            continue
        found.append(key)
        queue.extend(z + (sigma,) for sigma in p.alphabet)
    return sorted(found, key=lambda w: (len(w), w))


def build_phi(case: PipelineCase, act: CoeffAction, degree: int,
              budget: Optional[int] = None) -> Matrix:
    """Row map on the vertex sum: block v is the sum of gamma_z over vertex_elements(v)."""
    _require_valid(case, act)
    r = act.rank(degree)
    n = len(case.graph.vertices)
    phi = zeros(r, n * r)
    for v in range(n if r else 0):
        total = zeros(r, r)
        for z in vertex_elements(case, v, budget):
            total = total + act.gamma(degree, z)
        phi[:, v * r:(v + 1) * r] = total
    free_src, free_dst = FinAbGroup.free(n * r), FinAbGroup.free(r)
    if not cokernel(AbHom(free_src, free_dst, phi, check=False))[0].is_trivial:
        logger.error(f"φ is not surjective for {case.label} in degree {degree}: {_rows(phi)}")
        raise ConsistencyError(f"φ is not surjective for {case.label} in degree {degree}")
    return phi


def kernel_basis(m: Matrix) -> Matrix:
    """Saturated basis of ker m as columns (n x 0 when the kernel is zero)."""
    return integer_kernel(m)


# ---------------------------------------------------------------------------
# Tracked reduction and the closed form
# ---------------------------------------------------------------------------

@dataclass
class Reduction:
    """U * J * V has the pivots as isolated ±1 entries and ``block`` in the remaining rows/columns."""
    block: Matrix
    status: str  # complete | partial
    U: Matrix
    V: Matrix
    pivots: List[Tuple[int, int]]
    kept_rows: List[int]
    kept_cols: List[int]


def reduce_with_tracking(j: Matrix, phi: Matrix, target_cols: Optional[int] = None) -> Reduction:
    """Restrict j to ker φ and split off ±1 pivots down to a 2r x r block."""
    basis = kernel_basis(phi)
    restricted = mul(j, basis)
    r = phi.rows
    target_cols = r if target_cols is None else target_cols
    n_rows, n_cols = restricted.rows, restricted.cols
    a = _rows(restricted)
    u = [[int(i == k) for k in range(n_rows)] for i in range(n_rows)]
    v = [[int(i == k) for k in range(n_cols)] for i in range(n_cols)]
    rows_left, cols_left = list(range(n_rows)), list(range(n_cols))
    pivots: List[Tuple[int, int]] = []

    while len(cols_left) > target_cols:
        pivot = next(((i, c) for i in rows_left for c in cols_left if abs(a[i][c]) == 1), None)
        if pivot is None:
            break
        i, c = pivot
        e = a[i][c]
        for k in rows_left:
            f = a[k][c] * e
            if k != i and f:
                a[k] = [x - f * y for x, y in zip(a[k], a[i])]
                u[k] = [x - f * y for x, y in zip(u[k], u[i])]
        for k in cols_left:
            f = a[i][k] * e
            if k != c and f:
                for row in a:
                    row[k] -= f * row[c]
                for row in v:
                    row[k] -= f * row[c]
        pivots.append(pivot)
        rows_left.remove(i)
        cols_left.remove(c)

    status = "complete" if len(cols_left) == target_cols else "partial"
    if status == "partial":
        logger.warning(f"Pivot reduction stopped with {len(cols_left)} columns left, wanted {target_cols}")
    block = int_matrix([[a[i][c] for c in cols_left] for i in rows_left], len(rows_left), len(cols_left))
    return Reduction(block, status, int_matrix(u, n_rows, n_rows), int_matrix(v, n_cols, n_cols),
                     pivots, rows_left, cols_left)


def _power_sum(m: Matrix, count: int) -> Matrix:
    """I + m + ... + m^(count-1)."""
    out = zeros(m.rows, m.cols)
    for k in range(count):
        out = out + power(m, k)
    return out


def tilde_j_closed_form(case: PipelineCase, act: CoeffAction, degree: int) -> Matrix:
    _require_valid(case, act)
    a, b = act.alpha[degree], act.beta[degree]
    r = act.rank(degree)
    eye = identity(r)
    if case.family == "torus":
        return vstack(_power_sum(a, case.params["p"]), _power_sum(b, case.params["q"]))
    m = case.params["m"]
    ba, ab = mul(b, a), mul(a, b)
    if m % 2 == 0:
        top = eye - power(ba, m // 2)
        bottom = _power_sum(ba, m // 2) - mul(b, _power_sum(ab, m // 2))
    else:
        chain = eye
        for k in range(m):
            chain = mul(chain, b if k % 2 == 0 else a)
        top = eye + chain
        bottom = _power_sum(ba, (m + 1) // 2) - mul(b, _power_sum(ab, (m - 1) // 2))
    return vstack(top, bottom)


def _coker_ker(m: Matrix) -> Tuple[FinAbGroup, FinAbGroup]:
    f = AbHom(FinAbGroup.free(m.cols), FinAbGroup.free(m.rows), m, check=False)
    return cokernel(f)[0], kernel(f)[0]


# ---------------------------------------------------------------------------
# ι∘π
# ---------------------------------------------------------------------------

def iota_pi(case: PipelineCase, act: CoeffAction, degree: int,
            words: Optional[Sequence[Word]] = None, budget: Optional[int] = None) -> Matrix:
    """Blocks gamma_v - gamma_{v ∨ w}, over the vertices or over the given words."""
    _require_valid(case, act)
    points = list(words) if words is not None else list(case.graph.vertices)
    blocks = []
    for v in points:
        result = lcm(tuple(v), case.w, case.presentation, budget)
        if result.status != "found":
            raise PreconditionError(
                f"No common multiple of {spell(v)} and {spell(case.w)} ({result.status})")
        blocks.append(act.gamma(degree, v) - act.gamma(degree, result.join))
    r = act.rank(degree)
    return hstack(*blocks) if blocks else zeros(r, 0)


# ---------------------------------------------------------------------------
# K(I) and the crossed product
# ---------------------------------------------------------------------------

@dataclass
class DegreeData:
    degree: int
    rank: int
    full_j: Matrix
    phi: Matrix
    kernel_basis: Matrix
    restricted_j: Matrix
    reduction: Reduction
    closed_form: Matrix
    closed_form_agrees: bool
    iota_pi: Matrix


def _degree_data(case: PipelineCase, act: CoeffAction, degree: int,
                 budget: Optional[int], log: List[str]) -> DegreeData:
    j = build_full_j(case, act, degree)
    phi = build_phi(case, act, degree, budget)
    basis = kernel_basis(phi)
    restricted = mul(j, basis)
    reduction = reduce_with_tracking(j, phi)
    closed = tilde_j_closed_form(case, act, degree)
    agrees = _coker_ker(reduction.block) == _coker_ker(closed)
    if not agrees:
        logger.error(f"{case.label} degree {degree}: reduced block disagrees with the closed form")
    ip = iota_pi(case, act, degree, budget=budget)
    if not is_zero_matrix(mul(ip, restricted)):
        logger.error(f"{case.label} degree {degree}: ι∘π does not annihilate j on ker φ")
        raise ConsistencyError(f"ι∘π does not vanish on the image of j in degree {degree}")

    labels = [case.graph.label(v) for v in range(len(case.graph.vertices))]
    r = act.rank(degree)
    if r:
        kept = sorted({labels[i // r] for i in reduction.kept_rows})
        log.append(f"degree {degree}: {len(reduction.pivots)} pivots split off, "
                   f"block {reduction.block.rows}x{reduction.block.cols} on vertices {', '.join(kept)}")
    else:
        log.append(f"degree {degree}: zero coefficient rank")
    return DegreeData(degree, r, j, phi, basis, restricted, reduction, closed, agrees, ip)


@dataclass
class KOfI:
    groups: Tuple[FinAbGroup, FinAbGroup]
    boundary_ranks: Tuple[int, int]
    boundary_bases: Tuple[Matrix, Matrix]
    sequence: ExactSeq
    exactness: ExactnessReport


def _k_of_I(data: Sequence[DegreeData]) -> KOfI:
    groups, frees, sources, bases = [], [], [], []
    for i in (0, 1):
        sources.append(FinAbGroup.free(data[i].restricted_j.cols))
        frees.append(FinAbGroup.free(data[i].restricted_j.rows))
        bases.append(kernel_basis(data[i].restricted_j))
    for i in (0, 1):
        nr = data[i].restricted_j.rows
        f = bases[1 - i].cols
        relations = vstack(data[i].restricted_j, zeros(f, data[i].restricted_j.cols))
        groups.append(FinAbGroup(nr + f, relations))

    maps: List[AbHom] = []
    seq_groups: List[FinAbGroup] = []
    for i in (0, 1):
        nr = data[i].restricted_j.rows
        f = bases[1 - i].cols
        j_map = AbHom(sources[i], frees[i], data[i].restricted_j, check=False)
        pi_map = AbHom(frees[i], groups[i], vstack(identity(nr), zeros(f, nr)), check=False)
        boundary = hstack(zeros(sources[1 - i].n_generators, nr), bases[1 - i])
        d_map = AbHom(groups[i], sources[1 - i], boundary)
        seq_groups += [sources[i], frees[i], groups[i]]
        maps += [j_map, pi_map, d_map]
    sequence = ExactSeq(seq_groups, maps, cyclic=True)
    exactness = check_exact(sequence)
    if not exactness.exact:
        logger.error(f"Six-term sequence for K(I) fails at node {exactness.failing_node}: {exactness.reason}")
        raise ConsistencyError(f"Six-term sequence for K(I) is not exact: {exactness.reason}")
    return KOfI((groups[0], groups[1]), (bases[1].cols, bases[0].cols), (bases[1], bases[0]),
                sequence, exactness)


@timer
def k_of_I(case: PipelineCase, act: CoeffAction, budget: Optional[int] = None) -> KOfI:
    log: List[str] = []
    data = [_degree_data(case, act, i, budget, log) for i in (0, 1)]
    return _k_of_I(data)


@dataclass
class CrossedDegree:
    degree: int
    iota_determined: bool
    extension: ExtensionResult


@dataclass
class KReport:
    case: PipelineCase
    action: CoeffAction
    degrees: List[DegreeData]
    k_of_I: KOfI
    crossed: List[CrossedDegree]
    hints_used: List[str] = field(default_factory=list)
    log: List[str] = field(default_factory=list)

    @property
    def status(self) -> str:
        statuses = {c.extension.status for c in self.crossed}
        if statuses == {"unique"} and all(c.iota_determined for c in self.crossed):
            return "unique"
        return "undetermined" if "undetermined" in statuses else "candidates"

    @property
    def groups(self) -> Tuple[Optional[FinAbGroup], Optional[FinAbGroup]]:
        return self.crossed[0].extension.group, self.crossed[1].extension.group

    def to_dict(self) -> Dict[str, Any]:
        return {
            "case": {"family": self.case.family, **self.case.params,
                     "w": spell(self.case.w),
                     "vertices": [spell(v) for v in self.case.graph.vertices]},
            "coefficients": {"name": self.action.name, **self.action.to_dict()},
            "degrees": [{
                "degree": d.degree,
                "rank": d.rank,
                "j": _rows(d.full_j),
                "phi": _rows(d.phi),
                "kernel_basis": _rows(d.kernel_basis),
                "tilde_j": _rows(d.reduction.block),
                "reduction_status": d.reduction.status,
                "tilde_j_closed_form": _rows(d.closed_form),
                "closed_form_agrees": d.closed_form_agrees,
                "iota_pi": _rows(d.iota_pi),
                "K_I": self.k_of_I.groups[d.degree].render(),
            } for d in self.degrees],
            "sequence_exact": self.k_of_I.exactness.exact,
            "crossed_product": [{
                "degree": c.degree,
                "status": c.extension.status,
                "group": c.extension.group.render() if c.extension.group is not None else None,
                "candidates": [g.render() for g in c.extension.candidates],
                "route": c.extension.route,
                "iota_determined": c.iota_determined,
            } for c in self.crossed],
            "status": self.status,
            "hints_used": list(self.hints_used),
            "log": list(self.log),
        }


def _iota(data: DegreeData, k_i: FinAbGroup, boundary_rank: int,
          hints: FrozenSet[str], used: List[str]) -> Tuple[AbHom, bool]:
    """ι_i on K_i(I); values on boundary classes are known only in degenerate cases or by hint."""
    target = FinAbGroup.free(data.rank)
    determined = boundary_rank == 0 or data.rank == 0
    if not determined and data.degree == 0 and HINT_UNIT_SUMMAND in hints:
        if not is_zero_matrix(data.iota_pi):
            raise ConsistencyError("unit-summand hint requires ι∘π to vanish in degree 0")
        determined = True
        used.append(HINT_UNIT_SUMMAND)
    matrix = hstack(data.iota_pi, zeros(data.rank, boundary_rank))
    return AbHom(k_i, target, matrix), determined


@timer
def k_of_crossed_product(case: PipelineCase, act: CoeffAction, hints: Iterable[str] = (),
                         budget: Optional[int] = None) -> KReport:
    """K_0 and K_1 of the boundary crossed product, extension by extension."""
    hints = frozenset(hints)
    unknown = hints - KNOWN_HINTS
    if unknown:
        raise ValidationError(f"Unknown hints: {sorted(unknown)}")
    if HINT_UNIT_SUMMAND in hints and act.rank0 != 1:
        raise PreconditionError("the unit-summand hint needs rank0 = 1")
    logger.info(f"K-theory pipeline for {case.label} with {act.name} coefficients")

    log: List[str] = []
    data = [_degree_data(case, act, i, budget, log) for i in (0, 1)]
    kI = _k_of_I(data)
    used: List[str] = []
    iotas = [_iota(data[i], kI.groups[i], kI.boundary_ranks[i], hints, used) for i in (0, 1)]

    crossed = []
    for i in (0, 1):
        iota_i, known_i = iotas[i]
        iota_next, known_next = iotas[1 - i]
        sub = cokernel(iota_i)[0]
        quot = kernel(iota_next)[0]
        ext_hints = frozenset({SUB_IS_DIRECT_SUMMAND}) if i == 0 and HINT_UNIT_SUMMAND in hints else frozenset()
        extension = solve_extension(sub, quot, ext_hints)
        if extension.route.startswith("hint:"):
            used.append(HINT_UNIT_SUMMAND)
        determined = known_i and known_next
        if not determined:
            extension = ExtensionResult(
                "undetermined", None, extension.candidates,
                "ι undetermined on boundary classes; candidates assume they map to zero")
            logger.warning(f"{case.label}: K_{i} undetermined without further hints")
        elif not extension.determined:
            logger.warning(f"{case.label}: K_{i} has {len(extension.candidates)} candidates")
        log.append(f"K_{i}: extension of {quot} by {sub} ({extension.route})")
        crossed.append(CrossedDegree(i, determined, extension))

    report = KReport(case, act, data, kI, crossed, sorted(set(used)), log)
    logger.info(f"{case.label}: K(I) = ({kI.groups[0]}, {kI.groups[1]}), status {report.status}")
    return report


# ---------------------------------------------------------------------------
# Boundary quotient
# ---------------------------------------------------------------------------

@dataclass
class BoundaryK:
    k0: FinAbGroup
    unit_class: int
    k1: FinAbGroup
    multiplier: Optional[int]

    def to_dict(self) -> Dict[str, Any]:
        return {"K0": self.k0.render(), "unit_class": self.unit_class, "K1": self.k1.render(),
                "multiplier": self.multiplier}


def boundary_k_of_size(n: Optional[int]) -> BoundaryK:
    """coker and ker of multiplication by 2 - n on Z; n = None stands for infinitely many generators."""
    if n is None:
        return BoundaryK(FinAbGroup.free(1), 1, FinAbGroup.trivial(), None)
    if n < 3:
        raise PreconditionError("the boundary quotient formula needs at least three generators")
    k0, k1 = _coker_ker(int_matrix([[2 - n]]))
    d = n - 2
    return BoundaryK(k0, 1 % d, k1, 2 - n)


def boundary_quotient_k(p: Presentation, infinite: bool = False) -> BoundaryK:
    if not p.is_one_relator:
        raise PreconditionError("the boundary quotient formula needs a one-relator presentation")
    if infinite:
        return boundary_k_of_size(None)
    return boundary_k_of_size(len(p.alphabet))

