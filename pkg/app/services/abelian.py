"""
Exact integer linear algebra on finitely generated abelian groups.

A group is presented by generators and a relation matrix whose columns are
relators; a homomorphism is an integer matrix on generators.  Everything is
reduced to the Smith normal form computed here with tracked unimodular
transforms (U * M * V = S).  Arithmetic is on Python integers, so there is no
overflow; matrices are exchanged as ``sympy.Matrix``.
"""
import itertools
import logging
import random
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd, prod
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from sympy import Matrix

from ..config import settings
from ..utils import ConsistencyError, PreconditionError, ValidationError

logger = logging.getLogger(__name__)

IntMatrix = Matrix


# ---------------------------------------------------------------------------
# Matrix plumbing
# ---------------------------------------------------------------------------

def _lists(m: Matrix) -> List[List[int]]:
    return [[int(m[i, j]) for j in range(m.cols)] for i in range(m.rows)]


def _matrix(rows: Sequence[Sequence[int]], n_rows: int, n_cols: int) -> Matrix:
    return Matrix(n_rows, n_cols, [int(x) for row in rows for x in row])


def int_matrix(rows: Sequence[Sequence[int]], n_rows: Optional[int] = None,
               n_cols: Optional[int] = None) -> Matrix:
    """Build an integer matrix, validating shape and entries."""
    rows = [list(r) for r in rows]
    if n_rows is None:
        n_rows = len(rows)
    if n_cols is None:
        n_cols = len(rows[0]) if rows else 0
    if len(rows) != n_rows or any(len(r) != n_cols for r in rows):
        raise ValidationError(f"Matrix rows must all have length {n_cols}")
    for row in rows:
        for x in row:
            if isinstance(x, bool) or int(x) != x:
                raise ValidationError(f"Matrix entry {x!r} is not an integer")
    _check_size(n_rows, n_cols)
    return _matrix(rows, n_rows, n_cols)


def parse_matrix(text: str) -> Matrix:
    """Parse the matrix file format: one row per line, whitespace separated."""
    rows = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rows.append([int(tok) for tok in line.split()])
        except ValueError:
            raise ValidationError(f"Line {line_no}: non-integer entry in {line!r}")
    return int_matrix(rows)


def format_matrix(m: Matrix) -> str:
    return "\n".join(" ".join(str(x) for x in row) for row in _lists(m))


def _check_size(n_rows: int, n_cols: int) -> None:
    if max(n_rows, n_cols) > settings.max_matrix_side:
        raise ValidationError(
            f"Matrix side {max(n_rows, n_cols)} exceeds limit {settings.max_matrix_side}"
        )


def zeros(n_rows: int, n_cols: int) -> Matrix:
    _check_size(n_rows, n_cols)
    return Matrix.zeros(n_rows, n_cols)


def identity(n: int) -> Matrix:
    _check_size(n, n)
    return Matrix.eye(n)


def hstack(*ms: Matrix) -> Matrix:
    if any(m.rows != ms[0].rows for m in ms):
        raise ValidationError("hstack: row counts differ")
    return Matrix.hstack(*ms)


def vstack(*ms: Matrix) -> Matrix:
    if any(m.cols != ms[0].cols for m in ms):
        raise ValidationError("vstack: column counts differ")
    return Matrix.vstack(*ms)


def block_diag(*ms: Matrix) -> Matrix:
    return Matrix.diag(*ms) if ms else zeros(0, 0)


def diagonal_matrix(values: Sequence[int]) -> Matrix:
    return Matrix.diag(*[int(d) for d in values]) if values else zeros(0, 0)


def columns(m: Matrix, start: int, stop: Optional[int] = None) -> Matrix:
    return m[:, start:m.cols if stop is None else stop]


def rows_of(m: Matrix, start: int, stop: Optional[int] = None) -> Matrix:
    return m[start:m.rows if stop is None else stop, :]


def mul(a: Matrix, b: Matrix) -> Matrix:
    if a.cols != b.rows:
        raise ValidationError(f"Cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    return a * b


def power(m: Matrix, k: int) -> Matrix:
    """m**k, with m**0 the identity (also for 0x0 matrices)."""
    if k == 0 or m.rows == 0:
        return identity(m.rows)
    return m ** k


def is_zero_matrix(m: Matrix) -> bool:
    return all(int(x) == 0 for x in m)


def determinant(m: Matrix) -> int:
    if m.rows != m.cols:
        raise ValidationError("Determinant of a non-square matrix")
    if m.rows == 0:
        return 1
    return int(m.det())


def is_unimodular(m: Matrix) -> bool:
    return m.rows == m.cols and abs(determinant(m)) == 1


def unimodular_inverse(m: Matrix) -> Matrix:
    if not is_unimodular(m):
        raise ValidationError("Matrix is not invertible over the integers")
    if m.rows == 0:
        return zeros(0, 0)
    return int_matrix(_lists(m.inv()))


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

class SmithDecomposition(NamedTuple):
    """U * M * V = S with U, V unimodular and S diagonal (d1 | d2 | ...)."""
    U: Matrix
    S: Matrix
    V: Matrix
    U_inv: Matrix

    @property
    def diagonal(self) -> List[int]:
        return [int(self.S[i, i]) for i in range(min(self.S.rows, self.S.cols))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


class _SmithReducer:
    """Row/column elimination over Z tracking U, U^-1 and V."""

    def __init__(self, m: Matrix):
        self.r, self.c = m.rows, m.cols
        self.a = _lists(m)
        self.u = [[int(i == j) for j in range(self.r)] for i in range(self.r)]
        self.u_inv = [[int(i == j) for j in range(self.r)] for i in range(self.r)]
        self.v = [[int(i == j) for j in range(self.c)] for i in range(self.c)]

    # row operations act on a and u; u_inv receives the inverse column operation
    def swap_rows(self, i: int, k: int) -> None:
        if i == k:
            return
        self.a[i], self.a[k] = self.a[k], self.a[i]
        self.u[i], self.u[k] = self.u[k], self.u[i]
        for row in self.u_inv:
            row[i], row[k] = row[k], row[i]

    def add_row(self, target: int, source: int, factor: int) -> None:
        if factor == 0:
            return
        self.a[target] = [x + factor * y for x, y in zip(self.a[target], self.a[source])]
        self.u[target] = [x + factor * y for x, y in zip(self.u[target], self.u[source])]
        for row in self.u_inv:
            row[source] -= factor * row[target]

    def negate_row(self, i: int) -> None:
        self.a[i] = [-x for x in self.a[i]]
        self.u[i] = [-x for x in self.u[i]]
        for row in self.u_inv:
            row[i] = -row[i]

    def swap_cols(self, j: int, k: int) -> None:
        if j == k:
            return
        for row in self.a:
            row[j], row[k] = row[k], row[j]
        for row in self.v:
            row[j], row[k] = row[k], row[j]

    def add_col(self, target: int, source: int, factor: int) -> None:
        if factor == 0:
            return
        for row in self.a:
            row[target] += factor * row[source]
        for row in self.v:
            row[target] += factor * row[source]

    def _smallest_pivot(self, t: int) -> Optional[Tuple[int, int]]:
        best = None
        for i in range(t, self.r):
            for j in range(t, self.c):
                x = self.a[i][j]
                if x and (best is None or abs(x) < abs(self.a[best[0]][best[1]])):
                    best = (i, j)
        return best

    def run(self) -> SmithDecomposition:
        a = self.a
        for t in range(min(self.r, self.c)):
            pivot = self._smallest_pivot(t)
            if pivot is None:
                break
            self.swap_rows(t, pivot[0])
            self.swap_cols(t, pivot[1])
            while True:
                clean = True
                for i in range(t + 1, self.r):
                    if a[i][t]:
                        self.add_row(i, t, -(a[i][t] // a[t][t]))
                        if a[i][t]:
                            self.swap_rows(t, i)
                            clean = False
                for j in range(t + 1, self.c):
                    if a[t][j]:
                        self.add_col(j, t, -(a[t][j] // a[t][t]))
                        if a[t][j]:
                            self.swap_cols(t, j)
                            clean = False
                if not clean:
                    continue
                offender = next(
                    (i for i in range(t + 1, self.r)
                     for j in range(t + 1, self.c) if a[i][j] % a[t][t]),
                    None,
                )
                if offender is None:
                    break
                self.add_row(t, offender, 1)
            if a[t][t] < 0:
                self.negate_row(t)
        return SmithDecomposition(
            U=_matrix(self.u, self.r, self.r),
            S=_matrix(self.a, self.r, self.c),
            V=_matrix(self.v, self.c, self.c),
            U_inv=_matrix(self.u_inv, self.r, self.r),
        )


def snf(m: Matrix) -> SmithDecomposition:
    """Smith normal form with transforms: U * M * V = S."""
    _check_size(m.rows, m.cols)
    return _SmithReducer(m).run()


def integer_kernel(m: Matrix) -> Matrix:
    """Basis of {x in Z^n : M x = 0} as the columns of the returned matrix."""
    dec = snf(m)
    return columns(dec.V, dec.rank)


def column_basis(g: Matrix) -> Matrix:
    """A basis (as columns) of the lattice spanned by the columns of g."""
    dec = snf(g)
    basis = columns(dec.U_inv, 0, dec.rank)
    return mul(basis, diagonal_matrix(dec.diagonal[:dec.rank]))


def lattice_solve(a: Matrix, b: Matrix) -> Optional[Matrix]:
    """Integer solution X of A X = B, or None when some column has none."""
    if a.rows != b.rows:
        raise ValidationError("lattice_solve: row counts differ")
    dec = snf(a)
    ub = _lists(mul(dec.U, b))
    diag = dec.diagonal
    y = zeros(a.cols, b.cols)
    for j in range(b.cols):
        for i in range(a.rows):
            d = diag[i] if i < len(diag) else 0
            if d == 0:
                if ub[i][j] != 0:
                    return None
            elif ub[i][j] % d:
                return None
            else:
                y[i, j] = ub[i][j] // d
    return mul(dec.V, y)


def in_lattice(generators: Matrix, vectors: Matrix) -> bool:
    return lattice_solve(generators, vectors) is not None


# ---------------------------------------------------------------------------
# Groups and homomorphisms
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FinAbGroup:
    """Z^n modulo the column span of ``relations``; equality is isomorphism."""
    n_generators: int
    relations: Matrix = field(default=None)

    def __post_init__(self):
        if self.relations is None:
            object.__setattr__(self, "relations", zeros(self.n_generators, 0))
        if self.relations.rows != self.n_generators:
            raise ValidationError(
                f"Relation matrix has {self.relations.rows} rows for {self.n_generators} generators"
            )

    @classmethod
    def free(cls, rank: int) -> "FinAbGroup":
        return cls(rank)

    @classmethod
    def trivial(cls) -> "FinAbGroup":
        return cls(0)

    @classmethod
    def cyclic(cls, order: int) -> "FinAbGroup":
        """Z/order, with order 0 meaning Z."""
        return cls(1, int_matrix([[order]]))

    @classmethod
    def from_invariants(cls, factors: Iterable[int]) -> "FinAbGroup":
        factors = [int(d) for d in factors]
        return cls(len(factors), diagonal_matrix(factors))

    @cached_property
    def smith(self) -> SmithDecomposition:
        return snf(self.relations)

    @cached_property
    def invariant_factors(self) -> Tuple[int, ...]:
        """Nontrivial invariant factors d1 | d2 | ... with 0 for each free summand."""
        diag = self.smith.diagonal
        torsion = [d for d in diag if d > 1]
        free = self.n_generators - sum(1 for d in diag if d != 0)
        return tuple(torsion) + (0,) * free

    @property
    def rank(self) -> int:
        return sum(1 for d in self.invariant_factors if d == 0)

    @property
    def torsion(self) -> Tuple[int, ...]:
        return tuple(d for d in self.invariant_factors if d != 0)

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors

    @property
    def is_free(self) -> bool:
        return not self.torsion

    @property
    def order(self) -> Optional[int]:
        return None if self.rank else prod(self.torsion)

    def identical(self, other: "FinAbGroup") -> bool:
        """Same presentation, not merely isomorphic."""
        return self.n_generators == other.n_generators and self.relations == other.relations

    def render(self) -> str:
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"

    def __eq__(self, other) -> bool:
        if not isinstance(other, FinAbGroup):
            return NotImplemented
        return self.invariant_factors == other.invariant_factors

    def __hash__(self) -> int:
        return hash(self.invariant_factors)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"FinAbGroup({self.render()})"


def direct_sum(*groups: FinAbGroup) -> FinAbGroup:
    return FinAbGroup(sum(g.n_generators for g in groups),
                      block_diag(*[g.relations for g in groups]))


@dataclass(frozen=True, eq=False)
class AbHom:
    """Homomorphism given by its matrix on generators (codomain x domain)."""
    domain: FinAbGroup
    codomain: FinAbGroup
    matrix: Matrix
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        if self.matrix.rows != self.codomain.n_generators or self.matrix.cols != self.domain.n_generators:
            raise ValidationError(
                f"Map matrix is {self.matrix.rows}x{self.matrix.cols}, expected "
                f"{self.codomain.n_generators}x{self.domain.n_generators}"
            )
        if self.check and not in_lattice(self.codomain.relations, mul(self.matrix, self.domain.relations)):
            raise ValidationError("Matrix does not send domain relations into codomain relations")

    @classmethod
    def identity(cls, group: FinAbGroup) -> "AbHom":
        return cls(group, group, identity(group.n_generators), check=False)

    @classmethod
    def zero(cls, domain: FinAbGroup, codomain: FinAbGroup) -> "AbHom":
        return cls(domain, codomain, zeros(codomain.n_generators, domain.n_generators), check=False)

    def compose(self, inner: "AbHom") -> "AbHom":
        """self o inner."""
        return AbHom(inner.domain, self.codomain, mul(self.matrix, inner.matrix), check=False)

    def equals(self, other: "AbHom") -> bool:
        if self.matrix.shape != other.matrix.shape:
            return False
        return in_lattice(self.codomain.relations, self.matrix - other.matrix)

    @property
    def is_zero(self) -> bool:
        return in_lattice(self.codomain.relations, self.matrix)

    @property
    def is_surjective(self) -> bool:
        return cokernel(self)[0].is_trivial

    @property
    def is_injective(self) -> bool:
        return kernel(self)[0].is_trivial

    @property
    def is_isomorphism(self) -> bool:
        return self.is_injective and self.is_surjective


def hom_direct_sum(*maps: AbHom) -> AbHom:
    return AbHom(direct_sum(*[f.domain for f in maps]), direct_sum(*[f.codomain for f in maps]),
                 block_diag(*[f.matrix for f in maps]), check=False)


def cokernel(f: AbHom) -> Tuple[FinAbGroup, AbHom]:
    """Cokernel with its projection (identity on generators)."""
    group = FinAbGroup(f.codomain.n_generators, hstack(f.codomain.relations, f.matrix))
    return group, AbHom(f.codomain, group, identity(group.n_generators), check=False)


def _kernel_lattice(f: AbHom) -> Matrix:
    """Basis of {x : f(x) = 0 in the codomain} inside the free cover of the domain."""
    n_dom = f.domain.n_generators
    combined = hstack(f.matrix, -f.codomain.relations)
    solutions = rows_of(integer_kernel(combined), 0, n_dom)
    return column_basis(solutions)


def kernel(f: AbHom) -> Tuple[FinAbGroup, AbHom]:
    """Kernel with its inclusion into the domain."""
    basis = _kernel_lattice(f)
    coords = lattice_solve(basis, f.domain.relations)
    if coords is None:
        raise ConsistencyError("Domain relations are not contained in the kernel lattice")
    group = FinAbGroup(basis.cols, coords)
    return group, AbHom(group, f.domain, basis, check=False)


def image_lattice(f: AbHom) -> Matrix:
    return hstack(f.matrix, f.codomain.relations)


# ---------------------------------------------------------------------------
# Exact sequences
# ---------------------------------------------------------------------------

@dataclass
class ExactSeq:
    """G0 -> G1 -> ... ; with cyclic=True the last map returns to G0."""
    groups: List[FinAbGroup]
    maps: List[AbHom]
    cyclic: bool = False

    def __post_init__(self):
        expected = len(self.groups) if self.cyclic else len(self.groups) - 1
        if len(self.maps) != expected:
            raise ValidationError(f"Sequence of {len(self.groups)} groups needs {expected} maps")
        n = len(self.groups)
        for idx, f in enumerate(self.maps):
            src, dst = self.groups[idx], self.groups[(idx + 1) % n]
            if f.domain.n_generators != src.n_generators or f.codomain.n_generators != dst.n_generators:
                raise ValidationError(f"Map {idx} is not composable with its neighbours")


@dataclass
class ExactnessReport:
    exact: bool
    failing_node: Optional[int] = None
    reason: str = ""


def check_exact(seq: ExactSeq) -> ExactnessReport:
    """Check im = ker at every interior node (every node when cyclic)."""
    n = len(seq.groups)
    nodes = range(n) if seq.cyclic else range(1, n - 1)
    for k in nodes:
        incoming = seq.maps[(k - 1) % n]
        outgoing = seq.maps[k]
        if not outgoing.compose(incoming).is_zero:
            return ExactnessReport(False, k, "composite of consecutive maps is not zero")
        ker_basis = _kernel_lattice(outgoing)
        if not in_lattice(image_lattice(incoming), ker_basis):
            return ExactnessReport(False, k, "kernel is larger than the image")
    return ExactnessReport(True)


# ---------------------------------------------------------------------------
# Splicing two exact rows
# ---------------------------------------------------------------------------

@dataclass
class SpliceBlock:
    """One period of the ladder.

    Top row:    g_check --j--> g --p--> g_bar --d--> (next g_check)
    Bottom row: h_check --k--> h --q--> h_bar --e--> (next h_check)
    Verticals:  phi: g_check -> h_check, pi: g -> h, psi: g_bar -> h_bar.
    """
    j: AbHom
    p: AbHom
    k: AbHom
    q: AbHom
    phi: AbHom
    pi: AbHom
    psi: AbHom
    d: Optional[AbHom] = None
    e: Optional[AbHom] = None


@dataclass
class SpliceDiagram:
    blocks: List[SpliceBlock]
    cyclic: bool = False

    def _connecting(self, idx: int) -> bool:
        return self.cyclic or idx < len(self.blocks) - 1

    def top_row(self) -> ExactSeq:
        return self._row(top=True)

    def bottom_row(self) -> ExactSeq:
        return self._row(top=False)

    def _row(self, top: bool) -> ExactSeq:
        groups, maps = [], []
        for idx, b in enumerate(self.blocks):
            first, second = (b.j, b.p) if top else (b.k, b.q)
            groups += [first.domain, first.codomain, second.codomain]
            maps += [first, second]
            if self._connecting(idx):
                link = b.d if top else b.e
                if link is None:
                    raise PreconditionError(f"Block {idx} is missing its connecting map")
                maps.append(link)
        return ExactSeq(groups, maps, cyclic=self.cyclic)


@dataclass
class SpliceResult:
    sequence: ExactSeq
    kernels: List[Tuple[FinAbGroup, AbHom]]
    report: ExactnessReport


def _solve_in(target: FinAbGroup, image: Matrix, vectors: Matrix) -> Optional[Matrix]:
    """Coordinates c with image * c == vectors modulo the relations of ``target``."""
    sol = lattice_solve(hstack(image, target.relations), vectors)
    return None if sol is None else rows_of(sol, 0, image.cols)


def splice(diagram: SpliceDiagram) -> SpliceResult:
    """Splice two exact rows into ... -> ker(phi_i) -> G_i -> H_i -> ker(phi_i+1) -> ..."""
    for name, row in (("top", diagram.top_row()), ("bottom", diagram.bottom_row())):
        rep = check_exact(row)
        if not rep.exact:
            raise PreconditionError(f"The {name} row is not exact at node {rep.failing_node}: {rep.reason}")

    n = len(diagram.blocks)
    for idx, b in enumerate(diagram.blocks):
        if not b.pi.compose(b.j).equals(b.k.compose(b.phi)):
            raise PreconditionError(f"Square pi o j = k o phi fails in block {idx}")
        if not b.psi.compose(b.p).equals(b.q.compose(b.pi)):
            raise PreconditionError(f"Square psi o p = q o pi fails in block {idx}")
        if diagram._connecting(idx):
            nxt = diagram.blocks[(idx + 1) % n]
            if not nxt.phi.compose(b.d).equals(b.e.compose(b.psi)):
                raise PreconditionError(f"Square phi o d = e o psi fails after block {idx}")
        if not b.psi.is_isomorphism:
            raise PreconditionError(f"psi is not an isomorphism in block {idx}")
        if not b.phi.is_surjective:
            raise PreconditionError(f"phi is not surjective in block {idx}")

    kernels = [kernel(b.phi) for b in diagram.blocks]
    groups: List[FinAbGroup] = []
    maps: List[AbHom] = []
    for idx, b in enumerate(diagram.blocks):
        ker_group, incl = kernels[idx]
        groups += [ker_group, b.pi.domain, b.pi.codomain]
        maps += [b.j.compose(incl), b.pi]
        if diagram._connecting(idx):
            next_ker, next_incl = kernels[(idx + 1) % n]
            g_bar, h_bar = b.psi.domain, b.psi.codomain
            lifted = _solve_in(h_bar, b.psi.matrix, b.q.matrix)
            if lifted is None:
                raise ConsistencyError(f"psi could not be inverted in block {idx}")
            boundary = mul(b.d.matrix, lifted)
            coords = _solve_in(b.d.codomain, next_incl.matrix, boundary)
            if coords is None:
                raise ConsistencyError(f"Connecting map does not land in ker(phi) after block {idx}")
            maps.append(AbHom(b.pi.codomain, next_ker, coords))
    seq = ExactSeq(groups, maps, cyclic=diagram.cyclic)
    report = check_exact(seq)
    if not report.exact:
        logger.error(f"Spliced sequence failed exactness at node {report.failing_node}")
    return SpliceResult(seq, kernels, report)


def _random_unimodular(rng: random.Random, n: int, steps: int = 6) -> Tuple[Matrix, Matrix]:
    t, t_inv = identity(n), identity(n)
    for _ in range(steps if n > 1 else 0):
        i, k = rng.sample(range(n), 2)
        c = rng.choice([-2, -1, 1, 2])
        t[i, :] = t[i, :] + c * t[k, :]
        t_inv[:, k] = t_inv[:, k] - c * t_inv[:, i]
    return t, t_inv


def random_valid_diagram(rng: random.Random) -> SpliceDiagram:
    """A two-block ladder satisfying the splicing hypotheses.

    The bottom row is ker f -> Z^a -> Z^b -> coker f -> 0 -> 0 for a random f;
    the top row adds a random group F to the first two columns, and the middle
    column of the first block is twisted by a random unimodular change of basis.
    """
    a, b = rng.randint(1, 3), rng.randint(1, 3)
    f_mat = int_matrix([[rng.randint(-3, 3) for _ in range(a)] for _ in range(b)])
    za, zb = FinAbGroup.free(a), FinAbGroup.free(b)
    f = AbHom(za, zb, f_mat)
    ker_f, ker_incl = kernel(f)
    coker_f, coker_proj = cokernel(f)
    zero = FinAbGroup.trivial()

    extra = FinAbGroup.from_invariants(rng.sample([0, 0, 2, 3, 4], rng.randint(0, 2)))
    extra_next = FinAbGroup.from_invariants(rng.sample([0, 2, 5], rng.randint(0, 1)))

    g_check0 = direct_sum(ker_f, extra)
    g0_plain = direct_sum(za, extra)
    j0 = hom_direct_sum(ker_incl, AbHom.identity(extra))
    p0 = AbHom(g0_plain, zb, hstack(f_mat, zeros(b, extra.n_generators)), check=False)
    phi0 = AbHom(g_check0, ker_f, hstack(identity(ker_f.n_generators),
                                         zeros(ker_f.n_generators, extra.n_generators)))
    pi0 = AbHom(g0_plain, za, hstack(identity(a), zeros(a, extra.n_generators)))

    t, t_inv = _random_unimodular(rng, g0_plain.n_generators)
    g0 = FinAbGroup(g0_plain.n_generators, mul(t, g0_plain.relations))
    j0 = AbHom(g_check0, g0, mul(t, j0.matrix))
    p0 = AbHom(g0, zb, mul(p0.matrix, t_inv))
    pi0 = AbHom(g0, za, mul(pi0.matrix, t_inv))

    g_check1 = direct_sum(coker_f, extra_next)
    d0 = AbHom(zb, g_check1, vstack(coker_proj.matrix, zeros(extra_next.n_generators, b)))
    j1 = AbHom(g_check1, extra_next, hstack(zeros(extra_next.n_generators, coker_f.n_generators),
                                           identity(extra_next.n_generators)))
    block0 = SpliceBlock(
        j=j0, p=p0, d=d0, k=ker_incl, q=f, e=coker_proj,
        phi=phi0, pi=pi0, psi=AbHom.identity(zb),
    )
    block1 = SpliceBlock(
        j=j1, p=AbHom.zero(extra_next, zero),
        k=AbHom.zero(coker_f, zero), q=AbHom.zero(zero, zero),
        phi=AbHom(g_check1, coker_f, hstack(identity(coker_f.n_generators),
                                            zeros(coker_f.n_generators, extra_next.n_generators))),
        pi=AbHom.zero(extra_next, zero), psi=AbHom.identity(zero),
    )
    return SpliceDiagram([block0, block1], cyclic=False)


# ---------------------------------------------------------------------------
# Extensions
# ---------------------------------------------------------------------------

SUB_IS_DIRECT_SUMMAND = "sub_is_direct_summand"


@dataclass
class ExtensionResult:
    status: str  # unique | candidates | undetermined
    group: Optional[FinAbGroup]
    candidates: List[FinAbGroup]
    route: str

    @property
    def determined(self) -> bool:
        return self.status == "unique"


def solve_extension(sub: FinAbGroup, quot: FinAbGroup, hints: FrozenSet[str] = frozenset(),
                    torsion_bound: Optional[int] = None,
                    candidate_limit: Optional[int] = None) -> ExtensionResult:
    """Classify groups E with 0 -> sub -> E -> quot -> 0 up to isomorphism."""
    torsion_bound = torsion_bound or settings.extension_torsion_bound
    candidate_limit = candidate_limit or settings.extension_candidate_limit
    split = FinAbGroup.from_invariants(sub.invariant_factors + quot.invariant_factors)

    if sub.is_trivial:
        return ExtensionResult("unique", quot, [quot], "trivial subgroup")
    if quot.is_trivial:
        return ExtensionResult("unique", sub, [sub], "trivial quotient")
    if quot.is_free:
        return ExtensionResult("unique", split, [split], "free quotient splits")
    if SUB_IS_DIRECT_SUMMAND in hints:
        return ExtensionResult("unique", split, [split], f"hint:{SUB_IS_DIRECT_SUMMAND}")
    if any(n > torsion_bound for n in quot.torsion):
        logger.warning(f"Extension of {quot} by {sub}: torsion beyond bound {torsion_bound}")
        return ExtensionResult("undetermined", None, [split], "torsion bound exceeded")

    sub_factors = list(sub.invariant_factors)
    ranges = []
    for n in quot.torsion:
        ranges.append([range(gcd(d, n)) if d else range(n) for d in sub_factors])
    total = prod(len(r) for per_n in ranges for r in per_n)
    if total > candidate_limit:
        logger.warning(f"Extension of {quot} by {sub}: {total} classes exceed limit {candidate_limit}")
        return ExtensionResult("undetermined", None, [split], "candidate limit exceeded")

    s = len(sub_factors)
    t = len(quot.torsion)
    n_gen = s + t + quot.rank
    found: Dict[Tuple[int, ...], FinAbGroup] = {}
    for classes in itertools.product(*[itertools.product(*per_n) for per_n in ranges]):
        rels = []
        for i, d in enumerate(sub_factors):
            if d:
                col = [0] * n_gen
                col[i] = d
                rels.append(col)
        for idx, (n, cls) in enumerate(zip(quot.torsion, classes)):
            col = [0] * n_gen
            col[s + idx] = n
            for i, c in enumerate(cls):
                col[i] = -c
            rels.append(col)
        rel_matrix = _matrix([[col[i] for col in rels] for i in range(n_gen)], n_gen, len(rels))
        group = FinAbGroup(n_gen, rel_matrix)
        found.setdefault(group.invariant_factors, group)
    candidates = [FinAbGroup.from_invariants(k) for k in sorted(found)]
    if len(candidates) == 1:
        return ExtensionResult("unique", candidates[0], candidates, "enumeration")
    return ExtensionResult("candidates", None, candidates, "enumeration")
