import random

import pytest
from sympy import ZZ
from sympy.matrices.normalforms import smith_normal_form

from app.config import settings
from app.services.abelian import (
    SUB_IS_DIRECT_SUMMAND, AbHom, ExactSeq, FinAbGroup, block_diag, check_exact, cokernel,
    determinant, hstack, identity, int_matrix, kernel, lattice_solve, mul, power,
    random_valid_diagram, snf, solve_extension, splice, zeros,
)
from app.utils import ValidationError


def _random_matrix(rng: random.Random, max_side: int):
    rows, cols = rng.randint(1, max_side), rng.randint(1, max_side)
    return int_matrix([[rng.randint(-3, 3) for _ in range(cols)] for _ in range(rows)])


def _rows(m):
    return [[int(x) for x in row] for row in m.tolist()]


class TestMatrixHelpers:
    """Block and power helpers on edge shapes."""

    def test_block_diag_with_empty_block(self):
        """A 2x0 block still contributes two rows."""
        m = block_diag(zeros(2, 0), int_matrix([[5]]))
        assert m.shape == (3, 1)
        assert _rows(m) == [[0], [0], [5]]

    def test_block_diag_of_nothing(self):
        """No blocks give the 0x0 matrix."""
        assert block_diag().shape == (0, 0)

    def test_power(self):
        """Powers of a unipotent matrix, with the zeroth power the identity."""
        m = int_matrix([[1, 1], [0, 1]])
        assert _rows(power(m, 3)) == [[1, 3], [0, 1]]
        assert power(m, 0) == identity(2)
        assert power(zeros(0, 0), 4).shape == (0, 0)

    def test_shape_mismatch(self):
        """Products and stacks check their shapes."""
        with pytest.raises(ValidationError):
            mul(zeros(2, 3), zeros(2, 3))
        with pytest.raises(ValidationError):
            hstack(zeros(2, 1), zeros(3, 1))

    def test_size_limit(self):
        """Oversized matrices are refused."""
        with pytest.raises(ValidationError):
            zeros(settings.max_matrix_side + 1, 1)


class TestSmithNormalForm:
    """Smith normal form with transforms."""

    def test_diagonal(self):
        """diag(2, 3) has invariant factors 1, 6."""
        dec = snf(int_matrix([[2, 0], [0, 3]]))
        assert dec.diagonal == [1, 6]

    def test_zero(self):
        """The zero 1x1 matrix stays zero."""
        assert snf(int_matrix([[0]])).diagonal == [0]

    def test_reduced_block(self):
        """The B4 block has invariant factors 1, 2."""
        dec = snf(int_matrix([[2, 2], [-1, 0], [1, 2], [0, 0]]))
        assert dec.diagonal == [1, 2]
        assert dec.rank == 2

    def test_round_trip(self):
        """U·M·V = S with unimodular transforms on random matrices."""
        rng = random.Random(3)
        for _ in range(1000):
            m = _random_matrix(rng, 12)
            dec = snf(m)
            assert mul(mul(dec.U, m), dec.V) == dec.S
            assert abs(determinant(dec.U)) == 1
            assert abs(determinant(dec.V)) == 1
            diag = dec.diagonal
            nonzero = [d for d in diag if d]
            assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))

    def test_matches_sympy(self):
        """Invariant factors agree with sympy's smith_normal_form."""
        rng = random.Random(5)
        for _ in range(200):
            m = _random_matrix(rng, 6)
            theirs = smith_normal_form(m, domain=ZZ)
            expected = sorted(abs(int(theirs[i, i])) for i in range(min(m.shape)) if theirs[i, i] != 0)
            assert sorted(d for d in snf(m).diagonal if d) == expected


class TestGroups:
    """Groups, kernels and cokernels."""

    def test_isomorphism_equality(self):
        """Z/2 + Z/3 is Z/6."""
        assert FinAbGroup.from_invariants([2, 3]) == FinAbGroup.cyclic(6)
        assert FinAbGroup.cyclic(6).render() == "Z/6"

    def test_times_two(self):
        """Z --2--> Z has cokernel Z/2 and zero kernel."""
        z = FinAbGroup.free(1)
        f = AbHom(z, z, int_matrix([[2]]))
        assert cokernel(f)[0] == FinAbGroup.cyclic(2)
        assert kernel(f)[0].is_trivial

    def test_torus_map(self):
        """(p; q) = (2; 4) has cokernel Z + Z/2."""
        f = AbHom(FinAbGroup.free(1), FinAbGroup.free(2), int_matrix([[2], [4]]))
        coker = cokernel(f)[0]
        assert coker.invariant_factors == (2, 0)
        assert coker.render() == "Z + Z/2"

    def test_reduced_block_cokernel(self):
        """The B4 block has cokernel Z² + Z/2 and zero kernel."""
        m = int_matrix([[2, 2], [-1, 0], [1, 2], [0, 0]])
        f = AbHom(FinAbGroup.free(2), FinAbGroup.free(4), m)
        assert cokernel(f)[0].render() == "Z^2 + Z/2"
        assert kernel(f)[0].is_trivial

    def test_ill_defined_map(self):
        """Z/2 -> Z sending the generator to 1 is not well defined."""
        with pytest.raises(ValidationError):
            AbHom(FinAbGroup.cyclic(2), FinAbGroup.free(1), int_matrix([[1]]))

    def test_lattice_solve(self):
        """2x = 4 has a solution, 2x = 3 has none."""
        assert lattice_solve(int_matrix([[2]]), int_matrix([[4]])) == int_matrix([[2]])
        assert lattice_solve(int_matrix([[2]]), int_matrix([[3]])) is None


class TestExactness:
    """Exact sequences and splicing."""

    def test_short_exact(self):
        """Z --2--> Z --> Z/2 is exact in the middle."""
        z, z2 = FinAbGroup.free(1), FinAbGroup.cyclic(2)
        seq = ExactSeq([z, z, z2], [AbHom(z, z, int_matrix([[2]])), AbHom(z, z2, int_matrix([[1]]))])
        assert check_exact(seq).exact

    def test_not_exact(self):
        """A nonzero composite is reported at the middle node."""
        z = FinAbGroup.free(1)
        seq = ExactSeq([z, z, z], [AbHom(z, z, int_matrix([[2]])), AbHom(z, z, int_matrix([[1]]))])
        report = check_exact(seq)
        assert not report.exact
        assert report.failing_node == 1

    def test_random_splices(self):
        """Spliced sequences of random valid ladders are exact."""
        rng = random.Random(0)
        for _ in range(200):
            assert splice(random_valid_diagram(rng)).report.exact


class TestExtensions:
    """Classification of extensions."""

    def test_two_by_two(self):
        """Z/2 by Z/2 leaves Z/2 + Z/2 and Z/4."""
        result = solve_extension(FinAbGroup.cyclic(2), FinAbGroup.cyclic(2))
        assert result.status == "candidates"
        assert [g.render() for g in result.candidates] == ["Z/2 + Z/2", "Z/4"]

    def test_direct_summand_hint(self):
        """The hint picks the split extension."""
        result = solve_extension(FinAbGroup.cyclic(2), FinAbGroup.cyclic(2),
                                 frozenset({SUB_IS_DIRECT_SUMMAND}))
        assert result.determined
        assert result.group == FinAbGroup.from_invariants([2, 2])

    def test_free_quotient_splits(self):
        """Extensions by free groups split."""
        result = solve_extension(FinAbGroup.cyclic(3), FinAbGroup.free(2))
        assert result.determined
        assert result.group.render() == "Z^2 + Z/3"

    def test_trivial_subgroup(self):
        """Nothing to extend."""
        result = solve_extension(FinAbGroup.trivial(), FinAbGroup.cyclic(5))
        assert result.group == FinAbGroup.cyclic(5)
