import pytest

from app.services import fixtures
from app.services.abelian import AbHom, FinAbGroup, cokernel, int_matrix, kernel, zeros
from app.services.kpipeline import (
    HINT_UNIT_SUMMAND, CoeffAction, PipelineCase, boundary_k_of_size, boundary_quotient_k,
    build_full_j, build_phi, coefficient_action, iota_pi, k_of_crossed_product, k_of_I,
    reduce_with_tracking,
    tilde_j_closed_form, validate_action,
)
from app.utils import PreconditionError, ValidationError

Z = FinAbGroup.free(1)
Z2 = FinAbGroup.free(2)
ZERO = FinAbGroup.trivial()


def _rows(m):
    return [[int(x) for x in row] for row in m.tolist()]


@pytest.fixture(scope="module")
def m3():
    return PipelineCase.dihedral(3)


@pytest.fixture(scope="module")
def b4_coeff():
    return coefficient_action("b4-coeff")


@pytest.fixture(scope="module")
def artin_coeff():
    return coefficient_action("artin-rep-coeff")


class TestAssembly:
    """The maps j, φ and ι∘π."""

    def test_full_j_is_identity_minus_adjacency_transpose(self, m3):
        """With trivial coefficients j = I - Aᵗ on the vertex sum."""
        j = build_full_j(m3, CoeffAction.trivial(), 0)
        assert _rows(j) == [[0, 0, -1, 0], [-1, 1, 0, 0], [0, 0, 1, -1], [0, -1, 0, 0]]

    def test_trivial_phi(self, m3):
        """φ for m = 3 is (1, 1, 1, 1)."""
        assert _rows(build_phi(m3, CoeffAction.trivial(), 0)) == [[1, 1, 1, 1]]

    def test_tracked_reduction(self, m3):
        """Pivots split off down to a 2 x 1 block, with transforms kept."""
        act = CoeffAction.trivial()
        j, phi = build_full_j(m3, act, 0), build_phi(m3, act, 0)
        reduction = reduce_with_tracking(j, phi)
        assert reduction.status == "complete"
        assert reduction.block.shape == (2, 1)
        assert len(reduction.pivots) == 2

    def test_reduced_block_closed_form(self, m3, b4_coeff):
        """The B4 block j̃₁."""
        assert _rows(tilde_j_closed_form(m3, b4_coeff, 1)) == [[2, 2], [-1, 0], [1, 2], [0, 0]]

    def test_iota_pi_on_generators(self, m3, b4_coeff):
        """ι∘π evaluated at a and b."""
        ip = iota_pi(m3, b4_coeff, 1, words=[("a",), ("b",)])
        assert _rows(ip) == [[0, -1, 1, -1], [1, 2, 0, 1]]

    def test_braid_relation_holds(self, m3, b4_coeff):
        """αβα = βαβ for the B4 matrices."""
        assert validate_action(m3, b4_coeff)

    def test_relation_violated(self, m3):
        """Matrices that break the relation are refused."""
        bad = CoeffAction(1, 1, (int_matrix([[1]]), int_matrix([[1]])),
                          (int_matrix([[1]]), int_matrix([[-1]])))
        assert not validate_action(m3, bad)
        with pytest.raises(PreconditionError):
            build_full_j(m3, bad, 1)

    def test_singular_matrix_rejected(self):
        """Letter matrices must be invertible over Z."""
        with pytest.raises(ValidationError):
            CoeffAction(1, 0, (int_matrix([[2]]), zeros(0, 0)), (int_matrix([[1]]), zeros(0, 0)))


class TestTrivialCoefficients:
    """Dihedral and torus families with trivial coefficients."""

    @pytest.mark.parametrize("m", [3, 5])
    def test_dihedral_odd(self, m):
        """K(I) = (Z, 0) and the crossed product has (Z, Z)."""
        report = k_of_crossed_product(PipelineCase.dihedral(m), CoeffAction.trivial())
        assert report.k_of_I.groups == (Z, ZERO)
        assert report.status == "unique"
        assert report.groups == (Z, Z)

    @pytest.mark.parametrize("m", [4, 6])
    def test_dihedral_even(self, m):
        """K(I) = (Z², Z) and the crossed product has (Z², Z²)."""
        report = k_of_crossed_product(PipelineCase.dihedral(m), CoeffAction.trivial())
        assert report.k_of_I.groups == (Z2, Z)
        assert report.groups == (Z2, Z2)

    @pytest.mark.parametrize("p,q,g", [(2, 3, 1), (3, 3, 3), (2, 4, 2)])
    def test_torus(self, p, q, g):
        """K(I) = (Z + Z/g, 0) and the crossed product has (Z, Z + Z/g)."""
        report = k_of_crossed_product(PipelineCase.torus(p, q), CoeffAction.trivial())
        expected = FinAbGroup.from_invariants([g, 0])
        assert report.k_of_I.groups == (expected, ZERO)
        assert report.groups == (Z, expected)

    def test_torus_two_two(self):
        """torus(2,2) has no surjective φ on the vertex list."""
        with pytest.raises(PreconditionError):
            PipelineCase.torus(2, 2)

    def test_sequence_is_exact(self, m3):
        """The six-term sequence through j is certified."""
        assert k_of_I(m3, CoeffAction.trivial()).exactness.exact

    def test_vertex_order_is_irrelevant(self):
        """Permuting the vertex basis leaves K(I) unchanged."""
        case = PipelineCase.dihedral(5)
        order = list(reversed(range(len(case.graph.vertices))))
        assert k_of_I(case.reordered(order), CoeffAction.trivial()).groups == \
            k_of_I(case, CoeffAction.trivial()).groups


class TestNontrivialCoefficients:
    """The B4 and Artin-representation coefficient systems."""

    def test_b4_k_of_ideal(self, m3, b4_coeff):
        """K(I) = (Z, Z² + Z/2)."""
        groups = k_of_I(m3, b4_coeff).groups
        assert groups == (Z, FinAbGroup.from_invariants([2, 0, 0]))

    def test_b4_without_hint(self, m3, b4_coeff):
        """Degree 0 is left with two candidates."""
        report = k_of_crossed_product(m3, b4_coeff)
        assert report.status != "unique"
        assert sorted(g.render() for g in report.crossed[0].extension.candidates) == ["Z", "Z + Z/2"]

    def test_b4_with_hint(self, m3, b4_coeff):
        """The unit-summand hint gives (Z + Z/2, Z)."""
        report = k_of_crossed_product(m3, b4_coeff, [HINT_UNIT_SUMMAND])
        assert report.status == "unique"
        assert report.groups == (FinAbGroup.from_invariants([2, 0]), Z)
        assert report.hints_used == [HINT_UNIT_SUMMAND]
        assert all(d.closed_form_agrees for d in report.degrees)

    def test_artin_rep_k_of_ideal(self, m3, artin_coeff):
        """K(I) = (Z², Z⁴)."""
        assert k_of_I(m3, artin_coeff).groups == (Z2, FinAbGroup.free(4))

    def test_artin_rep_block(self, m3, artin_coeff):
        """The reduced block in degree 1 has kernel Z and cokernel Z⁴."""
        block = tilde_j_closed_form(m3, artin_coeff, 1)
        f = AbHom(FinAbGroup.free(block.cols), FinAbGroup.free(block.rows), block)
        assert kernel(f)[0] == Z
        assert cokernel(f)[0] == FinAbGroup.free(4)

    def test_artin_rep_with_hint(self, m3, artin_coeff):
        """(Z³, Z³) once the unit summand is known."""
        report = k_of_crossed_product(m3, artin_coeff, [HINT_UNIT_SUMMAND])
        assert report.groups == (FinAbGroup.free(3), FinAbGroup.free(3))

    def test_artin_rep_undetermined(self, m3, artin_coeff):
        """Without the hint the boundary classes leave ι open."""
        assert k_of_crossed_product(m3, artin_coeff).status == "undetermined"

    def test_unknown_hint(self, m3):
        """Only known hints are accepted."""
        with pytest.raises(ValidationError):
            k_of_crossed_product(m3, CoeffAction.trivial(), ["split-everything"])

    def test_hint_needs_rank_one(self, m3):
        """The unit summand only makes sense for a rank-one degree 0."""
        eye = int_matrix([[1, 0], [0, 1]])
        act = CoeffAction(2, 0, (eye, zeros(0, 0)), (eye, zeros(0, 0)))
        with pytest.raises(PreconditionError):
            k_of_crossed_product(m3, act, [HINT_UNIT_SUMMAND])


class TestBoundaryQuotient:
    """K-theory of the boundary quotient."""

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_finite_alphabet(self, n):
        """K0 = Z/(n-2) with the unit class 1, K1 = 0."""
        k = boundary_k_of_size(n)
        assert k.k0 == FinAbGroup.cyclic(n - 2)
        assert k.unit_class == 1 % (n - 2)
        assert k.k1.is_trivial

    def test_infinite_alphabet(self):
        """Infinitely many generators give (Z, 0)."""
        k = boundary_k_of_size(None)
        assert (k.k0, k.unit_class, k.k1) == (Z, 1, ZERO)

    def test_from_presentation(self):
        """The generator count is read off the presentation."""
        p = fixtures.presentation_fixture("braid3")
        with pytest.raises(PreconditionError):
            boundary_quotient_k(p)
        assert boundary_quotient_k(p, infinite=True).k0 == Z
