import random
from concurrent.futures import ThreadPoolExecutor

import pytest

from app.services import garside
from app.services.garside import CoxeterSystem
from app.services.reversing import lcm
from app.utils import PreconditionError, ValidationError


@pytest.fixture(scope="module")
def a3():
    return CoxeterSystem.from_type("A3")


def _random_word(rng: random.Random, sys: CoxeterSystem, max_len: int):
    return tuple(rng.choice(sys.generators) for _ in range(rng.randint(0, max_len)))


class TestCoxeterSystems:
    """Finite types and the enumeration of W."""

    @pytest.mark.parametrize("label,order", [
        ("A2", 6), ("A3", 24), ("B3", 48), ("C3", 48), ("I2(4)", 8), ("I2(5)", 10),
    ])
    def test_group_order(self, label, order):
        """|P_red| equals |W|."""
        assert len(CoxeterSystem.from_type(label).tables) == order

    def test_longest_element(self, a3):
        """Δ of A3 has length 6 and is divisible by every generator."""
        d = garside.delta(a3)
        assert d.length == 6
        assert all(garside.divides((s,), d, a3) for s in a3.generators)

    def test_delta_of_subset(self, a3):
        """Δ_{s1,s2} = s1 s2 s1."""
        assert garside.delta_T(a3, {"s1", "s2"}).word == ("s1", "s2", "s1")

    def test_enumeration_cap(self, a3):
        """A cap below |W| is reported."""
        assert len(garside.enumerate_w(a3)) == 24
        with pytest.raises(PreconditionError):
            garside.enumerate_w(a3, cap=10)

    def test_unknown_type(self):
        """Affine or unknown labels are rejected."""
        with pytest.raises(ValidationError):
            CoxeterSystem.from_type("X5")

    def test_asymmetric_matrix(self):
        """Coxeter matrices must be symmetric."""
        with pytest.raises(ValidationError):
            CoxeterSystem.from_matrix([[1, 3], [4, 1]])

    def test_infinite_entry(self):
        """m_st = ∞ is outside finite type."""
        with pytest.raises(ValidationError):
            CoxeterSystem.from_matrix([[1, 0], [0, 1]])


class TestNormalForms:
    """Left-greedy normal forms."""

    def test_delta_squared(self):
        """Δ² in A2 has two factors, both Δ."""
        a2 = CoxeterSystem.from_type("A2")
        nf = garside.normal_form(a2.parse_word("s1 s2 s1 s1 s2 s1"), a2)
        assert nf.nu == 2
        assert all(g.id == a2.tables.longest for g in nf.factors)

    def test_idempotence(self, a3):
        """The normal form of a normal form's word is itself."""
        rng = random.Random(7)
        for _ in range(10_000):
            nf = garside.normal_form(_random_word(rng, a3, 10), a3)
            assert garside.is_normal_form(nf.ids, a3)
            assert garside.normal_form(nf.word, a3).ids == nf.ids

    def test_braid_relation_equal(self, a3):
        """s1 s2 s1 and s2 s1 s2 are the same element."""
        assert garside.equal(("s1", "s2", "s1"), ("s2", "s1", "s2"), a3)
        assert not garside.equal(("s1", "s3"), ("s1", "s2"), a3)

    def test_descent_sets(self, a3):
        """s1 s3 has both as left and right descents."""
        nf = garside.normal_form(("s1", "s3"), a3)
        assert garside.left_set(nf, a3) == {"s1", "s3"}
        assert garside.right_set(nf, a3) == {"s1", "s3"}

    def test_join_matches_reversing(self, a3):
        """Joins agree with lcm by word reversing."""
        rng = random.Random(11)
        p = a3.presentation()
        for _ in range(1000):
            x, y = _random_word(rng, a3, 5), _random_word(rng, a3, 5)
            found = lcm(x, y, p, verify=False)
            assert found.status == "found"
            assert garside.equal(garside.join(x, y, a3), found.join, a3)

    def test_join_memo_under_threads(self):
        """Concurrent joins on shared tables agree with a sequential run on fresh tables."""
        tables = CoxeterSystem.from_type("A3").tables
        pairs = [(a, b) for a in range(len(tables)) for b in range(len(tables))]
        with ThreadPoolExecutor(max_workers=8) as pool:
            threaded = list(pool.map(lambda ab: tables.simple_join(*ab), pairs))
        fresh = CoxeterSystem.from_type("A3").tables
        assert threaded == [fresh.simple_join(a, b) for a, b in pairs]
        assert len(tables._joins) == len({(min(a, b), max(a, b)) for a, b in pairs})

    def test_meet_divides_both(self, a3):
        """The meet is a common left divisor."""
        x, y = ("s1", "s2", "s3"), ("s1", "s3", "s2")
        m = garside.meet(x, y, a3)
        assert garside.divides(m, x, a3) and garside.divides(m, y, a3)
        assert m.word and m.word[0] == "s1"


class TestEquivalence:
    """Subset equivalence and infinite normal forms."""

    def test_singleton_against_complements(self, a3):
        """Every {t} is linked to every S minus {s}."""
        whole = set(a3.generators)
        for t in a3.generators:
            for s in a3.generators:
                found = garside.equiv_search(a3, whole, {t}, whole - {s})
                assert found is not None, (t, s)
                assert garside.left_set(found.factors[0], a3) == {t}
                assert garside.right_set(found.factors[-1], a3) == whole - {s}

    def test_source_must_be_proper(self, a3):
        """T itself is not a valid source."""
        whole = set(a3.generators)
        with pytest.raises(PreconditionError):
            garside.equiv_search(a3, whole, whole, {"s1"})

    def test_linear_chain(self, a3):
        """{s1} ∼ {s1, s2} by the explicit three-factor witness."""
        witness = garside.linear_chain_witness(a3, 2)
        assert witness.valid
        assert witness.factors.nu == 3

    def test_singleton_chain(self, a3):
        """{s1} ∼ {s3} along the diagram."""
        witness = garside.singleton_chain_witness(a3)
        assert witness.valid
        assert witness.source == {"s1"} and witness.target == {"s3"}

    def test_count_small_cases(self):
        """A2 has four elements of P₀ and eight admissible pairs."""
        a2 = CoxeterSystem.from_type("A2")
        assert garside.infinite_nf_count(a2, 1) == 4
        assert garside.infinite_nf_count(a2, 2) == 8
        assert len(list(garside.iter_infinite_nf(a2, 3))) == garside.infinite_nf_count(a2, 3)

    def test_cylinder_meets_x0(self):
        """s1 ∨ s2 is Δ in A2, s1 ∨ s1 is not."""
        a2 = CoxeterSystem.from_type("A2")
        assert not garside.cylinder_intersects_x0(("s1",), ("s2",), a2)
        assert garside.cylinder_intersects_x0(("s1",), ("s1",), a2)

    def test_count_needs_positive_length(self, a3):
        """n = 0 is rejected."""
        with pytest.raises(PreconditionError):
            garside.infinite_nf_count(a3, 0)
