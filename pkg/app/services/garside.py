"""
Artin-Tits monoids of finite type.

The Coxeter group W is enumerated by length, deciding equality of reduced
words by braid-move closure.  Each element of W is a simple element of the
monoid; the tables built here (descent sets, multiplication by a generator on
the right, division by a generator on the left) are enough for left-greedy
normal forms, divisibility, meets and joins of arbitrary monoid elements.
"""
import logging
import re
import threading
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from ..config import settings
from ..utils import BudgetExceededError, PreconditionError, ValidationError, timer
from .words import Presentation, Word, parse_word, render_word

logger = logging.getLogger(__name__)

IDENTITY = 0
_TYPE_LABEL = re.compile(r"^\s*([A-Za-z])\s*_?(\d+)\s*(?:\(\s*(\d+)\s*\))?\s*$")


def _alternating(s: str, t: str, m: int) -> Word:
    return tuple(s if k % 2 == 0 else t for k in range(m))


@dataclass(frozen=True, eq=False)
class CoxeterSystem:
    """Generators with a symmetric Coxeter matrix (m_ss = 1, m_st ≥ 2)."""
    generators: Tuple[str, ...]
    matrix: Tuple[Tuple[int, ...], ...]
    label: Optional[str] = None

    def __post_init__(self):
        n = len(self.generators)
        if n == 0 or len(set(self.generators)) != n:
            raise ValidationError("Generators must be nonempty and distinct")
        if len(self.matrix) != n or any(len(row) != n for row in self.matrix):
            raise ValidationError(f"Coxeter matrix must be {n}x{n}")
        for i in range(n):
            if self.matrix[i][i] != 1:
                raise ValidationError("Coxeter matrix must have 1 on the diagonal")
            for j in range(n):
                if self.matrix[i][j] != self.matrix[j][i]:
                    raise ValidationError("Coxeter matrix must be symmetric")
                if i != j and self.matrix[i][j] == 0:
                    raise ValidationError("m_st = ∞ (0) is not of finite type")
                if i != j and self.matrix[i][j] < 2:
                    raise ValidationError("Off-diagonal Coxeter entries must be at least 2")

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence[int]], generators: Optional[Sequence[str]] = None,
                    label: Optional[str] = None) -> "CoxeterSystem":
        names = tuple(generators) if generators else tuple(f"s{i + 1}" for i in range(len(rows)))
        return cls(names, tuple(tuple(int(x) for x in row) for row in rows), label)

    @classmethod
    def from_edges(cls, n: int, edges: Dict[Tuple[int, int], int],
                   generators: Optional[Sequence[str]] = None, label: Optional[str] = None) -> "CoxeterSystem":
        rows = [[1 if i == j else 2 for j in range(n)] for i in range(n)]
        for (i, j), m in edges.items():
            rows[i][j] = rows[j][i] = m
        return cls.from_matrix(rows, generators, label)

    @classmethod
    def from_type(cls, label: str, generators: Optional[Sequence[str]] = None) -> "CoxeterSystem":
        """Finite types A_n, B_n = C_n, D_n, E6-E8, F4, H3, H4 and I2(m)."""
        match = _TYPE_LABEL.match(label)
        if not match:
            raise ValidationError(f"Unrecognised Coxeter type {label!r}")
        family, n, m = match.group(1).upper(), int(match.group(2)), match.group(3)
        path = {(i, i + 1): 3 for i in range(n - 1)}
        if family == "A" and n >= 1:
            edges = path
        elif family in ("B", "C") and n >= 2:
            edges = {**path, (n - 2, n - 1): 4}
        elif family == "D" and n >= 4:
            edges = {(i, i + 1): 3 for i in range(n - 2)}
            edges[(n - 3, n - 1)] = 3
        elif family == "E" and n in (6, 7, 8):
            # Bourbaki numbering: s2 hangs off s4
            edges = {(0, 2): 3, (1, 3): 3, **{(i, i + 1): 3 for i in range(2, n - 1)}}
        elif family == "F" and n == 4:
            edges = {(0, 1): 3, (1, 2): 4, (2, 3): 3}
        elif family == "H" and n in (3, 4):
            edges = {**path, (0, 1): 5}
        elif family == "I" and n == 2 and m is not None and int(m) >= 2:
            edges = {(0, 1): int(m)}
        else:
            raise ValidationError(f"{label!r} is not a finite Coxeter type")
        return cls.from_edges(n, edges, generators, label.strip())

    @cached_property
    def m(self) -> Dict[Tuple[str, str], int]:
        gens = self.generators
        return {(gens[i], gens[j]): self.matrix[i][j] for i in range(len(gens)) for j in range(len(gens))}

    def braid_moves(self) -> List[Tuple[Word, Word]]:
        return [(_alternating(s, t, self.m[s, t]), _alternating(t, s, self.m[s, t]))
                for s in self.generators for t in self.generators if s != t]

    def presentation(self) -> Presentation:
        """The Artin-Tits monoid presentation Δ_{s,t} = Δ_{t,s}."""
        gens = self.generators
        relations = tuple(
            (_alternating(s, t, self.m[s, t]), _alternating(t, s, self.m[s, t]))
            for i, s in enumerate(gens) for t in gens[i + 1:]
        )
        return Presentation(gens, relations)

    def order_key(self, word: Word) -> Tuple[int, Tuple[int, ...]]:
        position = {s: i for i, s in enumerate(self.generators)}
        return len(word), tuple(position[x] for x in word)

    def parse_word(self, text: str) -> Word:
        return parse_word(text, Presentation(self.generators))

    def parse_subset(self, text: str) -> FrozenSet[str]:
        """Read "{s1, s2}" or "s1 s2"; "{}" is the empty subset."""
        names = [x for x in re.split(r"[\s,{}]+", text) if x]
        unknown = [x for x in names if x not in self.generators]
        if unknown:
            raise ValidationError(f"Unknown generator {unknown[0]!r}")
        return frozenset(names)

    @cached_property
    def tables(self) -> "CoxeterTables":
        return enumerate_w(self)


# ---------------------------------------------------------------------------
# Enumeration of W
# ---------------------------------------------------------------------------

def _braid_class(word: Word, moves: Sequence[Tuple[Word, Word]], limit: int) -> List[Word]:
    seen = {word}
    queue = deque([word])
    while queue:
        current = queue.popleft()
        for pattern, image in moves:
            n = len(pattern)
            for i in range(len(current) - n + 1):
                if current[i:i + n] == pattern:
                    nxt = current[:i] + image + current[i + n:]
                    if nxt not in seen:
                        seen.add(nxt)
                        queue.append(nxt)
                        if len(seen) > limit:
                            raise BudgetExceededError("Reduced-word class exceeds the search budget")
    return list(seen)


@dataclass(frozen=True)
class ReducedElement:
    id: int
    word: Word
    length: int


class CoxeterTables:
    """Descent sets and generator multiplication for every element of W."""

    def __init__(self, sys: CoxeterSystem):
        self.sys = sys
        self.index: Dict[Word, int] = {(): IDENTITY}
        self.words: List[Word] = [()]
        self.length: List[int] = [0]
        self.left: List[FrozenSet[str]] = [frozenset()]
        self.right: List[FrozenSet[str]] = [frozenset()]
        self.left_quot: List[Dict[str, int]] = [{}]
        self.right_mult: List[Dict[str, int]] = []
        self._joins: Dict[Tuple[int, int], int] = {}
        self._join_lock = threading.Lock()

    def __len__(self) -> int:
        return len(self.words)

    def add(self, cls: List[Word]) -> int:
        g = len(self.words)
        for word in cls:
            self.index[word] = g
        self.words.append(min(cls, key=self.sys.order_key))
        self.length.append(len(cls[0]))
        self.left.append(frozenset(w[0] for w in cls))
        self.right.append(frozenset(w[-1] for w in cls))
        self.left_quot.append({w[0]: self.index[w[1:]] for w in cls})
        return g

    def element(self, g: int) -> ReducedElement:
        return ReducedElement(g, self.words[g], self.length[g])

    def lookup(self, word: Word) -> Optional[int]:
        """Element id of a reduced word, None when the word is not reduced."""
        return self.index.get(tuple(word))

    @cached_property
    def longest(self) -> int:
        return max(range(len(self.words)), key=lambda g: self.length[g])

    @cached_property
    def by_length(self) -> List[int]:
        return sorted(range(len(self.words)), key=lambda g: self.length[g])

    # -- simple elements ----------------------------------------------------

    def prefix_quotient(self, a: int, g: int) -> Optional[int]:
        """a⁻¹g when a ≺ g in the weak order, else None."""
        h = g
        for s in self.words[a]:
            if s not in self.left[h]:
                return None
            h = self.left_quot[h][s]
        return h

    def simple_join(self, a: int, b: int) -> int:
        """Shortest simple element both a and b left-divide.

        The memo is the only state written after enumeration and is filled
        under a lock.
        """
        key = (min(a, b), max(a, b))
        with self._join_lock:
            found = self._joins.get(key)
        if found is None:
            found = next(
                g for g in self.by_length
                if self.prefix_quotient(a, g) is not None and self.prefix_quotient(b, g) is not None
            )
            with self._join_lock:
                found = self._joins.setdefault(key, found)
        return found

    def simple_product(self, a: int, b: int) -> Optional[int]:
        """a·b when the lengths add, else None."""
        g = a
        for s in self.words[b]:
            if s in self.right[g]:
                return None
            g = self.right_mult[g][s]
        return g

    # -- normal forms -------------------------------------------------------

    def normalize(self, factors: Iterable[int]) -> Tuple[int, ...]:
        """Left-greedy normal form of a product of simple elements."""
        f = [g for g in factors if g != IDENTITY]
        changed = True
        while changed:
            changed = False
            for i in range(len(f) - 1):
                moves = self.left[f[i + 1]] - self.right[f[i]]
                if not moves:
                    continue
                s = min(moves, key=self.sys.generators.index)
                f[i] = self.right_mult[f[i]][s]
                f[i + 1] = self.left_quot[f[i + 1]][s]
                if f[i + 1] == IDENTITY:
                    del f[i + 1]
                changed = True
                break
        return tuple(f)

    def of_word(self, word: Word) -> Tuple[int, ...]:
        return self.normalize(self.index[(s,)] for s in word)

    def spell(self, factors: Sequence[int]) -> Word:
        return tuple(x for g in factors for x in self.words[g])

    def left_divide(self, factors: Sequence[int], s: str) -> Optional[Tuple[int, ...]]:
        """s⁻¹x for x in normal form, None when s is not a left divisor."""
        if not factors or s not in self.left[factors[0]]:
            return None
        return self.normalize((self.left_quot[factors[0]][s],) + tuple(factors[1:]))

    def left_set(self, factors: Sequence[int]) -> FrozenSet[str]:
        return self.left[factors[0]] if factors else frozenset()

    def right_set(self, factors: Sequence[int]) -> FrozenSet[str]:
        reversed_word = tuple(reversed(self.spell(factors)))
        return self.left_set(self.of_word(reversed_word))

    def divides(self, x: Sequence[int], y: Sequence[int]) -> bool:
        current: Optional[Tuple[int, ...]] = tuple(y)
        for s in self.spell(x):
            current = self.left_divide(current, s)
            if current is None:
                return False
        return True

    def meet(self, x: Sequence[int], y: Sequence[int]) -> Tuple[int, ...]:
        common: List[str] = []
        x, y = tuple(x), tuple(y)
        while True:
            shared = self.left_set(x) & self.left_set(y)
            if not shared:
                return self.of_word(tuple(common))
            s = min(shared, key=self.sys.generators.index)
            common.append(s)
            x, y = self.left_divide(x, s), self.left_divide(y, s)

    def join(self, x: Sequence[int], y: Sequence[int]) -> Tuple[int, ...]:
        """Right lcm by reversing x⁻¹y over simple elements."""
        signed = [(g, -1) for g in reversed(x)] + [(g, 1) for g in y]
        i = 0
        while i < len(signed) - 1:
            (a, sa), (b, sb) = signed[i], signed[i + 1]
            if sa < 0 < sb:
                j = self.simple_join(a, b)
                replacement = [(self.prefix_quotient(a, j), 1), (self.prefix_quotient(b, j), -1)]
                signed[i:i + 2] = [(g, s) for g, s in replacement if g != IDENTITY]
                i = max(i - 1, 0)
            else:
                i += 1
        tail = [g for g, s in signed if s > 0]
        return self.normalize(tuple(x) + tuple(tail))


@timer
def enumerate_w(sys: CoxeterSystem, cap: Optional[int] = None) -> CoxeterTables:
    """All of W by length; raises when more than ``cap`` elements appear."""
    cap = cap or settings.coxeter_cap
    budget = settings.effective_bfs_budget
    moves = sys.braid_moves()
    tables = CoxeterTables(sys)
    frontier = [IDENTITY]
    while frontier:
        upcoming = []
        for g in frontier:
            for s in sys.generators:
                if s in tables.right[g]:
                    continue
                word = tables.words[g] + (s,)
                if word in tables.index:
                    continue
                if len(tables) >= cap:
                    raise PreconditionError(f"Not of finite type within cap {cap}")
                upcoming.append(tables.add(_braid_class(word, moves, budget)))
                if len(tables.index) > budget:
                    raise BudgetExceededError(f"Reduced words exceed the search budget {budget}")
        frontier = upcoming
    tables.right_mult = [
        {s: tables.index[tables.words[g] + (s,)] for s in sys.generators if s not in tables.right[g]}
        for g in range(len(tables))
    ]
    logger.info(f"Enumerated {len(tables)} elements of W({sys.label or 'custom'})")
    return tables


# ---------------------------------------------------------------------------
# Monoid elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NormalForm:
    """(g₁, …, g_k) with R(g_i) ⊇ L(g_{i+1}); the empty tuple is the identity."""
    factors: Tuple[ReducedElement, ...]

    @property
    def nu(self) -> int:
        return len(self.factors)

    @property
    def ids(self) -> Tuple[int, ...]:
        return tuple(g.id for g in self.factors)

    @property
    def word(self) -> Word:
        return tuple(x for g in self.factors for x in g.word)

    def render(self, sys: Optional[CoxeterSystem] = None) -> str:
        p = sys.presentation() if sys is not None else None
        return "(" + ", ".join(render_word(g.word, p) for g in self.factors) + ")"


def _nf(sys: CoxeterSystem, ids: Sequence[int]) -> NormalForm:
    return NormalForm(tuple(sys.tables.element(g) for g in ids))


def _ids(sys: CoxeterSystem, x) -> Tuple[int, ...]:
    if isinstance(x, NormalForm):
        return x.ids
    if isinstance(x, ReducedElement):
        return (x.id,) if x.id != IDENTITY else ()
    return sys.tables.of_word(tuple(x))


def normal_form(x: Word, sys: CoxeterSystem) -> NormalForm:
    for s in x:
        if s not in sys.generators:
            raise ValidationError(f"Unknown generator {s!r}")
    return _nf(sys, sys.tables.of_word(tuple(x)))


def is_normal_form(ids: Sequence[int], sys: CoxeterSystem) -> bool:
    t = sys.tables
    if any(g == IDENTITY for g in ids):
        return False
    return all(t.right[ids[i]] >= t.left[ids[i + 1]] for i in range(len(ids) - 1))


def product(x, y, sys: CoxeterSystem) -> NormalForm:
    return _nf(sys, sys.tables.normalize(_ids(sys, x) + _ids(sys, y)))


def divides(x, y, sys: CoxeterSystem) -> bool:
    """x ≺ y, i.e. y ∈ xP."""
    return sys.tables.divides(_ids(sys, x), _ids(sys, y))


def equal(x, y, sys: CoxeterSystem) -> bool:
    return _ids(sys, x) == _ids(sys, y)


def reduced_element(word: Word, sys: CoxeterSystem) -> ReducedElement:
    g = sys.tables.lookup(word)
    if g is None:
        raise PreconditionError(f"{render_word(word)} is not a reduced word")
    return sys.tables.element(g)


def left_set(g, sys: CoxeterSystem) -> FrozenSet[str]:
    return sys.tables.left_set(_ids(sys, g))


def right_set(g, sys: CoxeterSystem) -> FrozenSet[str]:
    return sys.tables.right_set(_ids(sys, g))


def delta(sys: CoxeterSystem) -> ReducedElement:
    return sys.tables.element(sys.tables.longest)


def delta_T(sys: CoxeterSystem, subset: Iterable[str]) -> ReducedElement:
    """Join of the generators in the subset; the identity for the empty set."""
    t = sys.tables
    g = IDENTITY
    for s in sorted(subset, key=sys.generators.index):
        if s not in sys.generators:
            raise ValidationError(f"Unknown generator {s!r}")
        g = t.simple_join(g, t.index[(s,)])
    return t.element(g)


def join(g, h, sys: CoxeterSystem) -> NormalForm:
    return _nf(sys, sys.tables.join(_ids(sys, g), _ids(sys, h)))


def meet(g, h, sys: CoxeterSystem) -> NormalForm:
    return _nf(sys, sys.tables.meet(_ids(sys, g), _ids(sys, h)))


def cylinder_intersects_x0(g, h, sys: CoxeterSystem) -> bool:
    """True when Δ does not divide g ∨ h."""
    joined = sys.tables.join(_ids(sys, g), _ids(sys, h))
    return not joined or joined[0] != sys.tables.longest


# ---------------------------------------------------------------------------
# Equivalence of subsets
# ---------------------------------------------------------------------------

def parabolic_elements(sys: CoxeterSystem, subset: FrozenSet[str]) -> List[int]:
    """P_red(T): simple elements spelled with letters of T only."""
    t = sys.tables
    return [g for g in range(len(t)) if set(t.words[g]) <= subset]


@timer
def equiv_search(sys: CoxeterSystem, subset: Iterable[str], source: Iterable[str],
                 target: Iterable[str]) -> Optional[NormalForm]:
    """A normal form in P_red(T)∖{1, Δ_T} running from L = source to R = target."""
    subset, source, target = frozenset(subset), frozenset(source), frozenset(target)
    for name, part in (("source", source), ("target", target)):
        if not part or not part < subset:
            raise PreconditionError(f"{name} must be a proper nonempty subset of T")
    t = sys.tables
    top = delta_T(sys, subset).id
    pool = [g for g in parabolic_elements(sys, subset) if g not in (IDENTITY, top)]
    parents: Dict[FrozenSet[str], Tuple[Optional[FrozenSet[str]], int]] = {}
    queue = deque()
    for g in pool:
        if t.left[g] == source and t.right[g] not in parents:
            parents[t.right[g]] = (None, g)
            queue.append(t.right[g])
    while queue:
        state = queue.popleft()
        if state == target:
            chain = []
            while state is not None:
                previous, g = parents[state]
                chain.append(g)
                state = previous
            return _nf(sys, chain[::-1])
        for g in pool:
            if t.left[g] <= state and t.right[g] not in parents:
                parents[t.right[g]] = (state, g)
                queue.append(t.right[g])
    return None


# ---------------------------------------------------------------------------
# Infinite normal forms
# ---------------------------------------------------------------------------

def p_zero(sys: CoxeterSystem) -> List[int]:
    """P₀ = P_red∖{1, Δ} in ShortLex order of canonical words."""
    t = sys.tables
    return sorted((g for g in range(len(t)) if g not in (IDENTITY, t.longest)),
                  key=lambda g: sys.order_key(t.words[g]))


def infinite_nf_count(sys: CoxeterSystem, n: int) -> int:
    """Admissible sequences (g₁, …, g_n) over P₀."""
    if n < 1:
        raise PreconditionError("n must be at least 1")
    t = sys.tables
    pool = p_zero(sys)
    counts = {g: 1 for g in pool}
    for _ in range(n - 1):
        by_right: Dict[FrozenSet[str], int] = {}
        for g, c in counts.items():
            by_right[t.right[g]] = by_right.get(t.right[g], 0) + c
        counts = {h: sum(c for r, c in by_right.items() if r >= t.left[h]) for h in pool}
    return sum(counts.values())


def iter_infinite_nf(sys: CoxeterSystem, n: int) -> Iterator[NormalForm]:
    t = sys.tables
    pool = p_zero(sys)

    def extend(prefix: List[int]) -> Iterator[List[int]]:
        if len(prefix) == n:
            yield prefix
            return
        for h in pool:
            if not prefix or t.right[prefix[-1]] >= t.left[h]:
                yield from extend(prefix + [h])

    for seq in extend([]):
        yield _nf(sys, seq)


# ---------------------------------------------------------------------------
# Explicit chain witnesses
# ---------------------------------------------------------------------------

@dataclass
class ChainWitness:
    factors: NormalForm
    source: FrozenSet[str]
    target: FrozenSet[str]
    claimed_source: FrozenSet[str]
    claimed_target: FrozenSet[str]
    is_normal_form: bool

    @property
    def valid(self) -> bool:
        return (self.is_normal_form and self.source == self.claimed_source
                and self.target == self.claimed_target)


def _witness(sys: CoxeterSystem, words: List[Word], claimed_source, claimed_target) -> ChainWitness:
    t = sys.tables
    ids = []
    for w in words:
        g = t.lookup(w)
        if g is None:
            raise PreconditionError(f"{render_word(w)} is not reduced")
        ids.append(g)
    nf = _nf(sys, ids)
    valid_nf = is_normal_form(ids, sys) and t.of_word(nf.word) == tuple(ids)
    return ChainWitness(nf, t.left[ids[0]], t.right[ids[-1]],
                        frozenset(claimed_source), frozenset(claimed_target), valid_nf)


def linear_chain_witness(sys: CoxeterSystem, i: int) -> ChainWitness:
    """{s₁..s_{i−1}} ∼ {s₁..s_i} on a linear diagram s₁ − s₂ − ⋯ − s_k (1 < i < k)."""
    gens = sys.generators
    k = len(gens)
    if not 1 < i < k:
        raise PreconditionError(f"need 1 < i < {k}")
    s_i, s_next = gens[i - 1], gens[i]
    lower = delta_T(sys, gens[:i - 1]).word
    upper = delta_T(sys, gens[:i]).word
    words = [lower + (s_i,), (s_i,) + lower + (s_next,), (s_next,) + upper]
    return _witness(sys, words, gens[:i - 1], gens[:i])


def singleton_chain_witness(sys: CoxeterSystem, chain: Optional[Sequence[str]] = None) -> ChainWitness:
    """{s₁} ∼ {s_k} along a path through s₁s₂²⋯s_{k−1}²s_k."""
    chain = tuple(chain or sys.generators)
    if len(chain) < 2:
        raise PreconditionError("a chain needs at least two generators")
    for s, t in zip(chain, chain[1:]):
        if sys.m[s, t] < 3:
            raise PreconditionError(f"{s} and {t} are not adjacent in the diagram")
    words = [(s, t) for s, t in zip(chain, chain[1:])]
    return _witness(sys, words, {chain[0]}, {chain[-1]})
