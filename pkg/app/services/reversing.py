"""
Right reversing for complemented monoid presentations.

A relation σs = τt with distinct first letters gives the complement rule
σ⁻¹τ ↷ s t⁻¹.  Reversing a signed word applies these rules (and the free
cancellation σ⁻¹σ ↷ ε) at the leftmost σ⁻¹τ factor until none is left,
producing x y⁻¹ with x, y positive.  Common multiples, divisibility and the
cube condition are all read off from such terminals.
"""
import itertools
import logging
from dataclasses import dataclass, field
from math import lcm as int_lcm
from typing import Dict, List, Optional, Sequence, Tuple

from ..config import settings
from ..utils import BudgetExceededError, ConsistencyError, PreconditionError, timer
from .words import (
    EMPTY, CanonicalForms, Presentation, Word, canonical_word, count, overlap_set,
    parse_signed_tokens, render_word, words_equal,
)

logger = logging.getLogger(__name__)

Letter = Tuple[str, int]
ComplementTable = Dict[Tuple[str, str], Tuple[Word, Word]]


@dataclass(frozen=True)
class SignedWord:
    """A word over Σ ∪ Σ⁻¹ stored as (generator, ±1) pairs."""
    letters: Tuple[Letter, ...] = ()

    @classmethod
    def positive(cls, word: Word) -> "SignedWord":
        return cls(tuple((x, 1) for x in word))

    @classmethod
    def negative(cls, word: Word) -> "SignedWord":
        """The inverse w⁻¹ of the positive word w."""
        return cls(tuple((x, -1) for x in reversed(word)))

    @classmethod
    def fraction(cls, x: Word, y: Word) -> "SignedWord":
        """x⁻¹y, the input whose reversing compares x and y."""
        return cls.negative(x) + cls.positive(y)

    @classmethod
    def parse(cls, text: str, p: Presentation) -> "SignedWord":
        return cls(tuple(parse_signed_tokens(text, p, allow_negative=True)))

    def inverse(self) -> "SignedWord":
        return SignedWord(tuple((x, -s) for x, s in reversed(self.letters)))

    def __add__(self, other: "SignedWord") -> "SignedWord":
        return SignedWord(self.letters + other.letters)

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def is_positive(self) -> bool:
        return all(s > 0 for _, s in self.letters)

    @property
    def is_fraction(self) -> bool:
        """True when the word has the shape x y⁻¹ (no σ⁻¹τ factor)."""
        signs = [s for _, s in self.letters]
        return signs == sorted(signs, reverse=True)

    def split(self) -> Tuple[Word, Word]:
        """(x, y) for a word of the shape x y⁻¹."""
        if not self.is_fraction:
            raise PreconditionError(f"{self.render()} is not of the form x y^-1")
        x = tuple(a for a, s in self.letters if s > 0)
        y = tuple(a for a, s in reversed(self.letters) if s < 0)
        return x, y

    def render(self, p: Optional[Presentation] = None) -> str:
        if not self.letters:
            return "ε"
        sep = "" if p is not None and p.symbol_width == 1 and self.is_positive else " "
        parts: List[str] = []
        i = 0
        while i < len(self.letters):
            j = i
            while j < len(self.letters) and self.letters[j] == self.letters[i]:
                j += 1
            letter, sign = self.letters[i]
            n = (j - i) * sign
            parts.append(letter if n == 1 else f"{letter}^{n}")
            i = j
        return sep.join(parts)


def complement_rules(p: Presentation) -> ComplementTable:
    """The table (σ, τ) -> (s, t) with σs = τt a defining relation."""
    table: ComplementTable = {}
    for u, v in p.relations:
        if u[0] == v[0]:
            raise PreconditionError(
                f"Relation {render_word(u, p)} = {render_word(v, p)} has equal first letters; "
                "the presentation is not complemented"
            )
        for left, right in ((u, v), (v, u)):
            key = (left[0], right[0])
            if key in table:
                raise PreconditionError(
                    f"Two relations start with {key[0]!r} and {key[1]!r}; the presentation is not complemented"
                )
            table[key] = (left[1:], right[1:])
    return table


# ---------------------------------------------------------------------------
# Reversing
# ---------------------------------------------------------------------------

@dataclass
class ReversingStep:
    position: int
    rule: str
    result: Optional[SignedWord] = None


@dataclass
class ReversingTrace:
    start: SignedWord
    terminal: SignedWord
    status: str  # terminated | stuck | budget
    steps: List[ReversingStep] = field(default_factory=list)
    step_count: int = 0
    stuck_at: Optional[Tuple[str, str]] = None

    @property
    def terminated(self) -> bool:
        return self.status == "terminated"

    def split(self) -> Tuple[Word, Word]:
        return self.terminal.split()


def _first_factor(letters: Sequence[Letter], start: int) -> int:
    for i in range(max(start, 0), len(letters) - 1):
        if letters[i][1] < 0 and letters[i + 1][1] > 0:
            return i
    return -1


def reverse(w: SignedWord, p: Presentation, budget: Optional[int] = None,
            record: bool = True, rules: Optional[ComplementTable] = None) -> ReversingTrace:
    """Leftmost right reversing of w; ``record`` keeps every intermediate word."""
    budget = budget or settings.effective_reversing_budget
    rules = rules if rules is not None else complement_rules(p)
    letters = list(w.letters)
    steps: List[ReversingStep] = []
    used = 0
    i = _first_factor(letters, 0)
    while i >= 0:
        if used >= budget:
            logger.warning(f"reverse: budget {budget} exhausted on {w.render(p)}")
            return ReversingTrace(w, SignedWord(tuple(letters)), "budget", steps, used)
        (sigma, _), (tau, _) = letters[i], letters[i + 1]
        if sigma == tau:
            replacement: List[Letter] = []
            rule = f"{sigma}^-1 {tau} → ε"
        elif (sigma, tau) in rules:
            s, t = rules[(sigma, tau)]
            replacement = [(x, 1) for x in s] + [(x, -1) for x in reversed(t)]
            rule = f"{sigma}^-1 {tau} → {SignedWord(tuple(replacement)).render(p)}"
        else:
            return ReversingTrace(w, SignedWord(tuple(letters)), "stuck", steps, used, (sigma, tau))
        letters[i:i + 2] = replacement
        used += 1
        if record:
            steps.append(ReversingStep(i, rule, SignedWord(tuple(letters))))
        i = _first_factor(letters, i - 1)
    return ReversingTrace(w, SignedWord(tuple(letters)), "terminated", steps, used)


def format_trace(trace: ReversingTrace, p: Optional[Presentation] = None) -> List[str]:
    lines = [f"start: {trace.start.render(p)}"]
    lines += [f"pos {step.position}: {step.rule}" for step in trace.steps]
    lines.append(f"{trace.status}: {trace.terminal.render(p)}")
    return lines


# ---------------------------------------------------------------------------
# Cube condition
# ---------------------------------------------------------------------------

@dataclass
class CubeReport:
    status: str  # holds | fails | undetermined
    counterexample: Optional[Tuple[str, str, str]] = None
    triples_checked: int = 0

    @property
    def holds(self) -> Optional[bool]:
        return {"holds": True, "fails": False}.get(self.status)


@timer
def check_cube_condition(p: Presentation, budget: Optional[int] = None) -> CubeReport:
    """Exhaustive check of the cube condition on generator triples."""
    rules = complement_rules(p)
    checked = 0
    undetermined = None
    for sigma, tau, upsilon in itertools.product(p.alphabet, repeat=3):
        checked += 1
        word = SignedWord(((sigma, -1), (tau, 1), (tau, -1), (upsilon, 1)))
        first = reverse(word, p, budget, record=False, rules=rules)
        if first.status == "stuck":
            continue
        if first.status == "budget":
            undetermined = undetermined or (sigma, tau, upsilon)
            continue
        x, y = first.split()
        second = reverse(SignedWord.fraction((sigma,) + x, (upsilon,) + y), p, budget,
                         record=False, rules=rules)
        if second.status == "budget":
            undetermined = undetermined or (sigma, tau, upsilon)
        elif second.status == "stuck" or second.terminal.letters:
            logger.info(f"Cube condition fails at {(sigma, tau, upsilon)}")
            return CubeReport("fails", (sigma, tau, upsilon), checked)
    if undetermined:
        logger.warning(f"Cube condition undetermined at {undetermined}")
        return CubeReport("undetermined", undetermined, checked)
    return CubeReport("holds", None, checked)


# ---------------------------------------------------------------------------
# Homogeneity
# ---------------------------------------------------------------------------

@dataclass
class HomogeneityWeights:
    weights: Dict[str, int]
    certified: bool
    method: str = ""

    def weigh(self, word: Word) -> int:
        return sum(self.weights[x] for x in word)


def check_r_homogeneity(p: Presentation, search_bound: int = 6) -> Optional[HomogeneityWeights]:
    """Positive weights λ with λ(u) = λ(v), or None when no certificate exists."""
    u, v = p.relation
    if len(u) == len(v):
        return HomogeneityWeights({s: 1 for s in p.alphabet}, True, "length")
    if len(u) > len(v):
        u, v = v, u
    for sigma in p.alphabet:
        excess = count(u, sigma) - count(v, sigma)
        if excess <= 0:
            continue
        delta = (len(v) - count(v, sigma)) - (len(u) - count(u, sigma))
        common = int_lcm(delta, excess)
        eta, zeta = common // delta, common // excess
        weights = HomogeneityWeights({s: zeta if s == sigma else eta for s in p.alphabet}, True,
                                     f"letter {sigma}")
        if weights.weigh(u) != weights.weigh(v):
            raise ConsistencyError(f"Weights {weights.weights} do not balance the relation")
        return weights
    # no letter is heavier in the shorter relator; a small search confirms it
    for combo in itertools.product(range(1, search_bound + 1), repeat=len(p.alphabet)):
        weights = HomogeneityWeights(dict(zip(p.alphabet, combo)), True, "search")
        if weights.weigh(u) == weights.weigh(v):
            return weights
    return None


# ---------------------------------------------------------------------------
# Common multiples and divisibility
# ---------------------------------------------------------------------------

@dataclass
class LcmResult:
    status: str  # found | disjoint | unknown
    join: Optional[Word] = None
    comp_x: Optional[Word] = None
    comp_y: Optional[Word] = None
    verified: Optional[str] = None


def lcm(x: Word, y: Word, p: Presentation, budget: Optional[int] = None,
        verify: bool = True) -> LcmResult:
    """Right lcm of x and y: x·comp_x = y·comp_y = join."""
    trace = reverse(SignedWord.fraction(x, y), p, budget, record=False)
    if trace.status == "stuck":
        return LcmResult("disjoint")
    if trace.status == "budget":
        return LcmResult("unknown")
    s, t = trace.split()
    result = LcmResult("found", x + s, s, t)
    if verify:
        verdict = words_equal(x + s, y + t, p, settings.verify_budget)
        if verdict.status == "distinct":
            logger.error(f"Reversing claims {render_word(x + s, p)} = {render_word(y + t, p)}")
            raise ConsistencyError("Reversing produced unequal common multiples")
        result.verified = verdict.status
    return result


@dataclass
class DivisibilityVerdict:
    status: str  # yes | no | unknown
    quotient: Optional[Word] = None

    @property
    def holds(self) -> Optional[bool]:
        return {"yes": True, "no": False}.get(self.status)


def divides(x: Word, z: Word, p: Presentation, budget: Optional[int] = None) -> DivisibilityVerdict:
    """Whether z ∈ xP; the quotient q has xq = z."""
    trace = reverse(SignedWord.fraction(x, z), p, budget, record=False)
    if trace.status == "budget":
        return DivisibilityVerdict("unknown")
    if trace.status == "stuck" or not trace.terminal.is_positive:
        return DivisibilityVerdict("no")
    return DivisibilityVerdict("yes", trace.split()[0])


# ---------------------------------------------------------------------------
# Left reversibility
# ---------------------------------------------------------------------------

@dataclass
class ReversibilityVerdict:
    status: str  # yes | no | unknown
    reason: str
    sigma_prime: Optional[List[Word]] = None


def _ovl_obstruction(p: Presentation) -> Optional[str]:
    u, v = p.relation
    for short, long in ((u, v), (v, u)):
        if overlap_set(long) != [EMPTY]:
            continue
        if not any(count(short, s) < count(long, s) for s in p.alphabet):
            continue
        first = long[0]
        other = next(s for s in p.alphabet if s != first)
        if long[1:] != (other,) * (len(long) - 1) or len(long) == 1:
            return (f"OVL({render_word(long, p)}) = {{ε}}, rewriting terminates and "
                    f"{render_word(long, p)} is not {first}{other}^k")
    return None


@timer
def check_left_reversible(p: Presentation, sigma_prime_bound: int = 8,
                          budget: Optional[int] = None, max_set: int = 10_000) -> ReversibilityVerdict:
    """Decide whether any two elements have a common right multiple."""
    if not p.is_one_relator:
        raise PreconditionError("check_left_reversible needs a one-relator presentation")
    if len(p.alphabet) >= 3:
        return ReversibilityVerdict("no", "three or more generators: a letter starting neither relator is isolated")
    if len(p.alphabet) < 2:
        return ReversibilityVerdict("yes", "single generator")
    obstruction = _ovl_obstruction(p)
    if obstruction:
        return ReversibilityVerdict("no", obstruction)
    if check_r_homogeneity(p) is None:
        return ReversibilityVerdict("unknown", "no homogeneity certificate; closure criterion unavailable")

    rules = complement_rules(p)
    closure: List[Word] = [(s,) for s in p.alphabet]
    members = set(closure)
    done = set()
    changed = True
    while changed:
        changed = False
        for x, w in itertools.product(list(closure), repeat=2):
            if (x, w) in done:
                continue
            done.add((x, w))
            trace = reverse(SignedWord.fraction(x, w), p, budget, record=False, rules=rules)
            if trace.status == "stuck":
                return ReversibilityVerdict(
                    "no", f"{render_word(x, p)}P and {render_word(w, p)}P do not intersect")
            if trace.status == "budget":
                return ReversibilityVerdict("unknown", "reversing budget exhausted")
            for word in trace.split():
                if not word or word in members:
                    continue
                if len(word) > sigma_prime_bound or len(members) >= max_set:
                    return ReversibilityVerdict("unknown", f"closure exceeds the bound {sigma_prime_bound}")
                members.add(word)
                closure.append(word)
                changed = True
    return ReversibilityVerdict("yes", f"closed set of {len(closure)} words", closure)


# ---------------------------------------------------------------------------
# Garside-like elements
# ---------------------------------------------------------------------------

@dataclass
class GarsideCandidate:
    """w = aα = αγ = bβ = βδ together with the checked consequences."""
    w: Word
    alpha: Word
    beta: Word
    gamma: Word
    delta: Word
    test_length: int = 4


def _all_words(alphabet: Sequence[str], max_len: int, min_len: int = 0):
    for n in range(min_len, max_len + 1):
        yield from itertools.product(alphabet, repeat=n)


def _consequences_hold(w: Word, p: Presentation, test_length: int, budget: Optional[int]) -> bool:
    for x in _all_words(p.alphabet, test_length, 1):
        if divides(w, x + w, p, budget).status != "yes":
            return False
        if not any(divides(x, w * i, p, budget).status == "yes" for i in range(1, len(x) + 2)):
            return False
    return True


@timer
def find_garside_like_w(p: Presentation, length_bound: Optional[int] = None,
                        test_length: int = 4, budget: Optional[int] = None) -> Optional[GarsideCandidate]:
    """Shortest element w left-divisible by both generators and by both quotients."""
    if len(p.alphabet) != 2:
        raise PreconditionError("find_garside_like_w needs a two-letter alphabet")
    length_bound = length_bound or settings.garside_length_bound
    a, b = p.alphabet
    canon = CanonicalForms(p)
    seen = set()
    for raw in _all_words(p.alphabet, length_bound, 1):
        w = canon(raw)
        if w in seen:
            continue
        seen.add(w)
        da, db = divides((a,), w, p, budget), divides((b,), w, p, budget)
        if da.status != "yes" or db.status != "yes":
            continue
        alpha, beta = da.quotient, db.quotient
        ga, gb = divides(alpha, w, p, budget), divides(beta, w, p, budget)
        if ga.status != "yes" or gb.status != "yes":
            continue
        if not _consequences_hold(w, p, test_length, budget):
            logger.info(f"Candidate {render_word(w, p)} fails the divisibility consequences")
            continue
        logger.info(f"Garside-like element {render_word(w, p)}")
        return GarsideCandidate(w, alpha, beta, ga.quotient, gb.quotient, test_length)
    return None


@dataclass
class Condition23Entry:
    l: int
    prefix: Word
    join: Optional[Word]
    status: str  # ok | fails | undetermined


@dataclass
class Condition23Report:
    entries: List[Condition23Entry]

    @property
    def holds(self) -> Optional[bool]:
        statuses = {e.status for e in self.entries}
        if "fails" in statuses:
            return False
        if "undetermined" in statuses:
            return None
        return True

    @property
    def witness(self) -> Optional[int]:
        return next((e.l for e in self.entries if e.status == "fails"), None)


def orient_case2(p: Presentation) -> Tuple[Word, Word]:
    """(u, v) with v starting with the first generator and u with the other."""
    u, v = p.relation
    if len(p.alphabet) != 2:
        raise PreconditionError("case-2 setup needs a two-letter alphabet")
    a = p.alphabet[0]
    if v[0] != a:
        u, v = v, u
    if v[0] != a or u[0] == a:
        raise PreconditionError("relators must start with different generators")
    return u, v


def verify_condition_2_3prime(p: Presentation, w: Word, budget: Optional[int] = None) -> Condition23Report:
    """For each proper prefix [v]_l followed by the letter not in v, check [v]_l σ P ∩ bP ⊆ wP."""
    u, v = orient_case2(p)
    b = u[0]
    entries = []
    for l in range(1, len(v)):
        sigma = next(s for s in p.alphabet if s != v[l])
        prefix = v[:l] + (sigma,)
        common = lcm(prefix, (b,), p, budget, verify=False)
        if common.status == "disjoint":
            entries.append(Condition23Entry(l, prefix, None, "ok"))
        elif common.status == "unknown":
            entries.append(Condition23Entry(l, prefix, None, "undetermined"))
        else:
            verdict = divides(w, common.join, p, budget)
            status = {"yes": "ok", "no": "fails"}.get(verdict.status, "undetermined")
            entries.append(Condition23Entry(l, prefix, canonical_or_raw(common.join, p), status))
    return Condition23Report(entries)


def canonical_or_raw(word: Word, p: Presentation) -> Word:
    try:
        return canonical_word(word, p, settings.verify_budget)
    except BudgetExceededError:
        return word
