"""
Words, monoid presentations and the word problem.

A word is a tuple of generator symbols; the empty tuple is the empty word.
Equality in a presented monoid is decided by confluent rewriting when the
single relation allows it, and by a bounded bidirectional search otherwise.
"""
import logging
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from ..config import settings
from ..utils import BudgetExceededError, PreconditionError, ValidationError

logger = logging.getLogger(__name__)

Word = Tuple[str, ...]
EMPTY: Word = ()
EPSILON_TOKENS = ("", "ε")

_CARET_EXPONENT = re.compile(r"\^(-?\d+)")
_BARE_EXPONENT = re.compile(r"\d+")


# ---------------------------------------------------------------------------
# Presentations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Presentation:
    """Generators with relation pairs (u, v); u = v in the monoid."""
    alphabet: Tuple[str, ...]
    relations: Tuple[Tuple[Word, Word], ...] = ()
    # only presentation checks build these; every other operation needs nondegenerate relations
    degenerate_ok: bool = field(default=False, compare=False, repr=False)

    def __post_init__(self):
        if len(set(self.alphabet)) != len(self.alphabet) or not self.alphabet:
            raise ValidationError("Alphabet must be a nonempty list of distinct symbols")
        for u, v in self.relations:
            for w in (u, v):
                unknown = [x for x in w if x not in self.alphabet]
                if unknown:
                    raise ValidationError(f"Relation uses unknown symbol {unknown[0]!r}")
            if self.degenerate_ok:
                continue
            if not u or not v:
                raise ValidationError("Relations with an empty relator are not allowed")
            if u == v:
                raise ValidationError(f"Trivial relation {render_word(u)} = {render_word(v)}")

    @property
    def is_one_relator(self) -> bool:
        return len(self.relations) == 1

    @property
    def relation(self) -> Tuple[Word, Word]:
        if not self.is_one_relator:
            raise PreconditionError("Presentation is not one-relator")
        return self.relations[0]

    @property
    def relators(self) -> List[Word]:
        return [w for pair in self.relations for w in pair]

    @property
    def symbol_width(self) -> int:
        return max(len(s) for s in self.alphabet)

    def render(self) -> str:
        lines = ["generators: " + " ".join(self.alphabet)]
        lines += [f"relation: {spell(u, self)} = {spell(v, self)}" for u, v in self.relations]
        return "\n".join(lines)


def parse_presentation(text: str, degenerate_ok: bool = False) -> Presentation:
    """Read the presentation text format ("generators: a b" / "relation: u = v")."""
    alphabet: Optional[Tuple[str, ...]] = None
    raw_relations: List[str] = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise ValidationError(f"Expected 'key: value', got {line!r}")
        key = key.strip().lower()
        if key in ("generators", "alphabet"):
            alphabet = tuple(value.split())
        elif key in ("relation", "relations"):
            raw_relations.extend(r for r in value.split(";") if r.strip())
        else:
            raise ValidationError(f"Unknown presentation key {key!r}")
    if alphabet is None:
        raise ValidationError("Presentation text has no 'generators:' line")
    return presentation(alphabet, raw_relations, degenerate_ok)


def presentation(alphabet: Sequence[str], relations: Iterable[str],
                 degenerate_ok: bool = False) -> Presentation:
    """Build a presentation from relation strings such as "aba = bab"."""
    alphabet = tuple(alphabet)
    letters_only = Presentation(alphabet)
    pairs = []
    for rel in relations:
        left, sep, right = rel.partition("=")
        if not sep:
            raise ValidationError(f"Relation {rel!r} has no '='")
        pairs.append((parse_word(left, letters_only), parse_word(right, letters_only)))
    return Presentation(alphabet, tuple(pairs), degenerate_ok)


# ---------------------------------------------------------------------------
# Parsing and rendering
# ---------------------------------------------------------------------------

def parse_word(text: str, p: Presentation) -> Word:
    """Parse "a b^3 a", "ab3a" or "s1 s2^2"; symbols are matched longest first."""
    return tuple(letter for letter, sign in parse_signed_tokens(text, p, allow_negative=False))


def parse_signed_tokens(text: str, p: Presentation, allow_negative: bool = True) -> List[Tuple[str, int]]:
    """Expand a word with optional exponents into (letter, ±1) tokens."""
    stripped = text.strip()
    if stripped in EPSILON_TOKENS:
        return []
    symbols = sorted(p.alphabet, key=len, reverse=True)
    compact = re.sub(r"\s+", " ", stripped)
    tokens: List[Tuple[str, int]] = []
    pos = 0
    while pos < len(compact):
        if compact[pos] == " ":
            pos += 1
            continue
        symbol = next((s for s in symbols if compact.startswith(s, pos)), None)
        if symbol is None:
            raise ValidationError(f"Unknown symbol at {compact[pos:pos + 8]!r} in {text!r}")
        pos += len(symbol)
        exponent = 1
        if compact.startswith("^", pos):
            match = _CARET_EXPONENT.match(compact, pos)
            if match is None:
                raise ValidationError(f"Malformed exponent after {symbol!r} in {text!r}")
            exponent = int(match.group(1))
            pos = match.end()
        else:
            # bare digits are an exponent unless a generator starts there
            match = _BARE_EXPONENT.match(compact, pos)
            if match and not any(compact.startswith(s, pos) for s in symbols):
                exponent = int(match.group())
                pos = match.end()
        if exponent == 0:
            raise ValidationError(f"Exponent 0 after {symbol!r} in {text!r}")
        if exponent < 0 and not allow_negative:
            raise ValidationError(f"Negative exponent in positive word {text!r}")
        sign = 1 if exponent > 0 else -1
        tokens.extend([(symbol, sign)] * abs(exponent))
    return tokens


def _runs(word: Sequence) -> Iterator[Tuple[object, int]]:
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        yield word[i], j - i
        i = j


def _separator(p: Optional[Presentation], word: Sequence[str]) -> str:
    width = p.symbol_width if p is not None else max((len(x) for x in word), default=1)
    return "" if width == 1 else " "


def render_word(word: Word, p: Optional[Presentation] = None) -> str:
    """Canonical run-length caret rendering, "ε" for the empty word."""
    if not word:
        return "ε"
    sep = _separator(p, word)
    return sep.join(f"{x}^{n}" if n > 1 else str(x) for x, n in _runs(word))


def spell(word: Word, p: Optional[Presentation] = None) -> str:
    """Plain rendering without exponents (used for graph labels)."""
    if not word:
        return "ε"
    return _separator(p, word).join(word)


# ---------------------------------------------------------------------------
# Statistics and overlaps
# ---------------------------------------------------------------------------

def word_stats(x: Word, p: Presentation) -> Tuple[int, Dict[str, int]]:
    counts = {s: 0 for s in p.alphabet}
    for letter in x:
        counts[letter] += 1
    return len(x), counts


def count(x: Word, letter: str) -> int:
    return sum(1 for y in x if y == letter)


def overlap_set(v: Word) -> List[Word]:
    """All x with v = xy = wx for nonempty w, y; always contains ε."""
    if not v:
        raise PreconditionError("overlap_set needs a nonempty word")
    return [v[:k] for k in range(len(v)) if v[:k] == v[len(v) - k:]]


def occurrences(word: Word, factor: Word) -> List[int]:
    n = len(factor)
    return [i for i in range(len(word) - n + 1) if word[i:i + n] == factor]


def contains(word: Word, factor: Word) -> bool:
    return bool(occurrences(word, factor))


def shortlex_key(word: Word, p: Presentation) -> Tuple[int, Tuple[int, ...]]:
    order = {s: i for i, s in enumerate(p.alphabet)}
    return len(word), tuple(order[x] for x in word)


# ---------------------------------------------------------------------------
# Confluent rewriting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RewriteRule:
    """Replace occurrences of ``lhs`` (the relator v) by ``rhs`` (the relator u)."""
    lhs: Word
    rhs: Word


def confluent_rule(p: Presentation) -> Tuple[Optional[RewriteRule], str]:
    """The rule v -> u when OVL(v) = {ε} and some letter count drops, else a reason."""
    if not p.is_one_relator:
        return None, "presentation is not one-relator"
    u, v = p.relation
    reasons = []
    for lhs, rhs in ((v, u), (u, v)):
        if overlap_set(lhs) != [EMPTY]:
            reasons.append(f"OVL({render_word(lhs, p)}) is not {{ε}}")
            continue
        if not any(count(rhs, s) < count(lhs, s) for s in p.alphabet):
            reasons.append(f"no letter occurs less often in {render_word(rhs, p)} than in {render_word(lhs, p)}")
            continue
        return RewriteRule(lhs, rhs), ""
    return None, "; ".join(reasons)


def rewrite_steps(z: Word, rule: RewriteRule) -> List[Word]:
    """Leftmost rewriting derivation z = w1, ..., ws = rho(z)."""
    steps = [z]
    current = z
    while True:
        hits = occurrences(current, rule.lhs)
        if not hits:
            return steps
        i = hits[0]
        current = current[:i] + rule.rhs + current[i + len(rule.lhs):]
        steps.append(current)


def rewrite_irreducible(z: Word, p: Presentation) -> Word:
    """The unique v-free word equal to z."""
    rule, reason = confluent_rule(p)
    if rule is None:
        raise PreconditionError(f"Rewriting is not confluent and terminating: {reason}")
    return rewrite_steps(z, rule)[-1]


# ---------------------------------------------------------------------------
# Word problem
# ---------------------------------------------------------------------------

@dataclass
class EqualityVerdict:
    status: str  # equal | distinct | unknown
    witness: Optional[List[Word]] = None
    budget_used: int = 0
    method: str = ""


def neighbours(word: Word, p: Presentation) -> Iterator[Word]:
    """Words obtained by one application of a relation in either direction."""
    for u, v in p.relations:
        for lhs, rhs in ((u, v), (v, u)):
            for i in occurrences(word, lhs):
                yield word[:i] + rhs + word[i + len(lhs):]


def _invariant_mismatch(x: Word, y: Word, p: Presentation) -> Optional[str]:
    if all(len(u) == len(v) for u, v in p.relations) and len(x) != len(y):
        return "length is invariant and differs"
    for s in p.alphabet:
        if all(count(u, s) == count(v, s) for u, v in p.relations) and count(x, s) != count(y, s):
            return f"number of {s!r} is invariant and differs"
    return None


def _path(parents: Dict[Word, Optional[Word]], end: Word) -> List[Word]:
    out = [end]
    while parents[out[-1]] is not None:
        out.append(parents[out[-1]])
    return out


def words_equal(x: Word, y: Word, p: Presentation, budget: Optional[int] = None) -> EqualityVerdict:
    """Decide x = y in the monoid, exactly when confluent, by bounded search otherwise."""
    budget = budget or settings.effective_bfs_budget
    if budget <= 0:
        raise PreconditionError("budget must be positive")
    rule, _ = confluent_rule(p) if p.is_one_relator else (None, "")
    if rule is not None:
        left, right = rewrite_steps(x, rule), rewrite_steps(y, rule)
        if left[-1] == right[-1]:
            return EqualityVerdict("equal", left + right[-2::-1], len(left) + len(right), "rewriting")
        return EqualityVerdict("distinct", None, len(left) + len(right), "rewriting")

    if x == y:
        return EqualityVerdict("equal", [x], 0, "identical")
    mismatch = _invariant_mismatch(x, y, p)
    if mismatch:
        return EqualityVerdict("distinct", None, 0, f"invariant: {mismatch}")

    parents = ({x: None}, {y: None})
    frontiers = (deque([x]), deque([y]))
    used = 0
    while frontiers[0] and frontiers[1]:
        side = 0 if len(frontiers[0]) <= len(frontiers[1]) else 1
        frontier, seen, other = frontiers[side], parents[side], parents[1 - side]
        for _ in range(len(frontier)):
            word = frontier.popleft()
            used += 1
            if used > budget:
                logger.warning(f"words_equal: budget {budget} exhausted")
                return EqualityVerdict("unknown", None, used, "search")
            for nxt in neighbours(word, p):
                if nxt in seen:
                    continue
                seen[nxt] = word
                if nxt in other:
                    forward = _path(parents[0], nxt)[::-1]
                    backward = _path(parents[1], nxt)[1:]
                    return EqualityVerdict("equal", forward + backward, used, "search")
                frontier.append(nxt)
    return EqualityVerdict("distinct", None, used, "search: class exhausted")


def equivalence_class(x: Word, p: Presentation, budget: Optional[int] = None) -> List[Word]:
    """All words equal to x, sorted ShortLex; raises when the budget is exhausted."""
    budget = budget or settings.effective_bfs_budget
    seen = {x}
    queue = deque([x])
    while queue:
        word = queue.popleft()
        for nxt in neighbours(word, p):
            if nxt not in seen:
                seen.add(nxt)
                if len(seen) > budget:
                    raise BudgetExceededError(
                        f"Equivalence class of {render_word(x, p)} exceeds {budget} words"
                    )
                queue.append(nxt)
    return sorted(seen, key=lambda w: shortlex_key(w, p))


class CanonicalForms:
    """Memoised ShortLex-least representatives of equivalence classes."""

    def __init__(self, p: Presentation, budget: Optional[int] = None):
        self.p = p
        self.budget = budget
        self._cache: Dict[Word, Word] = {}

    def __call__(self, x: Word) -> Word:
        if x not in self._cache:
            members = equivalence_class(x, self.p, self.budget)
            for w in members:
                self._cache[w] = members[0]
        return self._cache[x]


def canonical_word(x: Word, p: Presentation, budget: Optional[int] = None) -> Word:
    return equivalence_class(x, p, budget)[0]


# ---------------------------------------------------------------------------
# Presentation checks
# ---------------------------------------------------------------------------

@dataclass
class PresentationReport:
    redundant_generators: List[str] = field(default_factory=list)
    trivial_relations: int = 0
    empty_relators: int = 0
    first_letters_differ: Optional[bool] = None
    last_letters_differ: Optional[bool] = None
    one_relator: bool = False

    @property
    def passed(self) -> bool:
        return (not self.redundant_generators and not self.trivial_relations
                and not self.empty_relators and self.first_letters_differ is not False
                and self.last_letters_differ is not False)

    @property
    def flags(self) -> List[str]:
        out = [f"redundant generator {s}" for s in self.redundant_generators]
        if self.trivial_relations:
            out.append("relation (u, u)")
        if self.empty_relators:
            out.append("empty relator")
        if self.first_letters_differ is False:
            out.append("first letters equal")
        if self.last_letters_differ is False:
            out.append("last letters equal")
        return out


def check_presentation(p: Presentation) -> PresentationReport:
    report = PresentationReport(one_relator=p.is_one_relator)
    for u, v in p.relations:
        if u == v:
            report.trivial_relations += 1
        if not u or not v:
            report.empty_relators += 1
        for single, other in ((u, v), (v, u)):
            if len(single) == 1 and single[0] not in other and single[0] not in report.redundant_generators:
                report.redundant_generators.append(single[0])
    if p.is_one_relator and all(p.relation):
        u, v = p.relation
        report.first_letters_differ = u[0] != v[0]
        report.last_letters_differ = u[-1] != v[-1]
    return report


def find_separating_word(p: Presentation) -> Optional[Word]:
    """A nonempty word unrelated to the relators (no subword, prefix or suffix overlap)."""
    if len(p.alphabet) < 3:
        return None
    u, v = p.relation
    firsts = {u[0], v[0]}
    lasts = {u[-1], v[-1]}
    c = next((s for s in p.alphabet if s not in firsts), p.alphabet[-1])
    a = next((s for s in p.alphabet if s not in lasts), p.alphabet[0])
    b = next(s for s in p.alphabet if s not in (a, c)) if a != c else None
    i = j = max(len(u), len(v)) + 1
    candidates = [(a,) * i + (c,) * j]
    if b is not None:
        candidates.append((a,) * i + (b,) + (c,) * j)
    for z in candidates:
        if separates(z, p):
            return z
    logger.warning("No separating word of the standard shapes")
    return None


def separates(z: Word, p: Presentation) -> bool:
    for r in p.relators:
        if contains(r, z) or contains(z, r):
            return False
        for k in range(1, min(len(z), len(r)) + 1):
            if z[:k] == r[len(r) - k:] or z[len(z) - k:] == r[:k]:
                return False
    return bool(z)
