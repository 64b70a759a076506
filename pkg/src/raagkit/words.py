"""Words in a right-angled Artin group and their commutation normal form.

A letter is a pair ``(vertex, sign)`` with sign +1 or -1.  Two letters
commute iff their vertices are adjacent.  The normal form of a word is the
freely-and-commutatively reduced word that is lexicographically least in
its commutation class, letters ordered by vertex position with ``v^-1``
right after ``v``.  Reduced words related by commutations represent the
same element, so the normal form decides the word problem.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

from .graphs import GraphError, SimpleGraph

Letter = tuple[str, int]

# nth_roots refuses searches over more candidate words than this
ROOT_SEARCH_BOUND = 10**7


@dataclass(frozen=True)
class Word:
    letters: tuple[Letter, ...] = ()

    def __init__(self, letters: Iterable = ()):
        object.__setattr__(self, "letters", tuple((str(v), int(s)) for v, s in letters))

    @classmethod
    def gen(cls, v: str, sign: int = 1) -> "Word":
        return cls([(v, sign)])

    @classmethod
    def parse(cls, text: str) -> "Word":
        """Parse whitespace-separated tokens ``v`` / ``v^-1`` (also ``v^k``)."""
        letters = []
        for tok in text.split():
            if "^" in tok:
                v, _, exp = tok.partition("^")
                try:
                    k = int(exp)
                except ValueError:
                    raise GraphError(f"bad exponent in token {tok!r}") from None
            else:
                v, k = tok, 1
            letters += [(v, 1 if k > 0 else -1)] * abs(k)
        return cls(letters)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(v if s > 0 else f"{v}^-1" for v, s in self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inverse() ** (-n)
        return Word(self.letters * n)

    def inverse(self) -> "Word":
        return Word((v, -s) for v, s in reversed(self.letters))


def _check_letters(g: SimpleGraph, letters) -> None:
    for v, s in letters:
        if v not in g.index:
            raise GraphError(f"unknown vertex {v!r}")
        if s not in (1, -1):
            raise GraphError(f"bad sign {s} for {v!r}")


def reduce_letters(g: SimpleGraph, letters: tuple[Letter, ...]) -> tuple[Letter, ...]:
    """Cancel every pair x ... x^-1 whose separating letters all commute with x."""
    word = list(letters)
    nb = g.neighbours
    changed = True
    while changed:
        changed = False
        for i, (v, s) in enumerate(word):
            for j in range(i + 1, len(word)):
                u, t = word[j]
                if u == v:
                    if t == -s:
                        del word[j]
                        del word[i]
                        changed = True
                    break
                if u not in nb[v]:
                    break
            if changed:
                break
    return tuple(word)


def lex_least(g: SimpleGraph, letters: tuple[Letter, ...]) -> tuple[Letter, ...]:
    """Lexicographically least word in the commutation class of ``letters``."""
    idx = g.index
    nb = g.neighbours
    rest = list(letters)
    out = []
    while rest:
        best = None
        for i, (v, s) in enumerate(rest):
            # letter i can be moved to the front iff it commutes with all before it
            if all(u in nb[v] for u, _ in rest[:i]):
                key = (idx[v], 0 if s > 0 else 1)
                if best is None or key < best[0]:
                    best = (key, i)
        out.append(rest.pop(best[1]))
    return tuple(out)


@lru_cache(maxsize=1 << 18)
def _normal_letters(g: SimpleGraph, letters: tuple[Letter, ...]) -> tuple[Letter, ...]:
    return lex_least(g, reduce_letters(g, letters))


def normal_form(g: SimpleGraph, w: Word) -> Word:
    _check_letters(g, w.letters)
    return Word(_normal_letters(g, w.letters))


def normal_letters(g: SimpleGraph, letters: tuple[Letter, ...]) -> tuple[Letter, ...]:
    """Unchecked normal form on raw letter tuples (hot path for automorphisms)."""
    return _normal_letters(g, letters)


def words_equal(g: SimpleGraph, u: Word, v: Word) -> bool:
    return normal_form(g, u) == normal_form(g, v)


def abelianize(g: SimpleGraph, w: Word) -> tuple[int, ...]:
    """Exponent-sum vector, coordinates in vertex order."""
    _check_letters(g, w.letters)
    vec = [0] * len(g)
    for v, s in w.letters:
        vec[g.index[v]] += s
    return tuple(vec)


def is_normal(g: SimpleGraph, letters: tuple[Letter, ...]) -> bool:
    return _normal_letters(g, letters) == letters


def nth_roots(g: SimpleGraph, w: Word, n: int, search_radius: int,
              bound: int = ROOT_SEARCH_BOUND) -> list[Word]:
    """All normal-form words u with |u| <= search_radius and u^n = w.

    The search only walks normal-form prefixes (a prefix of a normal form is
    normal) and prunes any prefix whose exponent sums cannot reach ab(w)/n
    in the letters that remain.
    """
    if n < 1:
        raise GraphError(f"root degree must be positive, got {n}")
    if search_radius < 0:
        raise GraphError("search radius must be non-negative")
    letters_available = 2 * len(g)
    if letters_available ** search_radius > bound:
        raise GraphError(f"nth_roots: (2|V|)^radius = {letters_available}^{search_radius} "
                         f"exceeds bound {bound}")
    target_word = normal_form(g, w)
    ab = abelianize(g, target_word)
    if any(x % n for x in ab):
        return []
    target = [x // n for x in ab]
    alphabet = [(v, s) for v in g.vertices for s in (1, -1)]
    idx = g.index
    roots = []

    def search(prefix: tuple[Letter, ...], vec: list[int]):
        if vec == target:
            if Word(_normal_letters(g, prefix * n)) == target_word:
                roots.append(Word(prefix))
        remaining = search_radius - len(prefix)
        if remaining == 0:
            return
        for letter in alphabet:
            cand = prefix + (letter,)
            if not is_normal(g, cand):
                continue
            i = idx[letter[0]]
            vec[i] += letter[1]
            gap = sum(abs(t - c) for t, c in zip(target, vec))
            if gap <= remaining - 1:
                search(cand, vec)
            vec[i] -= letter[1]

    search((), [0] * len(g))
    return roots


def all_normal_words(g: SimpleGraph, max_len: int) -> list[Word]:
    """Every normal-form word of length <= max_len (small inputs only)."""
    alphabet = [(v, s) for v in g.vertices for s in (1, -1)]
    found = [()]
    frontier = [()]
    for _ in range(max_len):
        nxt = []
        for p in frontier:
            for letter in alphabet:
                cand = p + (letter,)
                if is_normal(g, cand):
                    nxt.append(cand)
        found += nxt
        frontier = nxt
    return [Word(p) for p in found]


def random_word(rng, g: SimpleGraph, length: int) -> Word:
    return Word((rng.choice(g.vertices), rng.choice((1, -1))) for _ in range(length))


def commutator(u: Word, v: Word) -> Word:
    return u * v * u.inverse() * v.inverse()

