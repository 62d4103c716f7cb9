"""
Free-group word algebra.

A letter is stored as an integer code: ``2*i`` is generator ``i`` and
``2*i + 1`` its inverse, so ``code ^ 1`` inverts a letter and sorting codes
gives the shortlex letter order a < A < b < B < ...

Text format: lowercase letter = generator, uppercase = inverse, empty
string = identity.

Classes:
    Letter: (generator_index, sign) view of a single letter
    Word: freely reduced word, an immutable tuple of letter codes
"""

import string
from itertools import product
from typing import Iterable, Iterator, NamedTuple, Sequence, Tuple

import numpy as np

from ggt.errors import ParseError, PreconditionError

MAX_RANK = 26


class Letter(NamedTuple):
    generator_index: int
    sign: int

    @property
    def code(self) -> int:
        return 2 * self.generator_index + (0 if self.sign > 0 else 1)

    @classmethod
    def from_code(cls, code: int) -> "Letter":
        return cls(code >> 1, -1 if code & 1 else 1)

    def inverse(self) -> "Letter":
        return Letter(self.generator_index, -self.sign)


def free_reduce(codes: Iterable[int]) -> Tuple[int, ...]:
    """Stack-based free reduction of a sequence of letter codes."""
    stack: list[int] = []
    for code in codes:
        if stack and stack[-1] == code ^ 1:
            stack.pop()
        else:
            stack.append(code)
    return tuple(stack)


def invert_codes(codes: Sequence[int]) -> Tuple[int, ...]:
    return tuple(code ^ 1 for code in reversed(codes))


class Word(tuple):
    """
    Freely reduced word.

    Construction always reduces, so every ``Word`` satisfies the reduced
    invariant; the empty word is the identity.
    """

    __slots__ = ()

    def __new__(cls, codes: Iterable[int] = ()) -> "Word":
        return super().__new__(cls, free_reduce(codes))

    @classmethod
    def _trusted(cls, codes: Tuple[int, ...]) -> "Word":
        # caller guarantees codes are already reduced
        return super().__new__(cls, codes)

    @classmethod
    def parse(cls, text: str) -> "Word":
        codes = []
        for ch in text.strip():
            if ch in string.ascii_lowercase:
                codes.append(2 * (ord(ch) - ord("a")))
            elif ch in string.ascii_uppercase:
                codes.append(2 * (ord(ch) - ord("A")) + 1)
            elif ch in " ·*":
                continue
            else:
                raise ParseError(f"invalid letter {ch!r} in word {text!r}")
        return cls(codes)

    @classmethod
    def from_letters(cls, letters: Iterable[Letter]) -> "Word":
        return cls(letter.code for letter in letters)

    @property
    def letters(self) -> Tuple[Letter, ...]:
        return tuple(Letter.from_code(code) for code in self)

    @property
    def is_identity(self) -> bool:
        return len(self) == 0

    def generators(self) -> frozenset:
        return frozenset(code >> 1 for code in self)

    def max_generator(self) -> int:
        return max((code >> 1 for code in self), default=-1)

    def __mul__(self, other: "Word") -> "Word":  # type: ignore[override]
        return concat(self, other)

    def __invert__(self) -> "Word":
        return invert(self)

    def __pow__(self, exponent: int) -> "Word":
        return power(self, exponent)

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f"Word({format_word(self) or 'e'!s})"


IDENTITY = Word()


def format_word(word: Sequence[int]) -> str:
    out = []
    for code in word:
        ch = chr(ord("a") + (code >> 1))
        out.append(ch.upper() if code & 1 else ch)
    return "".join(out)


def reduce(raw: Iterable[int]) -> Word:
    return Word(raw)


def concat(u: Sequence[int], v: Sequence[int]) -> Word:
    # cancel at the junction only, both halves are reduced
    i = 0
    n = min(len(u), len(v))
    while i < n and u[len(u) - 1 - i] == v[i] ^ 1:
        i += 1
    return Word._trusted(tuple(u[: len(u) - i]) + tuple(v[i:]))


def invert(u: Sequence[int]) -> Word:
    return Word._trusted(invert_codes(u))


def power(u: Word, exponent: int) -> Word:
    base = u if exponent >= 0 else invert(u)
    result = IDENTITY
    for _ in range(abs(exponent)):
        result = concat(result, base)
    return result


def cyclic_reduce(u: Sequence[int]) -> Tuple[Word, Word]:
    """Return ``(core, conjugator)`` with ``u = conjugator * core * conjugator^-1``."""
    i, j = 0, len(u) - 1
    while i < j and u[i] == u[j] ^ 1:
        i += 1
        j -= 1
    return Word._trusted(tuple(u[i : j + 1])), Word._trusted(tuple(u[:i]))


def is_cyclically_reduced(u: Sequence[int]) -> bool:
    return len(u) < 2 or u[0] != u[-1] ^ 1


def count_occurrences(w: Sequence[int], pattern: Sequence[int]) -> int:
    """Overlapping occurrences of ``pattern`` as a contiguous subword of ``w``."""
    if not pattern:
        raise PreconditionError("pattern must be nonempty")
    w, pattern = tuple(w), tuple(pattern)
    m = len(pattern)
    return sum(1 for i in range(len(w) - m + 1) if w[i : i + m] == pattern)


def cyclic_permutations(u: Sequence[int]) -> list[Word]:
    return [Word._trusted(tuple(u[i:]) + tuple(u[:i])) for i in range(len(u))]


def shortlex_key(u: Sequence[int]) -> Tuple[int, Tuple[int, ...]]:
    return (len(u), tuple(u))


def enumerate_words(rank: int, max_length: int, min_length: int = 0) -> Iterator[Word]:
    """All reduced words over ``rank`` generators up to ``max_length``, in shortlex order."""
    letters = range(2 * rank)
    for length in range(min_length, max_length + 1):
        if length == 0:
            yield IDENTITY
            continue
        for codes in product(letters, repeat=length):
            if all(codes[k] != codes[k + 1] ^ 1 for k in range(length - 1)):
                yield Word._trusted(codes)


def enumerate_words_over(letters: Sequence[int], max_length: int) -> Iterator[Word]:
    """Reduced words using only the given generator indices (and inverses), shortlex."""
    codes = sorted(c for g in letters for c in (2 * g, 2 * g + 1))
    frontier: list[Tuple[int, ...]] = [()]
    yield IDENTITY
    for _ in range(max_length):
        nxt = []
        for w in frontier:
            for c in codes:
                if w and w[-1] == c ^ 1:
                    continue
                nxt.append(w + (c,))
        for w in nxt:
            yield Word._trusted(w)
        frontier = nxt


def random_word(rng: np.random.Generator, rank: int, length: int) -> Word:
    """Uniform random reduced word of exactly ``length`` letters."""
    if length == 0:
        return IDENTITY
    codes = [int(rng.integers(2 * rank))]
    while len(codes) < length:
        # 2*rank - 1 choices avoid cancelling the previous letter
        c = int(rng.integers(2 * rank - 1))
        if c >= (codes[-1] ^ 1):
            c += 1
        codes.append(c)
    return Word._trusted(tuple(codes))


def random_words(rng: np.random.Generator, rank: int, max_length: int, count: int) -> list[Word]:
    lengths = rng.integers(0, max_length + 1, size=count)
    return [random_word(rng, rank, int(n)) for n in lengths]
