"""Freely reduced and cyclic words over a finite ranked alphabet.

A letter is a nonzero signed integer: ``+i`` is the i-th free generator,
``-i`` its inverse, so inversion is negation.  A word is a tuple of
letters with no adjacent cancelling pair; the empty tuple is the identity.
Conjugacy classes are modelled by cyclic words: cyclically reduced tuples
taken up to rotation, canonicalised as the least rotation.

Text form: lowercase ASCII letters are generators (a=1, b=2, ...),
uppercase their inverses, ``1`` or the empty string is the identity.
``t``/``T`` are reserved for the stable letter of an HNN-extension and are
rejected inside base-group words, which caps the rank at 19.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import chain

Word = tuple  # tuple[int, ...]; kept loose so literals stay lightweight

GENERATOR_CHARS = "abcdefghijklmnopqrs"  # 't' reserved for the stable letter
MAX_RANK = len(GENERATOR_CHARS)


class BadLetterError(ValueError):
    """A letter outside the alphabet (or the reserved stable letter)."""


@dataclass(frozen=True)
class Alphabet:
    """The alphabet of a free group of a given rank."""

    rank: int

    def __post_init__(self) -> None:
        if not 1 <= self.rank <= MAX_RANK:
            raise ValueError(f"rank must be in 1..{MAX_RANK}, got {self.rank}")

    def check_letter(self, letter: int) -> int:
        if not isinstance(letter, int) or letter == 0 or abs(letter) > self.rank:
            raise BadLetterError(f"letter {letter!r} outside alphabet of rank {self.rank}")
        return letter

    def parse(self, text: str) -> Word:
        """Parse the bit-exact word syntax (see module docstring)."""
        stripped = "".join(text.split())
        if stripped in ("", "1"):
            return ()
        letters = []
        for ch in stripped:
            if ch in ("t", "T"):
                raise BadLetterError("'t' is reserved for the stable letter")
            lower = ch.lower()
            idx = GENERATOR_CHARS.find(lower)
            if idx < 0 or idx >= self.rank:
                raise BadLetterError(f"letter {ch!r} outside alphabet of rank {self.rank}")
            letters.append(idx + 1 if ch.islower() else -(idx + 1))
        return reduce(letters)

    def format(self, word: Word) -> str:
        if not word:
            return "1"
        out = []
        for letter in word:
            self.check_letter(letter)
            ch = GENERATOR_CHARS[abs(letter) - 1]
            out.append(ch if letter > 0 else ch.upper())
        return "".join(out)

    def letters(self) -> list[int]:
        return [i for i in range(1, self.rank + 1)] + [-i for i in range(1, self.rank + 1)]


def reduce(letters) -> Word:
    """Freely reduce a letter sequence.

    Idempotent and length-non-increasing; reduce(w + invert(w)) == ().
    """
    stack: list[int] = []
    for letter in letters:
        if letter == 0:
            raise BadLetterError("0 is not a letter")
        if stack and stack[-1] == -letter:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def invert(word: Word) -> Word:
    return tuple(-letter for letter in reversed(word))


def concat(*parts: Word) -> Word:
    return reduce(chain.from_iterable(parts))


def conjugate(word: Word, by: Word) -> Word:
    """by^-1 * word * by, reduced."""
    return concat(invert(by), word, by)


def power(word: Word, n: int) -> Word:
    if n < 0:
        return power(invert(word), -n)
    return reduce(chain.from_iterable([word] * n))


def cyclic_reduce(word: Word) -> tuple[Word, Word]:
    """Split ``word == conj^-1 * core * conj`` with ``core`` cyclically reduced.

    >>> cyclic_reduce((-2, 1, 2))
    ((1,), (2,))
    """
    i, j = 0, len(word)
    while j - i >= 2 and word[i] == -word[j - 1]:
        i += 1
        j -= 1
    return word[i:j], invert(word[:i])


def is_cyclically_reduced(word: Word) -> bool:
    return not word or word[0] != -word[-1]


def cyclic_word(word: Word) -> Word:
    """Canonical representative of the conjugacy class: the least rotation
    of the cyclically reduced core."""
    core, _ = cyclic_reduce(reduce(word))
    if not core:
        return ()
    return min(core[k:] + core[:k] for k in range(len(core)))


def free_conjugacy(u: Word, v: Word) -> Word | None:
    """A conjugator x with ``u == x^-1 * v * x``, or None.

    Conjugacy holds iff the cyclic cores are rotations of one another; the
    witness is assembled from the two cyclic-reduction conjugators and the
    rotation offset, then checked exactly.
    """
    core_u, cu = cyclic_reduce(u)
    core_v, cv = cyclic_reduce(v)
    if len(core_u) != len(core_v):
        return None
    if not core_u:
        return ()
    for k in range(len(core_v)):
        if core_v[k:] + core_v[:k] == core_u:
            x = concat(invert(cv), core_v[:k], cu)
            assert concat(invert(x), v, x) == u
            return x
    return None


def root(word: Word) -> tuple[Word, int]:
    """Maximal-root decomposition ``word == root ** exponent``.

    Computed as the least rotation period of the cyclic core, then
    un-conjugated.  The exponent divides the core length.
    """
    if not word:
        raise ValueError("the identity has no root decomposition")
    core, conj = cyclic_reduce(word)
    n = len(core)
    for per in range(1, n + 1):
        if n % per == 0 and core == core[:per] * (n // per):
            return concat(invert(conj), core[:per], conj), n // per
    raise AssertionError("unreachable: every word is its own root")


# ---------------------------------------------------------------------------
# Whitehead length minimisation (first part of Whitehead's method only):
# drive a cyclic word to a local length minimum under the multiplier moves
# x -> v^s * x * v^-t.  A local minimum is a global orbit minimum, and a
# word is primitive exactly when that minimum has length 1.
# ---------------------------------------------------------------------------


def _whitehead_moves(rank: int):
    """Yield image tables (index 1..rank -> word) of the type-II moves."""
    from itertools import product

    letters = [i for i in range(1, rank + 1)] + [-i for i in range(1, rank + 1)]
    others = lambda v: [g for g in range(1, rank + 1) if g != abs(v)]
    options = ((0, 0), (1, 0), (0, 1), (1, 1))
    for v in letters:
        for choice in product(options, repeat=rank - 1):
            images: dict[int, Word] = {abs(v): (abs(v),)}
            for g, (s, t) in zip(others(v), choice):
                img = []
                if s:
                    img.append(v)
                img.append(g)
                if t:
                    img.append(-v)
                images[g] = tuple(img)
            yield images


def apply_images(images, word: Word) -> Word:
    """Substitute each letter by its image word (inverse letters by the
    inverted image) and reduce.  ``images`` maps index 1..rank -> word, or
    is a sequence indexed by generator-1."""
    if not isinstance(images, dict):
        images = {i + 1: img for i, img in enumerate(images)}
    parts = []
    for letter in word:
        img = images[abs(letter)]
        parts.append(img if letter > 0 else invert(img))
    return concat(*parts)


def whitehead_minimize(word: Word, rank: int) -> Word:
    """Cyclic word of minimal length in the automorphism orbit of ``word``."""
    current = cyclic_word(word)
    if rank == 1:
        return current
    improved = True
    while improved:
        improved = False
        best = current
        for images in _whitehead_moves(rank):
            candidate = cyclic_word(apply_images(images, current))
            if (len(candidate), candidate) < (len(best), best):
                best = candidate
        if len(best) < len(current):
            current = best
            improved = True
    return current


def is_primitive(word: Word, rank: int) -> bool:
    """Whether ``word`` belongs to some free basis."""
    if not word:
        raise ValueError("the identity is not primitive")
    if rank == 1:
        return word in ((1,), (-1,))
    return len(whitehead_minimize(word, rank)) == 1
