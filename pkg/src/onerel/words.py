"""Alphabets, words and the positional word operators.

Words are plain Python strings over single-character letters; the empty
string is the empty word.  An Alphabet fixes the set of letters and the
total order used by the deg-lex comparison (declaration order).
"""

from dataclasses import dataclass, field

LESS = -1
EQUAL = 0
GREATER = 1


class InvalidInputError(ValueError):
    """Raised for malformed words, letters or relations."""


@dataclass(frozen=True)
class Alphabet:
    """An ordered finite alphabet; declaration order is the deg-lex order."""

    letters: tuple
    identity: str | None = None
    _rank: dict = field(init=False, repr=False, compare=False, hash=False, default=None)

    def __post_init__(self):
        letters = tuple(self.letters)
        object.__setattr__(self, "letters", letters)
        if len(set(letters)) != len(letters):
            raise InvalidInputError("alphabet letters must be distinct: %r" % (letters,))
        for c in letters:
            if not (isinstance(c, str) and len(c) == 1 and c.islower()):
                raise InvalidInputError("letters are single lowercase characters, got %r" % (c,))
        if self.identity is not None and self.identity not in letters:
            raise InvalidInputError("identity letter %r not in alphabet" % (self.identity,))
        object.__setattr__(self, "_rank", {c: i for i, c in enumerate(letters)})

    def rank(self, letter):
        try:
            return self._rank[letter]
        except KeyError:
            raise InvalidInputError("letter %r not in alphabet %r" % (letter, self.letters))

    def __contains__(self, letter):
        return letter in self._rank

    def __len__(self):
        return len(self.letters)

    def check_word(self, word):
        for c in word:
            if c not in self._rank:
                raise InvalidInputError("letter %r not in alphabet %r" % (c, self.letters))
        return word

    def with_identity(self, marker="e"):
        """Alphabet extended with an adjoined identity letter (smallest)."""
        if marker in self._rank:
            raise InvalidInputError("identity letter %r already present" % marker)
        return Alphabet((marker,) + self.letters, identity=marker)


def deglex_key(word, alphabet):
    """Sort key realizing the deg-lex order: length first, then letter ranks."""
    return (len(word), tuple(alphabet.rank(c) for c in word))


def deglex_compare(x, y, alphabet):
    """Compare two words in the deg-lex order; returns LESS/EQUAL/GREATER."""
    kx, ky = deglex_key(x, alphabet), deglex_key(y, alphabet)
    if kx < ky:
        return LESS
    if kx > ky:
        return GREATER
    return EQUAL


def prefix_t(word, t):
    """First min(t, |word|) letters; t=0 gives the empty word."""
    if t <= 0:
        return ""
    return word[:t]


def suffix_t(word, t):
    """Last min(t, |word|) letters; t=0 gives the empty word."""
    if t <= 0:
        return ""
    return word[-min(t, len(word)):] if word else ""


def occ(letter, word):
    """Number of occurrences of a letter in a word."""
    return word.count(letter)


def con(word):
    """Set of letters occurring in a word."""
    return set(word)


def reverse(word):
    """Letters in reverse order; an involution."""
    return word[::-1]


def parse_word(text):
    """Word literal: juxtaposed letters; '1' or '' denotes the empty word."""
    text = text.strip()
    if text in ("1", ""):
        return ""
    return text


def format_word(word):
    return word if word else "1"
