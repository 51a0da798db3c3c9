"""Reduced words in a free group, the word metric, and the signed prefix-edge embedding.

Everything in this module is exact integer arithmetic: word lengths, edge
coefficients, and inner products carry no floating-point error.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import AlphabetMismatch, IndexOutOfRange, ParseError

MAX_WORD_LENGTH = 10_000
MAX_GENERATORS = 64

_TOKEN_RE = re.compile(r"^a([1-9][0-9]*)(')?$")

Letter = tuple[int, int]  # (generator index, exponent +1/-1)


@dataclass(frozen=True)
class GroupWord:
    """A reduced word over generators a1..aN; the empty tuple is the identity."""

    n_generators: int
    letters: tuple[Letter, ...] = ()

    def __post_init__(self):
        if not 1 <= self.n_generators <= MAX_GENERATORS:
            raise ValueError(f"alphabet size must be in 1..{MAX_GENERATORS}")
        if len(self.letters) > MAX_WORD_LENGTH:
            raise ValueError(f"word length exceeds {MAX_WORD_LENGTH}")
        prev = None
        for j, s in self.letters:
            if not 1 <= j <= self.n_generators:
                raise IndexOutOfRange(f"generator a{j} outside alphabet of size {self.n_generators}")
            if s not in (1, -1):
                raise ValueError("letter exponent must be +1 or -1")
            if prev == (j, -s):
                raise ValueError("word is not reduced")
            prev = (j, s)

    @property
    def length(self) -> int:
        return len(self.letters)

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def __str__(self) -> str:
        if not self.letters:
            return "e"
        return " ".join(f"a{j}" + ("" if s > 0 else "'") for j, s in self.letters)


def identity(n_generators: int) -> GroupWord:
    return GroupWord(n_generators, ())


def reduce(letters, n_generators: int) -> GroupWord:
    """Cancel adjacent inverse pairs; idempotent."""
    stack: list[Letter] = []
    for j, s in letters:
        if stack and stack[-1] == (j, -s):
            stack.pop()
        else:
            stack.append((j, s))
    return GroupWord(n_generators, tuple(stack))


def _check_alphabet(g: GroupWord, h: GroupWord):
    if g.n_generators != h.n_generators:
        raise AlphabetMismatch(
            f"alphabet sizes differ: {g.n_generators} vs {h.n_generators}"
        )


def mul(g: GroupWord, h: GroupWord) -> GroupWord:
    _check_alphabet(g, h)
    return reduce(g.letters + h.letters, g.n_generators)


def inv(g: GroupWord) -> GroupWord:
    return GroupWord(g.n_generators, tuple((j, -s) for j, s in reversed(g.letters)))


def word_length(g: GroupWord) -> int:
    return g.length


def word_distance(g: GroupWord, h: GroupWord) -> int:
    """Word metric d(g,h) = |h^-1 g|."""
    return mul(inv(h), g).length


def parse_word(text: str, n_generators: int) -> GroupWord:
    """Parse whitespace-separated tokens "a<k>" / "a<k>'" ; "" or "e" is the identity."""
    stripped = text.strip()
    if stripped in ("", "e"):
        return identity(n_generators)
    letters = []
    for token in stripped.split():
        m = _TOKEN_RE.match(token)
        if m is None:
            raise ParseError(f"bad word token {token!r}")
        j = int(m.group(1))
        if j > n_generators:
            raise IndexOutOfRange(
                f"generator a{j} outside alphabet of size {n_generators}"
            )
        letters.append((j, -1 if m.group(2) else 1))
    return reduce(letters, n_generators)


# -- signed prefix-edge embedding --------------------------------------------
#
# Edges of the Cayley graph are keyed by their positively-oriented
# representative (base word b, generator j), meaning b -> b*aj.  A traversal
# of that edge in the aj^-1 direction contributes coefficient -1 on the same
# key, so antisymmetry is a normalization rule, not a quotient.

EdgeKey = tuple[tuple[Letter, ...], int]


@dataclass(frozen=True, eq=False)
class EdgeVector:
    """Sparse integer vector over canonical oriented edges."""

    n_generators: int
    coeffs: dict[EdgeKey, int] = field(default_factory=dict)

    def __eq__(self, other):
        return (
            isinstance(other, EdgeVector)
            and self.n_generators == other.n_generators
            and self.coeffs == other.coeffs
        )

    def __add__(self, other: "EdgeVector") -> "EdgeVector":
        if self.n_generators != other.n_generators:
            raise AlphabetMismatch("edge vectors over different alphabets")
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            v = out.get(key, 0) + c
            if v:
                out[key] = v
            else:
                out.pop(key, None)
        return EdgeVector(self.n_generators, out)

    def __neg__(self) -> "EdgeVector":
        return EdgeVector(self.n_generators, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other: "EdgeVector") -> "EdgeVector":
        return self + (-other)

    def inner(self, other: "EdgeVector") -> int:
        if self.n_generators != other.n_generators:
            raise AlphabetMismatch("edge vectors over different alphabets")
        small, big = self.coeffs, other.coeffs
        if len(big) < len(small):
            small, big = big, small
        return sum(c * big[k] for k, c in small.items() if k in big)

    def norm_sq(self) -> int:
        return sum(c * c for c in self.coeffs.values())

    @property
    def n_entries(self) -> int:
        return len(self.coeffs)


def haagerup_embed(g: GroupWord) -> EdgeVector:
    """Signed sum of the prefix edges e -> g; the identity maps to zero."""
    coeffs: dict[EdgeKey, int] = {}
    prefix: tuple[Letter, ...] = ()
    for j, s in g.letters:
        nxt = prefix + ((j, s),)
        if s > 0:
            key = (prefix, j)
            sign = 1
        else:
            # raw edge (prefix, nxt) points against aj; store on the
            # positively-oriented base nxt (nxt*aj == prefix) with sign -1
            key = (nxt, j)
            sign = -1
        coeffs[key] = coeffs.get(key, 0) + sign
        if coeffs[key] == 0:
            del coeffs[key]
        prefix = nxt
    return EdgeVector(g.n_generators, coeffs)


def edge_inner(u: EdgeVector, v: EdgeVector) -> int:
    return u.inner(v)


def edge_dist_sq(g: GroupWord, h: GroupWord) -> int:
    """||Phi(g) - Phi(h)||^2; equals word_distance(g, h) exactly."""
    _check_alphabet(g, h)
    diff = haagerup_embed(g) - haagerup_embed(h)
    return diff.norm_sq()


# -- enumeration / sampling helpers ------------------------------------------


def enumerate_words(n_generators: int, max_length: int) -> list[GroupWord]:
    """All reduced words of length <= max_length, ordered by length."""
    words = [identity(n_generators)]
    frontier: list[tuple[Letter, ...]] = [()]
    for _ in range(max_length):
        nxt = []
        for w in frontier:
            for j in range(1, n_generators + 1):
                for s in (1, -1):
                    if w and w[-1] == (j, -s):
                        continue
                    nxt.append(w + ((j, s),))
        words.extend(GroupWord(n_generators, w) for w in nxt)
        frontier = nxt
    return words


def random_word(rng, n_generators: int, length: int) -> GroupWord:
    """Uniform reduced word of exactly the given length (seeded rng)."""
    letters: list[Letter] = []
    for _ in range(length):
        while True:
            j = int(rng.integers(1, n_generators + 1))
            s = 1 if rng.integers(0, 2) else -1
            if not (letters and letters[-1] == (j, -s)):
                break
        letters.append((j, s))
    return GroupWord(n_generators, tuple(letters))


# -- word file format ----------------------------------------------------------
# header line "N=<k>", then one word per line in parse_word syntax.


def read_words(path) -> tuple[int, list[GroupWord]]:
    with open(path, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("N="):
        raise ParseError('word file must start with a header line "N=<k>"')
    try:
        n_generators = int(lines[0][2:])
    except ValueError as exc:
        raise ParseError(f"bad alphabet header {lines[0]!r}") from exc
    return n_generators, [parse_word(ln, n_generators) for ln in lines[1:]]
