"""Group presentations, words, and the small cancellation checker.

A word is a tuple of integer letters: generator i contributes the positive
letter 2*i and its formal inverse 2*i+1, so inverting a letter is xor with 1.
In text form a generator is a single ASCII letter (inverse = uppercase) or an
indexed name g1, g2, ... (inverse = G1, G2, ...), whitespace-separated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

Word = tuple[int, ...]


class ParseError(ValueError):
    """Raised on malformed presentation text or unknown symbols."""


def inverse_letter(x: int) -> int:
    return x ^ 1


def invert(word: Sequence[int]) -> Word:
    """Formal inverse: reverse the word and invert every letter."""
    return tuple(x ^ 1 for x in reversed(word))


def free_reduce(word: Iterable[int]) -> Word:
    """Cancel adjacent inverse pairs until none remain.

    Idempotent and length-nonincreasing; the empty tuple is the identity.
    """
    out: list[int] = []
    for x in word:
        if out and out[-1] == x ^ 1:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(word: Sequence[int]) -> Word:
    """Freely reduce, then strip cancelling first/last letter pairs."""
    w = list(free_reduce(word))
    while len(w) >= 2 and w[0] == w[-1] ^ 1:
        w = w[1:-1]
    return tuple(w)


def rotations(word: Sequence[int]) -> list[Word]:
    w = tuple(word)
    return [w[i:] + w[:i] for i in range(max(len(w), 1))]


def symmetrize(relators: Iterable[Sequence[int]]) -> tuple[Word, ...]:
    """All cyclic rotations of each relator and of its inverse, deduplicated.

    Input relators must be cyclically reduced.  Returned sorted so callers
    iterate deterministically; treat it as a set.
    """
    seen: set[Word] = set()
    for r in relators:
        r = tuple(r)
        if not r:
            continue
        for w in rotations(r):
            seen.add(w)
        for w in rotations(invert(r)):
            seen.add(w)
    return tuple(sorted(seen))


def _is_single_letter_alphabet(names: Sequence[str]) -> bool:
    return all(len(n) == 1 for n in names)


def _check_generator_names(names: Sequence[str]) -> None:
    if not names:
        raise ParseError("empty generator list")
    for n in names:
        if len(n) == 1:
            if not (n.isascii() and n.isalpha() and n.islower()):
                raise ParseError(f"bad generator name {n!r}: single names must be lowercase ASCII letters")
        else:
            if not (n[0] == "g" and n[1:].isdigit()):
                raise ParseError(f"bad generator name {n!r}: use a single letter or g1, g2, ...")
    if len(set(names)) != len(names):
        raise ParseError("duplicate generator name")


@dataclass(frozen=True)
class Presentation:
    """A finite presentation: generator names plus cyclically reduced relators.

    The symmetrized closure (rotations and inverses of every relator) is
    computed once on first use; Dehn reduction and piece counting assume it.
    """

    generators: tuple[str, ...]
    relators: tuple[Word, ...]
    _symmetrized: tuple[Word, ...] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        _check_generator_names(self.generators)
        n = 2 * len(self.generators)
        for r in self.relators:
            for x in r:
                if not 0 <= x < n:
                    raise ParseError(f"relator letter {x} outside alphabet")

    @property
    def n_generators(self) -> int:
        return len(self.generators)

    @property
    def n_letters(self) -> int:
        return 2 * len(self.generators)

    @property
    def symmetrized(self) -> tuple[Word, ...]:
        if self._symmetrized is None:
            object.__setattr__(self, "_symmetrized", symmetrize(self.relators))
        return self._symmetrized

    def letter_name(self, x: int) -> str:
        name = self.generators[x >> 1]
        if x & 1:
            return name[0].upper() + name[1:]
        return name

    def word_to_text(self, word: Sequence[int]) -> str:
        if not word:
            return "1"
        sep = "" if _is_single_letter_alphabet(self.generators) else " "
        return sep.join(self.letter_name(x) for x in word)

    def word_from_text(self, text: str) -> Word:
        return word_from_text(text, self.generators)

    def to_text(self, subgroup: "SubgroupSpec | None" = None) -> str:
        """Canonical file form; parse_file inverts this exactly."""
        lines = ["generators: " + " ".join(self.generators)]
        if self.relators:
            lines.append("relators:")
            lines.extend("  " + self.word_to_text(r) for r in self.relators)
        else:
            lines.append("relators: none")
        if subgroup is not None and subgroup.words:
            lines.append("subgroup:")
            lines.extend("  " + self.word_to_text(w) for w in subgroup.words)
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SubgroupSpec:
    """Subgroup generators as words in the ambient alphabet.

    Words are freely reduced on construction; reductions to the identity are
    dropped (they generate nothing).  declared_epsilon overrides the empirical
    quasi-convexity constant downstream.
    """

    words: tuple[Word, ...]
    declared_epsilon: int | None = None

    def __post_init__(self) -> None:
        reduced = tuple(w for w in (free_reduce(w) for w in self.words) if w)
        object.__setattr__(self, "words", reduced)
        if self.declared_epsilon is not None and self.declared_epsilon < 0:
            raise ValueError("declared_epsilon must be nonnegative")

    @property
    def is_trivial(self) -> bool:
        return not self.words


def word_from_text(text: str, names: Sequence[str]) -> Word:
    """Parse a word; uppercase (or G<k>) means inverse.  "1" is the identity."""
    text = text.strip()
    if text in ("", "1"):
        return ()
    index = {n: 2 * i for i, n in enumerate(names)}
    letters: list[int] = []
    if _is_single_letter_alphabet(names):
        tokens = [c for chunk in text.split() for c in chunk]
    else:
        tokens = text.split()
    for tok in tokens:
        low = tok[0].lower() + tok[1:]
        if low not in index:
            raise ParseError(f"unknown generator symbol {tok!r}")
        x = index[low]
        if tok[0].isupper():
            x ^= 1
        letters.append(x)
    return tuple(letters)


def _content_lines(text: str) -> list[str]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].rstrip()
        if line.strip():
            out.append(line)
    return out


@dataclass(frozen=True)
class ParsedInput:
    presentation: Presentation
    subgroup: SubgroupSpec


def parse_file(text: str) -> ParsedInput:
    """Parse a presentation file: generators, relators, optional subgroup.

    One word per entry: inline after the section head, or one per following
    line.  Relators are freely and cyclically reduced; relators that reduce
    to the identity are dropped.  A missing subgroup section means the
    trivial subgroup.
    """
    lines = _content_lines(text)
    if not lines or not lines[0].lstrip().startswith("generators:"):
        raise ParseError("first line must be 'generators: ...'")
    names = tuple(lines[0].split(":", 1)[1].split())
    _check_generator_names(names)

    sections: dict[str, list[str]] = {"relators": [], "subgroup": []}
    current: str | None = None
    for line in lines[1:]:
        stripped = line.strip()
        head, _, rest = stripped.partition(":")
        if head in sections and (stripped.startswith(head + ":") or stripped == head + ":"):
            current = head
            rest = rest.strip()
            if rest and rest not in ("none", "(none)"):
                sections[current].append(rest)
            continue
        if current is None:
            raise ParseError(f"unexpected line before any section: {line!r}")
        sections[current].append(stripped)

    relators = tuple(
        r for r in (cyclic_reduce(word_from_text(t, names)) for t in sections["relators"]) if r
    )
    subgroup_words = tuple(word_from_text(t, names) for t in sections["subgroup"])
    pres = Presentation(names, relators)
    return ParsedInput(pres, SubgroupSpec(subgroup_words))


def parse_presentation(text: str) -> Presentation:
    """Parse just the presentation part; a subgroup section, if any, is ignored."""
    return parse_file(text).presentation


@dataclass(frozen=True)
class SmallCancellationReport:
    passes: bool
    max_piece_len: int
    min_relator_len: int
    vacuous: bool
    threshold: Fraction


def check_small_cancellation(p: Presentation, lam: Fraction | float = Fraction(1, 6)) -> SmallCancellationReport:
    """C'(lam) check: every piece shorter than lam times the relator length.

    A piece is a maximal common prefix of two distinct symmetrized relators.
    The maximum over all pairs is attained by a lexicographically adjacent
    pair, so one sort replaces the quadratic prefix scan.  No relators is a
    vacuous pass.
    """
    lam = Fraction(lam).limit_denominator() if isinstance(lam, float) else Fraction(lam)
    sym = p.symmetrized
    if not sym:
        return SmallCancellationReport(True, 0, 0, True, lam)
    min_len = min(len(w) for w in sym)
    max_piece = 0
    for a, b in zip(sym, sym[1:]):
        k = 0
        limit = min(len(a), len(b))
        while k < limit and a[k] == b[k]:
            k += 1
        if k > max_piece:
            max_piece = k
    passes = max_piece < lam * min_len
    return SmallCancellationReport(passes, max_piece, min_len, False, lam)
