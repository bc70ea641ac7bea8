"""Word problem: Dehn's algorithm for C'(1/6) presentations, bounded BFS else.

Dehn reduction replaces any subword that is strictly more than half of a
symmetrized relator by the inverse of the complement; on a C'(1/6)
presentation the empty word is reached exactly for trivial elements.  For
everything else a Cayley ball of bounded radius decides equality by vertex
identity, erring out loudly when the bound is too small to answer.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .presentation import (
    Presentation,
    Word,
    check_small_cancellation,
    free_reduce,
    invert,
)


class StrategyError(ValueError):
    """The chosen word-problem strategy does not apply to this presentation."""


class UndecidedWithinBound(RuntimeError):
    """Bounded BFS exhausted its radius cap without settling the question."""


@dataclass(frozen=True)
class WordProblemStrategy:
    kind: str  # dehn | bounded_bfs
    radius_cap: int | None = None

    def __post_init__(self):
        if self.kind not in ("dehn", "bounded_bfs"):
            raise ValueError(f"unknown strategy kind {self.kind!r}")
        if self.kind == "bounded_bfs":
            if self.radius_cap is None or self.radius_cap < 1:
                raise ValueError("bounded_bfs needs a positive radius_cap")


def choose_strategy(p: Presentation, radius_cap: int = 12) -> WordProblemStrategy:
    """Dehn whenever C'(1/6) holds, bounded BFS otherwise."""
    if check_small_cancellation(p).passes:
        return WordProblemStrategy("dehn")
    return WordProblemStrategy("bounded_bfs", radius_cap=radius_cap)


# Keep replacement tables only for desk-scale symmetrized closures; beyond
# this we scan relators directly per window instead of materializing keys.
_TABLE_CHAR_LIMIT = 200_000


@lru_cache(maxsize=16)
def _replacement_table(p: Presentation) -> dict[Word, Word] | None:
    sym = p.symmetrized
    if sum(len(r) for r in sym) > _TABLE_CHAR_LIMIT:
        return None
    table: dict[Word, Word] = {}
    for r in sym:
        n = len(r)
        for cut in range(n // 2 + 1, n + 1):
            # prefixes longer than any piece determine the relator uniquely
            table.setdefault(r[:cut], invert(r[cut:]))
    return table


def dehn_reduce(w: Word, p: Presentation) -> Word:
    """Dehn-irreducible form of w; empty iff w is trivial (C'(1/6) only).

    Replacement scan is leftmost-first, longest match at that position;
    the symmetrized closure is sorted, so equal-length matches resolve to
    the lexicographically least relator.  Each replacement strictly
    shortens the word (the threshold 2|u| > |r| is strict), so the loop
    terminates.
    """
    report = check_small_cancellation(p)
    if not report.passes and not report.vacuous:
        raise StrategyError("Dehn's algorithm needs a C'(1/6) presentation")
    sym = p.symmetrized
    if not sym:
        return free_reduce(w)
    table = _replacement_table(p)
    max_len = max(len(r) for r in sym)
    word = free_reduce(w)
    while True:
        replaced = False
        for i in range(len(word)):
            window_top = min(len(word) - i, max_len)
            if table is not None:
                for cut in range(window_top, 0, -1):
                    repl = table.get(word[i : i + cut])
                    if repl is not None:
                        word = free_reduce(word[:i] + repl + word[i + cut :])
                        replaced = True
                        break
            else:
                best_cut = 0
                best_repl: Word = ()
                for r in sym:
                    n = len(r)
                    top = min(window_top, n)
                    k = 0
                    while k < top and word[i + k] == r[k]:
                        k += 1
                    if 2 * k > n and k > best_cut:
                        best_cut = k
                        best_repl = invert(r[k:])
                if best_cut:
                    word = free_reduce(word[:i] + best_repl + word[i + best_cut :])
                    replaced = True
            if replaced:
                break
        if not replaced:
            return word


def is_identity(w: Word, p: Presentation, strategy: WordProblemStrategy) -> bool:
    """Whether w represents 1 in the presented group.

    Bounded BFS answers by walking w through the Cayley ball of radius
    radius_cap; every prefix of a word of length <= cap stays inside that
    ball, so longer words raise rather than guess.
    """
    word = free_reduce(w)
    if not word:
        return True
    if strategy.kind == "dehn":
        return len(dehn_reduce(word, p)) == 0
    cap = strategy.radius_cap
    assert cap is not None
    if len(word) > cap:
        raise UndecidedWithinBound(
            f"word of length {len(word)} exceeds the BFS radius cap {cap}"
        )
    ball = _cached_ball(p, cap)
    v = 0
    for x in word:
        v = ball.table[x][v]
        assert v >= 0, "prefix of a cap-length word left the ball"
    return v == 0


def shortlex_normal_form(w: Word, ball) -> Word:
    """Shortlex-minimal spelling of the element w names, read off the ball.

    The walk follows w edge by edge from the identity vertex, so it needs
    every prefix of (the free reduction of) w to stay inside the ball, not
    just the endpoint.
    """
    v = 0
    for x in free_reduce(w):
        v = ball.table[x][v]
        if v < 0:
            raise ValueError("element outside ball (walk left the enumerated region)")
    return ball.word_to(v)


@lru_cache(maxsize=8)
def _cached_ball(p: Presentation, radius: int):
    from .cayley import build_ball

    return build_ball(p, radius, WordProblemStrategy("bounded_bfs", radius_cap=radius + 4))
