"""Sphere classes, projections, condition checkers, and the end counters.

The count works on a truncated quotient ball: vertices of the sphere S(R0)
are equivalent when a path inside the annulus {dist > R0 - inner_offset,
dist <= outer_radius} joins them, and the number of classes, probed at
several R0 and watched for stabilization, is the reported number of
relative ends.  An independent counter (components of the complement of
balls that still touch the enumerated frontier) cross-checks it.

Verdicts are deliberately conservative: a finite answer needs the class
history constant across the window AND a stable ball; a strictly growing
history reads as infinite; anything else is "uncertified".
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from random import Random

from .constants import ConstantsLedger, annulus_inner_radius
from .presentation import Presentation, SubgroupSpec
from .schreier import Ball, BudgetExceeded, DEFAULT_NODE_BUDGET, SchreierBall, stable_ball

INFINITE = "infinite (non-stabilizing)"
UNCERTIFIED = "uncertified"


class UnstableBallError(RuntimeError):
    """Slack escalation hit its cap without two agreeing truncations."""


def sphere(ball: Ball, r: int) -> list[int]:
    """Vertices at distance exactly r from the base."""
    return ball.sphere(r)


@dataclass(frozen=True)
class SphereClasses:
    r0: int
    inner_radius: int
    outer_radius: int
    classes: tuple[tuple[int, ...], ...]
    representatives: tuple[int, ...]
    ball_stable: bool

    @property
    def count(self) -> int:
        return len(self.classes)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, v: int) -> int:
        p = self.parent
        while p[v] != v:
            p[v] = p[p[v]]
            v = p[v]
        return v

    def union(self, a: int, b: int) -> bool:
        a, b = self.find(a), self.find(b)
        if a == b:
            return False
        if b < a:
            a, b = b, a
        self.parent[b] = a
        return True


def sphere_classes(ball: Ball, ledger: ConstantsLedger) -> SphereClasses:
    """Partition of S(R0) by connectivity inside the annulus.

    Processing order cannot matter (union-find over a fixed edge set); the
    class list is sorted by its least vertex, which under the canonical
    BFS labeling is the shortlex-least coset of the class.
    """
    if ledger.outer_radius is None:
        raise ValueError("ledger has no outer_radius; supply one (empirical mode)")
    outer = ledger.outer_radius
    r0 = ledger.r0
    inner = annulus_inner_radius(ledger)
    if not (inner < outer and r0 <= outer):
        raise ValueError(f"bad annulus radii: inner={inner}, R0={r0}, outer={outer}")
    if outer > ball.radius:
        raise ValueError(f"ball radius {ball.radius} is below outer_radius {outer}")
    dist = ball.dist
    n = ball.n_vertices
    in_annulus = [inner < dist[v] <= outer for v in range(n)]
    uf = _UnionFind(n)
    L = ball.n_letters
    table = ball.table
    for v in range(n):
        if not in_annulus[v]:
            continue
        for x in range(L):
            t = table[x][v]
            if t > v and in_annulus[t]:
                uf.union(v, t)
    groups: dict[int, list[int]] = {}
    for v in range(n):
        if dist[v] != r0:
            continue
        key = uf.find(v) if in_annulus[v] else -v - 1
        groups.setdefault(key, []).append(v)
    classes = sorted(tuple(sorted(g)) for g in groups.values())
    return SphereClasses(
        r0=r0,
        inner_radius=inner,
        outer_radius=outer,
        classes=tuple(classes),
        representatives=tuple(c[0] for c in classes),
        ball_stable=getattr(ball, "stable", True),
    )


def project_to_sphere(ball: Ball, v: int, ledger: ConstantsLedger) -> int:
    """Walk the BFS-tree parent chain down to distance R0.

    Identity inside the closed R0-ball; otherwise each hop decreases dist
    by exactly 1, and the parent chain is the shortlex tie-break (a
    vertex's tree parent is its earliest-labeled neighbor one level down).
    """
    if not 0 <= v < ball.n_vertices:
        raise ValueError(f"vertex {v} not in ball")
    r0 = ledger.r0
    while ball.dist[v] > r0:
        v = ball.parent[v]
    return v


@dataclass(frozen=True)
class ShadowReport:
    passed: bool
    pairs_checked: int
    violations: tuple[tuple[int, int], ...]


def shadow_consistency_check(
    ball: Ball, ledger: ConstantsLedger, trials: int, seed: int = 0
) -> ShadowReport:
    """Sampled coherence of projection with the class relation.

    For vertices v, w beyond R0 whose projections share a sphere class,
    v and w must be joined outside the excluded inner ball (within the
    enumerated region).  A violation means the chosen radii are too small
    for the shadows to have separated yet.
    """
    classes = sphere_classes(ball, ledger)
    class_of: dict[int, int] = {}
    for i, cls in enumerate(classes.classes):
        for v in cls:
            class_of[v] = i
    inner = classes.inner_radius
    n = ball.n_vertices
    dist = ball.dist
    outside = [v for v in range(n) if dist[v] > classes.r0]
    if len(outside) < 2:
        return ShadowReport(True, 0, ())
    # connectivity in the complement of the inner ball, whole region
    uf = _UnionFind(n)
    allowed = [dist[v] > inner for v in range(n)]
    L = ball.n_letters
    for v in range(n):
        if not allowed[v]:
            continue
        for x in range(L):
            t = ball.table[x][v]
            if t > v and allowed[t]:
                uf.union(v, t)
    rng = Random(seed)
    violations: list[tuple[int, int]] = []
    checked = 0
    for _ in range(trials):
        v = rng.choice(outside)
        w = rng.choice(outside)
        if v == w:
            continue
        pv = project_to_sphere(ball, v, ledger)
        pw = project_to_sphere(ball, w, ledger)
        if class_of.get(pv) != class_of.get(pw) or class_of.get(pv) is None:
            continue
        checked += 1
        if uf.find(v) != uf.find(w):
            violations.append((v, w))
    return ShadowReport(not violations, checked, tuple(violations))


def stabilization_verdict(history: list[int], window: int) -> int | str:
    """Finite when the tail is constant, infinite when strictly rising."""
    if window < 1:
        raise ValueError("stabilization window must be positive")
    if len(history) < window:
        return UNCERTIFIED
    tail = history[-window:]
    if all(c == tail[0] for c in tail):
        return tail[0]
    if all(a < b for a, b in zip(tail, tail[1:])):
        return INFINITE
    return UNCERTIFIED


@dataclass(frozen=True)
class EndsReport:
    count: int | str
    class_history: tuple[int, ...]
    ledger: ConstantsLedger
    stable_ball: bool
    probe_r0s: tuple[int, ...]
    window: int


def probe_class_history(
    ball: Ball, template: ConstantsLedger, probe_r0s: list[int]
) -> list[int]:
    """Class counts at each probe R0, reusing one ball.

    Each probe keeps the template's inner offset; the connectivity region
    always reaches the ball's edge, since the whole stable ball is the
    certified window and truncating it early only severs real paths.
    """
    history = []
    for r0 in probe_r0s:
        ledger = replace(template, r0=r0, outer_radius=ball.radius)
        history.append(sphere_classes(ball, ledger).count)
    return history


def count_relative_ends(
    p: Presentation,
    h: SubgroupSpec,
    ledger: ConstantsLedger,
    probe_r0s: list[int],
    stabilization_window: int = 3,
    node_budget: int = DEFAULT_NODE_BUDGET,
    max_slack: int = 12,
) -> EndsReport:
    """Count relative ends of (G, H) by probed, stabilized sphere classes.

    The ledger acts as a template: its inner_offset and its outer gap
    (outer_radius - R0) are reused at every probe.  One Schreier ball is
    enumerated out to the largest probe's outer radius and escalated until
    stable; an unstable ball at max_slack is an error, not a number.
    """
    if not probe_r0s or sorted(probe_r0s) != list(probe_r0s):
        raise ValueError("probe_r0s must be nonempty and ascending")
    if ledger.outer_radius is None:
        raise ValueError("ledger template needs an outer_radius")
    gap = ledger.outer_radius - ledger.r0
    radius = probe_r0s[-1] + gap
    ball = stable_ball(p, h, radius, max_slack=max_slack, node_budget=node_budget)
    if not ball.stable:
        raise UnstableBallError(
            f"ball at radius {radius} still unstable at slack {ball.slack}"
        )
    history = probe_class_history(ball, ledger, probe_r0s)
    verdict = stabilization_verdict(history, stabilization_window)
    return EndsReport(
        count=verdict,
        class_history=tuple(history),
        ledger=ledger,
        stable_ball=ball.stable,
        probe_r0s=tuple(probe_r0s),
        window=stabilization_window,
    )


@dataclass(frozen=True)
class EmpiricalEndsReport:
    radii: tuple[int, ...]
    counts: tuple[int, ...]
    verdict: int | str


def empirical_ends(ball: Ball, radii: list[int], window: int = 3) -> EmpiricalEndsReport:
    """Components of {dist > r} that still touch the enumerated frontier.

    The direct reading of ends: how many unbounded-looking pieces remain
    after deleting each ball.  Components that died out before reaching
    distance = ball radius are bounded and do not count.  Processed
    outside-in with one union-find pass.
    """
    if not radii or sorted(radii) != list(radii):
        raise ValueError("radii must be nonempty and ascending")
    if radii[-1] >= ball.radius:
        raise ValueError("largest radius must be strictly below the ball radius")
    n = ball.n_vertices
    dist = ball.dist
    levels: list[list[int]] = [[] for _ in range(ball.radius + 1)]
    for v in range(n):
        levels[dist[v]].append(v)
    uf = _UnionFind(n)
    has_frontier = [False] * n
    active = [False] * n
    frontier_components = 0
    L = ball.n_letters
    table = ball.table
    counts: dict[int, int] = {}
    wanted = set(radii)
    for d in range(ball.radius, radii[0], -1):
        for v in levels[d]:
            active[v] = True
            if d == ball.radius:
                has_frontier[v] = True
                frontier_components += 1
        for v in levels[d]:
            for x in range(L):
                t = table[x][v]
                if t < 0 or not active[t]:
                    continue
                ra, rb = uf.find(v), uf.find(t)
                if ra == rb:
                    continue
                fa, fb = has_frontier[ra], has_frontier[rb]
                uf.union(ra, rb)
                r = uf.find(ra)
                has_frontier[r] = fa or fb
                if fa and fb:
                    frontier_components -= 1
        if (d - 1) in wanted:
            counts[d - 1] = frontier_components
    count_list = [counts[r] for r in radii]
    return EmpiricalEndsReport(
        radii=tuple(radii),
        counts=tuple(count_list),
        verdict=stabilization_verdict(count_list, window),
    )


@dataclass(frozen=True)
class ConditionReport:
    condition: str
    holds_within_ball: bool
    witness_l: int | None
    counterexample: tuple[int, int, int] | None  # (R, x, y)
    admissible_rs: tuple[int, ...]
    pairs_checked: int


def _bfs_within(ball: Ball, src: int, cap: int) -> dict[int, int]:
    """In-ball distances from src, cut off at cap."""
    out = {src: 0}
    frontier = [src]
    d = 0
    while frontier and d < cap:
        d += 1
        nxt = []
        for v in frontier:
            for col in ball.table:
                t = col[v]
                if t >= 0 and t not in out:
                    out[t] = d
                    nxt.append(t)
        frontier = nxt
    return out


def _bfs_region(
    ball: Ball, src: int, allowed: list[bool], targets: set[int]
) -> dict[int, int]:
    """Shortest paths from src staying inside the allowed region."""
    found: dict[int, int] = {}
    if not allowed[src]:
        return found
    seen = {src}
    if src in targets:
        found[src] = 0
    frontier = [src]
    d = 0
    missing = len(targets - found.keys())
    while frontier and missing:
        d += 1
        nxt = []
        for v in frontier:
            for col in ball.table:
                t = col[v]
                if t < 0 or t in seen or not allowed[t]:
                    continue
                seen.add(t)
                nxt.append(t)
                if t in targets:
                    found[t] = d
                    missing -= 1
        frontier = nxt
    return found


def _pair_certified(ball: Ball, u: int, v: int, d: int) -> bool:
    # distances to the base vertex are exact; others need headroom so a
    # true geodesic cannot have left the enumerated region
    if u == 0 or v == 0:
        return True
    r2 = 2 * ball.radius
    return 2 * ball.dist[u] + d <= r2 and 2 * ball.dist[v] + d <= r2


def _floor(x: Fraction) -> int:
    f = Fraction(x)
    return f.numerator // f.denominator


def _run_condition(
    ball: Ball,
    label: str,
    admissible: list[int],
    band: dict[int, tuple[int, int]],
    threshold: dict[int, int],
    m: int,
) -> ConditionReport:
    dist = ball.dist
    witness = 0
    pairs = 0
    for r in admissible:
        lo, hi = band[r]
        allowed = [dist[v] > threshold[r] for v in range(ball.n_vertices)]
        for x in ball.sphere(r):
            near = _bfs_within(ball, x, m)
            partners = []
            for y, d in near.items():
                if y == x or not (lo <= dist[y] <= hi):
                    continue
                if dist[y] == r and y < x:
                    continue  # unordered sphere pairs once
                if _pair_certified(ball, x, y, d):
                    partners.append(y)
            if not partners:
                continue
            pairs += len(partners)
            reached = _bfs_region(ball, x, allowed, set(partners))
            for y in partners:
                if y not in reached:
                    return ConditionReport(
                        condition=label,
                        holds_within_ball=False,
                        witness_l=None,
                        counterexample=(r, x, y),
                        admissible_rs=tuple(admissible),
                        pairs_checked=pairs,
                    )
                if reached[y] > witness:
                    witness = reached[y]
    return ConditionReport(
        condition=label,
        holds_within_ball=True,
        witness_l=witness,
        counterexample=None,
        admissible_rs=tuple(admissible),
        pairs_checked=pairs,
    )


def check_ddag(
    ball: Ball, m: int, k: int, delta_x: Fraction | int = 0, r_cap: int | None = None
) -> ConditionReport:
    """Near-sphere pair connectivity avoiding the shrunken ball (condition
    on the group side).

    For every R with K + 2 delta_x <= R <= radius - K: every certified
    pair x in S(R), y with |dist(y) - R| <= K and d(x, y) <= M must be
    joined by a path avoiding the closed ball of radius R - K - 2 delta_x.
    Holds with the minimal uniform witness L found in the ball, or fails
    with the first counterexample pair.  No admissible R (or no pairs) is
    a vacuous pass with witness 0.

    r_cap trims the admissible range from above.  Near the ball edge the
    avoiding path has no room to exist even when the group provides one a
    little deeper, so a counterexample there says nothing; keep
    radius - r_cap at least half the longest relator plus one.
    """
    dx = Fraction(delta_x)
    if m < 1 or k < 0 or dx < 0:
        raise ValueError("need m >= 1, k >= 0, delta_x >= 0")
    lo_r = max(-_floor(-(k + 2 * dx)), 1)  # ceil, and spheres start at 1
    hi_r = ball.radius - k if r_cap is None else min(ball.radius - k, r_cap)
    admissible = [r for r in range(lo_r, hi_r + 1)]
    band = {r: (r - k, r + k) for r in admissible}
    threshold = {r: _floor(r - k - 2 * dx) for r in admissible}
    return _run_condition(ball, f"ddag(M={m},K={k})", admissible, band, threshold, m)


def check_dag(
    ball: SchreierBall,
    m: int,
    ledger: ConstantsLedger | None = None,
    delta_xh: Fraction | int | None = None,
    r_cap: int | None = None,
) -> ConditionReport:
    """Sphere-pair connectivity in the quotient avoiding the shrunken ball.

    For every R with R >= max(M + delta_xh, 8 delta_xh): certified pairs
    x, y in S(R) with d(x, y) <= M must be joined avoiding the closed ball
    of radius R - 8 delta_xh.  delta_xh defaults to the ledger's formula
    value, which is usually far beyond any desk-scale ball (vacuous pass);
    pass a measured estimate to make the check bite.  r_cap trims the
    range from above, as in check_ddag: counterexamples hard against the
    ball edge are truncation artifacts, not geometry.
    """
    if delta_xh is None and ledger is None:
        raise ValueError("need a ledger or an explicit delta_xh")
    dxh = Fraction(delta_xh) if delta_xh is not None else ledger.delta_xh
    if m < 1 or dxh < 0:
        raise ValueError("need m >= 1, delta_xh >= 0")
    lo_r = max(-_floor(-max(m + dxh, 8 * dxh)), 1)
    hi_r = ball.radius if r_cap is None else min(ball.radius, r_cap)
    admissible = [r for r in range(lo_r, hi_r + 1)]
    band = {r: (r, r) for r in admissible}
    threshold = {r: _floor(r - 8 * dxh) for r in admissible}
    return _run_condition(ball, f"dag(M={m})", admissible, band, threshold, m)
