"""Truncation, compromise and spoiler searches with replayable witnesses.

Every detector returns a :class:`Detection`.  When a failure is found the
detection carries a :class:`Witness` describing exactly which ballots change
(or which candidates leave the slate); :func:`verify_witness` replays it
through the ballot and scoring code and every emitted witness has passed that
replay.

Truncation and compromise witnesses use the fewest moved ballots the search
can find.  For truncation that is an integer program over (ballot type, cut
point) pairs, solved with HiGHS via :func:`scipy.optimize.milp` on integer
scaled constraints and then re-checked in exact arithmetic.  Compromise gains
are monotone (promoting B never helps anyone against B), so its existence
check is exact: promote B on every eligible ballot and retally.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from .ballot import Profile, Ranking, remove_candidates
from .scoring import Method, UnsupportedMethod, ballot_points, result, tally

TRUNCATION = "truncation"
COMPROMISE = "compromise"
SPOILER = "spoiler"
KINDS = (TRUNCATION, COMPROMISE, SPOILER)

FOUND = "found"
NONE = "none"
IMMUNE = "immune"
SKIPPED = "skipped"
TIED = "tie"

MAX_EXACT_TYPES = 12
# largest |coefficient * bound| kept exact in HiGHS' double arithmetic
_FLOAT_EXACT = 2**50


@dataclass(frozen=True)
class Modification:
    original: Ranking
    modified: Ranking
    count: int


@dataclass(frozen=True)
class Witness:
    kind: str
    method: Method
    resulting_winner: int
    challenger: int | None = None
    modifications: tuple[Modification, ...] = ()
    removed: frozenset[int] = frozenset()

    @property
    def total_moved(self) -> int:
        return sum(m.count for m in self.modifications)


@dataclass(frozen=True)
class Detection:
    status: str
    witness: Witness | None = None
    exact: bool = True
    note: str = ""

    def __bool__(self):
        return self.witness is not None


class InstanceTooLarge(ValueError):
    pass


def apply_witness(profile: Profile, witness: Witness) -> Profile:
    """The profile the witness describes (candidate removal for spoilers)."""
    if witness.kind == SPOILER:
        return remove_candidates(profile, witness.removed)
    types = Counter(profile.types)
    for mod in witness.modifications:
        if types[mod.original] < mod.count:
            raise ValueError(f"witness moves {mod.count} ballots of {mod.original}, only {types[mod.original]} cast")
        types[mod.original] -= mod.count
        types[mod.modified] += mod.count
    return profile.with_types(types)


def verify_witness(profile: Profile, witness: Witness) -> bool:
    """Replay the witness and confirm its resulting winner wins outright."""
    mods = witness.modifications
    if witness.kind == TRUNCATION:
        for m in mods:
            if not (len(m.modified) < len(m.original) and m.original[: len(m.modified)] == m.modified):
                return False
            if witness.challenger not in m.modified:
                return False
    elif witness.kind == COMPROMISE:
        b = witness.challenger
        for m in mods:
            if m.modified != (b,) + tuple(c for c in m.original if c != b) or m.original[0] == b:
                return False
    changed = apply_witness(profile, witness)
    if changed.total_ballots == 0:
        return False
    ws = result(changed, witness.method).winners
    if len(ws) != 1:
        return False
    (w,) = ws
    if witness.kind == SPOILER:
        kept = [c for c in range(profile.n) if c not in witness.removed]
        w = kept[w]
    if witness.kind in (TRUNCATION, COMPROMISE) and witness.resulting_winner != witness.challenger:
        return False
    return w == witness.resulting_winner


# -- search machinery --------------------------------------------------------


@dataclass
class _Group:
    """One ballot type and the rankings its voters may switch to."""

    ranking: Ranking
    cap: int
    options: list[Ranking]
    gains: list[tuple[Fraction, ...]] = field(default_factory=list)


def _gain(orig: Ranking, new: Ranking, method, n, target, rivals) -> tuple[Fraction, ...]:
    before = ballot_points(orig, method, n)
    after = ballot_points(new, method, n)
    dt = after[target] - before[target]
    return tuple(dt - (after[c] - before[c]) for c in rivals)


def _feasible(groups, x, deficit) -> bool:
    """Does moving ``x[g][o]`` ballots leave the target strictly ahead of every rival?"""
    for r, need in enumerate(deficit):
        got = sum(
            cnt * g.gains[o][r] for g, xs in zip(groups, x) for o, cnt in enumerate(xs) if cnt
        )
        if got <= need:
            return False
    return True


def _shrink(groups, x, deficit):
    """Reduce each moved count to the least value that still succeeds."""
    changed = True
    while changed:
        changed = False
        for gi, xs in enumerate(x):
            for o, cnt in enumerate(xs):
                if not cnt:
                    continue
                lo, hi = 0, cnt
                while lo < hi:
                    mid = (lo + hi) // 2
                    xs[o] = mid
                    if _feasible(groups, x, deficit):
                        hi = mid
                    else:
                        lo = mid + 1
                xs[o] = lo
                changed |= lo != cnt
    return x


def _solve(groups, deficit):
    """Fewest moved ballots making every rival margin positive.

    Returns ``(x, exact)``; ``x`` is ``None`` when no move set works (or the
    instance could not be solved exactly).
    """
    if not groups:
        return None, True
    cols = [(gi, o) for gi, g in enumerate(groups) for o in range(len(g.options))]
    denoms = [f.denominator for g in groups for gain in g.gains for f in gain]
    denoms += [d.denominator for d in deficit]
    scale = math.lcm(*denoms) if denoms else 1
    A = [[int(groups[gi].gains[o][r] * scale) for gi, o in cols] for r in range(len(deficit))]
    b = [int(d * scale) + 1 for d in deficit]  # strict: margin must exceed the deficit
    caps = [groups[gi].cap for gi, _ in cols]
    biggest = max([abs(v) * max(caps) for row in A for v in row] + [abs(v) for v in b])
    if biggest >= _FLOAT_EXACT:
        return None, False

    # fast reject: even the best per-rival use of every ballot falls short
    for r, row in enumerate(A):
        best = sum(g.cap * max([0] + [row[cols.index((gi, o))] for o in range(len(g.options))])
                   for gi, g in enumerate(groups))
        if best < b[r]:
            return None, True

    capacity = np.zeros((len(groups), len(cols)))
    for j, (gi, _) in enumerate(cols):
        capacity[gi, j] = 1
    res = milp(
        c=np.ones(len(cols)),
        constraints=[
            LinearConstraint(np.array(A, dtype=float), lb=np.array(b, dtype=float), ub=np.inf),
            LinearConstraint(capacity, lb=0, ub=np.array([g.cap for g in groups], dtype=float)),
        ],
        integrality=np.ones(len(cols)),
        bounds=Bounds(0, np.array(caps, dtype=float)),
        options={"mip_rel_gap": 0, "presolve": True},
    )
    if res.status == 2:  # infeasible
        return None, True
    if res.x is None:
        return None, False
    x = [[0] * len(g.options) for g in groups]
    for (gi, o), v in zip(cols, res.x):
        x[gi][o] = int(round(v))
    if not _feasible(groups, x, deficit):
        return None, False
    return _shrink(groups, x, deficit), True


def _witness(kind, method, target, groups, x) -> Witness:
    mods = tuple(
        Modification(g.ranking, g.options[o], cnt)
        for g, xs in zip(groups, x)
        for o, cnt in enumerate(xs)
        if cnt
    )
    return Witness(kind, method, target, challenger=target, modifications=mods)


def _setup(profile: Profile, method, tie_break):
    method = Method.parse(method)
    if not method.points_based:
        raise UnsupportedMethod(f"{method} is not a points-based method")
    t = tally(profile, method)
    return method, t, t.winner(tie_break)


def _best(found):
    # fewest moved ballots, then lowest challenger index
    return min(found, key=lambda w: (w.total_moved, w.challenger)) if found else None


# -- truncation ----------------------------------------------------------------


def truncations(ranking: Ranking, challenger: int, winner: int) -> list[Ranking]:
    """Strict prefixes still listing ``challenger``, for ballots preferring it to ``winner``."""
    if challenger not in ranking:
        return []
    a = ranking.index(challenger)
    if winner in ranking and ranking.index(winner) < a:
        return []
    return [ranking[:j] for j in range(a + 1, len(ranking))]


def _stage_one(profile, method, t, target, winner, groups, deficit):
    """Cut every eligible ballot just above the winner, then shrink."""
    picks = []
    for g in groups:
        cut = g.ranking[: g.ranking.index(winner)] if winner in g.ranking else None
        picks.append([g.cap if opt == cut else 0 for opt in g.options])
    if not _feasible(groups, picks, deficit):
        return None
    return _shrink(groups, picks, deficit)


def truncation_failure(
    profile: Profile, method, tie_break: str = "index", max_exact_types: int = MAX_EXACT_TYPES
) -> Detection:
    """Can voters preferring some loser L to the winner truncate so L wins outright?

    Truncating voters keep L on the ballot and drop one or more of the
    candidates ranked beneath it.  The search covers every such prefix for
    every eligible ballot type when there are at most ``max_exact_types``
    eligible types; otherwise only the single cut just above the winner is
    tried and the detection is marked inexact.
    """
    method, t, winner = _setup(profile, method, tie_break)
    if method is Method.MBC:
        return Detection(IMMUNE)
    if winner is None:
        return Detection(TIED)
    n = profile.n
    found, exact = [], True
    for target in range(n):
        if target == winner:
            continue
        rivals = [c for c in range(n) if c != target]
        deficit = tuple(t.totals[c] - t.totals[target] for c in rivals)
        groups = []
        for ranking, count in profile.types.items():
            opts = truncations(ranking, target, winner)
            if opts:
                gains = [_gain(ranking, o, method, n, target, rivals) for o in opts]
                groups.append(_Group(ranking, count, opts, gains))
        x = None
        if len(groups) <= max_exact_types:
            x, ok = _solve(groups, deficit)
            if not ok:
                exact = False
                x = _stage_one(profile, method, t, target, winner, groups, deficit)
        else:
            exact = False
            x = _stage_one(profile, method, t, target, winner, groups, deficit)
        if x is not None:
            found.append(_witness(TRUNCATION, method, target, groups, x))
    w = _best(found)
    return Detection(FOUND if w else NONE, w, exact)


# -- compromise ----------------------------------------------------------------


def promotion(ranking: Ranking, challenger: int, winner: int) -> Ranking | None:
    """``challenger`` moved to the top, if this ballot is eligible to compromise."""
    if challenger not in ranking:
        return None
    b = ranking.index(challenger)
    if b == 0 or (winner in ranking and ranking.index(winner) < b):
        return None
    return (challenger,) + ranking[:b] + ranking[b + 1 :]


def compromise_failure(profile: Profile, method, tie_break: str = "index") -> Detection:
    """Can voters ranking a loser B above the winner, with someone else first,
    move B to the top and make B the outright winner?"""
    method, t, winner = _setup(profile, method, tie_break)
    if winner is None:
        return Detection(TIED)
    n = profile.n
    found, exact = [], True
    for target in range(n):
        if target == winner:
            continue
        rivals = [c for c in range(n) if c != target]
        deficit = tuple(t.totals[c] - t.totals[target] for c in rivals)
        groups = []
        for ranking, count in profile.types.items():
            new = promotion(ranking, target, winner)
            if new is not None:
                groups.append(
                    _Group(ranking, count, [new], [_gain(ranking, new, method, n, target, rivals)])
                )
        everyone = [[g.cap] for g in groups]
        if not groups or not _feasible(groups, everyone, deficit):
            continue
        x, ok = _solve(groups, deficit)
        if x is None:
            exact = exact and ok
            x = _shrink(groups, everyone, deficit)
        found.append(_witness(COMPROMISE, method, target, groups, x))
    w = _best(found)
    return Detection(FOUND if w else NONE, w, exact)


# -- spoiler -------------------------------------------------------------------


def _lex_subsets(items: Sequence[int]):
    """Nonempty subsets as sorted tuples, in lexicographic order."""
    for i, c in enumerate(items):
        yield (c,)
        for rest in _lex_subsets(items[i + 1 :]):
            yield (c,) + rest


def spoiler_effect(
    profile: Profile, method, max_candidates: int = 10, tie_break: str = "index"
) -> Detection:
    """Does dropping some set of losing candidates change the winner?

    The reduced election is rescored with the points vectors of the smaller
    slate.  The lexicographically smallest removal set that yields a
    different outright winner is reported.
    """
    method = Method.parse(method)
    if profile.n > max_candidates:
        return Detection(SKIPPED, note=f"{profile.n} candidates exceeds cap {max_candidates}")
    winner = result(profile, method, tie_break).winner(tie_break)
    if winner is None:
        return Detection(TIED)
    losers = [c for c in range(profile.n) if c != winner]
    for subset in _lex_subsets(losers):
        reduced = remove_candidates(profile, subset)
        if reduced.total_ballots == 0:
            continue
        ws = result(reduced, method, tie_break).winners
        if len(ws) != 1:
            continue
        kept = [c for c in range(profile.n) if c not in subset]
        new = kept[next(iter(ws))]
        if new != winner:
            return Detection(FOUND, Witness(SPOILER, method, new, removed=frozenset(subset)))
    return Detection(NONE)


DETECTORS: dict[str, Callable[..., Detection]] = {
    TRUNCATION: truncation_failure,
    COMPROMISE: compromise_failure,
    SPOILER: spoiler_effect,
}


# -- brute-force oracle ----------------------------------------------------------

ORACLE_MAX_CANDIDATES = 4
ORACLE_MAX_TYPES = 6
ORACLE_MAX_COUNT = 8


def _compositions(total: int, parts: int):
    """All ways to split ``total`` ballots over ``parts`` labelled bins."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _pareto(points: dict) -> dict:
    """Drop gain vectors that another reachable vector weakly beats everywhere."""
    keep = {}
    for vec in sorted(points, reverse=True):
        if not any(all(a >= b for a, b in zip(k, vec)) for k in keep):
            keep[vec] = points[vec]
    return keep


def brute_force_oracle(
    profile: Profile,
    method,
    failure_kind: str,
    limits: tuple[int, int, int] = (ORACLE_MAX_CANDIDATES, ORACLE_MAX_TYPES, ORACLE_MAX_COUNT),
) -> Witness | None:
    """Exhaustive search for a failure on a tiny instance.

    Every way of distributing each ballot type's voters over its allowed
    rewrites is enumerated and scored directly from per-ballot points.
    Outcomes are kept as the challenger's margin gains over each rival; a
    gain vector that another reachable one matches or beats on every rival
    cannot be the only route to success, so only the Pareto front is carried
    between ballot types.  ``limits`` is (candidates, ballot types, largest
    count).  Intended to validate the main detectors.
    """
    method = Method.parse(method)
    max_n, max_types, max_count = limits
    if (
        profile.n > max_n
        or len(profile.types) > max_types
        or any(c > max_count for c in profile.types.values())
    ):
        raise InstanceTooLarge(
            f"oracle limited to n<={max_n}, <={max_types} types, counts<={max_count}"
        )
    if failure_kind == SPOILER:
        return _oracle_spoiler(profile, method)
    if failure_kind not in (TRUNCATION, COMPROMISE):
        raise ValueError(f"unknown failure kind {failure_kind!r}")
    if not method.points_based:
        raise UnsupportedMethod(f"{method} is not a points-based method")

    n = profile.n
    base = [Fraction(0)] * n
    for ranking, count in profile.types.items():
        for c, p in enumerate(ballot_points(ranking, method, n)):
            base[c] += count * p
    best = max(base)
    winner = min(c for c in range(n) if base[c] == best)

    for target in range(n):
        if target == winner:
            continue
        rivals = [c for c in range(n) if c != target]
        need = [base[c] - base[target] for c in rivals]
        per_type = []
        for ranking, count in profile.types.items():
            if failure_kind == TRUNCATION:
                opts = truncations(ranking, target, winner)
            else:
                p = promotion(ranking, target, winner)
                opts = [p] if p is not None else []
            if not opts:
                continue
            old = ballot_points(ranking, method, n)
            gains = []
            for o in opts:
                new = ballot_points(o, method, n)
                gains.append(tuple((new[target] - old[target]) - (new[c] - old[c]) for c in rivals))
            per_type.append((ranking, count, opts, gains))
        # no combination can beat a rival that even its best use of every ballot misses
        if any(
            sum(count * max([Fraction(0)] + [g[r] for g in gains]) for _, count, _, gains in per_type)
            <= need[r]
            for r in range(len(rivals))
        ):
            continue
        reach = {tuple(Fraction(0) for _ in rivals): ()}
        for ranking, count, opts, gains in per_type:
            local = {}
            for split in _compositions(count, len(opts) + 1):
                moved = split[1:]
                vec = tuple(
                    sum((k * g[r] for k, g in zip(moved, gains)), Fraction(0))
                    for r in range(len(rivals))
                )
                if vec not in local:
                    local[vec] = tuple(Modification(ranking, o, k) for o, k in zip(opts, moved) if k)
            nxt = {}
            for vec, mods in reach.items():
                for lvec, lmods in local.items():
                    key = tuple(a + b for a, b in zip(vec, lvec))
                    if key not in nxt:
                        nxt[key] = mods + lmods
            reach = _pareto(nxt)
        for vec, mods in reach.items():
            if all(v > d for v, d in zip(vec, need)):
                return Witness(failure_kind, method, target, challenger=target, modifications=mods)
    return None


def _oracle_spoiler(profile: Profile, method) -> Witness | None:
    winner = result(profile, method).winner("index")
    losers = [c for c in range(profile.n) if c != winner]
    hits = []
    for r in range(1, len(losers) + 1):
        for subset in itertools.combinations(losers, r):
            reduced = remove_candidates(profile, subset)
            if reduced.total_ballots == 0:
                continue
            ws = result(reduced, method).winners
            kept = [c for c in range(profile.n) if c not in subset]
            if len(ws) == 1 and kept[next(iter(ws))] != winner:
                hits.append((subset, kept[next(iter(ws))]))
    if not hits:
        return None
    subset, new = min(hits)
    return Witness(SPOILER, method, new, removed=frozenset(subset))
