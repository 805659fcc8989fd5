"""Positional scoring under the Borda variations, plus plurality and IRV.

All point arithmetic uses :class:`fractions.Fraction`; exponential vectors
reach ``2**(n-1)`` and averaged shares are fractional, so ties and narrow
margins must compare exactly.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .ballot import Profile

TIE_BREAKS = ("index", "report-only")


class Method(str, enum.Enum):
    EBC = "EBC"
    QBC = "QBC"
    ABC = "ABC"
    BCU = "BCU"
    MBC = "MBC"
    PLURALITY = "Plurality"
    IRV = "IRV"

    @property
    def points_based(self) -> bool:
        return self not in (Method.PLURALITY, Method.IRV)

    @classmethod
    def parse(cls, value) -> "Method":
        if isinstance(value, Method):
            return value
        for m in cls:
            if m.value.lower() == str(value).lower():
                return m
        raise ValueError(f"unknown method {value!r}")

    def __str__(self):
        return self.value


BORDA_METHODS = (Method.EBC, Method.QBC, Method.ABC, Method.BCU, Method.MBC)
ALL_METHODS = BORDA_METHODS + (Method.PLURALITY, Method.IRV)


class UnsupportedMethod(ValueError):
    pass


class EmptyProfile(ValueError):
    pass


@dataclass(frozen=True)
class PointsVector:
    """Points for rank 1..k of a k-candidate ranking, and the share each
    unranked candidate receives."""

    points: tuple[Fraction, ...]
    unranked_share: Fraction

    def score(self, position: int | None) -> Fraction:
        """Points at 0-based ``position``; ``None`` means unranked."""
        return self.unranked_share if position is None else self.points[position]

    def full(self, n: int) -> tuple[Fraction, ...]:
        return self.points + (self.unranked_share,) * (n - len(self.points))


def complete_vector(method: Method, n: int) -> tuple[Fraction, ...]:
    """Points vector for a fully ranked ballot with ``n`` candidates."""
    method = Method.parse(method)
    if method is Method.EBC:
        return tuple(Fraction(2 ** (n - i)) for i in range(1, n + 1))
    if method is Method.QBC:
        return tuple(Fraction(1 + (n - i) * (n - i + 1) // 2) for i in range(1, n + 1))
    if method.points_based:
        return tuple(Fraction(n - i + 1) for i in range(1, n + 1))
    raise UnsupportedMethod(f"{method} is not a points-based method")


@lru_cache(maxsize=4096)
def _points_vector(method: Method, n: int, k: int) -> PointsVector:
    full = complete_vector(method, n)
    if method is Method.MBC:
        return PointsVector(tuple(Fraction(k - i) for i in range(k)), Fraction(0))
    prefix = full[:k]
    if method is Method.BCU or k == n:
        return PointsVector(prefix, Fraction(0))
    # ABC, EBC, QBC: unassigned points are shared equally by the unranked
    return PointsVector(prefix, (sum(full) - sum(prefix)) / (n - k))


def points_vector(method, n: int, k: int) -> PointsVector:
    method = Method.parse(method)
    if not method.points_based:
        raise UnsupportedMethod(f"{method} is not a points-based method")
    if n < 1 or not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    return _points_vector(method, n, k)


def ballot_points(ranking: Sequence[int], method, n: int) -> tuple[Fraction, ...]:
    """Points each candidate receives from a single ballot."""
    vec = points_vector(method, n, len(ranking))
    pts = [vec.unranked_share] * n
    for pos, c in enumerate(ranking):
        pts[c] = vec.points[pos]
    return tuple(pts)


def pick(candidates: Iterable[int], tie_break: str = "index") -> int | None:
    """Deterministic choice from a tied set; ``None`` under report-only."""
    candidates = sorted(candidates)
    if not candidates:
        return None
    if len(candidates) == 1:
        return candidates[0]
    if tie_break == "index":
        return candidates[0]
    if tie_break == "report-only":
        return None
    raise ValueError(f"unknown tie-break {tie_break!r}")


def argmax_set(totals: Sequence) -> frozenset[int]:
    if not totals:
        return frozenset()
    best = max(totals)
    return frozenset(i for i, t in enumerate(totals) if t == best)


@dataclass(frozen=True)
class Tally:
    method: Method
    roster: tuple[str, ...]
    totals: tuple[Fraction, ...]
    winners: frozenset[int]

    @property
    def tied(self) -> bool:
        return len(self.winners) > 1

    def winner(self, tie_break: str = "index") -> int | None:
        return pick(self.winners, tie_break)

    def by_name(self) -> dict[str, Fraction]:
        return dict(zip(self.roster, self.totals))

    def margin(self) -> Fraction:
        """Lead of the top total over the runner-up (0 when tied)."""
        ordered = sorted(self.totals, reverse=True)
        return ordered[0] - ordered[1] if len(ordered) > 1 else ordered[0]


def _require_ballots(profile: Profile):
    if profile.total_ballots == 0:
        raise EmptyProfile("profile has no ballots")


def tally(profile: Profile, method) -> Tally:
    method = Method.parse(method)
    if method is Method.PLURALITY:
        return plurality_result(profile)
    if not method.points_based:
        raise UnsupportedMethod(f"{method} has no point totals; use irv_result")
    _require_ballots(profile)
    n = profile.n
    totals = [Fraction(0)] * n
    for ranking, count in profile.types.items():
        for c, p in enumerate(ballot_points(ranking, method, n)):
            if p:
                totals[c] += count * p
    return Tally(method, profile.roster, tuple(totals), argmax_set(totals))


def first_place_counts(profile: Profile) -> tuple[int, ...]:
    counts = [0] * profile.n
    for ranking, count in profile.types.items():
        counts[ranking[0]] += count
    return tuple(counts)


def plurality_result(profile: Profile) -> Tally:
    _require_ballots(profile)
    counts = tuple(Fraction(c) for c in first_place_counts(profile))
    return Tally(Method.PLURALITY, profile.roster, counts, argmax_set(counts))


@dataclass(frozen=True)
class IrvRound:
    counts: dict[int, int]  # continuing candidate -> top-choice votes
    continuing_ballots: int
    eliminated: int | None
    tie: bool = False


@dataclass(frozen=True)
class IrvResult:
    roster: tuple[str, ...]
    rounds: tuple[IrvRound, ...]
    winners: frozenset[int]
    tie: bool

    method = Method.IRV

    @property
    def tied(self) -> bool:
        return self.tie

    def winner(self, tie_break: str = "index") -> int | None:
        if len(self.winners) == 1:
            return next(iter(self.winners))
        return pick(self.winners, tie_break)


def irv_result(profile: Profile, tie_break: str = "index") -> IrvResult:
    """Instant runoff with single eliminations.

    Counting stops as soon as a candidate holds a strict majority of the
    continuing (non-exhausted) ballots or only two candidates remain.  Ties
    for fewest votes are resolved by ``tie_break`` (lowest roster index is
    eliminated) and flagged on the round; a final two-way tie yields both
    candidates as winners.
    """
    if tie_break not in TIE_BREAKS:
        raise ValueError(f"unknown tie-break {tie_break!r}")
    _require_ballots(profile)
    continuing = set(range(profile.n))
    rounds = []
    any_tie = False
    while True:
        counts = {c: 0 for c in continuing}
        for ranking, count in profile.types.items():
            for c in ranking:
                if c in continuing:
                    counts[c] += count
                    break
        active = sum(counts.values())
        best = max(counts.values())
        leaders = [c for c, v in counts.items() if v == best]
        if len(continuing) == 1 or (len(leaders) == 1 and 2 * best > active):
            rounds.append(IrvRound(counts, active, None))
            return IrvResult(profile.roster, tuple(rounds), frozenset(leaders), any_tie)
        if len(continuing) == 2:
            tie = len(leaders) > 1
            rounds.append(IrvRound(counts, active, None, tie))
            return IrvResult(profile.roster, tuple(rounds), frozenset(leaders), any_tie or tie)
        fewest = min(counts.values())
        trailing = [c for c, v in counts.items() if v == fewest]
        tie = len(trailing) > 1
        any_tie = any_tie or tie
        # report-only still needs a deterministic elimination to proceed
        out = min(trailing)
        rounds.append(IrvRound(counts, active, out, tie))
        continuing.remove(out)


def result(profile: Profile, method, tie_break: str = "index"):
    """Tally or IRV result for any supported method."""
    method = Method.parse(method)
    if method is Method.IRV:
        return irv_result(profile, tie_break)
    return tally(profile, method)


def winners(profile: Profile, method, tie_break: str = "index") -> frozenset[int]:
    return result(profile, method, tie_break).winners


@dataclass(frozen=True)
class AgreementMatrix:
    """Winner agreement across profiles; tied winner sets compare as sets."""

    methods: tuple[Method, ...]
    pairwise: dict[tuple[Method, Method], int]
    all_agree: int
    profiles: int

    def rate(self, a, b) -> float:
        a, b = Method.parse(a), Method.parse(b)
        return self.pairwise[(a, b)] / self.profiles if self.profiles else float("nan")


def winner_agreement(profiles: Sequence[Profile], methods=BORDA_METHODS) -> AgreementMatrix:
    methods = tuple(Method.parse(m) for m in methods)
    pairwise = {(a, b): 0 for a in methods for b in methods}
    all_agree = 0
    for profile in profiles:
        ws = {m: winners(profile, m) for m in methods}
        for a, b in itertools.product(methods, repeat=2):
            pairwise[(a, b)] += ws[a] == ws[b]
        all_agree += len({ws[m] for m in methods}) == 1
    return AgreementMatrix(methods, pairwise, all_agree, len(profiles))
