"""Majority and Condorcet criteria, checked against a method's winner.

Partial ballots: a ranked candidate beats every unranked one head-to-head,
and a ballot leaving both candidates of a pair unranked says nothing about
that pair.  A ballot supplies a last-place vote only when it pins down who
is last: its lowest entry if complete, or (by default) the single unranked
candidate when exactly one is left off.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ballot import Profile
from .scoring import first_place_counts


@dataclass(frozen=True)
class PairwiseMatrix:
    roster: tuple[str, ...]
    counts: tuple[tuple[int, ...], ...]  # counts[x][y]: ballots preferring x to y

    def __getitem__(self, pair) -> int:
        x, y = pair
        return self.counts[x][y]

    @property
    def n(self) -> int:
        return len(self.roster)

    def beats(self, x: int, y: int) -> bool:
        return self.counts[x][y] > self.counts[y][x]


def pairwise_matrix(profile: Profile) -> PairwiseMatrix:
    n = profile.n
    counts = [[0] * n for _ in range(n)]
    for ranking, count in profile.types.items():
        ranked = set(ranking)
        unranked = [c for c in range(n) if c not in ranked]
        for i, x in enumerate(ranking):
            row = counts[x]
            for y in ranking[i + 1 :]:
                row[y] += count
            for y in unranked:
                row[y] += count
    return PairwiseMatrix(profile.roster, tuple(tuple(r) for r in counts))


def last_place_counts(profile: Profile, unique_unranked_is_last: bool = True) -> tuple[int, ...]:
    n = profile.n
    counts = [0] * n
    for ranking, count in profile.types.items():
        k = len(ranking)
        if k == n:
            counts[ranking[-1]] += count
        elif k == n - 1 and unique_unranked_is_last:
            (missing,) = set(range(n)) - set(ranking)
            counts[missing] += count
    return tuple(counts)


def _majority(counts, total) -> int | None:
    for c, v in enumerate(counts):
        if 2 * v > total:
            return c
    return None


def majority_winner(profile: Profile) -> int | None:
    return _majority(first_place_counts(profile), profile.total_ballots)


def majority_loser(profile: Profile, unique_unranked_is_last: bool = True) -> int | None:
    return _majority(last_place_counts(profile, unique_unranked_is_last), profile.total_ballots)


def condorcet_candidates(matrix: PairwiseMatrix) -> tuple[int | None, int | None]:
    """(Condorcet winner, Condorcet loser); either may be ``None``."""
    n = matrix.n
    winner = loser = None
    for x in range(n):
        others = [y for y in range(n) if y != x]
        if n > 1 and all(matrix.beats(x, y) for y in others):
            winner = x
        if n > 1 and all(matrix.beats(y, x) for y in others):
            loser = x
    return winner, loser


@dataclass(frozen=True)
class Failure:
    """The criterion candidate and the winner it conflicts with."""

    candidate: int
    winner: int


@dataclass(frozen=True)
class CriteriaSummary:
    majority_winner: int | None
    majority_loser: int | None
    condorcet_winner: int | None
    condorcet_loser: int | None


def criteria_summary(profile: Profile, unique_unranked_is_last: bool = True) -> CriteriaSummary:
    cw, cl = condorcet_candidates(pairwise_matrix(profile))
    return CriteriaSummary(
        majority_winner(profile), majority_loser(profile, unique_unranked_is_last), cw, cl
    )


@dataclass(frozen=True)
class VerifiableFailureRecord:
    majority_winner_failure: Failure | None = None
    majority_loser_failure: Failure | None = None
    condorcet_winner_failure: Failure | None = None
    condorcet_loser_failure: Failure | None = None

    KINDS = (
        "majority_winner_failure",
        "majority_loser_failure",
        "condorcet_winner_failure",
        "condorcet_loser_failure",
    )

    def flagged(self) -> list[str]:
        return [k for k in self.KINDS if getattr(self, k) is not None]

    def __bool__(self):
        return bool(self.flagged())


def verifiable_failures(
    profile: Profile,
    method_winner: int,
    unique_unranked_is_last: bool = True,
    summary: CriteriaSummary | None = None,
) -> VerifiableFailureRecord:
    s = summary or criteria_summary(profile, unique_unranked_is_last)

    def lost(candidate):
        if candidate is not None and candidate != method_winner:
            return Failure(candidate, method_winner)

    def won(candidate):
        if candidate is not None and candidate == method_winner:
            return Failure(candidate, method_winner)

    return VerifiableFailureRecord(
        lost(s.majority_winner), won(s.majority_loser), lost(s.condorcet_winner), won(s.condorcet_loser)
    )
