"""Reference implementations and generators shared by the test modules.

The reference functions are written straight from the scoring and
head-to-head definitions, one ballot type at a time, so they share no code
with the package beyond the Profile container.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from hypothesis import strategies as st

from rcvborda.ballot import Profile

METHODS = ("EBC", "QBC", "ABC", "BCU", "MBC")


def ref_complete(method, n):
    if method == "EBC":
        return [Fraction(2 ** (n - i)) for i in range(1, n + 1)]
    if method == "QBC":
        return [1 + Fraction((n - i) * (n - i + 1), 2) for i in range(1, n + 1)]
    return [Fraction(n - i + 1) for i in range(1, n + 1)]


def ref_ballot_points(method, n, ranking):
    """Points each candidate index receives from one ballot."""
    k = len(ranking)
    full = ref_complete(method, n)
    if method in ("EBC", "QBC"):
        prefix = full[:k]
        share = (sum(full) - sum(prefix)) / (n - k) if k < n else Fraction(0)
    elif method == "ABC":
        prefix = full[:k]
        share = Fraction(n - k + 1, 2)
    elif method == "BCU":
        prefix = full[:k]
        share = Fraction(0)
    else:  # MBC
        prefix = [Fraction(k - i) for i in range(k)]
        share = Fraction(0)
    out = [share] * n
    for pos, c in enumerate(ranking):
        out[c] = prefix[pos]
    return out


def ref_totals(profile, method):
    totals = [Fraction(0)] * profile.n
    for ballot, count in profile.types.items():
        for c, p in enumerate(ref_ballot_points(method, profile.n, ballot)):
            totals[c] += count * p
    return totals


def ref_pairwise(profile):
    """m[x][y]: ballots preferring x to y (ranked beats unranked)."""
    n = profile.n
    m = [[0] * n for _ in range(n)]
    for ballot, count in profile.types.items():
        pos = {c: i for i, c in enumerate(ballot)}
        for x in range(n):
            for y in range(n):
                if x != y and x in pos and (y not in pos or pos[x] < pos[y]):
                    m[x][y] += count
    return m


def all_rankings(n):
    return [p for k in range(1, n + 1) for p in itertools.permutations(range(n), k)]


def random_profile(rng: random.Random, max_n=5, max_types=8, max_count=20, min_n=2) -> Profile:
    n = rng.randint(min_n, max_n)
    pool = all_rankings(n)
    types = rng.sample(pool, min(len(pool), rng.randint(1, max_types)))
    return Profile(tuple("ABCDE"[:n]), {t: rng.randint(1, max_count) for t in types})


@st.composite
def profiles(draw, max_n=4, max_types=6, max_count=8, complete=False):
    n = draw(st.integers(2, max_n))
    pool = [r for r in all_rankings(n) if len(r) == n] if complete else all_rankings(n)
    types = draw(st.lists(st.sampled_from(pool), min_size=1, max_size=max_types, unique=True))
    counts = draw(st.lists(st.integers(1, max_count), min_size=len(types), max_size=len(types)))
    return Profile(tuple("ABCDE"[:n]), dict(zip(types, counts)))


def ref_last_place(profile, unique_unranked_is_last=True):
    n = profile.n
    last = [0] * n
    for ballot, count in profile.types.items():
        if len(ballot) == n:
            last[ballot[-1]] += count
        elif len(ballot) == n - 1 and unique_unranked_is_last:
            (missing,) = set(range(n)) - set(ballot)
            last[missing] += count
    return last


def ref_criteria(profile):
    """(majority winner, majority loser, Condorcet winner, Condorcet loser) by direct counting."""
    total = profile.total_ballots
    first = [0] * profile.n
    for ballot, count in profile.types.items():
        first[ballot[0]] += count
    last = ref_last_place(profile)
    m = ref_pairwise(profile)
    others = lambda x: [y for y in range(profile.n) if y != x]  # noqa: E731
    mw = next((c for c in range(profile.n) if 2 * first[c] > total), None)
    ml = next((c for c in range(profile.n) if 2 * last[c] > total), None)
    cw = next((x for x in range(profile.n) if all(m[x][y] > m[y][x] for y in others(x))), None)
    cl = next((x for x in range(profile.n) if all(m[x][y] < m[y][x] for y in others(x))), None)
    return mw, ml, cw, cl
