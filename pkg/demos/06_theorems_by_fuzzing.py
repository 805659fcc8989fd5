"""
Immunity results, checked by random search
==========================================

MBC never elects a majority loser, ABC never elects a Condorcet loser, and
MBC admits no truncation failure.  None of this is proved here; the script
just looks hard for counterexamples and compares the main truncation search
with exhaustive enumeration.
"""

# %%
import itertools
import random

from rcvborda import Profile, brute_force_oracle, truncation_failure
from rcvborda.criteria import criteria_summary
from rcvborda.scoring import tally

rng = random.Random(0)


def random_profile(n):
    pool = [p for k in range(1, n + 1) for p in itertools.permutations(range(n), k)]
    types = rng.sample(pool, min(len(pool), rng.randint(1, 6)))
    return Profile(tuple("ABCD"[:n]), {t: rng.randint(1, 8) for t in types})


hits = {"MBC majority loser": 0, "ABC Condorcet loser": 0, "MBC truncation": 0, "search != oracle": 0}
for _ in range(500):
    p = random_profile(rng.randint(2, 4))
    s = criteria_summary(p)
    hits["MBC majority loser"] += s.majority_loser is not None and s.majority_loser in tally(p, "MBC").winners
    hits["ABC Condorcet loser"] += s.condorcet_loser is not None and s.condorcet_loser in tally(p, "ABC").winners
    hits["MBC truncation"] += brute_force_oracle(p, "MBC", "truncation") is not None
    hits["search != oracle"] += bool(truncation_failure(p, "EBC")) != (brute_force_oracle(p, "EBC", "truncation") is not None)
print(hits)
