"""
Searching for manipulation
==========================

Truncation and compromise searches return the smallest group of ballots they
can find, and every witness can be replayed.  Spoiler searches remove losing
candidates in lexicographic order.
"""

# %%
from rcvborda import fixtures, verify_witness
from rcvborda.manipulation import apply_witness, compromise_failure, spoiler_effect, truncation_failure
from rcvborda.scoring import BORDA_METHODS, tally

profile = fixtures.load("queens-2021")
print({k: int(v) for k, v in tally(profile, "BCU").by_name().items()})

# %%
# Truncation
# ----------
# MBC is immune; the other four have a witness.
for method in BORDA_METHODS:
    det = truncation_failure(profile, method)
    if det:
        w = det.witness
        print(f"{method.value:>4}: {w.total_moved} ballots truncate -> {profile.roster[w.challenger]}",
              "replays:", verify_witness(profile, w))
    else:
        print(f"{method.value:>4}: {det.status}")

# %%
# Replaying a compromise witness by hand
# --------------------------------------
w = compromise_failure(profile, "ABC").witness
for mod in w.modifications:
    print(f"{mod.count} x {profile.label(mod.original)} -> {profile.label(mod.modified)}")
after = apply_witness(profile, w)
print("ABC totals after:", {k: float(v) for k, v in tally(after, "ABC").by_name().items()})

# %%
# Spoilers
# --------
for method in BORDA_METHODS:
    w = spoiler_effect(profile, method).witness
    print(f"{method.value:>4}: without {[profile.roster[c] for c in sorted(w.removed)]} "
          f"the winner is {profile.roster[w.resulting_winner]}")
