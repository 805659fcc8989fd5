"""
The 2022 Alaska special election
================================

One three-candidate profile, analysed end to end: point totals under every
variation, the instant-runoff baseline, the head-to-head picture and the
manipulation searches.
"""

# %%
from rcvborda import fixtures, irv_result, pairwise_matrix, tally
from rcvborda.criteria import criteria_summary
from rcvborda.manipulation import compromise_failure, spoiler_effect, truncation_failure
from rcvborda.scoring import BORDA_METHODS

profile = fixtures.load("alaska-2022-special")
print(profile.total_ballots, "ballots;", fixtures.get("alaska-2022-special").note)

# %%
# Point totals
# ------------
# Every variation puts Begich first.
for method in BORDA_METHODS:
    totals = tally(profile, method).by_name()
    print(f"{method.value:>4}", {name: float(v) for name, v in totals.items()})

# %%
# Instant runoff eliminates Begich first
# --------------------------------------
irv = irv_result(profile)
for rnd in irv.rounds:
    print({profile.roster[c]: v for c, v in rnd.counts.items()},
          "eliminated:", None if rnd.eliminated is None else profile.roster[rnd.eliminated])

# %%
# Head to head
# ------------
m = pairwise_matrix(profile)
s = criteria_summary(profile)
for x in range(3):
    for y in range(x + 1, 3):
        print(f"{profile.roster[x]} {m[x, y]} - {m[y, x]} {profile.roster[y]}")
print("Condorcet winner:", profile.roster[s.condorcet_winner])

# %%
# Manipulation
# ------------
# EBC and QBC reward Peltola voters who drop Begich; BCU needs far more of
# them; ABC and MBC resist both strategies.
for method in BORDA_METHODS:
    t = truncation_failure(profile, method)
    c = compromise_failure(profile, method)
    s = spoiler_effect(profile, method)
    line = [f"{method.value:>4}"]
    for label, det in (("truncation", t), ("compromise", c)):
        line.append(f"{label}: {det.witness.total_moved if det else det.status}")
    line.append(f"spoiler: {s.status}")
    print("  ".join(line))

w = truncation_failure(profile, "EBC").witness
for mod in w.modifications:
    print(f"{mod.count} x {profile.label(mod.original)} -> {profile.label(mod.modified)}")
