"""
Verifiable failures in real elections
=====================================

Majority and Condorcet failures can be read off the profile.  Two bundled
elections show different ways partial-ballot rules go wrong.
"""

# %%
from rcvborda import fixtures, tally, verifiable_failures
from rcvborda.criteria import criteria_summary
from rcvborda.scoring import BORDA_METHODS


def show(name):
    p = fixtures.load(name)
    s = criteria_summary(p)
    label = lambda c: None if c is None else p.roster[c]  # noqa: E731
    print(f"{name}: majority winner {label(s.majority_winner)}, Condorcet winner {label(s.condorcet_winner)}, "
          f"Condorcet loser {label(s.condorcet_loser)}")
    for method in BORDA_METHODS:
        w = tally(p, method).winner()
        print(f"  {method.value:>4} elects {p.roster[w]:<8} failures: {verifiable_failures(p, w).flagged() or '-'}")


# %%
# District 6: averaging hands the seat to Flora
# ---------------------------------------------
# Vance has a majority of first choices, but many ballots stop before her.
show("alaska-2022-house-6")

# %%
# San Leandro: two candidates, four failures
# ------------------------------------------
# Under BCU a bullet vote is worth two points to one's favourite and nothing to
# the other, so the candidate with more bullet votes can overtake a majority.
show("san-leandro-2018")
print(tally(fixtures.load("san-leandro-2018"), "BCU").by_name())
