"""
Points vectors and partial ballots
==================================

Each Borda variation is a points vector plus a rule for the candidates a
ballot leaves unranked.  This script prints both for a six-candidate race.
"""

# %%
# Complete ballots
# ----------------
# With every candidate ranked, ABC, BCU and MBC coincide with the standard
# Borda count.  EBC doubles from rank to rank; QBC grows quadratically.
from rcvborda import BORDA_METHODS, points_vector

for method in BORDA_METHODS:
    vec = points_vector(method, 6, 6)
    print(f"{method.value:>4}", [int(p) for p in vec.points])

# %%
# A ballot ranking two of six
# ---------------------------
# ABC, EBC and QBC share the points nobody was given evenly among the four
# unranked candidates, so every ballot is worth the same total.  BCU keeps
# full values for the ranked pair and gives the rest nothing; MBC rescales
# the ranked pair to (2, 1).
for method in BORDA_METHODS:
    vec = points_vector(method, 6, 2)
    full = vec.full(6)
    print(f"{method.value:>4}", [str(p) for p in full], "ballot total", sum(full))

# %%
# Exactness
# ---------
# Shares are exact rationals, and EBC values grow as powers of two, so large
# fields stay exact too.
big = points_vector("EBC", 66, 1)
print("EBC, 66 candidates: top", big.points[0], "share", big.unranked_share)
