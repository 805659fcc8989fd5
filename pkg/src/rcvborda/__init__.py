"""Borda-count variations for ranked-choice elections and voting-failure detection."""

from .ballot import (
    Ballot,
    BallotError,
    CvrFormat,
    Profile,
    RawBallot,
    build_profile,
    normalize,
    parse_cvr,
    remove_candidates,
)
from .criteria import (
    condorcet_candidates,
    majority_loser,
    majority_winner,
    pairwise_matrix,
    verifiable_failures,
)
from .manipulation import (
    Witness,
    brute_force_oracle,
    compromise_failure,
    spoiler_effect,
    truncation_failure,
    verify_witness,
)
from .report import RunConfig, analyze, batch, emit
from .scoring import (
    ALL_METHODS,
    BORDA_METHODS,
    Method,
    irv_result,
    plurality_result,
    points_vector,
    tally,
    winner_agreement,
)

__version__ = "0.1.0"
