"""Preference profiles of the toy examples and the real elections discussed.

Real-election tables print two-candidate ballots with the missing candidate
in third place.  Where published BCU/MBC totals show how many such partial
ballots each printed column hides (Alaska special, Queens), the columns are
split back into complete and two-ranked ballots so that BCU and MBC score
them as partial.  Only the per-candidate sums are determined by the totals;
within a sum, ballots are allotted in proportion to column size.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .ballot import Profile


@dataclass(frozen=True)
class Fixture:
    name: str
    title: str
    roster: tuple[str, ...]
    counts: Mapping[tuple[str, ...], int]
    note: str = ""

    def profile(self) -> Profile:
        return Profile.from_names(self.roster, self.counts)


def _split(counts, column, partial):
    """Move ``partial`` ballots of a printed 3-rank column to its 2-rank prefix."""
    counts[column] -= partial
    counts[column[:2]] = counts.get(column[:2], 0) + partial


# Alaska special, as printed; 47470 is the Peltola>Begich>Palin count that
# the published point totals and margins imply (printed as 47407).
ALASKA_SPECIAL_PRINTED = {
    ("Begich",): 11181,
    ("Begich", "Palin", "Peltola"): 27165,
    ("Begich", "Peltola", "Palin"): 15488,
    ("Palin",): 21177,
    ("Palin", "Begich", "Peltola"): 34155,
    ("Palin", "Peltola", "Begich"): 3678,
    ("Peltola",): 23650,
    ("Peltola", "Begich", "Palin"): 47407,
    ("Peltola", "Palin", "Begich"): 4699,
}


def _alaska_special():
    c = dict(ALASKA_SPECIAL_PRINTED)
    c[("Peltola", "Begich", "Palin")] = 47470
    # two-ranked ballots per omitted candidate: Peltola 42170, Palin 32863, Begich 2118
    _split(c, ("Begich", "Palin", "Peltola"), 18681)
    _split(c, ("Palin", "Begich", "Peltola"), 42170 - 18681)
    _split(c, ("Begich", "Peltola", "Palin"), 8084)
    _split(c, ("Peltola", "Begich", "Palin"), 32863 - 8084)
    _split(c, ("Palin", "Peltola", "Begich"), 930)
    _split(c, ("Peltola", "Palin", "Begich"), 2118 - 930)
    return c


def _queens():
    C, R, V = "Crowley", "Richards", "Van Bramer"
    c = {
        (C,): 35009, (C, R, V): 29717, (C, V, R): 15573,
        (R,): 33452, (R, C, V): 33546, (R, V, C): 13493,
        (V,): 11721, (V, C, R): 10854, (V, R, C): 11731,
    }  # fmt: skip
    # omitted Crowley 10166 and Richards 6473 follow from the BCU totals;
    # omitted Van Bramer is unpublished and set at the same overall rate
    _split(c, (R, V, C), 5438)
    _split(c, (V, R, C), 10166 - 5438)
    _split(c, (C, V, R), 3814)
    _split(c, (V, C, R), 6473 - 3814)
    _split(c, (C, R, V), 9573)
    _split(c, (R, C, V), 20379 - 9573)
    return c


def _example(ballots):
    return {tuple(r.split(">")): n for r, n in ballots}


FIXTURES: dict[str, Fixture] = {}


def _register(f: Fixture):
    FIXTURES[f.name] = f


_register(Fixture(
    "example-1", "EBC/QBC majority winner failure", ("A", "B", "C"),
    _example([("A>B>C", 4), ("B>C>A", 3)]),
))
_register(Fixture(
    "example-2", "EBC/QBC majority and Condorcet loser failure", ("A", "B", "C"),
    _example([("A>B>C", 4), ("A>C>B", 3), ("B>C>A", 4), ("C>B>A", 4)]),
))
_register(Fixture(
    "example-3", "BCU majority and Condorcet loser failure", ("A", "B", "C"),
    _example([("A", 2), ("B>C>A", 2), ("C>B>A", 1)]),
))
_register(Fixture(
    "example-4", "MBC Condorcet loser failure", ("A", "B", "C"),
    _example([("A>B>C", 2), ("A>C>B", 2), ("B", 5), ("C", 5)]),
))
_register(Fixture(
    "alaska-2022-special", "2022 Alaska US House special election",
    ("Begich", "Palin", "Peltola"), _alaska_special(),
    "Peltola>Begich>Palin corrected to 47470; 77151 two-ranked ballots restored",
))
_register(Fixture(
    "alaska-2022-house-6", "2022 Alaska State House District 6",
    ("Bryant", "Flora", "Vance"),
    _example([
        ("Bryant", 125), ("Bryant>Flora>Vance", 185), ("Bryant>Vance>Flora", 41),
        ("Flora", 1708), ("Flora>Bryant>Vance", 2118), ("Flora>Vance>Bryant", 382),
        ("Vance", 3907), ("Vance>Bryant>Flora", 318), ("Vance>Flora>Bryant", 735),
    ]),
))
_register(Fixture(
    "queens-2021", "2021 NYC Queens Borough President Democratic primary",
    ("Crowley", "Richards", "Van Bramer"), _queens(),
    "37018 two-ranked ballots restored from printed 3-rank columns",
))
_register(Fixture(
    "san-leandro-2018", "2018 San Leandro City Council District 3",
    ("Aguilar", "Thomas"),
    _example([("Aguilar", 4332), ("Aguilar>Thomas", 7570), ("Thomas", 4936), ("Thomas>Aguilar", 6422)]),
))
_register(Fixture(
    "oakland-2022", "2022 Oakland School Board District 4 (Condorcet cycle)",
    ("Hutchinson", "Manigo", "Resnick"),
    _example([
        ("Hutchinson", 2327), ("Hutchinson>Resnick>Manigo", 2337), ("Hutchinson>Manigo>Resnick", 3563),
        ("Resnick", 3740), ("Resnick>Hutchinson>Manigo", 3095), ("Resnick>Manigo>Hutchinson", 3180),
        ("Manigo", 1846), ("Manigo>Hutchinson>Resnick", 4194), ("Manigo>Resnick>Hutchinson", 2150),
    ]),
))

PUBLISHED_FIXTURES = tuple(n for n in FIXTURES if n != "oakland-2022")


def get(name: str) -> Fixture:
    try:
        return FIXTURES[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}") from None


def load(name: str) -> Profile:
    return get(name).profile()
