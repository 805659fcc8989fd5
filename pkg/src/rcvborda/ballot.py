"""Cast-vote-record ingestion, ballot cleaning and preference profiles.

A raw ballot is the list of rank slots exactly as a CVR row reports them.
Cleaning turns it into a strict partial ranking over the roster:

* write-in marks are dropped wherever they appear,
* repeated appearances of a candidate after the first are dropped,
* skipped ranks are dropped and the ranks close up,
* at the first overvote every slot from there down is discarded.

Rankings are tuples of roster indices.  A :class:`Profile` stores each unique
ranking once together with the number of ballots that cast it.
"""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass, field
from fnmatch import fnmatchcase
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

SKIP = "skipped"
OVERVOTE = "overvote"
WRITE_IN = "Write-In"
DEFAULT_WRITEIN_PATTERNS = ("Write-In", "Write-in", "UWI")

HAD_DUPLICATE = "had_duplicate"
HAD_SKIP = "had_skip"
HAD_OVERVOTE = "had_overvote"
HAD_WRITEIN = "had_writein"
FLAGS = (HAD_DUPLICATE, HAD_SKIP, HAD_OVERVOTE, HAD_WRITEIN)

Ranking = tuple[int, ...]


class BallotError(ValueError):
    """Raised for unreadable CVR input or marks that do not resolve."""

    def __init__(self, message, line=None, token=None, source=None):
        self.line = line
        self.token = token
        self.source = source
        where = []
        if source is not None:
            where.append(str(source))
        if line is not None:
            where.append(f"line {line}")
        prefix = ":".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


@dataclass(frozen=True)
class RawBallot:
    """Rank slots of one CVR row, top rank first."""

    marks: tuple[str, ...]
    line: int | None = None


@dataclass(frozen=True)
class Ballot:
    ranking: Ranking
    flags: frozenset[str] = frozenset()


@dataclass(frozen=True)
class CvrFormat:
    """How to read a CVR file.

    ``rank_columns`` selects the rank slots by header name; by default every
    column whose header starts with ``rank`` is used, in file order.
    ``row_adapter`` maps a full ``{header: cell}`` row to rank marks and
    overrides column selection entirely, which is the hook for jurisdiction
    specific layouts.
    """

    rank_columns: tuple[str, ...] | None = None
    skip_tokens: tuple[str, ...] = (SKIP, "")
    overvote_tokens: tuple[str, ...] = (OVERVOTE,)
    writein_patterns: tuple[str, ...] = DEFAULT_WRITEIN_PATTERNS
    row_adapter: Callable[[Mapping[str, str]], Sequence[str]] | None = None

    def is_writein(self, token: str) -> bool:
        return is_writein(token, self.writein_patterns)


def is_writein(token: str, patterns: Iterable[str] = DEFAULT_WRITEIN_PATTERNS) -> bool:
    return _is_writein(token, tuple(patterns))


@lru_cache(maxsize=8192)
def _is_writein(token: str, patterns: tuple[str, ...]) -> bool:
    return any(fnmatchcase(token, p) for p in patterns)


@dataclass(frozen=True)
class Profile:
    """Multiset of rankings over a fixed roster.

    ``types`` maps each ranking (tuple of roster indices) to its positive
    count.  ``excluded`` counts ballots that were empty after cleaning; they
    take no part in any tally or majority threshold.
    """

    roster: tuple[str, ...]
    types: Mapping[Ranking, int]
    excluded: int = 0
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        roster = tuple(self.roster)
        object.__setattr__(self, "roster", roster)
        if not roster:
            raise ValueError("roster must contain at least one candidate")
        if len(set(roster)) != len(roster):
            raise ValueError("roster names must be unique")
        n = len(roster)
        clean = {}
        for ranking, count in self.types.items():
            ranking = tuple(ranking)
            if count <= 0:
                raise ValueError(f"count for {ranking} must be positive")
            if not ranking:
                raise ValueError("empty rankings belong in `excluded`")
            if len(set(ranking)) != len(ranking) or any(not 0 <= c < n for c in ranking):
                raise ValueError(f"invalid ranking {ranking} for roster of {n}")
            clean[ranking] = clean.get(ranking, 0) + count
        object.__setattr__(self, "types", dict(sorted(clean.items())))
        object.__setattr__(self, "_index", {name: i for i, name in enumerate(roster)})

    @classmethod
    def from_names(cls, roster: Sequence[str], counts: Mapping[Sequence[str], int], excluded=0):
        """Build a profile from rankings written with candidate names."""
        index = {name: i for i, name in enumerate(roster)}
        types: dict[Ranking, int] = {}
        for names, count in counts.items():
            if not count:
                continue
            if isinstance(names, str):
                names = (names,)
            key = tuple(index[name] for name in names)
            types[key] = types.get(key, 0) + count
        return cls(tuple(roster), types, excluded)

    @property
    def n(self) -> int:
        return len(self.roster)

    @property
    def total_ballots(self) -> int:
        return sum(self.types.values())

    def index(self, name: str) -> int:
        return self._index[name]

    def items(self):
        return self.types.items()

    def label(self, ranking: Sequence[int], sep: str = ">") -> str:
        return sep.join(self.roster[c] for c in ranking)

    def expand(self) -> list[Ranking]:
        """Ballot list in canonical order; inverse of :func:`build_profile`."""
        return [r for r, count in self.types.items() for _ in range(count)]

    def with_types(self, types: Mapping[Ranking, int]) -> "Profile":
        return Profile(self.roster, {r: c for r, c in types.items() if c > 0}, self.excluded)


def normalize(
    raw: RawBallot | Sequence[str],
    roster: Sequence[str] | Mapping[str, int],
    writein_patterns: Iterable[str] = DEFAULT_WRITEIN_PATTERNS,
    skip_tokens: Iterable[str] = (SKIP, ""),
    overvote_tokens: Iterable[str] = (OVERVOTE,),
) -> Ballot:
    """Clean one raw ballot into a strict ranking of roster indices."""
    if not isinstance(raw, RawBallot):
        raw = RawBallot(tuple(raw))
    index = roster if isinstance(roster, Mapping) else {name: i for i, name in enumerate(roster)}
    skip_tokens = frozenset(skip_tokens)
    overvote_tokens = frozenset(overvote_tokens)
    writein_patterns = tuple(writein_patterns)
    flags = set()

    # write-ins
    slots = []
    for token in raw.marks:
        token = token.strip()
        if token in skip_tokens or token in overvote_tokens:
            slots.append(token)
        elif is_writein(token, writein_patterns):
            flags.add(HAD_WRITEIN)
        elif token in index:
            slots.append(index[token])
        else:
            raise BallotError(f"unknown candidate {token!r}", line=raw.line, token=token)

    # duplicates
    seen = set()
    deduped = []
    for slot in slots:
        if isinstance(slot, int):
            if slot in seen:
                flags.add(HAD_DUPLICATE)
                continue
            seen.add(slot)
        deduped.append(slot)

    # skips; trailing ones are unused ranks, not skipped ones
    closed = []
    pending = False
    for slot in deduped:
        if isinstance(slot, str) and slot in skip_tokens:
            pending = True
            continue
        if pending:
            flags.add(HAD_SKIP)
            pending = False
        closed.append(slot)

    # overvote cut
    ranking = []
    for slot in closed:
        if isinstance(slot, str):
            flags.add(HAD_OVERVOTE)
            break
        ranking.append(slot)

    return Ballot(tuple(ranking), frozenset(flags))


def parse_cvr(stream, format_config: CvrFormat | None = None, source=None) -> list[RawBallot]:
    """Read raw ballots from a CVR CSV stream (text file, path-like handled by caller).

    The header fixes the number of rank slots; every data row must have the
    same number of columns as the header.
    """
    fmt = format_config or CvrFormat()
    if isinstance(stream, (str, bytes)):
        stream = io.StringIO(stream.decode("utf-8") if isinstance(stream, bytes) else stream)
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise BallotError("empty CVR file", source=source) from None
    header = [h.strip() for h in header]
    if fmt.row_adapter is None:
        if fmt.rank_columns is not None:
            missing = [c for c in fmt.rank_columns if c not in header]
            if missing:
                raise BallotError(f"missing rank columns {missing}", line=1, source=source)
            positions = [header.index(c) for c in fmt.rank_columns]
        else:
            positions = [i for i, h in enumerate(header) if h.lower().startswith("rank")]
        if not positions:
            raise BallotError("header has no rank columns", line=1, source=source)

    ballots = []
    for row in reader:
        line = reader.line_num
        if not row:
            continue
        if len(row) != len(header):
            raise BallotError(
                f"expected {len(header)} columns, found {len(row)}", line=line, source=source
            )
        if fmt.row_adapter is not None:
            marks = tuple(fmt.row_adapter(dict(zip(header, row))))
        else:
            marks = tuple(row[i] for i in positions)
        ballots.append(RawBallot(marks, line))
    if not ballots:
        raise BallotError("CVR file has no ballots", source=source)
    return ballots


def roster_from_raw(raw_ballots: Iterable[RawBallot], format_config: CvrFormat | None = None):
    """Sorted distinct candidate names, ignoring skip/overvote/write-in marks."""
    fmt = format_config or CvrFormat()
    special = set(fmt.skip_tokens) | set(fmt.overvote_tokens)
    names = set()
    for raw in raw_ballots:
        for token in raw.marks:
            token = token.strip()
            if token not in special and not fmt.is_writein(token):
                names.add(token)
    return tuple(sorted(names))


def build_profile(ballots: Iterable[Ballot | Sequence[int]], roster: Sequence[str]) -> Profile:
    counts: Counter = Counter()
    empty = 0
    for ballot in ballots:
        ranking = ballot.ranking if isinstance(ballot, Ballot) else tuple(ballot)
        if ranking:
            counts[ranking] += 1
        else:
            empty += 1
    return Profile(tuple(roster), dict(counts), excluded=empty)


def remove_candidates(profile: Profile, removed: Iterable[int]) -> Profile:
    """Drop candidates from the slate, keeping the voters' relative order.

    The returned profile has a shorter roster; remaining candidates keep
    their original relative order and are re-indexed from 0.
    """
    removed = frozenset(removed)
    if any(not 0 <= c < profile.n for c in removed):
        raise ValueError(f"removed set {sorted(removed)} not within roster")
    if len(removed) >= profile.n:
        raise ValueError("cannot remove every candidate")
    keep = [c for c in range(profile.n) if c not in removed]
    remap = {old: new for new, old in enumerate(keep)}
    types: Counter = Counter()
    emptied = 0
    for ranking, count in profile.types.items():
        reduced = tuple(remap[c] for c in ranking if c not in removed)
        if reduced:
            types[reduced] += count
        else:
            emptied += count
    roster = tuple(profile.roster[c] for c in keep)
    return Profile(roster, dict(types), excluded=profile.excluded + emptied)


@dataclass(frozen=True)
class NormalizationStats:
    ballots: int = 0
    empty: int = 0
    duplicates: int = 0
    skips: int = 0
    overvotes: int = 0
    writeins: int = 0

    @classmethod
    def from_ballots(cls, ballots: Iterable[Ballot]) -> "NormalizationStats":
        n = empty = 0
        flags: Counter = Counter()
        for b in ballots:
            n += 1
            empty += not b.ranking
            flags.update(b.flags)
        return cls(
            n, empty, flags[HAD_DUPLICATE], flags[HAD_SKIP], flags[HAD_OVERVOTE], flags[HAD_WRITEIN]
        )

    def as_dict(self) -> dict:
        return {
            "ballots": self.ballots,
            "empty": self.empty,
            "duplicates": self.duplicates,
            "skips": self.skips,
            "overvotes": self.overvotes,
            "writeins": self.writeins,
        }


def profile_to_csv(profile: Profile) -> str:
    """Expand a profile into canonical CVR CSV text (one row per ballot)."""
    m = max((len(r) for r in profile.types), default=1)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([f"rank{i + 1}" for i in range(m)])
    for ranking, count in profile.types.items():
        row = [profile.roster[c] for c in ranking] + [SKIP] * (m - len(ranking))
        for _ in range(count):
            writer.writerow(row)
    return out.getvalue()
