"""Full election analysis, batch aggregation and report serialization."""

from __future__ import annotations

import csv
import io
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import fixtures
from .ballot import (
    DEFAULT_WRITEIN_PATTERNS,
    BallotError,
    CvrFormat,
    NormalizationStats,
    Profile,
    build_profile,
    normalize,
    parse_cvr,
    roster_from_raw,
)
from .criteria import criteria_summary, verifiable_failures
from .manipulation import (
    COMPROMISE,
    KINDS,
    SPOILER,
    TRUNCATION,
    Detection,
    compromise_failure,
    spoiler_effect,
    truncation_failure,
    verify_witness,
)
from .scoring import BORDA_METHODS, TIE_BREAKS, Method, result

log = logging.getLogger(__name__)

FORMATS = ("json", "csv", "table")
VERIFIABLE = (
    "majority_winner_failure",
    "majority_loser_failure",
    "condorcet_winner_failure",
    "condorcet_loser_failure",
)
FAILURE_ROWS = VERIFIABLE + KINDS
CSV_HEADER = ("failure", "method", "count", "denominator", "rate")


class InvariantViolation(AssertionError):
    pass


@dataclass(frozen=True)
class RunConfig:
    methods: tuple[Method, ...] = BORDA_METHODS
    tie_break: str = "index"
    spoiler_cap: int = 10
    writein_patterns: tuple[str, ...] = DEFAULT_WRITEIN_PATTERNS
    unique_unranked_is_last: bool = True
    output_format: str = "json"
    max_exact_types: int = 12

    def __post_init__(self):
        object.__setattr__(self, "methods", tuple(Method.parse(m) for m in self.methods))
        if not self.methods:
            raise ValueError("at least one method is required")
        if self.spoiler_cap < 2:
            raise ValueError("spoiler cap must be at least 2")
        if self.tie_break not in TIE_BREAKS:
            raise ValueError(f"tie-break must be one of {TIE_BREAKS}")
        if self.output_format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _unfrac(s: str) -> Fraction:
    return Fraction(s)


@dataclass
class MethodReport:
    winner: str | None
    tie: bool
    totals: dict[str, Fraction]
    failures: dict[str, dict | None]
    witnesses: dict[str, dict]

    def to_dict(self) -> dict:
        return {
            "winner": self.winner,
            "tie": self.tie,
            "totals": {k: _frac(v) for k, v in self.totals.items()},
            "failures": self.failures,
            "witnesses": self.witnesses,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MethodReport":
        return cls(
            d["winner"],
            d["tie"],
            {k: _unfrac(v) for k, v in d["totals"].items()},
            d["failures"],
            d["witnesses"],
        )

    def flagged(self, kind: str) -> bool:
        if kind in VERIFIABLE:
            return self.failures.get(kind) is not None
        return self.witnesses.get(kind, {}).get("status") == "found"


@dataclass
class ElectionReport:
    election: str
    roster: list[str]
    normalization: dict
    criteria: dict
    methods: dict[str, MethodReport]
    agreement: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "election": self.election,
            "roster": list(self.roster),
            "normalization": self.normalization,
            "criteria": self.criteria,
            "methods": {k: v.to_dict() for k, v in self.methods.items()},
            "agreement": self.agreement,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ElectionReport":
        return cls(
            d["election"],
            list(d["roster"]),
            d["normalization"],
            d["criteria"],
            {k: MethodReport.from_dict(v) for k, v in d["methods"].items()},
            d.get("agreement", {}),
        )

    @classmethod
    def from_json(cls, data: bytes | str) -> "ElectionReport":
        return cls.from_dict(json.loads(data))


def _names(profile: Profile, ranking) -> list[str]:
    return [profile.roster[c] for c in ranking]


def _detection_dict(profile: Profile, det: Detection) -> dict:
    out = {"status": det.status, "exact": det.exact}
    if det.note:
        out["note"] = det.note
    w = det.witness
    if w is not None:
        out["witness"] = {
            "kind": w.kind,
            "challenger": None if w.challenger is None else profile.roster[w.challenger],
            "resulting_winner": profile.roster[w.resulting_winner],
            "modifications": [
                {"original": _names(profile, m.original), "modified": _names(profile, m.modified), "count": m.count}
                for m in w.modifications
            ],
            "removed": sorted(profile.roster[c] for c in w.removed),
            "total_moved": w.total_moved,
        }
    return out


def _check(condition, message):
    if not condition:
        raise InvariantViolation(message)


def analyze_profile(
    profile: Profile,
    config: RunConfig = RunConfig(),
    election: str = "election",
    stats: NormalizationStats | None = None,
) -> ElectionReport:
    """Run every requested method and detector on an already built profile."""
    summary = criteria_summary(profile, config.unique_unranked_is_last)
    if summary.majority_winner is not None:
        _check(summary.majority_winner == summary.condorcet_winner, "majority winner is not Condorcet winner")
    name = lambda c: None if c is None else profile.roster[c]  # noqa: E731

    methods = {}
    for method in config.methods:
        res = result(profile, method, config.tie_break)
        winner = res.winner(config.tie_break)
        if method is Method.IRV:
            totals = {profile.roster[c]: Fraction(v) for c, v in sorted(res.rounds[-1].counts.items())}
        else:
            totals = dict(zip(profile.roster, res.totals))
        failures = dict.fromkeys(VERIFIABLE)
        if winner is not None:
            record = verifiable_failures(profile, winner, config.unique_unranked_is_last, summary)
            for kind in VERIFIABLE:
                f = getattr(record, kind)
                if f is not None:
                    failures[kind] = {"candidate": name(f.candidate), "winner": name(f.winner)}

        detections = {}
        if method.points_based:
            detections[TRUNCATION] = truncation_failure(
                profile, method, config.tie_break, config.max_exact_types
            )
            detections[COMPROMISE] = compromise_failure(profile, method, config.tie_break)
        else:
            for kind in (TRUNCATION, COMPROMISE):
                detections[kind] = Detection("unsupported")
        detections[SPOILER] = spoiler_effect(profile, method, config.spoiler_cap, config.tie_break)
        for kind, det in detections.items():
            if det.witness is not None:
                _check(verify_witness(profile, det.witness), f"{method} {kind} witness failed replay")

        methods[method.value] = MethodReport(
            name(winner),
            res.tied,
            totals,
            failures,
            {k: _detection_dict(profile, d) for k, d in detections.items()},
        )

    groups: dict[str, list[str]] = {}
    for m, rep in methods.items():
        groups.setdefault(str(rep.winner), []).append(m)
    agreement = {"all_agree": len(groups) == 1, "winners": groups}
    stats = stats or NormalizationStats(ballots=profile.total_ballots + profile.excluded, empty=profile.excluded)
    crit = {
        "majority_winner": name(summary.majority_winner),
        "majority_loser": name(summary.majority_loser),
        "condorcet_winner": name(summary.condorcet_winner),
        "condorcet_loser": name(summary.condorcet_loser),
        "total_ballots": profile.total_ballots,
        "candidates": profile.n,
    }
    return ElectionReport(election, list(profile.roster), stats.as_dict(), crit, methods, agreement)


def load_profile(path, config: RunConfig = RunConfig()) -> tuple[Profile, NormalizationStats, str]:
    """Parse and clean a CVR file, or load a bundled fixture by name."""
    if str(path) in fixtures.FIXTURES:
        profile = fixtures.load(str(path))
        stats = NormalizationStats(ballots=profile.total_ballots)
        return profile, stats, str(path)
    path = Path(path)
    fmt = CvrFormat(writein_patterns=tuple(config.writein_patterns))
    with open(path, newline="", encoding="utf-8") as fh:
        raw = parse_cvr(fh, fmt, source=path)
    roster = roster_from_raw(raw, fmt)
    if not roster:
        raise BallotError("no candidates found", source=path)
    ballots = []
    cleaned = {}  # identical rows clean identically
    for r in raw:
        if r.marks not in cleaned:
            try:
                cleaned[r.marks] = normalize(r, roster, fmt.writein_patterns, fmt.skip_tokens, fmt.overvote_tokens)
            except BallotError as exc:
                raise BallotError(f"unknown candidate {exc.token!r}", exc.line, exc.token, path) from None
        ballots.append(cleaned[r.marks])
    profile = build_profile(ballots, roster)
    return profile, NormalizationStats.from_ballots(ballots), path.stem


def analyze(path, config: RunConfig = RunConfig()) -> ElectionReport:
    profile, stats, election = load_profile(path, config)
    if profile.total_ballots == 0:
        raise BallotError("no ballots left after cleaning", source=path)
    return analyze_profile(profile, config, election, stats)


# -- batch -----------------------------------------------------------------------


def denominator_key(kind: str) -> str:
    """Which elections count toward the rate of ``kind``."""
    return {
        "majority_winner_failure": "majority_winner",
        "majority_loser_failure": "majority_loser",
        "condorcet_winner_failure": "condorcet_winner",
        "condorcet_loser_failure": "condorcet_loser",
    }.get(kind, kind)


def _eligible(report: ElectionReport, method: str, kind: str) -> bool:
    if kind in VERIFIABLE:
        return report.criteria[denominator_key(kind)] is not None
    if kind == SPOILER:
        return report.methods[method].witnesses[SPOILER]["status"] != "skipped"
    return True


@dataclass
class FailureMatrix:
    methods: list[str]
    counts: dict[tuple[str, str], tuple[int, int]]  # (failure, method) -> (count, denominator)
    elections: int
    all_agree: int

    def rate(self, kind: str, method: str) -> float | None:
        c, d = self.counts[(kind, method)]
        return c / d if d else None

    def rows(self):
        for kind in FAILURE_ROWS:
            for m in self.methods:
                c, d = self.counts[(kind, m)]
                yield kind, m, c, d, self.rate(kind, m)


def failure_matrix(reports: Sequence[ElectionReport]) -> FailureMatrix:
    methods: list[str] = []
    for r in reports:
        for m in r.methods:
            if m not in methods:
                methods.append(m)
    counts = {}
    for kind in FAILURE_ROWS:
        for m in methods:
            pool = [r for r in reports if m in r.methods and _eligible(r, m, kind)]
            counts[(kind, m)] = (sum(r.methods[m].flagged(kind) for r in pool), len(pool))
    agree = sum(bool(r.agreement.get("all_agree")) for r in reports)
    return FailureMatrix(methods, counts, len(reports), agree)


@dataclass
class BatchReport:
    reports: list[ElectionReport]
    errors: list[dict]
    matrix: FailureMatrix

    def to_dict(self) -> dict:
        return {
            "elections": [r.to_dict() for r in self.reports],
            "errors": self.errors,
            "aggregate": {
                "elections": self.matrix.elections,
                "all_methods_agree": self.matrix.all_agree,
                "rates": [
                    {"failure": k, "method": m, "count": c, "denominator": d}
                    for k, m, c, d, _ in self.matrix.rows()
                ],
            },
        }


def _analyze_for_batch(args):
    path, config = args
    try:
        return analyze(path, config), None
    except (BallotError, OSError, ValueError) as exc:
        return None, {"file": Path(path).name, "error": str(exc)}


def batch(directory, config: RunConfig = RunConfig(), workers: int = 1) -> BatchReport:
    """Analyze every ``*.csv`` file in ``directory``; bad files are collected, not fatal."""
    directory = Path(directory)
    if not directory.is_dir():
        raise BallotError(f"{directory} is not a directory")
    files = sorted(directory.glob("*.csv"))
    if not files:
        raise BallotError(f"no CVR files in {directory}")
    jobs = [(f, config) for f in files]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            outcomes = list(pool.map(_analyze_for_batch, jobs))
    else:
        outcomes = [_analyze_for_batch(j) for j in jobs]
    reports = [r for r, _ in outcomes if r is not None]
    errors = [e for _, e in outcomes if e is not None]
    for e in errors:
        log.warning("skipped %s: %s", e["file"], e["error"])
    return BatchReport(reports, errors, failure_matrix(reports))


# -- output ----------------------------------------------------------------------


def _matrix_csv(matrix: FailureMatrix) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for kind, m, c, d, rate in matrix.rows():
        w.writerow([kind, m, c, d, "" if rate is None else f"{rate:.6f}"])
    return out.getvalue()


def _fmt_total(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{float(x):.1f}"


def _election_table(r: ElectionReport) -> str:
    lines = [f"Election: {r.election}  ({r.criteria['total_ballots']} ballots, {len(r.roster)} candidates)"]
    crit = ", ".join(f"{k}={v}" for k, v in r.criteria.items() if k.startswith(("majority", "condorcet")))
    lines.append(f"  criteria: {crit}")
    n = r.normalization
    lines.append(
        "  cleaning: " + ", ".join(f"{k}={n[k]}" for k in ("ballots", "empty", "duplicates", "skips", "overvotes", "writeins") if k in n)
    )
    for m, rep in r.methods.items():
        tie = "  TIE" if rep.tie else ""
        totals = ", ".join(f"{c} {_fmt_total(v)}" for c, v in rep.totals.items())
        lines.append(f"  {m:<9} winner={rep.winner}{tie}  [{totals}]")
        flagged = [k for k in VERIFIABLE if rep.failures.get(k)]
        lines.append(f"            verifiable: {', '.join(flagged) or 'none'}")
        for kind in KINDS:
            d = rep.witnesses[kind]
            text = d["status"]
            w = d.get("witness")
            if w:
                if kind == SPOILER:
                    text += f": remove {', '.join(w['removed'])} -> {w['resulting_winner']}"
                else:
                    text += f": {w['total_moved']} ballots -> {w['resulting_winner']}"
            if not d.get("exact", True):
                text += " (heuristic)"
            lines.append(f"            {kind}: {text}")
    return "\n".join(lines) + "\n"


def emit(report, fmt: str = "json") -> bytes:
    """Serialize an election or batch report as ``json``, ``csv`` or ``table``."""
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    single = isinstance(report, ElectionReport)
    if fmt == "json":
        text = json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"
    elif fmt == "csv":
        text = _matrix_csv(failure_matrix([report]) if single else report.matrix)
    else:
        if single:
            text = _election_table(report)
        else:
            parts = [_election_table(r) for r in report.reports]
            parts.append(f"Aggregate over {report.matrix.elections} elections "
                         f"(all methods agree in {report.matrix.all_agree})\n")
            for kind, m, c, d, rate in report.matrix.rows():
                shown = "n/a" if rate is None else f"{100 * rate:.1f}%"
                parts.append(f"  {kind:<26} {m:<9} {c:>4}/{d:<4} {shown}\n")
            for e in report.errors:
                parts.append(f"  error: {e['file']}: {e['error']}\n")
            text = "".join(parts)
    return text.encode("utf-8")

