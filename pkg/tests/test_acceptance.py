"""Acceptance suite: one printed pass/fail line per criterion.

Published figures are hard-coded below; derived figures come from the
reference implementations in ``reference.py`` or from arithmetic shown next
to the assertion.
"""

import json
import random
import time
from fractions import Fraction as F

from rcvborda import cli, fixtures
from rcvborda.criteria import verifiable_failures
from rcvborda.manipulation import (
    COMPROMISE,
    TRUNCATION,
    brute_force_oracle,
    compromise_failure,
    spoiler_effect,
    truncation_failure,
    verify_witness,
)
from rcvborda.scoring import BORDA_METHODS, _points_vector, ballot_points, points_vector, tally

from reference import METHODS, random_profile, ref_criteria, ref_totals

ALL_FOUR = ["majority_winner_failure", "majority_loser_failure", "condorcet_winner_failure", "condorcet_loser_failure"]

# point totals published for the Alaska special election
ALASKA_PUBLISHED = {
    "EBC": {"Begich": F("454203.5"), "Peltola": 451465, "Palin": F("414972.5")},
    "QBC": {"Begich": F("454203.5"), "Peltola": 451465, "Palin": F("414972.5")},
    "ABC": {"Begich": F("400369.5"), "Peltola": 375646, "Palin": F("355962.5")},
    "BCU": {"Begich": 331011, "Peltola": 284939, "Palin": 270853},
    "MBC": {"Begich": 233616, "Peltola": 202658, "Palin": 184211},
}


def by_name(profile, method):
    return tally(profile, method).by_name()


def flagged(profile, method):
    return verifiable_failures(profile, tally(profile, method).winner()).flagged()


def test_criterion_1_points_vectors(criterion):
    _points_vector.cache_clear()
    start = time.perf_counter()
    got = {m.value: points_vector(m, 6, 6).points for m in BORDA_METHODS}
    ebc_62 = points_vector("EBC", 6, 2).full(6)
    elapsed = time.perf_counter() - start
    expected = {
        "EBC": (32, 16, 8, 4, 2, 1),
        "QBC": (16, 11, 7, 4, 2, 1),
        "ABC": (6, 5, 4, 3, 2, 1),
        "BCU": (6, 5, 4, 3, 2, 1),
        "MBC": (6, 5, 4, 3, 2, 1),
    }
    ok = got == expected and ebc_62 == (32, 16, F(15, 4), F(15, 4), F(15, 4), F(15, 4)) and elapsed < 1e-3
    criterion(1, ok, f"n=6 vectors exact for 5 methods, EBC(6,2) share 15/4, {elapsed * 1e6:.0f} us (< 1 ms)")


def test_criterion_2_toy_examples(criterion):
    ex1, ex2, ex3, ex4 = (fixtures.load(f"example-{i}") for i in range(1, 5))
    checks = {
        "ex1 EBC 19/20": tally(ex1, "EBC").totals[:2] == (19, 20),
        "ex2 EBC 36/35/34": tally(ex2, "EBC").totals == (36, 35, 34),
        "ex2 QBC 36/35/34": tally(ex2, "QBC").totals == (36, 35, 34),
        "ex3 BCU 9/8/7": tally(ex3, "BCU").totals == (9, 8, 7),
        "ex4 MBC 12/11/11": tally(ex4, "MBC").totals == (12, 11, 11),
        "ex1 majority winner": "majority_winner_failure" in flagged(ex1, "EBC"),
        "ex2 majority+Condorcet loser": {"majority_loser_failure", "condorcet_loser_failure"} <= set(flagged(ex2, "EBC")),
        "ex3 majority+Condorcet loser": {"majority_loser_failure", "condorcet_loser_failure"} <= set(flagged(ex3, "BCU")),
        "ex4 Condorcet loser": "condorcet_loser_failure" in flagged(ex4, "MBC"),
    }
    bad = [k for k, v in checks.items() if not v]
    criterion(2, not bad, f"{len(checks) - len(bad)}/{len(checks)} exact checks" + (f"; failed {bad}" if bad else ""))


def test_criterion_3_alaska_special(criterion):
    p = fixtures.load("alaska-2022-special")
    worst = 0.0
    order_ok = True
    for m, published in ALASKA_PUBLISHED.items():
        got = by_name(p, m)
        order_ok &= sorted(got, key=got.get, reverse=True) == ["Begich", "Peltola", "Palin"]
        for cand, value in published.items():
            worst = max(worst, abs(float(got[cand] - value)) / float(value))
    pel = p.index("Peltola")
    witnesses_ok = True
    for m in ("EBC", "QBC"):
        t = truncation_failure(p, m).witness
        c = compromise_failure(p, m).witness
        witnesses_ok &= (
            t is not None and t.challenger == pel and t.total_moved == 5478
            and all(p.label(x.original) == "Peltola>Begich>Palin" for x in t.modifications)
            and c is not None and c.total_moved == 1370
            and verify_witness(p, t) and verify_witness(p, c)
        )
    clean = all(
        not flagged(p, m) and not truncation_failure(p, m) and not compromise_failure(p, m) and not spoiler_effect(p, m)
        for m in ("ABC", "MBC")
    )
    bcu = truncation_failure(p, "BCU").witness
    bcu_ok = bcu is not None and bcu.total_moved == 23037
    ok = order_ok and worst <= 1e-3 and witnesses_ok and clean and bcu_ok
    criterion(
        3, ok,
        f"order Begich>Peltola>Palin for all 5: {order_ok}; max rel err {worst:.2e} (<= 1e-3); "
        f"EBC/QBC truncation 5478 + compromise 1370: {witnesses_ok}; ABC/MBC clean: {clean}; BCU truncation 23037: {bcu_ok}",
    )


def test_criterion_4_district_6(criterion):
    p = fixtures.load("alaska-2022-house-6")
    winners = {m.value: p.roster[tally(p, m).winner()] for m in BORDA_METHODS}
    checks = {
        "ABC/MBC elect Flora": winners["ABC"] == winners["MBC"] == "Flora",
        "EBC/QBC/BCU elect Vance": winners["EBC"] == winners["QBC"] == winners["BCU"] == "Vance",
        "ABC/MBC majority+Condorcet winner failures": all(
            flagged(p, m) == ["majority_winner_failure", "condorcet_winner_failure"] for m in ("ABC", "MBC")
        ),
        "EBC/QBC/BCU no verifiable failure": not any(flagged(p, m) for m in ("EBC", "QBC", "BCU")),
        "ABC truncation 186": truncation_failure(p, "ABC").witness.total_moved == 186,
        "spoiler {Bryant} for ABC/MBC": all(
            spoiler_effect(p, m).witness.removed == {p.index("Bryant")} for m in ("ABC", "MBC")
        ),
        "no compromise": not any(compromise_failure(p, m) for m in METHODS),
    }
    bad = [k for k, v in checks.items() if not v]
    criterion(4, not bad, f"{len(checks) - len(bad)}/{len(checks)} exact checks" + (f"; failed {bad}" if bad else ""))


def test_criterion_5_san_leandro(criterion):
    p = fixtures.load("san-leandro-2018")
    totals = by_name(p, "BCU")
    totals_ok = totals == {"Aguilar": 30226, "Thomas": 30286}
    four = flagged(p, "BCU") == ALL_FOUR
    criterion(5, totals_ok and four, f"BCU Thomas {totals['Thomas']}, Aguilar {totals['Aguilar']}; all four flagged: {four}")


def test_criterion_6_queens(criterion):
    p = fixtures.load("queens-2021")
    rows = {}
    for m in METHODS:
        rows[m] = (
            "condorcet_winner_failure" in flagged(p, m),
            bool(spoiler_effect(p, m)),
            bool(compromise_failure(p, m)),
            bool(truncation_failure(p, m)),
        )
    expected = {m: (True, True, True, m != "MBC") for m in METHODS}
    bcu = by_name(p, "BCU")
    ebc = by_name(p, "EBC")
    margin_ok = (bcu["Crowley"], bcu["Richards"]) == (344755, 344323) and bcu["Crowley"] - bcu["Richards"] == 432
    ebc_ok = (ebc["Crowley"], ebc["Richards"]) == (F("502979.5"), 501382)
    ok = rows == expected and margin_ok and ebc_ok
    criterion(6, ok, f"CW/spoiler/compromise all 5, truncation all but MBC: {rows == expected}; "
                     f"BCU 344755-344323=432: {margin_ok}; EBC 502979.5/501382: {ebc_ok}")


def _c7_profile(p, rng, counts):
    """Check every property on one profile; returns a list of violation labels."""
    n = p.n
    types = list(p.types.items())
    mw, ml, cw, cl = ref_criteria(p)
    bad = []
    for m in METHODS:
        vec = {r: ballot_points(r, m, n) for r, _ in types}
        totals = [sum(c * vec[r][i] for r, c in types) for i in range(n)]
        top = max(totals)
        winners = {i for i in range(n) if totals[i] == top}
        if m == "MBC" and ml is not None and ml in winners:
            bad.append("MBC majority loser")
        if m == "ABC" and cl is not None and cl in winners:
            bad.append("ABC Condorcet loser")
        if len(winners) == 1:
            (w,) = winners
            # raise the winner one rank on k ballots of a type
            for r, c in types:
                if w not in r or r[0] == w:
                    continue
                i = r.index(w)
                up = r[: i - 1] + (w, r[i - 1]) + r[i + 1:]
                after = ballot_points(up, m, n)
                for k in {1, c, rng.randint(1, c)}:
                    new = [totals[j] + k * (after[j] - vec[r][j]) for j in range(n)]
                    if new[w] != max(new):
                        bad.append(f"upward monotonicity {m}")
                    counts["raises"] += 1
        # drop some ballots whose top choice is a loser L
        for loser in set(range(n)) - winners:
            mine = [(r, c) for r, c in types if r[0] == loser]
            if not mine:
                continue
            trials = [{r: c for r, c in mine}, {mine[0][0]: 1}]
            trials += [{r: c} for r, c in mine]
            trials.append({r: rng.randint(0, c) for r, c in mine})
            for drop in trials:
                if sum(drop.values()) >= p.total_ballots:
                    continue
                new = [totals[j] - sum(k * vec[r][j] for r, k in drop.items()) for j in range(n)]
                counts["noshow"] += 1
                if new[loser] == max(new) and new.count(max(new)) == 1:
                    bad.append(f"no-show {m}")
    if brute_force_oracle(p, "MBC", TRUNCATION, limits=(5, 8, 20)) is not None:
        bad.append("MBC truncation oracle")
    return bad


def test_criterion_7_property_suites(criterion):
    rng = random.Random(7)
    counts = {"raises": 0, "noshow": 0}
    start = time.perf_counter()
    violations = []
    for _ in range(10_000):
        p = random_profile(rng, max_n=5, max_types=8, max_count=20)
        violations += _c7_profile(p, rng, counts)
    elapsed = time.perf_counter() - start
    ok = not violations and elapsed < 60
    criterion(
        7, ok,
        f"10000 profiles: MBC majority-loser and ABC Condorcet-loser immunity, upward monotonicity ({counts['raises']} raises), "
        f"no-show ({counts['noshow']} deletions), "
        f"MBC truncation oracle; {len(violations)} violations; {elapsed:.1f} s (< 60 s)",
    )


def test_criterion_8_oracle_equivalence(criterion):
    rng = random.Random(8)
    profiles = [random_profile(rng, max_n=4, max_types=6, max_count=8) for _ in range(1000)]
    start = time.perf_counter()
    disagree = []
    found = 0
    for p in profiles:
        for m in METHODS:
            for kind, detect in ((TRUNCATION, truncation_failure), (COMPROMISE, compromise_failure)):
                oracle = brute_force_oracle(p, m, kind)
                det = detect(p, m)
                found += oracle is not None
                if (oracle is not None) != bool(det) or (det.witness and not verify_witness(p, det.witness)):
                    disagree.append((m, kind))
    elapsed = time.perf_counter() - start
    ok = not disagree and elapsed < 120
    criterion(8, ok, f"1000 instances x 5 methods x 2 kinds, {found} failures found; "
                     f"{len(disagree)} disagreements; {elapsed:.1f} s (< 120 s)")


def test_criterion_9_batch_denominators(criterion, tmp_path, capsysbinary):
    every = tmp_path / "all"
    assert cli.main(["fixtures", "export", str(every)]) == 0
    for f in every.glob("*.csv"):
        if f.stem not in fixtures.PUBLISHED_FIXTURES:
            f.unlink()
    out = tmp_path / "batch.json"
    assert cli.main(["batch", str(every), "--out", str(out)]) == 0
    capsysbinary.readouterr()
    data = json.loads(out.read_text())
    got = {(r["failure"], r["method"]): (r["count"], r["denominator"]) for r in data["aggregate"]["rates"]}

    want = {}
    kinds = ("majority_winner_failure", "majority_loser_failure", "condorcet_winner_failure", "condorcet_loser_failure")
    loser_kind = {"majority_loser_failure", "condorcet_loser_failure"}
    for m in METHODS:
        tallies = {k: [0, 0] for k in kinds}
        for name in fixtures.PUBLISHED_FIXTURES:
            p = fixtures.load(name)
            crit = dict(zip(kinds, ref_criteria(p)))
            totals = ref_totals(p, m)
            winner = totals.index(max(totals))
            for k, cand in crit.items():
                if cand is None:
                    continue
                tallies[k][1] += 1
                tallies[k][0] += (cand == winner) if k in loser_kind else (cand != winner)
        for k in kinds:
            want[(k, m)] = tuple(tallies[k])
        for kind in ("truncation", "compromise", "spoiler"):
            want_denominator = len(fixtures.PUBLISHED_FIXTURES)  # all have at most 10 candidates
            flags = sum(
                e["methods"][m]["witnesses"][kind]["status"] == "found" for e in data["elections"]
            )
            want[(kind, m)] = (flags, want_denominator)
    mismatched = sorted(k for k in want if got.get(k) != want[k])
    denoms = {k: want[(k, "ABC")][1] for k in kinds}
    criterion(9, not mismatched and not data["errors"],
              f"8 exported fixtures, denominators {denoms}, trunc/compromise/spoiler 8; "
              f"{len(want) - len(mismatched)}/{len(want)} (count, denominator) pairs exact")
