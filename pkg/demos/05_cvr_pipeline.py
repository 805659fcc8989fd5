"""
From a cast vote record to a batch report
=========================================

Raw ballots are cleaned (write-ins, repeated names, skipped ranks and
overvotes), merged into a profile and analysed.  A directory of files becomes
a failure-rate matrix.
"""

# %%
import tempfile
from pathlib import Path

from rcvborda import RunConfig, analyze, batch, emit, fixtures
from rcvborda.ballot import profile_to_csv

work = Path(tempfile.mkdtemp())
messy = work / "messy.csv"
messy.write_text(
    "rank1,rank2,rank3\n"
    "Ames,Ames,Birch\n"          # repeated name
    "Birch,skipped,Ames\n"       # skipped rank closes up
    "Cole,overvote,Ames\n"       # overvote cuts the rest
    "Write-In,Birch,Cole\n"      # write-in removed
    "overvote,Ames,Birch\n"      # nothing left
    "Ames,Cole,Birch\n"
)

# %%
report = analyze(messy, RunConfig())
print(report.normalization)
print(emit(report, "table").decode())

# %%
# Batch over the bundled elections
# --------------------------------
for name in fixtures.PUBLISHED_FIXTURES:
    (work / f"{name}.csv").write_text(profile_to_csv(fixtures.load(name)))
messy.unlink()
result = batch(work)
print(emit(result, "csv").decode())
