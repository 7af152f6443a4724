"""Drive every CLI verb on a small configuration and show what lands on disk."""
import tempfile
from pathlib import Path

from unitlinked import cli

work = Path(tempfile.mkdtemp(prefix="unitlinked-demo-"))
small = ["--paths", "200", "--steps", "12", "--seed", "2018"]

cli.main(["fit-mortality", "--out", str(work / "fit")])
print((work / "fit" / "fit.csv").read_text())

cli.main(["compare-models", *small, "--out", str(work / "compare")])
print((work / "compare" / "compare_models.csv").read_text())

cli.main(["premiums", "--policy", "death-benefit", *small, "--out", str(work / "prem")])
print((work / "prem" / "premiums.csv").read_text())
print((work / "prem" / "manifest.json").read_text())
