"""End-to-end checks of the spoonflow command line tool.

Usage: python cli_test.py <path to spoonflow>
"""

import csv
import json
import subprocess
import sys
import tempfile
from pathlib import Path

EXE = sys.argv[1]
RUN = ["run", "--generator", "circle_spoon", "--r", "1", "--handle", "1", "--domain-radius", "3",
       "--n-loop", "256", "--e-every", "50"]


def call(*args, ok=True):
    proc = subprocess.run([EXE, *args], capture_output=True, text=True)
    if ok and proc.returncode != 0:
        raise AssertionError(f"{args} exited {proc.returncode}: {proc.stderr}")
    return proc


def check(cond, what):
    if not cond:
        raise AssertionError(what)
    print(f"ok  {what}")


def main():
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        out = tmp / "run"
        call(*RUN, "--out", str(out))
        for name in ("monitors.csv", "snapshots.jsonl", "stop.json"):
            check((out / name).is_file(), f"run writes {name}")
        stop = json.loads((out / "stop.json").read_text())
        check(stop["reason"] == "AreaVanishing", "run stops with AreaVanishing")
        with open(out / "monitors.csv") as f:
            rows = list(csv.DictReader(f))
        check(len(rows) > 10 and float(rows[0]["t"]) == 0.0, "monitors.csv has records from t = 0")

        again = tmp / "again"
        call(*RUN, "--out", str(again))
        check((out / "monitors.csv").read_bytes() == (again / "monitors.csv").read_bytes(),
              "identical runs give byte-identical monitors.csv")

        before = {p.name: p.read_bytes() for p in out.iterdir()}
        verify = call("verify", str(out))
        check("PASS" in verify.stdout and "FAIL" not in verify.stdout, "verify passes on a completed run")
        check({p.name: p.read_bytes() for p in out.iterdir()} == before, "verify leaves the run directory alone")

        call("blowup", str(out))
        report = json.loads((out / "blowup_report.json").read_text())
        check(report["limit_class"] == "BrakkeSpoon", "blowup classifies the limit as the spoon")

        frames = tmp / "frames"
        call("render", str(out), "--out", str(frames))
        svgs = sorted(frames.glob("*.svg"))
        check(len(svgs) == len(rows) and svgs[0].read_text().startswith("<svg"), "render writes one SVG per snapshot")

        shr = tmp / "shrinker"
        call("shrinker", "--out", str(shr))
        profile = json.loads((shr / "spoon_profile.json").read_text())
        check(profile["residual_max"] <= 1e-6, "shrinker residual within 1e-6")
        check(profile["densities"]["BrakkeSpoon"] > 1.5, "spoon density above 3/2")
        check((shr / "spoon_network.json").is_file(), "shrinker exports the network")

        bad = call("run", "--generator", "circle_spoon", "--domain-radius", "1.5", "--handle", "2",
                   "--out", str(tmp / "bad"), ok=False)
        err = json.loads(bad.stderr.strip().splitlines()[-1])
        check(bad.returncode != 0 and err["error"] == "GeometryInfeasible", "infeasible geometry is a JSON error")

        empty = tmp / "empty"
        empty.mkdir()
        missing = call("verify", str(empty), ok=False)
        check(missing.returncode != 0 and "error" in json.loads(missing.stderr.strip().splitlines()[-1]),
              "a directory without run files is a JSON error")

        usage = call("run", "--generator", "teapot", ok=False)
        check(usage.returncode != 0, "unknown generator is a usage error")


if __name__ == "__main__":
    main()
