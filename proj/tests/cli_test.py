#!/usr/bin/env python3
"""End-to-end checks for the polarlab command-line tool.

Usage: cli_test.py /path/to/polarlab
"""
import csv
import json
import subprocess
import sys
import tempfile
from pathlib import Path

CLI = Path(sys.argv[1]).resolve()
FAILURES = []


def run(*args, expect=0):
    proc = subprocess.run([str(CLI), *args], capture_output=True, text=True)
    if proc.returncode != expect:
        FAILURES.append(
            f"{' '.join(args)}: exit {proc.returncode} (wanted {expect})\n"
            f"stdout: {proc.stdout}\nstderr: {proc.stderr}"
        )
    return proc


def check(cond, label):
    if not cond:
        FAILURES.append(label)


def rows_without_seconds(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        return [row[:-1] for row in reader]


def main():
    tmp = Path(tempfile.mkdtemp(prefix="polarlab_cli_"))
    spec_path = tmp / "spec.json"

    # --- construct ---------------------------------------------------------
    run("construct", "--n", "64", "--k", "32", "--crc-bits", "16",
        "--design-snr", "2.0", "--out", str(spec_path))
    check(spec_path.exists(), "construct must write the spec file")
    spec = json.loads(spec_path.read_text())
    check(spec["n_bits"] == 64, "spec block length")
    check(spec["k"] == 32, "spec info bits")
    check(spec["crc_bits"] == 16, "spec crc bits")
    check(len(spec["frozen_set"]) == 32, "spec frozen set size")
    check(spec["frozen_set"] == sorted(spec["frozen_set"]), "frozen set sorted")

    stdout_spec = run("construct", "--n", "32", "--k", "16").stdout
    check('"n_bits": 32' in stdout_spec, "construct prints the spec as json")

    run("construct", "--n", "64", "--k", "80", expect=1)  # k > n
    run("construct", "--n", "60", "--k", "30", expect=1)  # not a power of two

    # --- simulate ----------------------------------------------------------
    csv_path = tmp / "results.csv"
    proc = run("simulate", "--spec", str(spec_path), "--decoder", "lscd-exact",
               "--list", "4", "--ebno", "1.0:1.0:2.0", "--max-frames", "150",
               "--target-errors", "10", "--seed", "5", "--out", str(csv_path))
    check(csv_path.exists(), "simulate must write the csv")
    rows = rows_without_seconds(csv_path)
    check(rows[0] == ["ebno_db", "frames", "block_errors", "bit_errors",
                      "bler", "ber", "crc_miss"],
          f"csv header mismatch: {rows[0]}")
    check(len(rows) == 3, f"csv should carry two sweep points, got {len(rows) - 1}")
    sidecar = json.loads((tmp / "results.csv.json").read_text())
    check(sidecar["decoder"] == "lscd-exact", "sidecar decoder name")
    check(sidecar["master_seed"] == 5, "sidecar seed")

    # reruns are reproducible apart from wall-clock timing
    csv_again = tmp / "again.csv"
    run("simulate", "--spec", str(spec_path), "--decoder", "lscd-exact",
        "--list", "4", "--ebno", "1.0:1.0:2.0", "--max-frames", "150",
        "--target-errors", "10", "--seed", "5", "--out", str(csv_again))
    check(rows_without_seconds(csv_again) == rows, "simulate must be deterministic")

    # a single-path list decode equals plain successive cancellation
    scd_csv = tmp / "scd.csv"
    list_csv = tmp / "list.csv"
    common = ["--spec", str(spec_path), "--ebno", "2.0", "--max-frames", "200",
              "--target-errors", "10", "--seed", "9"]
    run("simulate", "--decoder", "scd", *common, "--out", str(scd_csv))
    run("simulate", "--decoder", "lscd-exact", "--list", "1", *common,
        "--out", str(list_csv))
    check(rows_without_seconds(scd_csv) == rows_without_seconds(list_csv),
          "single-path list decoding must match successive cancellation")

    run("simulate", "--spec", str(tmp / "missing.json"), "--ebno", "1.0", expect=2)
    run("simulate", "--spec", str(spec_path), "--decoder", "turbo", "--ebno", "1.0",
        expect=1)
    run("simulate", "--spec", str(spec_path), "--ebno", "2.0:-1.0:1.0", expect=1)

    # --- latency -----------------------------------------------------------
    counts_path = tmp / "counts.json"
    counts_path.write_text(json.dumps(
        {"I": 158, "II": 0, "III": 66, "IV": 224, "V": 48, "VI": 16}))
    latency = json.loads(run("latency", "--counts", str(counts_path), "--n", "1024",
                             "--pe", "64").stdout)
    check(latency["d_baseline"] == 3104, "baseline latency fixture")
    check(latency["d_lscd"] == 1462, "reduced latency fixture")

    from_spec = json.loads(run("latency", "--spec", str(spec_path), "--pe", "16").stdout)
    check(from_spec["n"] == 64, "latency spec block length")
    counts = from_spec["counts"]
    check(sum(counts[k] for k in ("I", "II", "III", "IV", "V", "VI")) == 32,
          "couple counts must cover the block")

    run("latency", "--pe", "64", expect=1)  # neither spec nor counts

    # --- selftest ----------------------------------------------------------
    selftest = run("selftest")
    check("all checks passed" in selftest.stdout.lower(), "selftest summary line")

    if FAILURES:
        print("FAILED CLI checks:")
        for f in FAILURES:
            print(" -", f)
        sys.exit(1)
    print("cli checks passed")


if __name__ == "__main__":
    main()
