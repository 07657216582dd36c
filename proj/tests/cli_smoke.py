#!/usr/bin/env python3
"""End-to-end checks of the heightlab CLI: exit codes, report shapes,
determinism of JSON reports, and cross-subcommand consistency."""

import json
import os
import subprocess
import sys
import tempfile

CLI = sys.argv[1]


def run(*args, expect=0):
    proc = subprocess.run([CLI, *args], capture_output=True, text=True)
    if proc.returncode != expect:
        raise AssertionError(
            f"{args}: exit {proc.returncode} (want {expect})\nstderr: {proc.stderr}")
    return proc.stdout


def test_count_csv():
    out = run("count", "--builtin", "pn:1", "--B", "1", "--lambda", "1")
    lines = out.strip().splitlines()
    assert lines[0].startswith("# config: ")
    assert lines[1] == "B,count,region,lambda,strategy,wall_ms"
    fields = lines[2].split(",")
    assert fields[0] == "1" and fields[1] == "4"


def test_count_json_deterministic():
    args = ("count", "--builtin", "fermat:4:3", "--grid", "10:2:4",
            "--strategy", "solve-last", "--format", "json")
    a, b = run(*args), run(*args)
    assert a == b
    doc = json.loads(a)
    assert doc["config"]["schema_version"] == "1"
    assert doc["e"] == 2
    counts = [row["count"] for row in doc["series"]["rows"]]
    assert counts == sorted(counts)


def test_count_fermat_b1000():
    # frozen from the naive enumeration, which the unit suite pins against
    # an independent box-scan oracle at smaller bounds
    doc = json.loads(run("count", "--builtin", "fermat:4:3", "--B", "1000",
                         "--lambda", "1", "--format", "json"))
    assert doc["series"]["rows"][0]["count"] == 26905


def test_lambda_monotone():
    def total(lam):
        doc = json.loads(run("count", "--builtin", "fermat:4:3", "--B", "400",
                             "--lambda", lam, "--strategy", "solve-last",
                             "--format", "json"))
        return doc["series"]["rows"][-1]["count"]
    assert total("1") >= total("10") >= total("100")


def test_variety_file():
    with tempfile.NamedTemporaryFile("w", suffix=".txt", delete=False) as f:
        f.write("n=3\nx0^2 + x1^2 - x2^2 - x3^2\n")
        path = f.name
    try:
        doc = json.loads(run("count", "--variety", path, "--B", "50",
                             "--format", "json"))
        assert doc["series"]["rows"][0]["count"] > 0
        # malformed file -> validation exit code
        with open(path, "w") as f:
            f.write("n=3\nx0^2 + x1\n")
        run("count", "--variety", path, "--B", "50", expect=2)
    finally:
        os.unlink(path)


def test_validation_exit_codes():
    run("count", "--builtin", "nope", "--B", "10", expect=2)
    run("count", "--builtin", "pn:2", "--B", "10", "--strategy", "solve-last", expect=2)
    run("count", "--builtin", "pn:2", expect=2)  # missing --B/--grid
    run("density", "--builtin", "fermat:4:3", "--samples", "100", expect=2)
    run("density", "--builtin", "fermat:4:3", "--samples", "20000",
        "--padic", "2", "--k-level", "9", expect=2)  # enumeration guard


def test_fit_pipeline():
    csv = run("count", "--builtin", "pn:1", "--grid", "10:2:6")
    with tempfile.NamedTemporaryFile("w", suffix=".csv", delete=False) as f:
        f.write(csv)
        path = f.name
    try:
        doc = json.loads(run("fit", "--in", path, "--log-power", "0",
                             "--drop-low", "1"))
        assert abs(doc["fit"]["exponent"] - 2.0) < 0.1
    finally:
        os.unlink(path)


def test_fano():
    doc = json.loads(run("fano", "--scan-thm36", "--max", "30"))
    assert doc["scan_thm36"]["equality_cases"] == [{"d": 2, "r": 2}]
    doc = json.loads(run("fano", "--n", "4", "--degrees", "3", "--r", "1"))
    assert doc["criterion"]["expected_dim"] == "2"
    assert doc["criterion"]["nonempty_for_general"]
    doc = json.loads(run("fano", "--birch", "17,3,1"))
    assert doc["birch"]["satisfied"]
    doc = json.loads(run("fano", "--plane-n", "4", "--plane-d", "3"))
    assert doc["fermat_plane"]["r"] == 1


def test_curve():
    doc = json.loads(run("curve", "--builtin", "ct-quadrics-curve", "--p", "3"))
    assert doc["good_reduction"] is True
    assert doc["irreducible"] is True
    assert doc["N1"] == 5
    # bad reduction is reported, not an error
    doc = json.loads(run("curve", "--f", "0,0,0,0,0,1", "--p", "5"))
    assert doc["good_reduction"] is False
    run("curve", "--p", "2", expect=2)


def test_saturation():
    doc = json.loads(run("saturation", "--builtin", "fermat:4:3", "--grid", "10:2:6",
                         "--strategy", "solve-last", "--fermat-plane",
                         "--format", "json"))
    totals = [r["count"] for r in doc["total"]["series"]["rows"]]
    line = [r["count"] for r in doc["strata"][0]["series"]["rows"]]
    comp = [r["count"] for r in doc["complement"]["series"]["rows"]]
    assert all(l + c == t for l, c, t in zip(line, comp, totals))
    assert all(0.0 <= s <= 1.0 for s in doc["strata"][0]["shares"])


def test_density():
    args = ("density", "--builtin", "fermat:4:3", "--lambda-grid", "1,10",
            "--samples", "20000", "--seed", "5", "--padic", "2,3")
    a, b = run(*args), run(*args)
    assert a == b
    doc = json.loads(a)
    assert doc["estimates"][0]["value"] > doc["estimates"][1]["value"]
    assert len(doc["padic"]) == 2
    assert "truncated_leading_factor" in doc


def test_bundle():
    out = run("bundle", "--grid", "1:4:4", "--format", "csv")
    lines = out.strip().splitlines()
    assert lines[1] == ("B,total,on_split_certified,on_not_split,on_undetermined,"
                        "on_accumulating,thin_members")
    doc = json.loads(run("bundle", "--grid", "1:4:4", "--format", "json"))
    for row in doc["rows"]:
        assert row["total"] == (row["on_split_certified"] + row["on_not_split"] +
                                row["on_undetermined"])
    fiber = json.loads(run("bundle", "--fiber", "1,-1,1,-1", "--grid", "4:4:3"))
    assert fiber["fiber"]["class"] == "SplitCertified"
    assert fiber["series"]["rows"][-1]["count"] > 0


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for t in tests:
        t()
        print(f"ok {t.__name__}")
    print(f"{len(tests)} cli smoke tests passed")


if __name__ == "__main__":
    main()
