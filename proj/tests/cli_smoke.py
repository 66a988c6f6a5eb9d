#!/usr/bin/env python3
"""CLI smoke test: JSON outputs validate against the shipped schemas, runs are byte-identical, exit codes."""
import json
import os
import subprocess
import sys
import tempfile

import jsonschema

BIN, SCHEMAS = sys.argv[1], sys.argv[2]

JSON_RUNS = [
    ("orbit", ["orbit", "--alpha", "(1+1*sqrt(5))/2", "--h-max", "100", "--window", "0:1"]),
    ("fix", ["fix", "--matrix", "2,1,1,1"]),
    ("fix", ["fix", "--xi", "sqrt2"]),
    ("approx", ["approx", "--xi", "sqrt2", "--h-max", "1000", "--grid", "10,100,1000"]),
    ("approx", ["approx", "--x", "0.3", "--h-max", "1000"]),
    ("periodic", ["periodic", "--xi", "sqrt(2)", "--alpha", "golden"]),
    ("spectrum", ["spectrum", "--trace-budget", "8"]),
    ("hurwitz", ["hurwitz", "--case", "psl2z"]),
    ("hurwitz", ["hurwitz", "--all"]),
    ("penetrate", ["penetrate", "--xi", "sqrt2", "--map", "ell", "--t-max", "8"]),
    ("penetrate", ["penetrate", "--xi", "golden"]),
    ("intersect", ["intersect", "--l1", "-1:1", "--l2", "0:inf"]),
    ("intersect", ["intersect", "--l1", "-1:1", "--l2", "1:2"]),
    ("cygan", ["cygan", "--a", "1", "--b", "0"]),
    ("cygan", ["cygan", "--a", "0", "--b", "0"]),
    ("heis", ["heis", "--a", "1:1,2", "--b", "2:0,1"]),
    ("heis", ["heis", "--a", "1:1,2;0,1", "--op", "inv"]),
    ("eisenstein", ["heis", "--eisenstein", "7"]),
    ("khintchine_mc", ["khintchine", "--phi", "power:-0.5", "--n", "30", "--h-max", "300"]),
    ("khintchine_integral", ["khintchine", "--mode", "integral", "--phi", "1"]),
    ("khintchine_integral", ["khintchine", "--mode", "integral", "--phi", "1", "--intro"]),
    ("khintchine_slowly", ["khintchine", "--mode", "slowly", "--phi", "t^2", "--lo", "1", "--hi", "50"]),
]

EXIT_RUNS = [
    (["--bogus"], 2),
    (["orbit", "--group", "nope"], 2),
    (["orbit", "--h-max", "1e30", "--window", "0:1"], 3),
    (["hurwitz"], 2),
    (["heis", "--eisenstein", "4"], 2),
    (["penetrate", "--xi", "sqrt2", "--t-max", "500"], 2),
    (["periodic", "--xi", "golden"], 0),
]

failures = []


def run(args):
    return subprocess.run([BIN] + args, capture_output=True, text=True, timeout=300)


schemas = {}
for name in sorted({n for n, _ in JSON_RUNS}):
    with open(os.path.join(SCHEMAS, name + ".schema.json")) as f:
        schemas[name] = json.load(f)
        jsonschema.Draft202012Validator.check_schema(schemas[name])

for name, args in JSON_RUNS:
    full = ["--format", "json", "--seed", "42", "--threads", "1"] + args
    a, b = run(full), run(full)
    if a.returncode != 0:
        failures.append(f"{args}: exit {a.returncode}: {a.stderr.strip()}")
        continue
    if a.stdout != b.stdout:
        failures.append(f"{args}: output differs between runs")
    try:
        jsonschema.validate(json.loads(a.stdout), schemas[name], cls=jsonschema.Draft202012Validator)
    except (ValueError, jsonschema.ValidationError) as e:
        failures.append(f"{args}: {e}")

for args, code in EXIT_RUNS:
    r = run(args)
    if r.returncode != code:
        failures.append(f"{args}: exit {r.returncode}, expected {code}")
    if code == 2 and not r.stderr:
        failures.append(f"{args}: usage error without a message on stderr")
if "Usage" not in run(["--bogus"]).stderr:
    failures.append("unknown flag does not print usage text")

with tempfile.TemporaryDirectory() as d:
    cache, plot, out = (os.path.join(d, n) for n in ("orbit.cache", "plot.dat", "out.csv"))
    base = ["--format", "csv", "orbit", "--h-max", "400", "--window", "-1:2"]
    fresh = run(base).stdout
    first = run(["--cache", cache, "--emit-plot-data", plot] + base).stdout
    again = run(["--cache", cache] + base).stdout
    if not (fresh == first == again):
        failures.append("orbit cache changes the output")
    if not os.path.getsize(plot):
        failures.append("plot data file is empty")
    run(["--out", out] + base)
    with open(out) as f:
        if f.read() != fresh:
            failures.append("--out differs from stdout")
    other = run(["--cache", cache, "--format", "csv", "orbit", "--h-max", "100", "--window", "-1:2"]).stdout
    if other != run(["--format", "csv", "orbit", "--h-max", "100", "--window", "-1:2"]).stdout:
        failures.append("stale cache reused for a different budget")

mc = ["--format", "json", "khintchine", "--phi", "1", "--n", "40", "--h-max", "500"]
if run(mc + ["--threads", "1"]).stdout != run(mc + ["--threads", "2"]).stdout:
    failures.append("Monte-Carlo output depends on the thread count")

for f in failures:
    print("FAIL", f)
print(f"{len(JSON_RUNS)} schema runs, {len(EXIT_RUNS)} exit-code runs, {len(failures)} failures")
sys.exit(1 if failures else 0)
