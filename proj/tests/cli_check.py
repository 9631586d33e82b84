"""Contract checks for the qlg command line: exit codes, reports, determinism."""

import csv
import json
import shutil
import subprocess
import sys
from pathlib import Path

QLG = sys.argv[1]
WORK = Path(sys.argv[2])

failures = []


def check(cond, what):
    print(("ok   " if cond else "FAIL ") + what)
    if not cond:
        failures.append(what)


def run(*args):
    return subprocess.run([QLG, *args], capture_output=True, text=True)


def fresh(name):
    d = WORK / name
    shutil.rmtree(d, ignore_errors=True)
    return d


def snapshot(d):
    return {p.name: p.read_bytes() for p in sorted(d.iterdir())}


WORK.mkdir(parents=True, exist_ok=True)

# resonance map: CSV shape, identity on every line, manifest, determinism
out = fresh("res")
r = run("resonance-map", "--out", str(out), "--n-radius", "2", "--box", "3")
check(r.returncode == 0, "resonance-map exits 0")
summary = json.loads(r.stdout)
check(summary["anchor"] != "", "summary carries an anchor")
with open(out / "resonance_lines.csv", newline="") as fh:
    rows = list(csv.reader(fh))
check(rows[0] == ["n1", "n2", "x1", "y1", "x2", "y2"], "resonance CSV header")
ok = True
for row in rows[1:]:
    n1, n2, x1, y1, x2, y2 = int(row[0]), int(row[1]), *map(float, row[2:])
    for x, y in ((x1, y1), (x2, y2)):
        ok = ok and abs(n1 * x + n2 * y - (n1 * n1 + n2 * n2)) < 1e-9 and max(abs(x), abs(y)) <= 3 + 1e-9
check(ok and len(rows) > 1, "every resonance segment lies on n.k = |n|^2 inside the box")
manifest = json.loads((out / "manifest.json").read_text())
for key in ("config_sha256", "seed", "versions", "anchor"):
    check(key in manifest, f"manifest has {key}")
check((out / "resonance_lines.svg").read_text().startswith("<svg"), "SVG written")
first = snapshot(out)
run("resonance-map", "--out", str(out), "--n-radius", "2", "--box", "3")
check(snapshot(out) == first, "resonance-map rerun is byte-identical")

# config hash ignores the output path
other = fresh("res_other")
run("resonance-map", "--out", str(other), "--n-radius", "2", "--box", "3")
m2 = json.loads((other / "manifest.json").read_text())
check(m2["config_sha256"] == manifest["config_sha256"], "config hash independent of --out")

# every lemma role name is accepted and reports its anchor
for lemma in ("phi-st", "single-phase", "resonant-pair", "double-phase", "eta-integral"):
    out = fresh("bounds_" + lemma)
    r = run("validate-bounds", "--lemma", lemma, "--samples", "40", "--seed", "7", "--out", str(out))
    check(r.returncode == 0, f"validate-bounds {lemma} exits 0")
    if r.returncode == 0:
        rep = json.loads((out / "bounds.json").read_text())
        check(rep["lemma"] == lemma and rep["anchor"] != "", f"bounds report for {lemma}")
        check(rep["failures"] == [], f"no bound violations for {lemma}")

# seeded sampling is reproducible, a different seed changes the samples
a, b, c = fresh("div_a"), fresh("div_b"), fresh("div_c")
run("divisors", "--samples", "30", "--n-radius", "8", "--seed", "3", "--out", str(a))
run("divisors", "--samples", "30", "--n-radius", "8", "--seed", "3", "--out", str(b))
run("divisors", "--samples", "30", "--n-radius", "8", "--seed", "4", "--out", str(c))
check(snapshot(a) == snapshot(b), "divisors rerun with the same seed is byte-identical")
check((a / "divisors.csv").read_bytes() != (c / "divisors.csv").read_bytes(), "seed changes the divisor samples")

# small simulation
out = fresh("sim")
r = run("simulate", "--eps", "0.1", "--out", str(out))
check(r.returncode == 0, "simulate exits 0")
with open(out / "snapshots.csv", newline="") as fh:
    head = next(csv.reader(fh))
check(head[:2] == ["t", "xi"], "snapshot CSV header")

# error paths
cfg_dir = fresh("cfg")
cfg_dir.mkdir()
bad_key = cfg_dir / "bad_key.json"
bad_key.write_text(json.dumps({"sim": {"epsilon": 0.1}}))
bad_json = cfg_dir / "bad.json"
bad_json.write_text("{ not json")
good = cfg_dir / "good.json"
good.write_text(json.dumps({"resonance": {"n_radius": 1}}))

out = fresh("err")
r = run("resonance-map", "--config", str(bad_key), "--out", str(out))
check(r.returncode == 2, "unknown config key exits 2")
err = json.loads((out / "error.json").read_text())
check(err["error"]["kind"] == "config" and err["exit_code"] == 2, "machine-readable error report")
check(json.loads(r.stderr.strip().splitlines()[-1])["exit_code"] == 2, "error JSON on stderr")
check(run("resonance-map", "--config", str(bad_json), "--out", str(out)).returncode == 2, "malformed JSON exits 2")
check(run("resonance-map", "--config", str(cfg_dir / "missing.json")).returncode == 3, "missing config exits 3")
check(run("remainder", "--eps", "0.05,0.1", "--out", str(out)).returncode == 2, "increasing eps exits 2")
check(run("validate-bounds", "--lemma", "lemma-3", "--out", str(out)).returncode == 2, "unknown lemma exits 2")
check(run("resonance-map", "--n-radius", "0", "--out", str(out)).returncode == 2, "n_radius 0 exits 2")
check(run().returncode == 2, "missing subcommand exits 2")
blocker = cfg_dir / "file"
blocker.write_text("x")
check(run("resonance-map", "--out", str(blocker / "sub")).returncode == 3, "unwritable output exits 3")
r = run("resonance-map", "--config", str(good), "--out", str(out))
check(r.returncode == 0 and not (out / "error.json").exists(), "success clears a stale error report")

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
