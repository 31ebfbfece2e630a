"""End-to-end checks of the hopfdeg command-line tool."""
import json
import pathlib
import subprocess
import sys
import tempfile

cli, configs = sys.argv[1], pathlib.Path(sys.argv[2])
failures = []


def check(cond, what):
    print(("ok   " if cond else "FAIL ") + what)
    if not cond:
        failures.append(what)


def run(config, *args):
    return subprocess.run([cli, "--config", str(config), *args], capture_output=True, text=True)


def one_json_line(r):
    lines = r.stdout.splitlines()
    return json.loads(lines[0]) if len(lines) == 1 else None


with tempfile.TemporaryDirectory() as tmp:
    tmp = pathlib.Path(tmp)

    def write(name, doc):
        p = tmp / name
        p.write_text(json.dumps(doc))
        return p

    r = run(configs / "degree_bubble.json", "--out", tmp / "deg")
    line = one_json_line(r)
    check(r.returncode == 0, "degree: exit 0")
    check(line is not None and line["rounded"] == 3 and line["agreement"] is True, "degree: bubble(2,3) -> 3, agreement")
    csv = (tmp / "deg" / "degree.csv").read_bytes()
    check(csv.startswith(b"method,raw,rounded,residual,conclusive\r\n") and csv.count(b"\r\n") == 3,
          "degree: RFC 4180 CSV with header")

    hopf = write("hopf.json", {"schema_version": 1, "command": "hopf",
                               "map": {"family": "whitehead", "params": {"n": 1, "k": 1}}, "hopf": {"N": 64}})
    r = run(hopf, "--format", "json", "--out", tmp / "hopf")
    line = one_json_line(r)
    check(r.returncode == 0, "hopf: exit 0")
    check(line is not None and abs(line["rounded"]) == 2 and line["agreement"] is True, "hopf: whitehead(1,1) -> 2")
    check((tmp / "hopf" / "hopf.json").exists() and not (tmp / "hopf" / "hopf.csv").exists(),
          "hopf: --format json writes JSON only")

    coarse = write("coarse.json", {"schema_version": 1, "command": "hopf",
                                   "map": {"family": "whitehead", "params": {"n": 1, "k": 1, "pole_on_torus": True}},
                                   "hopf": {"N": 48}})
    r = run(coarse)
    check(r.returncode == 2 and one_json_line(r) is not None and "inconclusive" in r.stderr,
          "hopf: unresolved fibers -> exit 2 with JSON and diagnostic")

    bad = write("bad.json", {"schema_version": 1, "command": "degree", "map": {"family": "bubble"}, "extra": 1})
    r = run(bad, "--out", tmp / "bad")
    check(r.returncode == 1 and not (tmp / "bad").exists() and r.stdout == "", "malformed config: exit 1, no output")
    bad_params = write("bad_params.json", {"schema_version": 1, "command": "degree",
                                           "map": {"family": "bubble", "params": {"n": 7, "d": 1}}})
    r = run(bad_params, "--out", tmp / "bad2")
    check(r.returncode == 1 and not (tmp / "bad2").exists(), "invalid family parameters: exit 1, no output")
    r = subprocess.run([cli, "--config", str(configs / "degree_bubble.json"), "--format", "xml"], capture_output=True)
    check(r.returncode == 1, "unknown --format value: exit 1")

    r = run(configs / "degree_bubble.json", "--dry-run", "--seed", "9", "--threads", "2", "--out", tmp / "dry")
    line = one_json_line(r)
    check(r.returncode == 0 and line["dry_run"] and line["config"]["seed"] == 9 and line["config"]["threads"] == 2,
          "dry run prints the resolved configuration")
    check(not (tmp / "dry").exists(), "dry run writes nothing")

    r = run(configs / "gen_map_whitehead.json", "--out", tmp / "gen")
    line = one_json_line(r)
    check(r.returncode == 0 and line["source_dim"] == 3 and line["target_dim"] == 3, "gen_map: dimensions")
    check(json.loads((tmp / "gen" / "map.json").read_text()) == line["descriptor"], "gen_map: descriptor file")

    r = run(configs / "seminorm_bubble.json", "--out", tmp / "sem")
    line = one_json_line(r)
    check(r.returncode == 0 and line["value"] > 0 and line["method"] == "full-pair-sum", "seminorm: estimate")
    check((tmp / "sem" / "seminorm.csv").read_bytes().startswith(b"s,p,metric,method,value"), "seminorm: CSV")

    outs = []
    for i, threads in enumerate(["1", "1", "3"]):
        r = run(configs / "degree_blowup.json", "--out", tmp / f"exp{i}", "--threads", threads)
        check(r.returncode == 0, f"experiment run {i}: exit 0")
        outs.append((tmp / f"exp{i}" / "degree_blowup.csv").read_bytes())
    check(outs[0] == outs[1], "experiment: identical config and seed give byte-identical CSV")
    check(outs[0] == outs[2], "experiment: CSV does not depend on the thread count")
    files = sorted(p.name for p in (tmp / "exp0").iterdir())
    check(files == ["degree_blowup.csv", "degree_blowup.json", "degree_blowup_plot.py"],
          "experiment: CSV, JSON summary and plot script")
    summary = json.loads((tmp / "exp2" / "degree_blowup.json").read_text())
    check(summary["metadata"]["threads"] == 3, "experiment: thread count recorded in metadata")

sys.exit(1 if failures else 0)
