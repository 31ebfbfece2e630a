"""Checks the CLI's schema verdicts against the reference jsonschema package."""
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

cli, schema_path, valid_dir, invalid_dir = sys.argv[1:5]
schema = json.loads(pathlib.Path(schema_path).read_text())
jsonschema.Draft4Validator.check_schema(schema)
validator = jsonschema.Draft4Validator(schema)

failures = []


def run_dry(path, out_dir):
    return subprocess.run([cli, "--config", str(path), "--dry-run", "--out", str(out_dir)],
                          capture_output=True, text=True)


for path in sorted(pathlib.Path(valid_dir).glob("*.json")):
    doc = json.loads(path.read_text())
    errors = list(validator.iter_errors(doc))
    if errors:
        failures.append(f"{path.name}: jsonschema rejects a shipped config: {errors[0].message}")
    with tempfile.TemporaryDirectory() as tmp:
        r = run_dry(path, pathlib.Path(tmp) / "out")
        if r.returncode != 0:
            failures.append(f"{path.name}: CLI rejects a shipped config: {r.stderr.strip()}")
        resolved = json.loads(r.stdout)["config"] if r.returncode == 0 else None
        if resolved is not None and list(validator.iter_errors(resolved)):
            failures.append(f"{path.name}: resolved config violates the schema")

for path in sorted(pathlib.Path(invalid_dir).glob("*.json")):
    try:
        doc = json.loads(path.read_text())
        schema_ok = not list(validator.iter_errors(doc))
    except json.JSONDecodeError:
        schema_ok = False
    with tempfile.TemporaryDirectory() as tmp:
        out = pathlib.Path(tmp) / "out"
        r = run_dry(path, out)
        if r.returncode != 1:
            failures.append(f"{path.name}: expected exit 1, got {r.returncode}")
        if out.exists():
            failures.append(f"{path.name}: output directory created for a bad config")
        if not r.stderr.strip():
            failures.append(f"{path.name}: no diagnostic on stderr")
    if schema_ok:
        failures.append(f"{path.name}: jsonschema accepts a config from the invalid set")
    print(f"{path.name}: jsonschema {'accepts' if schema_ok else 'rejects'}, CLI exit {r.returncode}")

for f in failures:
    print("FAIL", f)
sys.exit(1 if failures else 0)
