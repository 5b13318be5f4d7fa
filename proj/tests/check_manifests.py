"""Run optimize, greedy and random on one synthetic graph and validate each
manifest against the shared schema."""

import json
import os
import subprocess
import sys

import jsonschema


def run(cmd):
    proc = subprocess.run(cmd, capture_output=True, text=True)
    if proc.returncode != 0:
        sys.exit(f"command failed ({proc.returncode}): {' '.join(cmd)}\n{proc.stderr}")


def main():
    cli, schema_path, work = sys.argv[1:4]
    os.makedirs(work, exist_ok=True)
    with open(schema_path) as f:
        schema = json.load(f)
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)

    graph = os.path.join(work, "graph.txt")
    run([cli, "generate", "--nodes", "32", "--steps", "60", "--seed", "2", "--out", graph])
    common = ["--graph", graph, "--k", "2", "--sims", "200", "--seed", "5"]
    jobs = {
        "bopim": ["optimize", *common, "--iter", "400", "--burn", "100"],
        "greedy": ["greedy", *common],
        "random": ["random", *common],
    }
    failures = 0
    for method, args in jobs.items():
        out = os.path.join(work, f"{method}.json")
        run([cli, *args, "--out", out])
        with open(out, "rb") as f:
            raw = f.read()
        raw.decode("utf-8")
        manifest = json.loads(raw)
        errors = sorted(validator.iter_errors(manifest), key=lambda e: list(e.path))
        checks = [
            (not errors, "; ".join(e.message for e in errors[:3])),
            (raw.endswith(b"\n"), "missing trailing newline"),
            (manifest["method"] == method, "wrong method tag"),
        ]
        if method == "bopim":
            checks.append((manifest["eval_count"] == 25, "eval_count != 25"))
        if method == "greedy":
            checks.append((manifest["eval_count"] > 25, "greedy eval_count <= 25"))
        if method == "random":
            checks.append((len(manifest["history"]) == 1, "random history length != 1"))
        bad = [msg for ok, msg in checks if not ok]
        print(f"{method}: {'ok' if not bad else 'FAIL ' + ', '.join(bad)}")
        failures += bool(bad)

    broken = json.loads(open(os.path.join(work, "random.json")).read())
    del broken["best"]
    if validator.is_valid(broken):
        print("schema accepted a manifest without 'best'")
        failures += 1
    sys.exit(1 if failures else 0)


if __name__ == "__main__":
    main()
