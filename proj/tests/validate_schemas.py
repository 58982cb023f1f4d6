"""Validates CLI JSON output and shipped data files against schemas/."""
import json
import pathlib
import subprocess
import sys
import tempfile

from jsonschema import Draft202012Validator
from referencing import Registry, Resource

cli = sys.argv[1]
root = pathlib.Path(sys.argv[2])
schemas = {p.name: json.loads(p.read_text()) for p in (root / "schemas").glob("*.schema.json")}
registry = Registry().with_resources(
    (name, Resource.from_contents(s)) for name, s in schemas.items())
failures = 0


def check(schema, instance, what):
    global failures
    validator = Draft202012Validator(schemas[schema], registry=registry)
    errors = sorted(validator.iter_errors(instance), key=lambda e: list(e.path))
    if errors:
        failures += 1
        print(f"FAIL {what}: {errors[0].message} at {list(errors[0].path)}")
    else:
        print(f"ok   {what}")


def run(*args, expect=0):
    proc = subprocess.run([cli, *args], capture_output=True, text=True)
    if proc.returncode != expect:
        raise SystemExit(f"{args} exited {proc.returncode}: {proc.stderr}")
    return json.loads(proc.stdout)


for schema in schemas.values():
    Draft202012Validator.check_schema(schema)

check("example-list.schema.json", run("example", "list", "--format", "json"), "example list")
for name in ["comb", "ndagger-not-eopen", "ndagger-eclosed", "loc-ext", "cone-contraction", "equiconnected"]:
    check("report.schema.json", run("example", "run", name, "--format", "json"), f"report {name}")
check("report.schema.json", run("example", "run", "comb", "--epsilon", "2^-6", "--n-max", "4", "--format", "json",
                                "--timings"), "report with timings")
for name in ["sine", "comb", "ndagger", "earring", "circle"]:
    check("space-info.schema.json", run("space", "info", name, "--format", "json"), f"space info {name}")

data = root / "data"
problem = json.loads((data / "comb-limit.problem.json").read_text())
check("problem.schema.json", problem, "shipped comb-limit problem")
check("certificate.schema.json", json.loads((data / "comb-limit.certificate.json").read_text()),
      "shipped comb-limit certificate")
check("verdict.schema.json", run("certify", str(data / "comb-limit.problem.json"),
                                 str(data / "comb-limit.certificate.json"), "--format", "json"), "verdict")

with tempfile.TemporaryDirectory() as tmp:
    tmp = pathlib.Path(tmp)
    for family, n, variant in [("comb", "3", None), ("ndagger-eopen", "2", None), ("hawaii", "2", None),
                               ("sine-eopen", "2", None), ("pathcomp", None, "path-component")]:
        args = ["export", family, "--epsilon", "2^-5", "--problem", str(tmp / "p.json"),
                "--certificate", str(tmp / "c.json")]
        if n:
            args += ["--n", n]
        if variant:
            args += ["--variant", variant]
        subprocess.run([cli, *args], check=True)
        check("problem.schema.json", json.loads((tmp / "p.json").read_text()), f"{family} problem")
        check("certificate.schema.json", json.loads((tmp / "c.json").read_text()), f"{family} certificate")
        check("verdict.schema.json", run("certify", str(tmp / "p.json"), str(tmp / "c.json"), "--format", "json"),
              f"{family} verdict")
    for op, args in [("cone", ["ndagger"]), ("product", ["interval", "ndagger"]), ("opc", ["interval", "circle"])]:
        subprocess.run([cli, "construct", op, *args, "--epsilon", "2^-4", "--out", str(tmp / "s.json")], check=True)
        check("space.schema.json", json.loads((tmp / "s.json").read_text()), f"construct {op}")
    subprocess.run([cli, "construct", "opc-pair", "interval-endpoints", "--blocks", "3", "--epsilon", "2^-4",
                    "--out", str(tmp / "pair.json")], check=True)
    check("pair.schema.json", json.loads((tmp / "pair.json").read_text()), "construct opc-pair")

sys.exit(1 if failures else 0)
