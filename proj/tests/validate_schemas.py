"""Validate the case corpus and CLI reports against docs/schemas."""
import json
import pathlib
import sys

import jsonschema
from referencing import Registry, Resource

root = pathlib.Path(sys.argv[1])
reports = [pathlib.Path(p) for p in sys.argv[2:]]
schemas = {p.name: json.loads(p.read_text()) for p in (root / "docs" / "schemas").glob("*.json")}
registry = Registry().with_resources(
    (f"bachlab/{name}", Resource.from_contents(s)) for name, s in schemas.items()
)


def check(schema_name, path):
    validator = jsonschema.Draft202012Validator(schemas[schema_name], registry=registry)
    errors = sorted(validator.iter_errors(json.loads(path.read_text())), key=str)
    for e in errors:
        print(f"{path}: {e.message} at {list(e.absolute_path)}")
    return not errors


ok = True
for folder, schema in [("identity", "identity_case.schema.json"), ("soliton", "soliton.schema.json"),
                       ("ode", "scan_config.schema.json"), ("manifold", "manifold.schema.json")]:
    files = sorted((root / "cases" / folder).glob("*.json"))
    if not files:
        print(f"no cases in {folder}")
        ok = False
    for f in files:
        ok &= check(schema, f)
for r in reports:
    ok &= check("report.schema.json", r)
print("ok" if ok else "schema violations")
sys.exit(0 if ok else 1)
