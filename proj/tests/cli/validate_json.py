#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Run the stpnc CLI with --format json and validate its output against the schema."""

import json
import subprocess
import sys

import jsonschema


def main() -> int:
    if len(sys.argv) < 4:
        print("usage: validate_json.py SCHEMA STPNC ARGS...", file=sys.stderr)
        return 2
    schema_path, exe, args = sys.argv[1], sys.argv[2], sys.argv[3:]
    with open(schema_path, encoding="utf-8") as f:
        schema = json.load(f)
    proc = subprocess.run([exe, *args, "--format", "json"], capture_output=True, text=True, check=False)
    if proc.returncode != 0:
        print(f"exit {proc.returncode}: {proc.stderr}", file=sys.stderr)
        return 1
    jsonschema.validate(json.loads(proc.stdout), schema, cls=jsonschema.Draft202012Validator)
    print("valid")
    return 0


if __name__ == "__main__":
    sys.exit(main())
