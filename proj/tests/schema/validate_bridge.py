# Copyright 2026 The Scorpion Twin Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Validates bridge messages against the shipped JSON schema.

usage: validate_bridge.py SCHEMA [--valid FILE.jsonl]... [--invalid FILE.jsonl]...
Every line of a --valid file must conform; every line of an --invalid file must not.
"""
import argparse
import json
import sys

import jsonschema


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("schema")
    ap.add_argument("--valid", action="append", default=[])
    ap.add_argument("--invalid", action="append", default=[])
    args = ap.parse_args()
    with open(args.schema) as f:
        schema = json.load(f)
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)
    failures = 0
    checked = 0
    for expect_valid, paths in ((True, args.valid), (False, args.invalid)):
        for path in paths:
            with open(path) as f:
                for number, line in enumerate(f, 1):
                    if not line.strip():
                        continue
                    checked += 1
                    ok = validator.is_valid(json.loads(line))
                    if ok != expect_valid:
                        failures += 1
                        state = "rejected" if expect_valid else "accepted"
                        print(f"{path}:{number}: schema {state} {line.strip()[:120]}")
    print(f"{checked} messages checked, {failures} mismatches")
    return 1 if failures or checked == 0 else 0


if __name__ == "__main__":
    sys.exit(main())
