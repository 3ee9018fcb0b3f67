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

"""Exit-code and artifact checks for the scorpion-mission command line."""

import argparse
import json
import pathlib
import subprocess
import sys
import tempfile

failures = 0


def run(cli, *args):
    return subprocess.run([cli, *args], capture_output=True, text=True, timeout=300)


def expect(name, proc, code, stderr_has=None):
    global failures
    ok = proc.returncode == code and (stderr_has is None or stderr_has in proc.stderr)
    print(f"{'PASS' if ok else 'FAIL'} {name}: exit {proc.returncode} (want {code})")
    if not ok:
        failures += 1
        sys.stdout.write(proc.stdout[-2000:])
        sys.stdout.write(proc.stderr[-2000:])


def check(name, condition):
    global failures
    print(f"{'PASS' if condition else 'FAIL'} {name}")
    if not condition:
        failures += 1


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("cli")
    parser.add_argument("repo", type=pathlib.Path)
    args = parser.parse_args()
    cli, repo = args.cli, args.repo
    fixtures = repo / "tests" / "fixtures" / "cli"

    with tempfile.TemporaryDirectory() as tmp:
        tmp = pathlib.Path(tmp)
        expect("help", run(cli, "--help"), 0)
        expect("missing subcommand", run(cli), 2)
        expect("unknown option", run(cli, "simulate", "--frobnicate"), 2)

        out = tmp / "idle"
        expect("passing mission", run(cli, "simulate", str(repo / "missions/examples/idle.mission"), "--out", str(out)), 0)
        report = json.loads((out / "report.json").read_text())
        check("report lists criteria", len(report["criteria"]) >= 2)
        check("telemetry log written", (out / "telemetry.csv").stat().st_size > 0)

        expect("failing mission", run(cli, "simulate", str(fixtures / "failing.mission"), "--out", str(tmp / "f")), 1)
        expect("malformed mission", run(cli, "simulate", str(fixtures / "malformed.mission"), "--out", str(tmp / "m")),
               2, "malformed.mission:3")
        expect("missing mission", run(cli, "simulate", str(tmp / "absent.mission"), "--out", str(tmp / "a")), 2)

        bad_config = tmp / "bad.yaml"
        bad_config.write_text("config_version: 1\nvehicle:\n  masss: 3\n")
        expect("bad config", run(cli, "--config", str(bad_config), "simulate",
                                 str(repo / "missions/examples/idle.mission"), "--out", str(tmp / "c")), 2, "bad.yaml:3")
        expect("config after subcommand", run(cli, "simulate", str(repo / "missions/examples/idle.mission"),
                                              "--config", str(repo / "config/scorpion.yaml"), "--out", str(tmp / "c2")), 0)

        proc = run(cli, "alloc-debug", str(repo / "missions/alloc/surge.yaml"))
        expect("alloc-debug", proc, 0)
        check("alloc-debug emits json", "thrust" in json.loads(proc.stdout))
        expect("alloc-debug bad instance", run(cli, "alloc-debug", str(fixtures / "malformed.mission")), 2)

        expect("gen-corpus missing recipe", run(cli, "gen-corpus", str(tmp / "none.yaml"), "--out", str(tmp / "g")), 2)
        expect("vision-eval missing corpus", run(cli, "vision-eval", str(tmp / "none"), "--out", str(tmp / "v")), 2)
        expect("replay missing log", run(cli, "replay", str(tmp / "none.csv")), 2)

    print(f"{failures} failure(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
