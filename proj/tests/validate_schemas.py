#!/usr/bin/env python3
# Copyright 2026 The qbench Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Validates CLI outputs and shipped scenes against schemas/."""

import json
import os
import pathlib
import socket
import subprocess
import sys
import tempfile
import time
import urllib.request

import jsonschema
from referencing import Registry, Resource

BUILTINS = ["heralded", "single-qubit-gate", "projective-measurement", "entangled-pair", "heralded-cnot"]


def load_registry(schema_dir):
    registry = Registry()
    schemas = {}
    for path in sorted(schema_dir.glob("*.schema.json")):
        doc = json.loads(path.read_text())
        registry = registry.with_resource(doc["$id"], Resource.from_contents(doc))
        schemas[path.name.removesuffix(".schema.json")] = doc
    return registry, schemas


def free_port():
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


def request(base, method, path, body=None):
    data = None if body is None else json.dumps(body).encode()
    req = urllib.request.Request(base + path, data=data, method=method, headers={"Content-Type": "application/json"})
    with urllib.request.urlopen(req, timeout=30) as resp:
        return resp.read().decode()


def service_events(cli):
    """Session stream events after a patch and a fire larger than the stream cap."""
    port = free_port()
    server = subprocess.Popen([cli, "serve", "--bind", "127.0.0.1", "--port", str(port)],
                              stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL)
    base = f"http://127.0.0.1:{port}"
    try:
        for _ in range(100):
            try:
                request(base, "GET", "/v1/scenes")
                break
            except OSError:
                time.sleep(0.05)
        sid = json.loads(request(base, "POST", "/v1/sessions", {"scene": "heralded-cnot", "seed": 3}))["id"]
        request(base, "PATCH", f"/v1/sessions/{sid}/components/control_hwp",
                {"params": {"angle": 22.5}, "interactive": True})
        request(base, "POST", f"/v1/sessions/{sid}/fire", {"shots": 80})
        stream = request(base, "GET", f"/v1/sessions/{sid}/events?follow=0")
        return [json.loads(line[len("data: "):]) for line in stream.splitlines() if line.startswith("data: ")]
    finally:
        server.terminate()
        server.wait(timeout=10)


def main():
    cli, schema_dir = sys.argv[1], pathlib.Path(sys.argv[2])
    source_dir = schema_dir.parent
    registry, schemas = load_registry(schema_dir)
    env = dict(os.environ, QBENCH_SEED="7")
    failures = []

    def check(label, name, doc):
        validator = jsonschema.Draft202012Validator(schemas[name], registry=registry)
        errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.path))
        for e in errors[:5]:
            failures.append(f"{label}: {'/'.join(map(str, e.path))}: {e.message}")
        print(f"{'ok  ' if not errors else 'FAIL'} {label} ({name})")

    def run(*args):
        out = subprocess.run([cli, *args], env=env, capture_output=True, text=True)
        if out.returncode != 0:
            raise SystemExit(f"{' '.join(args)} exited {out.returncode}: {out.stderr}")
        return json.loads(out.stdout)

    listing = run("list-scenes", "--json")
    if sorted(s["name"] for s in listing) != sorted(BUILTINS):
        failures.append("list-scenes: unexpected builtin names")

    with tempfile.TemporaryDirectory() as tmp:
        for name in BUILTINS:
            check(f"export-scene {name}", "scene", run("export-scene", name))
            check(f"amplitudes {name}", "distribution", run("amplitudes", name))
            trace = pathlib.Path(tmp) / f"{name}.trace.json"
            counts = run("run", name, "--shots", "200", "--trace", str(trace))
            check(f"run {name}", "counts", counts)
            events = json.loads(trace.read_text())
            validator = jsonschema.Draft202012Validator(schemas["event"], registry=registry)
            bad = [ev for ev in events if not validator.is_valid(ev)]
            if bad:
                failures.append(f"trace {name}: {len(bad)} invalid events, first {bad[0]}")
            print(f"{'ok  ' if not bad else 'FAIL'} trace {name} ({len(events)} events)")

    for path in sorted((source_dir / "scenes").glob("*.json")):
        check(f"scenes/{path.name}", "scene", json.loads(path.read_text()))

    check("run --exact heralded-cnot", "distribution", run("run", "heralded-cnot", "--exact"))
    check("cnot", "cnot-report", run("cnot", "--control", "D", "--target", "H"))
    check("tomography exact", "tomography", run("tomography", "--state", "R"))
    check("tomography sampled", "tomography", run("tomography", "--state", "D", "--shots", "1000"))

    events = service_events(cli)
    kinds = {ev["type"] for ev in events}
    for kind in ("param_changed", "batch", "herald"):
        if kind not in kinds:
            failures.append(f"service stream: no '{kind}' event")
    validator = jsonschema.Draft202012Validator(schemas["event"], registry=registry)
    bad = [ev for ev in events if not validator.is_valid(ev) or "seq" not in ev]
    if bad:
        failures.append(f"service stream: {len(bad)} invalid events, first {bad[0]}")
    print(f"{'ok  ' if not bad else 'FAIL'} service stream ({len(events)} events)")

    for f in failures:
        print(f, file=sys.stderr)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
