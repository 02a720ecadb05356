# Copyright 2026 The thc Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""End-to-end checks of the thc binary: examples, exit codes, schemas."""

import argparse
import csv
import io
import json
import os
import subprocess
import sys
import tempfile
import unittest

import jsonschema
from referencing import Registry, Resource

THC = ""
SCHEMAS = ""


def load_schema(name):
    with open(os.path.join(SCHEMAS, name + ".schema.json")) as f:
        return json.load(f)


def validator(name):
    # config.schema.json is referenced by relative $ref from siblings.
    registry = Registry()
    for fn in os.listdir(SCHEMAS):
        with open(os.path.join(SCHEMAS, fn)) as f:
            s = json.load(f)
        res = Resource.from_contents(s)
        registry = registry.with_resource(s["$id"], res)
    s = load_schema(name)
    return jsonschema.Draft202012Validator(s, registry=registry)


class CliTest(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.tmp = tempfile.TemporaryDirectory()
        cls.dir = cls.tmp.name
        cls.ok("gen", "--kind", "complete", "--n", "6", "--out", "k6.h3")
        cls.ok("gen", "--kind", "random", "--n", "100", "--p", "0.6", "--seed", "4", "--out", "r100.h3")
        cls.ok("gen", "--kind", "planted", "--n", "40", "--p", "0.3", "--seed", "2", "--out", "p40.h3")
        cls.ok("gen", "--kind", "counterexample", "--n", "30", "--seed", "1", "--out", "ce30.h3")
        cls.ok("gen", "--kind", "random", "--n", "12", "--p", "0.5", "--seed", "3", "--out", "r12.h3")

    @classmethod
    def tearDownClass(cls):
        cls.tmp.cleanup()

    @classmethod
    def run_thc(cls, *args, env=None):
        e = dict(os.environ)
        e.update(env or {})
        return subprocess.run([THC, *args], cwd=cls.dir, capture_output=True, text=True, env=e, timeout=600)

    @classmethod
    def ok(cls, *args):
        r = cls.run_thc(*args)
        if r.returncode != 0:
            raise AssertionError(f"{args} exited {r.returncode}: {r.stderr}")
        return r

    def path(self, name):
        return os.path.join(self.dir, name)

    def write(self, name, text):
        with open(self.path(name), "w") as f:
            f.write(text)

    def check(self, schema, doc):
        errs = sorted(validator(schema).iter_errors(doc), key=str)
        self.assertEqual([], [e.message for e in errs], schema)

    # Examples.

    def test_find_on_complete(self):
        r = self.run_thc("find", "--seed", "1", "k6.h3")
        self.assertEqual(r.returncode, 0, r.stderr)
        cyc = [int(t) for t in r.stdout.split()]
        self.assertEqual(sorted(cyc), list(range(6)))
        self.write("c.txt", r.stdout)
        v = self.run_thc("verify", "--cycle", "c.txt", "k6.h3")
        self.assertEqual(v.returncode, 0)
        self.assertEqual(v.stdout.strip(), "OK")

    def test_verify_broken_cycle(self):
        # 0 1 2 3 4 is short of the sixth vertex.
        self.write("bad.txt", "0 1 2 3 4\n")
        r = self.run_thc("verify", "--cycle", "bad.txt", "k6.h3")
        self.assertEqual(r.returncode, 2)
        self.assertRegex(r.stdout, r"^INVALID \d+ ")
        # A repeated vertex is reported at its index.
        self.write("dup.txt", "0 1 2 3 4 4\n")
        r = self.run_thc("verify", "--cycle", "dup.txt", "k6.h3")
        self.assertEqual(r.returncode, 2)
        self.assertRegex(r.stdout, r"^INVALID \d+ ")

    def test_verify_missing_edge(self):
        self.ok("gen", "--kind", "random", "--n", "8", "--p", "0.0", "--seed", "1", "--out", "e8.h3")
        self.write("c8.txt", "0 1 2 3 4 5 6 7\n")
        r = self.run_thc("verify", "--cycle", "c8.txt", "e8.h3")
        self.assertEqual(r.returncode, 2)
        self.assertTrue(r.stdout.startswith("INVALID 0 "), r.stdout)

    def test_bench_example(self):
        r = self.ok("bench", "--suite", "random-sweep", "--n", "60:180:60", "--p", "0.5", "--reps", "20",
                    "--seed", "7")
        rows = list(csv.DictReader(io.StringIO(r.stdout)))
        self.assertEqual([int(x["n"]) for x in rows], [60, 120, 180])
        for x in rows:
            rate = float(x["success_rate"])
            self.assertGreaterEqual(rate, 0.0)
            self.assertLessEqual(rate, 1.0)
            self.assertEqual(int(x["reps"]), 20)

    # Exit codes.

    def test_usage_errors(self):
        for args in [(), ("nosuch",), ("gen", "--n", "5"), ("find", "missing.h3"),
                     ("audit", "r12.h3", "--notion", "bogus"), ("--format", "xml", "constants"),
                     ("bench", "--n", "60:20:10"), ("bench", "--suite", "nosuch")]:
            r = self.run_thc(*args)
            self.assertEqual(r.returncode, 1, f"{args}: {r.stdout} {r.stderr}")
            self.assertNotEqual(r.stderr.strip(), "", args)

    def test_bad_config_is_usage_error(self):
        self.write("bad.json", '{"no_such_key": 1}')
        r = self.run_thc("find", "--config", "bad.json", "k6.h3")
        self.assertEqual(r.returncode, 1)

    def test_find_failure_exit(self):
        r = self.run_thc("find", "--seed", "3", "--trace", "ce.json", "ce30.h3")
        self.assertEqual(r.returncode, 2, r.stdout)
        self.assertTrue(r.stdout.startswith("FAILURE "), r.stdout)
        with open(self.path("ce.json")) as f:
            t = json.load(f)
        self.check("find-trace", t)
        self.assertFalse(t["success"])
        self.assertEqual(r.stdout.split()[1], t["failed_stage"])

    # Schemas.

    def test_gen_sidecars(self):
        for name in ["k6", "r100", "p40", "ce30"]:
            with open(self.path(name + ".h3.json")) as f:
                self.check("gen-sidecar", json.load(f))

    def test_audit_schema(self):
        for notion in ["points", "edge", "cherry", "set"]:
            r = self.ok("audit", "r100.h3", "--notion", notion, "--samples", "50", "--seed", "1")
            self.check("audit", json.loads(r.stdout))
            r = self.ok("audit", "r12.h3", "--notion", notion, "--exhaustive")
            self.check("audit", json.loads(r.stdout))

    def test_connect_schema(self):
        r = self.ok("connect", "r100.h3", "--pairs", "0,1,2,3", "--beta", "0.2", "--omega", "1", "--t-deg", "1")
        head, body = r.stdout.split("\n", 1)
        doc = json.loads(body)
        self.check("connect", doc)
        self.assertTrue(doc["found"])
        self.assertEqual(head.split(), [str(v) for v in doc["path"]])
        self.assertEqual(doc["path"][:2], [0, 1])
        self.assertEqual(doc["path"][-2:], [2, 3])

    def test_absorbers_schema(self):
        r = self.ok("absorbers", "r12.h3", "--count", "--all", "--beta", "0.2")
        doc = json.loads(r.stdout)
        self.check("absorbers-count", doc)
        self.assertEqual(len(doc), 12)
        r = self.ok("absorbers", "r100.h3", "--sample", "--beta", "0.2", "--seed", "1")
        self.check("absorbers-sample", json.loads(r.stdout))

    def test_cover_schema(self):
        for backend in ["greedy", "regularity"]:
            r = self.run_thc("cover", "r100.h3", "--backend", backend, "--seed", "1")
            self.assertIn(r.returncode, (0, 2), r.stderr)
            self.check("cover", json.loads(r.stdout))

    def test_reservoir_schema(self):
        r = self.ok("reservoir", "r100.h3", "--beta", "0.2", "--nu", "0.25", "--seed", "1")
        doc = json.loads(r.stdout)
        self.check("reservoir", doc)
        self.assertEqual(len(doc["members"]), 25)

    def test_find_trace_schema(self):
        r = self.ok("find", "--seed", "1", "--trace", "t.json", "r100.h3")
        with open(self.path("t.json")) as f:
            t = json.load(f)
        self.check("find-trace", t)
        self.assertTrue(t["success"])
        self.write("c100.txt", r.stdout)
        self.ok("verify", "--cycle", "c100.txt", "r100.h3")

    def test_config_schema(self):
        r = self.ok("find", "--dump-config")
        doc = json.loads(r.stdout)
        self.check("config", doc)
        # The dump is itself a valid config.
        self.write("cfg.json", r.stdout)
        self.ok("find", "--config", "cfg.json", "--seed", "1", "k6.h3")

    def test_constants_schema(self):
        for mode in ["practical", "faithful"]:
            r = self.ok("constants", "--d", "0.5", "--alpha", "0.5", "--mode", mode)
            doc = json.loads(r.stdout)
            self.check("constants", doc)
            self.assertEqual("faithful" in doc, mode == "faithful")

    def test_bench_json_and_records(self):
        r = self.ok("--format", "json", "bench", "--n", "60", "--reps", "3", "--seed", "2", "--records", "rec.jsonl")
        self.check("bench-table", json.loads(r.stdout))
        with open(self.path("rec.jsonl")) as f:
            recs = [json.loads(l) for l in f if l.strip()]
        self.assertEqual(len(recs), 3)
        for rec in recs:
            self.check("bench-record", rec)

    # Determinism and resume.

    def test_determinism_across_threads(self):
        cmds = [("find", "--seed", "5", "r100.h3"),
                ("reservoir", "r100.h3", "--beta", "0.2", "--nu", "0.25", "--seed", "3"),
                ("audit", "r100.h3", "--notion", "edge", "--samples", "40", "--seed", "9"),
                ("bench", "--n", "60", "--reps", "4", "--seed", "11")]
        for c in cmds:
            outs = {self.run_thc("--mask-elapsed", *c, env={"HAM_THREADS": t}).stdout for t in ["1", "3", "8"]}
            self.assertEqual(len(outs), 1, c)

    def test_bench_resume(self):
        args = ("--mask-elapsed", "bench", "--n", "60:120:60", "--reps", "3", "--seed", "5", "--records", "res.jsonl")
        full = self.ok(*args).stdout
        with open(self.path("res.jsonl")) as f:
            lines = f.readlines()
        self.assertEqual(len(lines), 6)
        # Drop the tail and tear the last kept line, as an interrupted run would.
        self.write("res.jsonl", "".join(lines[:3]) + lines[3][:10])
        resumed = self.ok(*args).stdout
        self.assertEqual(full, resumed)
        with open(self.path("res.jsonl")) as f:
            before = f.read()
        ids = set()
        for line in before.splitlines():
            try:
                ids.add(json.loads(line)["run_id"])
            except json.JSONDecodeError:
                pass
        self.assertEqual(len(ids), 6)
        # A second resume reruns nothing.
        self.assertEqual(self.ok(*args).stdout, full)
        with open(self.path("res.jsonl")) as f:
            self.assertEqual(f.read(), before)

def main():
    global THC, SCHEMAS
    ap = argparse.ArgumentParser()
    ap.add_argument("--thc", required=True)
    ap.add_argument("--schemas", required=True)
    a, rest = ap.parse_known_args()
    THC = os.path.abspath(a.thc)
    SCHEMAS = os.path.abspath(a.schemas)
    unittest.main(argv=[sys.argv[0], *rest], verbosity=2)


if __name__ == "__main__":
    main()
