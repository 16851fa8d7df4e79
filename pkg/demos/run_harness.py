"""
Running experiments from a config
=================================

The harness reads a JSON config, runs each job with its own seed, and
writes one report. Everything except the ``timing`` field is reproducible
byte for byte, which is what the ``replay`` flag checks.
"""

import json

from cberlab.harness import list_experiments, parse_config, replay_config, run_experiment

for e in list_experiments():
    print(f"{e['id']:24s} {e['anchor']}")

cfg = parse_config({
    "seed": 11,
    "replay": True,
    "jobs": [
        {"experiment": "dyadic", "params": {"successor_length": 10, "order_length": 5,
                                            "conjugation_length": 8}},
        {"experiment": "mass-transport", "params": {"samples": 20_000}},
    ],
})
rep = run_experiment(cfg, write=False)
print("\n".join(rep.lines()))

# A tolerance nobody can meet gives a FAIL, and the FAIL carries everything
# needed to rerun just that job.
bad = run_experiment(parse_config({"experiment": "frequencies", "seed": 4,
                                   "params": {"steps": 5000, "walks": 4, "tolerance": 1e-12}}),
                     write=False)
blob = next(c["replay"] for _, c in bad.checks if c["status"] == "FAIL")
print("replay blob:", json.dumps(blob)[:120], "...")
print("rerun exit code:", run_experiment(replay_config(blob), write=False).exit_code)
