"""Experiment orchestration: configs, per-job seeds, batch runs and reports.

A config names one or more jobs. Each job runs a registered experiment with
its parameters and a seed, and yields a list of checks. The report echoes the
config, lists every check with its measured value and tolerance, and stamps
the environment. Wall-clock data (start time and runtimes) lives in the single
``timing`` field, so two runs of one config agree byte for byte once that
field is dropped.

Seed splitting: job ``i`` of a config with global seed ``s`` runs with
``SeedSequence([s, i]).generate_state(1)[0]`` unless the job pins its own
``seed`` parameter.
"""

from __future__ import annotations

import copy
import csv
import json
import os
import platform
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import __version__

SCHEMA_VERSION = 1
THREADS_ENV = "CBERLAB_THREADS"


class ConfigError(ValueError):
    """Malformed experiment config."""


class UnknownExperimentError(KeyError):
    def __init__(self, name: str, known):
        self.name = name
        super().__init__(f"unknown experiment id {name!r}; known ids: {', '.join(sorted(known))}")

    def __str__(self) -> str:
        return self.args[0]


@dataclass
class Check:
    name: str
    passed: bool
    measured: Any
    tolerance: Any
    instance: Any = None  # the violating input, when there is one

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"


@dataclass
class Outcome:
    checks: list
    tables: dict = field(default_factory=dict)  # name -> (header, rows)
    data: dict = field(default_factory=dict)  # extra JSON-ready results


@dataclass(frozen=True)
class Experiment:
    id: str
    anchor: str
    description: str
    run: Callable[[dict, int], Outcome]
    defaults: dict = field(default_factory=dict)


REGISTRY: dict = {}


def register(id: str, anchor: str, defaults: dict | None = None):
    def wrap(fn):
        if id in REGISTRY:
            raise ValueError(f"experiment id {id!r} registered twice")
        doc = (fn.__doc__ or "").strip().splitlines()
        REGISTRY[id] = Experiment(id, anchor, doc[0] if doc else "", fn, dict(defaults or {}))
        return fn
    return wrap


def _registry() -> dict:
    from . import experiments  # noqa: F401  (registers on import)
    return REGISTRY


def get_experiment(name: str) -> Experiment:
    reg = _registry()
    if name not in reg:
        raise UnknownExperimentError(name, reg)
    return reg[name]


def list_experiments() -> list:
    return [{"id": e.id, "anchor": e.anchor, "description": e.description}
            for e in _registry().values()]


# ---------------------------------------------------------------------------
# configs


@dataclass
class Job:
    experiment: str
    params: dict
    seed: int


@dataclass
class ExperimentConfig:
    id: str
    jobs: list
    seed: int = 0
    output: dict = field(default_factory=dict)
    replay: bool = False  # run everything twice and compare the job reports

    def to_json(self) -> dict:
        return {"id": self.id, "seed": self.seed, "replay": self.replay,
                "jobs": [{"experiment": j.experiment, "params": j.params, "seed": j.seed}
                         for j in self.jobs],
                "output": self.output}


def split_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


def _check_param(exp: Experiment, key: str, value, where: str):
    if key not in exp.defaults:
        raise ConfigError(f"{where}: unknown parameter {key!r} for experiment {exp.id!r} "
                          f"(allowed: {', '.join(sorted(exp.defaults)) or 'none'})")
    default = exp.defaults[key]
    ok = True
    if isinstance(default, bool):
        ok = isinstance(value, bool)
    elif isinstance(default, int):
        ok = isinstance(value, int) and not isinstance(value, bool)
    elif isinstance(default, float):
        ok = isinstance(value, (int, float)) and not isinstance(value, bool)
    elif isinstance(default, str):
        ok = isinstance(value, str)
    elif isinstance(default, list):
        ok = isinstance(value, list)
    if not ok:
        raise ConfigError(f"{where}.{key}: expected {type(default).__name__}, got {value!r}")


_TOP_KEYS = {"id", "seed", "jobs", "experiment", "params", "output", "replay", "description"}


def parse_config(data: dict) -> ExperimentConfig:
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    extra = set(data) - _TOP_KEYS
    if extra:
        raise ConfigError(f"unknown top-level keys: {', '.join(sorted(extra))}")
    seed = data.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        raise ConfigError(f"seed: expected a nonnegative integer, got {seed!r}")
    if ("jobs" in data) == ("experiment" in data):
        raise ConfigError("give exactly one of 'jobs' (a list) or 'experiment' (a single id)")
    raw_jobs = data["jobs"] if "jobs" in data else [
        {"experiment": data["experiment"], "params": data.get("params", {})}]
    if not isinstance(raw_jobs, list) or not raw_jobs:
        raise ConfigError("jobs: expected a nonempty list")
    jobs = []
    for i, raw in enumerate(raw_jobs):
        where = f"jobs[{i}]"
        if isinstance(raw, str):
            raw = {"experiment": raw}
        if not isinstance(raw, dict) or "experiment" not in raw:
            raise ConfigError(f"{where}: expected an object with an 'experiment' id")
        if set(raw) - {"experiment", "params"}:
            raise ConfigError(f"{where}: unknown keys {sorted(set(raw) - {'experiment', 'params'})}")
        exp = get_experiment(raw["experiment"])
        params = raw.get("params", {})
        if not isinstance(params, dict):
            raise ConfigError(f"{where}.params: expected an object")
        job_seed = params.get("seed", split_seed(seed, i))
        if not isinstance(job_seed, int) or isinstance(job_seed, bool) or job_seed < 0:
            raise ConfigError(f"{where}.params.seed: expected a nonnegative integer")
        merged = dict(exp.defaults)
        for k, v in params.items():
            if k == "seed":
                continue
            _check_param(exp, k, v, f"{where}.params")
            merged[k] = v
        jobs.append(Job(exp.id, merged, job_seed))
    output = data.get("output", {})
    if not isinstance(output, dict) or set(output) - {"report", "csv_dir"}:
        raise ConfigError("output: expected an object with optional 'report' and 'csv_dir' paths")
    replay = data.get("replay", False)
    if not isinstance(replay, bool):
        raise ConfigError("replay: expected true or false")
    cid = data.get("id", jobs[0].experiment if len(jobs) == 1 else "batch")
    return ExperimentConfig(str(cid), jobs, seed, dict(output), replay)


BUNDLED = ("acceptance", "smoke")


def load_config(source: str | os.PathLike) -> ExperimentConfig:
    """A path to a JSON file, or the name of a bundled config."""
    text = None
    if str(source) in BUNDLED and not Path(source).exists():
        text = resources.files("cberlab.configs").joinpath(f"{source}.json").read_text()
    else:
        try:
            text = Path(source).read_text()
        except OSError as err:
            raise ConfigError(f"cannot read config {source}: {err.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigError(f"config {source} is not valid JSON: {err}") from None
    return parse_config(data)


# ---------------------------------------------------------------------------
# running


def _jsonable(x):
    """Plain JSON types only; floats keep their repr, numpy scalars become Python ones."""
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return str(x)


def _run_job(job: Job) -> tuple:
    exp = get_experiment(job.experiment)
    t0 = time.perf_counter()
    try:
        out = exp.run(dict(job.params), job.seed)
    except Exception as err:  # reported as a failing check, never swallowed silently
        out = Outcome([Check("completed", False, f"{type(err).__name__}: {err}", "no exception")])
    return out, time.perf_counter() - t0


def _job_report(job: Job, out: Outcome) -> dict:
    checks = []
    for c in out.checks:
        entry = {"name": c.name, "status": c.status, "measured": _jsonable(c.measured),
                 "tolerance": _jsonable(c.tolerance)}
        if not c.passed:
            entry["replay"] = {"experiment": job.experiment, "params": _jsonable(job.params),
                               "seed": job.seed, "instance": _jsonable(c.instance)}
        checks.append(entry)
    return {"experiment": job.experiment, "anchor": get_experiment(job.experiment).anchor,
            "seed": job.seed, "params": _jsonable(job.params), "checks": checks,
            "data": _jsonable(out.data),
            "tables": {k: {"header": list(h), "rows": _jsonable(r)} for k, (h, r) in out.tables.items()}}


def thread_cap() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


def _run_jobs(jobs: list, workers: int) -> list:
    if workers <= 1 or len(jobs) <= 1:
        return [_run_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
        return list(pool.map(_run_job, jobs))  # map keeps job order


def environment() -> dict:
    import scipy
    return {"cberlab": __version__, "python": platform.python_version(),
            "numpy": np.__version__, "scipy": scipy.__version__,
            "implementation": platform.python_implementation()}


@dataclass
class Report:
    config: dict
    jobs: list
    environment: dict
    timing: dict

    @property
    def checks(self) -> list:
        return [(j["experiment"], c) for j in self.jobs for c in j["checks"]]

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c["status"] == "PASS" for _, c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def to_json(self, timing: bool = True) -> dict:
        out = {"schema_version": SCHEMA_VERSION, "config": self.config, "jobs": self.jobs,
               "summary": {"checks": len(self.checks),
                           "failed": sum(c["status"] == "FAIL" for _, c in self.checks),
                           "status": "PASS" if self.passed else "FAIL"},
               "environment": self.environment}
        if timing:
            out["timing"] = self.timing
        return out

    def dumps(self, timing: bool = True) -> str:
        return json.dumps(self.to_json(timing), indent=2, sort_keys=True) + "\n"

    def lines(self) -> list:
        return [f"{c['status']} {exp}: {c['name']} (measured {json.dumps(c['measured'])}, "
                f"tolerance {json.dumps(c['tolerance'])})" for exp, c in self.checks]


def run_experiment(cfg: ExperimentConfig, write: bool = True) -> Report:
    started = datetime.now(timezone.utc).isoformat(timespec="seconds")
    workers = thread_cap()
    t0 = time.perf_counter()
    results = _run_jobs(cfg.jobs, workers)
    jobs = [_job_report(j, out) for j, (out, _) in zip(cfg.jobs, results)]
    runtimes = [round(t, 3) for _, t in results]
    if cfg.replay:
        again = _run_jobs(cfg.jobs, workers)
        second = [_job_report(j, out) for j, (out, _) in zip(cfg.jobs, again)]
        a = json.dumps(jobs, sort_keys=True)
        b = json.dumps(second, sort_keys=True)
        differing = [j["experiment"] for j, k in zip(jobs, second) if j != k]
        check = {"name": "byte-identical replay", "status": "PASS" if a == b else "FAIL",
                 "measured": {"bytes": len(a), "differing_jobs": differing},
                 "tolerance": "identical"}
        if a != b:
            check["replay"] = {"experiment": "determinism", "params": {}, "seed": cfg.seed,
                               "instance": {"config": cfg.to_json(), "differing_jobs": differing}}
        jobs.append({"experiment": "determinism", "anchor": "determinism contract",
                     "seed": cfg.seed, "params": {}, "checks": [check], "data": {}, "tables": {}})
    timing = {"started": started, "total_seconds": round(time.perf_counter() - t0, 3),
              "job_seconds": runtimes, "workers": workers}
    report = Report(cfg.to_json(), jobs, environment(), timing)
    if write:
        write_outputs(report, cfg)
    return report


def write_outputs(report: Report, cfg: ExperimentConfig) -> list:
    written = []
    if cfg.output.get("report"):
        path = Path(cfg.output["report"])
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(report.dumps())
        written.append(path)
    if cfg.output.get("csv_dir"):
        root = Path(cfg.output["csv_dir"])
        root.mkdir(parents=True, exist_ok=True)
        for job in report.jobs:
            for name, table in job["tables"].items():
                path = root / f"{job['experiment']}-{name}.csv"
                with path.open("w", newline="") as fh:
                    w = csv.writer(fh)
                    w.writerow(table["header"])
                    w.writerows(table["rows"])
                written.append(path)
    return written


def replay_config(blob: dict) -> ExperimentConfig:
    """Rebuild the single-job config recorded in a FAIL entry's replay blob."""
    params = dict(blob.get("params", {}))
    params["seed"] = blob["seed"]
    return parse_config({"id": f"replay-{blob['experiment']}", "experiment": blob["experiment"],
                         "params": params})


# ---------------------------------------------------------------------------
# report schema


def report_schema() -> dict:
    return json.loads(resources.files("cberlab").joinpath("report.schema.json").read_text())


def validate_report(data: dict) -> None:
    """Raises ``jsonschema.ValidationError`` when the report does not match the schema."""
    import jsonschema
    jsonschema.validate(data, report_schema())


def strip_timing(data: dict) -> dict:
    out = copy.deepcopy(data)
    out.pop("timing", None)
    return out
