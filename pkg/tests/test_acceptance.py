"""The acceptance suite, at full size, with one PASS/FAIL line per criterion.

The bundled ``acceptance`` config runs every job, then runs them again and
compares the two job reports byte for byte (criterion 12).
"""

import json

import pytest

from cberlab.harness import load_config, run_experiment, validate_report

CRITERIA = [
    (1, "bijection recursion", "bijection-recursion"),
    (2, "bijection equivariance", "bijection-equivariance"),
    (3, "equivariant colouring", "colouring"),
    (4, "spanning forest", "spanning-forest"),
    (5, "walk frequencies", "frequencies"),
    (6, "visit profiles", "visit-profiles"),
    (7, "mass transport", "mass-transport"),
    (8, "ramsey obstruction", "ramsey"),
    (9, "LP soundness", "lp-soundness"),
    (10, "dyadic gallery", "dyadic"),
    (11, "adversaries", "adversaries"),
    (12, "determinism", "determinism"),
]


@pytest.fixture(scope="module")
def report(tmp_path_factory):
    cfg = load_config("acceptance")
    out = tmp_path_factory.mktemp("acceptance")
    cfg.output = {"report": str(out / "acceptance.json"), "csv_dir": str(out)}
    rep = run_experiment(cfg)
    return rep, out


def _summary(check) -> str:
    return f"{check['name']}: {json.dumps(check['measured'])} vs {json.dumps(check['tolerance'])}"


@pytest.mark.slow
def test_acceptance_suite(report, capsys):
    rep, out = report
    by_job = {j["experiment"]: j for j in rep.jobs}
    verdicts = {}
    lines = []
    for num, title, exp in CRITERIA:
        checks = by_job[exp]["checks"]
        ok = bool(checks) and all(c["status"] == "PASS" for c in checks)
        verdicts[num] = ok
        lines.append(f"{'PASS' if ok else 'FAIL'} criterion {num:2d} ({title})")
        lines += [f"       {c['status']} {_summary(c)}" for c in checks]
    with capsys.disabled():
        print()
        print("\n".join(lines))
        print(f"acceptance runtime {rep.timing['total_seconds']:.1f} s (both passes)")
    validate_report(json.loads((out / "acceptance.json").read_text()))
    assert (out / "ramsey-delta-curve.csv").exists()
    assert all(verdicts.values()), [n for n, ok in verdicts.items() if not ok]
    assert rep.exit_code == 0


@pytest.mark.slow
def test_acceptance_time_budget(report):
    rep, _ = report
    # one pass must fit in ten minutes on one core; the replay pass doubles the total
    assert rep.timing["total_seconds"] / 2 < 600
