"""Command line front door: ``cberlab run``, ``cberlab list`` and the per-module verbs.

Results go to stdout as JSON. Human-readable notes go to stderr. Exit codes:
0 for success (or an all-PASS report), 1 for a FAIL verdict, 2 for bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .groups import parse_group
from .harness import ConfigError, UnknownExperimentError, list_experiments, load_config, run_experiment
from .patterns import Language, expand, from_json, to_json

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


def _emit(data, out: str | None = None) -> None:
    text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as err:
        raise UsageError(f"cannot read {path}: {err.strerror}") from None
    except json.JSONDecodeError as err:
        raise UsageError(f"{path} is not valid JSON: {err}") from None


# ---------------------------------------------------------------------------
# run / list


def cmd_run(args) -> int:
    cfg = load_config(args.config)
    if args.report:
        cfg.output["report"] = args.report
    if args.csv_dir:
        cfg.output["csv_dir"] = args.csv_dir
    report = run_experiment(cfg)
    for line in report.lines():
        _note(line)
    if not cfg.output.get("report"):
        sys.stdout.write(report.dumps())
    _note(f"{report.to_json()['summary']['status']}: {len(report.checks)} checks, "
          f"{report.to_json()['summary']['failed']} failed")
    return report.exit_code


def cmd_list(args) -> int:
    cat = list_experiments()
    if args.json:
        _emit(cat)
    else:
        width = max(len(e["id"]) for e in cat)
        for e in cat:
            print(f"{e['id']:<{width}}  {e['anchor']}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# expand


def _load_pattern_input(path: str):
    data = _read_json(path)
    if not isinstance(data, dict):
        raise UsageError("input must be a JSON object")
    if "pattern" in data:
        return from_json(data["pattern"]), data
    if "universe" in data:
        return from_json(data), {}
    raise UsageError("input needs a Pattern (with 'universe') or an object with a 'pattern' key")


def _order_relation(P, order: list):
    pos = {x: i for i, x in enumerate(order)}
    pairs = [(a, b) for a in order for b in order if pos[a] < pos[b]]
    return expand(P, Language.of(L=2), {"L": pairs})


def cmd_expand(args) -> int:
    from . import expansions as ex

    if args.algorithm == "zline":
        data = _read_json(args.input)
        if "order" not in data or "freqs" not in data:
            raise UsageError("zline input needs 'order' (an OrderSpec) and 'freqs' (block id -> value)")
        L = ex.OrderSpec.from_json(data["order"])
        freqs = {k: float(Fraction(str(v))) for k, v in data["freqs"].items()}
        sel = ex.zline_select(L, freqs, args.tie_tolerance)
        _note(f"zline: selected {sel}")
        _emit({"selection": sel, "order": L.to_json(), "freqs": data["freqs"]}, args.out)
        return EXIT_OK

    P, extra = _load_pattern_input(args.input)
    G = P.group
    if args.algorithm == "bijection":
        centre = G.from_json(json.loads(args.centre)) if args.centre else None
        Q, tr = ex.bijection_pattern(P, centre, args.radius)
        report = {"stages": len(tr.stages), "matched": len(tr.phi),
                  "side": tr.side([x for (x,) in P.rel("A")], [x for (x,) in P.rel("B")]),
                  "gammas_used": [G.to_json(g) for g, X in zip(tr.gammas, tr.stages) if X]}
    elif args.algorithm == "colouring":
        Q, st = ex.colouring_pattern(P, args.d)
        report = {"coloured": len(st.colours), "uncoloured": len(st.uncoloured),
                  "colours_used": sorted(set(st.colours.values()))}
    elif args.algorithm == "forest":
        if "exhaustion" not in extra:
            raise UsageError("forest input needs an 'exhaustion': a list of partitions, finest first")
        ex_sets = [[{G.from_json(v) for v in block} for block in part] for part in extra["exhaustion"]]
        Q, res = ex.spanning_forest(P, ex_sets)
        report = {"edges": int(len(res.edges)), "failures": [list(f) for f in res.failures]}
    elif args.algorithm == "linearize":
        if "pieces" not in extra:
            raise UsageError("linearize input needs 'pieces': a list of orders (lists of elements)")
        pieces = []
        for piece in extra["pieces"]:
            order = [G.from_json(v) for v in (piece["order"] if isinstance(piece, dict) else piece)]
            pieces.append((set(order), order))
        res = ex.merge_linearizations(P, pieces)
        Q = _order_relation(P, res.order)
        report = {"order": [G.to_json(x) for x in res.order]}
    elif args.algorithm == "tree-order":
        comps = ex.tree_linearization(P)
        pairs = []
        for comp in comps:
            pairs += [(a, b) for i, a in enumerate(comp) for b in comp[i + 1:]]
        Q = expand(P, Language.of(L=2), {"L": pairs})
        report = {"components": [[G.to_json(x) for x in c] for c in comps]}
    else:  # pragma: no cover - argparse restricts the choices
        raise UsageError(f"unknown algorithm {args.algorithm}")
    for k, v in report.items():
        _note(f"{args.algorithm}: {k} = {v}")
    _emit({"pattern": to_json(Q), "report": report}, args.out)
    if report.get("failures") or report.get("side") == "none":
        return EXIT_FAIL
    return EXIT_OK


# ---------------------------------------------------------------------------
# walks


def cmd_walk_freq(args) -> int:
    from .walks import ResidueClass, WalkConfig, WholeGroup, freq_estimate, parse_target, quotient_frequency

    G = parse_group(args.group)
    target = parse_target(args.target)
    cfg = WalkConfig(G, args.steps, seed=args.seed, lazy=args.lazy)
    est = freq_estimate(target, cfg, args.walks)
    out = {"estimate": est.estimate, "se": est.se, "walks": args.walks, "steps": args.steps,
           "seed": args.seed, "group": G.name, "target": target.name}
    if isinstance(target, ResidueClass):
        ref = quotient_frequency(target, cfg)
    elif isinstance(target, WholeGroup):
        ref = Fraction(1)
    else:  # pragma: no cover - parse_target only yields the two kinds above
        ref = None
    if ref is None:
        out["verdict"] = "NO-REFERENCE"
    else:
        out["reference"] = str(ref)
        out["verdict"] = "PASS" if est.within(float(ref)) else "FAIL"
    _emit(out)
    return EXIT_FAIL if out["verdict"] == "FAIL" else EXIT_OK


# ---------------------------------------------------------------------------
# ire


def _certificate_file(problem: str, p, n: int, lp, cert, extra=None) -> dict:
    return {"problem": problem, "p": str(p), "window": n, "rows": lp.shape[0],
            "columns": lp.shape[1], "lp": lp.name, **(extra or {}),
            "certificate": cert.to_json(lp)}


def cmd_ire_max_density(args) -> int:
    from .ire_lp import max_marked_density

    if args.problem != "ramsey":
        raise UsageError("max-density is defined for the ramsey problem only")
    p = Fraction(args.p)
    res = max_marked_density(args.window, p)
    path = Path(args.certificate or f"max-density-ramsey-n{args.window}.json")
    path.write_text(json.dumps(_certificate_file("ramsey", p, args.window, res.lp, res.certificate,
                                                 {"delta_star": str(res.delta), "objective": "density"}),
                               sort_keys=True) + "\n")
    _emit({"delta_star": str(res.delta), "certificate_path": str(path), "window": args.window,
           "p": str(p)})
    return EXIT_OK


def _window_lp(problem: str, p: Fraction, n: int, data: dict | None = None):
    from .ire_lp import LinearizationFamily, RamseyFamily, TrivialFamily, build_lp

    if problem == "linearization":
        return build_lp(LinearizationFamily(), n)
    if problem == "ramsey-trivial":
        return build_lp(TrivialFamily(RamseyFamily(p)), n)
    if problem == "ramsey":
        data = data or {}
        if data.get("objective") == "density":
            return build_lp(RamseyFamily(p), n, objective="density")
        if "min_density" in data:
            return build_lp(RamseyFamily(p, nonempty=True), n, min_density=Fraction(data["min_density"]))
        return build_lp(RamseyFamily(p), n)
    raise UsageError(f"unknown problem {problem!r}")


def cmd_ire_feasibility(args) -> int:
    from .ire_lp import solve

    p = Fraction(args.p)
    lp = _window_lp(args.problem, p, args.window)
    cert = solve(lp)
    path = Path(args.certificate or f"feasibility-{args.problem}-n{args.window}.json")
    path.write_text(json.dumps(_certificate_file(args.problem, p, args.window, lp, cert),
                               sort_keys=True) + "\n")
    _emit({"kind": cert.kind, "certificate_path": str(path), "window": args.window})
    return EXIT_OK


def cmd_ire_verify(args) -> int:
    from .ire_lp import check
    from .ire_lp.exact import Certificate

    data = _read_json(args.certificate)
    try:
        lp = _window_lp(data["problem"], Fraction(data["p"]), int(data["window"]), data)
        cert = Certificate.from_json(data["certificate"], lp)
    except (KeyError, ValueError) as err:
        raise UsageError(f"malformed certificate file: {err}") from None
    reason = check(lp, cert)
    _emit({"verified": reason is None, "kind": cert.kind, "reason": reason})
    return EXIT_OK if reason is None else EXIT_FAIL


# ---------------------------------------------------------------------------
# gallery


def cmd_gallery_dyadic(args) -> int:
    from .gallery import conjugation_check, order_check, successor_check

    fn = {"successor": successor_check, "order": order_check, "conjugation": conjugation_check}[args.check]
    rep = fn(args.len)
    out = {"check": args.check, **rep.to_json(), "verdict": "PASS" if rep.ok else "FAIL"}
    _emit(out)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_gallery_clique(args) -> int:
    from .gallery import sample_max_homogeneous

    s = sample_max_homogeneous(args.n, Fraction(args.p), args.samples, args.seed)
    _emit(s.to_json())
    return EXIT_OK


def cmd_gallery_adversary(args) -> int:
    from .gallery import adversary, load_rule, replay

    rule = load_rule(_read_json(args.rule))
    res = adversary(args.problem, rule, **({"budget": args.budget} if args.budget else {}))
    out = res.to_json()
    if res.defeated:
        out["replayed"] = replay(res.witness, rule)
    _emit(out, args.out)
    _note(f"adversary: {res.status}" + (f" ({res.witness.kind})" if res.defeated else ""))
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cberlab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment config (a path or a bundled name)")
    run.add_argument("config")
    run.add_argument("--report", help="override the report path")
    run.add_argument("--csv-dir", help="override the CSV directory")
    run.set_defaults(fn=cmd_run)

    ls = sub.add_parser("list", help="list experiment ids and anchors")
    ls.add_argument("--json", action="store_true")
    ls.set_defaults(fn=cmd_list)

    exp = sub.add_parser("expand", help="run an expansion algorithm on a Pattern JSON")
    exp.add_argument("algorithm", choices=["bijection", "colouring", "forest", "linearize",
                                           "tree-order", "zline"])
    exp.add_argument("input")
    exp.add_argument("--out")
    exp.add_argument("--radius", type=int, default=8, help="bijection interior radius")
    exp.add_argument("--centre", help="bijection window centre as JSON")
    exp.add_argument("--d", type=int, default=2, help="colouring degree bound")
    exp.add_argument("--tie-tolerance", type=float, default=0.0, help="zline frequency ties")
    exp.set_defaults(fn=cmd_expand)

    walk = sub.add_parser("walk", help="random walk frequencies")
    wsub = walk.add_subparsers(dest="walk_command", required=True)
    freq = wsub.add_parser("freq")
    freq.add_argument("--group", default="Z")
    freq.add_argument("--target", required=True)
    freq.add_argument("--steps", type=int, default=200_000)
    freq.add_argument("--walks", type=int, default=20)
    freq.add_argument("--seed", type=int, default=0)
    freq.add_argument("--lazy", type=float, default=0.0)
    freq.set_defaults(fn=cmd_walk_freq)

    ire = sub.add_parser("ire", help="window LPs for invariant random expansions")
    isub = ire.add_subparsers(dest="ire_command", required=True)
    md = isub.add_parser("max-density")
    md.add_argument("--problem", default="ramsey")
    md.add_argument("--p", default="1/2")
    md.add_argument("--window", type=int, required=True)
    md.add_argument("--certificate", help="where to write the certificate JSON")
    md.set_defaults(fn=cmd_ire_max_density)
    fe = isub.add_parser("feasibility")
    fe.add_argument("--problem", choices=["linearization", "ramsey-trivial", "ramsey"], required=True)
    fe.add_argument("--p", default="1/2")
    fe.add_argument("--window", type=int, required=True)
    fe.add_argument("--certificate")
    fe.set_defaults(fn=cmd_ire_feasibility)
    ve = isub.add_parser("verify", help="re-check a certificate file in exact arithmetic")
    ve.add_argument("certificate")
    ve.set_defaults(fn=cmd_ire_verify)

    gal = sub.add_parser("gallery", help="counterexample gallery")
    gsub = gal.add_subparsers(dest="gallery_command", required=True)
    dy = gsub.add_parser("dyadic")
    dy.add_argument("--check", choices=["successor", "order", "conjugation"], default="successor")
    dy.add_argument("--len", type=int, default=16)
    dy.set_defaults(fn=cmd_gallery_dyadic)
    rc = gsub.add_parser("ramsey-clique")
    rc.add_argument("--n", type=int, default=64)
    rc.add_argument("--p", default="1/2")
    rc.add_argument("--samples", type=int, default=200)
    rc.add_argument("--seed", type=int, default=0)
    rc.set_defaults(fn=cmd_gallery_clique)
    ad = gsub.add_parser("adversary")
    ad.add_argument("--problem", choices=["linearization", "ramsey", "zline"], required=True)
    ad.add_argument("--rule", required=True, help="rule JSON (builtin or table rule)")
    ad.add_argument("--budget", type=int)
    ad.add_argument("--out")
    ad.set_defaults(fn=cmd_gallery_adversary)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (UsageError, ConfigError, UnknownExperimentError, ValueError) as err:
        _note(f"cberlab: error: {err}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
