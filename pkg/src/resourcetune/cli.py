"""Command line entry point: generate, run, compare, eval."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import harness
from .evaluator import evaluate
from .scenario import ScenarioParams, generate_instance, load_instance, save_instance


def _options(args) -> dict:
    return {
        "resourcetune": {"split_size": args.split_size, "discount": args.discount},
        "greedy": {},
        "ga": {"seed": args.ga_seed, "max_generations": args.ga_generations},
    }


def cmd_generate(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for i in range(args.count):
        seed = args.seed + i
        inst = generate_instance(ScenarioParams(args.utilization, args.track_proportion, seed=seed))
        path = save_instance(inst, out / f"u{args.utilization:g}_p{args.track_proportion:g}_s{seed}.json")
        print(path)
    return 0


def cmd_run(args) -> int:
    inst = load_instance(args.instance)
    rec = harness.run(inst, args.algorithm, args.plans, args.budget_seconds,
                      instance_id=Path(args.instance).stem, **_options(args)[args.algorithm])
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    harness.write_csv([rec], out / "runs.csv")
    harness.save_plans(rec.plan_sequence, out / "plans.json")
    print(json.dumps({"instance_id": rec.instance_id, "algorithm": rec.algorithm,
                      "objective": rec.objective, "overruns": rec.overruns}))
    return 0


def cmd_compare(args) -> int:
    files = sorted(Path(args.instances_dir).glob("*.json"))
    if not files:
        raise ValueError(f"no instance files in {args.instances_dir}")
    instances = [(f.stem, load_instance(f)) for f in files]
    algorithms = [a.strip() for a in args.algorithms.split(",") if a.strip()]
    records, table = harness.compare(instances, algorithms, args.plans, args.budget_seconds, _options(args))
    for path in harness.emit_report(records, args.out, ("csv", "json", "plots") if args.plots else ("csv", "json")):
        print(path)
    return 0


def cmd_eval(args) -> int:
    inst = load_instance(args.instance)
    plans = harness.load_plans(inst.spec, args.plans_file)
    rep = evaluate(plans, inst.tracks, inst.surveys)
    print(json.dumps({"objective": rep.total, "plans": rep.plan_count,
                      "per_track": {str(k): v for k, v in rep.per_track.items()},
                      "per_survey": {str(k): v for k, v in rep.per_survey.items()}}))
    return 0


def _algo_flags(p):
    p.add_argument("--plans", type=int, default=100)
    p.add_argument("--split-size", type=float, default=5.0)
    p.add_argument("--discount", type=float, default=0.99999)
    p.add_argument("--budget-seconds", type=float, default=2.0)
    p.add_argument("--ga-seed", type=int, default=0)
    p.add_argument("--ga-generations", type=int, default=None,
                   help="cap GA generations per phase (makes GA runs reproducible)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="resourcetune")
    parser.add_argument("--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write random instances as JSON")
    g.add_argument("--utilization", type=float, required=True)
    g.add_argument("--track-proportion", type=float, required=True)
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)

    r = sub.add_parser("run", help="run one algorithm on one instance")
    r.add_argument("--instance", required=True)
    r.add_argument("--algorithm", choices=["resourcetune", "greedy", "ga"], default="resourcetune")
    r.add_argument("--out", required=True)
    _algo_flags(r)
    r.set_defaults(func=cmd_run)

    c = sub.add_parser("compare", help="run several algorithms over a directory of instances")
    c.add_argument("--instances-dir", required=True)
    c.add_argument("--algorithms", default="resourcetune,greedy,ga")
    c.add_argument("--out", required=True)
    c.add_argument("--plots", action="store_true")
    _algo_flags(c)
    c.set_defaults(func=cmd_compare)

    e = sub.add_parser("eval", help="score a saved plan sequence")
    e.add_argument("--instance", required=True)
    e.add_argument("--plans-file", required=True)
    e.set_defaults(func=cmd_eval)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
