"""Command-line interface.

Subcommands: ``sample`` (one instance with a printed trace), ``bench``
(preset experiment), ``ablate`` (sweeps), ``summarize`` (tables from result
files). Exit codes: 0 success, 2 usage/configuration error, 1 runtime error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from ..diffusion import linear_schedule
from ..errors import ConfigError, ParseError
from ..search import aggregate_violation, sample
from ..tasks import build_denoiser
from .configio import RunConfig, load_config
from .runner import (
    ablate,
    build_instance,
    load_instances,
    load_results,
    presets,
    render_summary_csv,
    run_experiment,
    sample_rng,
    search_config,
    write_summary_csv,
)

_SEARCH_NAMES = {"off": "off", "last": "last_step", "all": "all_steps",
                 "last_step": "last_step", "all_steps": "all_steps"}


def _add_run_flags(parser: argparse.ArgumentParser, lists: bool = False):
    split = (lambda s: s.split(",")) if lists else (lambda s: s)
    parser.add_argument("--task", choices=("sat", "sudoku", "peptide"))
    parser.add_argument("--steps", type=split if lists else int,
                        help="denoising steps T")
    parser.add_argument("--css", type=split if lists else int, dest="candidates",
                        help="proposal pool size per step")
    parser.add_argument("--rounds", type=int, help="refinement round cap")
    parser.add_argument("--search", type=split if lists else str,
                        help="off|last|all")
    parser.add_argument("--eps", type=split if lists else float, dest="epsilon",
                        help="denoiser corruption weight")
    parser.add_argument("--denoiser", help="exact|noisy|uniform|table:PATH")
    parser.add_argument("--n-samples", type=int, dest="num_samples")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--out", help="result file (JSON lines)")
    parser.add_argument("--instances", help="DIMACS file/dir or sudoku lines file")
    parser.add_argument("--config", help="config file; flags override it")


def _placement(name: str) -> str:
    try:
        return _SEARCH_NAMES[name]
    except KeyError:
        raise ConfigError(f"unknown search placement {name!r}") from None


def _merge_config(args: argparse.Namespace) -> RunConfig:
    base = presets()[args.task] if args.task else RunConfig()
    if args.config:
        base = load_config(args.config, base)
    overrides = {}
    for flag, attr in (("task", "task"), ("steps", "steps"),
                       ("candidates", "candidates"), ("rounds", "rounds"),
                       ("epsilon", "epsilon"), ("denoiser", "denoiser"),
                       ("num_samples", "num_samples"), ("seed", "seed"),
                       ("out", "out"), ("instances", "instances")):
        value = getattr(args, flag, None)
        if value is not None:
            overrides[attr] = value
    if getattr(args, "search", None) is not None:
        overrides["placement"] = _placement(args.search)
    return replace(base, **overrides)


def _cmd_sample(args) -> int:
    cfg = _merge_config(args)
    instances = load_instances(replace(cfg, num_samples=max(cfg.num_samples, 1))) \
        if cfg.instances else [build_instance(cfg, 0)]
    instance = instances[0]
    denoiser = build_denoiser(instance, cfg.denoiser, cfg.epsilon)
    final, trace = sample(instance, denoiser, linear_schedule(cfg.steps),
                          search_config(cfg), sample_rng(cfg.seed, 0))
    print(f"# instance {instance.name} schedule={cfg.schedule} T={cfg.steps}")
    for record in trace:
        if record.first_violation is None:
            print(f"t={record.t:3d} committed={record.committed}")
        else:
            print(f"t={record.t:3d} first={record.first_violation:g} "
                  f"pool={record.pool_violation:g} "
                  f"refined={record.refined_violation:g} "
                  f"rounds={record.rounds} committed={record.committed}")
    report = aggregate_violation(final, instance.constraints, cfg.weights)
    names = ", ".join(f"{c.name}={v:g}"
                      for c, v in zip(instance.constraints, report.values))
    print(f"result {instance.render(final)}")
    print(f"violations {names} total={report.total:g} feasible={report.feasible}")
    return 0


def _cmd_bench(args) -> int:
    cfg = _merge_config(args)
    result = run_experiment(cfg)
    sys.stdout.write(render_summary_csv([result]))
    if cfg.out:
        print(f"# wrote {cfg.out}", file=sys.stderr)
    return 0


def _cmd_ablate(args) -> int:
    cfg = _merge_config(argparse.Namespace(
        task=args.task, steps=None, candidates=None, rounds=args.rounds,
        epsilon=None, denoiser=args.denoiser, num_samples=args.num_samples,
        seed=args.seed, out=None, instances=args.instances,
        config=args.config, search=None))
    placements = [_placement(p) for p in args.search] if args.search else None
    counts = [int(x) for x in args.candidates] if args.candidates else None
    steps = [int(x) for x in args.steps] if args.steps else None
    epsilons = [float(x) for x in args.epsilon] if args.epsilon else None
    results = ablate(cfg, placements=placements, candidate_counts=counts,
                     step_counts=steps, epsilons=epsilons, out_dir=args.out)
    text = render_summary_csv(results)
    sys.stdout.write(text)
    if args.out:
        write_summary_csv(text, Path(args.out) / "summary.csv")
    return 0


def _cmd_summarize(args) -> int:
    results = [load_results(path) for path in args.results]
    text = render_summary_csv(results)
    sys.stdout.write(text)
    if args.out:
        write_summary_csv(text, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mdsearch",
        description="Constraint-guided sampling for masked discrete diffusion.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sample = sub.add_parser("sample", help="run one instance and print its trace")
    _add_run_flags(p_sample)
    p_sample.set_defaults(func=_cmd_sample)

    p_bench = sub.add_parser("bench", help="run a preset experiment")
    _add_run_flags(p_bench)
    p_bench.set_defaults(func=_cmd_bench)

    p_ablate = sub.add_parser("ablate", help="sweep search placement/pool/steps/eps")
    _add_run_flags(p_ablate, lists=True)
    p_ablate.set_defaults(func=_cmd_ablate)

    p_sum = sub.add_parser("summarize", help="tabulate result files")
    p_sum.add_argument("results", nargs="+", help="JSON-lines result files")
    p_sum.add_argument("--out", help="write the CSV here as well")
    p_sum.set_defaults(func=_cmd_summarize)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failure
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
