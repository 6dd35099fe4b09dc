"""Command-line entry point.

    argabm run      --agents 10 --theories 2 --share-prob 1.0 --seed 42
    argabm sweep    --paper-grid --reps 100 --seed 7 --out results.csv
    argabm validate --theories 3 --seed 1 --dump landscape.txt

Every flag may also come from a ``--config`` file of flat ``key = value``
lines whose keys are the long flag names without the leading dashes, e.g.
``share-prob = 0.5``. Flags win over the file; anything unset takes the
library defaults. ``ARGABM_PARALLELISM`` sets the default sweep worker count.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

from .agent import BehaviorConfig
from .engine import Simulation, SimulationConfig
from .experiment import (
    BIASED,
    GRID_AGENT_COUNTS,
    GRID_SHARE_PROBABILITIES,
    GRID_THEORY_COUNTS,
    RELIABLE,
    SweepError,
    SweepSpec,
    default_parallelism,
    export_results,
    run_sweep,
)
from .landscape import ConfigError, LandscapeConfig, check_invariants, dumps, full_defensibility, generate_landscape
from .social import BIDIRECTIONAL, HETEROGENEOUS, HOMOGENEOUS, UNIDIRECTIONAL, SharingConfig


def probability(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"probability must lie in [0, 1], got {value}")
    return value


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def non_negative_int(text: str) -> int:
    value = int(text) if text.lstrip("-").isdigit() else None
    if value is None or value < 0:
        raise argparse.ArgumentTypeError(f"must be an integer >= 0, got {text!r}")
    return value


def seed_int(text: str) -> int:
    try:
        return int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer seed: {text!r}")


def threshold(text: str) -> float:
    value = probability(text)
    if value == 0.0:
        raise argparse.ArgumentTypeError("switch threshold must be > 0")
    return value


def choice(*options: str) -> Callable[[str], str]:
    def parse(text: str) -> str:
        if text not in options:
            raise argparse.ArgumentTypeError(f"expected one of {', '.join(options)}, got {text!r}")
        return text

    return parse


def list_of(item: Callable) -> Callable[[str], tuple]:
    def parse(text: str) -> tuple:
        parts = [p for p in text.replace(" ", "").split(",") if p]
        if not parts:
            raise argparse.ArgumentTypeError("empty list")
        return tuple(item(p) for p in parts)

    return parse


def boolean(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"not a boolean: {text!r}")


@dataclass(frozen=True)
class Option:
    flag: str
    type: Callable
    help: str

    @property
    def dest(self) -> str:
        return self.flag.replace("-", "_")


LANDSCAPE_OPTIONS = [
    Option("theories", positive_int, "number of rival theories"),
    Option("depth", non_negative_int, "depth of every theory tree"),
    Option("branching", positive_int, "children per non-leaf argument"),
    Option("attack-prob", probability, "probability that an argument is attacked"),
]
RUN_OPTIONS = [
    Option("agents", positive_int, "population size"),
    Option("share-prob", probability, "inter-network sharing probability"),
]
COMMON_OPTIONS = [
    Option("share-interval", positive_int, "rounds between sharing events"),
    Option("network-size", positive_int, "agents per collaborative network"),
    Option("direction", choice(UNIDIRECTIONAL, BIDIRECTIONAL), "inter-network exchange mode"),
    Option("move-prob", probability, "chance of moving to a child instead of exploring"),
    Option("eval-interval", positive_int, "rounds between theory evaluations"),
    Option("switch-threshold", threshold, "relative defensibility below which agents switch"),
    Option("rounds-per-degree", positive_int, "exploration rounds per degree step"),
    Option("max-rounds", positive_int, "safety cap on rounds"),
]
RUN_ONLY = [
    Option("composition", choice(HOMOGENEOUS, HETEROGENEOUS), "network composition"),
    Option("biased", boolean, "agents withhold attacks on their own theory"),
]
SWEEP_OPTIONS = [
    Option("agent-counts", list_of(positive_int), "comma-separated population sizes"),
    Option("theory-counts", list_of(positive_int), "comma-separated theory counts"),
    Option("share-probs", list_of(probability), "comma-separated sharing probabilities"),
    Option("compositions", list_of(choice(HOMOGENEOUS, HETEROGENEOUS)), "comma-separated compositions"),
    Option("reliabilities", list_of(choice(RELIABLE, BIASED)), "comma-separated reliabilities"),
    Option("reps", positive_int, "repetitions per cell"),
    Option("depth", non_negative_int, "depth of every theory tree"),
    Option("branching", positive_int, "children per non-leaf argument"),
    Option("attack-prob", probability, "probability that an argument is attacked"),
]
SEED = Option("seed", seed_int, "RNG seed (run seed, or sweep base seed)")


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _add(parser: argparse.ArgumentParser, options: list[Option]) -> None:
    for opt in options:
        parser.add_argument(f"--{opt.flag}", dest=opt.dest, type=opt.type, default=None, help=opt.help)


def build_parser() -> Parser:
    parser = Parser(prog="argabm", description="Argumentative agent-based model of scientific inquiry")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=Parser)

    run = sub.add_parser("run", help="execute one simulation and print its result as JSON")
    _add(run, RUN_OPTIONS + LANDSCAPE_OPTIONS + COMMON_OPTIONS + RUN_ONLY + [SEED])
    # short aliases used in examples
    run.add_argument("--heterogeneous", dest="composition", action="store_const", const=HETEROGENEOUS,
                     help="shorthand for --composition heterogeneous")
    run.add_argument("--config", type=Path, help="flat key = value config file")
    run.add_argument("--trace", type=Path, help="write a JSON-lines round trace here")

    sweep = sub.add_parser("sweep", help="run a parameter grid and export summaries")
    _add(sweep, SWEEP_OPTIONS + COMMON_OPTIONS + [SEED])
    sweep.add_argument("--paper-grid", action="store_true", help="request the published grid explicitly (it is also the default for unset lists)")
    sweep.add_argument("--agents", dest="agent_counts", type=list_of(positive_int), help=argparse.SUPPRESS)
    sweep.add_argument("--theories", dest="theory_counts", type=list_of(positive_int), help=argparse.SUPPRESS)
    sweep.add_argument("--config", type=Path, help="flat key = value config file")
    sweep.add_argument("--out", type=Path, default=Path("results.csv"), help="output file (.csv or .json)")
    sweep.add_argument("--format", choices=("csv", "json"), help="override the format implied by --out")
    sweep.add_argument("--parallelism", type=positive_int, default=None, help="worker processes")

    val = sub.add_parser("validate", help="generate a landscape and check its invariants")
    _add(val, LANDSCAPE_OPTIONS + [SEED])
    val.add_argument("--config", type=Path, help="flat key = value config file")
    val.add_argument("--dump", type=Path, help="write the landscape in text form here")
    return parser


def read_config(path: Path) -> dict[str, str]:
    cp = configparser.ConfigParser(interpolation=None, comment_prefixes=("#", ";"))
    try:
        cp.read_string("[config]\n" + path.read_text())
    except (OSError, configparser.Error) as exc:
        raise UsageError(f"cannot read config {path}: {exc}")
    return {k.replace("_", "-"): v for k, v in cp["config"].items()}


def resolve(parser: argparse.ArgumentParser, args: argparse.Namespace, options: list[Option]) -> dict:
    """Flag value, else config-file value, else None."""
    file_values = read_config(args.config) if getattr(args, "config", None) else {}
    known = {o.flag: o for o in options}
    unknown = set(file_values) - set(known)
    if unknown:
        parser.error(f"unknown config keys: {', '.join(sorted(unknown))}")
    out = {}
    for opt in options:
        value = getattr(args, opt.dest, None)
        if value is None and opt.flag in file_values:
            try:
                value = opt.type(file_values[opt.flag])
            except argparse.ArgumentTypeError as exc:
                parser.error(f"config key {opt.flag}: {exc}")
        out[opt.dest] = value
    return out


def _pick(values: dict, **mapping) -> dict:
    return {field: values[dest] for field, dest in mapping.items() if values.get(dest) is not None}


def template_config(values: dict) -> SimulationConfig:
    base = SimulationConfig()
    landscape = LandscapeConfig(**{
        **vars_of(base.landscape),
        **_pick(values, num_theories="theories", depth="depth", branching="branching",
                attack_probability="attack_prob", seed="seed"),
    })
    behavior = BehaviorConfig(**{
        **vars_of(base.behavior),
        **_pick(values, move_probability="move_prob", evaluation_interval="eval_interval",
                switch_threshold="switch_threshold", rounds_per_degree="rounds_per_degree"),
    })
    sharing = SharingConfig(**{
        **vars_of(base.sharing),
        **_pick(values, share_interval="share_interval", share_probability="share_prob",
                direction="direction", network_size="network_size"),
    })
    top = _pick(values, num_agents="agents", composition="composition", biased="biased",
                seed="seed", max_rounds="max_rounds")
    return SimulationConfig(landscape=landscape, behavior=behavior, sharing=sharing, **top)


def vars_of(obj) -> dict:
    return {k: getattr(obj, k) for k in obj.__dataclass_fields__}


def cmd_run(parser, args) -> int:
    values = resolve(parser, args, RUN_OPTIONS + LANDSCAPE_OPTIONS + COMMON_OPTIONS + RUN_ONLY + [SEED])
    config = template_config(values)
    try:
        config.validate()
    except ConfigError as exc:
        parser.error(str(exc))
    if args.trace:
        with args.trace.open("w") as fh:
            result = Simulation(config, trace=fh).run()
    else:
        result = Simulation(config).run()
    print(json.dumps({**result.to_dict(), "seed": config.seed}, sort_keys=True))
    return 0


def cmd_sweep(parser, args) -> int:
    values = resolve(parser, args, SWEEP_OPTIONS + COMMON_OPTIONS + [SEED])
    template = template_config(values)
    try:
        template.validate()
    except ConfigError as exc:
        parser.error(str(exc))
    grid = dict(
        agent_counts=GRID_AGENT_COUNTS,
        share_probabilities=GRID_SHARE_PROBABILITIES,
        compositions=(HOMOGENEOUS, HETEROGENEOUS),
        reliabilities=(RELIABLE, BIASED),
        theory_counts=GRID_THEORY_COUNTS,
    )
    grid.update(_pick(values, agent_counts="agent_counts", share_probabilities="share_probs",
                      compositions="compositions", reliabilities="reliabilities",
                      theory_counts="theory_counts"))
    spec = SweepSpec(
        **grid,
        repetitions=values["reps"] or 100,
        base_seed=values["seed"] if values["seed"] is not None else 0,
        template=template,
    )
    try:
        spec.validate()
    except ValueError as exc:
        parser.error(str(exc))
    workers = args.parallelism or default_parallelism()
    try:
        table = run_sweep(spec, parallelism=workers)
    except SweepError as exc:
        if exc.table:
            export_results(exc.table, args.out, args.format)
        print(str(exc), file=sys.stderr)
        return 1
    export_results(table, args.out, args.format)
    print(f"wrote {len(table)} rows to {args.out}", file=sys.stderr)
    return 0


def cmd_validate(parser, args) -> int:
    values = resolve(parser, args, LANDSCAPE_OPTIONS + [SEED])
    base = LandscapeConfig()
    config = LandscapeConfig(**{
        **vars_of(base),
        **_pick(values, num_theories="theories", depth="depth", branching="branching",
                attack_probability="attack_prob", seed="seed"),
    })
    try:
        landscape = generate_landscape(config)
    except ConfigError as exc:
        parser.error(str(exc))
    problems = check_invariants(landscape)
    if args.dump:
        args.dump.write_text(dumps(landscape))
    report = {
        "arguments": len(landscape.arguments()),
        "attacks": len(landscape.attacks),
        "best_theory": landscape.best_theory,
        "defensibility": [full_defensibility(landscape, t) for t in range(landscape.num_theories)],
        "problems": problems,
    }
    print(json.dumps(report, sort_keys=True))
    return 1 if problems else 0


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        sub = parser._subparsers._group_actions[0].choices[args.command]
        handler = {"run": cmd_run, "sweep": cmd_sweep, "validate": cmd_validate}[args.command]
        return handler(sub, args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
