# SPDX-FileCopyrightText: 2024-present Open Networking Foundation <info@opennetworking.org>
# SPDX-License-Identifier: Apache-2.0
#
"""
Command-line entry point: python -m relaycoop <command> [options]

Exit codes: 0 on success, 2 when a single-point optimization is infeasible, 1 on errors.
"""
import argparse
import collections
import json
import os
import sys

from relaycoop import emit
from relaycoop.baselines import bound_trace, compare_point
from relaycoop.cgras import (EnumerationOptions, cooperation_level, enumerate_all,
                             enumerate_allocations, enumerate_schemes, parse_scheme, serialize,
                             validate)
from relaycoop.channel import RateTarget, mirror_invariant
from relaycoop.config import (RunConfig, build_config, channel_from_config, load_config,
                              parse_grid)
from relaycoop.errors import ConfigError, RelayCoopError
from relaycoop.log import error, info, setup, warn
from relaycoop.optimizer import optimize_scheme
from relaycoop.sweep import compete, difference_surface, population, run_sweep

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2


def _enumeration(cfg: RunConfig, split):
    return EnumerationOptions(allow_splitting=split, max_splits=cfg.max_splits,
                              max_split_messages=cfg.max_split_messages)


def _has_channel(cfg: RunConfig):
    return bool(cfg.channel) or (cfg.a is not None and cfg.b is not None)


def cmd_enumerate(cfg: RunConfig):
    split = cfg.split != "nosplit"
    opts = _enumeration(cfg, split)
    symmetric = True
    if _has_channel(cfg):
        symmetric = mirror_invariant(*channel_from_config(cfg))
    print("allocation          schemes  cooperation")
    for alloc in enumerate_allocations():
        print("%-18s %8d  %s" % (alloc, len(enumerate_schemes(alloc, opts)),
                                 cooperation_level(alloc)))
    schemes = enumerate_all(opts, symmetric=symmetric)
    histogram = collections.Counter(cooperation_level(c) for c in schemes)
    print("total over allocations (symmetric=%s): %d" % (symmetric, len(schemes)))
    for level, count in sorted(histogram.items()):
        print("  %-10s %d" % (level, count))
    os.makedirs(cfg.out_dir, exist_ok=True)
    if "json" in cfg.format:
        path = os.path.join(cfg.out_dir, "schemes.json")
        with open(path, "w") as f:
            json.dump({"split": split, "symmetric": symmetric,
                       "schemes": [serialize(c) for c in schemes]}, f, indent=1, sort_keys=True)
            f.write("\n")
        info("wrote %s", path)
    if "text" in cfg.format:
        path = os.path.join(cfg.out_dir, "schemes.txt")
        with open(path, "w") as f:
            f.writelines(serialize(c) + "\n" for c in schemes)
        info("wrote %s", path)
    return EXIT_OK


def cmd_optimize(cfg: RunConfig):
    ch, rc = channel_from_config(cfg)
    if len(cfg.rate) > 1:
        warn("optimize uses the first rate only (%g)", cfg.rate[0])
    target = RateTarget.symmetric(cfg.rate[0])
    opts = cfg.sweep_options()
    if cfg.scheme:
        scheme = parse_scheme(cfg.scheme)
        violations = validate(scheme)
        if violations:
            raise ConfigError("invalid scheme:\n" + "\n".join("\t* %s" % v for v in violations))
        solution = optimize_scheme(scheme, ch, rc, target, opts.weights, opts.split_step)
    else:
        split = cfg.split != "nosplit"
        outcome = compete(ch, rc, target, population(ch, opts.enumeration(split), rc), opts,
                          keep_solutions=True)
        best = outcome.best
        solution = outcome.solutions[best[0]] if best else None
        if solution is not None:
            solution.label = best[0]
    if solution is None or not solution.feasible:
        print(json.dumps({"feasible": False, "rate": cfg.rate[0]}, sort_keys=True))
        return EXIT_INFEASIBLE
    print(json.dumps(solution.to_dict(), sort_keys=True, indent=1))
    return EXIT_OK


def cmd_sweep(cfg: RunConfig):
    grid = parse_grid(cfg.grid)
    opts = cfg.sweep_options()
    for rate in cfg.rate:
        maps = {}
        for split in cfg.split_modes():
            pm = run_sweep(grid, rate, opts, split=split)
            emit.emit_phase_map(pm, cfg.out_dir, cfg.format, cfg.to_dict())
            maps[split] = pm
        if len(maps) == 2:
            cells = difference_surface(maps[False], maps[True])
            emit.emit_difference(maps[False], cells, cfg.out_dir, cfg.format)
    return EXIT_OK


def cmd_bound(cfg: RunConfig):
    ch, rc = channel_from_config(cfg)
    rows = bound_trace(ch, rc, cfg.rate, cfg.sweep_options())
    os.makedirs(cfg.out_dir, exist_ok=True)
    emit.write_bounds_csv(rows, os.path.join(cfg.out_dir, "bounds.csv"))
    return EXIT_OK


def cmd_compare(cfg: RunConfig):
    ch, rc = channel_from_config(cfg)
    rows = compare_point(ch, rc, cfg.rate, cfg.sweep_options())
    os.makedirs(cfg.out_dir, exist_ok=True)
    emit.write_bounds_csv(rows, os.path.join(cfg.out_dir, "bounds.csv"))
    emit.write_compare_csv(rows, os.path.join(cfg.out_dir, "compare.csv"))
    if "svg" in cfg.format:
        emit.write_compare_svg(rows, os.path.join(cfg.out_dir, "compare.svg"))
    return EXIT_OK


funcs = {
    "enumerate": cmd_enumerate,
    "optimize": cmd_optimize,
    "sweep": cmd_sweep,
    "bound": cmd_bound,
    "compare": cmd_compare,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="relaycoop",
        description="Energy-efficient cooperative schemes for a two-relay, three-receiver "
                    "downlink")
    parser.add_argument("command", type=str, help="Command to run", choices=funcs.keys())
    parser.add_argument("--config", type=str, help="JSON file with option values")
    parser.add_argument("--a", type=float, help="Gain from both relays to receiver 2")
    parser.add_argument("--b", type=float, help="Cross gain relay 1 -> RX3 and relay 2 -> RX1")
    parser.add_argument("--rate", type=float, nargs="+", help="Symmetric rate(s), default "
                                                             "0.1 0.5 1 2")
    parser.add_argument("--grid", type=str, help="START:STOP:STEPS or A0:A1:NA,B0:B1:NB, "
                                                 "default 0:2:21")
    split = parser.add_mutually_exclusive_group()
    split.add_argument("--split", dest="split", action="store_const", const="split",
                       help="Allow rate splitting")
    split.add_argument("--no-split", dest="split", action="store_const", const="nosplit",
                       help="No rate splitting (default)")
    split.add_argument("--both", dest="split", action="store_const", const="both",
                       help="Run with and without splitting and write the difference")
    parser.add_argument("--split-step", type=float, help="Share grid step, default 0.05")
    parser.add_argument("--max-splits", type=int, help="Parts per split message, default 2")
    parser.add_argument("--max-split-messages", type=int,
                        help="Messages split at once, default 1")
    parser.add_argument("--tolerance", type=float, help="Tie tolerance, default 0.05")
    parser.add_argument("--seed", type=int, help="Lower bound seed, default 1")
    parser.add_argument("--samples", type=int, help="Lower bound samples, default 2000")
    parser.add_argument("--bisect-tol", type=float, help="Lower bound relative tolerance")
    parser.add_argument("--mu", type=float, nargs=2, help="Relay energy weights, default 1 1")
    parser.add_argument("--scheme", type=str, help="Scheme text for optimize")
    parser.add_argument("--jobs", type=int, help="Parallel workers, default 1")
    parser.add_argument("--out-dir", type=str, help="Output directory, default out")
    parser.add_argument("--format", type=str, nargs="+",
                        choices=("csv", "json", "svg", "text"), help="Output formats")
    parser.add_argument("--verbose", action="store_const", const=True, help="Debug logging")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    setup(bool(args.verbose))
    try:
        file_values = load_config(args.config) if args.config else {}
        cfg = build_config(file_values, flags)
        setup(cfg.verbose)
        return funcs[args.command](cfg)
    except (RelayCoopError, OSError) as e:
        error("%s", e)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
