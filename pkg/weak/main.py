#!/usr/bin/env python

import argparse
import json
import logging
import os
import sys

import weak.logging_config as logging_config
from weak.config import *
from weak.enums import *
from weak.errors import *
from weak.confusion import diagnostics
from weak.density import correct_densities, empirical_conditionals, \
    project_to_pmf
from weak.loss import LossVector, correct_loss_multiclass, \
    correct_loss_table, expected_weak_loss
from weak.experiment import run_sweep, summarize_sweep, write_results_csv
from weak.personalize import run_demo
from weak.csvio import load_matrix_csv, load_densities_csv, \
    load_weak_dataset, write_measures_csv
from weak import configfile

EXIT_OK = 0
EXIT_DOMAIN_ERROR = 1
EXIT_USAGE_ERROR = 2

DIAGNOSE = "diagnose"
CORRECT = "correct"
CORRECT_LOSS = "correct-loss"
SUBCOMMANDS = (DIAGNOSE, CORRECT, CORRECT_LOSS, configfile.SWEEP,
               configfile.PERSONALIZE)


class CliConfig(object):
    """ Command line options common to all commands.
    """
    def __init__(self, subcommand, config_path=None, output_path=None,
                 seed_override=None, verbosity=0):
        if subcommand not in SUBCOMMANDS:
            raise ConfigException("unknown command '{}'".format(subcommand))
        if subcommand in (configfile.SWEEP, configfile.PERSONALIZE) \
                and not config_path:
            raise ConfigException("{} requires --config".format(subcommand))
        if subcommand != DIAGNOSE and not output_path:
            raise ConfigException("{} requires --out".format(subcommand))
        if seed_override is not None and seed_override < 0:
            raise ConfigException("seed must be non negative, got {}"
                                  .format(seed_override))
        self.subcommand = subcommand
        self.config_path = config_path
        self.output_path = output_path
        self.seed_override = seed_override
        self.verbosity = verbosity

    @staticmethod
    def from_args(args):
        return CliConfig(args.command, getattr(args, "config", None),
                         getattr(args, "out", None),
                         getattr(args, "seed", None), args.verbose)


def _orientation(name):
    try:
        return from_name(ORIENTATIONS, name)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _projection(name):
    try:
        return from_name(PROJECTIONS, name)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _non_negative(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError("'{}' is not a number".format(text))
    if not 0.0 <= v < float("inf"):
        raise argparse.ArgumentTypeError("must be finite and non negative, "
                                         "got {}".format(text))
    return v


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0,
                        help="more output, repeat for debug messages")
    parser = argparse.ArgumentParser(
        prog="pyweak",
        description="Noise corrected learning from weak labels.")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser(DIAGNOSE, parents=[common],
                       help="conditioning of confusion matrix")
    p.add_argument("--matrix", required=True, help="K x K matrix CSV")
    p.add_argument("--orientation", required=True, type=_orientation,
                   help="backward or forward")

    p = sub.add_parser(CORRECT, parents=[common],
                       help="recover class conditionals from weak ones")
    p.add_argument("--matrix", required=True,
                   help="backward matrix CSV, column j is Pr(y|weak y=j)")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--densities",
                        help="CSV with rows 'index,v0,...,vK-1'")
    source.add_argument("--samples",
                        help="CSV with rows 'x,weak_label'")
    p.add_argument("--smoothing", type=_non_negative, default=SMOOTHING,
                   help="pseudo count for --samples (default %(default)s)")
    p.add_argument("--projection", type=_projection,
                   default=from_name(PROJECTIONS, PROJECTION),
                   help="clip or simplex (default %(default)s)")
    p.add_argument("--out", required=True, help="output CSV")

    p = sub.add_parser(CORRECT_LOSS, parents=[common],
                       help="unbiased loss for weak labels",
                       epilog="loss JSON is {\"losses\": [l0, ..., lK-1]} "
                              "or {\"losses\": [[...], ...]} for a table "
                              "with one row per sample")
    p.add_argument("--matrix", required=True,
                   help="forward matrix CSV, row i is Pr(weak y|y=i)")
    p.add_argument("--loss", required=True, help="loss JSON")
    p.add_argument("--out", required=True, help="output JSON")

    p = sub.add_parser(configfile.SWEEP, parents=[common],
                       help="synthetic convergence study",
                       epilog=configfile.describe_keys(configfile.SWEEP),
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--config", required=True, help="JSON config")
    p.add_argument("--out", required=True, help="output CSV")
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1,
                   help="worker processes (default %(default)s)")
    p.add_argument("--seed", type=int,
                   help="base seed, overrides config")

    p = sub.add_parser(configfile.PERSONALIZE, parents=[common],
                       help="personalization with GPS speed annotations",
                       epilog=configfile.describe_keys(
                           configfile.PERSONALIZE),
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--config", required=True, help="JSON config")
    p.add_argument("--out", required=True, help="output JSON")
    p.add_argument("--seed", type=int,
                   help="first user seed, overrides config seeds keeping "
                        "their number")
    return parser


def _echo_config(cfg):
    logging.info("Effective config:\n{}"
                 .format(json.dumps(cfg.to_dict(), indent=2, sort_keys=True)))


def do_diagnose(args, cli):
    cm = load_matrix_csv(args.matrix, args.orientation)
    print(diagnostics(cm))


def do_correct(args, cli):
    backward = load_matrix_csv(args.matrix, BACKWARD)
    if args.samples is not None:
        data = load_weak_dataset(args.samples,
                                 num_classes=backward.num_classes)
        weak = empirical_conditionals(data, args.smoothing)
    else:
        weak = load_densities_csv(args.densities)
    signed = correct_densities(weak, backward)
    pmfs = [project_to_pmf(sm, args.projection) for sm in signed]
    write_measures_csv(cli.output_path, pmfs, signed)


def do_correct_loss(args, cli):
    forward = load_matrix_csv(args.matrix, FORWARD)
    with open(args.loss, "r") as f:
        try:
            doc = json.load(f)
        except ValueError as e:
            raise ParseError("{}: {}".format(args.loss, e))
    if not isinstance(doc, dict) or set(doc) != {"losses"}:
        raise ParseError("{}: object with single key 'losses' expected"
                         .format(args.loss))
    losses = doc["losses"]
    is_table = isinstance(losses, list) and len(losses) > 0 \
        and isinstance(losses[0], list)
    try:
        if is_table:
            table = [LossVector(row).values for row in losses]
            if len(set(len(row) for row in table)) != 1:
                raise ValueError("rows of loss table differ in length")
        else:
            vector = LossVector(losses)
    except (TypeError, ValueError) as e:
        raise ParseError("{}: bad losses: {}".format(args.loss, e))
    if is_table:
        res = {"corrected": correct_loss_table(table, forward).tolist()}
    else:
        corrected = correct_loss_multiclass(vector, forward)
        res = {"corrected": corrected.tolist(),
               "expected_weak_loss": [
                   expected_weak_loss(corrected, forward, y)
                   for y in range(forward.num_classes)]}
    with open(cli.output_path, "w") as f:
        json.dump(res, f, indent=2, sort_keys=True)
        f.write("\n")


def do_sweep(args, cli):
    cfg = configfile.parse_config(cli.config_path, configfile.SWEEP)
    if cli.seed_override is not None:
        cfg.base_seed = cli.seed_override
    _echo_config(cfg)
    cells = run_sweep(cfg, max(1, args.workers))
    write_results_csv(cells, cli.output_path)
    summarize_sweep(cells)


def do_personalize(args, cli):
    cfg = configfile.parse_config(cli.config_path, configfile.PERSONALIZE)
    if cli.seed_override is not None:
        cfg.seeds = list(range(cli.seed_override,
                               cli.seed_override + len(cfg.seeds)))
    _echo_config(cfg)
    report = run_demo(cfg)
    with open(cli.output_path, "w") as f:
        json.dump(report, f, indent=2, sort_keys=True)
        f.write("\n")
    print("BER baseline {:.3f}, ground truth {:.3f}, weak corrected {:.3f}"
          .format(report["ber_baseline"], report["ber_ground_truth"],
                  report["ber_weak_corrected"]))


HANDLERS = {DIAGNOSE: do_diagnose, CORRECT: do_correct,
            CORRECT_LOSS: do_correct_loss, configfile.SWEEP: do_sweep,
            configfile.PERSONALIZE: do_personalize}


def run(argv):
    """ Parse arguments and run command.
    :param argv: list of arguments without program name.
    :return: exit code, 0 on success, 1 on domain errors, 2 on usage,
             config and IO errors.
    """
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # argparse exits with 0 for --help and 2 for bad usage
        return e.code if isinstance(e.code, int) else EXIT_USAGE_ERROR
    logging_config.set_verbosity(getattr(args, "verbose", 0))
    try:
        if args.command is None:
            raise ConfigException("command required, one of {}"
                                  .format(", ".join(SUBCOMMANDS)))
        cli = CliConfig.from_args(args)
        HANDLERS[cli.subcommand](args, cli)
    except WeakException as e:
        print("ERROR {}: {}".format(e.__class__.__name__, e),
              file=sys.stderr)
        return EXIT_DOMAIN_ERROR
    except (ConfigException, IOError, OSError) as e:
        print("ERROR {}: {}".format(e.__class__.__name__, e),
              file=sys.stderr)
        return EXIT_USAGE_ERROR
    return EXIT_OK


def main():
    logging_config.debug_disable()
    try:
        code = run(sys.argv[1:])
    except KeyboardInterrupt:
        print("\r\nExiting...")
        code = EXIT_USAGE_ERROR
    sys.exit(code)


if __name__ == "__main__":
    main()
