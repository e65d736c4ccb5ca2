#!/usr/bin/env python3
#
# SPDX-License-Identifier: Apache-2.0

import contextlib
import logging
import sys

from resonant_ratchet.argument_parser import parse_args
from resonant_ratchet.config import ConfigError, RunConfig
from resonant_ratchet.output import NonFiniteError
from resonant_ratchet.propagator import ResonanceError, ResonanceOrder
from resonant_ratchet.recipes import (cmd_evolve, cmd_fig, cmd_gamma, cmd_periods,
                                      cmd_sweep, cmd_verify)
from resonant_ratchet.state import GridError, TailMassError

# default logging configuration
log = logging.getLogger('resonant-ratchet')
console = logging.StreamHandler()
formatter = logging.Formatter('[%(levelname)s] %(message)s')
console.setFormatter(formatter)
log.setLevel(logging.ERROR)
log.addHandler(console)

EXIT_CONFIG = 1
EXIT_NUMERICAL = 2


@contextlib.contextmanager
def open_output(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, 'w', newline='') as f:
            yield f


def run(args):
    if args.command == 'verify':
        return cmd_verify(args.suite, colors=not args.no_color)

    # inputs are checked before --out is created or truncated
    if args.command == 'gamma':
        order = ResonanceOrder(args.r, args.q)
    elif args.command != 'fig':
        config = RunConfig.from_file(args.config)
        if getattr(args, 'n_kicks', None) is not None:
            config = config.replace(n_kicks=args.n_kicks)

    with open_output(args.out) as stream:
        if args.command == 'gamma':
            cmd_gamma(order, stream)
        elif args.command == 'fig':
            cmd_fig(args.figure, stream, n_kicks=args.n_kicks, jobs=args.jobs)
        elif args.command == 'evolve':
            cmd_evolve(config, stream)
        elif args.command == 'sweep':
            cmd_sweep(config, stream, jobs=args.jobs)
        else:
            cmd_periods(config, stream, q_max=args.q_max)
    return 0


def main(argv=None):
    args = parse_args(argv)

    # adjust verbosity
    if args.verbose:
        level = log.level - 10 * args.verbose
        log.setLevel(max(level, logging.DEBUG))

    try:
        return run(args)
    except (ConfigError, ResonanceError, GridError) as e:
        print('error: %s' % e, file=sys.stderr)
        return EXIT_CONFIG
    except (TailMassError, NonFiniteError) as e:
        print('numerical failure: %s' % e, file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
