"""
Argument parser for package
"""

import argparse
import os

from resonant_ratchet.recipes import FIGURES
from resonant_ratchet.verify import SUITES


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError('must be a positive integer, got %s' % text)
    return value


def _default_jobs():
    try:
        return max(1, int(os.environ.get('RATCHET_JOBS', '1')))
    except ValueError:
        return 1


def parse_args(argv=None):
    parser = argparse.ArgumentParser(prog='ratchet', description="""
Simulates the kicked rotor with a two-harmonic kicking potential at quantum
resonance, T = 4*pi*r/q. Computes the directed current (ratchet effect), compares
it with small-a theory and checks the symmetry conditions under which the
current vanishes. Results are written as CSV.
    """)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('-v', '--verbose', action='count', default=0,
                        help='increase verbosity, can be specified up to 3 times'
                        + ' (verbosity levels: ERROR -> WARNING -> INFO -> DEBUG)')

    output = argparse.ArgumentParser(add_help=False)
    output_group = output.add_argument_group('Output')
    output_group.add_argument('-o', '--out', metavar='FILE',
                              help='write CSV to FILE instead of standard output')

    run = argparse.ArgumentParser(add_help=False)
    run_group = run.add_argument_group('Run options')
    run_group.add_argument('-n', '--n-kicks', type=_positive_int, metavar='N',
                           help='override the number of kicks of the run')
    run_group.add_argument('-j', '--jobs', type=_positive_int, default=_default_jobs(),
                           help='worker processes for k sweeps'
                           + ' (default from RATCHET_JOBS, else 1)')

    commands = parser.add_subparsers(dest='command', metavar='COMMAND')
    commands.required = True

    evolve = commands.add_parser('evolve', parents=[common, output, run],
                                 help='evolve one configuration, one row per kick')
    evolve.add_argument('-c', '--config', required=True, metavar='FILE',
                        help='run configuration with a single k')

    sweep = commands.add_parser('sweep', parents=[common, output, run],
                                help='average force against k for a k range')
    sweep.add_argument('-c', '--config', required=True, metavar='FILE',
                       help='run configuration with k_min, k_max and k_steps')

    gamma = commands.add_parser('gamma', parents=[common, output],
                                help='Gauss-sum coefficients of the resonant map')
    gamma.add_argument('r', type=_positive_int, metavar='R')
    gamma.add_argument('q', type=_positive_int, metavar='Q')

    verify = commands.add_parser('verify', parents=[common],
                                 help='run verification suites, exit 3 on failure')
    verify.add_argument('suite', choices=SUITES, metavar='SUITE',
                        help='one of: %s' % ', '.join(SUITES))
    verify.add_argument('--no-color', action='store_true',
                        help='disable colored output')

    fig = commands.add_parser('fig', parents=[common, output, run],
                              help='data behind one of the published figures')
    fig.add_argument('figure', choices=list(FIGURES), metavar='ID',
                     help='one of: %s' % ', '.join(FIGURES))

    periods = commands.add_parser('periods', parents=[common, output],
                                  help='band force for every resonance up to q_max')
    periods.add_argument('-c', '--config', required=True, metavar='FILE',
                         help='run configuration with a single k')
    periods.add_argument('-Q', '--q-max', type=_positive_int, default=8,
                         help='largest q to scan (default 8)')

    return parser.parse_args(argv)
