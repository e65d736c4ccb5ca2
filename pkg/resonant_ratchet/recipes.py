"""
Commands and the figure recipes built on them
"""

import concurrent.futures
import logging
import math

from resonant_ratchet.bands import band_force
from resonant_ratchet.config import RunConfig
from resonant_ratchet.output import CsvOutput
from resonant_ratchet.perturbation import (ASYMPTOTIC_LIMIT, analytic_force_q3,
                                           asymptotic_force, in_regime,
                                           perturbative_force, period_scan)
from resonant_ratchet.propagator import ResonanceOrder, evolve, gamma_table
from resonant_ratchet.state import TailMassError, directionality_ratio, observables
from resonant_ratchet.verify import run_suites

log = logging.getLogger('resonant-ratchet')

EVOLVE_COLUMNS = ('N', 'p_mean', 'p_second', 'f_avg', 'norm', 'tail_mass')
SWEEP_COLUMNS = ('k', 'f_numeric', 'f_band', 'f_perturbative', 'f_analytic_q3',
                 'f_asymptotic', 'regime')
ASYMMETRIC_COLUMNS = ('k', 'f_numeric', 'f_baseline', 'f_difference', 'f_perturbative')
RATIO_COLUMNS = ('N', 'p_mean', 'p_variance', 'ratio')
GAMMA_COLUMNS = ('n', 're_gamma', 'im_gamma', 'abs_gamma')
PERIOD_COLUMNS = ('r', 'q', 'f_band')

_sweep = dict(r=1, k_min=0.1, k_max=10.0, k_steps=100, n_kicks=100)

FIGURES = {
    '1': ('sweep', RunConfig(q=3, a=2.0, alpha=math.pi / 4, **_sweep)),
    '1-inset': ('evolve', RunConfig(r=1, q=3, k=5.0, a=0.01, alpha=math.pi / 4, n_kicks=50)),
    '2a': ('sweep', RunConfig(q=3, a=0.01, alpha=math.pi / 3, **_sweep)),
    '2b': ('sweep', RunConfig(q=5, a=0.01, alpha=math.pi / 3, **_sweep)),
    '3': ('asymmetric', RunConfig(q=3, a=0.01, alpha=math.pi / 3,
                                  initial='expr:cos_cos_sin2', **_sweep)),
    'ratio': ('ratio', RunConfig(r=1, q=3, k=5.0, a=2.0, alpha=math.pi / 4, n_kicks=40)),
}


def _run(config, potential):
    grid = config.grid(potential)
    phi0 = config.initial_state(grid)
    return evolve(phi0, potential, config.order, config.n_kicks), phi0


def _write_records(out, records):
    for record in records:
        obs = record.observables
        out.write(obs.n_kicks, obs.p_mean, obs.p_second, obs.f_avg, obs.norm,
                  record.tail_mass)


def cmd_evolve(config, stream):
    out = CsvOutput(stream, EVOLVE_COLUMNS, config.items())
    try:
        trajectory, _ = _run(config, config.potential())
    except TailMassError as e:
        if e.trajectory is not None:
            _write_records(out, e.trajectory.records)
        raise
    _write_records(out, trajectory.records)
    return trajectory


def sweep_row(config, k):
    """
    One row of a sweep. Runs in worker processes, so it only takes picklable
    arguments.
    """
    potential = config.potential(k)
    order = config.order
    trajectory, phi0 = _run(config, potential)
    band = band_force(potential, order, None if config.initial == 'uniform' else phi0)

    regime = 'perturbative' if in_regime(k, config.a) else 'out_of_regime'
    perturbative = analytic = asymptotic = None
    if order == ResonanceOrder(1, 3):
        analytic = analytic_force_q3(k, config.a, config.alpha)
    if regime == 'perturbative':
        perturbative = perturbative_force(k, config.a, config.alpha, order)
        if order.q == 1 or k * 2 * math.sin(math.pi / order.q) >= ASYMPTOTIC_LIMIT:
            asymptotic = float(asymptotic_force(k, config.a, config.alpha, order))
    return (k, trajectory.final.f_avg, band, perturbative, analytic, asymptotic, regime)


def _map_rows(function, config, k_values, jobs):
    arguments = [(config, float(k)) for k in k_values]
    if jobs <= 1:
        for args in arguments:
            yield function(*args)
        return
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as executor:
        # map keeps input order whatever the completion order
        yield from executor.map(function, *zip(*arguments))


def cmd_sweep(config, stream, jobs=1):
    out = CsvOutput(stream, SWEEP_COLUMNS, config.items())
    k_values = config.k_values()
    for i, row in enumerate(_map_rows(sweep_row, config, k_values, jobs), start=1):
        log.info('sweep point %d/%d: k=%g' % (i, len(k_values), row[0]))
        out.write(*row)


def asymmetric_row(config, k):
    potential = config.potential(k)
    full = _run(config, potential)[0].final.f_avg
    baseline = _run(config, potential.replace(a=0.0))[0].final.f_avg
    perturbative = perturbative_force(k, config.a, config.alpha, config.order)
    return (k, full, baseline, full - baseline, perturbative)


def cmd_asymmetric(config, stream, jobs=1):
    """
    Sweep for a non-uniform initial state, separating the a = 0 drift.
    """
    out = CsvOutput(stream, ASYMMETRIC_COLUMNS, config.items())
    for row in _map_rows(asymmetric_row, config, config.k_values(), jobs):
        out.write(*row)


def cmd_ratio(config, stream):
    out = CsvOutput(stream, RATIO_COLUMNS, config.items())
    potential = config.potential()
    rows = []

    def observe(n, state):
        if n > 0:
            obs = observables(state, n)
            rows.append((n, obs.p_mean, obs.variance, directionality_ratio(state)))

    evolve(config.initial_state(config.grid(potential)), potential, config.order,
           config.n_kicks, observer=observe)
    for row in rows:
        out.write(*row)


def cmd_gamma(order, stream):
    out = CsvOutput(stream, GAMMA_COLUMNS, [('r', order.r), ('q', order.q)])
    table = gamma_table(order)
    for n, gamma in enumerate(table.gamma):
        out.write(n, gamma.real, gamma.imag, abs(gamma))
    for name, residual in table.identity_residuals().items():
        out.comment('residual %s = %s' % (name, '%.3e' % residual))


def cmd_periods(config, stream, q_max=8):
    potential = config.potential()
    preamble = list(config.items()) + [('q_max', q_max)]
    out = CsvOutput(stream, PERIOD_COLUMNS, preamble)
    for row in period_scan(potential.k, potential.a, potential.alpha, q_max):
        out.write(*row)


def cmd_verify(suite, colors=True):
    return 0 if run_suites(suite, colors) else 3


def figure_config(figure, n_kicks=None):
    try:
        kind, config = FIGURES[figure]
    except KeyError:
        raise ValueError('unknown figure %r, expected one of: %s'
                         % (figure, ', '.join(FIGURES))) from None
    if n_kicks is not None:
        config = config.replace(n_kicks=n_kicks)
    return kind, config


def cmd_fig(figure, stream, n_kicks=None, jobs=1):
    kind, config = figure_config(figure, n_kicks)
    log.info('Figure %s: %s run with %r' % (figure, kind, config))
    if kind == 'sweep':
        return cmd_sweep(config, stream, jobs)
    if kind == 'asymmetric':
        return cmd_asymmetric(config, stream, jobs)
    if kind == 'ratio':
        return cmd_ratio(config, stream)
    return cmd_evolve(config, stream)
