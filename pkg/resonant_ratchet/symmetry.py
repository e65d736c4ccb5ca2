"""
Numerical checks of the symmetry theorems for the resonant map
"""

import logging
import math

import numpy as np

from resonant_ratchet.perturbation import ForceCurve, perturbative_force
from resonant_ratchet.propagator import ResonanceOrder, evolve, gamma_table
from resonant_ratchet.state import (GridSpec, named_state, parity_residuals,
                                    state_from_position_function, to_position_samples,
                                    uniform_state)

log = logging.getLogger('resonant-ratchet')

ZERO_CURRENT_TOLERANCE = 1e-10
PARITY_TOLERANCE = 1e-9
PLANE_WAVE_TOLERANCE = 1e-9
IDENTITY_TOLERANCE = 1e-12
# an initial state counts as even or odd below this residual
INITIAL_PARITY_TOLERANCE = 1e-12


class SymmetryReport:

    PASSED = 'passed'
    FAILED = 'failed'
    INAPPLICABLE = 'inapplicable'

    def __init__(self, check, status, max_abs_p=math.nan, max_asymmetry=math.nan,
                 n_checked=0, tolerance=math.nan, detail=''):
        self.check = check
        self.status = status
        self.max_abs_p = max_abs_p
        self.max_asymmetry = max_asymmetry
        self.n_checked = n_checked
        self.tolerance = tolerance
        self.detail = detail

    @property
    def passed(self):
        return self.status == self.PASSED

    @classmethod
    def inapplicable(cls, check, detail):
        log.info('%s inapplicable: %s' % (check, detail))
        return cls(check, cls.INAPPLICABLE, detail=detail)

    def __repr__(self):
        return 'SymmetryReport(%s: %s, max_abs_p=%.3e, max_asymmetry=%.3e, N=%d)' % (
            self.check, self.status, self.max_abs_p, self.max_asymmetry, self.n_checked)


def _initial_parity(phi0):
    even, odd = parity_residuals(phi0)
    if even <= INITIAL_PARITY_TOLERANCE:
        return 0
    if odd <= INITIAL_PARITY_TOLERANCE:
        return 1
    return None


def check_zero_current(potential, order, n_kicks, phi0=None):
    """
    Symmetric kick and symmetric or antisymmetric φ0: ⟨p⟩ stays zero and the
    parity of the state is kept at every kick.
    """
    check = 'zero current'
    if not potential.is_symmetric():
        return SymmetryReport.inapplicable(check, '%r is not symmetric' % potential)
    if phi0 is None:
        phi0 = uniform_state(GridSpec.for_kicks(potential.k, potential.a, n_kicks))
    parity = _initial_parity(phi0)
    if parity is None:
        return SymmetryReport.inapplicable(check, 'initial state is neither even nor odd')

    asymmetry = []

    def observe(n, state):
        asymmetry.append(parity_residuals(state)[parity])

    trajectory = evolve(phi0, potential, order, n_kicks, observer=observe)
    max_abs_p = float(np.max(np.abs(trajectory.p_mean())))
    max_asymmetry = float(max(asymmetry))
    passed = max_abs_p <= ZERO_CURRENT_TOLERANCE and max_asymmetry <= PARITY_TOLERANCE
    return SymmetryReport(check, SymmetryReport.PASSED if passed else SymmetryReport.FAILED,
                          max_abs_p, max_asymmetry, n_kicks, ZERO_CURRENT_TOLERANCE,
                          '%r, r/q=%s, %s initial state'
                          % (potential, order, 'odd' if parity else 'even'))


def plane_wave_phase_residual(order, L):
    """
    max_n |γ_n e^{i2πLn/q} - γ_{q-n} e^{i2πL(q-n)/q}|

    Vanishes exactly when momentum L is preserved for every symmetric kick
    and even envelope.
    """
    q = order.q
    n = np.arange(q)
    gamma = gamma_table(order).gamma
    left = gamma * np.exp(2j * np.pi * ((L * n) % q) / q)
    right = gamma[(q - n) % q] * np.exp(2j * np.pi * ((L * (q - n)) % q) / q)
    return float(np.max(np.abs(left - right)))


def check_plane_wave_invariance(L, f_even, potential, order, n_kicks):
    check = 'plane wave L=%d' % L
    if not potential.is_symmetric():
        return SymmetryReport.inapplicable(check, '%r is not symmetric' % potential)
    theta = 2 * np.pi * np.arange(4096) / 4096
    if np.max(np.abs(f_even(-theta) - f_even(theta))) > INITIAL_PARITY_TOLERANCE:
        return SymmetryReport.inapplicable(check, 'envelope is not even')
    residual = plane_wave_phase_residual(order, L)
    if residual > IDENTITY_TOLERANCE:
        return SymmetryReport.inapplicable(
            check, 'gamma phase identity fails for r/q=%s by %.3e' % (order, residual))

    grid = GridSpec.for_kicks(potential.k, potential.a, n_kicks, offset=L)
    phi0 = state_from_position_function(lambda t: np.exp(1j * L * t) * f_even(t), grid)

    asymmetry = []

    def observe(n, state):
        # the envelope e^{-iLθ}φ stays even
        shifted = np.roll(state.coeffs, -L)
        asymmetry.append(float(np.max(np.abs(shifted - shifted[::-1]))))

    trajectory = evolve(phi0, potential, order, n_kicks, observer=observe)
    deviation = float(np.max(np.abs(trajectory.p_mean() - L)))
    passed = deviation <= PLANE_WAVE_TOLERANCE
    return SymmetryReport(check, SymmetryReport.PASSED if passed else SymmetryReport.FAILED,
                          deviation, max(asymmetry), n_kicks, PLANE_WAVE_TOLERANCE,
                          '%r, r/q=%s, max |<p> - L|' % (potential, order))


def check_t4pi_growth(phi0, potential, n_kicks):
    """
    At T = 4π, φ_N = e^{-iNV}φ0 and ⟨p⟩ grows with slope -∫|φ0|²V'dθ.

    Returns the fitted slope of the simulation and the quadrature value.
    """
    order = ResonanceOrder(1, 1)
    trajectory = evolve(phi0, potential, order, n_kicks)
    measured = float(np.polyfit(trajectory.kicks().astype(float), trajectory.p_mean(), 1)[0])
    size = 4 * phi0.grid.M
    theta = 2 * np.pi * np.arange(size) / size
    density = np.abs(to_position_samples(phi0, size))**2
    closed_form = -2 * np.pi * float(np.mean(density * potential.derivative(theta)))
    return measured, closed_form


class AsymmetricCurrent:
    """
    Force curves for the real asymmetric initial state at a and at a = 0.
    """

    def __init__(self, full, baseline, perturbative):
        self.full = full
        self.baseline = baseline
        self.perturbative = perturbative

    @property
    def difference(self):
        return self.full - self.baseline

    def correlation(self):
        return float(np.corrcoef(self.difference.f, self.perturbative.f)[0, 1])

    def rms_deviation(self):
        """
        RMS of (full - baseline - perturbative) relative to max |perturbative|.
        """
        scale = np.max(np.abs(self.perturbative.f))
        error = self.difference.f - self.perturbative.f
        return float(np.sqrt(np.mean(error**2)) / scale) if scale > 0 else math.inf


def asymmetric_force(order, potential, n_kicks, state='cos_cos_sin2'):
    """
    ⟨p⟩_N / N for a builtin initial state.
    """
    grid = GridSpec.for_kicks(potential.k, potential.a, n_kicks)
    trajectory = evolve(named_state(state, grid), potential, order, n_kicks)
    return trajectory.final.f_avg


def measure_asymmetric_ic_current(order, potential, n_kicks, k_values,
                                  state='cos_cos_sin2'):
    """
    Sweep k for the asymmetric initial state and split the current into the
    part driven by the second harmonic and the a = 0 drift of the state.

    The k of `potential` is replaced by each value in k_values.
    """
    full, baseline, perturbative = [], [], []
    for k in k_values:
        kicked = potential.replace(k=k)
        full.append(asymmetric_force(order, kicked, n_kicks, state))
        baseline.append(asymmetric_force(order, kicked.replace(a=0.0), n_kicks, state))
        perturbative.append(perturbative_force(k, potential.a, potential.alpha, order))
        log.info('k=%g: f=%.6g, baseline=%.6g' % (k, full[-1], baseline[-1]))
    return AsymmetricCurrent(ForceCurve(k_values, full, 'numeric'),
                             ForceCurve(k_values, baseline, 'numeric'),
                             ForceCurve(k_values, perturbative, 'perturbative'))