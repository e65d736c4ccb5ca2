"""
Small-a theory of the ratchet current
"""

import logging
import math

import numpy as np
import scipy.optimize
import scipy.special

from resonant_ratchet.bands import band_force
from resonant_ratchet.misc import coprime_orders
from resonant_ratchet.propagator import KickPotential, ResonanceOrder, gamma_table

log = logging.getLogger('resonant-ratchet')

# above this k·a the first-order theory is not trusted
REGIME_LIMIT = 0.3
# asymptotic forms need k·Ω_min at least this large
ASYMPTOTIC_LIMIT = 10.0
# central-difference step in a for the linear response
RESPONSE_STEP = 1e-4

# weights of k J1(√3k) and J2(√3k) in the closed form for r/q = 1/3
Q3_J1_WEIGHT = 1 / math.sqrt(3) - 1
Q3_J2_WEIGHT = 2 / 3 * (1 + math.sqrt(3))

METHODS = ('numeric', 'band', 'perturbative', 'analytic_q3', 'asymptotic')


class ImaginaryResidualError(ArithmeticError):
    pass


def in_regime(k, a):
    return k * a <= REGIME_LIMIT


def bessel_j(order, x):
    if int(order) != order or not 0 <= order <= 10:
        raise ValueError('Bessel order must be an integer in [0, 10], got %r' % order)
    if np.any(np.asarray(x) < 0):
        raise ValueError('Bessel argument must be non-negative')
    return scipy.special.jv(order, x)


class PairGeometry:
    """
    Chord between the points 2πm/q and 2πn/q of the unit circle.
    """

    def __init__(self, m, n, q):
        if not (0 <= m < q and 0 <= n < q):
            raise ValueError('pair (%d, %d) outside [0, %d)' % (m, n, q))
        self.m = m
        self.n = n
        self.q = q
        self.mu = math.cos(2 * math.pi * n / q) - math.cos(2 * math.pi * m / q)
        self.nu = math.sin(2 * math.pi * n / q) - math.sin(2 * math.pi * m / q)
        if m == n:
            self.mu = self.nu = 0.0
        self.Omega = math.hypot(self.mu, self.nu)
        self.omega = math.atan2(self.nu, self.mu) if self.Omega > 0 else 0.0

    def __repr__(self):
        return 'PairGeometry(m=%d, n=%d, q=%d, Omega=%.12g, omega=%.12g)' % (
            self.m, self.n, self.q, self.Omega, self.omega)


def pair_geometry(m, n, q):
    return PairGeometry(m, n, q)


def L_term(m, n, k, a, alpha, order):
    """
    Per-kick contribution of the pair (m, n) to the current in the
    two-harmonic expansion, Bessel functions taken at Ω_{m,n} k.
    """
    geometry = pair_geometry(m, n, order.q)
    Omega, omega = geometry.Omega, geometry.omega
    if Omega == 0 or a == 0:
        return 0j
    x = Omega * k
    j1, j2 = bessel_j(1, x), bessel_j(2, x)
    angle_n = 2 * math.pi * n / order.q
    angle_m = 2 * math.pi * m / order.q
    second_n = 2 * angle_n + alpha - 2 * omega
    second_m = 2 * angle_m + alpha - 2 * omega
    cos_diff = math.cos(second_n) - math.cos(second_m)
    sin_diff = math.sin(second_n) - math.sin(second_m)
    bracket = (math.sin(angle_n - omega) * cos_diff * (k * j1 - 2 * j2 / Omega)
               - math.cos(angle_n - omega) * sin_diff * 2 * j2 / Omega
               - 2 * math.sin(second_n) * j2)
    gamma = gamma_table(order)
    return k * a * np.conj(gamma[m]) * gamma[n] * bracket / order.q**2


def _pair_terms(k, a, alpha, order):
    q = order.q
    return [L_term(m, n, k, a, alpha, order) for m in range(q) for n in range(q)]


def pair_cancellation(k, a, alpha, order):
    """
    |Σ L| / Σ |L|, or 0 when every term vanishes.
    """
    terms = _pair_terms(k, a, alpha, order)
    scale = sum(abs(t) for t in terms)
    return abs(sum(terms)) / scale if scale > 0 else 0.0


def pair_sum(k, a, alpha, order, real=False):
    """
    Σ_{m,n} L_{m,n}. Each term depends on (m, n) only through n - m and
    Σ_m γ*_m γ_{m+d} = q² δ_{d,0}, so the sum cancels to rounding.

    With real=True the imaginary part is checked against the absolute size of
    the terms and the real part returned.
    """
    terms = _pair_terms(k, a, alpha, order)
    total = complex(sum(terms))
    if not real:
        return total
    scale = sum(abs(t) for t in terms)
    if abs(total.imag) > 1e-10 * max(abs(total), scale):
        raise ImaginaryResidualError('pair sum has imaginary part %.3e (scale %.3e)'
                                     % (total.imag, scale))
    return total.real


def perturbative_force(k, a, alpha, order, n_theta=512):
    """
    First-order current in a: a times the slope of the band force at a = 0.
    """
    if not in_regime(k, a):
        log.warning('k*a = %g is outside the perturbative regime (> %g)'
                    % (k * a, REGIME_LIMIT))
    if a == 0 or k == 0:
        return 0.0
    plus = band_force(KickPotential(k, RESPONSE_STEP, alpha), order, n_theta=n_theta)
    # a -> -a is the same as alpha -> alpha + π
    minus = band_force(KickPotential(k, RESPONSE_STEP, alpha + math.pi), order,
                       n_theta=n_theta)
    return a * (plus - minus) / (2 * RESPONSE_STEP)


def reversal_bracket_q3(k):
    """
    The k-dependent factor of the r/q = 1/3 closed form, divided by k.
    """
    x = math.sqrt(3) * np.asarray(k, dtype=float)
    return Q3_J1_WEIGHT * k * bessel_j(1, x) + Q3_J2_WEIGHT * bessel_j(2, x)


def analytic_force_q3(k, a, alpha):
    return k * a * math.sin(alpha) * reversal_bracket_q3(k)


def reversal_points_q3(a, alpha, k_max, step=0.01):
    """
    Zeros of analytic_force_q3 in (0, k_max], the predicted current reversals.
    """
    if a <= 0 or abs(math.sin(alpha)) < 1e-15 or k_max <= 0:
        raise ValueError('reversals need a > 0, sin(alpha) != 0 and k_max > 0')
    grid = np.arange(1, int(math.floor(k_max / step)) + 1) * step
    values = reversal_bracket_q3(grid)
    zeros = []
    for i in range(len(grid) - 1):
        lo, hi = values[i], values[i + 1]
        if lo == 0:
            zeros.append(grid[i])
        elif lo * hi < 0:
            zeros.append(scipy.optimize.bisect(reversal_bracket_q3, grid[i], grid[i + 1],
                                               xtol=1e-8))
    if len(grid) and values[-1] == 0:
        zeros.append(grid[-1])
    return np.array(zeros)


def _asymptotic_constants(a, alpha):
    # match the large-argument Bessel form of the closed form at q = 3,
    # where all six ordered pairs share Ω = √3
    scale = a * math.sin(alpha) * math.sqrt(2 / math.pi) / 6
    return Q3_J1_WEIGHT * scale, Q3_J2_WEIGHT * scale


def asymptotic_force(k, a, alpha, order):
    k = np.asarray(k, dtype=float)
    q = order.q
    if q > 1 and np.any(k * 2 * math.sin(math.pi / q) < ASYMPTOTIC_LIMIT):
        log.warning('asymptotic form used below k*Omega_min = %g' % ASYMPTOTIC_LIMIT)
    A, B = _asymptotic_constants(a, alpha)
    force = np.zeros_like(k)
    for m in range(q):
        for n in range(q):
            Omega = pair_geometry(m, n, q).Omega
            if Omega == 0:
                continue
            force = force + (A * np.sqrt(k**3 / Omega) * np.cos(Omega * k - 3 * math.pi / 4)
                             + B * np.sqrt(k / Omega) * np.cos(Omega * k - 5 * math.pi / 4))
    return force


class PeakScaling:

    def __init__(self, k, peaks, exponent, coefficients, residual):
        self.k = k
        self.peaks = peaks
        self.exponent = exponent
        self.coefficients = coefficients
        self.residual = residual

    def __repr__(self):
        return 'PeakScaling(%d peaks, exponent=%.4f, residual=%.4f)' % (
            len(self.k), self.exponent, self.residual)


def peak_scaling(k_lo=15.0, k_hi=40.0, a=0.01, alpha=math.pi / 3, step=0.005):
    """
    Log-log slope of the local maxima of |analytic_force_q3| in [k_lo, k_hi],
    and the relative residual of a fit A k^{3/2} + B k^{1/2} to them.
    """
    k = np.arange(k_lo, k_hi + step / 2, step)
    magnitude = np.abs(analytic_force_q3(k, a, alpha))
    interior = (magnitude[1:-1] > magnitude[:-2]) & (magnitude[1:-1] >= magnitude[2:])
    index = np.nonzero(interior)[0] + 1
    k_peak, peaks = k[index], magnitude[index]
    if len(peaks) < 2:
        raise ValueError('fewer than two peaks in [%g, %g]' % (k_lo, k_hi))
    exponent = float(np.polyfit(np.log(k_peak), np.log(peaks), 1)[0])
    basis = np.column_stack([k_peak**1.5, k_peak**0.5])
    coefficients, *_ = np.linalg.lstsq(basis, peaks, rcond=None)
    residual = float(np.linalg.norm(basis @ coefficients - peaks) / np.linalg.norm(peaks))
    return PeakScaling(k_peak, peaks, exponent, coefficients, residual)


def period_scan(k, a, alpha, q_max):
    """
    Band force for every coprime r/q with q <= q_max, as (r, q, force) rows.
    """
    potential = KickPotential(k, a, alpha)
    rows = []
    for r, q in coprime_orders(q_max):
        force = band_force(potential, ResonanceOrder(r, q))
        log.info('r/q = %d/%d: f = %.6g' % (r, q, force))
        rows.append((r, q, force))
    return rows


class ForceCurve:
    """
    ⟨f⟩ against k obtained by one method.
    """

    def __init__(self, k, f, method):
        k = np.asarray(k, dtype=float)
        f = np.asarray(f, dtype=float)
        if k.shape != f.shape:
            raise ValueError('k and f differ in length: %d != %d' % (len(k), len(f)))
        if np.any(np.diff(k) <= 0):
            raise ValueError('k values must be strictly increasing')
        if method not in METHODS:
            raise ValueError('unknown force method %r' % method)
        self.k = k
        self.f = f
        self.method = method

    def __sub__(self, other):
        if not np.array_equal(self.k, other.k):
            raise ValueError('force curves sampled at different k')
        return ForceCurve(self.k, self.f - other.f, self.method)

    def sign_changes(self):
        """
        k midway between samples where f changes sign.
        """
        sign = np.sign(self.f)
        change = sign[:-1] * sign[1:] < 0
        return (self.k[:-1][change] + self.k[1:][change]) / 2

    def __repr__(self):
        return 'ForceCurve(%s, %d points in [%g, %g])' % (
            self.method, len(self.k), self.k[0], self.k[-1])


def force_curve(method, k_values, a, alpha, order):
    """
    Curve for one of the analytic methods on the given k grid.
    """
    k_values = np.asarray(k_values, dtype=float)
    if method == 'analytic_q3':
        if order != ResonanceOrder(1, 3):
            raise ValueError('the closed form only holds for r/q = 1/3')
        f = analytic_force_q3(k_values, a, alpha)
    elif method == 'asymptotic':
        f = asymptotic_force(k_values, a, alpha, order)
    elif method == 'perturbative':
        f = [perturbative_force(k, a, alpha, order) for k in k_values]
    elif method == 'band':
        f = [band_force(KickPotential(k, a, alpha), order) for k in k_values]
    else:
        raise ValueError('%r curves come from simulation, not from theory' % method)
    return ForceCurve(k_values, f, method)
