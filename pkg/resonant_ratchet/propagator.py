"""
The resonant one-period map of the double-well kicked rotor
"""

import functools
import logging
import math

import numpy as np

from resonant_ratchet.state import (NORM_TOLERANCE, TailMassError,
                                    WaveFunction, cutoff_for_kicks, observables,
                                    position_multiply, translate)

log = logging.getLogger('resonant-ratchet')

# norm drift tolerated over a whole run before warning
RUN_NORM_TOLERANCE = 1e-9


class ResonanceError(ValueError):
    pass


class KickPotential:
    """
    V(θ) = k (cos θ + a cos(2θ + α))
    """

    def __init__(self, k, a=0.0, alpha=0.0):
        if k < 0 or a < 0:
            raise ValueError('kick strength and second harmonic must be non-negative,'
                             ' got k=%r, a=%r' % (k, a))
        self.k = float(k)
        self.a = float(a)
        self.alpha = float(alpha)

    def __call__(self, theta):
        return self.k * (np.cos(theta) + self.a * np.cos(2 * theta + self.alpha))

    def derivative(self, theta):
        return -self.k * (np.sin(theta) + 2 * self.a * np.sin(2 * theta + self.alpha))

    def phase_factor(self, theta):
        return np.exp(-1j * self(theta))

    def force_bound(self):
        return self.k * (1 + 2 * self.a)

    def is_symmetric(self, tolerance=1e-12, n_points=4096):
        theta = 2 * np.pi * np.arange(n_points) / n_points
        return float(np.max(np.abs(self(-theta) - self(theta)))) <= tolerance

    def replace(self, **changes):
        fields = dict(k=self.k, a=self.a, alpha=self.alpha)
        fields.update(changes)
        return KickPotential(**fields)

    def _key(self):
        return (self.k, self.a, self.alpha)

    def __eq__(self, other):
        if not isinstance(other, KickPotential):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return 'KickPotential(k=%r, a=%r, alpha=%r)' % self._key()


class ResonanceOrder:
    """
    Resonant period T = 4πr/q with coprime r and q.
    """

    def __init__(self, r, q):
        if int(r) != r or int(q) != q or r < 1 or q < 1:
            raise ResonanceError('r and q must be positive integers, got %r/%r' % (r, q))
        r, q = int(r), int(q)
        if math.gcd(r, q) != 1:
            raise ResonanceError('r=%d and q=%d are not coprime' % (r, q))
        self.r = r
        self.q = q

    @property
    def period(self):
        return 4 * math.pi * self.r / self.q

    def free_phases(self, momenta):
        """
        e^{-i2πrm²/q}, with rm² reduced mod q in integers.
        """
        momenta = np.asarray(momenta, dtype=np.int64)
        residues = (self.r * (momenta * momenta % self.q)) % self.q
        return np.exp(-2j * np.pi * residues / self.q)

    def __eq__(self, other):
        if not isinstance(other, ResonanceOrder):
            return NotImplemented
        return (self.r, self.q) == (other.r, other.q)

    def __hash__(self):
        return hash((self.r, self.q))

    def __str__(self):
        return '%d/%d' % (self.r, self.q)

    def __repr__(self):
        return 'ResonanceOrder(%d, %d)' % (self.r, self.q)


def gauss_sum(order, n):
    """
    γ_n = Σ_{m=0}^{q-1} exp(-i2πrm²/q - i2πmn/q) by direct summation.
    """
    q = order.q
    m = np.arange(q, dtype=np.int64)
    residues = (order.r * m * m + m * n) % q
    return complex(np.sum(np.exp(-2j * np.pi * residues / q)))


class GammaTable:

    def __init__(self, order, gamma):
        self.order = order
        self.gamma = np.array(gamma, dtype=complex)
        self.gamma.flags.writeable = False

    def __getitem__(self, n):
        return self.gamma[n % self.order.q]

    def __len__(self):
        return len(self.gamma)

    def identity_residuals(self):
        """
        Worst violation of each Gauss-sum identity, keyed by name.
        """
        q = self.order.q
        n = np.arange(q)
        m = np.arange(q, dtype=np.int64)
        residues = (self.order.r * m * m + np.outer(n, m)) % q
        # n -> n + q multiplies each term by e^{-i2πm}, kept out of the integer reduction
        shifted = np.exp(-2j * np.pi * residues / q) @ np.exp(-2j * np.pi * m)
        residuals = {
            'periodicity': float(np.max(np.abs(shifted - self.gamma))),
            'reflection': float(np.max(np.abs(self.gamma - self.gamma[(q - n) % q]))),
            'sum': abs(complex(np.sum(self.gamma)) - q),
        }
        if q % 2 == 1:
            residuals['modulus'] = float(np.max(np.abs(np.abs(self.gamma) - math.sqrt(q))))
        return residuals

    def __repr__(self):
        return 'GammaTable(%s, %s)' % (self.order, np.array2string(self.gamma, precision=6))


@functools.lru_cache(maxsize=128)
def gamma_table(order):
    return GammaTable(order, [gauss_sum(order, n) for n in range(order.q)])


@functools.lru_cache(maxsize=16)
def _free_phases(order, grid):
    phases = order.free_phases(grid.momenta())
    phases.flags.writeable = False
    return phases


@functools.lru_cache(maxsize=16)
def _kick_factor(potential, grid):
    factor = potential.phase_factor(grid.angles())
    factor.flags.writeable = False
    return factor


def resonant_free_step(phi, order, method='phase'):
    """
    Free evolution over one resonant period.

    The 'phase' method multiplies c_m by e^{-i2πrm²/q}. The 'gauss' method
    forms (1/q) Σ_n γ_n φ(θ + 2πn/q); both are the same operator.
    """
    if method == 'phase':
        return WaveFunction(phi.coeffs * _free_phases(order, phi.grid), phi.grid)
    if method == 'gauss':
        gamma = gamma_table(order)
        coeffs = np.zeros(phi.grid.size, dtype=complex)
        for n in range(order.q):
            coeffs += gamma[n] * translate(phi, 2 * np.pi * n / order.q).coeffs
        return WaveFunction(coeffs / order.q, phi.grid)
    raise ValueError('unknown free step method %r' % method)


def kick_step(phi, potential):
    return position_multiply(phi, _kick_factor(potential, phi.grid)).check_tail()


def period_map(phi, potential, order):
    """
    One period: free evolution first, then the kick.
    """
    return kick_step(resonant_free_step(phi, order), potential)


def split_step_oracle(phi, potential, order):
    """
    One period with the generic free propagator e^{-iTm²/2} in floating point.
    """
    momenta = phi.grid.momenta().astype(float)
    free = np.exp(-0.5j * order.period * momenta**2)
    return kick_step(WaveFunction(phi.coeffs * free, phi.grid), potential)


class Record:

    def __init__(self, observables, tail_mass):
        self.observables = observables
        self.tail_mass = tail_mass

    @property
    def n_kicks(self):
        return self.observables.n_kicks

    def __repr__(self):
        return 'Record(%r, tail_mass=%.3e)' % (self.observables, self.tail_mass)


class Trajectory:
    """
    Observables after every kick, starting with the initial state at N=0.
    """

    def __init__(self, potential, order):
        self.potential = potential
        self.order = order
        self.records = []
        self.final_state = None

    def append(self, phi, n_kicks):
        if self.records and n_kicks <= self.records[-1].n_kicks:
            raise ValueError('kick index %d does not increase' % n_kicks)
        record = Record(observables(phi, n_kicks), phi.tail_mass())
        self.records.append(record)
        self.final_state = phi
        return record

    def __len__(self):
        return len(self.records)

    def kicks(self):
        return np.array([r.n_kicks for r in self.records])

    def p_mean(self):
        return np.array([r.observables.p_mean for r in self.records])

    def p_second(self):
        return np.array([r.observables.p_second for r in self.records])

    def norms(self):
        return np.array([r.observables.norm for r in self.records])

    @property
    def final(self):
        return self.records[-1].observables

    def slope(self, start=0):
        """
        Least-squares slope of ⟨p⟩ against N over records with N >= start,
        and the RMS residual relative to |slope·N_max|.
        """
        kicks = self.kicks()
        selected = kicks >= start
        x, y = kicks[selected].astype(float), self.p_mean()[selected]
        (slope, offset), residuals, *_ = np.polyfit(x, y, 1, full=True)
        scale = abs(slope) * x[-1]
        residual = math.sqrt(residuals[0] / len(x)) if len(residuals) else 0.0
        return slope, (residual / scale if scale > 0 else math.inf)


def evolve(phi0, potential, order, n_kicks, observer=None):
    """
    Apply period_map n_kicks times and record observables after each kick.

    observer, if given, is called as observer(n, state) for every state
    including the initial one. On a tail-mass abort the partial trajectory is
    attached to the raised TailMassError.
    """
    if n_kicks < 1:
        raise ValueError('need at least one kick, got %d' % n_kicks)
    recommended = cutoff_for_kicks(potential.k, potential.a, n_kicks)
    if phi0.grid.m_max < recommended:
        log.info('m_max=%d is below the recommended %d for %d kicks'
                 % (phi0.grid.m_max, recommended, n_kicks))

    trajectory = Trajectory(potential, order)
    state = phi0
    trajectory.append(state, 0)
    if observer is not None:
        observer(0, state)
    for n in range(1, n_kicks + 1):
        try:
            state = period_map(state, potential, order)
        except TailMassError as e:
            log.error('Evolution aborted at kick %d: %s' % (n, e))
            e.trajectory = trajectory
            raise
        record = trajectory.append(state, n)
        log.debug('kick %d: %r' % (n, record))
        if observer is not None:
            observer(n, state)

    drift = np.max(np.abs(trajectory.norms() - trajectory.norms()[0]))
    if drift > RUN_NORM_TOLERANCE:
        log.warning('norm drifted by %.3e over %d kicks' % (drift, n_kicks))
    elif drift > NORM_TOLERANCE * n_kicks:
        log.info('norm drift %.3e over %d kicks' % (drift, n_kicks))
    return trajectory
