"""
Wavefunctions on the torus in the momentum basis
"""

import logging
import math

import numpy as np
from scipy import fft

from resonant_ratchet.misc import next_power_of_two

log = logging.getLogger('resonant-ratchet')

SQRT_2PI = math.sqrt(2 * math.pi)

NORM_TOLERANCE = 1e-12
TAIL_TOLERANCE = 1e-10
# modes above this fraction of the cutoff count as tail
TAIL_FRACTION = 0.9


class GridError(ValueError):
    pass


class TailMassError(RuntimeError):
    """
    Raised when probability reaches the edge of the momentum grid.

    When raised by an evolution the trajectory recorded up to the failing
    kick is attached as `trajectory`.
    """

    def __init__(self, tail_mass, message=None, trajectory=None):
        if message is None:
            message = 'tail mass %.3e exceeds %.0e, momentum cutoff too small' % (
                tail_mass, TAIL_TOLERANCE)
        super().__init__(message)
        self.tail_mass = tail_mass
        self.trajectory = trajectory


def cutoff_for_kicks(k, a, n_kicks):
    return math.ceil(4 * k * (1 + 2 * a) * (n_kicks + 1)) + 64


class GridSpec:
    """
    Momentum cutoff m_max and the size M of the position grid used for kicks.
    """

    def __init__(self, m_max, M=None):
        m_max = int(m_max)
        if m_max < 1:
            raise GridError('m_max must be at least 1, got %d' % m_max)
        if M is None:
            M = next_power_of_two(2 * m_max + 1)
        M = int(M)
        if M < 2 * m_max + 1:
            raise GridError('position grid of %d points aliases %d momentum modes'
                            % (M, 2 * m_max + 1))
        self.m_max = m_max
        self.M = M

    @classmethod
    def for_kicks(cls, k, a, n_kicks, m_max=None, offset=0):
        """
        Grid large enough for n_kicks kicks of strength k and second harmonic a.

        Resonant spreading is ballistic, so the cutoff grows linearly with the
        number of kicks at the largest rate the force k(1 + 2a) allows. The
        kick grid leaves room for the Bessel band of e^{-iV} on top of it.
        `offset` widens the default cutoff for states centred at momentum
        ±offset; an explicit m_max is taken as given.
        """
        if m_max is None:
            m_max = cutoff_for_kicks(k, a, n_kicks) + abs(offset)
        kick_band = math.ceil(k) + math.ceil(2 * k * a) + 32
        M = next_power_of_two(max(2 * m_max + 1 + kick_band, 4 * kick_band))
        log.info('Grid for %d kicks at k=%g, a=%g: m_max=%d, M=%d'
                 % (n_kicks, k, a, m_max, M))
        return cls(m_max, M)

    @property
    def size(self):
        return 2 * self.m_max + 1

    def momenta(self):
        return np.arange(-self.m_max, self.m_max + 1)

    def angles(self, size=None):
        size = self.M if size is None else size
        return 2 * np.pi * np.arange(size) / size

    def __eq__(self, other):
        if not isinstance(other, GridSpec):
            return NotImplemented
        return self.m_max == other.m_max and self.M == other.M

    def __hash__(self):
        return hash((self.m_max, self.M))

    def __repr__(self):
        return 'GridSpec(m_max=%d, M=%d)' % (self.m_max, self.M)


class WaveFunction:
    """
    Coefficients c_m of e^{imθ}/√(2π) for m in [-m_max, m_max].

    coeffs[i] holds c_m with m = i - m_max. The array is read-only, every
    operation returns a new WaveFunction.
    """

    def __init__(self, coeffs, grid):
        coeffs = np.array(coeffs, dtype=complex)
        if coeffs.shape != (grid.size,):
            raise GridError('expected %d coefficients for %r, got shape %s'
                            % (grid.size, grid, coeffs.shape))
        coeffs.flags.writeable = False
        self.coeffs = coeffs
        self.grid = grid

    def coefficient(self, m):
        if abs(m) > self.grid.m_max:
            return 0j
        return self.coeffs[m + self.grid.m_max]

    def norm(self):
        return float(np.sum(np.abs(self.coeffs)**2))

    def tail_mass(self):
        edge = np.abs(self.grid.momenta()) > TAIL_FRACTION * self.grid.m_max
        return float(np.sum(np.abs(self.coeffs[edge])**2))

    def is_valid(self):
        return self.tail_mass() <= TAIL_TOLERANCE

    def check_tail(self):
        tail = self.tail_mass()
        if tail > TAIL_TOLERANCE:
            raise TailMassError(tail)
        return self

    def __repr__(self):
        return 'WaveFunction(%r, norm=%.15g)' % (self.grid, self.norm())


class Observables:

    def __init__(self, p_mean, p_second, norm, n_kicks=0):
        self.p_mean = p_mean
        self.p_second = p_second
        self.norm = norm
        self.n_kicks = n_kicks

    @property
    def f_avg(self):
        if self.n_kicks < 1:
            return None
        return self.p_mean / self.n_kicks

    @property
    def variance(self):
        return self.p_second - self.p_mean**2

    def __repr__(self):
        return 'Observables(N=%d, p_mean=%.6g, p_second=%.6g, norm=%.15g)' % (
            self.n_kicks, self.p_mean, self.p_second, self.norm)


def uniform_state(grid):
    return plane_wave_state(0, grid)


def plane_wave_state(L, grid):
    if abs(L) > grid.m_max:
        raise GridError('plane wave L=%d outside the grid |m| <= %d' % (L, grid.m_max))
    coeffs = np.zeros(grid.size, dtype=complex)
    coeffs[L + grid.m_max] = 1
    return WaveFunction(coeffs, grid)


def random_state(grid, width, rng):
    """
    Normalized state with random complex amplitudes on |m| <= width.
    """
    if width > grid.m_max:
        raise GridError('random band %d wider than the grid' % width)
    coeffs = np.zeros(grid.size, dtype=complex)
    band = slice(grid.m_max - width, grid.m_max + width + 1)
    amplitudes = rng.normal(size=2 * width + 1) + 1j * rng.normal(size=2 * width + 1)
    coeffs[band] = amplitudes / np.linalg.norm(amplitudes)
    return WaveFunction(coeffs, grid)


def to_position_samples(phi, size=None):
    """
    Values φ(θ_j) on the uniform grid θ_j = 2πj/size (size defaults to M).
    """
    grid = phi.grid
    size = grid.M if size is None else int(size)
    if size < grid.size:
        raise GridError('%d samples alias %d momentum modes' % (size, grid.size))
    spectrum = np.zeros(size, dtype=complex)
    spectrum[grid.momenta() % size] = phi.coeffs
    return fft.ifft(spectrum) * (size / SQRT_2PI)


def _spectrum(samples):
    size = len(samples)
    return fft.fft(samples) * (SQRT_2PI / size)


def from_position_samples(samples, grid):
    """
    Inverse of to_position_samples, keeping only |m| <= m_max.
    """
    samples = np.asarray(samples, dtype=complex)
    if len(samples) < grid.size:
        raise GridError('%d samples alias %d momentum modes' % (len(samples), grid.size))
    spectrum = _spectrum(samples)
    return WaveFunction(spectrum[grid.momenta() % len(samples)], grid)


def state_from_position_function(sampler, grid):
    """
    Normalized state from a function of θ sampled on the M-point grid.

    The sampler is called once with the whole array of angles.
    """
    theta = grid.angles()
    values = np.broadcast_to(np.asarray(sampler(theta), dtype=complex), theta.shape)
    if not np.all(np.isfinite(values)):
        raise GridError('sampler returned non-finite values')
    spectrum = _spectrum(values)
    total = np.sum(np.abs(spectrum)**2)
    if total == 0:
        raise GridError('sampler has zero norm')

    coeffs = spectrum[grid.momenta() % grid.M]
    kept = np.sum(np.abs(coeffs)**2)
    inner = np.abs(grid.momenta()) <= TAIL_FRACTION * grid.m_max
    tail = (total - np.sum(np.abs(coeffs[inner])**2)) / total
    if tail > TAIL_TOLERANCE:
        raise TailMassError(tail, 'sampler is not band-limited for %r: tail mass %.3e'
                            % (grid, tail))
    return WaveFunction(coeffs / math.sqrt(kept), grid)


def position_multiply(phi, g, unitary=True):
    """
    Multiply φ(θ) by g(θ) on the kick grid and transform back.

    g is either a function of θ or its values on the M-point grid. On the
    unitary path g must be unimodular.
    """
    grid = phi.grid
    values = g(grid.angles()) if callable(g) else g
    values = np.broadcast_to(np.asarray(values, dtype=complex), (grid.M,))
    if unitary and np.max(np.abs(np.abs(values) - 1)) > NORM_TOLERANCE:
        raise GridError('multiplier is not unimodular')
    return from_position_samples(to_position_samples(phi) * values, grid)


def translate(phi, s):
    """
    φ(θ) -> φ(θ + s), exact for any angle s.
    """
    return WaveFunction(phi.coeffs * np.exp(1j * phi.grid.momenta() * s), phi.grid)


def parity_reflect(phi):
    return WaveFunction(phi.coeffs[::-1], phi.grid)


def parity_residuals(phi):
    """
    (even, odd) residuals max|c_m - c_{-m}| and max|c_m + c_{-m}|.
    """
    reflected = phi.coeffs[::-1]
    return (float(np.max(np.abs(phi.coeffs - reflected))),
            float(np.max(np.abs(phi.coeffs + reflected))))


def observables(phi, n_kicks=0):
    if n_kicks < 0:
        raise ValueError('kick count must be non-negative, got %d' % n_kicks)
    probability = np.abs(phi.coeffs)**2
    momenta = phi.grid.momenta()
    return Observables(p_mean=float(np.sum(momenta * probability)),
                       p_second=float(np.sum(momenta**2 * probability)),
                       norm=float(np.sum(probability)),
                       n_kicks=n_kicks)


def directionality_ratio(phi):
    """
    ⟨p⟩ / √(⟨p²⟩ - ⟨p⟩²)
    """
    obs = observables(phi)
    variance = obs.variance
    if variance <= NORM_TOLERANCE * max(1.0, obs.p_second):
        raise ValueError('momentum variance vanishes, directionality is undefined')
    return obs.p_mean / math.sqrt(variance)


BUILTIN_STATES = {
    # real but not parity symmetric
    'cos_cos_sin2': lambda theta: np.cos(np.cos(theta) + np.sin(2 * theta)),
    'sin': np.sin,
    'tilted': lambda theta: 1 + 0.5j * np.exp(1j * theta),
}


def named_state(name, grid):
    try:
        sampler = BUILTIN_STATES[name]
    except KeyError:
        raise GridError('unknown builtin state %r, expected one of: %s'
                        % (name, ', '.join(sorted(BUILTIN_STATES)))) from None
    return state_from_position_function(sampler, grid)
