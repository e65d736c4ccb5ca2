"""
Quasienergy bands of the resonant map and the exact asymptotic current

At resonance one period only couples the q copies φ(θ + 2πj/q), so the map
acts on Φ(θ) = (φ(θ + 2πj/q))_j through a q×q unitary matrix M(θ). Writing
M(θ) = Σ_s e^{iλ_s(θ)} |v_s⟩⟨v_s|, ⟨p⟩ grows as N Σ_s ∫ λ_s' |⟨v_s|Φ_0⟩|² dθ
plus a bounded oscillating part.
"""

import logging

import numpy as np
import scipy.linalg

from resonant_ratchet.propagator import gamma_table
from resonant_ratchet.state import SQRT_2PI, to_position_samples

log = logging.getLogger('resonant-ratchet')


def _copy_shifts(order):
    return 2 * np.pi * np.arange(order.q) / order.q


def _coupling(order):
    # G[j, n] = γ_{(n - j) mod q} / q
    q = order.q
    j = np.arange(q)
    return gamma_table(order).gamma[(j[None, :] - j[:, None]) % q] / q


def floquet_matrices(potential, order, theta):
    """
    Stack of M(θ) = diag(e^{-iV(θ + 2πj/q)}) G for every θ.
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    kicks = potential.phase_factor(theta[:, None] + _copy_shifts(order)[None, :])
    return kicks[:, :, None] * _coupling(order)[None, :, :]


def band_velocities(potential, order, theta):
    """
    Eigenvectors of M(θ) (columns, from a complex Schur form) and the band
    slopes λ_s'(θ) = -Σ_j |v_sj|² V'(θ + 2πj/q).
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    matrices = floquet_matrices(potential, order, theta)
    vectors = np.empty_like(matrices)
    for i, matrix in enumerate(matrices):
        _, vectors[i] = scipy.linalg.schur(matrix, output='complex')
    forces = potential.derivative(theta[:, None] + _copy_shifts(order)[None, :])
    velocities = -np.einsum('nj,njs->ns', forces, np.abs(vectors)**2)
    return vectors, velocities


def _copies(phi0, order, n_theta):
    # Φ_0[i, j] = φ0(θ_i + 2πj/q) with θ_i = 2πi/(q n_theta)
    q = order.q
    if phi0 is None:
        return np.full((n_theta, q), 1 / SQRT_2PI, dtype=complex)
    samples = to_position_samples(phi0, q * n_theta)
    return samples.reshape(q, n_theta).T


def band_force(potential, order, phi0=None, n_theta=512):
    """
    Long-time average force f = lim ⟨p⟩_N / N for the initial state phi0
    (uniform when None).
    """
    q = order.q
    if phi0 is not None:
        # the samples must resolve every retained mode
        n_theta = max(n_theta, -(-phi0.grid.size // q))
    theta = 2 * np.pi * np.arange(n_theta) / (q * n_theta)
    vectors, velocities = band_velocities(potential, order, theta)
    overlaps = np.einsum('njs,nj->ns', vectors.conj(), _copies(phi0, order, n_theta))
    integrand = np.sum(velocities * np.abs(overlaps)**2, axis=1)
    force = 2 * np.pi / q * float(np.mean(integrand))
    log.debug('band force %r at %s: %.12g' % (potential, order, force))
    return force
