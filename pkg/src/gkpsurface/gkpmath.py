"""Scalar math primitives for GKP-encoded qubits.

Everything here works in quadrature units with hbar = 1, so the logical
shift unit is sqrt(pi) and the stabilizer period is 2*sqrt(pi).  A Pauli
error on a GKP qubit corresponds to the measured shift landing in an
"odd" bin of width sqrt(pi), i.e. closer to an odd multiple of sqrt(pi)
than to an even one.
"""

from __future__ import annotations

import math

import numpy as np

SQRT_PI = math.sqrt(math.pi)

# Lattice sums are truncated once additional terms fall below this
# fraction of the running total (double precision floor with margin).
_TRUNCATION_EPS = 1e-18

# Probabilities are clamped here before taking -log2 for edge weights.
MIN_PROBABILITY = 1e-30


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


def centered_mod(z: float, period: float) -> float:
    """Reduce ``z`` to the centered interval [-period/2, period/2).

    This is the symmetric remainder z - period*floor(z/period + 1/2).
    """
    z = _require_finite("z", z)
    period = _require_finite("period", period)
    if period <= 0:
        raise ValueError(f"period must be positive, got {period}")
    return z - period * math.floor(z / period + 0.5)


def centered_mod_array(z: np.ndarray, period: float) -> np.ndarray:
    """Vectorized :func:`centered_mod`."""
    z = np.asarray(z, dtype=float)
    return z - period * np.floor(z / period + 0.5)


def pauli_error_prob(sigma: float) -> float:
    """Probability that a N(0, sigma) shift is misidentified as a Pauli flip.

    The shift causes a flip when it lands within sqrt(pi)/2 of an odd
    multiple of sqrt(pi).  Evaluated as a sum of Gaussian-tail (erfc)
    differences over the odd bins; always in [0, 1/2).
    """
    sigma = _require_finite("sigma", sigma)
    if sigma < 0:
        raise ValueError(f"sigma must be non-negative, got {sigma}")
    if sigma == 0.0:
        return 0.0
    inv = 1.0 / (sigma * math.sqrt(2.0))
    total = 0.0
    n = 0
    while True:
        lo = (2 * n + 0.5) * SQRT_PI * inv
        hi = (2 * n + 1.5) * SQRT_PI * inv
        # Mass of the two mirror-image odd bins at +-(2n+1)*sqrt(pi).
        term = math.erfc(lo) - math.erfc(hi)
        total += term
        n += 1
        if term < _TRUNCATION_EPS * max(total, 1e-300) and n > 2:
            break
        if n > 100000:  # pragma: no cover - unreachable for finite sigma
            break
    return min(total, 0.5)


def pauli_error_prob_asymptotic(sigma: float) -> float:
    """Small-sigma asymptote of :func:`pauli_error_prob`.

    sqrt(8*sigma^2)/pi * exp(-pi/(8*sigma^2)); the ratio to the exact
    probability tends to 1 as sigma decreases.
    """
    sigma = _require_finite("sigma", sigma)
    if sigma < 0:
        raise ValueError(f"sigma must be non-negative, got {sigma}")
    if sigma == 0.0:
        return 0.0
    return (math.sqrt(8.0) * sigma / math.pi) * math.exp(-math.pi / (8.0 * sigma * sigma))


def _lattice_reach(sigma: float) -> int:
    # Lattice points farther than ~9.2 sigma from z contribute < 1e-18
    # relative to the dominant term.
    return max(2, int(math.ceil((0.5 * SQRT_PI + 9.2 * sigma) / SQRT_PI)) + 1)


def conditional_error_prob(sigma: float, z: float) -> float:
    """Probability of a Pauli flip given the measured residue ``z``.

    ``z`` is the homodyne outcome reduced to [-sqrt(pi)/2, sqrt(pi)/2).
    Ratio of the Gaussian lattice sum over odd multiples of sqrt(pi) to
    the sum over all multiples; 1/2 exactly at the decision boundary
    |z| = sqrt(pi)/2.
    """
    sigma = _require_finite("sigma", sigma)
    z = _require_finite("z", z)
    if sigma < 0:
        raise ValueError(f"sigma must be non-negative, got {sigma}")
    if sigma == 0.0:
        if z == 0.0:
            return 0.0
        raise ValueError("conditional probability is degenerate for sigma=0 and z != 0")
    return float(conditional_error_prob_array(sigma, np.array([z]))[0])


def conditional_error_prob_array(sigma: float, z: np.ndarray) -> np.ndarray:
    """Vectorized :func:`conditional_error_prob` for a fixed sigma."""
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    z = np.atleast_1d(np.asarray(z, dtype=float))
    reach = _lattice_reach(sigma)
    offsets = np.arange(-reach, reach + 1, dtype=float) * SQRT_PI
    # exponents[i, j] = -(z_i - j*sqrt(pi))^2 / (2 sigma^2), stabilized
    # against underflow by subtracting the row-wise maximum.
    expo = -((z[:, None] - offsets[None, :]) ** 2) / (2.0 * sigma * sigma)
    expo -= expo.max(axis=1, keepdims=True)
    weights = np.exp(expo)
    odd = (np.arange(-reach, reach + 1) % 2) != 0
    num = weights[:, odd].sum(axis=1)
    den = weights.sum(axis=1)
    return num / den


def sigma_to_squeezing_db(sigma: float) -> float:
    """Squeezing in dB of a noisy GKP state: -10*log10(2*sigma^2)."""
    sigma = _require_finite("sigma", sigma)
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    return -10.0 * math.log10(2.0 * sigma * sigma)


def squeezing_db_to_sigma(squeezing_db: float) -> float:
    """Inverse of :func:`sigma_to_squeezing_db`."""
    squeezing_db = _require_finite("squeezing_db", squeezing_db)
    return math.sqrt(0.5 * 10.0 ** (-squeezing_db / 10.0))


def envelope_width_to_sigma(delta: float) -> float:
    """Shift-noise sigma of a Gaussian-envelope GKP state of width ``delta``.

    sigma^2 = (1 - e^-delta)/(1 + e^-delta) = tanh(delta/2); tends to
    delta/2 for small delta and to 1 for large delta.
    """
    delta = _require_finite("delta", delta)
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    return math.sqrt(math.tanh(0.5 * delta))


def sample_gaussian(rng: np.random.Generator, cov) -> np.ndarray | float:
    """Draw a centered Gaussian sample with the given (co)variance.

    ``cov`` may be a scalar variance (returns a float) or a 2x2 positive
    semidefinite covariance matrix (returns a length-2 vector).
    """
    arr = np.asarray(cov, dtype=float)
    if arr.ndim == 0:
        var = float(arr)
        if var < 0:
            raise ValueError(f"variance must be non-negative, got {var}")
        if var == 0.0:
            return 0.0
        return float(rng.normal(scale=math.sqrt(var)))
    if arr.shape != (2, 2):
        raise ValueError(f"covariance must be scalar or 2x2, got shape {arr.shape}")
    if not np.allclose(arr, arr.T):
        raise ValueError("covariance matrix must be symmetric")
    eigvals = np.linalg.eigvalsh(arr)
    if eigvals.min() < -1e-12 * max(1.0, eigvals.max()):
        raise ValueError("covariance matrix must be positive semidefinite")
    # Cholesky-like factor that tolerates semidefinite input.
    vals, vecs = np.linalg.eigh(arr)
    vals = np.clip(vals, 0.0, None)
    factor = vecs * np.sqrt(vals)
    return factor @ rng.standard_normal(2)
