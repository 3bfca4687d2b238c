"""Outcome-probability models for amplitude estimation under circuit noise.

Implements the Gaussian rotation-noise model in closed form, an independent
Gauss-Hermite quadrature evaluation of the same probability, the depolarizing
model, and the exact zero-mean mapping between the two.

The physical picture: after ``m`` Grover iterations applied to a state with
amplitude angle ``theta``, the measured qubit is 1 with probability
``sin^2((2m+1) theta)`` in the noiseless case.  Under accumulated rotation
noise the effective angle picks up a Gaussian perturbation with mean
``k_mu * m`` and variance ``k_sigma * m``, which integrates out to

    p(0) - p(1) = exp(-2 k_sigma m) * cos(2 ((2m+1) theta + k_mu m))

All public operations are pure functions and safe for concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InternalConsistencyError, QuadratureError

# Round-off tolerance for clamping probabilities back into [0, 1].  Anything
# further out is treated as a formula bug, not float noise.
_CLAMP_SLACK = 1e-12

_HALF_PI = math.pi / 2


@dataclass(frozen=True)
class Amplitude:
    """Target amplitude, represented by its rotation angle.

    The angle ``theta`` lives in [0, pi/2]; the amplitude itself is the
    derived quantity ``a = sin^2(theta)``.
    """

    theta: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.theta <= _HALF_PI):
            raise ValueError(f"theta must lie in [0, pi/2], got {self.theta!r}")

    @property
    def a(self) -> float:
        """The amplitude sin^2(theta)."""
        return math.sin(self.theta) ** 2

    @classmethod
    def from_probability(cls, a: float) -> "Amplitude":
        """Build from the amplitude value ``a`` via theta = arcsin(sqrt(a))."""
        if not (0.0 <= a <= 1.0):
            raise ValueError(f"amplitude must lie in [0, 1], got {a!r}")
        return cls(math.asin(math.sqrt(a)))


@dataclass(frozen=True)
class GaussianNoiseParams:
    """Drift and diffusion rates of the per-iterate rotation error.

    ``k_mu`` is the mean rotation offset added per Grover iterate (radians);
    ``k_sigma`` is the variance growth per iterate (radians^2).  After ``m``
    iterates the accumulated error is Normal(k_mu * m, k_sigma * m).
    """

    k_mu: float
    k_sigma: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.k_mu):
            raise ValueError(f"k_mu must be finite, got {self.k_mu!r}")
        if not (self.k_sigma >= 0.0 and math.isfinite(self.k_sigma)):
            raise ValueError(f"k_sigma must be finite and >= 0, got {self.k_sigma!r}")


@dataclass(frozen=True)
class DepolParams:
    """Per-Grover-iterate coherence survival probability.

    ``p_coh_tilde`` is the probability that the state survives one Grover
    iterate without depolarizing; after ``m`` iterates the coherent fraction
    is ``p_coh_tilde ** m`` and the rest is maximally mixed.
    """

    p_coh_tilde: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.p_coh_tilde <= 1.0):
            raise ValueError(
                f"p_coh_tilde must lie in [0, 1], got {self.p_coh_tilde!r}"
            )


def _check_depth(m: int) -> int:
    """Validate a Grover-iteration count (nonnegative integer)."""
    if isinstance(m, bool) or int(m) != m:
        raise ValueError(f"depth must be an integer, got {m!r}")
    if m < 0:
        raise ValueError(f"depth must be >= 0, got {m!r}")
    return int(m)


def _as_probability(p: float, context: str) -> float:
    """Clamp round-off-sized excursions outside [0, 1]; reject anything larger."""
    if p < 0.0:
        if p < -_CLAMP_SLACK:
            raise InternalConsistencyError(f"{context} produced probability {p!r}")
        return 0.0
    if p > 1.0:
        if p > 1.0 + _CLAMP_SLACK:
            raise InternalConsistencyError(f"{context} produced probability {p!r}")
        return 1.0
    return p


# ---------------------------------------------------------------------------
# Raw array kernels, shared with the fitting and device modules.  No input
# validation; arguments broadcast under numpy rules.

def _p_diff_gaussian_raw(theta, m, k_mu, k_sigma):
    """p(0) - p(1) under Gaussian rotation noise (array-capable)."""
    psi = (2.0 * np.asarray(m) + 1.0) * theta + k_mu * np.asarray(m)
    decay = np.exp(-2.0 * k_sigma * np.asarray(m))
    # cos^2 - sin^2 rather than cos(2 psi): keeps the m=0 limit exactly equal
    # to cos^2(theta) - sin^2(theta) and bounds the magnitude by the decay.
    return decay * (np.cos(psi) ** 2 - np.sin(psi) ** 2)


def _p1_gaussian_raw(theta, m, k_mu, k_sigma):
    """p(1) under Gaussian rotation noise (array-capable)."""
    return 0.5 * (1.0 - _p_diff_gaussian_raw(theta, m, k_mu, k_sigma))


def _p1_depol_raw(theta, m, p_coh_tilde):
    """p(1) under per-iterate depolarizing noise (array-capable)."""
    coherent = np.asarray(p_coh_tilde) ** np.asarray(m)
    return coherent * np.sin((2.0 * np.asarray(m) + 1.0) * theta) ** 2 + (
        1.0 - coherent
    ) / 2.0


def _p1_noiseless_raw(theta, m):
    """p(1) = sin^2((2m+1) theta) with no noise (array-capable)."""
    return np.sin((2.0 * np.asarray(m) + 1.0) * theta) ** 2


# ---------------------------------------------------------------------------
# Public operations.

def p1_gaussian_closed(amp: Amplitude, m: int, noise: GaussianNoiseParams) -> float:
    """Probability of measuring 1 after ``m`` Grover iterates, closed form.

    Evaluates ``(1 - exp(-2 k_sigma m) cos(2 ((2m+1) theta + k_mu m))) / 2``.
    Reduces to ``sin^2((2m+1) theta)`` at zero noise.
    """
    m = _check_depth(m)
    p = float(_p1_gaussian_raw(amp.theta, m, noise.k_mu, noise.k_sigma))
    return _as_probability(p, "p1_gaussian_closed")


def p_diff_gaussian_closed(amp: Amplitude, m: int, noise: GaussianNoiseParams) -> float:
    """Outcome-probability difference p(0) - p(1) under Gaussian noise.

    Equals ``1 - 2 * p1_gaussian_closed(...)``; its magnitude is bounded by
    ``exp(-2 k_sigma m)``, with the noiseless zero-depth limit
    ``cos^2(theta) - sin^2(theta)``.
    """
    m = _check_depth(m)
    return float(_p_diff_gaussian_raw(amp.theta, m, noise.k_mu, noise.k_sigma))


@lru_cache(maxsize=64)
def _hermgauss_nodes(n: int):
    """Cached Gauss-Hermite nodes and weights for ``n`` points."""
    return np.polynomial.hermite.hermgauss(n)


def _gaussian_outcome_quadrature(
    amp: Amplitude,
    m: int,
    noise: GaussianNoiseParams,
    tol: float,
    outcome: int,
    max_nodes: int,
) -> float:
    """Shared quadrature for p(outcome); outcome 1 uses sin^2, outcome 0 cos^2."""
    m = _check_depth(m)
    mean = noise.k_mu * m
    variance = noise.k_sigma * m
    phase = (2.0 * m + 1.0) * amp.theta
    trig = np.sin if outcome == 1 else np.cos

    if variance == 0.0:
        # Zero variance: the error distribution is a point mass at the mean.
        p = float(trig(phase + mean) ** 2)
        return _as_probability(p, "gaussian quadrature (degenerate)")

    # Expectation of f(t) for t ~ N(mean, variance) via the substitution
    # t = mean + sqrt(2 variance) x against the weight exp(-x^2).
    scale = math.sqrt(2.0 * variance)
    threshold = max(tol, 1e-15)
    previous = None
    n = 16
    while n <= max_nodes:
        x, w = _hermgauss_nodes(n)
        values = trig(phase + mean + scale * x) ** 2
        estimate = float(w @ values) / math.sqrt(math.pi)
        if previous is not None and abs(estimate - previous) <= threshold:
            return _as_probability(estimate, "gaussian quadrature")
        previous = estimate
        n *= 2
    raise QuadratureError(
        f"quadrature did not converge to {tol!r} within {max_nodes} nodes "
        f"(theta={amp.theta}, m={m}, k_mu={noise.k_mu}, k_sigma={noise.k_sigma})"
    )


def p1_gaussian_quadrature(
    amp: Amplitude,
    m: int,
    noise: GaussianNoiseParams,
    tol: float = 1e-10,
    max_nodes: int = 4096,
) -> float:
    """Probability of measuring 1, by direct numerical integration.

    Integrates ``sin^2((2m+1) theta + t)`` against the Normal(k_mu m,
    k_sigma m) error density using Gauss-Hermite quadrature, doubling the
    node count until successive estimates agree to ``tol``.  Serves as the
    independent check on :func:`p1_gaussian_closed`.

    Raises:
        QuadratureError: no convergence within ``max_nodes`` nodes.
    """
    return _gaussian_outcome_quadrature(amp, m, noise, tol, 1, max_nodes)


def p0_gaussian_quadrature(
    amp: Amplitude,
    m: int,
    noise: GaussianNoiseParams,
    tol: float = 1e-10,
    max_nodes: int = 4096,
) -> float:
    """Probability of measuring 0 (cos^2 integrand); complements the p1 oracle."""
    return _gaussian_outcome_quadrature(amp, m, noise, tol, 0, max_nodes)


def p1_depolarizing(amp: Amplitude, m: int, depol: DepolParams) -> float:
    """Probability of measuring 1 under per-iterate depolarizing noise.

    The state stays coherent with probability ``p_coh_tilde ** m`` and is
    otherwise maximally mixed:
    ``p1 = p~^m sin^2((2m+1) theta) + (1 - p~^m) / 2``.
    """
    m = _check_depth(m)
    p = float(_p1_depol_raw(amp.theta, m, depol.p_coh_tilde))
    return _as_probability(p, "p1_depolarizing")


def depol_equivalent(noise: GaussianNoiseParams) -> DepolParams:
    """Depolarizing parameters exactly equivalent to zero-mean Gaussian noise.

    For ``k_mu == 0`` both models predict
    ``p1 = (1 - exp(-2 k_sigma m) cos(2 (2m+1) theta)) / 2`` for every depth,
    under the identification ``p_coh_tilde = exp(-2 k_sigma)``.

    Raises:
        ValueError: if ``k_mu != 0`` (the equivalence only holds without drift).
    """
    if noise.k_mu != 0.0:
        raise ValueError(
            f"depolarizing equivalence requires k_mu == 0, got {noise.k_mu!r}"
        )
    return DepolParams(math.exp(-2.0 * noise.k_sigma))
