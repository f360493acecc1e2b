"""Effective single-qubit model.

A qubit's binary outcome statistics are fully described by one number, the
effective field h_eff, through a Gibbs-like law.  h_eff itself depends on the
programmed input field h and four device parameters: inverse temperature
``beta``, additive bias ``b``, binary noise magnitude ``eta``, and a
transverse-field gain ``gamma`` whose x-component scales with h.

Two independent evaluation routes are provided: the closed-form expression
(`effective_field` / `spin_expectation`) and a density-matrix route built from
explicit 2x2 matrix exponentials (`density_matrix_expectation`).  The second
exists purely as a cross-check oracle for the first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Below this root magnitude the tanh(beta*r)/(2r) factor is replaced by its
# analytic limit beta/2 (the numerator vanishes with the denominator).
_R_EPS = 1e-12


class ParameterError(ValueError):
    """Raised for qubit parameters outside the model's domain."""


@dataclass(frozen=True)
class QubitParams:
    """The four effective-model parameters of one qubit.

    beta > 0, eta >= 0, gamma >= 0, all finite.  The sign of gamma is not
    identifiable (only (gamma*h)^2 enters the model), so it is fixed
    nonnegative by convention.
    """

    beta: float
    b: float
    eta: float
    gamma: float

    def __post_init__(self):
        for name in ("beta", "b", "eta", "gamma"):
            object.__setattr__(self, name, float(getattr(self, name)))
        vals = (self.beta, self.b, self.eta, self.gamma)
        if not all(math.isfinite(v) for v in vals):
            raise ParameterError(f"non-finite parameter in {vals}")
        if self.beta <= 0:
            raise ParameterError(f"beta must be positive, got {self.beta}")
        if self.eta < 0:
            raise ParameterError(f"eta must be nonnegative, got {self.eta}")
        if self.gamma < 0:
            raise ParameterError(f"gamma must be nonnegative, got {self.gamma}")

    def astuple(self):
        return (self.beta, self.b, self.eta, self.gamma)


def _mixture_mean(h, p: QubitParams):
    """tanh(h_eff): mean spin under the two-component noise mixture.

    Vectorized over h.  Each noise sign s contributes
    c_s * tanh(beta*r_s) / (2*r_s) with c_s = h + b + s*eta and
    r_s = sqrt((gamma*h)^2 + c_s^2).
    """
    h = np.asarray(h, dtype=float)
    x = p.gamma * h
    total = np.zeros_like(h)
    for s in (+1.0, -1.0):
        c = h + p.b + s * p.eta
        r = np.hypot(x, c)
        # tanh saturates, no overflow risk at large beta*r
        safe_r = np.where(r < _R_EPS, 1.0, r)
        term = np.where(
            r < _R_EPS,
            c * p.beta / 2.0,
            c * np.tanh(p.beta * safe_r) / (2.0 * safe_r),
        )
        total = total + term
    return total


def spin_expectation(h, p: QubitParams):
    """Expected spin value E[sigma] in (-1, 1) at input field h.

    Accepts a scalar or array of fields; pure and deterministic.
    """
    return _mixture_mean(h, p)


def _one_minus_plus(h, p: QubitParams):
    """(1 - T, 1 + T) for the mixture mean T, computed without cancellation.

    A direct arctanh(T) loses all precision once tanh saturates (beta*r
    beyond ~19), so each half is assembled from exact conjugate pairs:
    per noise sign, 1/2 -+ c*tanh(beta*r)/(2r) = (rm + c*eps)/(2r) resp.
    (rp - c*eps)/(2r), with rm = r - c and rp = r + c taken through
    (gamma*h)^2 / (r +- c) on the cancelling side and
    eps = 1 - tanh(beta*r) = 2*exp(-2*beta*r)/(1 + exp(-2*beta*r)).
    """
    h = np.asarray(h, dtype=float)
    x = p.gamma * h
    om = np.zeros_like(h)
    op = np.zeros_like(h)
    for s in (+1.0, -1.0):
        c = h + p.b + s * p.eta
        r = np.hypot(x, c)
        tiny = r < _R_EPS
        safe_r = np.where(tiny, 1.0, r)
        e = np.exp(-2.0 * p.beta * safe_r)
        eps = 2.0 * e / (1.0 + e)
        with np.errstate(invalid="ignore", divide="ignore"):
            rm = np.where(c > 0, x * x / (safe_r + c), r - c)
            rp = np.where(c < 0, x * x / (safe_r - c), r + c)
        om += np.where(tiny, 0.5 - c * p.beta / 2.0, (rm + c * eps) / (2.0 * safe_r))
        op += np.where(tiny, 0.5 + c * p.beta / 2.0, (rp - c * eps) / (2.0 * safe_r))
    return om, op


def effective_field(h, p: QubitParams):
    """Effective output field h_eff = arctanh(E[sigma]) at input field h.

    Evaluated as (log(1+T) - log(1-T))/2 on cancellation-free halves, which
    stays accurate far past the point where tanh saturates in floating
    point (classical check: beta=100, h=1 returns 100 to ~1e-14).
    """
    om, op = _one_minus_plus(h, p)
    return 0.5 * (np.log(op) - np.log(om))


def outcome_probability(h_eff):
    """(P[sigma=+1], P[sigma=-1]) for a given effective field.

    Overflow-safe: p_plus = logistic(2*h_eff); the pair sums to 1 exactly
    in floating point.
    """
    h_eff = np.asarray(h_eff, dtype=float)
    if not np.all(np.isfinite(h_eff)):
        raise ValueError("h_eff must be finite")
    with np.errstate(over="ignore"):
        p_plus = 1.0 / (1.0 + np.exp(-2.0 * h_eff))
    return p_plus, 1.0 - p_plus


_SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
_SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]])


def density_matrix_expectation(h, p: QubitParams) -> float:
    """E[sigma] via explicit thermal density matrices; oracle route.

    For each noise sign s builds H_s = gamma*h*sigma_x + (h+b+s*eta)*sigma_z,
    forms rho_s = exp(beta*H_s)/Tr exp(beta*H_s) by eigendecomposition, and
    averages Tr(rho_s sigma_z) over the two signs.  Scalar h only; this path
    deliberately avoids the closed form used by `spin_expectation`.
    """
    h = float(h)
    total = 0.0
    for s in (+1.0, -1.0):
        ham = p.gamma * h * _SIGMA_X + (h + p.b + s * p.eta) * _SIGMA_Z
        evals, evecs = np.linalg.eigh(ham)
        # shift by the top eigenvalue so exp never overflows
        w = np.exp(p.beta * (evals - evals.max()))
        rho = (evecs * w) @ evecs.T / w.sum()
        total += np.trace(rho @ _SIGMA_Z)
    return total / 2.0
