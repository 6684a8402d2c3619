"""Transfer-function benchmarking of continuous-variable teleportation.

A Gaussian protocol is summarised by a gain and an added-noise variance per
quadrature.  Its figure of merit is the fidelity it would reach on a fixed,
pure reference input, which makes experiments with differently mixed inputs
comparable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, IndeterminateGainError, InconsistentStatisticsError
from .fidelity import quantum_fidelity, thermal_fidelity
from .state import GaussianState, coherent, require_physical

NOISE_CLAMP = 1e-9
ALIGN_TOL = 1e-12


@dataclass(frozen=True)
class TransferFunction:
    gain_plus: float = 1.0
    gain_minus: float = 1.0
    noise_plus: float = 0.0
    noise_minus: float = 0.0

    def __post_init__(self):
        for name in ("gain_plus", "gain_minus", "noise_plus", "noise_minus"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        for name in ("noise_plus", "noise_minus"):
            value = getattr(self, name)
            if value < -NOISE_CLAMP:
                raise DomainError(f"{name} must be >= 0, got {value}")
            object.__setattr__(self, name, max(value, 0.0))

    @classmethod
    def unity(cls, noise: float = 1.0) -> TransferFunction:
        """Unity gain with the same added noise on both quadratures."""
        return cls(1.0, 1.0, noise, noise)


@dataclass(frozen=True)
class QuadratureStats:
    """Measured means and variances of the amplitude (plus) and phase (minus) quadratures."""

    mean_plus: float
    mean_minus: float
    var_plus: float
    var_minus: float

    def __post_init__(self):
        if not (self.var_plus > 0 and self.var_minus > 0):
            raise DomainError(
                f"variances must be positive, got {self.var_plus}, {self.var_minus}"
            )

    def to_state(self) -> GaussianState:
        return GaussianState(
            self.var_plus, self.var_minus, 0.0, self.mean_plus / 2.0, self.mean_minus / 2.0
        )


def _quadrature_variances(state: GaussianState) -> tuple[float, float]:
    """Lab-frame amplitude/phase variances of an axis-aligned state."""
    turns = state.phi / (math.pi / 2)
    k = round(turns)
    if abs(turns - k) > ALIGN_TOL:
        raise DomainError(
            f"state axis phi={state.phi} is not aligned with the amplitude/phase quadratures"
        )
    if k % 2:
        return state.v_minus, state.v_plus
    return state.v_plus, state.v_minus


def stats_of(state: GaussianState) -> QuadratureStats:
    """Exact quadrature statistics of an axis-aligned state."""
    v_amp, v_phase = _quadrature_variances(state)
    return QuadratureStats(2.0 * state.delta_re, 2.0 * state.delta_im, v_amp, v_phase)


def no_entanglement_fidelity(v: float) -> float:
    """Best fidelity for teleporting a thermal input of variance ``v`` without entanglement.

    The measure-and-prepare channel adds two vacuum units of noise.
    """
    if v < 1:
        raise DomainError(f"input variance must be >= 1, got {v}")
    return thermal_fidelity(v, v + 2.0)


def apply_transfer(tf: TransferFunction, state: GaussianState) -> GaussianState:
    require_physical(state)
    v_amp, v_phase = _quadrature_variances(state)
    out_amp = tf.gain_plus**2 * v_amp + tf.noise_plus
    out_phase = tf.gain_minus**2 * v_phase + tf.noise_minus
    return GaussianState(
        out_amp, out_phase, 0.0, tf.gain_plus * state.delta_re, tf.gain_minus * state.delta_im
    )


def estimate_transfer(inp: QuadratureStats, out: QuadratureStats) -> TransferFunction:
    """Gains from the ratio of output to input means; noise from the variance excess."""
    gains, noises = [], []
    for quad in ("plus", "minus"):
        m_in = getattr(inp, f"mean_{quad}")
        if abs(m_in) <= 1e-9:
            raise IndeterminateGainError(quad)
        g = getattr(out, f"mean_{quad}") / m_in
        w = getattr(out, f"var_{quad}") - g * g * getattr(inp, f"var_{quad}")
        if w < -NOISE_CLAMP:
            raise InconsistentStatisticsError(
                f"{quad} quadrature: output variance is below the amplified input "
                f"variance (added noise {w:.6g})"
            )
        gains.append(g)
        noises.append(max(w, 0.0))
    return TransferFunction(gains[0], gains[1], noises[0], noises[1])


def reference_fidelity(tf: TransferFunction, reference: GaussianState | None = None) -> float:
    """Fidelity between a pure reference input and its predicted output.

    The desired output is the reference itself (unity-gain target), so a gain
    other than one costs a displacement penalty when the reference has a
    nonzero amplitude.
    """
    if reference is None:
        reference = coherent()
    if abs(reference.v_plus * reference.v_minus - 1.0) > 1e-9:
        raise DomainError("the reference input must be a pure state")
    predicted = apply_transfer(tf, reference)
    return quantum_fidelity(reference, predicted).value


def naive_fidelity(inp: GaussianState, out: GaussianState) -> float:
    """Input-output fidelity as usually quoted, without a reference state."""
    return quantum_fidelity(inp, out).value


def simulate_heterodyne_teleport(
    state: GaussianState, n_samples: int = 1_000_000, seed: int = 0
) -> QuadratureStats:
    """Monte-Carlo run of the measure-and-prepare (no entanglement) channel.

    Per shot: draw the input's quadratures, add one vacuum unit for the
    simultaneous measurement of both quadratures, then displace a fresh vacuum
    by that estimate.
    """
    require_physical(state)
    if n_samples < 10_000:
        raise DomainError(f"n_samples must be >= 10000, got {n_samples}")
    rng = np.random.default_rng(seed)
    v_amp, v_phase = _quadrature_variances(state)
    means = (2.0 * state.delta_re, 2.0 * state.delta_im)
    out = []
    for mean, var in zip(means, (v_amp, v_phase)):
        x_in = rng.normal(mean, math.sqrt(var), n_samples)
        estimate = x_in + rng.normal(0.0, 1.0, n_samples)
        x_out = estimate + rng.normal(0.0, 1.0, n_samples)
        out.append((x_out.mean(), x_out.var(ddof=1)))
    return QuadratureStats(out[0][0], out[1][0], out[0][1], out[1][1])

