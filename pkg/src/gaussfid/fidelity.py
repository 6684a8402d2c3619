"""Closed-form classical and quantum fidelities between single-mode Gaussian states.

The classical fidelity treats the two Wigner functions as probability
densities and is the squared Bhattacharyya coefficient of two bivariate
normals.  The quantum fidelity is the Uhlmann fidelity, available in closed
form when the centers coincide or when the principal axes are aligned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConsistencyError, DomainError
from .state import (
    PURE_SNAP,
    GaussianState,
    SqueezedThermalParams,
    normalize_angle,
    principal_frame_offset,
    require_physical,
)

ANGLE_TOL = 1e-12
CENTER_TOL = 1e-14
# Pure states have infinite inverse temperature; the Twamley and Wang forms are
# evaluated at this photon number instead.  Near purity the fidelity moves like
# sqrt(n_bar), so the floor perturbs results at the 1e-15 level; cosh/sinh of
# the resulting beta (about 69) stay far from overflow.
N_BAR_FLOOR = 1e-30
CLAMP_TOL = 1e-12


class Regime(str, Enum):
    CLOSED_FORM = "closed_form"
    UNSUPPORTED = "unsupported"


@dataclass(frozen=True)
class FidelityResult:
    value: float
    regime: Regime = Regime.CLOSED_FORM

    @property
    def supported(self) -> bool:
        return self.regime is Regime.CLOSED_FORM

    def __float__(self):
        return float(self.value)


def _clamp(value: float) -> float:
    if value > 1.0 + CLAMP_TOL or value < -CLAMP_TOL:
        raise ConsistencyError(f"fidelity {value!r} outside [0, 1]")
    return min(max(value, 0.0), 1.0)


# -- special-case forms ---------------------------------------------------------


def classical_fidelity_coincident(v1p, v1m, v2p, v2m, angle) -> float:
    """Classical fidelity for coincident centers at relative axis angle ``angle``."""
    c2, s2 = math.cos(angle) ** 2, math.sin(angle) ** 2
    denom = c2 * (v1p + v2p) * (v1m + v2m) + s2 * (v1p + v2m) * (v1m + v2p)
    return 4.0 * math.sqrt(v1p * v1m * v2p * v2m) / denom


def classical_fidelity_aligned(v1p, v1m, v2p, v2m) -> float:
    return 4.0 * math.sqrt(v1p * v1m * v2p * v2m) / ((v1p + v2p) * (v1m + v2m))


def classical_fidelity_isotropic(v1, v2) -> float:
    return 4.0 * v1 * v2 / (v1 + v2) ** 2


def _mixedness_product(v1p, v1m, v2p, v2m) -> float:
    e1 = v1p * v1m - 1.0
    e2 = v2p * v2m - 1.0
    e1 = 0.0 if abs(e1) <= PURE_SNAP else e1
    e2 = 0.0 if abs(e2) <= PURE_SNAP else e2
    return max(e1 * e2, 0.0)


def quantum_fidelity_coincident(v1p, v1m, v2p, v2m, angle) -> float:
    """Uhlmann fidelity for coincident centers, written through the classical value."""
    k = _mixedness_product(v1p, v1m, v2p, v2m)
    f_c = classical_fidelity_coincident(v1p, v1m, v2p, v2m, angle)
    return 2.0 / (math.sqrt(4.0 * math.sqrt(v1p * v1m * v2p * v2m) / f_c + k) - math.sqrt(k))


def quantum_fidelity_aligned(v1p, v1m, v2p, v2m) -> float:
    k = _mixedness_product(v1p, v1m, v2p, v2m)
    return 2.0 / (math.sqrt((v1p * v2m + 1.0) * (v1m * v2p + 1.0)) - math.sqrt(k))


def quantum_fidelity_isotropic(v1, v2) -> float:
    return 2.0 / (v1 * v2 + 1.0 - math.sqrt(_mixedness_product(v1, v1, v2, v2)))


def thermal_fidelity(v1: float, v2: float) -> float:
    """Uhlmann fidelity between two thermal states of variances ``v1`` and ``v2``."""
    if v1 < 1.0 or v2 < 1.0:
        raise DomainError(f"thermal variances must be >= 1, got {v1}, {v2}")
    a = (v1 + 1.0) * (v2 + 1.0)
    k = _mixedness_product(v1, v1, v2, v2)
    # (2 / (sqrt(a) - sqrt(b)))^2 rationalized, b = (v1 - 1)(v2 - 1) = k / a
    return (a + k / a + 2.0 * math.sqrt(k)) / (v1 + v2) ** 2


def _displacement_exponent(v1p, v1m, v2p, v2m, x: complex) -> float:
    return -2.0 * x.real**2 / (v1p + v2p) - 2.0 * x.imag**2 / (v1m + v2m)


# -- frame handling -------------------------------------------------------------


def _shared_frame(s1: GaussianState, s2: GaussianState):
    """Principal variances of both states in a common frame, or None if misaligned.

    Returns ``(phi, v1p, v1m, v2p, v2m)`` where ``phi`` is the shared axis angle.
    An isotropic state is aligned with anything; a relative angle of pi/2 is
    absorbed by exchanging the second state's labels.
    """
    if s1.is_isotropic:
        return s2.phi, s1.v_plus, s1.v_minus, s2.v_plus, s2.v_minus
    if s2.is_isotropic:
        return s1.phi, s1.v_plus, s1.v_minus, s2.v_plus, s2.v_minus
    # remainder() is odd in its argument, so the test is symmetric in s1, s2
    rel = abs(math.remainder(s2.phi - s1.phi, math.pi))
    if rel <= ANGLE_TOL:
        return s1.phi, s1.v_plus, s1.v_minus, s2.v_plus, s2.v_minus
    if abs(rel - math.pi / 2) <= ANGLE_TOL:
        return s1.phi, s1.v_plus, s1.v_minus, s2.v_minus, s2.v_plus
    return None


def relative_angle(s1: GaussianState, s2: GaussianState) -> float:
    return normalize_angle(s2.phi - s1.phi)


def _coincident(s1: GaussianState, s2: GaussianState) -> bool:
    scale = max(1.0, abs(s1.delta), abs(s2.delta))
    return abs(s2.delta - s1.delta) <= CENTER_TOL * scale


# -- public operations ----------------------------------------------------------


def classical_fidelity(s1: GaussianState, s2: GaussianState) -> FidelityResult:
    """Squared Bhattacharyya coefficient of the two Wigner distributions.

    Valid for any pair of positive covariances, centers and axis angles; no
    physicality requirement.
    """
    m1, m2 = s1.covariance(), s2.covariance()
    total = m1 + m2
    det_total = total[0, 0] * total[1, 1] - total[0, 1] * total[1, 0]
    prefactor = 4.0 * math.sqrt(s1.v_plus * s1.v_minus * s2.v_plus * s2.v_minus) / det_total
    d = np.array([s2.delta_re - s1.delta_re, s2.delta_im - s1.delta_im])
    if d.any():
        inv = np.array([[total[1, 1], -total[0, 1]], [-total[1, 0], total[0, 0]]]) / det_total
        exponent = -2.0 * float(d @ inv @ d)
    else:
        exponent = 0.0
    return FidelityResult(_clamp(prefactor * math.exp(exponent)))


def quantum_fidelity(s1: GaussianState, s2: GaussianState) -> FidelityResult:
    """Uhlmann fidelity where a closed form exists.

    Coincident centers are handled at any relative angle; separated states only
    when their principal axes are aligned.  Otherwise the result is flagged
    ``unsupported`` with a NaN value and the Fock-basis oracle should be used.
    """
    require_physical(s1, "first state")
    require_physical(s2, "second state")
    if _coincident(s1, s2):
        value = quantum_fidelity_coincident(
            s1.v_plus, s1.v_minus, s2.v_plus, s2.v_minus, relative_angle(s1, s2)
        )
        return FidelityResult(_clamp(value))
    frame = _shared_frame(s1, s2)
    if frame is None:
        return FidelityResult(math.nan, Regime.UNSUPPORTED)
    phi, v1p, v1m, v2p, v2m = frame
    x = principal_frame_offset(s2.delta - s1.delta, phi)
    value = quantum_fidelity_aligned(v1p, v1m, v2p, v2m) * math.exp(
        _displacement_exponent(v1p, v1m, v2p, v2m, x)
    )
    return FidelityResult(_clamp(value))


def displacement_factor(s1: GaussianState, s2: GaussianState, x_re: float, x_im: float) -> float:
    """Fidelity penalty for a center separation ``x`` given in the shared principal frame."""
    frame = _shared_frame(s1, s2)
    if frame is None:
        raise DomainError("displacement factor requires aligned principal axes")
    _, v1p, v1m, v2p, v2m = frame
    return math.exp(_displacement_exponent(v1p, v1m, v2p, v2m, complex(x_re, x_im)))


def _beta_floored(n_bar: float) -> float:
    # same purity snap as the measured-variable forms: breadth - 1 = 4 n (n + 1)
    if 4.0 * n_bar * (n_bar + 1.0) <= PURE_SNAP:
        n_bar = 0.0
    return math.log1p(1.0 / max(n_bar, N_BAR_FLOOR))


def quantum_fidelity_twamley(
    p1: SqueezedThermalParams, p2: SqueezedThermalParams, varphi: float
) -> float:
    """Uhlmann fidelity from inverse temperatures and squeezing (coincident centers).

    Independent of :func:`quantum_fidelity`; pure states are evaluated in the
    limit ``n_bar -> 0`` via a floor of ``N_BAR_FLOOR``.
    """
    if abs(p1.x - p2.x) > CENTER_TOL * max(1.0, abs(p1.x), abs(p2.x)):
        raise DomainError("Twamley form requires coincident centers")
    b1, b2 = _beta_floored(p1.n_bar), _beta_floored(p2.n_bar)
    r1, r2 = p1.r, p2.r
    ch_sum = math.cosh((b1 + b2) / 2.0) ** 2
    ch_diff = math.cosh((b2 - b1) / 2.0) ** 2
    y = math.cos(varphi) ** 2 * (
        math.cosh(r2 - r1) ** 2 * ch_sum - math.sinh(r1 - r2) ** 2 * ch_diff
    ) + math.sin(varphi) ** 2 * (
        math.cosh(r1 + r2) ** 2 * ch_sum - math.sinh(r1 + r2) ** 2 * ch_diff
    )
    value = 2.0 * math.sinh(b1 / 2.0) * math.sinh(b2 / 2.0) / (math.sqrt(y) - 1.0)
    return _clamp(value)


def displacement_factor_wang(
    p1: SqueezedThermalParams, p2: SqueezedThermalParams, g: complex
) -> float:
    """Displacement penalty from inverse temperatures and squeezing (aligned axes).

    ``g`` is the center separation expressed in the shared principal frame.
    """
    b1, b2 = _beta_floored(p1.n_bar), _beta_floored(p2.n_bar)
    r1, r2 = p1.r, p2.r
    delta = (
        math.cosh(b1) * math.cosh(b2)
        + math.sinh(b1) * math.sinh(b2) * math.cosh(2.0 * (r1 - r2))
        - 1.0
    )
    g2 = 2.0 * (g * g).real
    n2 = abs(g) ** 2
    eps1 = math.sinh(b1) * math.sinh(b2 / 2.0) ** 2 * (g2 * math.sinh(2 * r1) - 2 * n2 * math.cosh(2 * r1))
    eps2 = math.sinh(b2) * math.sinh(b1 / 2.0) ** 2 * (g2 * math.sinh(2 * r2) - 2 * n2 * math.cosh(2 * r2))
    return math.exp((eps1 + eps2) / delta)


def pure_relation_rhs(s2: GaussianState, f_c: float) -> float:
    """Quantum fidelity implied by a classical fidelity when the other state is pure."""
    if not 0.0 <= f_c <= 1.0:
        raise DomainError(f"classical fidelity must lie in [0, 1], got {f_c}")
    return math.sqrt(f_c / math.sqrt(s2.v_plus * s2.v_minus))
