"""Single-mode Gaussian states in measured-variance form.

Variances are in shot-noise units: a vacuum or coherent state has variance 1
along every quadrature.  The phase-space variable ``alpha`` is the complex
coherent amplitude, so the quadrature measured at local-oscillator angle
``theta`` is ``X(theta) = 2 Re(alpha e^{-i theta})``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

PURITY_TOL = 1e-12
# Breadths this close to 1 are rounding noise around a pure state.  Fidelities
# depend on sqrt(V+ V- - 1) near purity, so the noise must not leak through.
PURE_SNAP = 2e-15


def normalize_angle(phi: float) -> float:
    """Map ``phi`` into [0, pi) by shifting with multiples of pi."""
    out = math.fmod(phi, math.pi)
    if out < 0:
        out += math.pi
    if out >= math.pi:
        out = 0.0
    return out


@dataclass(frozen=True)
class GaussianState:
    """A Gaussian state (or classical Gaussian distribution) in phase space.

    ``v_plus`` is the variance along the axis at angle ``phi`` and ``v_minus``
    the variance along the orthogonal axis.  The center ``delta`` is the
    coherent amplitude in the laboratory frame.  Physicality is not enforced
    here; see :func:`is_physical`.
    """

    v_plus: float
    v_minus: float
    phi: float = 0.0
    delta_re: float = 0.0
    delta_im: float = 0.0

    def __post_init__(self):
        values = (self.v_plus, self.v_minus, self.phi, self.delta_re, self.delta_im)
        if not all(math.isfinite(float(v)) for v in values):
            raise DomainError(f"state parameters must be finite, got {values}")
        if self.v_plus <= 0 or self.v_minus <= 0:
            raise DomainError(
                f"variances must be positive, got v_plus={self.v_plus}, v_minus={self.v_minus}"
            )
        phi = 0.0 if self.v_plus == self.v_minus else normalize_angle(float(self.phi))
        object.__setattr__(self, "v_plus", float(self.v_plus))
        object.__setattr__(self, "v_minus", float(self.v_minus))
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "delta_re", float(self.delta_re))
        object.__setattr__(self, "delta_im", float(self.delta_im))

    @property
    def delta(self) -> complex:
        return complex(self.delta_re, self.delta_im)

    @property
    def breadth(self) -> float:
        return self.v_plus * self.v_minus

    @property
    def is_isotropic(self) -> bool:
        return abs(self.v_plus - self.v_minus) <= 1e-12 * max(self.v_plus, self.v_minus)

    @property
    def is_pure(self) -> bool:
        return abs(self.breadth - 1.0) <= 1e-9

    def covariance(self) -> np.ndarray:
        """2x2 quadrature covariance matrix in the lab frame (vacuum = identity)."""
        c, s = math.cos(self.phi), math.sin(self.phi)
        rot = np.array([[c, -s], [s, c]])
        return rot @ np.diag([self.v_plus, self.v_minus]) @ rot.T

    def isclose(self, other: GaussianState, rtol: float = 1e-12, atol: float = 1e-12) -> bool:
        """Field-wise comparison, treating ``phi`` modulo pi."""
        def close(a, b):
            return abs(a - b) <= atol + rtol * max(abs(a), abs(b))

        dphi = abs(self.phi - other.phi)
        dphi = min(dphi, math.pi - dphi)
        both_iso = self.is_isotropic and other.is_isotropic
        return (
            close(self.v_plus, other.v_plus)
            and close(self.v_minus, other.v_minus)
            and (both_iso or dphi <= atol + rtol * math.pi)
            and close(self.delta_re, other.delta_re)
            and close(self.delta_im, other.delta_im)
        )


@dataclass(frozen=True)
class SqueezedThermalParams:
    """Squeezed, displaced thermal-state parameters.

    ``r > 0`` anti-squeezes the axis at ``phi`` so that ``v_minus`` drops below
    the thermal value ``2 n_bar + 1``.  ``beta`` is ``math.inf`` for pure states;
    formulas downstream work from ``n_bar``.
    """

    n_bar: float
    beta: float
    r: float = 0.0
    phi: float = 0.0
    x_re: float = 0.0
    x_im: float = 0.0

    @classmethod
    def from_n_bar(cls, n_bar, r=0.0, phi=0.0, x_re=0.0, x_im=0.0):
        if n_bar < 0 or not math.isfinite(n_bar):
            raise DomainError(f"n_bar must be finite and >= 0, got {n_bar}")
        return cls(n_bar, beta_from_n_bar(n_bar), r, phi, x_re, x_im)

    @property
    def x(self) -> complex:
        return complex(self.x_re, self.x_im)


def beta_from_n_bar(n_bar: float) -> float:
    if n_bar <= 0:
        return math.inf
    return math.log1p(1.0 / n_bar)


def make_state(v_plus, v_minus, phi=0.0, delta_re=0.0, delta_im=0.0) -> GaussianState:
    return GaussianState(v_plus, v_minus, phi, delta_re, delta_im)


def vacuum() -> GaussianState:
    return GaussianState(1.0, 1.0)


def coherent(alpha: complex = 0j) -> GaussianState:
    return GaussianState(1.0, 1.0, 0.0, alpha.real, alpha.imag)


def thermal(v: float, alpha: complex = 0j) -> GaussianState:
    return GaussianState(v, v, 0.0, alpha.real, alpha.imag)


def excess_breadth(state: GaussianState) -> float:
    """V+ V- - 1, snapped to exactly 0 within rounding of a pure state."""
    excess = state.v_plus * state.v_minus - 1.0
    return 0.0 if abs(excess) <= PURE_SNAP else excess


def is_physical(state: GaussianState) -> bool:
    """True when the state respects the uncertainty bound V+ V- >= 1."""
    return state.v_plus * state.v_minus >= 1.0 - PURITY_TOL


def require_physical(state: GaussianState, what="state"):
    if not is_physical(state):
        raise DomainError(
            f"{what} is unphysical: v_plus*v_minus = {state.breadth:.12g} < 1"
        )


def squeezing_parameter(state: GaussianState) -> float:
    """r = ln(V+/V-)/4; positive when the axis at ``phi`` is the broad one."""
    return 0.25 * math.log(state.v_plus / state.v_minus)


def to_thermal_params(state: GaussianState) -> SqueezedThermalParams:
    require_physical(state)
    excess = max(excess_breadth(state), 0.0)
    # (sqrt(1 + e) - 1) / 2 without cancellation
    n_bar = 0.5 * excess / (math.sqrt(1.0 + excess) + 1.0)
    return SqueezedThermalParams(
        n_bar=n_bar,
        beta=beta_from_n_bar(n_bar),
        r=squeezing_parameter(state),
        phi=state.phi,
        x_re=state.delta_re,
        x_im=state.delta_im,
    )


def from_thermal_params(params: SqueezedThermalParams) -> GaussianState:
    # Constructed in the principal-axis frame; the axis enters only through phi.
    n_bar, r = params.n_bar, params.r
    if n_bar < 0 or not math.isfinite(n_bar):
        raise DomainError(f"n_bar must be finite and >= 0, got {n_bar}")
    v = 2.0 * n_bar + 1.0
    return GaussianState(
        v * math.exp(2.0 * r), v * math.exp(-2.0 * r), params.phi, params.x_re, params.x_im
    )


def principal_variances(n_bar: float, r: float) -> tuple[float, float]:
    """Principal variances as ``1 + A +/- B`` with the thermal and squeezing terms split out."""
    a = 2.0 * (n_bar + (2.0 * n_bar + 1.0) * math.sinh(r) ** 2)
    b = 2.0 * (2.0 * n_bar + 1.0) * math.sinh(r) * math.cosh(r)
    return 1.0 + a + b, 1.0 + a - b


def wigner(state: GaussianState, alpha_re, alpha_im):
    """Wigner function at ``alpha``; accepts scalars or broadcastable arrays."""
    c, s = math.cos(state.phi), math.sin(state.phi)
    dr = np.asarray(alpha_re, dtype=float) - state.delta_re
    di = np.asarray(alpha_im, dtype=float) - state.delta_im
    u = dr * c + di * s
    w = di * c - dr * s
    norm = 2.0 / (math.pi * math.sqrt(state.v_plus * state.v_minus))
    out = norm * np.exp(-2.0 * u**2 / state.v_plus - 2.0 * w**2 / state.v_minus)
    return float(out) if out.ndim == 0 else out


def rotate(state: GaussianState, dtheta: float) -> GaussianState:
    """Rotate the whole distribution by ``dtheta`` about the phase-space origin."""
    center = state.delta * cmath.exp(1j * dtheta)
    return GaussianState(
        state.v_plus, state.v_minus, state.phi + dtheta, center.real, center.imag
    )


def principal_frame_offset(delta: complex, phi: float) -> complex:
    """Express a lab-frame phase-space vector in the frame of an axis at ``phi``."""
    return delta * cmath.exp(-1j * phi)
