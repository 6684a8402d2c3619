"""Homodyne quadrature records and Gaussian state estimation.

Records are ``(angle, value)`` pairs where ``value`` is a quadrature outcome
in shot-noise units.  The variance at angle ``theta`` of a Gaussian state is
``V+ cos^2(theta - phi) + V- sin^2(theta - phi)``, which is linear in
``(1, cos 2 theta, sin 2 theta)``, and the mean is ``2 Re(delta e^{-i theta})``.
Both are fitted by weighted least squares.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .errors import (
    EmptySamplesError,
    InsufficientDataError,
    SamplesParseError,
    UnidentifiableError,
)
from .state import GaussianState

HEADER = "angle_rad,value"
ANGLE_TOL = 1e-9
ISOTROPY_TOL = 1e-9


@dataclass(frozen=True)
class QuadratureSamples:
    angles: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        angles = np.asarray(self.angles, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if angles.shape != values.shape or angles.ndim != 1:
            raise ValueError("angles and values must be 1-D arrays of equal length")
        object.__setattr__(self, "angles", angles)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return len(self.angles)

    @property
    def records(self) -> list[tuple[float, float]]:
        return list(zip(self.angles.tolist(), self.values.tolist()))

    @classmethod
    def from_records(cls, records) -> QuadratureSamples:
        records = list(records)
        if not records:
            return cls(np.empty(0), np.empty(0))
        angles, values = zip(*records)
        return cls(np.array(angles), np.array(values))


class AngleStats(NamedTuple):
    angle: float
    mean: float
    variance: float
    count: int


@dataclass(frozen=True)
class StateEstimate:
    state: GaussianState
    residual: float
    per_angle: tuple[AngleStats, ...]


def load_samples(path) -> QuadratureSamples:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise SamplesParseError(f"cannot read samples: {exc.strerror}", path) from exc
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise SamplesParseError("file is not valid UTF-8", path) from exc
    lines = text.split("\n")
    if not lines or lines[0].rstrip("\r") != HEADER:
        raise SamplesParseError(f"expected header {HEADER!r}", path, 1)
    angles, values = [], []
    for lineno, line in enumerate(lines[1:], start=2):
        line = line.rstrip("\r")
        if not line:
            continue
        fields = line.split(",")
        if len(fields) != 2:
            raise SamplesParseError(f"expected 2 fields, got {len(fields)}", path, lineno)
        try:
            angle, value = float(fields[0]), float(fields[1])
        except ValueError:
            raise SamplesParseError(f"non-numeric field in {line!r}", path, lineno) from None
        if not (math.isfinite(angle) and math.isfinite(value)):
            raise SamplesParseError(f"non-finite field in {line!r}", path, lineno)
        angles.append(angle)
        values.append(value)
    if not angles:
        raise EmptySamplesError("no data rows after the header", path)
    return QuadratureSamples(np.array(angles), np.array(values))


def save_samples(samples: QuadratureSamples, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(HEADER + "\n")
        for a, v in zip(samples.angles.tolist(), samples.values.tolist()):
            fh.write(f"{a!r},{v!r}\n")


def _group_angles(angles: np.ndarray) -> list[np.ndarray]:
    order = np.argsort(angles, kind="stable")
    groups, current = [], [order[0]]
    for prev, idx in zip(order[:-1], order[1:]):
        if angles[idx] - angles[prev] <= ANGLE_TOL:
            current.append(idx)
        else:
            groups.append(np.array(current))
            current = [idx]
    groups.append(np.array(current))
    return groups


def per_angle_stats(samples: QuadratureSamples) -> list[AngleStats]:
    """Mean and unbiased variance of the records at each distinct angle."""
    if len(samples) == 0:
        raise EmptySamplesError("no samples")
    out = []
    for idx in _group_angles(samples.angles):
        if len(idx) < 2:
            raise InsufficientDataError(
                f"angle {samples.angles[idx[0]]:.12g} has a single record; need >= 2"
            )
        vals = samples.values[idx]
        out.append(
            AngleStats(float(samples.angles[idx].mean()), float(vals.mean()), float(vals.var(ddof=1)), len(idx))
        )
    return out


def _doubled_angle_groups(theta: np.ndarray) -> list[np.ndarray]:
    """Indices grouped by 2*theta modulo 2 pi, i.e. by angle modulo pi."""
    doubled = np.mod(2.0 * theta, 2.0 * math.pi)
    doubled[doubled > 2.0 * math.pi - ANGLE_TOL] = 0.0
    return _group_angles(doubled), doubled


def _fit_from_stats(stats: list[AngleStats]) -> StateEstimate:
    theta = np.array([s.angle for s in stats])
    var = np.array([s.variance for s in stats])
    mean = np.array([s.mean for s in stats])
    weight = np.array([s.count for s in stats], dtype=float)
    sw = np.sqrt(weight)

    groups, doubled = _doubled_angle_groups(theta)
    if len(groups) < 2:
        raise UnidentifiableError("all measurement angles coincide modulo pi")
    if len(groups) == 2:
        # Two angles identify the axes only when they are orthogonal; the
        # first one is then taken as a principal axis.
        d0, d1 = doubled[groups[0][0]], doubled[groups[1][0]]
        if abs(abs(d1 - d0) - math.pi) > 1e-9:
            raise UnidentifiableError("with two measurement angles they must be orthogonal")
        v0 = np.average(var[groups[0]], weights=weight[groups[0]])
        v1 = np.average(var[groups[1]], weights=weight[groups[1]])
        a = 0.5 * (v0 + v1)
        b, c = 0.5 * (v0 - v1) * math.cos(d0), 0.5 * (v0 - v1) * math.sin(d0)
    else:
        design = np.column_stack([np.ones_like(theta), np.cos(2 * theta), np.sin(2 * theta)])
        (a, b, c), *_ = np.linalg.lstsq(design * sw[:, None], var * sw, rcond=None)

    amp = math.hypot(b, c)
    if amp < ISOTROPY_TOL * abs(a):
        phi, amp = 0.0, 0.0
    else:
        phi = 0.5 * math.atan2(c, b)
    fitted = a + b * np.cos(2 * theta) + c * np.sin(2 * theta)
    residual = float(math.sqrt(np.sum(weight * (var - fitted) ** 2) / weight.sum()))

    design = np.column_stack([2 * np.cos(theta), 2 * np.sin(theta)])
    (d_re, d_im), *_ = np.linalg.lstsq(design * sw[:, None], mean * sw, rcond=None)
    return StateEstimate(GaussianState(a + amp, a - amp, phi, d_re, d_im), residual, tuple(stats))


def estimate_state(samples: QuadratureSamples) -> StateEstimate:
    """Fit a Gaussian state to homodyne records taken at several angles.

    Per-angle variances are weighted by their record counts.  Physicality is
    not enforced: statistical fluctuations may give ``V+ V- < 1``.
    """
    return _fit_from_stats(per_angle_stats(samples))


def estimate_from_variances(
    angle_variances: dict[float, float], angle_means: dict[float, float] | None = None,
    count: int = 1
) -> StateEstimate:
    """Fit from exact per-angle moments (no sampling noise)."""
    angle_means = angle_means or {}
    stats = [
        AngleStats(float(t), float(angle_means.get(t, 0.0)), float(v), count)
        for t, v in sorted(angle_variances.items())
    ]
    return _fit_from_stats(stats)


def quadrature_variance(state: GaussianState, theta) -> np.ndarray:
    c = np.cos(np.asarray(theta) - state.phi)
    return state.v_plus * c**2 + state.v_minus * (1.0 - c**2)


def quadrature_mean(state: GaussianState, theta) -> np.ndarray:
    theta = np.asarray(theta)
    return 2.0 * (state.delta_re * np.cos(theta) + state.delta_im * np.sin(theta))


def sample_quadratures(
    state: GaussianState, angles, n_per_angle: int, rng: np.random.Generator
) -> QuadratureSamples:
    """Draw homodyne outcomes of ``state`` at each of ``angles``."""
    angles = np.repeat(np.asarray(angles, dtype=float), n_per_angle)
    values = rng.normal(quadrature_mean(state, angles), np.sqrt(quadrature_variance(state, angles)))
    return QuadratureSamples(angles, values)
