"""Parameter sweeps behind the fidelity comparison plots.

Each figure fixes distribution 1 and varies one property of distribution 2.
A sweep yields ``(param, f_quantum, f_classical)`` rows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bench import no_entanglement_fidelity
from .errors import DomainError
from .fidelity import classical_fidelity, classical_fidelity_isotropic, quantum_fidelity
from .state import GaussianState

# figure id -> (default start, default stop, default steps, log spacing, allowed domain)
_SWEEPS = {
    "fig1": (1.0, 10.0, 181, False, (1.0, math.inf)),
    "fig3a": (0.125, 8.0, 121, True, (0.0, math.inf)),
    "fig3b": (1.0, 64.0, 121, True, (1.0, math.inf)),
    "fig4a": (0.125, 8.0, 121, True, (0.0, math.inf)),
    "fig4b": (1.0, 64.0, 121, True, (1.0, math.inf)),
    "fig5": (0.0, math.pi / 2, 91, False, (-math.inf, math.inf)),
}
FIGURE_IDS = tuple(_SWEEPS)

FIG3_FIXED = GaussianState(2.0, 0.5)
FIG4_FIXED = GaussianState(4.0, 1.0)
FIG5_FIXED = GaussianState(4.0, 0.25)
FIG5_VARIED = (8.0, 0.5)
SQUEEZE_RATIO = 4.0


@dataclass(frozen=True)
class FigureSpec:
    figure_id: str
    start: float | None = None
    stop: float | None = None
    steps: int | None = None

    def __post_init__(self):
        if self.figure_id not in _SWEEPS:
            raise DomainError(f"unknown figure {self.figure_id!r}; choose from {', '.join(FIGURE_IDS)}")
        start, stop, steps, _, (lo, hi) = _SWEEPS[self.figure_id]
        object.__setattr__(self, "start", start if self.start is None else float(self.start))
        object.__setattr__(self, "stop", stop if self.stop is None else float(self.stop))
        object.__setattr__(self, "steps", steps if self.steps is None else int(self.steps))
        if self.steps < 2:
            raise DomainError(f"steps must be >= 2, got {self.steps}")
        for name in ("start", "stop"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite")
            if not (value >= lo and value < hi) or (lo == 0.0 and value <= 0.0):
                raise DomainError(f"{name}={value} is outside the domain of {self.figure_id}")
        if self.stop <= self.start:
            raise DomainError("stop must exceed start")

    def params(self) -> np.ndarray:
        if _SWEEPS[self.figure_id][3]:
            return np.geomspace(self.start, self.stop, self.steps)
        return np.linspace(self.start, self.stop, self.steps)


def _pair(fixed: GaussianState, varied: GaussianState) -> tuple[float, float]:
    return quantum_fidelity(fixed, varied).value, classical_fidelity(fixed, varied).value


def _point(figure_id: str, p: float) -> tuple[float, float]:
    if figure_id == "fig1":
        return no_entanglement_fidelity(p), classical_fidelity_isotropic(p, p + 2.0)
    if figure_id in ("fig3a", "fig4a"):
        fixed = FIG3_FIXED if figure_id == "fig3a" else FIG4_FIXED
        breadth = fixed.breadth
        return _pair(fixed, GaussianState(p, breadth / p))
    if figure_id in ("fig3b", "fig4b"):
        fixed = FIG3_FIXED if figure_id == "fig3b" else FIG4_FIXED
        v_minus = math.sqrt(p / SQUEEZE_RATIO)
        return _pair(fixed, GaussianState(SQUEEZE_RATIO * v_minus, v_minus))
    # fig5: p is the relative axis angle
    return _pair(FIG5_FIXED, GaussianState(*FIG5_VARIED, p))


def sweep(spec: FigureSpec) -> list[tuple[float, float, float]]:
    return [(float(p), *_point(spec.figure_id, float(p))) for p in spec.params()]


def format_row(values) -> str:
    return ",".join(format(v, ".9g") for v in values)


def to_csv(rows) -> str:
    lines = ["param,f_quantum,f_classical"] + [format_row(r) for r in rows]
    return "\n".join(lines) + "\n"


def sign_changes(values) -> int:
    signs = np.sign(np.asarray(values, dtype=float))
    signs = signs[signs != 0]
    return int(np.count_nonzero(signs[1:] != signs[:-1]))
