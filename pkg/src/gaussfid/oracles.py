"""Brute-force reference computations used to check the closed forms.

Nothing in here calls into :mod:`gaussfid.fidelity`; the routines work from
density matrices in a truncated number basis, from explicit purification
overlaps, or from numerical integration of Wigner functions on a grid.
"""

from __future__ import annotations

import cmath
import math
from functools import lru_cache
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import DomainError, InvalidDensityError, TruncationError
from .state import GaussianState, SqueezedThermalParams, is_physical, to_thermal_params, wigner

NEG_EIG_TOL = 1e-10
UNITARITY_TOL = 1e-10
MIN_DIM = 8
MAX_DIM = 1024
POPULATION_FLOOR = 1e-20


@dataclass(frozen=True)
class FockDensityMatrix:
    """Density matrix ``<m|rho|n>`` truncated to ``dim`` number states.

    ``trace_deficit`` is the probability weight that fell outside the kept
    block before renormalisation.  ``factor``, when present, is a ``dim x k``
    matrix with ``entries = factor @ factor^dag``; it lets the fidelity avoid
    square roots of round-off eigenvalues.
    """

    entries: np.ndarray
    trace_deficit: float = 0.0
    factor: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def expectation(self, op: np.ndarray) -> complex:
        return complex(np.trace(self.entries @ op))


def annihilation(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(complex)


def _expm_antihermitian(gen: np.ndarray) -> np.ndarray:
    """exp(G) for anti-Hermitian G via the spectral decomposition of -iG."""
    herm = -1j * gen
    herm = 0.5 * (herm + herm.conj().T)
    w, v = np.linalg.eigh(herm)
    return (v * np.exp(1j * w)) @ v.conj().T


@lru_cache(maxsize=8)
def _unit_generators(dim: int):
    """Real eigen-pairs of the unit squeeze and displacement generators.

    Squeezing and displacement along the real axis are exp(i s H) with
    H = -i(a^dag^2 - a^2)/2 and H = -i(a^dag - a).  Conjugating by
    diag(e^{-i pi n/4}) (resp. diag(e^{-i pi n/2})) makes each H real
    symmetric, so one real decomposition serves every magnitude ``s``.
    Returns ``(gauge, w, v)`` per generator with H = gauge v w v^T gauge^*.
    """
    n = np.arange(dim)
    root = np.sqrt(np.arange(1, dim, dtype=float))
    sq = np.zeros((dim, dim))
    k = np.arange(dim - 2)
    sq[k + 2, k] = sq[k, k + 2] = 0.5 * root[k] * root[k + 1]
    disp = np.diag(root, 1) + np.diag(root, -1)
    out = []
    for gauge, herm in ((np.exp(-0.25j * np.pi * n), sq), (np.exp(-0.5j * np.pi * n), disp)):
        w, v = np.linalg.eigh(herm)
        out.append((gauge, w, v))
    return tuple(out)


def _real_matmul(m: np.ndarray, z: np.ndarray) -> np.ndarray:
    # .real/.imag are strided views; BLAS needs contiguous operands to be fast.
    return m @ np.ascontiguousarray(z.real) + 1j * (m @ np.ascontiguousarray(z.imag))


def _apply_generator(which: int, magnitude: float, angle: float, cols: np.ndarray) -> np.ndarray:
    # Conjugating with exp(i angle n) rotates the real-axis generator:
    # a -> a e^{-i angle}.
    dim = cols.shape[0]
    gauge, w, v = _unit_generators(dim)[which]
    left = (np.exp(1j * angle * np.arange(dim)) * gauge)[:, None]
    out = _real_matmul(v.T, np.conj(left) * cols)
    out = _real_matmul(v, np.exp(1j * magnitude * w)[:, None] * out)
    return left * out


def squeeze_matrix(r: float, phi: float, dim: int) -> np.ndarray:
    """Squeeze operator that stretches the quadrature at angle ``phi`` by e^{r}.

    Exponential of (r/2)(e^{2i phi} a^dag^2 - e^{-2i phi} a^2) in the truncated basis.
    """
    return _apply_generator(0, r, phi, np.eye(dim, dtype=complex))


def displacement_matrix(x: complex, dim: int) -> np.ndarray:
    """Exponential of x a^dag - x^* a in the truncated basis."""
    return _apply_generator(1, abs(x), cmath.phase(x), np.eye(dim, dtype=complex))


def thermal_populations(n_bar: float, dim: int) -> np.ndarray:
    n = np.arange(dim)
    if n_bar == 0:
        out = np.zeros(dim)
        out[0] = 1.0
        return out
    return (n_bar / (n_bar + 1.0)) ** n / (n_bar + 1.0)


def unitarity_error(u: np.ndarray) -> float:
    return float(np.abs(u.conj().T @ u - np.eye(u.shape[0])).max())


def suggested_dim(params_list) -> int:
    """Starting truncation for a set of states, before convergence doubling."""
    n_max = max(p.n_bar for p in params_list)
    x_max = max(abs(p.x) for p in params_list)
    r_max = max(abs(p.r) for p in params_list)
    return math.ceil(20 + 8 * (n_max + x_max**2 + math.exp(2 * r_max)))


def fock_density_matrix(
    params: SqueezedThermalParams, dim: int, truncation_tol: float = 1e-10
) -> FockDensityMatrix:
    """Number-basis matrix of the displaced, squeezed thermal state ``params``.

    Operators are exponentiated in a basis padded by ``dim // 2`` so that the
    kept block is free of edge effects from truncating the ladder operators;
    the weight lost when cutting back to ``dim`` is reported and, if larger than
    ``truncation_tol``, raises :class:`TruncationError`.
    """
    if dim < MIN_DIM:
        raise DomainError(f"dim must be >= {MIN_DIM}, got {dim}")
    if params.n_bar < 0:
        raise DomainError(f"n_bar must be >= 0, got {params.n_bar}")
    big = dim + dim // 2
    pops = thermal_populations(params.n_bar, big)
    keep = pops > POPULATION_FLOOR
    u = np.eye(big, dtype=complex)[:, keep]
    if params.r != 0:
        u = _apply_generator(0, params.r, params.phi, u)
    if params.x != 0:
        u = _apply_generator(1, abs(params.x), cmath.phase(params.x), u)
    factor = u[:dim] * np.sqrt(pops[keep])
    kept = float(np.sum(np.abs(factor) ** 2))
    # Population beyond the padded basis (thermal tail) counts as lost too.
    deficit = max(1.0 - kept, 0.0)
    if deficit > truncation_tol:
        raise TruncationError(
            f"dim={dim} keeps only {kept:.12f} of the trace (deficit {deficit:.2e}); "
            "increase the truncation"
        )
    factor = factor / math.sqrt(kept)
    return FockDensityMatrix(factor @ factor.conj().T, deficit, factor)


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    if w.min() < -NEG_EIG_TOL:
        raise InvalidDensityError(f"eigenvalue {w.min():.3e} below -{NEG_EIG_TOL}")
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def uhlmann_fidelity_fock(rho1: FockDensityMatrix, rho2: FockDensityMatrix) -> float:
    """Uhlmann fidelity (Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)))^2.

    Plain matrices go through Hermitian eigendecompositions, clipping
    eigenvalues in [-1e-10, 0) to zero.  When both arguments carry a
    square-root factor ``L`` the trace norm of ``L1^dag L2`` is used instead,
    which is the same quantity without amplified round-off.
    """
    f1 = getattr(rho1, "factor", None)
    f2 = getattr(rho2, "factor", None)
    m1 = getattr(rho1, "entries", rho1)
    m2 = getattr(rho2, "entries", rho2)
    if m1.shape != m2.shape:
        raise DomainError(f"dimension mismatch: {m1.shape} vs {m2.shape}")
    if f1 is not None and f2 is not None:
        sv = np.linalg.svd(f1.conj().T @ f2, compute_uv=False)
        return float(sv.sum() ** 2)
    s1 = _psd_sqrt(m1)
    inner = s1 @ m2 @ s1
    w = np.linalg.eigvalsh(0.5 * (inner + inner.conj().T))
    if w.min() < -NEG_EIG_TOL:
        raise InvalidDensityError(f"eigenvalue {w.min():.3e} below -{NEG_EIG_TOL}")
    return float(np.sqrt(np.clip(w, 0.0, None)).sum() ** 2)


class FockFidelity(NamedTuple):
    value: float
    dim: int
    change: float


def fock_fidelity(
    s1: GaussianState, s2: GaussianState, tol: float = 1e-8, dim: int | None = None
) -> FockFidelity:
    """Uhlmann fidelity of two Gaussian states with a convergence-checked truncation.

    The truncation starts at :func:`suggested_dim` (or ``dim``) and doubles until
    doubling once more changes the result by less than ``tol``.
    """
    for s in (s1, s2):
        if not is_physical(s):
            raise DomainError(f"unphysical state {s}")
    p1, p2 = to_thermal_params(s1), to_thermal_params(s2)
    if dim is None:
        # Powers of two keep the cached generator decompositions reusable.
        dim = 1 << max(6, math.ceil(math.log2(suggested_dim([p1, p2]))))

    def at(d):
        try:
            return uhlmann_fidelity_fock(
                fock_density_matrix(p1, d, tol), fock_density_matrix(p2, d, tol)
            )
        except TruncationError:
            return None

    current = at(dim)
    while dim * 2 <= MAX_DIM:
        nxt = at(dim * 2)
        if current is not None and nxt is not None and abs(nxt - current) < tol:
            return FockFidelity(current, dim, abs(nxt - current))
        current, dim = nxt, dim * 2
    raise TruncationError(f"Fock fidelity did not converge to {tol} below dim {MAX_DIM}")


def epr_overlap_fidelity(v1: float, v2: float, n_terms: int = 4096) -> float:
    """Fidelity of two thermal states as the overlap of their two-mode purifications.

    Each thermal state of variance ``v`` is the reduction of a two-mode squeezed
    vacuum with Schmidt coefficients ``sqrt(1/G) ((G-1)/G)^{n/2}``, ``G = (v+1)/2``.
    """
    if v1 < 1 or v2 < 1:
        raise DomainError(f"variances must be >= 1, got {v1}, {v2}")
    if n_terms < 16:
        raise DomainError(f"n_terms must be >= 16, got {n_terms}")
    n = np.arange(n_terms)

    def schmidt(v):
        g = (v + 1.0) / 2.0
        return np.sqrt(1.0 / g) * ((g - 1.0) / g) ** (n / 2.0)

    return float(np.dot(schmidt(v1), schmidt(v2)) ** 2)


@dataclass(frozen=True)
class GridSpec:
    half_extent_sigmas: float = 6.0
    points_per_axis: int = 801

    def __post_init__(self):
        if self.points_per_axis < 101 or self.points_per_axis % 2 == 0:
            raise DomainError(
                f"points_per_axis must be odd and >= 101, got {self.points_per_axis}"
            )
        if self.half_extent_sigmas <= 0:
            raise DomainError("half_extent_sigmas must be positive")

    def refined(self) -> GridSpec:
        return GridSpec(self.half_extent_sigmas, 2 * self.points_per_axis - 1)


def _grid(s1: GaussianState, s2: GaussianState, grid: GridSpec):
    # sigma of the alpha variable is sqrt(V)/2 in shot-noise units.
    sigma = 0.5 * math.sqrt(max(s1.v_plus, s1.v_minus, s2.v_plus, s2.v_minus))
    half = grid.half_extent_sigmas * sigma
    lo_r = min(s1.delta_re, s2.delta_re) - half
    hi_r = max(s1.delta_re, s2.delta_re) + half
    lo_i = min(s1.delta_im, s2.delta_im) - half
    hi_i = max(s1.delta_im, s2.delta_im) + half
    n = grid.points_per_axis
    hr, hi = (hi_r - lo_r) / n, (hi_i - lo_i) / n
    xr = lo_r + hr * (np.arange(n) + 0.5)
    xi = lo_i + hi * (np.arange(n) + 0.5)
    ar, ai = np.meshgrid(xr, xi, indexing="ij")
    return ar, ai, hr * hi


def classical_fidelity_grid(
    s1: GaussianState, s2: GaussianState, grid: GridSpec = GridSpec()
) -> float:
    """Squared midpoint-rule integral of sqrt(W1 W2) over phase space."""
    ar, ai, cell = _grid(s1, s2, grid)
    integrand = np.sqrt(wigner(s1, ar, ai) * wigner(s2, ar, ai))
    return float((integrand.sum() * cell) ** 2)


class OverlapResult(NamedTuple):
    value: float
    is_fidelity: bool


def wigner_overlap(
    s1: GaussianState, s2: GaussianState, grid: GridSpec = GridSpec()
) -> OverlapResult:
    """pi times the phase-space overlap of two Wigner functions.

    This equals the Uhlmann fidelity only when at least one state is pure;
    ``is_fidelity`` records whether that holds.
    """
    ar, ai, cell = _grid(s1, s2, grid)
    value = math.pi * float((wigner(s1, ar, ai) * wigner(s2, ar, ai)).sum() * cell)
    return OverlapResult(value, s1.is_pure or s2.is_pure)


def wigner_integral(state: GaussianState, grid: GridSpec = GridSpec()) -> float:
    ar, ai, cell = _grid(state, state, grid)
    return float(wigner(state, ar, ai).sum() * cell)


def quadrature_moments(rho: FockDensityMatrix, theta: float) -> tuple[float, float]:
    """Mean and variance of X(theta) = a e^{-i theta} + a^dag e^{i theta}."""
    a = annihilation(rho.dim)
    x = a * np.exp(-1j * theta)
    x = x + x.conj().T
    mean = rho.expectation(x).real
    second = rho.expectation(x @ x).real
    return mean, second - mean**2
