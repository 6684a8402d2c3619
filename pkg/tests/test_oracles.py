import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gaussfid.errors import DomainError, InvalidDensityError, TruncationError
from gaussfid.fidelity import classical_fidelity, quantum_fidelity, thermal_fidelity
from gaussfid.oracles import (
    FockDensityMatrix,
    GridSpec,
    _expm_antihermitian,
    annihilation,
    classical_fidelity_grid,
    displacement_matrix,
    epr_overlap_fidelity,
    fock_density_matrix,
    fock_fidelity,
    quadrature_moments,
    squeeze_matrix,
    uhlmann_fidelity_fock,
    unitarity_error,
    wigner_integral,
    wigner_overlap,
)
from gaussfid.state import (
    GaussianState,
    SqueezedThermalParams,
    coherent,
    thermal,
    to_thermal_params,
    vacuum,
)

P = SqueezedThermalParams.from_n_bar
SQ = GaussianState(2.0, 0.5)
SQ_PERP = GaussianState(2.0, 0.5, math.pi / 2)


# -- Fock construction ------------------------------------------------------------


def test_vacuum_matrix_is_exact_projector():
    rho = fock_density_matrix(P(0.0), 8)
    expected = np.zeros((8, 8))
    expected[0, 0] = 1.0
    np.testing.assert_array_equal(rho.entries, expected)
    assert rho.trace_deficit == 0.0


def test_thermal_and_coherent_populations():
    rho = fock_density_matrix(P(0.5), 64)
    assert rho.entries[0, 0].real == pytest.approx(2 / 3, abs=1e-12)
    assert np.abs(rho.entries - np.diag(np.diag(rho.entries))).max() < 1e-15
    coh = fock_density_matrix(P(0.0, x_re=1.0), 64)
    assert coh.entries[0, 0].real == pytest.approx(math.exp(-1), abs=1e-12)


def test_dimension_and_truncation_errors():
    with pytest.raises(DomainError):
        fock_density_matrix(P(0.0), 4)
    with pytest.raises(TruncationError):
        fock_density_matrix(P(5.0), 16)


def test_generic_exponential_agrees_with_real_gauge_path():
    dim, r, phi, x = 40, 0.3, 0.6, 0.4 - 0.2j
    a = annihilation(dim)
    ad = a.conj().T
    gen = 0.5 * r * (np.exp(2j * phi) * ad @ ad - np.exp(-2j * phi) * a @ a)
    np.testing.assert_allclose(squeeze_matrix(r, phi, dim), _expm_antihermitian(gen), atol=1e-10)
    gen = x * ad - np.conj(x) * a
    np.testing.assert_allclose(displacement_matrix(x, dim), _expm_antihermitian(gen), atol=1e-10)
    assert unitarity_error(squeeze_matrix(r, phi, dim)) < 1e-10


def test_squeeze_stretches_axis_phi():
    rho = fock_density_matrix(P(0.0, 0.4, phi=0.7), 128)
    mean, var = quadrature_moments(rho, 0.7)
    assert var == pytest.approx(math.exp(0.8), rel=1e-9)
    assert quadrature_moments(rho, 0.7 + math.pi / 2)[1] == pytest.approx(math.exp(-0.8), rel=1e-9)
    assert abs(mean) < 1e-12


def test_displacement_sets_mean():
    rho = fock_density_matrix(P(0.0, x_re=0.3, x_im=-0.5), 128)
    assert quadrature_moments(rho, 0.0)[0] == pytest.approx(0.6, abs=1e-10)
    assert quadrature_moments(rho, math.pi / 2)[0] == pytest.approx(-1.0, abs=1e-10)


def test_matrix_is_valid_density():
    rho = fock_density_matrix(P(1.0, 0.5, 0.3, 0.5, 0.5), 128)
    m = rho.entries
    assert np.abs(m - m.conj().T).max() < 1e-10
    assert abs(np.trace(m).real - 1.0) < 1e-12
    assert np.linalg.eigvalsh(m).min() > -1e-10


# -- Uhlmann fidelity ---------------------------------------------------------------


def test_uhlmann_examples():
    rho = fock_density_matrix(P(0.7, 0.2), 64)
    assert uhlmann_fidelity_fock(rho, rho) == pytest.approx(1.0, abs=1e-9)
    vac, th = fock_density_matrix(P(0.0), 64), fock_density_matrix(P(0.5), 64)
    assert uhlmann_fidelity_fock(vac, th) == pytest.approx(2 / 3, abs=1e-9)
    th3 = fock_density_matrix(P(1.0), 128)
    assert uhlmann_fidelity_fock(fock_density_matrix(P(0.0), 128), th3) == pytest.approx(0.5, abs=1e-9)


def test_uhlmann_without_factors_uses_eigen_path():
    a, b = fock_density_matrix(P(0.5), 96), fock_density_matrix(P(1.0), 96)
    plain = uhlmann_fidelity_fock(FockDensityMatrix(a.entries), FockDensityMatrix(b.entries))
    assert plain == pytest.approx(thermal_fidelity(2.0, 3.0), abs=1e-8)


def test_uhlmann_rejects_invalid_matrix():
    bad = np.diag([1.2, -0.2] + [0.0] * 6).astype(complex)
    with pytest.raises(InvalidDensityError):
        uhlmann_fidelity_fock(FockDensityMatrix(bad), fock_density_matrix(P(0.0), 8))


def test_fock_fidelity_pure_squeezed_perpendicular():
    res = fock_fidelity(SQ, SQ_PERP)
    assert res.value == pytest.approx(0.8, abs=1e-8)
    assert res.change < 1e-8


def test_fock_fidelity_unsupported_regime_frozen():
    # misaligned and separated: agrees with the independent Wigner-overlap oracle
    s2 = GaussianState(2.0, 0.5, 0.5, 1.0, 0.0)
    assert fock_fidelity(SQ, s2).value == pytest.approx(0.518818543, abs=1e-9)
    s3 = GaussianState(3.0, 0.5, 0.7, 0.3, -0.2)
    assert fock_fidelity(SQ, s3).value == pytest.approx(0.672705248, abs=1e-9)


def test_fock_fidelity_mixed_aligned_displaced():
    s1 = GaussianState(3.0, 1.0, 0.4)
    s2 = GaussianState(1.5, 2.0, 0.4, 0.5, -0.3)
    assert fock_fidelity(s1, s2).value == pytest.approx(quantum_fidelity(s1, s2).value, abs=1e-7)


def test_fock_fidelity_rejects_unphysical():
    with pytest.raises(DomainError):
        fock_fidelity(GaussianState(0.5, 0.5), vacuum())


def test_displaced_vacua_overlap():
    assert fock_fidelity(vacuum(), coherent(1.0)).value == pytest.approx(math.exp(-1), abs=1e-8)
    assert fock_fidelity(thermal(3), thermal(3, 1 + 1j)).value == pytest.approx(
        math.exp(-2 / 3), abs=1e-8
    )


# -- EPR purification series ----------------------------------------------------------


def test_epr_examples():
    assert epr_overlap_fidelity(1.0, 1.0) == 1.0
    assert epr_overlap_fidelity(1.0, 2.0) == pytest.approx(2 / 3, abs=1e-12)
    assert epr_overlap_fidelity(1.02, 3.02) == pytest.approx(0.570, abs=1e-3)
    with pytest.raises(DomainError):
        epr_overlap_fidelity(0.5, 2.0)
    with pytest.raises(DomainError):
        epr_overlap_fidelity(1.0, 2.0, n_terms=8)


def test_epr_series_increases_with_terms():
    vals = [epr_overlap_fidelity(5.0, 12.0, n) for n in (16, 64, 256, 1024)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


@given(st.floats(1.0, 20.0), st.floats(1.0, 20.0))
def test_epr_series_equals_thermal_form(v1, v2):
    assert epr_overlap_fidelity(v1, v2) == pytest.approx(thermal_fidelity(v1, v2), abs=1e-9)


# -- grid oracles ----------------------------------------------------------------------


def test_grid_spec_validation():
    with pytest.raises(DomainError):
        GridSpec(points_per_axis=100)
    with pytest.raises(DomainError):
        GridSpec(points_per_axis=51)
    assert GridSpec(points_per_axis=101).refined().points_per_axis == 201


def test_grid_classical_examples():
    assert classical_fidelity_grid(SQ, SQ) == pytest.approx(1.0, abs=1e-6)
    assert classical_fidelity_grid(vacuum(), thermal(2.0)) == pytest.approx(8 / 9, abs=1e-6)
    assert classical_fidelity_grid(SQ, SQ_PERP) == pytest.approx(0.64, abs=1e-6)
    assert classical_fidelity_grid(vacuum(), thermal(2.0)) == pytest.approx(
        classical_fidelity_grid(vacuum(), thermal(2.0), GridSpec().refined()), abs=1e-8
    )


def test_wigner_overlap_examples():
    assert wigner_overlap(vacuum(), vacuum()).value == pytest.approx(1.0, abs=1e-6)
    r = wigner_overlap(vacuum(), thermal(2.0))
    assert r.value == pytest.approx(2 / 3, abs=1e-6) and r.is_fidelity
    assert wigner_overlap(vacuum(), coherent(1.0)).value == pytest.approx(math.exp(-1), abs=1e-6)
    assert not wigner_overlap(thermal(2.0), thermal(3.0)).is_fidelity


def test_wigner_normalized():
    assert wigner_integral(GaussianState(5.0, 0.3, 0.8, 1.0, -1.0)) == pytest.approx(1.0, abs=1e-9)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.2, 5), st.floats(1, 5), st.floats(0.2, 5), st.floats(-3, 3),
       st.floats(-1, 1), st.floats(-1, 1))
def test_wigner_overlap_matches_quantum_when_one_pure(a, breadth, v2m, phi, xr, xi):
    s1 = GaussianState(a, 1 / a)
    s2 = GaussianState(breadth / v2m, v2m, 0.0, xr, xi)
    assert wigner_overlap(s1, s2).value == pytest.approx(quantum_fidelity(s1, s2).value, abs=1e-6)
    s2c = GaussianState(breadth / v2m, v2m, phi)
    assert wigner_overlap(s1, s2c).value == pytest.approx(quantum_fidelity(s1, s2c).value, abs=1e-6)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.2, 8), st.floats(0.2, 8), st.floats(0.2, 8), st.floats(0.2, 8),
       st.floats(-3, 3), st.floats(-3, 3), st.floats(-1.5, 1.5), st.floats(-1.5, 1.5))
def test_grid_matches_closed_form_classical(v1p, v1m, v2p, v2m, p1, p2, xr, xi):
    s1, s2 = GaussianState(v1p, v1m, p1), GaussianState(v2p, v2m, p2, xr, xi)
    assert classical_fidelity_grid(s1, s2) == pytest.approx(classical_fidelity(s1, s2).value, abs=1e-6)


def test_fock_moments_match_state_variances():
    s = GaussianState(2.5, 0.8, 1.1)
    rho = fock_density_matrix(to_thermal_params(s), 128)
    for theta in (0.0, 0.5, 1.1):
        expected = s.v_plus * math.cos(theta - s.phi) ** 2 + s.v_minus * math.sin(theta - s.phi) ** 2
        assert quadrature_moments(rho, theta)[1] == pytest.approx(expected, rel=1e-9)
