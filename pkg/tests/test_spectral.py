"""Tests for superoperator matricization and spectral analysis."""

import numpy as np
import pytest

from dqwalk.errors import ValidationError
from dqwalk.linalg import hs_inner, hs_norm
from dqwalk.quantum import NoisyUnitaryMixture, apply_mixture
from dqwalk.spectral import (
    adjoint_channel,
    adjoint_mixture,
    check_orthogonality,
    check_unit_eigenoperator_conditions,
    matricize,
    peripheral_spectrum,
    unvec,
    vec,
    verify_eigenspace_structure,
)
from dqwalk.walk import (
    CoinOperator,
    WalkSpec,
    build_channel,
    parity_sign_operator,
)


def hadamard_spec(n, q):
    return WalkSpec(n, q, CoinOperator.hadamard())


def random_matrix(rng, n):
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


def random_hermitian(rng, n):
    a = random_matrix(rng, n)
    return (a + a.conj().T) / 2


def basis_projectors(n):
    out = []
    for k in range(n):
        p = np.zeros((n, n))
        p[k, k] = 1.0
        out.append(p)
    return tuple(out)


def dephasing_only_mixture(n):
    """Pure dephasing written as an identity unitary mixed with projector noise."""
    return NoisyUnitaryMixture(((0.5, np.eye(n)),), 0.5, basis_projectors(n))


# --- vec / unvec -------------------------------------------------------------


def test_vec_stacks_columns():
    m = np.array([[1, 2], [3, 4]])
    np.testing.assert_array_equal(vec(m), [1, 3, 2, 4])


def test_unvec_round_trip():
    rng = np.random.default_rng(0)
    m = random_matrix(rng, 5)
    np.testing.assert_array_equal(unvec(vec(m), 5), m)


def test_vec_column_stacking_identity():
    """vec(A X B) = (B^T ⊗ A) vec(X) pins the matricization convention."""
    rng = np.random.default_rng(1)
    a, x, b = (random_matrix(rng, 4) for _ in range(3))
    np.testing.assert_allclose(
        vec(a @ x @ b), np.kron(b.T, a) @ vec(x), atol=1e-12
    )


# --- matricize ---------------------------------------------------------------


def test_matricize_identity_channel():
    g = NoisyUnitaryMixture(((1.0, np.eye(3)),), 0.0, ())
    np.testing.assert_allclose(matricize(g).mat, np.eye(9), atol=1e-14)


def test_matricize_single_unitary_is_unitary():
    rng = np.random.default_rng(2)
    u, _ = np.linalg.qr(random_matrix(rng, 4))
    g = NoisyUnitaryMixture(((1.0, u),), 0.0, ())
    m = matricize(g).mat
    np.testing.assert_allclose(m, np.kron(u.conj(), u), atol=1e-14)
    np.testing.assert_allclose(m.conj().T @ m, np.eye(16), atol=1e-12)


def test_matricize_agrees_with_direct_application():
    rng = np.random.default_rng(3)
    g = build_channel(hadamard_spec(3, 0.3))
    m = matricize(g).mat
    for _ in range(10):
        x = random_matrix(rng, 6)
        np.testing.assert_allclose(
            unvec(m @ vec(x), 6), apply_mixture(g, x), atol=1e-12
        )


def test_matricize_column_is_image_of_matrix_unit():
    g = build_channel(hadamard_spec(3, 0.4))
    m = matricize(g).mat
    e = np.zeros((6, 6))
    e[2, 1] = 1.0  # column index 1*6 + 2 under column stacking
    np.testing.assert_allclose(m[:, 1 * 6 + 2], vec(apply_mixture(g, e)), atol=1e-13)


def test_matricize_spectral_radius_bounded():
    for spec in (hadamard_spec(4, 0.25), hadamard_spec(5, 0.7)):
        m = matricize(build_channel(spec)).mat
        assert np.max(np.abs(np.linalg.eigvals(m))) <= 1 + 1e-9


# --- adjoint -----------------------------------------------------------------


def test_adjoint_of_single_unitary_conjugates_backwards():
    rng = np.random.default_rng(4)
    u, _ = np.linalg.qr(random_matrix(rng, 3))
    g = NoisyUnitaryMixture(((1.0, u),), 0.0, ())
    x = random_matrix(rng, 3)
    np.testing.assert_allclose(
        apply_mixture(adjoint_mixture(g), x), u.conj().T @ x @ u, atol=1e-13
    )


def test_adjoint_channel_is_unital():
    g_adj = adjoint_channel(hadamard_spec(4, 0.5))
    np.testing.assert_allclose(apply_mixture(g_adj, np.eye(8)), np.eye(8), atol=1e-13)


def test_adjoint_satisfies_inner_product_duality():
    rng = np.random.default_rng(6)
    spec = hadamard_spec(4, 0.5)
    g = build_channel(spec)
    g_adj = adjoint_channel(spec)
    for _ in range(20):
        x, y = random_matrix(rng, 8), random_matrix(rng, 8)
        lhs = hs_inner(apply_mixture(g_adj, x), y)
        rhs = hs_inner(x, apply_mixture(g, y))
        assert abs(lhs - rhs) <= 1e-12 * hs_norm(x) * hs_norm(y)


def test_adjoint_channel_matches_adjoint_of_built_mixture():
    rng = np.random.default_rng(7)
    spec = hadamard_spec(3, 0.6)
    x = random_matrix(rng, 6)
    np.testing.assert_allclose(
        apply_mixture(adjoint_channel(spec), x),
        apply_mixture(adjoint_mixture(build_channel(spec)), x),
        atol=1e-13,
    )


# --- peripheral spectrum -----------------------------------------------------


def test_odd_cycle_peripheral_spectrum_is_one():
    report = peripheral_spectrum(matricize(build_channel(hadamard_spec(5, 0.25))))
    distinct = report.distinct_eigenvalues()
    assert len(distinct) == 1 and len(report.peripheral) == 1
    assert distinct[0] == pytest.approx(1.0, abs=1e-9)
    mode = report.peripheral[0]
    # unit eigenmatrix proportional to the identity
    np.testing.assert_allclose(
        mode.eigenmatrix, np.eye(10) / np.sqrt(10), atol=1e-8
    )
    assert report.interior_max_modulus < 1 - 1e-6


def test_even_cycle_peripheral_spectrum_is_plus_minus_one():
    report = peripheral_spectrum(matricize(build_channel(hadamard_spec(4, 0.25))))
    distinct = report.distinct_eigenvalues()
    assert len(distinct) == 2 and len(report.peripheral) == 2
    values = sorted(v.real for v in distinct)
    assert values[0] == pytest.approx(-1.0, abs=1e-9)
    assert values[1] == pytest.approx(1.0, abs=1e-9)
    assert max(abs(v.imag) for v in distinct) < 1e-9


def test_even_cycle_negative_mode_is_parity_operator():
    report = peripheral_spectrum(matricize(build_channel(hadamard_spec(4, 0.25))))
    neg = [m for m in report.peripheral if m.eigenvalue.real < 0][0]
    target = parity_sign_operator(4) / np.sqrt(8)
    np.testing.assert_allclose(neg.eigenmatrix, target, atol=1e-8)


def test_dephasing_only_mixture_has_degenerate_peripheral_unit():
    """Without a walk unitary the whole diagonal subspace is fixed."""
    g = dephasing_only_mixture(4)
    report = peripheral_spectrum(matricize(g))
    distinct = report.distinct_eigenvalues()
    assert len(distinct) == 1 and len(report.peripheral) == 4
    assert distinct[0] == pytest.approx(1.0, abs=1e-9)
    # cluster comes back orthonormalized
    for i, a in enumerate(report.peripheral):
        for j, b in enumerate(report.peripheral):
            expected = 1.0 if i == j else 0.0
            assert abs(hs_inner(a.eigenmatrix, b.eigenmatrix) - expected) < 1e-10


def test_peripheral_modes_have_small_residual_and_fixed_phase():
    for spec in (hadamard_spec(5, 0.3), hadamard_spec(6, 0.5)):
        s = matricize(build_channel(spec))
        report = peripheral_spectrum(s)
        for mode in report.peripheral:
            assert mode.residual <= 1e-7
            assert hs_norm(mode.eigenmatrix) == pytest.approx(1.0, abs=1e-10)
            lead = np.diagonal(mode.eigenmatrix)[0]
            assert lead.real > 0 and abs(lead.imag) < 1e-10


def test_peripheral_and_interior_eigenvectors_are_orthogonal():
    """Peripheral eigenvectors of the matricized channel are orthogonal to every
    interior eigenvector, not just to each other."""
    s = matricize(build_channel(hadamard_spec(4, 0.25)))
    w, v = np.linalg.eig(s.mat)
    peri = [v[:, i] for i in range(len(w)) if abs(w[i]) > 1 - 1e-6]
    interior = [v[:, i] for i in range(len(w)) if abs(w[i]) <= 1 - 1e-6]
    assert len(peri) == 2
    worst = max(
        abs(np.vdot(p, x)) / (np.linalg.norm(p) * np.linalg.norm(x))
        for p in peri
        for x in interior
    )
    assert worst <= 1e-7


def test_spectral_report_json_shape():
    report = peripheral_spectrum(matricize(build_channel(hadamard_spec(3, 0.5))))
    data = report.to_json()
    assert set(data) == {"peripheral", "interior_max_modulus", "tol"}
    assert data["peripheral"][0]["re"] == pytest.approx(1.0)
    assert len(data["peripheral"][0]["eigenmatrix"]) == 6


# --- eigenspace structure ----------------------------------------------------


def test_structure_check_passes_for_odd_and_even_cycles():
    for n, q in ((5, 0.25), (4, 0.25), (6, 0.4)):
        spec = hadamard_spec(n, q)
        report = peripheral_spectrum(matricize(build_channel(spec)))
        check = verify_eigenspace_structure(report, n)
        assert check.passed, check.detail
        targets = sorted(m.target for m in check.matches)
        if n % 2 == 0:
            assert targets == ["parity", "uniform"]
        else:
            assert targets == ["uniform"]


def test_structure_check_detects_tampered_mode():
    spec = hadamard_spec(5, 0.25)
    report = peripheral_spectrum(matricize(build_channel(spec)))
    bad = np.zeros((10, 10))
    bad[0, 0] = 1.0
    report.peripheral[0] = type(report.peripheral[0])(
        eigenvalue=report.peripheral[0].eigenvalue,
        eigenmatrix=bad,
        residual=report.peripheral[0].residual,
    )
    check = verify_eigenspace_structure(report, 5)
    assert not check.passed
    assert "deviates" in check.detail


# --- two-sided eigenoperator conditions --------------------------------------


def test_identity_satisfies_conditions_both_ways():
    g = build_channel(hadamard_spec(5, 0.3))
    result = check_unit_eigenoperator_conditions(g, np.eye(10), 1.0)
    assert result.forward_pass and result.backward_pass and result.equivalent


def test_parity_operator_satisfies_conditions_at_minus_one():
    g = build_channel(hadamard_spec(4, 0.3))
    x = parity_sign_operator(4)
    result = check_unit_eigenoperator_conditions(g, x, -1.0)
    assert result.forward_pass and result.backward_pass
    assert max(result.intertwine_residuals) <= 1e-8 * hs_norm(x)


def test_random_operator_fails_conditions_both_ways():
    rng = np.random.default_rng(11)
    g = build_channel(hadamard_spec(5, 0.3))
    failures = 0
    for _ in range(5):
        x = random_hermitian(rng, 10)
        x = x - np.trace(x) * np.eye(10) / 10  # remove the fixed component
        result = check_unit_eigenoperator_conditions(g, x, 1.0)
        assert result.equivalent  # both sides agree it is not an eigenoperator
        if not result.forward_pass:
            failures += 1
    assert failures == 5


def test_conditions_reject_interior_eigenvalue():
    g = build_channel(hadamard_spec(3, 0.5))
    with pytest.raises(ValidationError):
        check_unit_eigenoperator_conditions(g, np.eye(6), 0.5)


# --- orthogonality of peripheral modes ---------------------------------------


def test_distinct_peripheral_modes_are_orthogonal():
    for n in (4, 6):
        report = peripheral_spectrum(matricize(build_channel(hadamard_spec(n, 0.3))))
        check = check_orthogonality(report)
        assert check.passed
        assert check.pairs_checked == 1
        assert check.max_overlap < 1e-10


def test_orthogonality_is_vacuous_for_single_eigenvalue():
    report = peripheral_spectrum(matricize(build_channel(hadamard_spec(5, 0.3))))
    check = check_orthogonality(report)
    assert check.passed and check.pairs_checked == 0
