import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ungas.dynamics import (
    DynamicsError,
    InitialState,
    amplitudes,
    amplitudes_from_phases,
    concurrence_pair,
    concurrence_wootters,
    dense_amplitudes,
    evolve_dense,
    phases_from_couplings,
    reduced_density,
    reduced_hamiltonian,
)
from ungas.scheme import stratify

from conftest import BUILTINS, random_dual_couplings, setup_for


def test_zero_couplings_give_zero_hamiltonian(d6):
    assert np.all(reduced_hamiltonian(d6.A, [0, 0, 0]) == 0)


def test_d6_spectrum(d6):
    H = reduced_hamiltonian(d6.A, [0, 1, 0])
    w = np.sort(np.linalg.eigvalsh(H))
    assert np.allclose(w, [-2, -2, -2, -2, 4, 4])


def test_trivial_hamiltonian():
    H = reduced_hamiltonian([np.eye(1)], [0.3])
    assert H.tolist() == [[0.6]]


def test_hamiltonian_rejects_non_dual_couplings():
    s = setup_for("Z6")
    J = np.zeros(6)
    J[s.p.class_of[1]] = 1.0
    with pytest.raises(DynamicsError, match="dual"):
        reduced_hamiltonian(s.A, J)
    with pytest.raises(DynamicsError, match="dual"):
        amplitudes(s.em, J, 1.0)


def test_amplitudes_at_zero_time(builtin):
    J = np.ones(len(builtin.p))
    a = amplitudes(builtin.em, J, 0.0).alpha
    assert np.allclose(a, np.eye(len(a))[0])


@pytest.mark.parametrize("name", list(BUILTINS))
def test_amplitudes_match_dense_evolution(name, rng):
    s = setup_for(name)
    strata = stratify(s.g, s.p)
    for _ in range(5):
        J = random_dual_couplings(rng, s.p.dual)
        t = rng.uniform(0, 3)
        U = evolve_dense(reduced_hamiltonian(s.A, J), t)
        dense = dense_amplitudes(U, strata, reference=s.g.identity)
        assert np.abs(amplitudes(s.em, J, t).alpha - dense).max() < 1e-9


def test_uniform_couplings_against_dense(builtin):
    strata = stratify(builtin.g, builtin.p)
    J = np.full(len(builtin.p), 0.7)
    U = evolve_dense(reduced_hamiltonian(builtin.A, J), 1.3)
    dense = dense_amplitudes(U, strata)
    assert np.abs(amplitudes(builtin.em, J, 1.3).alpha - dense).max() < 1e-9


@pytest.mark.parametrize("name", list(BUILTINS))
def test_normalization_on_time_grid(name, rng):
    s = setup_for(name)
    J = random_dual_couplings(rng, s.p.dual)
    for t in np.linspace(0, 10, 100):
        assert amplitudes(s.em, J, t).norm_residual < 1e-12


@pytest.mark.parametrize("name", list(BUILTINS))
def test_dual_strata_share_amplitude(name, rng):
    s = setup_for(name)
    J = random_dual_couplings(rng, s.p.dual)
    a = amplitudes(s.em, J, 0.9).alpha
    assert np.abs(a - a[list(s.p.dual)]).max() < 1e-12


def test_evolve_dense_properties(d6, rng):
    H = reduced_hamiltonian(d6.A, [0.1, 0.4, -0.3])
    assert np.allclose(evolve_dense(H, 0.0), np.eye(6))
    t1, t2 = rng.uniform(0, 2, size=2)
    lhs = evolve_dense(H, t1) @ evolve_dense(H, t2)
    assert np.abs(lhs - evolve_dense(H, t1 + t2)).max() < 1e-9


def test_phases_reproduce_amplitudes(builtin, rng):
    J = random_dual_couplings(rng, builtin.p.dual)
    theta = phases_from_couplings(builtin.em, J, 0.8)
    z = builtin.z
    kept = [rows[0] for rows in z.row_members]
    merged = amplitudes_from_phases(z, theta[kept])
    raw = amplitudes(builtin.em, J, 0.8).alpha
    for m, members in enumerate(z.col_members):
        assert abs(merged[m] - raw[members[0]]) < 1e-12


def test_amplitudes_from_phases_d6(d6):
    a = amplitudes_from_phases(d6.z, [0, 0, np.pi])
    assert np.allclose(a, [(1 + 1 - 4) / 6, (1 + 1 + 2) / 6, (1 - 1) / 6])
    assert np.allclose(amplitudes_from_phases(d6.z, [0, 0, 0]), [1, 0, 0])


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(0, 2 * np.pi), min_size=5, max_size=5))
def test_phase_amplitudes_are_normalized(theta):
    z = setup_for("SL23").z
    a = amplitudes_from_phases(z, theta)
    assert abs(np.dot(z.merged_kappa, np.abs(a) ** 2) - 1) < 1e-12


# -- concurrence ---------------------------------------------------------------

def test_reduced_density_limits():
    rho = reduced_density(InitialState(0.0), 1.0, 0.0)
    assert np.allclose(rho, np.diag([0, 0, 1, 0]))
    rho = reduced_density(InitialState(np.pi / 2), 0.3, 0.4)
    assert np.allclose(rho, np.diag([1, 0, 0, 0]))
    h = 1 / np.sqrt(2)
    rho = reduced_density(InitialState(0.0), h, h)
    assert np.allclose(rho[1:3, 1:3], 0.5)


def test_reduced_density_rejects_overfull():
    with pytest.raises(DynamicsError):
        reduced_density(InitialState(0.0), 0.9, 0.9)


def test_initial_state_validation():
    with pytest.raises(DynamicsError):
        InitialState(theta=2.0)
    with pytest.raises(DynamicsError):
        InitialState(phi=-0.1)


def test_wootters_reference_states():
    psi = np.array([0, 1, 1, 0]) / np.sqrt(2)
    assert concurrence_wootters(np.outer(psi, psi)) == pytest.approx(1.0, abs=1e-12)
    a, b = np.array([0.6, 0.8j]), np.array([1, 1]) / np.sqrt(2)
    prod = np.kron(a, b)
    assert concurrence_wootters(np.outer(prod, prod.conj())) < 1e-12
    h = 1 / np.sqrt(2)
    assert concurrence_wootters(reduced_density(InitialState(0.0), h, h)) == pytest.approx(1.0, abs=1e-12)


def test_concurrence_pair_examples(d6):
    h = 1 / np.sqrt(2)
    assert concurrence_pair(InitialState(0.0), h, h) == pytest.approx(1.0)
    assert concurrence_pair(InitialState(0.7, 1.0), 0.0, 0.5) == 0.0
    assert concurrence_pair(InitialState(0.0), 2 / 3, 2 / 3) == pytest.approx(8 / 9)


def _random_pair(rng):
    v = rng.normal(size=4)
    f, fp = complex(v[0], v[1]), complex(v[2], v[3])
    r = rng.uniform(0, 1) / np.sqrt(abs(f) ** 2 + abs(fp) ** 2)
    return f * r, fp * r


def test_closed_form_matches_wootters_at_any_theta(rng):
    for _ in range(50):
        f, fp = _random_pair(rng)
        s = InitialState(rng.uniform(0, np.pi / 2), rng.uniform(0, 2 * np.pi))
        assert abs(concurrence_wootters(reduced_density(s, f, fp)) - concurrence_pair(s, f, fp)) < 1e-10


def test_theta_zero_is_optimal(rng):
    for _ in range(20):
        f, fp = _random_pair(rng)
        phi = rng.uniform(0, 2 * np.pi)
        sweep = [concurrence_wootters(reduced_density(InitialState(th, phi), f, fp))
                 for th in np.arange(0, 1.51, 0.1)]
        assert int(np.argmax(sweep)) == 0
