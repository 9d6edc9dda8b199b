import math

import numpy as np
import pytest

import qudex


def test_basis_orthogonality():
    gens = qudex.basis(3)
    assert len(gens) == 8
    for a, ga in enumerate(gens):
        assert abs(np.trace(ga)) < 1e-14
        assert np.allclose(ga, ga.conj().T)
        for b, gb in enumerate(gens):
            want = 2.0 if a == b else 0.0
            assert abs(np.trace(ga @ gb).real - want) < 1e-13


def test_expand_roundtrip():
    rng = np.random.default_rng(7)
    raw = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    H = (raw + raw.conj().T) / 2
    h0, coeffs = qudex.expand(H)
    back = qudex.reconstruct(h0, coeffs, 4)
    assert np.max(np.abs(back - H)) < 1e-12


def test_qubit_solve_matches_numpy():
    H = qudex.qubit_hamiltonian(0.3, 1.0, -0.4, 0.8)
    out = qudex.solve_extremal(H, np.zeros(1), seed=5)
    energies = sorted(s["energy"] for s in out["solutions"])
    ref = np.linalg.eigvalsh(H)
    assert len(energies) == 2
    assert max(abs(e - r) for e, r in zip(energies, ref)) < 1e-8
    for s in out["solutions"]:
        assert s["residual"] <= 1e-8
        assert s["classification"] == "isolated"


def test_qutrit_pure_solve():
    H = qudex.bec_hamiltonian(0.5, -1.0, 0.7)
    out = qudex.solve_extremal(H, np.zeros(2), seed=3)
    energies = sorted(s["energy"] for s in out["solutions"])
    ref = np.linalg.eigvalsh(H)
    assert len(energies) == 3
    assert max(abs(e - r) for e, r in zip(energies, ref)) < 1e-8


def test_check_bounds_dict():
    rho = np.diag([0.7, 0.3]).astype(complex)
    H = qudex.qubit_hamiltonian(0.0, 0.0, 0.0, 1.0)
    rep = qudex.check_bounds(rho, H)
    assert rep["passes"]
    assert rep["slack"] >= -1e-9
    assert rep["diff_slack"] >= -1e-9
    # entropy of (0.7, 0.3)
    want = -(0.7 * math.log(0.7) + 0.3 * math.log(0.3))
    assert abs(rep["entropy"] - want) < 1e-12


def test_closed_form_surface_value():
    val = qudex.qubit_F_closed(2.0, 0.0)
    assert abs(val - math.log(math.cosh(1.0))) < 1e-14
    with pytest.raises(ValueError):
        qudex.qubit_F_closed(1.0, 1.0)


def test_feasibility():
    res = qudex.is_feasible(np.array([0.3125, 0.03125]), 3)
    assert res["feasible"]
    assert np.allclose(sorted(res["spectrum"], reverse=True), [0.5, 0.25, 0.25])
    assert not qudex.is_feasible(np.array([0.3]), 2)["feasible"]
