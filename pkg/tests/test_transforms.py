import numpy as np
import pytest

from schrmaxwell.maxwell.grid import MediumParams
from schrmaxwell.maxwell.transforms import (GAUSS_SLOTS, SIGMA, build_transforms, rs_matrix,
                                            rs_pack, rs_source, rs_unpack, scaled_fields, sigma8)


def _unitary_dev(u):
    return np.abs(u.conj().T @ u - np.eye(u.shape[0])).max()


def test_rs_and_characteristic_maps_are_unitary():
    tr = build_transforms()
    assert _unitary_dev(tr.t_rs) <= 1e-14
    assert _unitary_dev(tr.u_char) <= 1e-14
    assert _unitary_dev(np.kron(np.eye(5), tr.u_char)) <= 1e-14


def test_pauli_matrices():
    for s in SIGMA:
        np.testing.assert_array_equal(s @ s, np.eye(2))
    np.testing.assert_array_equal(SIGMA[0] @ SIGMA[1], 1j * SIGMA[2])


def test_sigma1_diagonalised_by_characteristic_map():
    tr = build_transforms()
    np.testing.assert_allclose(tr.u_char.T @ tr.lambda1 @ tr.u_char, sigma8(0), atol=1e-15)
    np.testing.assert_allclose(np.kron(np.eye(2), SIGMA[0]), tr.sigma[0])


def test_sigma8_blocks():
    for d in range(3):
        s = sigma8(d)
        np.testing.assert_allclose(s, s.conj().T)
        np.testing.assert_allclose(s[4:, 4:], s[:4, :4].conj())
        assert not s[:4, 4:].any()


def test_scaled_fields_example():
    med = MediumParams.constant(4.0, 9.0)
    f = scaled_fields(np.array([[1.0], [0], [0]]), np.array([[0.0], [0], [3.0]]), med)
    np.testing.assert_allclose(f[:, 0], np.array([2, 0, 0, 0, 0, 0, 1, 0]) / np.sqrt(2))


def test_pack_unpack_round_trip_variable_medium(rng):
    n = 7
    med = MediumParams(rng.uniform(1, 3, n), rng.uniform(1, 3, n))
    e = rng.normal(size=(3, n)) + 1j * rng.normal(size=(3, n))
    b = rng.normal(size=(3, n))
    st = rs_pack(e, b, med)
    assert st.layout == "rs8" and st.n_points == n
    e2, b2 = rs_unpack(st, med)
    np.testing.assert_allclose(e2, e, atol=1e-14)
    np.testing.assert_allclose(b2, b, atol=1e-14)
    # |Psi|^2 is the weighted field energy at each point
    energy = (med.eps * np.sum(np.abs(e) ** 2, 0) + np.sum(np.abs(b) ** 2, 0) / med.mu) / 2
    np.testing.assert_allclose(np.sum(np.abs(st.blocks()) ** 2, 0), energy, rtol=1e-13)


def test_physical_fields_leave_gauss_slots_empty(rng):
    med = MediumParams.constant(2.0, 0.5)
    st = rs_pack(rng.normal(size=(3, 5)), rng.normal(size=(3, 5)), med)
    f = rs_matrix().conj().T @ st.blocks()
    for slot in GAUSS_SLOTS:
        assert np.abs(f[slot]).max() <= 1e-15


def test_rs_source_round_trip(rng):
    med = MediumParams.constant(4.0, 1.0)
    j = rng.normal(size=(3, 4))
    rho = rng.normal(size=4)
    raw = rs_matrix().conj().T @ rs_source(j, rho, med)
    np.testing.assert_allclose(raw[:3], j / np.sqrt(8), atol=1e-15)
    np.testing.assert_allclose(raw[7], -0.5 * rho / np.sqrt(8), atol=1e-15)
    assert np.abs(raw[3:7]).max() <= 1e-15


def test_medium_validation():
    with pytest.raises(ValueError):
        MediumParams.constant(-1.0)
    med = MediumParams(np.ones(3), np.ones(3))
    with pytest.raises(ValueError):
        scaled_fields(np.zeros((3, 4)), np.zeros((3, 4)), med)
    with pytest.raises(ValueError):
        rs_unpack(type(rs_pack(np.zeros((3, 3)), np.zeros((3, 3)), med))("eb", np.zeros(18), None), med)
