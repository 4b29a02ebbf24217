"""Riemann-Silberstein packing and the fixed 8x8 transforms."""

from dataclasses import dataclass

import numpy as np

from .grid import FieldState

SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

# slots of the 8-vector that are identically zero for physical fields
GAUSS_SLOTS = (3, 7)


@dataclass(frozen=True)
class TransformMatrices:
    t_rs: np.ndarray
    u_char: np.ndarray
    sigma: tuple
    lambda1: np.ndarray


def rs_matrix():
    """The unitary map from the scaled field vector to the RS state."""
    i = 1j
    return 0.5 * np.array([
        [-1, i, 0, 0, -i, -1, 0, 0],
        [0, 0, 1, i, 0, 0, i, -1],
        [0, 0, 1, -i, 0, 0, i, 1],
        [1, i, 0, 0, i, -1, 0, 0],
        [-1, -i, 0, 0, i, -1, 0, 0],
        [0, 0, 1, -i, 0, 0, -i, -1],
        [0, 0, 1, i, 0, 0, -i, 1],
        [1, -i, 0, 0, -i, -1, 0, 0],
    ], dtype=complex)


def build_transforms():
    hadamard = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    return TransformMatrices(
        t_rs=rs_matrix(),
        u_char=np.kron(np.eye(4), hadamard).astype(complex),
        sigma=tuple(np.kron(np.eye(2), s) for s in SIGMA),
        lambda1=np.kron(np.eye(4), np.diag([1.0, -1.0])).astype(complex),
    )


def sigma8(d):
    """``blockdiag(Sigma_d, conj(Sigma_d))``: the 8x8 symbol of d/dx_d."""
    s = np.kron(np.eye(2), SIGMA[d])
    out = np.zeros((8, 8), dtype=complex)
    out[:4, :4] = s
    out[4:, 4:] = s.conj()
    return out


def _medium_arrays(medium, n_points):
    eps = np.broadcast_to(medium.eps, (n_points,)) if medium.eps.size in (1, n_points) else None
    mu = np.broadcast_to(medium.mu, (n_points,)) if medium.mu.size in (1, n_points) else None
    if eps is None or mu is None:
        raise ValueError("medium samples do not match the field samples")
    return eps, mu


def scaled_fields(e, b, medium):
    """The 8-component vector ``(sqrt(eps) E, 0, B/sqrt(mu), 0)/sqrt(2)`` per point."""
    e = np.asarray(e, dtype=complex).reshape(3, -1)
    b = np.asarray(b, dtype=complex).reshape(3, -1)
    eps, mu = _medium_arrays(medium, e.shape[1])
    f = np.zeros((8, e.shape[1]), dtype=complex)
    f[0:3] = np.sqrt(eps) * e / np.sqrt(2)
    f[4:7] = b / np.sqrt(mu) / np.sqrt(2)
    return f


def rs_pack(e, b, medium, grid=None):
    """Pack ``E``, ``B`` (arrays of shape ``(3, n_points)``) into the RS layout."""
    psi = rs_matrix() @ scaled_fields(e, b, medium)
    return FieldState("rs8", psi.ravel(), grid)


def rs_unpack(state, medium):
    """Inverse of :func:`rs_pack`; returns ``(E, B)`` of shape ``(3, n_points)``."""
    if state.layout != "rs8":
        raise ValueError(f"expected rs8 layout, got {state.layout}")
    f = rs_matrix().conj().T @ state.blocks()
    eps, mu = _medium_arrays(medium, f.shape[1])
    e = np.sqrt(2) * f[0:3] / np.sqrt(eps)
    b = np.sqrt(2) * f[4:7] * np.sqrt(mu)
    return e, b


def rs_source(j, rho, medium):
    """RS source ``T J`` with ``J = (J, 0, 0, 0, 0, -v rho)/sqrt(2 eps)``; shape ``(8, n)``."""
    j = np.asarray(j, dtype=complex).reshape(3, -1)
    eps, mu = _medium_arrays(medium, j.shape[1])
    v = 1.0 / np.sqrt(eps * mu)
    src = np.zeros((8, j.shape[1]), dtype=complex)
    src[0:3] = j
    src[7] = -v * np.asarray(rho, dtype=complex).reshape(-1)
    return rs_matrix() @ (src / np.sqrt(2 * eps))
