"""Complex linear algebra used throughout the package.

Matrices are plain ``numpy.ndarray`` (dense) or ``scipy.sparse`` matrices.
Anything whose dimension reaches :data:`DENSE_LIMIT` is stored sparse.
"""

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.csgraph as csgraph
import scipy.sparse.linalg as spla

DENSE_LIMIT = 1024
HERMITIAN_TOL = 1e-10
# connected components larger than this are exponentiated by expm_multiply
_EIGH_LIMIT = 6000
# connected blocks above this size are propagated with expm_multiply instead of eigh
_PROPAGATOR_DENSE_LIMIT = 1024


class NotHermitianError(ValueError):
    """Raised when a matrix that must be Hermitian is not."""

    def __init__(self, deviation):
        self.deviation = float(deviation)
        super().__init__(f"matrix is not Hermitian: max |H - H^dag| = {self.deviation:.3e}")


def store(a):
    """Pick dense or sparse storage for ``a`` according to :data:`DENSE_LIMIT`."""
    if max(a.shape) >= DENSE_LIMIT:
        return sp.csr_matrix(a, dtype=complex)
    if sp.issparse(a):
        return a.toarray().astype(complex)
    return np.asarray(a, dtype=complex)


def to_dense(a):
    return a.toarray() if sp.issparse(a) else np.asarray(a)


def max_norm(a):
    """Largest entry in absolute value."""
    if sp.issparse(a):
        a = sp.coo_matrix(a)
        return float(np.abs(a.data).max()) if a.nnz else 0.0
    a = np.asarray(a)
    return float(np.abs(a).max()) if a.size else 0.0


def row_sparsity(a):
    """Maximum number of structurally nonzero entries in any row."""
    if sp.issparse(a):
        a = sp.csr_matrix(a)
        a.eliminate_zeros()
        return int(np.diff(a.indptr).max()) if a.shape[0] else 0
    return int((np.asarray(a) != 0).sum(axis=1).max()) if a.shape[0] else 0


def kron(a, b):
    """Kronecker product with the storage rule applied to the result."""
    if sp.issparse(a) or sp.issparse(b):
        return store(sp.kron(a, b, format="csr"))
    out = np.kron(a, b)
    return store(out) if max(out.shape) >= DENSE_LIMIT else out


def dagger(a):
    return a.conj().T


def hermitian_deviation(h):
    d = h - dagger(h)
    return max_norm(d)


def hermitian_split(a):
    """Split ``a`` as ``h1 + 1j*h2`` with ``h1``, ``h2`` Hermitian."""
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"hermitian_split needs a square matrix, got {a.shape}")
    ad = dagger(a)
    h1 = (a + ad) / 2
    h2 = (a - ad) / 2j
    return h1, h2


def shift_matrix(m):
    """Cyclic forward shift ``sum_i |i><i+1| + |m-1><0|``."""
    if m < 1:
        raise ValueError("shift_matrix needs m >= 1")
    rows = np.arange(m)
    cols = (rows + 1) % m
    f = sp.csr_matrix((np.ones(m), (rows, cols)), shape=(m, m))
    return store(f) if m >= DENSE_LIMIT else f.toarray()


def fourier_frequencies(n, length):
    """Frequencies ``2*pi*(l - n/2 - 1)/length`` for ``l = 1..n``."""
    if n < 2 or n % 2:
        raise ValueError(f"Fourier basis needs an even n >= 2, got {n}")
    l = np.arange(1, n + 1)
    return 2 * np.pi * (l - n // 2 - 1) / length


def fourier_basis(n, length, origin=0.0):
    """Return ``(phi, freqs)`` with ``phi[j, l] = exp(1j*freqs[l]*x_j)``.

    ``x_j = origin + j*length/n``. The inverse of ``phi`` is ``phi.conj().T / n``.
    """
    freqs = fourier_frequencies(n, length)
    x = origin + np.arange(n) * (length / n)
    return np.exp(1j * np.outer(x, freqs)), freqs


def to_fourier(values, length, origin=0.0, axis=-1):
    """Apply ``phi^{-1}`` along ``axis`` (FFT with the centred frequency order)."""
    values = np.asarray(values)
    n = values.shape[axis]
    freqs = fourier_frequencies(n, length)
    coef = np.fft.fftshift(np.fft.fft(values, axis=axis), axes=axis) / n
    if origin:
        shape = [1] * values.ndim
        shape[axis] = n
        coef = coef * np.exp(-1j * freqs * origin).reshape(shape)
    return coef


def from_fourier(coef, length, origin=0.0, axis=-1):
    """Apply ``phi`` along ``axis``; inverse of :func:`to_fourier`."""
    coef = np.asarray(coef)
    n = coef.shape[axis]
    if origin:
        freqs = fourier_frequencies(n, length)
        shape = [1] * coef.ndim
        shape[axis] = n
        coef = coef * np.exp(1j * freqs * origin).reshape(shape)
    return np.fft.ifft(np.fft.ifftshift(coef, axes=axis), axis=axis) * n


def check_hermitian(h, tol=HERMITIAN_TOL):
    dev = hermitian_deviation(h)
    if dev > tol * max(1.0, max_norm(h)):
        raise NotHermitianError(dev)
    return dev


class HermitianPropagator:
    """Reusable ``exp(-1j*h*t)`` for a Hermitian matrix.

    Dense input is diagonalised once with ``eigh``. Sparse input is split into
    connected components first, so block-diagonal structure (e.g. spectral
    Maxwell operators in Fourier space) costs only small eigensolves.
    """

    def __init__(self, h, check=True):
        if check:
            check_hermitian(h)
        self.n = h.shape[0]
        self._blocks = []
        self._fallback = None
        if not sp.issparse(h):
            w, v = sla.eigh(to_dense(h).astype(complex))
            self._blocks.append((slice(None), w, v))
            return
        h = sp.csr_matrix(h, dtype=complex)
        ncomp, labels = csgraph.connected_components(abs(h) + abs(h.T), directed=False)
        order = np.argsort(labels, kind="stable")
        bounds = np.searchsorted(labels[order], np.arange(ncomp + 1))
        # group equal-size components so they can be solved as one batch
        by_size = {}
        for c in range(ncomp):
            idx = order[bounds[c]:bounds[c + 1]]
            by_size.setdefault(len(idx), []).append(idx)
        for size, groups in by_size.items():
            if size > _PROPAGATOR_DENSE_LIMIT:
                self._fallback = h
                self._blocks = []
                return
            idx = np.array(groups)
            sub = np.stack([h[g][:, g].toarray() for g in idx])
            w, v = np.linalg.eigh(sub)
            self._blocks.append((idx, w, v))

    def apply(self, vec, t):
        vec = np.asarray(vec, dtype=complex)
        if t == 0:
            return vec.copy()
        if self._fallback is not None:
            return spla.expm_multiply(-1j * t * self._fallback, vec)
        out = np.empty_like(vec)
        for idx, w, v in self._blocks:
            if isinstance(idx, slice):
                coef = v.conj().T @ vec
                phase = np.exp(-1j * w * t)
                coef = coef * (phase[:, None] if vec.ndim == 2 else phase)
                out[:] = v @ coef
                continue
            x = vec[idx]  # (groups, size[, k])
            if vec.ndim == 1:
                coef = np.einsum("gji,gj->gi", v.conj(), x) * np.exp(-1j * w * t)
                out[idx] = np.einsum("gij,gj->gi", v, coef)
            else:
                coef = np.einsum("gji,gjk->gik", v.conj(), x) * np.exp(-1j * w * t)[..., None]
                out[idx] = np.einsum("gij,gjk->gik", v, coef)
        return out


def expm_apply(h, t, v):
    """Return ``exp(-1j*h*t) @ v`` for Hermitian ``h``.

    ``v`` may be a vector or a matrix of column vectors.
    """
    return HermitianPropagator(h).apply(v, t)


def max_eigenvalue(h):
    """Largest eigenvalue of a Hermitian matrix (dense below ``_EIGH_LIMIT``)."""
    n = h.shape[0]
    if n <= _EIGH_LIMIT:
        return float(np.linalg.eigvalsh(to_dense(h))[-1])
    return float(spla.eigsh(sp.csr_matrix(h), k=1, which="LA", return_eigenvectors=False)[0])
