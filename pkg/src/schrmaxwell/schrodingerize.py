"""Turn a linear ODE ``du/dt = A u + b`` into a family of Hamiltonian systems.

The state is lifted to ``w(t, p) = exp(-p) u`` on an auxiliary periodic
p-grid.  After a Fourier transform in p the generator splits into one
Hermitian block ``nu_k * h1 - h2`` per p-frequency.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import scipy.sparse as sp

from . import linalg


@dataclass(frozen=True)
class LinearSystem:
    """``du/dt = a u + b(t)``, ``u(0) = u0``.

    ``time_dependent_source`` overrides ``b`` when present and must agree with
    it at t = 0.  ``source_column`` is set only on homogenized systems whose
    last column of ``a`` changes in time.
    """

    a: object
    b: np.ndarray
    u0: np.ndarray
    time_dependent_source: Optional[Callable[[float], np.ndarray]] = None
    source_column: Optional[Callable[[float], np.ndarray]] = None

    def __post_init__(self):
        n = self.a.shape[0]
        if self.a.shape != (n, n):
            raise ValueError(f"generator must be square, got {self.a.shape}")
        if len(self.b) != n or len(self.u0) != n:
            raise ValueError("a, b and u0 dimensions disagree")
        if not np.all(np.isfinite(self.u0)) or not np.all(np.isfinite(self.b)):
            raise ValueError("non-finite entries in u0 or b")

    @property
    def n(self):
        return self.a.shape[0]

    def source(self, t):
        if self.time_dependent_source is not None:
            return np.asarray(self.time_dependent_source(t), dtype=complex)
        return np.asarray(self.b, dtype=complex)

    def generator(self, t):
        """Generator at time ``t`` (only differs from ``a`` for a moving last column)."""
        if self.source_column is None:
            return self.a
        a = sp.lil_matrix(self.a, dtype=complex)
        a[:-1, -1] = np.asarray(self.source_column(t)).reshape(-1, 1)
        return linalg.store(a.tocsr())

    @property
    def is_homogeneous(self):
        return self.time_dependent_source is None and not np.any(self.b)


@dataclass(frozen=True)
class PGrid:
    left: float
    right: float
    n: int
    points: np.ndarray
    freqs: np.ndarray
    dp: float


def make_pgrid(n=128, left=-10.0, right=None):
    """Uniform periodic grid ``p_k = left + k*dp`` on ``[left, right)``."""
    if right is None:
        right = -left
    if right <= left:
        raise ValueError("p-domain needs right > left")
    length = right - left
    freqs = linalg.fourier_frequencies(n, length)
    dp = length / n
    points = left + dp * np.arange(n)
    return PGrid(float(left), float(right), int(n), points, freqs, dp)


@dataclass(frozen=True)
class RecoverySpec:
    mode: str = "pointwise"
    p_star: Optional[float] = None

    def __post_init__(self):
        if self.mode not in ("pointwise", "integral"):
            raise ValueError(f"unknown recovery mode {self.mode!r}")


def default_p_star(pgrid, minimum=1.0):
    """Smallest grid point that is at least ``minimum``."""
    idx = np.nonzero(pgrid.points >= minimum - 1e-12)[0]
    if not len(idx):
        raise ValueError(f"no p-grid point >= {minimum}")
    return float(pgrid.points[idx[0]])


class ModeHamiltonians:
    """Lazy list of ``freqs[k]*h1 - h2``; blocks are built on access."""

    def __init__(self, h1, h2, freqs):
        self.h1, self.h2, self.freqs = h1, h2, freqs

    def __len__(self):
        return len(self.freqs)

    def __getitem__(self, k):
        if isinstance(k, slice):
            return [self[i] for i in range(*k.indices(len(self)))]
        return self.freqs[k] * self.h1 - self.h2

    def __iter__(self):
        return (self[k] for k in range(len(self)))


@dataclass(frozen=True)
class SchrodingerisedSystem:
    h1: object
    h2: object
    pgrid: PGrid
    mode_hamiltonians: ModeHamiltonians
    # for a time-dependent last column: the generator's top block and the column
    a_top: object = None
    column: Optional[Callable[[float], np.ndarray]] = None

    @property
    def n(self):
        return self.h1.shape[0]

    @property
    def is_time_dependent(self):
        return self.column is not None

    def at(self, t):
        """Split of the generator at time ``t``."""
        if self.column is None:
            return self.h1, self.h2
        a = _bordered(self.a_top, self.column(t))
        return linalg.hermitian_split(a)


def _bordered(a_top, col):
    n = a_top.shape[0]
    col = np.asarray(col, dtype=complex).reshape(-1, 1)
    a = sp.bmat([[sp.csr_matrix(a_top), sp.csr_matrix(col)],
                 [None, sp.csr_matrix((1, 1), dtype=complex)]], format="csr")
    return linalg.store(a) if n + 1 >= linalg.DENSE_LIMIT else a.toarray()


def homogenize(sys, scale=None):
    """Absorb the source into an extra constant state ``r``.

    Returns ``a' = [[A, b/scale], [0, 0]]`` and ``u0' = [u0; scale]``.  The
    default ``scale = 1`` is the textbook form; a larger scale shrinks the
    coupling column, which slows the p-drift it induces.
    """
    scale = 1.0 if scale is None else float(scale)
    if scale <= 0:
        raise ValueError("scale must be positive")
    b0 = sys.source(0.0)
    a = _bordered(sys.a, b0 / scale)
    u0 = np.concatenate([np.asarray(sys.u0, dtype=complex), [scale]])
    column = None
    if sys.time_dependent_source is not None:
        src = sys.time_dependent_source
        column = lambda t: np.asarray(src(t), dtype=complex) / scale
    return LinearSystem(a, np.zeros(len(u0), complex), u0, source_column=column)


def initial_extension(u0, pgrid):
    """``w(0, p_k) = exp(-|p_k|) u0`` as an ``n*N`` vector, component-major."""
    u0 = np.asarray(u0, dtype=complex)
    return np.outer(u0, np.exp(-np.abs(pgrid.points))).ravel()


def build(sys, pgrid):
    if not sys.is_homogeneous:
        raise ValueError("build needs a homogeneous system; call homogenize first")
    h1, h2 = linalg.hermitian_split(linalg.store(sys.a) if sp.issparse(sys.a) else sys.a)
    a_top = None
    if sys.source_column is not None:
        n = sys.n - 1
        a_top = sp.csr_matrix(sys.a)[:n, :n]
    return SchrodingerisedSystem(h1, h2, pgrid, ModeHamiltonians(h1, h2, pgrid.freqs),
                                 a_top=a_top, column=sys.source_column)


def _trapezoid_weights(pgrid):
    idx = np.nonzero(pgrid.points >= -1e-12)[0]
    wts = np.full(len(idx), pgrid.dp)
    wts[0] *= 0.5
    # the periodic grid stops one step short of `right`; close with a half weight
    wts[-1] *= 0.5
    return idx, wts


def recover(w_final, pgrid, spec=None):
    """Map the lifted state back to ``u``.

    ``w_final`` is an ``n*N`` vector or an ``(n, N)`` array.
    """
    spec = spec or RecoverySpec()
    w = np.asarray(w_final).reshape(-1, pgrid.n)
    if spec.mode == "pointwise":
        p_star = default_p_star(pgrid) if spec.p_star is None else spec.p_star
        if p_star <= 0:
            raise ValueError(f"p_star must be positive, got {p_star}")
        hit = np.nonzero(np.abs(pgrid.points - p_star) <= 1e-9 * max(1.0, abs(p_star)))[0]
        if not len(hit):
            raise ValueError(f"p_star={p_star} is not a grid point")
        k = hit[0]
        return np.exp(pgrid.points[k]) * w[:, k]
    idx, wts = _trapezoid_weights(pgrid)
    mass = wts @ np.exp(-pgrid.points[idx])
    return (w[:, idx] @ wts) / mass


def hamiltonian_stats(s):
    """Sparsity of ``H = h1 (x) D_p - h2 (x) 1`` and the bound on its max-norm.

    In the p-Fourier basis ``D_p`` is diagonal, so a row of ``H`` holds the
    union of the nonzero patterns of the matching rows of ``h1`` and ``h2``.
    The count is structural; ``H`` is never assembled.
    """
    h1 = sp.csr_matrix(s.h1)
    h2 = sp.csr_matrix(s.h2)
    h1.eliminate_zeros()
    h2.eliminate_zeros()
    union = (abs(h1) + abs(h2)).tocsr()
    union.eliminate_zeros()
    sparsity = int(np.diff(union.indptr).max()) if union.shape[0] else 0
    bound = linalg.max_norm(h1) / s.pgrid.dp + linalg.max_norm(h2)
    return sparsity, bound
