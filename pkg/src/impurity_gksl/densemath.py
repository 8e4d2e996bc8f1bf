"""Small dense complex-matrix helpers.

Matrices are plain :class:`numpy.ndarray` objects of complex dtype. Everything
here is a pure function of its inputs.
"""

import numpy as np

__all__ = [
    "as_matrix",
    "kron",
    "dagger",
    "hermitian_eigensystem",
    "expm",
    "frobenius",
]


def as_matrix(a):
    """Return ``a`` as a 2-D complex array, rejecting NaN/Inf entries."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def kron(a, b):
    return np.kron(as_matrix(a), as_matrix(b))


def dagger(a):
    return as_matrix(a).conj().T


def frobenius(a):
    return float(np.linalg.norm(a, "fro"))


def _phase_normalize(vec, tol=1e-12):
    # first component with |x| > tol made real positive
    idx = np.flatnonzero(np.abs(vec) > tol)
    if idx.size == 0:
        return vec
    x = vec[idx[0]]
    return vec * (abs(x) / x)


def hermitian_eigensystem(a, cluster_tol=None):
    """Eigen-decomposition of a Hermitian matrix with deterministic ordering.

    Returns ``(w, V)`` with ascending real eigenvalues ``w`` and orthonormal
    eigenvector columns ``V``. Each column is phase-normalised so that its
    first nonzero component is real and positive. Inside a degenerate
    cluster (eigenvalues closer than ``cluster_tol``) the columns are sorted
    by descending lexicographic order of ``(re, im)`` of their components, so
    that e.g. the eigenvectors of a diagonal matrix come out in basis order.
    """
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ValueError("hermitian_eigensystem needs a square matrix")
    scale = frobenius(m)
    if frobenius(m - m.conj().T) > 1e-12 * max(scale, 1e-300):
        raise ValueError("matrix is not Hermitian")
    w, v = np.linalg.eigh(m)
    v = np.column_stack([_phase_normalize(v[:, k]) for k in range(v.shape[1])])
    if cluster_tol is None:
        cluster_tol = 1e-10 * max(scale, 1.0)

    order = []
    start = 0
    n = len(w)
    while start < n:
        stop = start + 1
        while stop < n and w[stop] - w[stop - 1] <= cluster_tol:
            stop += 1
        block = list(range(start, stop))
        block.sort(
            key=lambda k: tuple(
                (-round(z.real, 12), -round(z.imag, 12)) for z in v[:, k]
            )
        )
        order.extend(block)
        start = stop
    return w[order], v[:, order]


# Padé-13 scaling and squaring (Higham, SIAM J. Matrix Anal. Appl. 26, 2005)
_PADE13 = (
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
)
_THETA13 = 5.371920351148152


def expm(a):
    """Matrix exponential by scaling and squaring around a [13/13] Padé core."""
    m = as_matrix(a)
    n = m.shape[0]
    if m.shape[1] != n:
        raise ValueError("expm needs a square matrix")
    norm1 = np.linalg.norm(m, 1)
    if norm1 == 0.0:
        return np.eye(n, dtype=complex)
    s = 0
    if norm1 > _THETA13:
        s = int(np.ceil(np.log2(norm1 / _THETA13)))
    x = m / (2.0**s)

    b = _PADE13
    ident = np.eye(n, dtype=complex)
    x2 = x @ x
    x4 = x2 @ x2
    x6 = x4 @ x2
    u = x @ (
        x6 @ (b[13] * x6 + b[11] * x4 + b[9] * x2)
        + b[7] * x6
        + b[5] * x4
        + b[3] * x2
        + b[1] * ident
    )
    v = (
        x6 @ (b[12] * x6 + b[10] * x4 + b[8] * x2)
        + b[6] * x6
        + b[4] * x4
        + b[2] * x2
        + b[0] * ident
    )
    r = np.linalg.solve(v - u, v + u)
    for _ in range(s):
        r = r @ r
    return r
