"""Monomial-set kernels.

Every kernel exists twice: a numba ``@njit`` loop and a vectorized numpy
equivalent.  The numba path is used when numba imports cleanly and the
environment variable ``CISYS_DISABLE_NUMBA`` is unset (or ``0``); set it to
``1`` to force the pure-numpy path.  Both paths take and return the same
array types, so callers never branch on the backend.

Monomial sets are ``int64`` matrices of shape ``(k, n)``, one exponent
vector per row.
"""

import os

import numpy as np

__all__ = [
    "BACKEND",
    "nm_matrix",
    "involutive_divisor_mask",
    "divisor_mask",
    "numpy_kernels",
    "numba_kernels",
]


# -- numpy reference path -----------------------------------------------------


def _nm_matrix_np(U, rank, rho):
    k, n = U.shape
    nm = np.zeros((k, n), dtype=np.bool_)
    if k < 2:
        return nm
    Up = U[:, rho]
    # less[u, v, j]: deg_{rho(j)}(u) < deg_{rho(j)}(v)
    less = Up[:, None, :] < Up[None, :, :]
    v_divides_u = np.all(U[None, :, :] <= U[:, None, :], axis=2)
    u_above_v = rank[:, None] > rank[None, :]
    active = ~(u_above_v | v_divides_u)
    np.fill_diagonal(active, False)
    active &= less.any(axis=2)
    first = np.argmax(less, axis=2)
    uu, vv = np.nonzero(active)
    nm[uu, rho[first[uu, vv]]] = True
    return nm


def _involutive_divisor_mask_np(U, nm, t):
    if U.shape[0] == 0:
        return np.zeros(0, dtype=np.bool_)
    divides = np.all(U <= t, axis=1)
    grows = U < t
    return divides & ~np.any(grows & nm, axis=1)


def _divisor_mask_np(U, t):
    if U.shape[0] == 0:
        return np.zeros(0, dtype=np.bool_)
    return np.all(U <= t, axis=1)


numpy_kernels = {
    "nm_matrix": _nm_matrix_np,
    "involutive_divisor_mask": _involutive_divisor_mask_np,
    "divisor_mask": _divisor_mask_np,
}


# -- numba path ---------------------------------------------------------------


def _build_numba():
    import numba

    jit = numba.njit(cache=True, nogil=True)

    @jit
    def nm_matrix(U, rank, rho):
        k, n = U.shape
        nm = np.zeros((k, n), dtype=np.bool_)
        for u in range(k):
            for v in range(k):
                if u == v or rank[u] > rank[v]:
                    continue
                divides = True
                for j in range(n):
                    if U[v, j] > U[u, j]:
                        divides = False
                        break
                if divides:
                    continue
                for j in range(n):
                    var = rho[j]
                    if U[u, var] < U[v, var]:
                        nm[u, var] = True
                        break
        return nm

    @jit
    def involutive_divisor_mask(U, nm, t):
        k, n = U.shape
        out = np.zeros(k, dtype=np.bool_)
        for u in range(k):
            ok = True
            for j in range(n):
                e = U[u, j]
                if e > t[j] or (e < t[j] and nm[u, j]):
                    ok = False
                    break
            out[u] = ok
        return out

    @jit
    def divisor_mask(U, t):
        k, n = U.shape
        out = np.zeros(k, dtype=np.bool_)
        for u in range(k):
            ok = True
            for j in range(n):
                if U[u, j] > t[j]:
                    ok = False
                    break
            out[u] = ok
        return out

    return {
        "nm_matrix": nm_matrix,
        "involutive_divisor_mask": involutive_divisor_mask,
        "divisor_mask": divisor_mask,
    }


def _numba_wanted():
    return os.environ.get("CISYS_DISABLE_NUMBA", "0").strip().lower() in ("", "0", "false", "no")


numba_kernels = None
if _numba_wanted():
    try:
        numba_kernels = _build_numba()
    except ImportError:  # pragma: no cover - numba missing
        numba_kernels = None

BACKEND = "numba" if numba_kernels is not None else "numpy"
_active = numba_kernels if numba_kernels is not None else numpy_kernels

nm_matrix = _active["nm_matrix"]
involutive_divisor_mask = _active["involutive_divisor_mask"]
divisor_mask = _active["divisor_mask"]


def warmup():
    """Trigger JIT compilation so later calls are not charged for it."""
    U = np.array([[2, 0], [0, 2], [1, 2]], dtype=np.int64)
    rank = np.array([2, 0, 1], dtype=np.int64)
    rho = np.array([0, 1], dtype=np.int64)
    nm = nm_matrix(U, rank, rho)
    t = np.array([2, 2], dtype=np.int64)
    involutive_divisor_mask(U, nm, t)
    divisor_mask(U, t)
