"""Tridiagonal solves for the implicit 1D transport and diffusion stencils."""

import numpy as np
from numba import njit


@njit(cache=True)
def _thomas(a, b, c, d):
    n = d.shape[0]
    cp = np.empty(n)
    x = np.empty_like(d)
    beta = b[0]
    if beta == 0.0:
        raise ZeroDivisionError("zero pivot")
    cp[0] = c[0] / beta
    x[0] = d[0] / beta
    for k in range(1, n):
        beta = b[k] - a[k] * cp[k - 1]
        if beta == 0.0:
            raise ZeroDivisionError("zero pivot")
        cp[k] = c[k] / beta
        x[k] = (d[k] - a[k] * x[k - 1]) / beta
    for k in range(n - 2, -1, -1):
        x[k] = x[k] - cp[k] * x[k + 1]
    return x


def solve_tridiagonal(lower, diag, upper, rhs):
    """Solve ``A x = rhs`` with the Thomas algorithm (no pivoting).

    ``lower[k]`` multiplies ``x[k-1]`` and ``upper[k]`` multiplies ``x[k+1]`` in
    row ``k``; ``lower[0]`` and ``upper[-1]`` are ignored.  Intended for the
    diagonally dominant M-matrices the finite-volume steps assemble.
    """
    a = np.ascontiguousarray(lower, dtype=float)
    b = np.ascontiguousarray(diag, dtype=float)
    c = np.ascontiguousarray(upper, dtype=float)
    d = np.ascontiguousarray(rhs, dtype=float)
    return _thomas(a, b, c, d)


def tridiagonal_dense(lower, diag, upper):
    """Dense matrix with the same row convention as :func:`solve_tridiagonal`."""
    n = len(diag)
    A = np.diag(np.asarray(diag, dtype=float))
    A[np.arange(1, n), np.arange(n - 1)] = np.asarray(lower, dtype=float)[1:]
    A[np.arange(n - 1), np.arange(1, n)] = np.asarray(upper, dtype=float)[:-1]
    return A
