"""
Dense quaternion vectors and matrices

A QVector is a float array of shape (n, 4), a QMatrix a float array of
shape (rows, cols, 4), both with the components on the last axis.
Coefficients always multiply from the LEFT: (A x)[r] = sum_c A[r, c] x[c]
and w^T s = sum_l w[l] s[l].

solve() is Gaussian elimination with partial pivoting done directly on
quaternions; the complex adjoint representation is kept alongside as an
independent path to check it against.
"""

import numpy as np

from quatlink.util.faults import DimensionError, SingularMatrix
from quatlink.algebra.quaternion import (
    Quaternion, as_qarray, hamilton, qconj, qnorm_sq, qinverse,
    HAMILTON_TABLE)

# pivots whose norm_sq falls below this fraction of the largest
# entry norm_sq of the original matrix count as zero
SINGULARITY_THRESHOLD = 1e-24


def qvector(obj):
    array = as_qarray(obj)
    if array.ndim != 2 or array.shape[0] < 1:
        raise DimensionError("QVector needs shape (n>=1, 4), got %s"
                             % (array.shape,))
    if not np.all(np.isfinite(array)):
        raise DimensionError("QVector holds non-finite entries")
    return array


def qmatrix(obj):
    if isinstance(obj, (list, tuple)) and obj and \
            all(isinstance(row, (list, tuple)) for row in obj):
        array = np.array([[as_qarray(q) for q in row] for row in obj],
                         dtype=float)
    else:
        array = as_qarray(obj)
    if array.ndim != 3 or array.shape[0] < 1 or array.shape[1] < 1:
        raise DimensionError("QMatrix needs shape (rows, cols, 4), got %s"
                             % (array.shape,))
    if not np.all(np.isfinite(array)):
        raise DimensionError("QMatrix holds non-finite entries")
    return array


def identity(n):
    m = np.zeros((n, n, 4))
    m[np.arange(n), np.arange(n), 0] = 1.0
    return m


def dot_left(w, s):
    """sum_l w[l] * s[l], weights on the left"""
    if w.shape != s.shape:
        raise DimensionError("dot_left: %s vs %s" % (w.shape, s.shape))
    return Quaternion.from_array(hamilton(w, s).sum(axis=0))


def outer_h(a, b):
    """M[r, c] = a[r] * conj(b[c])"""
    return hamilton(a[:, None, :], qconj(b)[None, :, :])


def hermitian_transpose(m):
    return qconj(np.swapaxes(m, 0, 1))


def is_hermitian(m, tol=1e-12):
    if m.shape[0] != m.shape[1]:
        return False
    scale = max(1.0, float(np.max(np.abs(m))))
    return bool(np.max(np.abs(m - hermitian_transpose(m))) <= tol * scale)


def matvec(m, x):
    if m.shape[1] != x.shape[0]:
        raise DimensionError("matvec: %s times %s" % (m.shape, x.shape))
    return hamilton(m, x[None, :, :]).sum(axis=1)


def matmul(p, q):
    if p.shape[1] != q.shape[0]:
        raise DimensionError("matmul: %s times %s" % (p.shape, q.shape))
    return hamilton(p[:, :, None, :], q[None, :, :, :]).sum(axis=1)


def vadd(a, b):
    if a.shape != b.shape:
        raise DimensionError("vadd: %s vs %s" % (a.shape, b.shape))
    return a + b


def vscale(a, s):
    """scale by a real number"""
    return a * float(s)


def solve(a, b):
    """
    Solve A x = b for x, left-multiplication convention.

    Row i is cleared by subtracting f * (row k) with
    f = A[i, k] * inverse(A[k, k]), the factor multiplying from the left
    so that the equations stay valid for non-commuting entries.
    """
    n = a.shape[0]
    if a.ndim != 3 or a.shape[1] != n:
        raise DimensionError("solve needs a square matrix, got %s"
                             % (a.shape,))
    if b.shape != (n, 4):
        raise DimensionError("solve: matrix %s, right-hand side %s"
                             % (a.shape, b.shape))
    work = np.array(a, dtype=float)
    rhs = np.array(b, dtype=float)
    largest = float(np.max(qnorm_sq(work)))
    if largest == 0.0:
        raise SingularMatrix(0, "zero matrix")
    floor = SINGULARITY_THRESHOLD * largest

    for k in range(n):
        pivot_row = k + int(np.argmax(qnorm_sq(work[k:, k])))
        if qnorm_sq(work[pivot_row, k]) < floor:
            raise SingularMatrix(k)
        if pivot_row != k:
            work[[k, pivot_row]] = work[[pivot_row, k]]
            rhs[[k, pivot_row]] = rhs[[pivot_row, k]]
        if k == n - 1:
            break
        inv_pivot = qinverse(work[k, k])
        factors = hamilton(work[k + 1:, k], inv_pivot)
        work[k + 1:, k:] -= hamilton(factors[:, None, :], work[None, k, k:])
        rhs[k + 1:] -= hamilton(factors, rhs[k])

    x = np.zeros((n, 4))
    for k in range(n - 1, -1, -1):
        residual = rhs[k] - hamilton(work[k, k + 1:], x[k + 1:]).sum(axis=0)
        x[k] = hamilton(qinverse(work[k, k]), residual)
    return x


####################
# complex adjoint representation
#
# q = a + b j with a = q0 + q1 i and b = q2 + q3 i, each entry becoming
# the 2x2 block [[a, b], [-conj(b), conj(a)]]; laid out as
# [[A, B], [-conj(B), conj(A)]] over the whole matrix

def to_complex_adjoint(m):
    a = m[..., 0] + 1j * m[..., 1]
    b = m[..., 2] + 1j * m[..., 3]
    return np.block([[a, b], [-np.conj(b), np.conj(a)]])


def from_complex_adjoint(c, tol=1e-9):
    rows, cols = c.shape
    if rows % 2 or cols % 2:
        raise DimensionError("adjoint matrix needs even dimensions, got %s"
                             % (c.shape,))
    n, m = rows // 2, cols // 2
    a = c[:n, :m]
    b = c[:n, m:]
    scale = max(1.0, float(np.max(np.abs(c))))
    if np.max(np.abs(c[n:, :m] + np.conj(b))) > tol * scale or \
            np.max(np.abs(c[n:, m:] - np.conj(a))) > tol * scale:
        raise DimensionError("matrix is not a complex adjoint")
    return np.stack((a.real, a.imag, b.real, b.imag), axis=-1)


def complex_adjoint_solve(a, b):
    """Same system as solve(), done through the complex adjoint"""
    n = a.shape[0]
    if a.shape[:2] != (n, n) or b.shape != (n, 4):
        raise DimensionError("complex_adjoint_solve: %s, %s"
                             % (a.shape, b.shape))
    ca = to_complex_adjoint(a)
    cb = to_complex_adjoint(b[:, None, :])
    try:
        cx = np.linalg.solve(ca, cb)
    except np.linalg.LinAlgError as e:
        raise SingularMatrix(extra=e)
    return from_complex_adjoint(cx)[:, 0, :]


def sum_outer_h(a, b):
    """
    sum over samples n of outer_h(a[n], b[n]), for a (N, M, 4) and
    b (N, K, 4); b may also be (N, 4), giving a (M, 4) vector of
    sum_n a[n, m] * conj(b[n])
    """
    vector = b.ndim == 2
    if vector:
        b = b[:, None, :]
    if a.shape[0] != b.shape[0]:
        raise DimensionError("sum_outer_h: %d vs %d samples"
                             % (a.shape[0], b.shape[0]))
    n, m, k = a.shape[0], a.shape[1], b.shape[1]
    # gram[m, u, k, v] = sum_n a[n, m, u] conj(b)[n, k, v]
    gram = (a.reshape(n, 4 * m).T @ qconj(b).reshape(n, 4 * k))
    gram = gram.reshape(m, 4, k, 4)
    out = np.einsum('aubv,uvc->abc', gram, HAMILTON_TABLE)
    return out[:, 0, :] if vector else out
