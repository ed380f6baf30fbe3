"""
Hamilton quaternions

Two layers live here:

* `Quaternion`, an immutable scalar q0 + i q1 + j q2 + k q3 with the
  usual operators, and the module-level functions mul/conj/norm_sq/...
  operating on it

* array functions (hamilton, qconj, qnorm_sq, qinverse) on float numpy
  arrays whose last axis holds the four components (q0, q1, q2, q3);
  vectors and matrices in quatlink.algebra.linalg are such arrays

Component order is always (q0, q1, q2, q3). Multiplication does not
commute: i*j = k but j*i = -k.
"""

import math

import numpy as np

from quatlink.util.faults import QuaternionDomainError, DimensionError


class Quaternion:

    __slots__ = ('q0', 'q1', 'q2', 'q3')

    def __init__(self, q0=0.0, q1=0.0, q2=0.0, q3=0.0):
        values = (float(q0), float(q1), float(q2), float(q3))
        if not all(math.isfinite(v) for v in values):
            raise QuaternionDomainError("non-finite component in %r"
                                        % (values,))
        for name, value in zip(Quaternion.__slots__, values):
            object.__setattr__(self, name, value)

    def __setattr__(self, name, value):
        raise AttributeError("Quaternion is immutable")

    @staticmethod
    def from_array(array):
        array = np.asarray(array, dtype=float)
        if array.shape != (4,):
            raise DimensionError("expected 4 components, got shape %s"
                                 % (array.shape,))
        return Quaternion(*array)

    def as_array(self):
        return np.array([self.q0, self.q1, self.q2, self.q3])

    def components(self):
        return (self.q0, self.q1, self.q2, self.q3)

    def __iter__(self):
        return iter(self.components())

    def __getitem__(self, index):
        return self.components()[index]

    def __eq__(self, other):
        if isinstance(other, (int, float)):
            other = Quaternion(other)
        if not isinstance(other, Quaternion):
            return NotImplemented
        return self.components() == other.components()

    def __hash__(self):
        return hash(self.components())

    def __repr__(self):
        return "Quaternion(%r, %r, %r, %r)" % self.components()

    def __str__(self):
        return "%g%+gi%+gj%+gk" % self.components()

    # scalars on either side are promoted to real quaternions
    def __add__(self, other):
        return add(self, _promote(other))

    __radd__ = __add__

    def __sub__(self, other):
        return sub(self, _promote(other))

    def __rsub__(self, other):
        return sub(_promote(other), self)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return scale(self, other)
        return mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return scale(self, other)
        return mul(_promote(other), self)

    def __truediv__(self, other):
        if not isinstance(other, (int, float)):
            raise TypeError("quaternion division is ambiguous, "
                            "use mul() with inverse() on the side you mean")
        if other == 0:
            raise QuaternionDomainError("division by zero")
        return scale(self, 1.0 / other)

    def __neg__(self):
        return negate(self)

    def __abs__(self):
        return math.sqrt(norm_sq(self))


def _promote(value):
    if isinstance(value, Quaternion):
        return value
    if isinstance(value, (int, float)):
        return Quaternion(value)
    raise TypeError("cannot combine Quaternion with %s" % type(value).__name__)


def quaternion(q0=0.0, q1=0.0, q2=0.0, q3=0.0):
    return Quaternion(q0, q1, q2, q3)


ZERO = Quaternion(0, 0, 0, 0)
ONE = Quaternion(1, 0, 0, 0)
I = Quaternion(0, 1, 0, 0)
J = Quaternion(0, 0, 1, 0)
K = Quaternion(0, 0, 0, 1)


def mul(a, b):
    """Hamilton product a*b"""
    a0, a1, a2, a3 = a.components()
    b0, b1, b2, b3 = b.components()
    return Quaternion(a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
                      a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
                      a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
                      a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0)


def conj(a):
    return Quaternion(a.q0, -a.q1, -a.q2, -a.q3)


def norm_sq(a):
    return a.q0 * a.q0 + a.q1 * a.q1 + a.q2 * a.q2 + a.q3 * a.q3


def inverse(a):
    n = norm_sq(a)
    if n == 0.0:
        raise QuaternionDomainError("division by zero quaternion")
    return scale(conj(a), 1.0 / n)


def add(a, b):
    return Quaternion(a.q0 + b.q0, a.q1 + b.q1, a.q2 + b.q2, a.q3 + b.q3)


def sub(a, b):
    return Quaternion(a.q0 - b.q0, a.q1 - b.q1, a.q2 - b.q2, a.q3 - b.q3)


def negate(a):
    return Quaternion(-a.q0, -a.q1, -a.q2, -a.q3)


def scale(a, s):
    return Quaternion(s * a.q0, s * a.q1, s * a.q2, s * a.q3)


def real_part(a):
    return a.q0


####################
# array layer, last axis = (q0, q1, q2, q3)

_CONJ_SIGNS = np.array([1.0, -1.0, -1.0, -1.0])


def as_qarray(obj):
    """
    Turn a Quaternion, a sequence of them, or a float array (..., 4)
    into a float array (..., 4)
    """
    if isinstance(obj, Quaternion):
        return obj.as_array()
    if isinstance(obj, (list, tuple)) and obj and \
            all(isinstance(q, Quaternion) for q in obj):
        return np.array([q.components() for q in obj], dtype=float)
    array = np.asarray(obj, dtype=float)
    if array.ndim == 0 or array.shape[-1] != 4:
        raise DimensionError("last axis must hold 4 components, got shape %s"
                             % (array.shape,))
    return array


def hamilton(a, b):
    """
    Elementwise Hamilton product of two broadcastable (..., 4) arrays
    """
    a0, a1, a2, a3 = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    b0, b1, b2, b3 = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack((a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
                     a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
                     a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
                     a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0), axis=-1)


def qconj(a):
    return a * _CONJ_SIGNS


def qnorm_sq(a):
    return np.sum(a * a, axis=-1)


def qinverse(a):
    n = np.asarray(qnorm_sq(a))
    if np.any(n == 0.0):
        raise QuaternionDomainError("division by zero quaternion")
    return qconj(a) / n[..., None]


def _build_table():
    basis = np.eye(4)
    table = np.empty((4, 4, 4))
    for p in range(4):
        for q in range(4):
            table[p, q] = hamilton(basis[p], basis[q])
    return table


# HAMILTON_TABLE[p, q] is the product of basis units p and q,
# so (a*b)[c] = sum over p, q of a[p] b[q] HAMILTON_TABLE[p, q, c]
HAMILTON_TABLE = _build_table()


def left_matrix(a):
    """
    Real 4x4 matrix M with M @ b == hamilton(a, b) for every b
    """
    return np.einsum('pqc,p->cq', HAMILTON_TABLE, a)
