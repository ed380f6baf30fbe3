"""
16-Q2AM mapping and hard decisions

Each of the four quaternion components carries one bit, +1 for a one
and -1 for a zero; bit m goes to component m in (q0, q1, q2, q3) order,
so the symbol index is bit0 + 2 bit1 + 4 bit2 + 8 bit3. Every symbol
has norm_sq 4 and the constellation is left unnormalized.
"""

import numpy as np

from quatlink.util.faults import DimensionError
from quatlink.algebra.quaternion import Quaternion, as_qarray

BITS_PER_SYMBOL = 4
CONSTELLATION_SIZE = 16
SYMBOL_ENERGY = 4.0

_WEIGHTS = 1 << np.arange(BITS_PER_SYMBOL)


class Symbol:

    __slots__ = ('value', 'index')

    def __init__(self, index):
        index = int(index)
        if not 0 <= index < CONSTELLATION_SIZE:
            raise DimensionError("symbol index %d out of range" % index)
        object.__setattr__(self, 'index', index)
        object.__setattr__(self, 'value',
                           Quaternion.from_array(CONSTELLATION[index]))

    def __setattr__(self, name, value):
        raise AttributeError("Symbol is immutable")

    def bits(self):
        return bits_from_index(self.index)

    def __eq__(self, other):
        return isinstance(other, Symbol) and other.index == self.index

    def __hash__(self):
        return hash(self.index)

    def __repr__(self):
        return "Symbol(%d, %s)" % (self.index, self.value)


def bits_from_index(index):
    return tuple((int(index) >> m) & 1 for m in range(BITS_PER_SYMBOL))


def modulate_indices(indices):
    """symbol indices (any shape) -> constellation points (..., 4)"""
    indices = np.asarray(indices)
    bits = (indices[..., None] >> np.arange(BITS_PER_SYMBOL)) & 1
    return 2.0 * bits - 1.0


CONSTELLATION = modulate_indices(np.arange(CONSTELLATION_SIZE))


def symbol_indices(points):
    """sign of each component, sign(0) counting as +1, packed into indices"""
    bits = (as_qarray(points) >= 0.0).astype(np.int64)
    return bits @ _WEIGHTS


def demodulate_array(points):
    return modulate_indices(symbol_indices(points))


def modulate(bits):
    bits = tuple(int(b) for b in bits)
    if len(bits) != BITS_PER_SYMBOL or any(b not in (0, 1) for b in bits):
        raise DimensionError("modulate needs exactly 4 bits, got %r"
                             % (bits,))
    return Symbol(sum(b << m for m, b in enumerate(bits)))


def demodulate(q):
    return Symbol(symbol_indices(as_qarray(q)))


def count_errors(sent, decided):
    """
    (symbol errors, bit errors); takes Symbol sequences or index arrays
    """
    sent = _as_indices(sent)
    decided = _as_indices(decided)
    if sent.shape != decided.shape:
        raise DimensionError("count_errors: %d sent vs %d decided"
                             % (sent.size, decided.size))
    diff = np.bitwise_xor(sent, decided)
    symbol_errors = int(np.count_nonzero(diff))
    bit_errors = int(((diff[..., None] >> np.arange(BITS_PER_SYMBOL)) & 1).sum())
    return symbol_errors, bit_errors


def _as_indices(symbols):
    if isinstance(symbols, np.ndarray):
        return symbols.astype(np.int64)
    return np.array([s.index for s in symbols], dtype=np.int64)
