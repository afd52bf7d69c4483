"""Bit-packed matrices over GF(2) with rank/null-space computation.

Rows are stored as little-endian words in a numpy uint64 array of shape
(rows, words); bit j of a row lives in word j >> 6 at position j & 63.  All
bits past `cols` in the final word are kept at zero (the padding invariant),
so whole-word XOR is a valid row operation.
"""
from __future__ import annotations

import numpy as np

_BIT = np.uint64(1) << np.arange(64, dtype=np.uint64)


def _words_for(cols: int) -> int:
    return max(1, (cols + 63) >> 6)


class BitMatrix:
    """Dense GF(2) matrix backed by packed 64-bit words."""

    __slots__ = ("rows", "cols", "_words", "data")

    def __init__(self, rows: int, cols: int, data: np.ndarray | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        self.rows = rows
        self.cols = cols
        self._words = _words_for(cols)
        if data is None:
            self.data = np.zeros((rows, self._words), dtype=np.uint64)
        else:
            if data.shape != (rows, self._words) or data.dtype != np.uint64:
                raise ValueError(
                    f"backing array must be uint64 of shape {(rows, self._words)}"
                )
            self.data = data
            self._mask_padding()

    def _mask_padding(self) -> None:
        tail = self.cols & 63
        if tail and self.rows:
            self.data[:, -1] &= np.uint64((1 << tail) - 1)

    # -- construction ------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: int, cols: int, row_masks) -> "BitMatrix":
        """Build from per-row integer bit masks (bit j = column j)."""
        m = cls(rows, cols)
        for i, mask in enumerate(row_masks):
            if mask >> cols:
                raise ValueError(f"row {i} has bits beyond column {cols - 1}")
            w = 0
            while mask:
                m.data[i, w] = np.uint64(mask & 0xFFFFFFFFFFFFFFFF)
                mask >>= 64
                w += 1
        return m

    @classmethod
    def from_array(cls, arr) -> "BitMatrix":
        """Build from a dense 2-d 0/1 array-like."""
        a = np.asarray(arr, dtype=np.uint8) & 1
        if a.ndim != 2:
            raise ValueError("expected a 2-d array")
        rows, cols = a.shape
        m = cls(rows, cols)
        if rows and cols:
            padded = np.zeros((rows, m._words * 64), dtype=np.uint8)
            padded[:, :cols] = a
            packed = np.packbits(padded, axis=1, bitorder="little")
            m.data = np.ascontiguousarray(packed).view(np.uint64)
        return m

    def to_array(self) -> np.ndarray:
        """Dense uint8 0/1 array of shape (rows, cols)."""
        if self.rows == 0 or self.cols == 0:
            return np.zeros((self.rows, self.cols), dtype=np.uint8)
        bits = np.unpackbits(
            self.data.view(np.uint8), axis=1, bitorder="little"
        )
        return bits[:, : self.cols].copy()

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.rows, self.cols, self.data.copy())

    # -- element access ----------------------------------------------------

    def get(self, i: int, j: int) -> int:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"({i}, {j}) out of range for {self.rows}x{self.cols}")
        return int((self.data[i, j >> 6] >> np.uint64(j & 63)) & np.uint64(1))

    def set(self, i: int, j: int, value: int) -> None:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"({i}, {j}) out of range for {self.rows}x{self.cols}")
        if value & 1:
            self.data[i, j >> 6] |= _BIT[j & 63]
        else:
            self.data[i, j >> 6] &= ~_BIT[j & 63]

    # -- linear algebra ----------------------------------------------------

    def transpose(self) -> "BitMatrix":
        return BitMatrix.from_array(self.to_array().T)

    def rank(self) -> int:
        """Rank over GF(2), by in-place elimination on a working copy."""
        if self.rows == 0 or self.cols == 0:
            return 0
        a = self.data.copy()
        r = 0
        for col in range(self.cols):
            w = col >> 6
            bit = _BIT[col & 63]
            nz = np.nonzero(a[r:, w] & bit)[0]
            if nz.size == 0:
                continue
            p = r + int(nz[0])
            if p != r:
                a[[r, p]] = a[[p, r]]
            below = r + 1 + np.nonzero(a[r + 1 :, w] & bit)[0]
            if below.size:
                a[below] ^= a[r]
            r += 1
            if r == self.rows:
                break
        return r

    def kernel_dim(self) -> int:
        """Dimension of the null space: cols - rank."""
        return self.cols - self.rank()

    # -- misc ----------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and bool(np.array_equal(self.data, other.data))
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.data.tobytes()))

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"
