"""Bit-packed vectors and matrices over GF(2).

Bits are packed little-endian into ``uint64`` words: bit ``j`` of a vector
lives in word ``j // 64`` at position ``j % 64``. Matrices are stored
row-major, one packed vector per row.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

WORD = 64


def n_words(n_bits: int) -> int:
    return max(1, (n_bits + WORD - 1) // WORD)


def pack_bits(bits: np.ndarray) -> np.ndarray:
    """Pack the last axis of a 0/1 array into uint64 words."""
    bits = np.asarray(bits, dtype=np.uint8) & 1
    n = bits.shape[-1]
    w = n_words(n)
    padded = np.zeros(bits.shape[:-1] + (w * WORD,), dtype=np.uint8)
    padded[..., :n] = bits
    packed = np.packbits(padded, axis=-1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").astype(np.uint64, copy=False)


def unpack_bits(words: np.ndarray, n_bits: int) -> np.ndarray:
    """Inverse of :func:`pack_bits`; returns a uint8 array of 0/1."""
    words = np.ascontiguousarray(words, dtype="<u8")
    as_bytes = words.view(np.uint8)
    return np.unpackbits(as_bytes, axis=-1, count=n_bits, bitorder="little")


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.uint64)
    a.setflags(write=False)
    return a


def _check_perm(perm: Sequence[int], n: int, what: str) -> np.ndarray:
    p = np.asarray(perm, dtype=np.int64).reshape(-1)
    if p.size != n or (n and (p.min() < 0 or p.max() >= n)) or np.unique(p).size != n:
        raise ValueError(f"{what} is not a permutation of range({n})")
    return p


def invert_permutation(perm: Sequence[int]) -> tuple[int, ...]:
    p = _check_perm(perm, len(perm), "permutation")
    inv = np.empty_like(p)
    inv[p] = np.arange(p.size)
    return tuple(int(i) for i in inv)


class BitVector:
    """Immutable packed binary vector."""

    __slots__ = ("_length", "_words")

    def __init__(self, length: int, words: np.ndarray | None = None) -> None:
        if length < 0:
            raise ValueError("length must be non-negative")
        self._length = int(length)
        if words is None:
            words = np.zeros(n_words(length), dtype=np.uint64)
        elif words.shape != (n_words(length),):
            raise ValueError("word array has wrong shape")
        self._words = _frozen(words)

    @classmethod
    def from_bits(cls, bits: Iterable[int] | str) -> BitVector:
        if isinstance(bits, str):
            bits = [int(ch) for ch in bits]
        arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits, dtype=np.uint8)
        if arr.ndim != 1:
            raise ValueError("expected a 1-D bit sequence")
        if arr.size and arr.max() > 1:
            raise ValueError("bits must be 0 or 1")
        return cls(arr.size, pack_bits(arr))

    @classmethod
    def from_support(cls, length: int, support: Iterable[int]) -> BitVector:
        arr = np.zeros(length, dtype=np.uint8)
        for i in support:
            if not 0 <= i < length:
                raise IndexError(f"bit index {i} out of range for length {length}")
            arr[i] = 1
        return cls(length, pack_bits(arr))

    @classmethod
    def zeros(cls, length: int) -> BitVector:
        return cls(length)

    @property
    def length(self) -> int:
        return self._length

    @property
    def words(self) -> np.ndarray:
        return self._words

    def __len__(self) -> int:
        return self._length

    def __getitem__(self, i: int) -> int:
        if i < 0:
            i += self._length
        if not 0 <= i < self._length:
            raise IndexError(f"bit index out of range for length {self._length}")
        return int((int(self._words[i // WORD]) >> (i % WORD)) & 1)

    def __iter__(self):
        return iter(self.to_array().tolist())

    def to_array(self) -> np.ndarray:
        return unpack_bits(self._words, self._length)

    def support(self) -> tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self.to_array()))

    def popcount(self) -> int:
        return int(np.bitwise_count(self._words).sum())

    def any(self) -> bool:
        return bool(self._words.any())

    def dot(self, other: BitVector) -> int:
        """Parity of the bitwise AND."""
        self._same_length(other)
        return int(np.bitwise_count(self._words & other._words).sum() & 1)

    def __xor__(self, other: BitVector) -> BitVector:
        self._same_length(other)
        return BitVector(self._length, self._words ^ other._words)

    def __and__(self, other: BitVector) -> BitVector:
        self._same_length(other)
        return BitVector(self._length, self._words & other._words)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented
        return self._length == other._length and bool(np.array_equal(self._words, other._words))

    def __hash__(self) -> int:
        return hash((self._length, self._words.tobytes()))

    def __str__(self) -> str:
        return "".join(str(b) for b in self.to_array())

    def __repr__(self) -> str:
        return f"BitVector('{self}')"

    def _same_length(self, other: BitVector) -> None:
        if self._length != other._length:
            raise ValueError(f"length mismatch: {self._length} vs {other._length}")


class BitMatrix:
    """Immutable dense binary matrix, rows packed into uint64 words."""

    __slots__ = ("_rows", "_cols", "_words")

    def __init__(self, rows: int, cols: int, words: np.ndarray | None = None) -> None:
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        self._rows, self._cols = int(rows), int(cols)
        shape = (self._rows, n_words(self._cols))
        if words is None:
            words = np.zeros(shape, dtype=np.uint64)
        elif words.shape != shape:
            raise ValueError(f"word array has shape {words.shape}, expected {shape}")
        self._words = _frozen(words)

    @classmethod
    def from_dense(cls, dense) -> BitMatrix:
        arr = np.asarray(dense, dtype=np.uint8)
        if arr.ndim != 2:
            raise ValueError("expected a 2-D array")
        if arr.size and arr.max() > 1:
            raise ValueError("entries must be 0 or 1")
        return cls(arr.shape[0], arr.shape[1], pack_bits(arr))

    @classmethod
    def from_rows(cls, rows: Sequence[BitVector], cols: int | None = None) -> BitMatrix:
        if cols is None:
            if not rows:
                raise ValueError("cols required for an empty row list")
            cols = rows[0].length
        if any(r.length != cols for r in rows):
            raise ValueError("all rows must have the same length")
        words = np.stack([r.words for r in rows]) if rows else None
        return cls(len(rows), cols, words)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> BitMatrix:
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    @staticmethod
    def block_diag(blocks: Sequence[BitMatrix], extra_cols: int = 0) -> BitMatrix:
        """Stack blocks along the diagonal, then append ``extra_cols`` zero columns."""
        r = sum(b.rows for b in blocks)
        c = sum(b.cols for b in blocks) + extra_cols
        dense = np.zeros((r, c), dtype=np.uint8)
        i = j = 0
        for b in blocks:
            dense[i : i + b.rows, j : j + b.cols] = b.to_dense()
            i += b.rows
            j += b.cols
        return BitMatrix.from_dense(dense)

    @property
    def rows(self) -> int:
        return self._rows

    @property
    def cols(self) -> int:
        return self._cols

    @property
    def shape(self) -> tuple[int, int]:
        return (self._rows, self._cols)

    @property
    def words(self) -> np.ndarray:
        return self._words

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        if not (0 <= i < self._rows and 0 <= j < self._cols):
            raise IndexError(f"index {idx} out of range for shape {self.shape}")
        return int((int(self._words[i, j // WORD]) >> (j % WORD)) & 1)

    def row(self, i: int) -> BitVector:
        if not 0 <= i < self._rows:
            raise IndexError(f"row {i} out of range")
        return BitVector(self._cols, self._words[i].copy())

    def to_dense(self) -> np.ndarray:
        return unpack_bits(self._words, self._cols).reshape(self._rows, self._cols)

    def transpose(self) -> BitMatrix:
        return BitMatrix.from_dense(self.to_dense().T)

    @property
    def T(self) -> BitMatrix:
        return self.transpose()

    def nnz(self) -> int:
        return int(np.bitwise_count(self._words).sum())

    def column_weights(self) -> np.ndarray:
        return self.to_dense().sum(axis=0, dtype=np.int64)

    def __matmul__(self, v: BitVector) -> BitVector:
        return mat_vec(self, v)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._words, other._words))

    def __hash__(self) -> int:
        return hash((self.shape, self._words.tobytes()))

    def __repr__(self) -> str:
        body = ", ".join("".join(map(str, r)) for r in self.to_dense().tolist())
        return f"BitMatrix({self._rows}x{self._cols}: [{body}])"


def mat_vec(m: BitMatrix, v: BitVector) -> BitVector:
    """Matrix-vector product over GF(2)."""
    if v.length != m.cols:
        raise ValueError(f"dimension mismatch: matrix has {m.cols} columns, vector has {v.length} bits")
    parities = (np.bitwise_count(m.words & v.words[None, :]).sum(axis=1) & 1).astype(np.uint8)
    return BitVector(m.rows, pack_bits(parities))


def rank(m: BitMatrix) -> int:
    """GF(2) rank by row elimination on a copy.

    Columns are processed left to right; the pivot is the first row at or
    below the current pivot row with a set bit.
    """
    work = np.array(m.words, dtype=np.uint64)
    r = 0
    for c in range(m.cols):
        if r == m.rows:
            break
        word, mask = c // WORD, np.uint64(1 << (c % WORD))
        hits = np.flatnonzero(work[r:, word] & mask)
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            work[[r, p]] = work[[p, r]]
        below = np.flatnonzero(work[:, word] & mask)
        below = below[below != r]
        work[below] ^= work[r]
        r += 1
    return r


def permute(m: BitMatrix, row_perm: Sequence[int], col_perm: Sequence[int]) -> BitMatrix:
    """Return ``P`` with ``P[i, j] == m[row_perm[i], col_perm[j]]``."""
    rp = _check_perm(row_perm, m.rows, "row permutation")
    cp = _check_perm(col_perm, m.cols, "column permutation")
    return BitMatrix.from_dense(m.to_dense()[rp][:, cp])
