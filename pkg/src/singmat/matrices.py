"""Matrix and vector value types.

``BitMatrix`` packs each row of a zero-one matrix into a single Python
integer (bit j = column j), so a whole-row update is one bignum XOR and
popcounts come from ``int.bit_count``.  ``IntMatrix`` and
``RationalVector`` carry arbitrary-precision entries for exact
certification.  All types are immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch


def pack_bits(bits: Sequence[int]) -> int:
    """Pack an iterable of 0/1 entries into an int, entry j -> bit j."""
    word = 0
    for j, b in enumerate(bits):
        if b not in (0, 1):
            raise ValueError(f"entry {j} is {b!r}, not a bit")
        word |= b << j
    return word


def unpack_bits(word: int, width: int) -> tuple[int, ...]:
    """Inverse of pack_bits for a row of the given logical width."""
    return tuple((word >> j) & 1 for j in range(width))


@dataclass(frozen=True)
class BitMatrix:
    """Dense zero-one matrix with rows stored as packed bit integers."""

    n_rows: int
    n_cols: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.n_rows < 0 or self.n_cols < 0:
            raise ValueError("negative dimensions")
        if len(self.rows) != self.n_rows:
            raise ValueError("row count does not match n_rows")
        mask = (1 << self.n_cols) - 1
        for i, r in enumerate(self.rows):
            if r < 0 or r & ~mask:
                raise ValueError(f"row {i} has bits outside the logical width")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], n_cols: int | None = None) -> BitMatrix:
        rows = [list(r) for r in rows]
        if n_cols is None:
            n_cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != n_cols:
                raise DimensionMismatch("ragged rows")
        return cls(len(rows), n_cols, tuple(pack_bits(r) for r in rows))

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int) -> BitMatrix:
        return cls(n_rows, n_cols, (0,) * n_rows)

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls(n, n, tuple(1 << i for i in range(n)))

    def get(self, i: int, j: int) -> int:
        if not (0 <= i < self.n_rows and 0 <= j < self.n_cols):
            raise IndexError("entry out of range")
        return (self.rows[i] >> j) & 1

    def row_sum(self, i: int) -> int:
        return self.rows[i].bit_count()

    def to_lists(self) -> list[list[int]]:
        return [list(unpack_bits(r, self.n_cols)) for r in self.rows]

    def transpose(self) -> BitMatrix:
        if self.n_rows == 0 or self.n_cols == 0:
            return BitMatrix(self.n_cols, self.n_rows, (0,) * self.n_cols)
        a = self.to_bit_array()
        return BitMatrix.from_bit_array(a.T)

    def complement(self) -> BitMatrix:
        """Entrywise 1 - entry (bitwise NOT within the logical width)."""
        mask = (1 << self.n_cols) - 1
        return BitMatrix(self.n_rows, self.n_cols, tuple(r ^ mask for r in self.rows))

    def to_bit_array(self) -> np.ndarray:
        """Rows expanded to a (n_rows, n_cols) uint8 array of 0/1."""
        nbytes = (self.n_cols + 7) // 8
        if nbytes == 0:
            return np.zeros((self.n_rows, 0), dtype=np.uint8)
        buf = b"".join(r.to_bytes(nbytes, "little") for r in self.rows)
        a = np.frombuffer(buf, dtype=np.uint8).reshape(self.n_rows, nbytes)
        return np.unpackbits(a, axis=1, bitorder="little")[:, : self.n_cols]

    @classmethod
    def from_bit_array(cls, a: np.ndarray) -> BitMatrix:
        a = np.asarray(a, dtype=np.uint8)
        n_rows, n_cols = a.shape
        packed = np.packbits(a, axis=1, bitorder="little")
        rows = tuple(int.from_bytes(packed[i].tobytes(), "little") for i in range(n_rows))
        return cls(n_rows, n_cols, rows)

    def to_int_matrix(self) -> IntMatrix:
        """Lift to an exact integer matrix (entries 0/1 as Python ints)."""
        return IntMatrix.from_rows(self.to_lists())

    def __str__(self) -> str:
        return "\n".join(
            "".join(str(b) for b in unpack_bits(r, self.n_cols)) for r in self.rows
        )


@dataclass(frozen=True)
class ModMatrix:
    """Matrix with entries reduced modulo a fixed integer >= 2."""

    n_rows: int
    n_cols: int
    modulus: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError("modulus must be >= 2")
        if len(self.entries) != self.n_rows:
            raise ValueError("row count mismatch")
        reduced = tuple(
            tuple(e % self.modulus for e in row) for row in self.entries
        )
        for row in reduced:
            if len(row) != self.n_cols:
                raise DimensionMismatch("ragged rows")
        object.__setattr__(self, "entries", reduced)

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], modulus: int) -> ModMatrix:
        rows = tuple(tuple(int(e) for e in r) for r in rows)
        n_cols = len(rows[0]) if rows else 0
        return cls(len(rows), n_cols, modulus, rows)


@dataclass(frozen=True)
class IntMatrix:
    """Matrix with exact arbitrary-precision integer entries."""

    n_rows: int
    n_cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.n_rows:
            raise ValueError("row count mismatch")
        for row in self.entries:
            if len(row) != self.n_cols:
                raise DimensionMismatch("ragged rows")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]]) -> IntMatrix:
        rows = tuple(tuple(int(e) for e in r) for r in rows)
        n_cols = len(rows[0]) if rows else 0
        return cls(len(rows), n_cols, rows)

    def transpose(self) -> IntMatrix:
        return IntMatrix(
            self.n_cols,
            self.n_rows,
            tuple(tuple(self.entries[i][j] for i in range(self.n_rows)) for j in range(self.n_cols)),
        )


@dataclass(frozen=True)
class RationalVector:
    """Vector of exact rationals, entries always in lowest terms."""

    entries: tuple[Fraction, ...]

    @classmethod
    def from_values(cls, values: Iterable) -> RationalVector:
        return cls(tuple(Fraction(v) for v in values))

    @property
    def length(self) -> int:
        return len(self.entries)

    def is_zero(self) -> bool:
        return all(e == 0 for e in self.entries)

    def integer_entries(self) -> tuple[int, ...]:
        """Entries as ints; raises if any entry is not an integer."""
        out = []
        for e in self.entries:
            if e.denominator != 1:
                raise ValueError("vector has non-integer entries")
            out.append(e.numerator)
        return tuple(out)

    def cleared(self) -> tuple[int, ...]:
        """Integer form: multiply out denominators, divide by content,
        and flip signs so the first nonzero entry is positive."""
        from math import gcd, lcm

        den = lcm(*(e.denominator for e in self.entries)) if self.entries else 1
        ints = [int(e * den) for e in self.entries]
        g = 0
        for v in ints:
            g = gcd(g, v)
        if g > 1:
            ints = [v // g for v in ints]
        for v in ints:
            if v != 0:
                if v < 0:
                    ints = [-w for w in ints]
                break
        return tuple(ints)


@dataclass(frozen=True)
class KernelBasis:
    """Basis of a left or right kernel over a tagged field.

    ``field_tag`` is "gf2", "rational", or a prime integer.  GF(2) basis
    vectors are packed bit integers; rational ones are RationalVector.
    """

    field_tag: str | int
    vectors: tuple
    ambient_dim: int
    side: str = field(default="right")

    def __post_init__(self):
        if self.side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def is_trivial(self) -> bool:
        return not self.vectors

    def vectors_as_tuples(self) -> list[tuple]:
        """Basis vectors as plain entry tuples regardless of field."""
        if self.field_tag == "gf2":
            return [unpack_bits(v, self.ambient_dim) for v in self.vectors]
        return [tuple(v.entries) for v in self.vectors]
