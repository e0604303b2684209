"""Linear algebra over F2 and arithmetic in F2[X] and F2[X]/(X^n - 1).

Polynomials are Python ints used as coefficient bitsets (bit ``i`` is the
coefficient of ``X^i``). Matrices are bit-packed into ``uint64`` words per row;
dense ``uint8`` 0/1 arrays are the public vector format.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .kernels import n_words


@dataclass(frozen=True)
class Poly:
    """Binary polynomial; ``bits`` bit ``i`` is the coefficient of ``X^i``."""

    bits: int = 0

    def __post_init__(self):
        if self.bits < 0:
            raise ValueError("coefficient bitset must be non-negative")

    @classmethod
    def from_exponents(cls, exps: Iterable[int]) -> "Poly":
        bits = 0
        for e in exps:
            if e < 0:
                raise ValueError(f"negative exponent {e}")
            bits ^= 1 << e
        return cls(bits)

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[int]) -> "Poly":
        bits = 0
        for i, c in enumerate(coeffs):
            if c & 1:
                bits |= 1 << i
        return cls(bits)

    @classmethod
    def monomial(cls, e: int) -> "Poly":
        return cls(1 << e)

    @property
    def degree(self) -> int | None:
        """Highest exponent, or ``None`` for the zero polynomial."""
        return self.bits.bit_length() - 1 if self.bits else None

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    @property
    def exponents(self) -> list[int]:
        return [i for i in range(self.bits.bit_length()) if (self.bits >> i) & 1]

    def is_zero(self) -> bool:
        return self.bits == 0

    def coeffs(self, n: int) -> np.ndarray:
        """Coefficient vector of length ``n``."""
        if self.bits >> n:
            raise ValueError(f"degree {self.degree} does not fit in length {n}")
        return np.array([(self.bits >> i) & 1 for i in range(n)], dtype=np.uint8)

    def __add__(self, other: "Poly") -> "Poly":
        return Poly(self.bits ^ other.bits)

    __sub__ = __add__

    def __mul__(self, other: "Poly") -> "Poly":
        return Poly(_clmul(self.bits, other.bits))

    def __str__(self) -> str:
        if not self.bits:
            return "0"
        terms = []
        for e in self.exponents:
            terms.append("1" if e == 0 else ("X" if e == 1 else f"X^{e}"))
        return " + ".join(terms)


def _clmul(u: int, v: int) -> int:
    out = 0
    while v:
        low = v & -v
        out ^= u << (low.bit_length() - 1)
        v ^= low
    return out


def _divmod(u: int, v: int) -> tuple[int, int]:
    if v == 0:
        raise ZeroDivisionError("polynomial division by zero")
    q = 0
    dv = v.bit_length()
    while u.bit_length() >= dv:
        shift = u.bit_length() - dv
        q ^= 1 << shift
        u ^= v << shift
    return q, u


def poly_reduce(p: Poly, n: int) -> Poly:
    """Reduce modulo ``X^n - 1`` by folding exponents modulo ``n``."""
    if n < 1:
        raise ValueError("modulus exponent n must be >= 1")
    mask = (1 << n) - 1
    bits, out = p.bits, 0
    while bits:
        out ^= bits & mask
        bits >>= n
    return Poly(out)


def poly_mul_mod(u: Poly, v: Poly, n: int) -> Poly:
    """``u * v mod (X^n - 1)``."""
    if n < 1:
        raise ValueError("modulus exponent n must be >= 1")
    return poly_reduce(Poly(_clmul(u.bits, v.bits)), n)


def poly_divmod(u: Poly, v: Poly) -> tuple[Poly, Poly]:
    q, r = _divmod(u.bits, v.bits)
    return Poly(q), Poly(r)


def poly_gcd(u: Poly, v: Poly) -> Poly:
    """Greatest common divisor; ``gcd(0, p) = p`` and ``gcd(0, 0) = 0``."""
    a, b = u.bits, v.bits
    while b:
        a, b = b, _divmod(a, b)[1]
    return Poly(a)


def xn_minus_1(n: int) -> Poly:
    return Poly((1 << n) | 1)


# ---------------------------------------------------------------------------
# packed bit vectors


def pack_bits(bits: Sequence[int] | np.ndarray, ncols: int | None = None) -> np.ndarray:
    """Pack a 0/1 sequence into ``uint64`` words."""
    arr = np.asarray(bits, dtype=np.uint8).ravel() & 1
    if ncols is None:
        ncols = arr.size
    elif arr.size != ncols:
        raise ValueError(f"vector length {arr.size} != {ncols}")
    nw = n_words(ncols)
    padded = np.zeros(nw * 64, dtype=np.uint8)
    padded[: arr.size] = arr
    by = np.packbits(padded, bitorder="little")
    return by.view("<u8").astype(np.uint64)


def unpack_bits(words: np.ndarray, ncols: int) -> np.ndarray:
    by = np.ascontiguousarray(words, dtype="<u8").view(np.uint8)
    return np.unpackbits(by, bitorder="little")[:ncols].copy()


def pack_rows(dense: np.ndarray) -> np.ndarray:
    dense = np.atleast_2d(np.asarray(dense, dtype=np.uint8)) & 1
    rows, cols = dense.shape
    nw = n_words(cols)
    padded = np.zeros((rows, nw * 64), dtype=np.uint8)
    padded[:, :cols] = dense
    by = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(by).view("<u8").astype(np.uint64).reshape(rows, nw)


def unpack_rows(words: np.ndarray, ncols: int) -> np.ndarray:
    words = np.ascontiguousarray(words, dtype="<u8")
    by = words.view(np.uint8).reshape(words.shape[0], -1)
    return np.unpackbits(by, axis=1, bitorder="little")[:, :ncols].copy()


def popcount(words: np.ndarray) -> int:
    return int(np.bitwise_count(np.asarray(words, dtype=np.uint64)).sum())


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True, eq=False)
class BitMatrix:
    """Matrix over F2 with bit-packed rows."""

    rows: int
    cols: int
    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.data.shape != (self.rows, n_words(self.cols)):
            raise ValueError("packed data shape does not match dimensions")
        self.data.setflags(write=False)

    @classmethod
    def from_dense(cls, dense) -> "BitMatrix":
        dense = np.asarray(dense, dtype=np.uint8)
        if dense.ndim != 2:
            raise ValueError("expected a 2-d array")
        return cls(dense.shape[0], dense.shape[1], pack_rows(dense))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols, np.zeros((rows, n_words(cols)), dtype=np.uint64))

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    def to_dense(self) -> np.ndarray:
        return unpack_rows(self.data, self.cols)

    def row(self, i: int) -> np.ndarray:
        return unpack_bits(self.data[i], self.cols)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and np.array_equal(
            self.data, other.data
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.data.tobytes()))

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        prod = (self.to_dense().astype(np.int64) @ other.to_dense().astype(np.int64)) & 1
        return BitMatrix.from_dense(prod)

    def apply(self, vec) -> np.ndarray:
        """Matrix-vector product ``M v`` for a dense 0/1 column vector."""
        v = np.asarray(vec, dtype=np.int64)
        if v.shape != (self.cols,):
            raise ValueError(f"vector length {v.size} != {self.cols}")
        return ((self.to_dense().astype(np.int64) @ v) & 1).astype(np.uint8)

    @property
    def T(self) -> "BitMatrix":
        return BitMatrix.from_dense(self.to_dense().T)

    def hstack(self, other: "BitMatrix") -> "BitMatrix":
        return BitMatrix.from_dense(np.hstack([self.to_dense(), other.to_dense()]))

    def vstack(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.cols:
            raise ValueError("column mismatch")
        return BitMatrix(self.rows + other.rows, self.cols, np.vstack([self.data, other.data]))

    def is_zero(self) -> bool:
        return not self.data.any()

    def rank(self) -> int:
        return row_echelon(self).rank


@dataclass(frozen=True, eq=False)
class RowBasis:
    """Reduced row-echelon basis of a row space."""

    rows: int
    cols: int
    pivots: np.ndarray
    echelon: np.ndarray = field(repr=False)

    @property
    def rank(self) -> int:
        return int(self.pivots.shape[0])

    def to_matrix(self) -> BitMatrix:
        return BitMatrix(self.rank, self.cols, self.echelon.copy())

    def reduce(self, vec) -> np.ndarray:
        """Residue of a dense vector after elimination against the basis."""
        packed = pack_bits(vec, self.cols)
        return unpack_bits(kernels.reduce_vector(self.echelon, self.pivots, packed), self.cols)

    def contains_packed(self, packed: np.ndarray) -> bool:
        return not kernels.reduce_vector(self.echelon, self.pivots, packed).any()


def row_echelon(m: BitMatrix) -> RowBasis:
    echelon, pivots = kernels.rref(np.ascontiguousarray(m.data), m.cols)
    echelon.setflags(write=False)
    return RowBasis(m.rows, m.cols, pivots, echelon)


def rowspace_contains(b: RowBasis, v) -> bool:
    v = np.asarray(v)
    if v.shape != (b.cols,):
        raise ValueError(f"vector length {v.size} != basis width {b.cols}")
    return b.contains_packed(pack_bits(v, b.cols))


def kernel_basis(m: BitMatrix) -> list[np.ndarray]:
    """Basis of the right kernel ``{v : M v = 0}``; ``cols - rank`` vectors."""
    basis = row_echelon(m)
    ech = unpack_rows(basis.echelon, m.cols) if basis.rank else np.zeros((0, m.cols), np.uint8)
    pivots = [int(p) for p in basis.pivots]
    pivot_set = set(pivots)
    out = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        v = np.zeros(m.cols, dtype=np.uint8)
        v[f] = 1
        for i, p in enumerate(pivots):
            if ech[i, f]:
                v[p] = 1
        out.append(v)
    return out


def circulant(p: Poly, n: int) -> BitMatrix:
    """``n x n`` circulant with entry ``(i, j) = coeff_{(i - j) mod n}``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if p.bits >> n:
        raise ValueError(f"degree {p.degree} must be < n = {n}")
    c = p.coeffs(n)
    idx = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
    return BitMatrix.from_dense(c[idx])
