"""Generalized bicycle codes GB(A, B, n) and the four named families."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from math import gcd
from typing import Literal

import numpy as np

from .f2 import (
    BitMatrix,
    Poly,
    RowBasis,
    circulant,
    kernel_basis,
    pack_bits,
    pack_rows,
    poly_gcd,
    poly_mul_mod,
    row_echelon,
    xn_minus_1,
)

ORACLE_MAX_KERNEL_DIM = 20

DistanceStatus = Literal["exact", "bounded", "claimed", "unknown"]


class OracleGuardError(ValueError):
    """Raised when exhaustive enumeration would exceed the size guard."""


@dataclass(frozen=True, eq=False)
class GbCode:
    """GB(A, B, n): ``hx = [Circ(A), Circ(B)]``, ``hz = [Circ(B)^T, Circ(A)^T]``."""

    n: int
    a_poly: Poly
    b_poly: Poly
    hx: BitMatrix = field(repr=False)
    hz: BitMatrix = field(repr=False)
    hx_basis: RowBasis = field(repr=False)
    hz_basis: RowBasis = field(repr=False)

    @property
    def N(self) -> int:
        return 2 * self.n

    @property
    def literal(self) -> str:
        return format_literal(self.a_poly, self.b_poly, self.n)

    def __repr__(self) -> str:
        return f"GbCode({self.literal})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, GbCode):
            return NotImplemented
        return (self.n, self.a_poly, self.b_poly) == (other.n, other.a_poly, other.b_poly)

    def __hash__(self):
        return hash((self.n, self.a_poly, self.b_poly))

    @property
    def dimension(self) -> int:
        return gb_dimension(self)

    def is_two_term(self) -> bool:
        return self.a_poly.weight == 2 and self.b_poly.weight == 2

    def normal_form(self) -> tuple[int, int, int, int]:
        """For two-term polynomials ``A = X^i (1 + X^a)``, ``B = X^j (1 + X^b)``
        returns ``(a, b, i, j)`` with ``0 < a, b < n``."""
        if not self.is_two_term():
            raise ValueError(f"{self.literal} is not a (2,2)-GB code")
        i, i2 = self.a_poly.exponents
        j, j2 = self.b_poly.exponents
        return i2 - i, j2 - j, i, j

    def cycle_vector(self, u: Poly, v: Poly) -> np.ndarray:
        """Dense length-2n vector ``(u; v)`` of coefficient vectors."""
        return np.concatenate([u.coeffs(self.n), v.coeffs(self.n)])


@dataclass(frozen=True)
class CodeParams:
    N: int
    k: int
    d: int | None = None
    status: DistanceStatus = "unknown"
    lower: int | None = None
    upper: int | None = None

    def as_tuple(self) -> tuple[int, int, int | None]:
        return (self.N, self.k, self.d)

    def __str__(self) -> str:
        return f"[[{self.N},{self.k},{'?' if self.d is None else self.d}]]"


def gb_build(a: Poly, b: Poly, n: int) -> GbCode:
    if n < 1:
        raise ValueError("n must be >= 1")
    for name, p in (("A", a), ("B", b)):
        if p.bits >> n:
            raise ValueError(f"deg {name} = {p.degree} must be < n = {n}")
    if a.is_zero() and b.is_zero():
        raise ValueError("A and B cannot both be zero")
    ca, cb = circulant(a, n).to_dense(), circulant(b, n).to_dense()
    hx_dense = np.hstack([ca, cb])
    hz_dense = np.hstack([cb.T, ca.T])
    if ((hx_dense.astype(np.int64) @ hz_dense.T.astype(np.int64)) & 1).any():
        raise AssertionError(f"CSS condition violated for GB({a}, {b}, {n})")
    hx = BitMatrix.from_dense(hx_dense)
    hz = BitMatrix.from_dense(hz_dense)
    return GbCode(n, a, b, hx, hz, row_echelon(hx), row_echelon(hz))


def gb_from_exponents(a_exps, b_exps, n: int) -> GbCode:
    return gb_build(Poly.from_exponents(a_exps), Poly.from_exponents(b_exps), n)


def gb_triple(a: int, b: int, n: int) -> GbCode:
    """GB(1 + X^a, 1 + X^b, n)."""
    return gb_from_exponents([0, a % n], [0, b % n], n)


def gb_dimension(code: GbCode) -> int:
    g = poly_gcd(poly_gcd(code.a_poly, code.b_poly), xn_minus_1(code.n))
    return 2 * (g.degree or 0)


def dimension_by_rank(code: GbCode) -> int:
    return 2 * code.n - code.hx_basis.rank - code.hz_basis.rank


def pair_in_kernel(u: Poly, v: Poly, code: GbCode) -> bool:
    """``A U + B V == 0 mod X^n - 1``."""
    n = code.n
    s = poly_mul_mod(code.a_poly, u, n) + poly_mul_mod(code.b_poly, v, n)
    return s.is_zero()


def pair_in_rowspace(u: Poly, v: Poly, code: GbCode) -> bool:
    """Exists H with ``U = B H`` and ``V = A H`` mod ``X^n - 1``."""
    return code.hz_basis.contains_packed(pack_bits(code.cycle_vector(u, v)))


def dual_code(code: GbCode) -> GbCode:
    """GB(B*, A*, n) with ``P*(X) = P(X^-1)``: its ``hx`` is ``code.hz`` and its
    ``hz`` is ``code.hx``, so its X-distance is the Z-distance of ``code``."""
    n = code.n

    def rev(p: Poly) -> Poly:
        return Poly.from_exponents((-e) % n for e in p.exponents)

    return gb_build(rev(code.b_poly), rev(code.a_poly), n)


def oracle_distance(code: GbCode, side: Literal["x", "z"] = "x") -> int | None:
    """Exact ``d_X`` (or ``d_Z``) by enumerating the whole kernel.

    Returns ``None`` when there are no logical operators (k = 0). Refuses
    kernels of dimension above ``ORACLE_MAX_KERNEL_DIM``.
    """
    check, stab = (code.hx, code.hz_basis) if side == "x" else (code.hz, code.hx_basis)
    basis = kernel_basis(check)
    m = len(basis)
    if m > ORACLE_MAX_KERNEL_DIM:
        raise OracleGuardError(f"kernel dimension {m} exceeds {ORACLE_MAX_KERNEL_DIM}")
    if m == stab.rank:
        return None
    packed = pack_rows(np.array(basis)) if m else np.zeros((0, 1), np.uint64)
    vecs = np.zeros((1, packed.shape[1]), dtype=np.uint64)
    for row in packed:
        vecs = np.concatenate([vecs, vecs ^ row])
    weights = np.bitwise_count(vecs).sum(axis=1)
    residue = vecs.copy()
    for i, col in enumerate(stab.pivots):
        col = int(col)
        hit = ((residue[:, col >> 6] >> np.uint64(col & 63)) & np.uint64(1)).astype(bool)
        residue[hit] ^= stab.echelon[i]
    nontrivial = residue.any(axis=1)
    return int(weights[nontrivial].min())


# ---------------------------------------------------------------------------
# literals

_LITERAL = re.compile(r"^GB\(([^;()]*);([^;()]*);([^;()]*)\)$")


def parse_literal(text: str) -> GbCode:
    """Parse ``GB(a-exps; b-exps; n)``, e.g. ``GB(0,1;0,3;9)``."""
    m = _LITERAL.match(re.sub(r"\s+", "", text))
    if not m:
        raise ValueError(f"malformed code literal {text!r}")

    def exps(field_text: str) -> list[int]:
        if not field_text:
            return []
        try:
            return [int(x) for x in field_text.split(",")]
        except ValueError:
            raise ValueError(f"malformed exponent list {field_text!r}") from None

    try:
        n = int(m.group(3))
    except ValueError:
        raise ValueError(f"malformed block size {m.group(3)!r}") from None
    return gb_build(Poly.from_exponents(exps(m.group(1))), Poly.from_exponents(exps(m.group(2))), n)


def format_literal(a: Poly, b: Poly, n: int) -> str:
    return "GB({};{};{})".format(
        ",".join(map(str, a.exponents)), ",".join(map(str, b.exponents)), n
    )


# ---------------------------------------------------------------------------
# families


def fam_square(n: int) -> tuple[GbCode, CodeParams]:
    """GB(1 + X, 1 + X^n, n^2), claimed [[2n^2, 2, n]]."""
    if n < 2:
        raise ValueError("square family needs n >= 2")
    m = n * n
    return gb_triple(1, n % m, m), CodeParams(2 * m, 2, n, "claimed")


def fam_even(r: int) -> tuple[GbCode, CodeParams]:
    """GB(1 + X, 1 + X^(2r-1), 2r^2), claimed [[4r^2, 2, 2r]]."""
    if r < 1:
        raise ValueError("even family needs r >= 1")
    m = 2 * r * r
    return gb_triple(1, 2 * r - 1, m), CodeParams(2 * m, 2, 2 * r, "claimed")


def fam_odd(t: int) -> tuple[GbCode, CodeParams]:
    """GB(1 + X, 1 + X^(2t+1), t^2 + (t+1)^2), claimed [[(2t+1)^2 + 1, 2, 2t+1]]."""
    if t < 1:
        raise ValueError("odd family needs t >= 1")
    m = t * t + (t + 1) ** 2
    return gb_triple(1, 2 * t + 1, m), CodeParams(2 * m, 2, 2 * t + 1, "claimed")


def kp_polynomials(t: int) -> tuple[Poly, Poly, int]:
    """A = 1 + X^(2t^2+1), B = X + X^(2t^2), n = t^2 + (t+1)^2."""
    n = t * t + (t + 1) ** 2
    return Poly.from_exponents([0, 2 * t * t + 1]), Poly.from_exponents([1, 2 * t * t]), n


def fam_kp(t: int) -> tuple[GbCode, CodeParams]:
    """Odd-distance family with both polynomials shifted, claimed [[(2t+1)^2 + 1, 2, 2t+1]]."""
    if t < 1:
        raise ValueError("the shifted odd family needs t >= 1")
    a, b, n = kp_polynomials(t)
    return gb_build(a, b, n), CodeParams(2 * n, 2, 2 * t + 1, "claimed")


FAMILIES = {"square": fam_square, "even": fam_even, "odd": fam_odd, "kp": fam_kp}


def is_connected_triple(a: int, b: int, n: int) -> bool:
    return gcd(gcd(a, b), n) == 1
