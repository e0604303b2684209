"""Rank-2 integer lattices attached to (2,2)-GB codes and their Manhattan minima.

For GB(X^i (1 + X^a), X^j (1 + X^b), n) the lattice is the kernel of
``(u, v) -> a u + b v mod n``: the net step counts of closed walks in the
Cayley graph. Lattices are stored in Hermite form, generated by ``(p, 0)`` and
``(q, s)`` with ``p, s > 0`` and ``0 <= q < p``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from .gbcode import GbCode


@dataclass(frozen=True, order=True)
class LatticeVector:
    x: int
    y: int

    @property
    def manhattan(self) -> int:
        return abs(self.x) + abs(self.y)

    def __neg__(self) -> "LatticeVector":
        return LatticeVector(-self.x, -self.y)


@dataclass(frozen=True)
class Lattice2:
    p: int
    q: int
    s: int
    alpha: int | None = None  # set for congruence-form lattices {x + alpha y = 0 mod n}

    @classmethod
    def from_basis(cls, v1, v2) -> "Lattice2":
        x1, y1 = v1
        x2, y2 = v2
        det = x1 * y2 - x2 * y1
        if det == 0:
            raise ValueError("lattice basis is singular")
        g, u, w = _xgcd(y1, y2)
        if g == 0:
            raise ValueError("lattice basis is singular")
        bx = u * x1 + w * x2
        p = abs(det) // g
        return cls(p, bx % p, g)

    @property
    def det(self) -> int:
        return self.p * self.s

    @property
    def n(self) -> int:
        return self.det

    @property
    def basis(self) -> tuple[LatticeVector, LatticeVector]:
        return LatticeVector(self.p, 0), LatticeVector(self.q, self.s)

    def contains(self, v) -> bool:
        x, y = (v.x, v.y) if isinstance(v, LatticeVector) else v
        if y % self.s:
            return False
        return (x - (y // self.s) * self.q) % self.p == 0

    def vectors_up_to(self, norm: int) -> list[LatticeVector]:
        """Nonzero members with Manhattan norm <= ``norm``, one per sign pair,
        sorted by (norm, x, y)."""
        out = []
        k = 0
        while k * self.s <= norm:
            y = k * self.s
            room = norm - y
            r = (k * self.q) % self.p
            x = r - ((r + room) // self.p) * self.p
            while x <= room:
                if abs(x) <= room and (k > 0 or x > 0):
                    out.append(LatticeVector(x, y))
                x += self.p
            k += 1
        out.sort(key=lambda v: (v.manhattan, v.x, v.y))
        return out


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """``(g, u, w)`` with ``u a + w b = g = gcd(a, b) >= 0``."""
    old_r, r, old_u, u, old_w, w = a, b, 1, 0, 0, 1
    while r:
        qt = old_r // r
        old_r, r = r, old_r - qt * r
        old_u, u = u, old_u - qt * u
        old_w, w = w, old_w - qt * w
    if old_r < 0:
        return -old_r, -old_u, -old_w
    return old_r, old_u, old_w


def lattice_from_alpha(alpha: int, n: int) -> Lattice2:
    """``{(x, y) : x + alpha y = 0 mod n}``, spanned by ``(n, 0)`` and ``(alpha, -1)``."""
    if n < 1 or not 0 <= alpha < n:
        raise ValueError("need n >= 1 and 0 <= alpha < n")
    return Lattice2(n, (-alpha) % n, 1, alpha)


def lattice_from_steps(a: int, b: int, n: int) -> Lattice2:
    """``{(u, v) : a u + b v = 0 mod n}``."""
    g = gcd(a, n)
    s = g // gcd(g, b)
    p = n // g
    # solve a q = -b s (mod n); divisible by g by choice of s
    rhs = (-b * s // g) % p if p > 1 else 0
    q = (rhs * pow(a // g, -1, p)) % p if p > 1 else 0
    return Lattice2(p, q, s)


def lattice_of_code(code: GbCode) -> Lattice2:
    a, b, _, _ = code.normal_form()
    return lattice_from_steps(a, b, code.n)


def lambda_min(lat: Lattice2) -> int:
    """Minimum Manhattan norm of a nonzero lattice vector."""
    best = lat.p
    k = 1
    while k * lat.s < best:
        y = k * lat.s
        r = (k * lat.q) % lat.p
        best = min(best, y + min(r, lat.p - r))
        k += 1
    return best


def shortest_vectors(lat: Lattice2) -> list[LatticeVector]:
    """All vectors of norm ``lambda_min``, up to sign."""
    return lat.vectors_up_to(lambda_min(lat))


def reduce_unit_form(a: int, b: int, n: int) -> int | None:
    """``alpha`` with GB(1+X^a, 1+X^b, n) equivalent to GB(1+X, 1+X^alpha, n), if any."""
    if gcd(a, n) == 1:
        return (b * pow(a, -1, n)) % n
    if gcd(b, n) == 1:
        return (a * pow(b, -1, n)) % n
    return None


def lattice_bound(code: GbCode) -> int | None:
    """Lattice lower bound on the distance, or ``None`` outside its hypotheses
    (not two-term, n < 6, or neither step coprime with n)."""
    if not code.is_two_term() or code.n < 6:
        return None
    a, b, _, _ = code.normal_form()
    alpha = reduce_unit_form(a, b, code.n)
    if alpha is None:
        return None
    return lambda_min(lattice_from_alpha(alpha, code.n))


def staircase_codeword(vec: LatticeVector, code: GbCode) -> np.ndarray:
    """Edge vector of the walk from vertex 0 taking ``|x|`` a-steps then ``|y|``
    b-steps in the code's own Cayley graph; lies in ker H_X."""
    a, b, i, j = code.normal_form()
    n = code.n
    if (vec.x * a + vec.y * b) % n:
        raise ValueError(f"{vec} is not in the lattice of {code.literal}")
    out = np.zeros(2 * n, dtype=np.uint8)
    v = 0
    # column k of the A block joins k+i and k+i+a; likewise for B with j, b
    for _ in range(abs(vec.x)):
        if vec.x > 0:
            out[(v - i) % n] ^= 1
            v = (v + a) % n
        else:
            v = (v - a) % n
            out[(v - i) % n] ^= 1
    for _ in range(abs(vec.y)):
        if vec.y > 0:
            out[n + (v - j) % n] ^= 1
            v = (v + b) % n
        else:
            v = (v - b) % n
            out[n + (v - j) % n] ^= 1
    return out
