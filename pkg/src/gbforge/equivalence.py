"""Equivalence of (2,2)-GB codes and Cayley-graph CSS codes under qubit permutations.

Two codes are CGP-equivalent when a permutation of qubits carries the X-check
row space onto the other's and the Z-check row space likewise. Deciding this
in general is out of reach; two sound shortcuts are used instead:

* a graph isomorphism that induces a verified edge permutation proves
  equivalence;
* if the underlying graphs are both 3-connected and not isomorphic, the codes
  are not equivalent (an equivalence would give a 2-isomorphism, which Whitney's
  theorem upgrades to an isomorphism).

Everything else is reported as Unknown.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Literal, Union

import numpy as np

from .cayley import (
    AbelianGroup,
    CayleyGraph,
    canonical_form,
    cayley_graph,
    incidence_x,
    incidence_z,
    is_three_connected,
)
from .f2 import BitMatrix
from .gbcode import GbCode, gb_triple


@dataclass(frozen=True, order=True)
class Triple:
    a: int
    b: int
    n: int

    def __str__(self) -> str:
        return f"{self.a},{self.b},{self.n}"

    @classmethod
    def parse(cls, text: str) -> "Triple":
        try:
            a, b, n = (int(x) for x in text.split(","))
        except ValueError:
            raise ValueError(f"expected a,b,n; got {text!r}") from None
        return cls(a, b, n)

    def code(self) -> GbCode:
        return gb_triple(self.a, self.b, self.n)


def orbit(t: Triple) -> set[Triple]:
    """Closure of ``{(a, b)}`` under unit scaling, negating either step and swapping."""
    n = t.n
    if n < 2 or t.a % n == 0 or t.b % n == 0:
        raise ValueError(f"steps must be nonzero modulo n in {t}")
    out = set()
    for k in range(1, n):
        if gcd(k, n) != 1:
            continue
        a, b = (k * t.a) % n, (k * t.b) % n
        for x in (a, n - a):
            for y in (b, n - b):
                out.add(Triple(x, y, n))
                out.add(Triple(y, x, n))
    return out


def canonical_triple(t: Triple) -> Triple:
    """Lexicographically smallest member of the orbit of ``t``."""
    return min(orbit(t))


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class EquivVerdict:
    kind: Literal["Equivalent", "Distinct", "Unknown"]
    reason: str
    whitney_certified: bool = False
    witness: tuple[int, ...] | None = None  # vertex bijection
    qubit_permutation: tuple[int, ...] | None = None
    certificates: tuple[str, str] | None = None
    three_connected: tuple[bool | None, bool | None] = (None, None)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "reason": self.reason,
            "whitney_certified": self.whitney_certified,
            "witness": None if self.witness is None else list(self.witness),
            "qubit_permutation": None
            if self.qubit_permutation is None
            else list(self.qubit_permutation),
            "certificates": None if self.certificates is None else list(self.certificates),
            "three_connected": list(self.three_connected),
        }


def group_invariant_distinct(g1: AbelianGroup, g2: AbelianGroup) -> bool:
    return (g1.d1, g1.d2) != (g2.d1, g2.d2)


# ---------------------------------------------------------------------------
# sources


@dataclass(frozen=True, eq=False)
class _Source:
    graph: CayleyGraph
    qubit_of_edge: np.ndarray  # graph edge index -> qubit (column) index
    hx: np.ndarray
    hz: np.ndarray

    @property
    def group(self) -> AbelianGroup:
        return self.graph.group


Source = Union[GbCode, CayleyGraph, Triple]


def _source(obj: Source) -> _Source:
    if isinstance(obj, Triple):
        obj = obj.code()
    if isinstance(obj, CayleyGraph):
        ident = np.arange(obj.num_edges, dtype=np.int64)
        return _Source(obj, ident, incidence_x(obj).to_dense(), incidence_z(obj).to_dense())
    if isinstance(obj, GbCode):
        a, b, i, j = obj.normal_form()
        n = obj.n
        g = cayley_graph(AbelianGroup.cyclic(n), (0, a), (0, b))
        k = np.arange(n, dtype=np.int64)
        q = np.concatenate([(k - i) % n, n + (k - j) % n])
        return _Source(g, q, obj.hx.to_dense(), obj.hz.to_dense())
    raise TypeError(f"cannot build a Cayley graph from {type(obj).__name__}")


def _same_rowspace(m1: np.ndarray, m2: np.ndarray) -> bool:
    r1 = BitMatrix.from_dense(m1).rank()
    r2 = BitMatrix.from_dense(m2).rank()
    return r1 == r2 == BitMatrix.from_dense(np.vstack([m1, m2])).rank()


def _verify(s1: _Source, s2: _Source, qubit_perm: np.ndarray) -> bool:
    """Does moving qubit ``e`` of code 1 to position ``qubit_perm[e]`` give code 2?"""
    hx = np.zeros_like(s1.hx)
    hz = np.zeros_like(s1.hz)
    hx[:, qubit_perm] = s1.hx
    hz[:, qubit_perm] = s1.hz
    return _same_rowspace(hx, s2.hx) and _same_rowspace(hz, s2.hz)


def _qubit_perm(s1: _Source, s2: _Source, edge_perm: np.ndarray) -> np.ndarray | None:
    if sorted(edge_perm.tolist()) != list(range(s2.graph.num_edges)):
        return None
    out = np.empty_like(edge_perm)
    out[s1.qubit_of_edge] = s2.qubit_of_edge[edge_perm]
    return out


def _translation_maps(s1: _Source, s2: _Source):
    """Group isomorphisms sending (g1, g2) to (+-h, +-h') with {h, h'} = {g1', g2'},
    paired with the edge permutation each induces."""
    G1, G2 = s1.group, s2.group
    gr1, gr2 = s1.graph, s2.graph
    order = G1.order
    for swap in (False, True):
        for sx in (1, -1):
            for sy in (1, -1):
                gens = (gr2.g2, gr2.g1) if swap else (gr2.g1, gr2.g2)
                img = [
                    gens[0] if sx > 0 else G2.neg(gens[0]),
                    gens[1] if sy > 0 else G2.neg(gens[1]),
                ]
                phi = [-1] * order
                phi[0] = 0
                stack = [0]
                ok = True
                while stack and ok:
                    v = stack.pop()
                    x = G1.element(v)
                    for gen, h in ((gr1.g1, img[0]), (gr1.g2, img[1])):
                        w = G1.index(G1.add(x, gen))
                        target = G2.index(G2.add(G2.element(phi[v]), h))
                        if phi[w] < 0:
                            phi[w] = target
                            stack.append(w)
                        elif phi[w] != target:
                            ok = False
                            break
                if not ok or sorted(phi) != list(range(order)):
                    continue
                # edge {v, v+g} goes to {phi(v), phi(v)+h}; for h = -g' that
                # edge is based at phi(v) - g'
                blocks = (1, 0) if swap else (0, 1)
                signs = (sx, sy)
                edge_perm = np.empty(2 * order, dtype=np.int64)
                for v in range(order):
                    for gi in (0, 1):
                        base = G2.element(phi[v])
                        if signs[gi] < 0:
                            base = G2.add(base, G2.neg(gens[gi]))
                        edge_perm[gi * order + v] = blocks[gi] * order + G2.index(base)
                yield phi, edge_perm


def _label_map(s1: _Source, s2: _Source, tau: list[int]) -> np.ndarray | None:
    """Edge permutation induced by a vertex bijection, matching parallel edges in order."""
    pool: dict[tuple[int, int], list[int]] = {}
    for e, (u, v) in enumerate(s2.graph.edges.tolist()):
        pool.setdefault((min(u, v), max(u, v)), []).append(e)
    out = np.empty(s1.graph.num_edges, dtype=np.int64)
    for e, (u, v) in enumerate(s1.graph.edges.tolist()):
        x, y = tau[u], tau[v]
        bucket = pool.get((min(x, y), max(x, y)))
        if not bucket:
            return None
        out[e] = bucket.pop(0)
    return out


def _three_connected(g: CayleyGraph) -> bool | None:
    return is_three_connected(g) if g.num_vertices >= 4 else None


def cgp_equivalent(c1: Source, c2: Source) -> EquivVerdict:
    """Equivalence verdict between two codes given as GB codes, triples or Cayley graphs."""
    s1, s2 = _source(c1), _source(c2)
    g1, g2 = s1.graph, s2.graph
    if g1.num_vertices != g2.num_vertices:
        return EquivVerdict("Distinct", "size")
    f1, f2 = canonical_form(g1), canonical_form(g2)
    certs = (f1.digest, f2.digest)
    tc = (_three_connected(g1), _three_connected(g2))
    if f1.certificate != f2.certificate:
        if tc[0] and tc[1]:
            reason = (
                "group-invariant"
                if group_invariant_distinct(s1.group, s2.group)
                else "non-isomorphic-graphs"
            )
            return EquivVerdict("Distinct", reason, True, certificates=certs, three_connected=tc)
        return EquivVerdict("Unknown", "non-isomorphic-graphs", False, certificates=certs, three_connected=tc)

    candidates = list(_translation_maps(s1, s2))
    inv2 = {pos: v for v, pos in enumerate(f2.labeling)}
    tau = [inv2[f1.labeling[v]] for v in range(g1.num_vertices)]
    label_edges = _label_map(s1, s2, tau)
    if label_edges is not None:
        candidates.append((tau, label_edges))
    for phi, edge_perm in candidates:
        qp = _qubit_perm(s1, s2, edge_perm)
        if qp is not None and _verify(s1, s2, qp):
            return EquivVerdict(
                "Equivalent",
                "verified-isomorphism",
                witness=tuple(int(x) for x in phi),
                qubit_permutation=tuple(int(x) for x in qp),
                certificates=certs,
                three_connected=tc,
            )
    return EquivVerdict("Unknown", "isomorphic-graphs-unverified", certificates=certs, three_connected=tc)
