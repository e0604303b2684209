"""Cayley multigraphs (G, g1, g2) over finite abelian groups of rank <= 2.

Edge ``k < |G|`` joins ``v_k`` and ``v_k + g1``; edge ``|G| + k`` joins ``v_k``
and ``v_k + g2``, where ``v_k`` is the k-th group element in lexicographic order
of its invariant-factor coordinates. Parallel edges and self-edges are kept as
distinct edge indices, so every vertex has four incident edge slots.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from math import gcd
from typing import Sequence

import numpy as np

from . import kernels
from .f2 import BitMatrix

MAX_CANONICAL_VERTICES = 512


# ---------------------------------------------------------------------------
# Smith normal form


def smith_normal_form(m: Sequence[Sequence[int]]):
    """Smith normal form of an integer matrix.

    Returns ``(diag, U, V)`` with ``U @ M @ V`` diagonal, ``diag`` the
    non-negative diagonal with each entry dividing the next, and ``U``, ``V``
    unimodular (lists of lists of Python ints).
    """
    a = [list(map(int, row)) for row in m]
    rows, cols = len(a), len(a[0])
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    v = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def swap_rows(x, i, j):
        x[i], x[j] = x[j], x[i]

    def swap_cols(x, i, j):
        for row in x:
            row[i], row[j] = row[j], row[i]

    def add_row(x, src, dst, c):  # row dst += c * row src
        x[dst] = [d + c * s for d, s in zip(x[dst], x[src])]

    def add_col(x, src, dst, c):
        for row in x:
            row[dst] += c * row[src]

    for t in range(min(rows, cols)):
        while True:
            nz = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
            if not nz:
                break
            _, pi, pj = min(nz)
            swap_rows(a, t, pi)
            swap_rows(u, t, pi)
            swap_cols(a, t, pj)
            swap_cols(v, t, pj)
            p = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                q = a[i][t] // p
                add_row(a, t, i, -q)
                add_row(u, t, i, -q)
                dirty |= a[i][t] != 0
            for j in range(t + 1, cols):
                q = a[t][j] // p
                add_col(a, t, j, -q)
                add_col(v, t, j, -q)
                dirty |= a[t][j] != 0
            if dirty:
                continue
            bad = [i for i in range(t + 1, rows) if any(a[i][j] % p for j in range(t + 1, cols))]
            if bad:
                add_row(a, bad[0], t, 1)
                add_row(u, bad[0], t, 1)
                continue
            break
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    diag = [a[i][i] for i in range(min(rows, cols))]
    return diag, u, v


# ---------------------------------------------------------------------------
# groups


@dataclass(frozen=True)
class AbelianGroup:
    """``Z/d1 x Z/d2`` with ``d1 | d2``; elements are pairs ``(x mod d1, y mod d2)``."""

    d1: int
    d2: int

    def __post_init__(self):
        if self.d1 < 1 or self.d2 < 1 or self.d2 % self.d1:
            raise ValueError(f"invalid invariant factors ({self.d1}, {self.d2})")

    @classmethod
    def cyclic(cls, n: int) -> "AbelianGroup":
        return cls(1, n)

    @property
    def order(self) -> int:
        return self.d1 * self.d2

    @property
    def is_cyclic(self) -> bool:
        return self.d1 == 1

    def normalize(self, g) -> tuple[int, int]:
        return (g[0] % self.d1, g[1] % self.d2)

    def index(self, g) -> int:
        x, y = self.normalize(g)
        return x * self.d2 + y

    def element(self, k: int) -> tuple[int, int]:
        return divmod(k, self.d2)

    def elements(self) -> list[tuple[int, int]]:
        return [self.element(k) for k in range(self.order)]

    def add(self, g, h) -> tuple[int, int]:
        return self.normalize((g[0] + h[0], g[1] + h[1]))

    def neg(self, g) -> tuple[int, int]:
        return self.normalize((-g[0], -g[1]))

    def element_order(self, g) -> int:
        x, y = self.normalize(g)
        ox = self.d1 // gcd(x, self.d1)
        oy = self.d2 // gcd(y, self.d2)
        return ox * oy // gcd(ox, oy)

    def label(self, g) -> str:
        x, y = self.normalize(g)
        return str(y) if self.is_cyclic else f"({x},{y})"


def max_element_order(grp: AbelianGroup) -> int:
    """Exponent of the group, i.e. its largest invariant factor."""
    return grp.d2


def lattice_quotient(v1, v2) -> tuple[AbelianGroup, list[list[int]]]:
    """``Z^2 / (Z v1 + Z v2)`` and the matrix ``U`` mapping ``Z^2`` onto it."""
    basis = [[v1[0], v2[0]], [v1[1], v2[1]]]
    if basis[0][0] * basis[1][1] - basis[0][1] * basis[1][0] == 0:
        raise ValueError("lattice basis is singular")
    diag, u, _ = smith_normal_form(basis)
    return AbelianGroup(diag[0], diag[1]), u


# ---------------------------------------------------------------------------
# graphs


@dataclass(frozen=True, eq=False)
class Multigraph:
    """Undirected multigraph on vertices ``0..num_vertices-1``.

    ``vertex_transitive`` is a promise used to shortcut 3-connectivity and
    canonical labelling (one root vertex suffices); Cayley graphs set it.
    """

    num_vertices: int
    edges: np.ndarray = field(repr=False)
    vertex_transitive: bool = False
    nbr: np.ndarray = field(default=None, repr=False)
    eid: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        edges = np.ascontiguousarray(self.edges, dtype=np.int64).reshape(-1, 2)
        object.__setattr__(self, "edges", edges)
        if self.nbr is None:
            nbr, eid = _slot_tables(self.num_vertices, edges)
            object.__setattr__(self, "nbr", nbr)
            object.__setattr__(self, "eid", eid)
        for arr in (self.edges, self.nbr, self.eid):
            arr.setflags(write=False)

    @property
    def num_edges(self) -> int:
        return int(self.edges.shape[0])

    def degree_sequence(self) -> list[int]:
        deg = np.zeros(self.num_vertices, dtype=np.int64)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return sorted(deg.tolist())

    def multiplicity_profile(self) -> list[int]:
        """Sorted multiplicities of vertex pairs joined by at least one edge."""
        counts: dict[tuple[int, int], int] = {}
        for u, v in self.edges:
            key = (min(u, v), max(u, v))
            counts[key] = counts.get(key, 0) + 1
        loops = sorted(c for (u, v), c in counts.items() if u == v)
        return sorted(counts.values()) + [-c for c in loops]

    def has_parallel_edges(self) -> bool:
        return any(c > 1 for c in self.multiplicity_profile())


def _slot_tables(nv: int, edges: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    slots: list[list[tuple[int, int]]] = [[] for _ in range(nv)]
    for e, (u, v) in enumerate(edges):
        slots[u].append((int(v), e))
        slots[v].append((int(u), e))
    width = max([len(s) for s in slots] + [1])
    nbr = np.empty((nv, width), dtype=np.int64)
    eid = np.full((nv, width), -1, dtype=np.int64)
    for v, s in enumerate(slots):
        nbr[v, :] = v
        for i, (w, e) in enumerate(s):
            nbr[v, i] = w
            eid[v, i] = e
    return nbr, eid


@dataclass(frozen=True, eq=False)
class CayleyGraph(Multigraph):
    group: AbelianGroup = None
    g1: tuple[int, int] = (0, 0)
    g2: tuple[int, int] = (0, 0)

    @property
    def order(self) -> int:
        return self.group.order

    def vertex_label(self, k: int) -> str:
        return self.group.label(self.group.element(k))

    def face_edges(self, p: int) -> list[int]:
        """Edge indices of the 4-cycle g, g+g1, g+g1+g2, g+g2 based at vertex ``p``."""
        grp, order = self.group, self.group.order
        g = grp.element(p)
        return [
            p,
            grp.index(grp.add(g, self.g2)),
            order + p,
            order + grp.index(grp.add(g, self.g1)),
        ]

    def __repr__(self) -> str:
        return f"CayleyGraph(Z/{self.group.d1} x Z/{self.group.d2}, g1={self.g1}, g2={self.g2})"


def cayley_graph(group: AbelianGroup, g1, g2) -> CayleyGraph:
    g1, g2 = group.normalize(g1), group.normalize(g2)
    order = group.order
    edges = np.empty((2 * order, 2), dtype=np.int64)
    nbr = np.empty((order, 4), dtype=np.int64)
    eid = np.empty((order, 4), dtype=np.int64)
    for k in range(order):
        g = group.element(k)
        p1 = group.index(group.add(g, g1))
        m1 = group.index(group.add(g, group.neg(g1)))
        p2 = group.index(group.add(g, g2))
        m2 = group.index(group.add(g, group.neg(g2)))
        edges[k] = (k, p1)
        edges[order + k] = (k, p2)
        nbr[k] = (p1, m1, p2, m2)
        eid[k] = (k, m1, order + k, order + m2)
    return CayleyGraph(order, edges, True, nbr, eid, group=group, g1=g1, g2=g2)


def cayley_cyclic(n: int, a: int, b: int) -> CayleyGraph:
    """(Z/nZ, a, b)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if a % n == 0 or b % n == 0:
        raise ValueError("generators must be nonzero modulo n")
    return cayley_graph(AbelianGroup.cyclic(n), (0, a), (0, b))


def torus_graph(v1, v2) -> CayleyGraph:
    """(Z^2/L, (1,0) mod L, (0,1) mod L) for ``L = Z v1 + Z v2``."""
    group, u = lattice_quotient(v1, v2)
    g1 = (u[0][0], u[1][0])
    g2 = (u[0][1], u[1][1])
    return cayley_graph(group, g1, g2)


def relabel(g: Multigraph, perm: Sequence[int]) -> Multigraph:
    """Copy of ``g`` with vertex ``v`` renamed ``perm[v]``; edge order kept."""
    perm = np.asarray(perm, dtype=np.int64)
    if sorted(perm.tolist()) != list(range(g.num_vertices)):
        raise ValueError("not a permutation")
    return Multigraph(g.num_vertices, perm[g.edges], g.vertex_transitive)


# ---------------------------------------------------------------------------
# incidence matrices


def incidence_x(g: Multigraph) -> BitMatrix:
    """Vertex-edge incidence mod 2 (a self-edge contributes 0)."""
    m = np.zeros((g.num_vertices, g.num_edges), dtype=np.uint8)
    for e, (u, v) in enumerate(g.edges):
        m[u, e] ^= 1
        m[v, e] ^= 1
    return BitMatrix.from_dense(m)


def incidence_z(g: CayleyGraph) -> BitMatrix:
    """Face-edge incidence mod 2, one face per base vertex."""
    m = np.zeros((g.order, g.num_edges), dtype=np.uint8)
    for p in range(g.order):
        for e in g.face_edges(p):
            m[p, e] ^= 1
    return BitMatrix.from_dense(m)


# ---------------------------------------------------------------------------
# connectivity


def is_connected(g: Multigraph) -> bool:
    return bool(kernels.connected_without(g.nbr, -1, -1))


def is_three_connected(g: Multigraph) -> bool:
    """Connected, and connected after deleting any two distinct vertices."""
    if g.num_vertices < 4:
        raise ValueError("3-connectivity needs at least 4 vertices")
    if not is_connected(g):
        return False
    firsts = [0] if g.vertex_transitive else range(g.num_vertices)
    return all(kernels.pair_deletions_connected(g.nbr, f) < 0 for f in firsts)


# ---------------------------------------------------------------------------
# canonical labelling


@dataclass(frozen=True)
class CanonicalForm:
    certificate: tuple
    labeling: tuple[int, ...]  # labeling[v] = canonical position of vertex v

    @property
    def digest(self) -> str:
        return hashlib.sha256(repr(self.certificate).encode()).hexdigest()[:16]


def _adjacency(g: Multigraph) -> list[list[tuple[int, int]]]:
    counts: list[dict[int, int]] = [dict() for _ in range(g.num_vertices)]
    for u, v in g.edges:
        u, v = int(u), int(v)
        counts[u][v] = counts[u].get(v, 0) + 1
        if u != v:
            counts[v][u] = counts[v].get(u, 0) + 1
    return [sorted(c.items()) for c in counts]


def _refine(cells: list[list[int]], adj) -> tuple[list[list[int]], tuple]:
    """Equitable refinement; returns the new ordered partition and its quotient invariant."""
    nv = len(adj)
    cell_of = [0] * nv
    while True:
        for ci, cell in enumerate(cells):
            for v in cell:
                cell_of[v] = ci
        sigs = [None] * nv
        for v in range(nv):
            sigs[v] = tuple(sorted((cell_of[u], m) for u, m in adj[v]))
        new_cells = []
        for cell in cells:
            if len(cell) == 1:
                new_cells.append(cell)
                continue
            groups: dict[tuple, list[int]] = {}
            for v in cell:
                groups.setdefault(sigs[v], []).append(v)
            for key in sorted(groups):
                new_cells.append(groups[key])
        if len(new_cells) == len(cells):
            invariant = tuple((len(c), sigs[c[0]]) for c in cells)
            return cells, invariant
        cells = new_cells


def _orbit_roots(perms: list[list[int]], nv: int) -> list[int]:
    parent = list(range(nv))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in perms:
        for v, w in enumerate(p):
            rv, rw = find(v), find(w)
            if rv != rw:
                parent[max(rv, rw)] = min(rv, rw)
    return [find(v) for v in range(nv)]


def canonical_form(g: Multigraph) -> CanonicalForm:
    """Canonical labelling by individualization-refinement with backtracking.

    Branches on the first smallest non-singleton cell. A node whose quotient
    invariant sequence already exceeds the best one is pruned. Two leaves with
    equal keys give an automorphism; automorphisms fixing the individualized
    vertices prune equivalent siblings, and the search jumps back to the
    common ancestor of the matching leaves (that subtree is an image of one
    already explored). For vertex-transitive graphs one root vertex suffices.
    """
    nv = g.num_vertices
    if nv > MAX_CANONICAL_VERTICES:
        raise ValueError(f"canonical form limited to {MAX_CANONICAL_VERTICES} vertices")
    if nv == 0:
        return CanonicalForm((0, ()), ())
    adj = _adjacency(g)
    edges = [(int(u), int(v)) for u, v in g.edges]
    leaves: dict = {"first": None, "best": None}  # (path, cert, labeling, vertex_at, seq)
    autos: list[list[int]] = []

    def leaf(cells, path, seq):
        vertex_at = [c[0] for c in cells]
        pos = [0] * nv
        for i, v in enumerate(vertex_at):
            pos[v] = i
        cert = (nv, tuple(sorted((min(pos[u], pos[v]), max(pos[u], pos[v])) for u, v in edges)))
        jump = None
        for ref in (leaves["first"], leaves["best"]):
            if ref is not None and ref[0] == path and ref[1] == cert:
                autos.append([ref[3][pos[v]] for v in range(nv)])
                common = 0
                while common < len(seq) and seq[common] == ref[4][common]:
                    common += 1
                jump = common if jump is None else min(jump, common)
        entry = (path, cert, tuple(pos), vertex_at, seq)
        if leaves["first"] is None:
            leaves["first"] = entry
        best = leaves["best"]
        if best is None or (path, cert) < (best[0], best[1]):
            leaves["best"] = entry
        return jump

    def search(cells, path, seq):
        best = leaves["best"]
        if best is not None and path > best[0][: len(path)]:
            return None
        if len(cells) == nv:
            return leaf(cells, path, seq)
        size = min(len(c) for c in cells if len(c) > 1)
        ti = next(i for i, c in enumerate(cells) if len(c) == size)
        target = cells[ti]
        choices = target[:1] if (not seq and g.vertex_transitive) else target
        explored: list[int] = []
        for v in choices:
            if explored:
                fixing = [p for p in autos if all(p[x] == x for x in seq)]
                if fixing:
                    roots = _orbit_roots(fixing, nv)
                    if roots[v] in {roots[u] for u in explored}:
                        continue
            explored.append(v)
            rest = [w for w in target if w != v]
            child, inv = _refine(cells[:ti] + [[v], rest] + cells[ti + 1 :], adj)
            jump = search(child, path + (inv,), seq + [v])
            if jump is not None and jump < len(seq):
                return jump
        return None

    cells, inv = _refine([list(range(nv))], adj)
    search(cells, (inv,), [])
    best = leaves["best"]
    return CanonicalForm(best[1], best[2])


def is_isomorphic(g1: Multigraph, g2: Multigraph) -> bool:
    return isomorphism(g1, g2) is not None


def isomorphism(g1: Multigraph, g2: Multigraph) -> list[int] | None:
    """A vertex bijection ``tau`` (``tau[v]`` in ``g2``) or ``None``."""
    if (g1.num_vertices, g1.num_edges) != (g2.num_vertices, g2.num_edges):
        return None
    if g1.degree_sequence() != g2.degree_sequence():
        return None
    if g1.multiplicity_profile() != g2.multiplicity_profile():
        return None
    c1, c2 = canonical_form(g1), canonical_form(g2)
    if c1.certificate != c2.certificate:
        return None
    inv2 = {pos: v for v, pos in enumerate(c2.labeling)}
    return [inv2[c1.labeling[v]] for v in range(g1.num_vertices)]


# ---------------------------------------------------------------------------
# export


def export_dot(g: CayleyGraph) -> str:
    lines = [f'graph "{_graph_name(g)}" {{']
    for k in range(g.order):
        lines.append(f'  {k} [label="{g.vertex_label(k)}"];')
    for e, (u, v) in enumerate(g.edges):
        lines.append(f'  {u} -- {v} [label="h{e}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _graph_name(g: CayleyGraph) -> str:
    grp = g.group
    if grp.is_cyclic:
        return f"Z/{grp.d2}Z, {g.g1[1]}, {g.g2[1]}"
    return f"Z/{grp.d1}Z x Z/{grp.d2}Z, {g.g1}, {g.g2}"


def graph_to_json(g: CayleyGraph) -> dict:
    return {
        "group": [g.group.d1, g.group.d2],
        "g1": list(g.g1),
        "g2": list(g.g2),
        "edges": g.edges.tolist(),
    }


def graph_from_json(obj: dict | str) -> CayleyGraph:
    if isinstance(obj, str):
        obj = json.loads(obj)
    grp = AbelianGroup(*obj["group"])
    g = cayley_graph(grp, tuple(obj["g1"]), tuple(obj["g2"]))
    if "edges" in obj and g.edges.tolist() != obj["edges"]:
        raise ValueError("edge table does not match the group and generators")
    return g
