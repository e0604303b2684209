"""Classification of all (2,2)-GB codes GB(1 + X^a, 1 + X^b, n) up to a block size.

Pipeline: enumerate one canonical triple per orbit, compute a record per
triple (parameters, lattice bound, 3-connectivity, graph certificate), persist
records to an append-only JSON-lines cache, then group by (N, k, d) and keep one
representative per isomorphism class of graphs.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import asdict, dataclass, field
from math import gcd, isqrt
from pathlib import Path
from typing import Iterator

from .cayley import canonical_form, cayley_cyclic, is_three_connected
from .distance import SearchOptions, min_distance
from .equivalence import Triple, canonical_triple, orbit
from .gbcode import gb_triple, kp_polynomials
from .lattice import lattice_bound

log = logging.getLogger(__name__)

CACHE_ENV = "GB_FORGE_CACHE"
MAX_N = 99
FSYNC_EVERY = 64
COLUMNS = ["N", "k", "d", "count", "representatives", "lambda", "three_connected", "families"]


@dataclass(frozen=True)
class CodeRecord:
    a: int
    b: int
    n: int
    N: int
    k: int
    d: int | None
    status: str
    lower: int | None
    upper: int | None
    lam: int | None  # lattice lower bound, None where it is not claimed
    three_connected: bool | None
    graph_hash: str
    families: tuple[str, ...]
    certificate_support: tuple[int, ...]
    nodes: int = 0
    seconds: float = 0.0

    @property
    def triple(self) -> Triple:
        return Triple(self.a, self.b, self.n)

    def to_json(self) -> dict:
        out = asdict(self)
        out["families"] = list(self.families)
        out["certificate_support"] = list(self.certificate_support)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "CodeRecord":
        obj = dict(obj)
        obj["families"] = tuple(obj["families"])
        obj["certificate_support"] = tuple(obj["certificate_support"])
        return cls(**obj)


# ---------------------------------------------------------------------------
# enumeration and family tags


def enumerate_triples(n_max: int, n_min: int = 2) -> Iterator[Triple]:
    """Canonical triples with ``n_min <= n <= n_max`` and gcd(a, b, n) = 1, sorted."""
    if n_max > MAX_N:
        raise ValueError(f"n_max must be <= {MAX_N}")
    for n in range(max(2, n_min), n_max + 1):
        seen: set[Triple] = set()
        reps = []
        for a in range(1, n):
            for b in range(a, n):
                t = Triple(a, b, n)
                if t in seen or gcd(gcd(a, b), n) != 1:
                    continue
                orb = orbit(t)
                seen |= orb
                reps.append(min(orb))
        yield from sorted(reps)


def family_triples(n: int) -> dict[str, Triple]:
    """Canonical triples of the named families that live at circulant size ``n``."""
    out = {}
    m = isqrt(n)
    if m >= 2 and m * m == n:
        out["square"] = canonical_triple(Triple(1, m, n))
    r = isqrt(n // 2)
    if r >= 1 and 2 * r * r == n:
        out["even"] = canonical_triple(Triple(1, 2 * r - 1, n))
    t = (isqrt(2 * n - 1) - 1) // 2
    if t >= 1 and t * t + (t + 1) ** 2 == n:
        out["odd"] = canonical_triple(Triple(1, 2 * t + 1, n))
        pa, pb, _ = kp_polynomials(t)
        ea, eb = pa.exponents, pb.exponents
        out["kp"] = canonical_triple(Triple((ea[1] - ea[0]) % n, (eb[1] - eb[0]) % n, n))
    return out


def family_tags(t: Triple) -> tuple[str, ...]:
    return tuple(sorted(name for name, ft in family_triples(t.n).items() if ft == t))


# ---------------------------------------------------------------------------
# records


def compute_record(t: Triple, opts: SearchOptions | None = None) -> CodeRecord:
    start = time.perf_counter()
    code = gb_triple(t.a, t.b, t.n)
    res = min_distance(code, opts or SearchOptions())
    graph = cayley_cyclic(t.n, t.a, t.b)
    return CodeRecord(
        a=t.a,
        b=t.b,
        n=t.n,
        N=2 * t.n,
        k=res.k,
        d=res.d,
        status=res.status,
        lower=res.lower,
        upper=res.upper,
        lam=lattice_bound(code),
        three_connected=is_three_connected(graph) if t.n >= 4 else None,
        graph_hash=canonical_form(graph).digest,
        families=family_tags(t),
        certificate_support=tuple(res.certificate_support),
        nodes=res.nodes,
        seconds=round(time.perf_counter() - start, 6),
    )


def _compute_job(args):
    a, b, n, opts = args
    return compute_record(Triple(a, b, n), opts).to_json()


# ---------------------------------------------------------------------------
# cache


class RecordCache:
    """Append-only JSON-lines store keyed by canonical triple.

    A torn final line (from an interrupted write) is discarded on open.
    """

    def __init__(self, path: str | os.PathLike | None):
        self.path = Path(path) if path else None
        self.records: dict[Triple, CodeRecord] = {}
        self._fh = None
        self._pending = 0
        if self.path and self.path.exists():
            self._load()

    def _load(self):
        raw = self.path.read_bytes()
        good_end = 0
        pos = 0
        for line in raw.splitlines(keepends=True):
            pos += len(line)
            if not line.endswith(b"\n"):
                break
            try:
                rec = CodeRecord.from_json(json.loads(line))
            except (ValueError, TypeError, KeyError):
                log.warning("skipping unreadable cache line at byte %d", pos - len(line))
                good_end = pos
                continue
            self.records[rec.triple] = rec
            good_end = pos
        if good_end < len(raw):
            log.warning("discarding %d bytes of torn cache tail", len(raw) - good_end)
            with open(self.path, "r+b") as fh:
                fh.truncate(good_end)

    def add(self, rec: CodeRecord):
        self.records[rec.triple] = rec
        if not self.path:
            return
        if self._fh is None:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self._fh = open(self.path, "a", encoding="utf-8")
        self._fh.write(json.dumps(rec.to_json(), sort_keys=True) + "\n")
        self._pending += 1
        if self._pending >= FSYNC_EVERY:
            self.sync()

    def sync(self):
        if self._fh is not None:
            self._fh.flush()
            os.fsync(self._fh.fileno())
        self._pending = 0

    def close(self):
        self.sync()
        if self._fh is not None:
            self._fh.close()
            self._fh = None


# ---------------------------------------------------------------------------
# table


@dataclass(frozen=True)
class TableRow:
    N: int
    k: int
    d: int | None
    count: int
    representatives: tuple[CodeRecord, ...] = field(repr=False)

    def cells(self) -> dict:
        reps = self.representatives
        fams = sorted({f for r in reps for f in r.families})
        return {
            "N": self.N,
            "k": self.k,
            "d": "" if self.d is None else self.d,
            "count": self.count,
            "representatives": ";".join(str(r.triple) for r in reps),
            "lambda": ";".join("-" if r.lam is None else str(r.lam) for r in reps),
            "three_connected": ";".join(
                "-" if r.three_connected is None else str(r.three_connected).lower() for r in reps
            ),
            "families": ";".join(fams),
        }

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "k": self.k,
            "d": self.d,
            "count": self.count,
            "representatives": [str(r.triple) for r in self.representatives],
            "lambda": [r.lam for r in self.representatives],
            "three_connected": [r.three_connected for r in self.representatives],
            "families": sorted({f for r in self.representatives for f in r.families}),
        }


@dataclass(frozen=True)
class ClassificationTable:
    records: tuple[CodeRecord, ...]
    complete: bool = True

    @classmethod
    def from_records(cls, records, complete: bool = True) -> "ClassificationTable":
        return cls(tuple(sorted(records, key=lambda r: (r.N, r.a, r.b))), complete)

    def groups(self) -> list[TableRow]:
        """All (N, k, d) groups, one representative per graph isomorphism class."""
        buckets: dict[tuple, list[CodeRecord]] = {}
        for r in self.records:
            buckets.setdefault((r.N, r.k, r.d), []).append(r)
        rows = []
        for key in sorted(buckets, key=lambda x: (x[0], x[1], -1 if x[2] is None else x[2])):
            reps: dict[str, CodeRecord] = {}
            for r in buckets[key]:
                reps.setdefault(r.graph_hash, r)
            rows.append(TableRow(*key, len(reps), tuple(reps.values())))
        return rows

    def extremal(self) -> list[TableRow]:
        """Per length, the group with k = 2 and the largest exact d."""
        best: dict[int, TableRow] = {}
        for row in self.groups():
            if row.k != 2 or row.d is None:
                continue
            if row.N not in best or row.d > best[row.N].d:
                best[row.N] = row
        return [best[N] for N in sorted(best)]

    def best_d(self, N: int) -> int | None:
        for row in self.extremal():
            if row.N == N:
                return row.d
        return None

    def incomplete(self) -> list[CodeRecord]:
        return [r for r in self.records if r.status != "exact"]


def emit(table: ClassificationTable | list[TableRow], fmt: str = "csv", which: str = "extremal") -> str:
    if isinstance(table, ClassificationTable):
        rows = table.extremal() if which == "extremal" else table.groups()
    else:
        rows = table
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=COLUMNS)
        w.writeheader()
        for row in rows:
            w.writerow(row.cells())
        return buf.getvalue()
    if fmt == "json":
        return json.dumps([row.to_json() for row in rows], indent=2) + "\n"
    if fmt in ("md", "markdown"):
        lines = ["| " + " | ".join(COLUMNS) + " |", "|" + "---|" * len(COLUMNS)]
        for row in rows:
            cells = row.cells()
            lines.append("| " + " | ".join(str(cells[c]) for c in COLUMNS) + " |")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


# ---------------------------------------------------------------------------
# driver


@dataclass(frozen=True)
class ClassifyOptions:
    cache: str | None = None
    jobs: int = 1
    search: SearchOptions = field(default_factory=SearchOptions)
    max_new_records: int | None = None  # stop early (used to exercise resumption)
    n_min: int = 2


def classify(n_max: int, opts: ClassifyOptions | None = None) -> ClassificationTable:
    opts = opts or ClassifyOptions()
    if n_max > MAX_N:
        raise ValueError(f"n_max must be <= {MAX_N}")
    cache_path = opts.cache if opts.cache is not None else os.environ.get(CACHE_ENV)
    cache = RecordCache(cache_path)
    wanted = list(enumerate_triples(n_max, opts.n_min))
    todo = [t for t in wanted if t not in cache.records]
    if opts.max_new_records is not None:
        todo = todo[: opts.max_new_records]
    log.info("%d triples, %d cached, computing %d", len(wanted), len(wanted) - len(todo), len(todo))
    try:
        if opts.jobs <= 1 or len(todo) < 2:
            for t in todo:
                cache.add(compute_record(t, opts.search))
        else:
            with ProcessPoolExecutor(max_workers=opts.jobs) as pool:
                futs = [pool.submit(_compute_job, (t.a, t.b, t.n, opts.search)) for t in todo]
                for fut in as_completed(futs):
                    cache.add(CodeRecord.from_json(fut.result()))
    finally:
        cache.close()
    have = [cache.records[t] for t in wanted if t in cache.records]
    return ClassificationTable.from_records(have, complete=len(have) == len(wanted))
