import csv
import io
import json
from math import gcd

import pytest

from gbforge.classify import (
    COLUMNS,
    ClassificationTable,
    ClassifyOptions,
    CodeRecord,
    RecordCache,
    classify,
    compute_record,
    emit,
    enumerate_triples,
    family_tags,
)
from gbforge.equivalence import Triple, canonical_triple
from gbforge.gbcode import fam_even, fam_kp, fam_odd, fam_square


def test_enumerate_examples():
    up_to_5 = list(enumerate_triples(5))
    assert Triple(1, 1, 5) in up_to_5 and Triple(1, 2, 5) in up_to_5
    assert Triple(1, 3, 5) not in up_to_5 and Triple(1, 4, 5) not in up_to_5
    assert [t for t in up_to_5 if t.n == 4] == [Triple(1, 1, 4), Triple(1, 2, 4)]
    assert [t for t in up_to_5 if t.n == 2] == [Triple(1, 1, 2)]


@pytest.mark.parametrize("n_max", [12, 30])
def test_enumerate_one_per_orbit(n_max):
    got = list(enumerate_triples(n_max))
    assert len(got) == len(set(got))
    assert all(canonical_triple(t) == t for t in got)
    want = {
        canonical_triple(Triple(a, b, n))
        for n in range(2, n_max + 1)
        for a in range(1, n)
        for b in range(1, n)
        if gcd(gcd(a, b), n) == 1
    }
    assert set(got) == want


def test_enumerate_limit():
    with pytest.raises(ValueError):
        list(enumerate_triples(100))


def test_family_tags():
    for fam, p, tag in [(fam_square, 3, "square"), (fam_even, 3, "even"), (fam_odd, 2, "odd")]:
        code, _ = fam(p)
        t = canonical_triple(Triple(*code.normal_form()[:2], code.n))
        assert tag in family_tags(t)
    code, _ = fam_kp(2)
    a, b, _, _ = code.normal_form()
    assert "kp" in family_tags(canonical_triple(Triple(a, b, code.n)))
    assert family_tags(Triple(1, 2, 7)) == ()


def test_record_json_roundtrip():
    rec = compute_record(Triple(1, 3, 9))
    assert (rec.N, rec.k, rec.d, rec.lam, rec.three_connected) == (18, 2, 3, 3, True)
    assert CodeRecord.from_json(json.loads(json.dumps(rec.to_json()))) == rec


@pytest.fixture(scope="module")
def small_table():
    return classify(12)


def test_emit_csv(small_table):
    text = emit(small_table, "csv")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert list(rows[0]) == COLUMNS
    assert [int(r["N"]) for r in rows] == sorted({2 * n for n in range(2, 13)})
    assert text.endswith("\r\n")


def test_emit_json_and_md(small_table):
    rows = json.loads(emit(small_table, "json"))
    assert [r["N"] for r in rows] == [row.N for row in small_table.extremal()]
    md = emit(small_table, "md").splitlines()
    assert md[0] == "| " + " | ".join(COLUMNS) + " |"
    assert len(md) == 2 + len(rows)
    with pytest.raises(ValueError):
        emit(small_table, "xml")


def test_emit_empty():
    empty = ClassificationTable.from_records([])
    assert emit(empty, "csv").strip() == ",".join(COLUMNS)
    assert json.loads(emit(empty, "json")) == []


def test_emit_single_row_json_roundtrip(small_table):
    row = small_table.extremal()[0]
    assert json.loads(emit([row], "json")) == [row.to_json()]


def test_n_max_5_rows():
    table = classify(5)
    rows = list(csv.DictReader(io.StringIO(emit(table, "csv"))))
    assert [int(r["N"]) for r in rows] == [4, 6, 8, 10]
    assert table.best_d(10) == 3
    assert "1,2,5" in rows[-1]["representatives"].split(";")


def test_groups_dedupe_by_graph(small_table):
    for row in small_table.groups():
        hashes = [r.graph_hash for r in row.representatives]
        assert len(hashes) == len(set(hashes))
        members = [r for r in small_table.records if (r.N, r.k, r.d) == (row.N, row.k, row.d)]
        assert row.count == len({r.graph_hash for r in members})


def test_torn_cache_tail_is_dropped(tmp_path):
    cache = tmp_path / "cache.jsonl"
    classify(6, ClassifyOptions(cache=str(cache)))
    good = cache.read_bytes()
    cache.write_bytes(good + b'{"a": 1, "b"')
    rc = RecordCache(cache)
    assert len(rc.records) == good.count(b"\n")
    assert cache.read_bytes() == good


def test_resume_is_deterministic(tmp_path):
    clean = emit(classify(14, ClassifyOptions(cache=str(tmp_path / "a.jsonl"))), "csv", "full")
    part = tmp_path / "b.jsonl"
    first = classify(14, ClassifyOptions(cache=str(part), max_new_records=7))
    assert not first.complete
    with open(part, "ab") as fh:
        fh.write(b'{"torn')
    resumed = classify(14, ClassifyOptions(cache=str(part)))
    assert resumed.complete
    assert emit(resumed, "csv", "full") == clean


def test_env_cache(tmp_path, monkeypatch):
    path = tmp_path / "env.jsonl"
    monkeypatch.setenv("GB_FORGE_CACHE", str(path))
    classify(5)
    assert path.exists() and len(path.read_text().splitlines()) == len(list(enumerate_triples(5)))


def test_parallel_matches_serial(tmp_path):
    serial = emit(classify(16), "csv", "full")
    parallel = emit(classify(16, ClassifyOptions(jobs=2)), "csv", "full")
    assert parallel == serial


def test_records_respect_bound(small_table):
    for r in small_table.records:
        if r.lam is not None and r.d is not None:
            assert r.d >= r.lam


def test_only_doubled_cycles_fail_3_connectivity():
    # (1, 1, n) is a cycle with every edge doubled; all other records are 3-connected
    table = classify(30, ClassifyOptions(n_min=4))
    weak = sorted(r.triple for r in table.records if not r.three_connected)
    assert weak == [Triple(1, 1, n) for n in range(4, 31)]
