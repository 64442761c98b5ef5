"""Hash table, annotations, breadth-first construction, and the file format."""

import random

import numpy as np
import pytest

from revopt import perm, table
from revopt.errors import ArchMismatch, FormatError, ResourceExhausted
from revopt.gates import Architecture, gate_library
from revopt.symmetry import canonical, symmetry_group
from revopt.table import (
    HAS_NO_GATES,
    IS_FIRST_GATE,
    IS_LAST_GATE,
    CanonicalEntry,
    CanonTable,
    pack_annotation,
    unpack_annotation,
    wang_hash,
)

MASK = (1 << 64) - 1


def wang_reference(x: int) -> int:
    """Independent transliteration of the 64-bit mixing sequence."""
    x = ((~x) + (x << 21)) & MASK
    x ^= x >> 24
    x = (x + (x << 3) + (x << 8)) & MASK
    x ^= x >> 14
    x = (x + (x << 2) + (x << 4)) & MASK
    x ^= x >> 28
    x = (x + (x << 31)) & MASK
    return x


def test_wang_hash_matches_reference_and_is_deterministic():
    rng = random.Random(0)
    for x in [0, 1, MASK, perm.IDENTITY] + [rng.getrandbits(64) for _ in range(2000)]:
        h = wang_hash(x)
        assert h == wang_reference(x)
        assert wang_hash(x) == h


def test_wang_hash_spreads_low_bits():
    # consecutive keys should land in distinct buckets of a small table
    buckets = {wang_hash(perm.IDENTITY + i) & 1023 for i in range(512)}
    assert len(buckets) > 400


def test_annotation_pack_roundtrip():
    for size in range(16):
        for placement in (IS_LAST_GATE, IS_FIRST_GATE):
            for gid in (0, 1, 31, 62, HAS_NO_GATES):
                ann = pack_annotation(size, placement, gid)
                assert 0 < ann < (1 << 11) or (size, placement, gid) == (0, 0, 0)
                assert unpack_annotation(ann) == (size, placement, gid)
    # the identity annotation is nonzero, so 0 can mean "empty slot"
    assert pack_annotation(0, IS_LAST_GATE, HAS_NO_GATES) == 2016


def test_insert_lookup_differential_against_dict():
    rng = random.Random(1)
    t = CanonTable(4, Architecture.FULL, 15, 1 << 10)
    ref = {}
    for _ in range(5000):  # forces several growth/rehash cycles
        key = rng.getrandbits(64) | 1
        e = CanonicalEntry(key, rng.randrange(1, 16), rng.randrange(2), rng.randrange(63))
        if t.insert(e):
            assert key not in ref
            ref[key] = e
        else:
            assert key in ref  # first writer wins
    assert t.entry_count == len(ref)
    assert t.load <= 0.85
    for key, e in ref.items():
        got = t.lookup(key)
        assert got == e
    for _ in range(200):
        absent = rng.getrandbits(64) | 1
        if absent not in ref:
            assert t.lookup(absent) is None


def test_probe_distances_stay_short():
    rng = random.Random(2)
    t = CanonTable(4, Architecture.FULL, 15, 1 << 12)
    keys = [rng.getrandbits(64) | 1 for _ in range(2200)]
    for key in keys:
        t.insert(CanonicalEntry(key, 1, 0, 0))
    slots = t.slot_count
    total = 0
    stored = t.keys
    for key in set(keys):
        home = wang_hash(key) & (slots - 1)
        d = 0
        while int(stored[(home + d) % slots]) != key:
            d += 1
        total += d
    assert total / t.entry_count < 2.5


@pytest.fixture(scope="module")
def oracle3_counts(oracle3):
    """(reduced, total) per size from the brute-force oracle."""
    g = symmetry_group(3)
    reps = {}
    for w, s in oracle3.items():
        reps[canonical(w, g)[0]] = s
    k = max(oracle3.values())
    reduced = [0] * (k + 1)
    total = [0] * (k + 1)
    for s in reps.values():
        reduced[s] += 1
    for s in oracle3.values():
        total[s] += 1
    return reduced, total


def test_bfs_counts_match_oracle(t3, oracle3_counts):
    reduced, total = oracle3_counts
    got = t3.counts()
    assert [r for r, _ in got] == reduced
    assert [c for _, c in got] == total
    assert sum(total) == 40320


def test_bfs_levels_are_canonical_and_disjoint(t3):
    g = symmetry_group(3)
    seen = set()
    for s, level in enumerate(t3.levels):
        for w in level[: 500 if s > 4 else None]:
            assert canonical(int(w), g)[0] == int(w)
        level_set = set(int(w) for w in level)
        assert not (level_set & seen)
        seen |= level_set
        for w in level:
            e = t3.lookup(int(w))
            assert e is not None and e.size == s


def test_annotation_soundness_n3(t3, oracle3):
    lib = gate_library(3)
    for s, level in enumerate(t3.levels):
        for w in level:
            e = t3.lookup(int(w))
            if s == 0:
                assert e.gate_id == HAS_NO_GATES
                continue
            gw = lib[e.gate_id].word
            if e.placement == IS_LAST_GATE:
                stripped = perm.compose(int(w), gw)
            else:
                stripped = perm.compose(gw, int(w))
            assert oracle3[stripped] == s - 1


def test_annotation_soundness_n4_small_sizes(full_k7):
    lib = gate_library(4)
    for s in range(1, 5):
        for w in full_k7.levels[s]:
            e = full_k7.lookup(int(w))
            gw = lib[e.gate_id].word
            if e.placement == IS_LAST_GATE:
                stripped = perm.compose(int(w), gw)
            else:
                stripped = perm.compose(gw, int(w))
            assert full_k7.min_size(stripped) == s - 1


def test_min_size_canonizes_lookups(t3, oracle3):
    rng = random.Random(3)
    words = list(oracle3)
    for w in rng.sample(words, 300):
        assert t3.min_size(w) == oracle3[w]


def test_save_load_roundtrip(t3, tmp_path):
    path = str(tmp_path / "t3.rvtb")
    table.save(t3, path)
    t = table.load(path)
    assert (t.n, t.arch, t.k) == (t3.n, t3.arch, t3.k)
    assert t.entry_count == t3.entry_count
    assert t.counts() == t3.counts()
    for level_a, level_b in zip(t.levels, t3.levels):
        assert np.array_equal(np.sort(level_a), np.sort(level_b))
    for w in t3.levels[3][:50]:
        assert t.lookup(int(w)) == t3.lookup(int(w))


def test_load_rejects_corruption(t3, tmp_path):
    path = str(tmp_path / "t3.rvtb")
    table.save(t3, path)
    blob = open(path, "rb").read()

    def write(b, name):
        p = str(tmp_path / name)
        open(p, "wb").write(b)
        return p

    with pytest.raises(FormatError):
        table.load(write(blob[: len(blob) // 2], "trunc.rvtb"))
    flipped = bytearray(blob)
    flipped[len(blob) // 2] ^= 0xFF
    with pytest.raises(FormatError):
        table.load(write(bytes(flipped), "flip.rvtb"))
    with pytest.raises(FormatError):
        table.load(write(b"XXXX" + blob[4:], "magic.rvtb"))
    with pytest.raises(ArchMismatch):
        table.load(write(blob, "ok.rvtb"), arch=Architecture.LNN)
    with pytest.raises(ArchMismatch):
        table.load(write(blob, "ok2.rvtb"), n=4)


def test_bfs_respects_entry_budget():
    with pytest.raises(ResourceExhausted):
        table.bfs_build(6, 3, max_entries=100)


def test_lnn_table_counts_are_smaller_per_gate_budget(full_k7, lnn_k7):
    # fewer admissible gates means fewer reachable functions at each size
    for (fr, ft), (lr, lt) in zip(full_k7.counts()[1:], lnn_k7.counts()[1:]):
        assert lt < ft
