"""Exhaustive enumeration over dense index spaces.

Every function of minimal size k+1 is discovered from the size-k set by the
four-stage pipeline composition -> canonization -> subtraction -> counting,
operating on packed bit arrays indexed by a dense integer scheme: plain
factorial ranking at n=3, and the almost-reduced (A, B, Q) indexing at n=4.
Each bit stands for one scheme member; a size-k file marks the minimal
scheme member of every class of size k.
"""

from __future__ import annotations

import json
import os
import struct
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from math import factorial

import numpy as np

from . import _kernels as K
from . import perm
from .errors import (
    FormatError,
    IoError,
    LengthMismatch,
    NotAlmostReduced,
    OutOfRange,
    ResourceBudgetExceeded,
    SliceMismatch,
)
from .gates import Architecture, gate_library
from .symmetry import symmetry_group
from .table import _ARCH_BY_ID, _ARCH_IDS, CanonTable

BIT_MAGIC = b"RVBV"
BIT_FORMAT_VERSION = 1

#: The 21 valid (A, B) pairs in numeric order: A = p(0); B = p(15) when
#: A = 0, else B = p^-1(0).
AR_PAIRS = (
    (0, 1), (0, 3), (0, 7), (0, 15),
    (1, 1), (1, 2), (1, 15),
    (3, 1), (3, 3), (3, 4), (3, 5), (3, 12), (3, 15),
    (7, 1), (7, 3), (7, 7), (7, 8), (7, 9), (7, 11), (7, 15),
    (15, 15),
)

_COND2_PAIRS = frozenset(p for p in AR_PAIRS if p[0] != 0)


class IndexScheme:
    """Bijection between scheme members and [0, space_size)."""

    scheme_id: int
    n: int
    space_size: int

    def __init__(self):
        # dummy pack arrays; subclasses override what they use
        self.m = 1 << self.n
        self.pairs = np.zeros(1, np.int64)
        self.pair_rank = np.full(256, -1, np.int64)
        self.pair_ok = np.zeros(256, np.uint8)

    def is_member(self, word: int) -> bool:
        raise NotImplementedError

    def index(self, word: int) -> int:
        if not self.is_member(word):
            raise NotAlmostReduced(f"word {word:#018x} is not indexable here")
        return int(K.fact_index_one(np.uint64(word), self.m)) if self.scheme_id == 1 \
            else int(K.ar_index_one(np.uint64(word), self.pair_rank))

    def from_index(self, i: int) -> int:
        if not 0 <= i < self.space_size:
            raise OutOfRange(f"index {i} outside [0, {self.space_size})")
        if self.scheme_id == 1:
            return int(K.fact_unrank_one(np.int64(i), self.m))
        return int(K.ar_unrank_one(np.int64(i), self.pairs))


class FactorialScheme(IndexScheme):
    """Plain Lehmer ranking over all (2^n)! permutations (small widths)."""

    scheme_id = 1

    def __init__(self, n: int = 3):
        perm.check_width(n)
        self.n = n
        super().__init__()
        self.space_size = factorial(1 << n)

    def is_member(self, word: int) -> bool:
        return perm.is_perm_word(word, self.n)


class AlmostReducedScheme(IndexScheme):
    """(A, B, Q) indexing of the almost-reduced 4-bit permutations.

    Index = 14! * rank of the (A, B) pair + Lehmer rank of Q, where Q is the
    value sequence over the 14 unpinned domain points with both domain and
    values renumbered order-preservingly to 0..13.
    """

    scheme_id = 2
    n = 4

    def __init__(self):
        super().__init__()
        self.space_size = len(AR_PAIRS) * factorial(14)
        self.pairs = np.array([a * 16 + b for a, b in AR_PAIRS], np.int64)
        for r, (a, b) in enumerate(AR_PAIRS):
            self.pair_rank[a * 16 + b] = r
        for a, b in _COND2_PAIRS:
            self.pair_ok[a * 16 + b] = 1

    def is_member(self, word: int) -> bool:
        if not perm.is_perm_word(word, 4):
            return False
        return bool(K.is_ar_one(np.uint64(word), self.pair_ok))


def is_almost_reduced(p: int) -> bool:
    """Does p satisfy the (p(0), p(15)/p^-1(0)) membership conditions?"""
    return _ar_scheme().is_member(p)


@lru_cache(maxsize=None)
def _ar_scheme() -> AlmostReducedScheme:
    return AlmostReducedScheme()


def scheme_for(n: int, scheme_id: int | None = None) -> IndexScheme:
    if scheme_id is None:
        scheme_id = 2 if n == 4 else 1
    if scheme_id == 2:
        if n != 4:
            raise FormatError("almost-reduced indexing is defined at n=4 only")
        return _ar_scheme()
    return FactorialScheme(n)


def find_almost_reduced_equivalent(p: int):
    """The word-order-minimal almost-reduced member of p's class, plus the
    witness reconstructing p from it (guaranteed to exist)."""
    from .symmetry import _variants, symmetry_group as sg

    group = sg(4, Architecture.FULL)
    scheme = _ar_scheme()
    best = None
    best_pos = None
    best_inv = None
    for word, pos, inverted in _variants(p, group):
        if (best is None or word < best) and scheme.is_member(word):
            best, best_pos, best_inv = word, pos, inverted
    return best, group.witness_for(best_pos, best_inv)


# ---------------------------------------------------------------------------
# bit slices

@dataclass
class BitSlice:
    """Packed bits over the index range [lo, hi) of a scheme's space."""

    n: int
    arch: Architecture
    scheme_id: int
    size_label: int
    lo: int
    hi: int
    bits: np.ndarray  # uint64, word-packed little-endian, (hi-lo+63)//64 words

    @staticmethod
    def empty(n, arch, scheme_id, size_label, lo, hi) -> "BitSlice":
        if lo % 64:
            raise SliceMismatch("slice boundaries must be 64-bit aligned")
        return BitSlice(n, arch, scheme_id, size_label, lo, hi,
                        np.zeros((hi - lo + 63) // 64, np.uint64))

    def popcount(self) -> int:
        return int(np.bitwise_count(self.bits).sum())

    def get(self, index: int) -> bool:
        if not self.lo <= index < self.hi:
            raise OutOfRange(f"index {index} outside [{self.lo}, {self.hi})")
        off = index - self.lo
        return bool((int(self.bits[off >> 6]) >> (off & 63)) & 1)

    def set(self, index: int) -> None:
        if not self.lo <= index < self.hi:
            raise OutOfRange(f"index {index} outside [{self.lo}, {self.hi})")
        off = index - self.lo
        self.bits[off >> 6] |= np.uint64(1 << (off & 63))

    def indices(self) -> np.ndarray:
        out = np.empty(self.popcount(), np.int64)
        K.bits_to_indices(self.bits, self.lo, out)
        return out

    def words(self) -> np.ndarray:
        """Decode every set bit into its permutation word."""
        scheme = scheme_for(self.n, self.scheme_id)
        idx = self.indices()
        out = np.empty(idx.shape[0], np.uint64)
        K.unrank_many(idx, scheme.scheme_id, scheme.m, scheme.pairs, out)
        return out

    def _check_aligned(self, other: "BitSlice") -> None:
        if (self.n, self.scheme_id) != (other.n, other.scheme_id):
            raise SliceMismatch("bit slices index different spaces")
        if (self.lo, self.hi) != (other.lo, other.hi):
            raise LengthMismatch(
                f"ranges differ: [{self.lo},{self.hi}) vs [{other.lo},{other.hi})"
            )


def save_bits(s: BitSlice, path: str) -> None:
    payload = s.bits.astype("<u8").tobytes()
    header = BIT_MAGIC + struct.pack(
        "<IBBBBQQQ", BIT_FORMAT_VERSION, s.n, _ARCH_IDS[s.arch], s.scheme_id,
        s.size_label, s.lo, s.hi - s.lo, K.crc64(payload),
    )
    try:
        tmp = path + ".tmp"
        with open(tmp, "wb") as fh:
            fh.write(header)
            fh.write(payload)
        os.replace(tmp, path)
    except OSError as e:
        raise IoError(f"cannot write bit file {path}: {e}") from e


def load_bits(path: str) -> BitSlice:
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except OSError as e:
        raise IoError(f"cannot read bit file {path}: {e}") from e
    if len(blob) < 36 or blob[:4] != BIT_MAGIC:
        raise FormatError(f"{path}: not a bit file (bad magic)")
    version, n, arch_id, scheme_id, size_label, lo, nbits, crc = struct.unpack_from(
        "<IBBBBQQQ", blob, 4
    )
    if version != BIT_FORMAT_VERSION:
        raise FormatError(f"{path}: unsupported format version {version}")
    payload = blob[36:]
    if len(payload) != 8 * ((nbits + 63) // 64):
        raise FormatError(f"{path}: truncated payload")
    if K.crc64(payload) != crc:
        raise FormatError(f"{path}: payload checksum mismatch")
    bits = np.frombuffer(payload, "<u8").astype(np.uint64)
    return BitSlice(n, _ARCH_BY_ID[arch_id], scheme_id, size_label, lo, lo + nbits, bits)


# ---------------------------------------------------------------------------
# stage machinery

@lru_cache(maxsize=None)
def _packs(n: int, arch: Architecture):
    gp = K.GroupPack(symmetry_group(n, arch))
    gpk = K.GatePack(gate_library(n, arch), gp)
    return gp, gpk


@lru_cache(maxsize=None)
def _member_table(n: int, arch: Architecture, scheme_id: int) -> np.ndarray:
    gp, _ = _packs(n, arch)
    scheme = scheme_for(n, scheme_id)
    F = np.empty(1 << 16, np.int64)
    K.build_member_table(gp.vmap, gp.lex_pos, scheme.scheme_id, scheme.pair_ok, F)
    return F


def _run_blocks(items: np.ndarray, block: int, workers: int, window: int, fn, merge):
    """Map fn over blocks with a bounded in-flight window; merge in any order."""
    blocks = [items[i : i + block] for i in range(0, items.shape[0], block)]
    if workers <= 1:
        for b in blocks:
            merge(fn(b))
        return
    sem = threading.Semaphore(max(window, workers))
    lock = threading.Lock()

    def task(b):
        try:
            r = fn(b)
            with lock:
                merge(r)
        finally:
            sem.release()

    with ThreadPoolExecutor(max_workers=workers) as pool:
        futs = []
        for b in blocks:
            sem.acquire()
            futs.append(pool.submit(task, b))
        for f in futs:
            f.result()


def bootstrap_slice(
    t: CanonTable, size: int, lo: int, hi: int, scheme: IndexScheme | None = None
) -> BitSlice:
    """Seed bit slice for one size from a breadth-first table's level list."""
    scheme = scheme or scheme_for(t.n)
    gp, _ = _packs(t.n, t.arch)
    out = BitSlice.empty(t.n, t.arch, scheme.scheme_id, size, lo, hi)
    K.mark_min_members(
        t.levels[size], gp.steps, gp.valid, gp.prio, scheme.scheme_id,
        scheme.m, scheme.pair_rank, scheme.pair_ok, lo, hi, out.bits,
    )
    return out


def stage_composition(
    inp: BitSlice,
    lo: int,
    hi: int,
    *,
    shortcut: bool = True,
    workers: int = 1,
    window: int = 8,
    block: int = 2048,
) -> BitSlice:
    """Mark, for every class member p' of every input word and every gate g,
    the first scheme-member variant of p' followed by g that falls in
    [lo, hi)."""
    scheme = scheme_for(inp.n, inp.scheme_id)
    gp, gpk = _packs(inp.n, inp.arch)
    out = BitSlice.empty(inp.n, inp.arch, inp.scheme_id, inp.size_label + 1, lo, hi)
    words = inp.words()

    if shortcut:
        F = _member_table(inp.n, inp.arch, inp.scheme_id)

        def fn(ws):
            part = np.zeros_like(out.bits)
            K.compose_stage_fast(
                ws, gpk.words, gpk.at0, gpk.at15, gpk.conj, gp.steps, gp.valid,
                gp.prio, gp.mul, F, gp.vmap, scheme.scheme_id, scheme.m,
                scheme.pair_rank, scheme.pair_ok, lo, hi, part,
            )
            return part
    else:

        def fn(ws):
            part = np.zeros_like(out.bits)
            K.compose_stage_naive(
                ws, gpk.words, gp.steps, gp.valid, gp.prio, gp.lex_pos,
                scheme.scheme_id, scheme.m, scheme.pair_rank, scheme.pair_ok,
                lo, hi, part,
            )
            return part

    def merge(part):
        np.bitwise_or(out.bits, part, out=out.bits)

    _run_blocks(words, block, workers, window, fn, merge)
    return out


def stage_canonization(
    parts: list[BitSlice], lo: int, hi: int, *, workers: int = 1, window: int = 8
) -> BitSlice:
    """Keep one bit per marked class: that of its minimal scheme member."""
    first = parts[0]
    scheme = scheme_for(first.n, first.scheme_id)
    gp, _ = _packs(first.n, first.arch)
    out = BitSlice.empty(first.n, first.arch, first.scheme_id, first.size_label, lo, hi)
    for p in parts:
        part = np.zeros_like(out.bits)
        K.canonize_stage(
            p.bits, p.lo, gp.steps, gp.valid, gp.prio, scheme.scheme_id,
            scheme.m, scheme.pairs, scheme.pair_rank, scheme.pair_ok,
            lo, hi, part,
        )
        np.bitwise_or(out.bits, part, out=out.bits)
    return out


def stage_subtraction(candidate: BitSlice, size_k: BitSlice, size_k_minus_1: BitSlice) -> BitSlice:
    """candidate AND NOT size_k AND NOT size_(k-1), elementwise."""
    candidate._check_aligned(size_k)
    candidate._check_aligned(size_k_minus_1)
    bits = candidate.bits & ~size_k.bits & ~size_k_minus_1.bits
    return BitSlice(candidate.n, candidate.arch, candidate.scheme_id,
                    candidate.size_label, candidate.lo, candidate.hi, bits)


def stage_counting(marked: BitSlice) -> tuple[int, int]:
    """(number of marked classes, sum of their cardinalities)."""
    scheme = scheme_for(marked.n, marked.scheme_id)
    gp, _ = _packs(marked.n, marked.arch)
    out2 = np.zeros(2, np.int64)
    K.count_stage(marked.bits, marked.lo, gp.steps, gp.valid, gp.prio,
                  scheme.scheme_id, scheme.m, scheme.pairs, out2)
    return int(out2[0]), int(out2[1])


def _slice_ranges(space: int, slices: int) -> list[tuple[int, int]]:
    """Word-aligned, contiguous, near-equal partition of [0, space)."""
    per = ((space + slices - 1) // slices + 63) // 64 * 64
    out = []
    lo = 0
    while lo < space:
        out.append((lo, min(lo + per, space)))
        lo += per
    return out


def _concat_slices(parts: list[BitSlice]) -> BitSlice:
    full = parts[0]
    for p in parts[1:]:
        if p.lo != full.hi or p.lo % 64:
            raise SliceMismatch("slices are not contiguous word-aligned ranges")
        full = BitSlice(full.n, full.arch, full.scheme_id, full.size_label,
                        full.lo, p.hi, np.concatenate([full.bits, p.bits]))
    return full


def run_pipeline(
    from_size: int,
    to_size: int,
    seed_table: CanonTable,
    *,
    scheme_id: int | None = None,
    slices: int = 1,
    workers: int = 1,
    shortcut: bool = True,
    budget_bytes: int = 1 << 28,
    workdir: str | None = None,
) -> dict[int, tuple[int, int]]:
    """Advance size by size, returning per-size (reduced, total) counts.

    Output is independent of the slice and worker configuration.  With a
    workdir, per-size bit files and a resume manifest are maintained.
    """
    n = seed_table.n
    scheme = scheme_for(n, scheme_id)
    space = scheme.space_size
    file_bytes = (space + 7) // 8
    # composition + canonization + two seed files live at once
    if 4 * file_bytes > budget_bytes:
        raise ResourceBudgetExceeded(
            f"{file_bytes} bytes per bit file exceeds the {budget_bytes}-byte "
            f"budget; raise it explicitly to proceed"
        )
    if from_size < 1 or from_size > seed_table.k:
        raise ValueError("from_size must be within the seed table's depth")

    manifest_path = os.path.join(workdir, "manifest.json") if workdir else None
    manifest = {"sizes": {}}
    if manifest_path and os.path.exists(manifest_path):
        with open(manifest_path) as fh:
            manifest = json.load(fh)

    def persist(size: int, s: BitSlice, counts):
        if not workdir:
            return
        path = os.path.join(workdir, f"size{size}.rvbv")
        save_bits(s, path)
        manifest["sizes"][str(size)] = {
            "file": os.path.basename(path),
            "crc": K.crc64(s.bits.astype("<u8").tobytes()),
            "counts": list(counts),
        }
        with open(manifest_path, "w") as fh:
            json.dump(manifest, fh, indent=1)

    current = bootstrap_slice(seed_table, from_size, 0, space, scheme)
    previous = bootstrap_slice(seed_table, from_size - 1, 0, space, scheme)
    results: dict[int, tuple[int, int]] = {}
    results[from_size] = stage_counting(current)
    persist(from_size, current, results[from_size])

    for k in range(from_size, to_size):
        done = manifest["sizes"].get(str(k + 1))
        if workdir and done:
            path = os.path.join(workdir, done["file"])
            if os.path.exists(path):
                nxt = load_bits(path)
                previous, current = current, nxt
                results[k + 1] = tuple(done["counts"])
                continue
        parts = []
        for lo, hi in _slice_ranges(space, slices):
            cand = stage_composition(current, lo, hi, shortcut=shortcut, workers=workers)
            parts.append(cand)
        out_parts = []
        for lo, hi in _slice_ranges(space, slices):
            canon = stage_canonization(parts, lo, hi, workers=workers)
            cur_sl = BitSlice(n, current.arch, scheme.scheme_id, k, lo, hi,
                              current.bits[lo // 64 : (hi + 63) // 64])
            prev_sl = BitSlice(n, current.arch, scheme.scheme_id, k - 1, lo, hi,
                               previous.bits[lo // 64 : (hi + 63) // 64])
            out_parts.append(stage_subtraction(canon, cur_sl, prev_sl))
        nxt = _concat_slices(out_parts)
        nxt.size_label = k + 1
        results[k + 1] = stage_counting(nxt)
        persist(k + 1, nxt, results[k + 1])
        previous, current = current, nxt
    return results


def next_size_counts_sparse(
    seed_table: CanonTable, k: int, *, block: int = 8192
) -> tuple[int, int]:
    """(reduced, total) counts for size k+1 via sparse index sets.

    Same semantics as one pipeline step, but candidate marks are collected
    as sorted index arrays instead of dense bits, so the full n=4
    almost-reduced space never needs to be materialized.
    """
    n = seed_table.n
    scheme = scheme_for(n)
    gp, gpk = _packs(n, seed_table.arch)
    F = _member_table(n, seed_table.arch, scheme.scheme_id)

    def min_indices(size: int) -> np.ndarray:
        # a dense bootstrap would be huge at n=4; index per-rep min members
        reps = seed_table.levels[size]
        out = np.empty(reps.shape[0], np.int64)
        for i, r in enumerate(reps):
            w = K.min_member_one(np.uint64(r), gp.steps, gp.valid, gp.prio,
                                 scheme.scheme_id, scheme.pair_ok)
            out[i] = scheme.index(int(w))
        return np.unique(out)

    words = seed_table.levels[k]
    variants = int(np.sum(np.asarray(gp.valid, np.int64))) * 2
    per_word = variants * gpk.words.shape[0]
    parts = []
    for i in range(0, words.shape[0], block):
        ws = words[i : i + block]
        buf = np.empty(ws.shape[0] * per_word, np.int64)
        cnt = K.compose_stage_sparse(
            ws, gpk.words, gpk.at0, gpk.at15, gpk.conj, gp.steps, gp.valid,
            gp.prio, gp.mul, F, gp.vmap, scheme.scheme_id, scheme.m,
            scheme.pair_rank, scheme.pair_ok, buf,
        )
        parts.append(np.unique(buf[:cnt]))
    marked = np.unique(np.concatenate(parts))
    canon = np.empty_like(marked)
    K.canonize_indices(marked, gp.steps, gp.valid, gp.prio, scheme.scheme_id,
                       scheme.m, scheme.pairs, scheme.pair_rank, scheme.pair_ok,
                       canon)
    canon = np.unique(canon)
    seen = np.union1d(min_indices(k), min_indices(k - 1))
    fresh = np.setdiff1d(canon, seen, assume_unique=True)
    out2 = np.zeros(2, np.int64)
    K.count_indices(fresh, gp.steps, gp.valid, gp.prio, scheme.scheme_id,
                    scheme.m, scheme.pairs, out2)
    return int(out2[0]), int(out2[1])
