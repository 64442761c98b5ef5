"""Canonical-representative store and its breadth-first construction.

A CanonTable holds every canonical representative of minimal size 0..k in an
open-addressing hash table (Wang-hashed, linear probing) together with a
packed annotation naming one first-or-last gate of a minimal circuit, plus
the per-size representative lists used by the meet-in-the-middle search.
"""

from __future__ import annotations

import os
import struct
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from . import benchdata, perm
from .errors import ArchMismatch, FormatError, IoError, ResourceExhausted
from .gates import Architecture, gate_library
from .symmetry import symmetry_group

IS_LAST_GATE = 0
IS_FIRST_GATE = 1

#: gate_id sentinel of the identity entry (it has no gates to annotate).
HAS_NO_GATES = K.GID_NONE

_ARCH_IDS = {Architecture.FULL: 0, Architecture.LNN: 1}
_ARCH_BY_ID = {v: k for k, v in _ARCH_IDS.items()}

#: Order-convention byte in file headers: 0 = raw unsigned word comparison.
ORDER_RAW_WORD = 0

MAGIC = b"RVTB"
FORMAT_VERSION = 1


def wang_hash(x: int) -> int:
    """64-bit integer hash (shift/add/xor sequence), modular arithmetic."""
    return int(K.wang_one(np.uint64(x)))


def pack_annotation(size: int, placement: int, gate_id: int) -> int:
    return size | (placement << 4) | (gate_id << 5)


def unpack_annotation(ann: int) -> tuple[int, int, int]:
    return ann & 15, (ann >> 4) & 1, (ann >> 5) & 63


@dataclass(frozen=True)
class CanonicalEntry:
    rep: int
    size: int
    placement: int  # IS_LAST_GATE or IS_FIRST_GATE
    gate_id: int  # HAS_NO_GATES for the identity


def _initial_slots(predicted_entries: int) -> int:
    slots = 1 << 10
    while predicted_entries > benchdata.INITIAL_LOAD * slots:
        slots <<= 1
    return slots


def predicted_entry_count(k: int, n: int, arch: Architecture) -> int:
    """Cumulative reduced-count estimate used for initial table sizing."""
    if n == 4:
        known = benchdata.REDUCED_COUNTS[arch]
        total = sum(known[: min(k, len(known) - 1) + 1])
        for i in range(len(known), k + 1):
            total += known[-1] * 13 ** (i - len(known) + 1)
        return total
    # small widths: start modest, growth handles the rest
    return min(1 << 14, 40320)


class CanonTable:
    """Hash table of canonical representatives plus per-size lists."""

    def __init__(self, n: int, arch: Architecture, k: int, slots: int):
        perm.check_width(n)
        self.n = n
        self.arch = arch
        self.k = k
        self.keys = np.zeros(slots, np.uint64)
        self.anns = np.zeros(slots, np.uint64)
        self.entry_count = 0
        self.levels: list[np.ndarray] = []
        self._group_pack = None

    @property
    def slot_count(self) -> int:
        return self.keys.shape[0]

    @property
    def load(self) -> float:
        return self.entry_count / self.slot_count

    @property
    def group_pack(self) -> K.GroupPack:
        if self._group_pack is None:
            self._group_pack = K.GroupPack(symmetry_group(self.n, self.arch))
        return self._group_pack

    def _grow(self) -> None:
        new_keys = np.zeros(2 * self.slot_count, np.uint64)
        new_anns = np.zeros_like(new_keys)
        K.rehash(self.keys, self.anns, new_keys, new_anns)
        self.keys = new_keys
        self.anns = new_anns

    def insert(self, e: CanonicalEntry) -> bool:
        """Insert if absent (first writer wins); True when newly stored."""
        if self.load >= benchdata.MAX_LOAD:
            self._grow()
        ann = pack_annotation(e.size, e.placement, e.gate_id)
        fresh = K.insert_one(self.keys, self.anns, np.uint64(e.rep), np.uint64(ann))
        self.entry_count += fresh
        return bool(fresh)

    def lookup(self, rep: int) -> CanonicalEntry | None:
        ann = int(K.lookup_one(self.keys, self.anns, np.uint64(rep)))
        if ann == 0:
            return None
        size, placement, gate_id = unpack_annotation(ann)
        return CanonicalEntry(rep, size, placement, gate_id)

    def min_size(self, f: int) -> int | None:
        """Table size of f's canonical representative, if stored."""
        gp = self.group_pack
        rep, _, _ = K.canon_one(np.uint64(f), gp.steps, gp.valid, gp.prio)
        e = self.lookup(int(rep))
        return None if e is None else e.size

    def counts(self) -> list[tuple[int, int]]:
        """Per-size (reduced count, total function count)."""
        gp = self.group_pack
        out = []
        for level in self.levels:
            sizes = np.empty(level.shape[0], np.int64)
            K.class_sizes(level, gp.steps, gp.valid, gp.prio, sizes)
            out.append((int(level.shape[0]), int(sizes.sum())))
        return out


def bfs_build(
    k: int,
    n: int = 4,
    arch: Architecture = Architecture.FULL,
    progress=None,
    max_entries: int | None = None,
) -> CanonTable:
    """Breadth-first table construction.

    Level i is produced by composing every member of the previous level (and
    the previous level's inverses) with every library gate, canonicalizing,
    and keeping first-seen representatives.  The stored gate is the original
    gate conjugated into the representative's frame; a non-inverted witness
    marks it as strippable on the right (IS_LAST_GATE), an inverted witness
    on the left (IS_FIRST_GATE).
    """
    if k < 0:
        raise ValueError("table depth k must be nonnegative")
    group = symmetry_group(n, arch)
    library = gate_library(n, arch)
    gp = K.GroupPack(group)
    gpk = K.GatePack(library, gp)
    G = len(library)

    t = CanonTable(n, arch, k, _initial_slots(predicted_entry_count(k, n, arch)))
    t._group_pack = gp
    t.insert(CanonicalEntry(perm.IDENTITY, 0, IS_LAST_GATE, HAS_NO_GATES))
    t.levels.append(np.array([perm.IDENTITY], np.uint64))

    for i in range(1, k + 1):
        prev = t.levels[i - 1]
        inv = np.empty_like(prev)
        K.inverse_many(prev, inv)
        frontier = np.unique(np.concatenate([prev, inv]))
        new_parts = []
        start = 0
        while start < frontier.shape[0]:
            # keep per-chunk insertions below 5% of capacity so the load
            # check between chunks cannot be overrun
            chunk = max(1024, t.slot_count // (G * 20))
            stop = min(start + chunk, frontier.shape[0])
            out = np.empty((stop - start) * G, np.uint64)
            nnew = K.bfs_chunk(
                frontier[start:stop], gpk.words, gpk.conj,
                gp.steps, gp.valid, gp.prio,
                t.keys, t.anns, i, out,
            )
            t.entry_count += int(nnew)
            new_parts.append(out[:nnew].copy())
            if max_entries is not None and t.entry_count > max_entries:
                raise ResourceExhausted(
                    f"entry budget exceeded at size {i} "
                    f"({t.entry_count} > {max_entries}); sizes 0..{i - 1} complete"
                )
            while t.load > benchdata.MAX_LOAD:
                t._grow()
            start = stop
        level = np.sort(np.concatenate(new_parts)) if new_parts else np.empty(0, np.uint64)
        t.levels.append(level)
        if progress is not None:
            progress(i, int(level.shape[0]))
    return t


# ---------------------------------------------------------------------------
# persistence

def save(t: CanonTable, path: str) -> None:
    """Write the table; deterministic for a given table's contents."""
    payload = bytearray()
    for level in t.levels:
        anns = np.empty_like(level)
        K.lookup_many(t.keys, t.anns, level, anns)
        pairs = np.empty(level.shape[0] * 2, np.uint64)
        pairs[0::2] = level
        pairs[1::2] = anns
        payload += pairs.astype("<u8").tobytes()
    counts = [int(level.shape[0]) for level in t.levels]
    header = MAGIC + struct.pack(
        "<IBBBB", FORMAT_VERSION, t.n, _ARCH_IDS[t.arch], ORDER_RAW_WORD, t.k
    )
    header += struct.pack(f"<{t.k + 1}Q", *counts)
    header += struct.pack("<Q", K.crc64(bytes(payload)))
    try:
        tmp = path + ".tmp"
        with open(tmp, "wb") as fh:
            fh.write(header)
            fh.write(payload)
        os.replace(tmp, path)
    except OSError as e:
        raise IoError(f"cannot write table file {path}: {e}") from e


def load(path: str, n: int | None = None, arch: Architecture | None = None) -> CanonTable:
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except OSError as e:
        raise IoError(f"cannot read table file {path}: {e}") from e

    if len(blob) < 12 or blob[:4] != MAGIC:
        raise FormatError(f"{path}: not a table file (bad magic)")
    version, file_n, arch_id, order, file_k = struct.unpack_from("<IBBBB", blob, 4)
    if version != FORMAT_VERSION:
        raise FormatError(f"{path}: unsupported format version {version}")
    if order != ORDER_RAW_WORD:
        raise FormatError(f"{path}: unknown order convention {order}")
    if arch_id not in _ARCH_BY_ID:
        raise FormatError(f"{path}: unknown architecture id {arch_id}")
    file_arch = _ARCH_BY_ID[arch_id]
    if (n is not None and file_n != n) or (arch is not None and file_arch is not arch):
        raise ArchMismatch(
            f"{path}: file is n={file_n}/{file_arch.value}, "
            f"expected n={n}/{arch.value if arch else 'any'}"
        )

    off = 12
    if len(blob) < off + 8 * (file_k + 2):
        raise FormatError(f"{path}: truncated header")
    counts = struct.unpack_from(f"<{file_k + 1}Q", blob, off)
    off += 8 * (file_k + 1)
    (crc,) = struct.unpack_from("<Q", blob, off)
    off += 8
    total = sum(counts)
    payload = blob[off:]
    if len(payload) != 16 * total:
        raise FormatError(f"{path}: truncated payload")
    if K.crc64(payload) != crc:
        raise FormatError(f"{path}: payload checksum mismatch")

    pairs = np.frombuffer(payload, "<u8").astype(np.uint64)
    t = CanonTable(file_n, file_arch, file_k, _initial_slots(total))
    pos = 0
    for c in counts:
        level = pairs[2 * pos : 2 * (pos + c) : 2].copy()
        anns = pairs[2 * pos + 1 : 2 * (pos + c) : 2].copy()
        t.entry_count += int(K.insert_many(t.keys, t.anns, level, anns))
        t.levels.append(level)
        pos += c
    if t.entry_count != total:
        raise FormatError(f"{path}: duplicate keys in payload")
    return t
