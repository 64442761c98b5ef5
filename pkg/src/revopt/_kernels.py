"""Compiled hot-path kernels and array packs.

Everything here mirrors the pure-Python routines in perm/symmetry; the two
implementations are cross-checked in the test suite.  All kernels operate on
64-bit permutation words and the flat array packs built below from a
SymmetryGroup and a gate library.
"""

from __future__ import annotations

import numpy as np
from numba import njit, uint64, int64

from . import perm as _perm

U0 = np.uint64(0)
U1 = np.uint64(1)
U2 = np.uint64(2)
U4 = np.uint64(4)
U15 = np.uint64(15)
U63 = np.uint64(63)
UFULL = np.uint64(0xFFFFFFFFFFFFFFFF)

# Conjugation masks for adjacent line transpositions (see perm.py).
PK0, PA0, PB0 = (np.uint64(m) for m in (0xF00FF00FF00FF00F, 0x00F000F000F000F0, 0x0F000F000F000F00))
PK1, PA1, PB1 = (np.uint64(m) for m in (0xFF0000FFFF0000FF, 0x0000FF000000FF00, 0x00FF000000FF0000))
PK2, PA2, PB2 = (np.uint64(m) for m in (0xFFFF00000000FFFF, 0x00000000FFFF0000, 0x0000FFFF00000000))
VK0, VL0, VH0 = (np.uint64(m) for m in (0xCCCCCCCCCCCCCCCC, 0x1111111111111111, 0x2222222222222222))
VK1, VL1, VH1 = (np.uint64(m) for m in (0x9999999999999999, 0x2222222222222222, 0x4444444444444444))
VK2, VL2, VH2 = (np.uint64(m) for m in (0x3333333333333333, 0x4444444444444444, 0x8888888888888888))

U8_, U16_, U24, U21, U3, U28, U14, U31 = (np.uint64(v) for v in (8, 16, 24, 21, 3, 28, 14, 31))

ANN_ABSENT = np.uint64(0)
GID_NONE = 63  # annotation sentinel: entry has no gate (the identity)


@njit(uint64(uint64, uint64), cache=True, inline="always")
def _compose(p, q):
    r = U0
    for i in range(16):
        sh = uint64(4 * i)
        r |= ((q >> (((p >> sh) & U15) << U2)) & U15) << sh
    return r


@njit(uint64(uint64), cache=True, inline="always")
def _inverse(p):
    q = U0
    for i in range(16):
        sh = uint64(4 * i)
        q |= uint64(i) << (((p >> sh) & U15) << U2)
    return q


@njit(uint64(uint64, int64), cache=True, inline="always")
def _conj(p, t):
    if t == 0:
        p = (p & PK0) | ((p & PA0) << U4) | ((p & PB0) >> U4)
        return (p & VK0) | ((p & VL0) << U1) | ((p & VH0) >> U1)
    elif t == 1:
        p = (p & PK1) | ((p & PA1) << U8_) | ((p & PB1) >> U8_)
        return (p & VK1) | ((p & VL1) << U1) | ((p & VH1) >> U1)
    else:
        p = (p & PK2) | ((p & PA2) << U16_) | ((p & PB2) >> U16_)
        return (p & VK2) | ((p & VL2) << U1) | ((p & VH2) >> U1)


@njit(uint64(uint64), cache=True, inline="always")
def _wang(key):
    key = (~key) + (key << U21)
    key = key ^ (key >> U24)
    key = (key + (key << U3)) + (key << U8_)
    key = key ^ (key >> U14)
    key = (key + (key << U2)) + (key << U4)
    key = key ^ (key >> U28)
    key = key + (key << U31)
    return key


@njit(cache=True, inline="always")
def _canon(f, steps, valid, prio):
    """Minimal class member plus its (chain position, inverted) witness."""
    best = UFULL
    bp = 1 << 30
    bj = 0
    bi = 0
    P = steps.shape[0]
    cur = f
    for j in range(P):
        if j > 0:
            cur = _conj(cur, steps[j])
        if valid[j]:
            pr = prio[j]
            if cur < best or (cur == best and pr < bp):
                best = cur
                bp = pr
                bj = j
                bi = 0
    cur = _inverse(f)
    for j in range(P):
        if j > 0:
            cur = _conj(cur, steps[j])
        if valid[j]:
            pr = prio[j] + 1
            if cur < best or (cur == best and pr < bp):
                best = cur
                bp = pr
                bj = j
                bi = 1
    return best, bj, bi


@njit(cache=True, inline="always")
def _fill_variants(f, steps, buf):
    """buf[j] = conjugate of f at chain position j; buf[P+j] same for f^-1."""
    P = steps.shape[0]
    cur = f
    for j in range(P):
        if j > 0:
            cur = _conj(cur, steps[j])
        buf[j] = cur
    cur = _inverse(f)
    for j in range(P):
        if j > 0:
            cur = _conj(cur, steps[j])
        buf[P + j] = cur


@njit(cache=True, inline="always")
def _probe(keys, key):
    mask = keys.shape[0] - 1
    s = int64(_wang(key)) & mask
    while keys[s] != U0 and keys[s] != key:
        s = (s + 1) & mask
    return s


# ---------------------------------------------------------------------------
# scalar entry points (python-callable)

@njit(cache=True)
def compose_one(p, q):
    return _compose(p, q)


@njit(cache=True)
def inverse_one(p):
    return _inverse(p)


@njit(cache=True)
def wang_one(key):
    return _wang(key)


@njit(cache=True)
def canon_one(f, steps, valid, prio):
    return _canon(f, steps, valid, prio)


@njit(cache=True)
def lookup_one(keys, anns, rep):
    s = _probe(keys, rep)
    if keys[s] == rep:
        return anns[s]
    return ANN_ABSENT


@njit(cache=True)
def insert_one(keys, anns, rep, ann):
    """Insert if absent; returns 1 when a new slot was filled."""
    s = _probe(keys, rep)
    if keys[s] == rep:
        return 0
    keys[s] = rep
    anns[s] = ann
    return 1


@njit(cache=True)
def probe_distance(keys, rep):
    """Probe-chain length for one lookup (for distribution checks)."""
    mask = keys.shape[0] - 1
    s = int64(_wang(rep)) & mask
    d = 1
    while keys[s] != U0 and keys[s] != rep:
        s = (s + 1) & mask
        d += 1
    return d


# ---------------------------------------------------------------------------
# batch kernels

@njit(cache=True)
def compose_many(ps, q, out):
    for i in range(ps.shape[0]):
        out[i] = _compose(ps[i], q)


@njit(cache=True)
def inverse_many(ps, out):
    for i in range(ps.shape[0]):
        out[i] = _inverse(ps[i])


@njit(cache=True)
def wang_many(keys, out):
    for i in range(keys.shape[0]):
        out[i] = _wang(keys[i])


@njit(cache=True)
def canon_many(words, steps, valid, prio, out):
    for i in range(words.shape[0]):
        rep, _, _ = _canon(words[i], steps, valid, prio)
        out[i] = rep


@njit(cache=True)
def insert_many(keys, anns, reps, annv):
    """Sequential insert-if-absent of rep/annotation pairs; returns #new."""
    new = 0
    for i in range(reps.shape[0]):
        new += insert_one(keys, anns, reps[i], annv[i])
    return new


@njit(cache=True)
def lookup_many(keys, anns, reps, out):
    for i in range(reps.shape[0]):
        out[i] = lookup_one(keys, anns, reps[i])


@njit(cache=True)
def rehash(old_keys, old_anns, keys, anns):
    for s in range(old_keys.shape[0]):
        k = old_keys[s]
        if k != U0:
            t = _probe(keys, k)
            keys[t] = k
            anns[t] = old_anns[s]


@njit(cache=True)
def bfs_chunk(frontier, gwords, gconj, steps, valid, prio, keys, anns, size_i, out_reps):
    """Expand one frontier chunk by every gate; insert new canonical reps.

    Annotation: bits 0..3 size, bit 4 placement (0 = stripping the gate on
    the right lowers the size, 1 = on the left), bits 5..10 gate id.
    Returns the number of fresh representatives written to out_reps.
    """
    nnew = 0
    G = gwords.shape[0]
    for fi in range(frontier.shape[0]):
        f = frontier[fi]
        for g in range(G):
            h = _compose(f, gwords[g])
            rep, j, inv = _canon(h, steps, valid, prio)
            s = _probe(keys, rep)
            if keys[s] == U0:
                keys[s] = rep
                gid = gconj[g, j]
                anns[s] = uint64(size_i) | (uint64(inv) << U4) | (uint64(gid) << uint64(5))
                out_reps[nnew] = rep
                nnew += 1
    return nnew


@njit(cache=True)
def class_sizes(reps, steps, valid, prio, out):
    """Distinct-member count of each representative's equivalence class."""
    P = steps.shape[0]
    buf = np.empty(2 * P, np.uint64)
    ordbuf = np.empty(2 * P, np.uint64)
    for ri in range(reps.shape[0]):
        _fill_variants(reps[ri], steps, buf)
        m = 0
        for j in range(2 * P):
            if valid[j % P]:
                ordbuf[m] = buf[j]
                m += 1
        # insertion sort + distinct count over at most 48 entries
        for a in range(1, m):
            v = ordbuf[a]
            b = a - 1
            while b >= 0 and ordbuf[b] > v:
                ordbuf[b + 1] = ordbuf[b]
                b -= 1
            ordbuf[b + 1] = v
        cnt = 1
        for a in range(1, m):
            if ordbuf[a] != ordbuf[a - 1]:
                cnt += 1
        out[ri] = cnt


@njit(cache=True)
def shell_scan(fword, reps, steps, valid, prio, lex_pos, keys, anns, stats):
    """Scan one shell: reps ascending, class members in witness order.

    For the first member g with canonical(g then f) present in the table,
    returns (rep index, chain position, inverted); (-1, -1, -1) on a miss.
    stats accumulates [compositions, canonicalizations, lookups].
    """
    P = steps.shape[0]
    var = np.empty(2 * P, np.uint64)
    for ri in range(reps.shape[0]):
        _fill_variants(reps[ri], steps, var)
        for oi in range(lex_pos.shape[0]):
            pos = lex_pos[oi]
            for inv in range(2):
                g = var[inv * P + pos]
                h = _compose(g, fword)
                rep, _, _ = _canon(h, steps, valid, prio)
                stats[0] += 1
                stats[1] += 1
                stats[2] += 1
                s = _probe(keys, rep)
                if keys[s] == rep:
                    return ri, pos, inv
    return -1, -1, -1


@njit(cache=True)
def min_sizes(words, steps, valid, prio, lex_pos, keys, anns, lists, offsets, max_shell, k, out):
    """Minimal gate count for each word: table lookup, then shell search.

    k is the table depth; lists holds the per-size representative arrays
    concatenated, shell i occupying lists[offsets[i]:offsets[i+1]].
    out[w] = -1 when nothing is found within max_shell shells.
    """
    P = steps.shape[0]
    var = np.empty(2 * P, np.uint64)
    for wi in range(words.shape[0]):
        f = words[wi]
        rep, _, _ = _canon(f, steps, valid, prio)
        s = _probe(keys, rep)
        if keys[s] == rep:
            out[wi] = int64(anns[s] & U15)
            continue
        res = -1
        for shell in range(1, max_shell + 1):
            if res >= 0:
                break
            for ri in range(offsets[shell], offsets[shell + 1]):
                if res >= 0:
                    break
                _fill_variants(lists[ri], steps, var)
                for oi in range(lex_pos.shape[0]):
                    pos = lex_pos[oi]
                    done = False
                    for inv in range(2):
                        g = var[inv * P + pos]
                        h = _compose(g, f)
                        hrep, _, _ = _canon(h, steps, valid, prio)
                        t = _probe(keys, hrep)
                        if keys[t] == hrep:
                            res = k + shell
                            done = True
                            break
                    if done:
                        break
        out[wi] = res


# ---------------------------------------------------------------------------
# CRC-64 (XZ variant) for the binary file formats

_CRC64_POLY = 0xC96C5795D7870F42


def _crc64_table() -> np.ndarray:
    table = np.empty(256, np.uint64)
    for i in range(256):
        c = i
        for _ in range(8):
            c = (c >> 1) ^ _CRC64_POLY if c & 1 else c >> 1
        table[i] = c
    return table


CRC64_TABLE = _crc64_table()


@njit(cache=True)
def _crc64_update(crc, data, table):
    for i in range(data.shape[0]):
        crc = table[(crc ^ uint64(data[i])) & uint64(255)] ^ (crc >> U8_)
    return crc


def crc64(data: bytes | np.ndarray, crc: int = 0) -> int:
    buf = np.frombuffer(data, np.uint8) if isinstance(data, (bytes, bytearray, memoryview)) else data.view(np.uint8)
    start = np.uint64(crc ^ 0xFFFFFFFFFFFFFFFF)
    out = _crc64_update(start, buf, CRC64_TABLE)
    return int(out ^ np.uint64(0xFFFFFFFFFFFFFFFF))


# ---------------------------------------------------------------------------
# array packs

class GroupPack:
    """Flat-array form of a SymmetryGroup for kernel consumption."""

    def __init__(self, group):
        P = len(group.chain_perms)
        self.group = group
        self.steps = np.array(group.chain_steps, np.int64)
        self.valid = np.array([1 if v else 0 for v in group.valid], np.uint8)
        self.prio = np.array(
            [r * 2 if r >= 0 else 1 << 29 for r in group.lex_rank], np.int64
        )
        self.lex_pos = np.array(group.positions(), np.int64)
        self.sigma_words = np.array(group.sigma_words, np.uint64)
        pos_of = {p: i for i, p in enumerate(group.chain_perms)}
        mul = np.empty((P, P), np.int64)
        for a, pa in enumerate(group.chain_perms):
            for c, pc in enumerate(group.chain_perms):
                # word composition sigma_a then sigma_c relabels lines by pc(pa(.))
                prod = tuple(pc[v] for v in pa)
                mul[a, c] = pos_of[prod]
        self.mul = mul
        self.inv_pos = np.array(
            [pos_of[group.inverse_perm(p)] for p in group.chain_perms], np.int64
        )
        # value map of each relabeling word: vmap[pos][v] = sigma~(v)
        vmap = np.empty((P, 16), np.uint8)
        for i, w in enumerate(group.sigma_words):
            for v in range(16):
                vmap[i, v] = (w >> (4 * v)) & 15
        self.vmap = vmap


class GatePack:
    """Flat-array form of a gate library joined with a group's chain."""

    def __init__(self, library, group_pack):
        group = group_pack.group
        self.library = library
        self.words = np.array([g.word for g in library], np.uint64)
        by_word = {g.word: i for i, g in enumerate(library)}
        P = len(group.chain_perms)
        conj = np.empty((len(library), P), np.int64)
        for gi, g in enumerate(library):
            for pos in range(P):
                if not group.valid[pos]:
                    conj[gi, pos] = -1
                    continue
                s = group.sigma_words[pos]
                w = _perm.compose(_perm.compose(_perm.inverse(s), g.word), s)
                conj[gi, pos] = by_word[w]
        self.conj = conj
        self.at0 = np.array([_perm.apply_word(g.word, 0) for g in library], np.uint8)
        self.at15 = np.array([_perm.apply_word(g.word, 15) for g in library], np.uint8)
        vmap = np.empty((len(library), 16), np.uint8)
        for gi, g in enumerate(library):
            for v in range(16):
                vmap[gi, v] = _perm.apply_word(g.word, v)
        self.vmap = vmap


# ---------------------------------------------------------------------------
# dense-index schemes and enumeration-stage kernels

FACT14 = 87178291200  # 14!


@njit(cache=True, inline="always")
def _fact_index(word, m):
    """Lexicographic rank of the first m nibbles (a permutation of 0..m-1)."""
    rank = 0
    for i in range(m):
        v = int64((word >> uint64(4 * i)) & U15)
        smaller = 0
        for j in range(i + 1, m):
            if int64((word >> uint64(4 * j)) & U15) < v:
                smaller += 1
        rank = rank * (m - i) + smaller
    return rank


@njit(cache=True, inline="always")
def _fact_unrank(r, m):
    digits = np.empty(m, np.int64)
    for i in range(1, m + 1):
        digits[m - i] = r % i
        r //= i
    pool = np.empty(m, np.int64)
    for i in range(m):
        pool[i] = i
    word = U0
    cnt = m
    for i in range(m):
        d = digits[i]
        v = pool[d]
        for j in range(d, cnt - 1):
            pool[j] = pool[j + 1]
        cnt -= 1
        word |= uint64(v) << uint64(4 * i)
    for i in range(m, 16):
        word |= uint64(i) << uint64(4 * i)
    return word


@njit(cache=True, inline="always")
def _inv_at0(word):
    for i in range(16):
        if (word >> uint64(4 * i)) & U15 == U0:
            return i
    return -1


@njit(cache=True, inline="always")
def _is_member_vals(q0, q15, qi0, pair_ok):
    if q0 == 0:
        return q15 == 1 or q15 == 3 or q15 == 7 or q15 == 15
    return pair_ok[q0 * 16 + qi0] != 0


@njit(cache=True, inline="always")
def _is_ar(word, pair_ok):
    a = int64(word & U15)
    b15 = int64((word >> uint64(60)) & U15)
    return _is_member_vals(a, b15, _inv_at0(word), pair_ok)


@njit(cache=True, inline="always")
def _ar_index(word, pair_rank):
    a = int64(word & U15)
    if a == 0:
        b = int64((word >> uint64(60)) & U15)
        d1 = 15
        vpin = b
    else:
        b = _inv_at0(word)
        d1 = b
        vpin = a
    pr = pair_rank[a * 16 + b]
    if pr < 0:
        return -1
    q = np.empty(14, np.int64)
    k = 0
    for x in range(16):
        if x == 0 or x == d1:
            continue
        v = int64((word >> uint64(4 * x)) & U15)
        # pinned values are {0, vpin}; renumber the rest order-preservingly
        v -= 1
        if v >= vpin:
            v -= 1
        q[k] = v
        k += 1
    rank = 0
    for i in range(14):
        smaller = 0
        for j in range(i + 1, 14):
            if q[j] < q[i]:
                smaller += 1
        rank = rank * (14 - i) + smaller
    return pr * FACT14 + rank


@njit(cache=True, inline="always")
def _ar_unrank(idx, pairs):
    pr = idx // FACT14
    r = idx % FACT14
    a = pairs[pr] // 16
    b = pairs[pr] % 16
    if a == 0:
        d1 = 15
        vpin = b
    else:
        d1 = b
        vpin = a
    digits = np.empty(14, np.int64)
    for i in range(1, 15):
        digits[14 - i] = r % i
        r //= i
    pool = np.empty(14, np.int64)
    k = 0
    for v in range(16):
        if v != 0 and v != vpin:
            pool[k] = v
            k += 1
    word = U0
    if a == 0:
        word |= uint64(b) << uint64(60)
    else:
        word |= uint64(a)
        # word nibble at d1 stays 0 (p(d1) = 0)
    cnt = 14
    qi = 0
    for x in range(16):
        if x == 0 or x == d1:
            continue
        d = digits[qi]
        qi += 1
        v = pool[d]
        for j in range(d, cnt - 1):
            pool[j] = pool[j + 1]
        cnt -= 1
        word |= uint64(v) << uint64(4 * x)
    return word


@njit(cache=True, inline="always")
def _scheme_index(word, scheme_id, m, pair_rank):
    if scheme_id == 1:
        return _fact_index(word, m)
    return _ar_index(word, pair_rank)


@njit(cache=True, inline="always")
def _scheme_unrank(idx, scheme_id, m, pairs):
    if scheme_id == 1:
        return _fact_unrank(idx, m)
    return _ar_unrank(idx, pairs)


@njit(cache=True)
def fact_index_one(word, m):
    return _fact_index(word, m)


@njit(cache=True)
def fact_unrank_one(r, m):
    return _fact_unrank(r, m)


@njit(cache=True)
def ar_index_one(word, pair_rank):
    return _ar_index(word, pair_rank)


@njit(cache=True)
def ar_unrank_one(idx, pairs):
    return _ar_unrank(idx, pairs)


@njit(cache=True)
def is_ar_one(word, pair_ok):
    return _is_ar(word, pair_ok)


@njit(cache=True, inline="always")
def _set_bit(outbits, pos):
    outbits[pos >> 6] |= U1 << uint64(pos & 63)


@njit(cache=True, inline="always")
def _min_member(f, steps, valid, prio, scheme_id, pair_ok, var):
    """Smallest word among the class members satisfying the scheme predicate."""
    P = steps.shape[0]
    _fill_variants(f, steps, var)
    best = UFULL
    found = False
    for j in range(2 * P):
        if not valid[j % P]:
            continue
        w = var[j]
        if w < best and (scheme_id == 1 or _is_ar(w, pair_ok)):
            best = w
            found = True
    if not found:
        return U0
    return best


@njit(cache=True)
def min_member_one(f, steps, valid, prio, scheme_id, pair_ok):
    var = np.empty(2 * steps.shape[0], np.uint64)
    return _min_member(f, steps, valid, prio, scheme_id, pair_ok, var)


@njit(cache=True, nogil=True)
def mark_min_members(reps, steps, valid, prio, scheme_id, m, pair_rank, pair_ok, lo, hi, outbits):
    """Bootstrap: set the bit of each representative's minimal member."""
    var = np.empty(2 * steps.shape[0], np.uint64)
    for ri in range(reps.shape[0]):
        w = _min_member(reps[ri], steps, valid, prio, scheme_id, pair_ok, var)
        idx = _scheme_index(w, scheme_id, m, pair_rank)
        if lo <= idx < hi:
            _set_bit(outbits, idx - lo)


@njit(cache=True, inline="always")
def _first_member_pos(h, hinv, steps, valid, prio, lex_pos, scheme_id, pair_ok, var2):
    """First (chain pos, inverted) in enumeration order whose variant of h
    satisfies the scheme predicate.  Returns packed pos*2+inv."""
    P = steps.shape[0]
    cur = h
    for j in range(P):
        if j > 0:
            cur = _conj(cur, steps[j])
        var2[j] = cur
    cur = hinv
    for j in range(P):
        if j > 0:
            cur = _conj(cur, steps[j])
        var2[P + j] = cur
    for oi in range(lex_pos.shape[0]):
        pos = lex_pos[oi]
        for inv in range(2):
            q = var2[inv * P + pos]
            if scheme_id == 1 or _is_ar(q, pair_ok):
                return pos * 2 + inv
    return -1


@njit(cache=True, nogil=True)
def compose_stage_naive(in_words, gwords, steps, valid, prio, lex_pos,
                        scheme_id, m, pair_rank, pair_ok, lo, hi, outbits):
    """Reference composition stage: for every class member of every input
    word and every gate, mark the first scheme-member variant of the result
    (enumeration order: relabelings lexicographically, plain before
    inverted)."""
    P = steps.shape[0]
    var = np.empty(2 * P, np.uint64)
    var2 = np.empty(2 * P, np.uint64)
    for wi in range(in_words.shape[0]):
        _fill_variants(in_words[wi], steps, var)
        for j in range(2 * P):
            if not valid[j % P]:
                continue
            p = var[j]
            for g in range(gwords.shape[0]):
                h = _compose(p, gwords[g])
                pk = _first_member_pos(h, _inverse(h), steps, valid, prio,
                                       lex_pos, scheme_id, pair_ok, var2)
                pos = pk // 2
                inv = pk % 2
                cur = h if inv == 0 else _inverse(h)
                for t in range(1, pos + 1):
                    cur = _conj(cur, steps[t])
                idx = _scheme_index(cur, scheme_id, m, pair_rank)
                if lo <= idx < hi:
                    _set_bit(outbits, idx - lo)


@njit(cache=True, nogil=True)
def compose_stage_fast(in_words, gwords, g_at0, g_at15, gconj, steps, valid,
                       prio, mul, F, vmap, scheme_id, m, pair_rank, pair_ok,
                       lo, hi, outbits):
    """Shortcut composition stage: the member variant is chosen from the
    four boundary values (h(0), h(15), h^-1(0), h^-1(15)) via the
    precomputed F table, so each candidate costs one composition."""
    P = steps.shape[0]
    var = np.empty(2 * P, np.uint64)
    for wi in range(in_words.shape[0]):
        _fill_variants(in_words[wi], steps, var)
        for j in range(P):
            if not valid[j]:
                continue
            for inv_a in range(2):
                p = var[inv_a * P + j]
                pinv = var[(1 - inv_a) * P + j]
                for g in range(gwords.shape[0]):
                    gw = gwords[g]
                    h0 = int64((gw >> ((p & U15) << U2)) & U15)
                    h15 = int64((gw >> (((p >> uint64(60)) & U15) << U2)) & U15)
                    hi0 = int64((pinv >> uint64(4 * g_at0[g])) & U15)
                    hi15 = int64((pinv >> uint64(4 * g_at15[g])) & U15)
                    v = F[(((h0 << 4) | h15) << 8) | (hi0 << 4) | hi15]
                    c = v // 2
                    gcw = gwords[gconj[g, c]]
                    if v % 2 == 0:
                        q = _compose(var[inv_a * P + mul[j, c]], gcw)
                    else:
                        q = _compose(gcw, var[(1 - inv_a) * P + mul[j, c]])
                    idx = _scheme_index(q, scheme_id, m, pair_rank)
                    if lo <= idx < hi:
                        _set_bit(outbits, idx - lo)


@njit(cache=True, nogil=True)
def compose_stage_sparse(in_words, gwords, g_at0, g_at15, gconj, steps, valid,
                         prio, mul, F, vmap, scheme_id, m, pair_rank, pair_ok,
                         out_idx):
    """Shortcut composition emitting raw indices instead of dense bits."""
    P = steps.shape[0]
    var = np.empty(2 * P, np.uint64)
    n = 0
    for wi in range(in_words.shape[0]):
        _fill_variants(in_words[wi], steps, var)
        for j in range(P):
            if not valid[j]:
                continue
            for inv_a in range(2):
                p = var[inv_a * P + j]
                pinv = var[(1 - inv_a) * P + j]
                for g in range(gwords.shape[0]):
                    gw = gwords[g]
                    h0 = int64((gw >> ((p & U15) << U2)) & U15)
                    h15 = int64((gw >> (((p >> uint64(60)) & U15) << U2)) & U15)
                    hi0 = int64((pinv >> uint64(4 * g_at0[g])) & U15)
                    hi15 = int64((pinv >> uint64(4 * g_at15[g])) & U15)
                    v = F[(((h0 << 4) | h15) << 8) | (hi0 << 4) | hi15]
                    c = v // 2
                    gcw = gwords[gconj[g, c]]
                    if v % 2 == 0:
                        q = _compose(var[inv_a * P + mul[j, c]], gcw)
                    else:
                        q = _compose(gcw, var[(1 - inv_a) * P + mul[j, c]])
                    out_idx[n] = _scheme_index(q, scheme_id, m, pair_rank)
                    n += 1
    return n


@njit(cache=True, nogil=True)
def canonize_stage(bits, in_lo, steps, valid, prio, scheme_id, m, pairs,
                   pair_rank, pair_ok, out_lo, out_hi, outbits):
    """Replace each marked member by its class's minimal member."""
    var = np.empty(2 * steps.shape[0], np.uint64)
    for wi in range(bits.shape[0]):
        wbits = bits[wi]
        if wbits == U0:
            continue
        for b in range(64):
            if (wbits >> uint64(b)) & U1 == U0:
                continue
            idx = in_lo + wi * 64 + b
            w = _scheme_unrank(idx, scheme_id, m, pairs)
            mn = _min_member(w, steps, valid, prio, scheme_id, pair_ok, var)
            oidx = _scheme_index(mn, scheme_id, m, pair_rank)
            if out_lo <= oidx < out_hi:
                _set_bit(outbits, oidx - out_lo)


@njit(cache=True, nogil=True)
def canonize_indices(idxs, steps, valid, prio, scheme_id, m, pairs, pair_rank,
                     pair_ok, out_idx):
    var = np.empty(2 * steps.shape[0], np.uint64)
    for i in range(idxs.shape[0]):
        w = _scheme_unrank(idxs[i], scheme_id, m, pairs)
        mn = _min_member(w, steps, valid, prio, scheme_id, pair_ok, var)
        out_idx[i] = _scheme_index(mn, scheme_id, m, pair_rank)


@njit(cache=True, nogil=True)
def count_stage(bits, in_lo, steps, valid, prio, scheme_id, m, pairs, out2):
    """Accumulate (marked count, class-size sum) over the set bits."""
    P = steps.shape[0]
    var = np.empty(2 * P, np.uint64)
    ordbuf = np.empty(2 * P, np.uint64)
    red = 0
    tot = 0
    for wi in range(bits.shape[0]):
        wbits = bits[wi]
        if wbits == U0:
            continue
        for b in range(64):
            if (wbits >> uint64(b)) & U1 == U0:
                continue
            idx = in_lo + wi * 64 + b
            w = _scheme_unrank(idx, scheme_id, m, pairs)
            _fill_variants(w, steps, var)
            cnt = 0
            for j in range(2 * P):
                if valid[j % P]:
                    ordbuf[cnt] = var[j]
                    cnt += 1
            for a in range(1, cnt):
                v = ordbuf[a]
                bb = a - 1
                while bb >= 0 and ordbuf[bb] > v:
                    ordbuf[bb + 1] = ordbuf[bb]
                    bb -= 1
                ordbuf[bb + 1] = v
            distinct = 1
            for a in range(1, cnt):
                if ordbuf[a] != ordbuf[a - 1]:
                    distinct += 1
            red += 1
            tot += distinct
    out2[0] += red
    out2[1] += tot


@njit(cache=True, nogil=True)
def count_indices(idxs, steps, valid, prio, scheme_id, m, pairs, out2):
    P = steps.shape[0]
    var = np.empty(2 * P, np.uint64)
    ordbuf = np.empty(2 * P, np.uint64)
    red = 0
    tot = 0
    for i in range(idxs.shape[0]):
        w = _scheme_unrank(idxs[i], scheme_id, m, pairs)
        _fill_variants(w, steps, var)
        cnt = 0
        for j in range(2 * P):
            if valid[j % P]:
                ordbuf[cnt] = var[j]
                cnt += 1
        for a in range(1, cnt):
            v = ordbuf[a]
            bb = a - 1
            while bb >= 0 and ordbuf[bb] > v:
                ordbuf[bb + 1] = ordbuf[bb]
                bb -= 1
            ordbuf[bb + 1] = v
        distinct = 1
        for a in range(1, cnt):
            if ordbuf[a] != ordbuf[a - 1]:
                distinct += 1
        red += 1
        tot += distinct
    out2[0] += red
    out2[1] += tot


@njit(cache=True)
def bits_to_indices(bits, lo, out):
    n = 0
    for wi in range(bits.shape[0]):
        wbits = bits[wi]
        if wbits == U0:
            continue
        for b in range(64):
            if (wbits >> uint64(b)) & U1:
                out[n] = lo + wi * 64 + b
                n += 1
    return n


@njit(cache=True)
def unrank_many(idxs, scheme_id, m, pairs, out):
    for i in range(idxs.shape[0]):
        out[i] = _scheme_unrank(idxs[i], scheme_id, m, pairs)


@njit(cache=True)
def build_member_table(vmap, lex_pos, scheme_id, pair_ok, F):
    """F[(h0,h15,hi0,hi15) packed 4x4 bits] = pos*2+inv of the first
    enumeration-order variant that satisfies the scheme predicate.

    The predicate depends only on the boundary values q(0), q(15), q^-1(0),
    which relabelings transform pointwise, so the choice is computable from
    the four values alone.
    """
    for h0 in range(16):
        for h15 in range(16):
            for hi0 in range(16):
                for hi15 in range(16):
                    key = (((h0 << 4) | h15) << 8) | (hi0 << 4) | hi15
                    F[key] = -1
                    done = False
                    for oi in range(lex_pos.shape[0]):
                        if done:
                            break
                        pos = lex_pos[oi]
                        for inv in range(2):
                            if inv == 0:
                                q0 = int64(vmap[pos, h0])
                                q15 = int64(vmap[pos, h15])
                                qi0 = int64(vmap[pos, hi0])
                            else:
                                q0 = int64(vmap[pos, hi0])
                                q15 = int64(vmap[pos, hi15])
                                qi0 = int64(vmap[pos, h0])
                            if scheme_id == 1 or _is_member_vals(q0, q15, qi0, pair_ok):
                                F[key] = pos * 2 + inv
                                done = True
                                break
