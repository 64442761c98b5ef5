"""Minimal-circuit synthesis.

Three mechanisms, tried in order of size: a table walk for functions whose
canonical representative is stored (size <= k), a meet-in-the-middle shell
search for sizes k+1..L, and the embedded size-15 class data covering the
last 144 functions at n=4 on the unrestricted architecture.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _kernels as K
from . import benchdata, perm
from .errors import NotInTable, NotReachable, SizeExceedsL
from .gates import (
    Architecture,
    Circuit,
    gate_library,
    parse_circuit,
    simulate,
    transform_circuit,
)
from .symmetry import _variants, canonical, symmetry_group
from .table import CanonTable

TABLE_WALK = "TABLE_WALK"
MEET_IN_MIDDLE = "MEET_IN_MIDDLE"
HARDEST_FALLBACK = "HARDEST_FALLBACK"


@dataclass
class SynthesisResult:
    circuit: Circuit
    size: int
    method: str
    search_stats: dict = field(default_factory=dict)


def _check_input(f: int, t: CanonTable) -> None:
    if not perm.is_perm_word(f, t.n):
        raise NotReachable(f"word {f:#018x} is not a width-{t.n} permutation")


def reconstruct(f: int, t: CanonTable, stats: dict | None = None) -> Circuit:
    """Rebuild a minimal circuit by repeatedly stripping the stored gate.

    Each step canonicalizes the current function, looks its representative
    up, conjugates the annotated gate back into the current frame, and
    strips it on the side given by the placement flag (flipped when the
    witness inverted).  Depth of the walk equals the size of f.
    """
    _check_input(f, t)
    group = symmetry_group(t.n, t.arch)
    library = gate_library(t.n, t.arch)
    gp = t.group_pack
    left = []
    right = []
    cur = f
    while True:
        rep, pos, inv = K.canon_one(np.uint64(cur), gp.steps, gp.valid, gp.prio)
        e = t.lookup(int(rep))
        if stats is not None:
            stats["canonicalizations"] = stats.get("canonicalizations", 0) + 1
            stats["lookups"] = stats.get("lookups", 0) + 1
        if e is None:
            raise NotInTable(f"canonical representative {int(rep):#018x} not stored")
        if e.size == 0:
            break
        # the stored gate lives in the representative's frame; pull it back
        sigma_inv = group.inverse_perm(group.chain_perms[pos])
        g = library[e.gate_id].relabel(sigma_inv)
        if (e.placement ^ inv) == 0:  # effective IS_LAST_GATE
            right.append(g)
            cur = perm.compose(cur, g.word)
        else:
            left.append(g)
            cur = perm.compose(g.word, cur)
        if stats is not None:
            stats["compositions"] = stats.get("compositions", 0) + 1
    return Circuit(tuple(left) + tuple(reversed(right)), t.n)


def find_min_circuit(f: int, t: CanonTable, L: int | None = None) -> SynthesisResult:
    """Provably minimal circuit for f, for sizes up to L (k <= L <= 2k).

    Beyond table reach, candidate second factors g are tried in increasing
    size i: reduced representatives of A_i in ascending key order, each
    expanded through its equivalence class in the fixed witness order; the
    first g with canonical(f after g) stored yields size exactly k + i.
    """
    _check_input(f, t)
    k = t.k
    if L is None:
        L = 2 * k
    if not k <= L <= 2 * k:
        raise ValueError(f"L must satisfy k <= L <= 2k (k={k}, L={L})")
    stats = {"compositions": 0, "canonicalizations": 0, "lookups": 0}
    gp = t.group_pack
    group = symmetry_group(t.n, t.arch)

    rep, _, _ = K.canon_one(np.uint64(f), gp.steps, gp.valid, gp.prio)
    stats["canonicalizations"] += 1
    stats["lookups"] += 1
    if t.lookup(int(rep)) is not None:
        c = reconstruct(f, t, stats)
        return SynthesisResult(c, len(c), TABLE_WALK, stats)

    kstats = np.zeros(3, np.int64)
    for i in range(1, L - k + 1):
        ri, pos, inv = K.shell_scan(
            np.uint64(f), t.levels[i], gp.steps, gp.valid, gp.prio,
            gp.lex_pos, t.keys, t.anns, kstats,
        )
        if ri < 0:
            continue
        stats["compositions"] += int(kstats[0])
        stats["canonicalizations"] += int(kstats[1])
        stats["lookups"] += int(kstats[2])
        stats["shell"] = i
        g_base = int(t.levels[i][ri])
        if inv:
            g_base = perm.inverse(g_base)
        gword = _conj_by_pos(g_base, group, pos)
        h = perm.compose(gword, f)
        c_g = reconstruct(gword, t, stats)
        c_h = reconstruct(h, t, stats)
        gates = tuple(reversed(c_g.gates)) + c_h.gates
        return SynthesisResult(Circuit(gates, t.n), len(gates), MEET_IN_MIDDLE, stats)

    stats["compositions"] += int(kstats[0])
    stats["canonicalizations"] += int(kstats[1])
    stats["lookups"] += int(kstats[2])
    raise SizeExceedsL(f"no circuit of size <= {L} found (k={k})")


def _conj_by_pos(word: int, group, pos: int) -> int:
    """Conjugate along the chain up to position pos (cheap adjacent steps)."""
    cur = word
    for j in range(1, pos + 1):
        cur = perm.conjugate_adjacent(cur, group.chain_steps[j])
    return cur


@lru_cache(maxsize=1)
def _hardest_rows():
    """Parsed, simulation-verified size-15 class data: (word, canon, circuit)."""
    rows = []
    for values, _, text in benchdata.HARDEST:
        word = perm.encode(values)
        circuit = parse_circuit(text)
        if simulate(circuit) != word or len(circuit) != benchdata.MAX_SIZE_FULL:
            raise AssertionError("embedded size-15 circuit fails verification")
        group = symmetry_group(4, Architecture.FULL)
        rep, _ = canonical(word, group)
        rows.append((word, rep, circuit))
    return tuple(rows)


def classify_hardest(f: int) -> SynthesisResult | None:
    """Size-15 fallback at n=4 FULL; None when f is not a size-15 function.

    Matches canonical(f) against the five stored class representatives and
    transforms the stored circuit by the relabeling/inversion that carries
    the representative to f.
    """
    if not perm.is_perm_word(f, 4):
        raise NotReachable(f"word {f:#018x} is not a width-4 permutation")
    group = symmetry_group(4, Architecture.FULL)
    frep, _ = canonical(f, group)
    for word, rep, circuit in _hardest_rows():
        if rep != frep:
            continue
        for member, pos, inverted in _variants(word, group):
            if member == f:
                sigma = group.chain_perms[pos]
                c = transform_circuit(circuit, sigma, inverted)
                return SynthesisResult(c, len(c), HARDEST_FALLBACK, {})
        raise AssertionError("canonical match without a class member match")
    return None


def synthesize(f: int, t: CanonTable, L: int | None = None) -> SynthesisResult:
    """find_min_circuit with the size-15 fallback appended where it applies."""
    try:
        return find_min_circuit(f, t, L)
    except SizeExceedsL:
        if t.n == 4 and t.arch is Architecture.FULL:
            r = classify_hardest(f)
            if r is not None:
                return r
        raise


def min_sizes_batch(
    words: np.ndarray, t: CanonTable, max_shell: int | None = None
) -> np.ndarray:
    """Size-only synthesis for an array of words (no circuits built).

    Entries are -1 where the size exceeds k + max_shell.
    """
    if max_shell is None:
        max_shell = t.k
    max_shell = min(max_shell, len(t.levels) - 1)
    gp = t.group_pack
    lists = np.concatenate([t.levels[i] for i in range(1, max_shell + 1)]) \
        if max_shell >= 1 else np.empty(0, np.uint64)
    offsets = np.zeros(max_shell + 2, np.int64)
    for i in range(1, max_shell + 1):
        offsets[i + 1] = offsets[i] + t.levels[i].shape[0]
    out = np.empty(words.shape[0], np.int64)
    K.min_sizes(
        words.astype(np.uint64), gp.steps, gp.valid, gp.prio, gp.lex_pos,
        t.keys, t.anns, lists, offsets, max_shell, t.k, out,
    )
    return out
