"""Equivalence classes under simultaneous line relabeling and inversion.

Two functions are equivalent when one is a relabeling-conjugate of the other
or of its inverse; equivalent functions need the same number of gates.  The
canonical representative of a class is its smallest member under the unsigned
word order.

Relabeling conjugates are enumerated along a fixed chain of adjacent line
transpositions (plain-changes order) that visits every relabeling once, so
each enumeration step is a single cheap conjugation.  The restricted (LNN)
group reuses the same chain with only its member positions marked valid.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations

from . import perm
from .errors import ClosureViolation
from .gates import Architecture, conjugate_by_perm, sigma_word


def _chain_steps(m: int) -> list[int]:
    """Swap positions of the Steinhaus-Johnson-Trotter enumeration of S_m."""
    # Straightforward SJT with directed elements; returns m!-1 adjacent swap
    # positions (the left index of each swap).
    elems = list(range(m))
    dirs = [-1] * m
    steps = []
    while True:
        mobile = -1
        mobile_idx = -1
        for i, e in enumerate(elems):
            j = i + dirs[e]
            if 0 <= j < m and elems[j] < e and e > mobile:
                mobile = e
                mobile_idx = i
        if mobile < 0:
            break
        j = mobile_idx + dirs[mobile]
        steps.append(min(mobile_idx, j))
        elems[mobile_idx], elems[j] = elems[j], elems[mobile_idx]
        for e in elems:
            if e > mobile:
                dirs[e] = -dirs[e]
    return steps


@dataclass(frozen=True)
class EquivWitness:
    """Recipe reconstructing the original function from a class member.

    apply_witness(member, w) conjugates by w.sigma (and inverts first when
    w.inverted) to reproduce the function the member was derived from.
    """

    sigma: tuple[int, ...]
    inverted: bool


def apply_witness(word: int, witness: EquivWitness) -> int:
    w = perm.inverse(word) if witness.inverted else word
    return conjugate_by_perm(w, witness.sigma)


class SymmetryGroup:
    """Relabeling group (plus inversion) for one width and architecture.

    Exposes the chain data used by both the pure-Python routines here and the
    compiled kernels: per chain position, the accumulated line permutation,
    its word, validity in this group, and its rank in the fixed enumeration
    order (relabelings in lexicographic order of sigma, non-inverted before
    inverted).
    """

    def __init__(self, n: int, arch: Architecture = Architecture.FULL):
        perm.check_width(n)
        self.n = n
        self.arch = arch
        self.include_inversion = True

        steps = _chain_steps(n)
        chain_perms = [tuple(range(n))]
        for j in steps:
            prev = chain_perms[-1]
            # sigma_{k+1} = sigma_k followed by the swap of lines (j, j+1)
            swap = {j: j + 1, j + 1: j}
            chain_perms.append(tuple(swap.get(v, v) for v in prev))
        assert len(set(chain_perms)) == len(chain_perms)

        if arch is Architecture.LNN:
            reversal = tuple(range(n - 1, -1, -1))
            allowed = {tuple(range(n)), reversal}
        else:
            allowed = set(chain_perms)

        self.chain_steps = [-1] + steps  # steps[k] turns position k-1 into k
        self.chain_perms = chain_perms
        self.valid = [p in allowed for p in chain_perms]
        self.sigma_words = [sigma_word(p + tuple(range(n, 4))) for p in chain_perms]
        lex = {p: r for r, p in enumerate(sorted(allowed))}
        self.lex_rank = [lex.get(p, -1) for p in chain_perms]
        self.relabelings = sorted(allowed)
        self._pos_of_perm = {p: i for i, p in enumerate(chain_perms)}

    @property
    def order(self) -> int:
        return 2 * len(self.relabelings)

    def positions(self):
        """Valid chain positions in fixed enumeration order (lex sigma)."""
        pairs = [(self.lex_rank[i], i) for i in range(len(self.chain_perms)) if self.valid[i]]
        return [i for _, i in sorted(pairs)]

    def perm_at(self, pos: int) -> tuple[int, ...]:
        return self.chain_perms[pos]

    def inverse_perm(self, sigma) -> tuple[int, ...]:
        inv = [0] * len(sigma)
        for i, v in enumerate(sigma):
            inv[v] = i
        return tuple(inv)

    def witness_for(self, pos: int, inverted: bool) -> EquivWitness:
        """Witness for the member produced at chain position pos.

        The member at (pos, inverted) is the sigma_pos-conjugate of the
        (possibly inverted) function, so reconstruction conjugates by the
        inverse relabeling.
        """
        return EquivWitness(self.inverse_perm(self.chain_perms[pos]), inverted)


@lru_cache(maxsize=None)
def symmetry_group(n: int, arch: Architecture = Architecture.FULL) -> SymmetryGroup:
    return SymmetryGroup(n, arch)


def _variants(f: int, group: SymmetryGroup):
    """All (word, pos, inverted) along the chain, valid positions only,
    in fixed enumeration order."""
    out = []
    for inverted, start in ((False, f), (True, perm.inverse(f))):
        cur = start
        for k, step in enumerate(group.chain_steps):
            if k:
                cur = perm.conjugate_adjacent(cur, step)
            if group.valid[k]:
                out.append((cur, k, inverted))
    out.sort(key=lambda t: (group.lex_rank[t[1]] * 2 + t[2]))
    return out


def equivalence_class(f: int, group: SymmetryGroup):
    """Duplicate-free [(member, witness)] over all relabelings and inversion."""
    seen = set()
    out = []
    for word, pos, inverted in _variants(f, group):
        if word not in seen:
            seen.add(word)
            out.append((word, group.witness_for(pos, inverted)))
    return out


def canonical(f: int, group: SymmetryGroup):
    """(representative, witness): the word-order minimum of the class.

    Ties between witnesses are broken by the fixed enumeration order, so the
    returned witness is deterministic.
    """
    best = None
    best_pos = None
    best_inv = None
    for word, pos, inverted in _variants(f, group):
        if best is None or word < best:
            best, best_pos, best_inv = word, pos, inverted
    return best, group.witness_for(best_pos, best_inv)


def gate_conjugation_table(group: SymmetryGroup, library):
    """Map (gate index, sigma) -> gate index of the sigma-conjugate.

    Raises ClosureViolation if any conjugate escapes the library.
    """
    by_word = {g.word: i for i, g in enumerate(library)}
    table = {}
    for gi, g in enumerate(library):
        for sigma in group.relabelings:
            w = conjugate_by_perm(g.word, sigma + tuple(range(group.n, 4)))
            if w not in by_word:
                raise ClosureViolation(f"conjugate of {g} by {sigma} not in library")
            table[gi, sigma] = by_word[w]
    return table
