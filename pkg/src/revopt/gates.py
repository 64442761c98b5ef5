"""Gate libraries, circuits, simulation, and the circuit text grammar.

Gates are NOT/CNOT/TOF/TOF4: each flips its target bit iff all control bits
are 1.  Line a is the least-significant bit of the truth-table row index.
Circuits are applied left to right: the first listed gate acts on the state
first.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from itertools import combinations

from . import perm
from .errors import (
    ArityMismatch,
    BadWidth,
    CircuitSyntaxError,
    DuplicateLine,
    LineOutOfWidth,
)

LINE_NAMES = "abcd"

KIND_ARITY = {"NOT": 1, "CNOT": 2, "TOF": 3, "TOF4": 4}


class Architecture(Enum):
    """FULL admits every line subset; LNN only contiguous runs of a,b,c,d."""

    FULL = "full"
    LNN = "lnn"


@dataclass(frozen=True)
class Gate:
    kind: str
    controls: tuple[int, ...]  # sorted line indices
    target: int
    word: int
    width: int = 4

    @staticmethod
    def make(kind: str, controls, target: int, width: int = 4) -> "Gate":
        controls = tuple(sorted(controls))
        if len(controls) + 1 != KIND_ARITY[kind]:
            raise ArityMismatch(f"{kind} takes {KIND_ARITY[kind]} lines")
        if target in controls:
            raise DuplicateLine(f"target line repeats a control in {kind}")
        if max(controls, default=0) >= width or target >= width:
            raise LineOutOfWidth(f"line beyond width {width} in {kind}")
        word = 0
        cmask = 0
        for c in controls:
            cmask |= 1 << c
        tbit = 1 << target
        # rows beyond 2^width keep the identity embedding of perm words
        for x in range(16):
            y = x ^ tbit if x < (1 << width) and (x & cmask) == cmask else x
            word |= y << (4 * x)
        return Gate(kind, controls, target, word, width)

    @property
    def lines(self) -> frozenset[int]:
        return frozenset(self.controls) | {self.target}

    def relabel(self, sigma) -> "Gate":
        """Rename every line l to sigma[l]."""
        return Gate.make(
            self.kind, [sigma[c] for c in self.controls], sigma[self.target], self.width
        )

    def text(self) -> str:
        args = ",".join(LINE_NAMES[l] for l in self.controls + (self.target,))
        return f"{self.kind}({args})"

    def __str__(self) -> str:
        return self.text()


@dataclass(frozen=True)
class Circuit:
    gates: tuple[Gate, ...]
    width: int

    def __len__(self) -> int:
        return len(self.gates)

    def __str__(self) -> str:
        return format_circuit(self)


def _is_contiguous(lines: frozenset[int]) -> bool:
    return max(lines) - min(lines) + 1 == len(lines)


def gate_library(n: int, arch: Architecture = Architecture.FULL) -> list[Gate]:
    """Deterministic, duplicate-free list of admissible gates at width n."""
    perm.check_width(n)
    gates = []
    for kind, arity in KIND_ARITY.items():
        if arity > n:
            continue
        for controls in combinations(range(n), arity - 1):
            for target in range(n):
                if target in controls:
                    continue
                g = Gate.make(kind, controls, target, n)
                if arch is Architecture.LNN and not _is_contiguous(g.lines):
                    continue
                gates.append(g)
    return gates


def simulate(c: Circuit) -> int:
    """Fold the circuit into one permutation word, first gate applied first."""
    acc = perm.IDENTITY
    for g in c.gates:
        acc = perm.compose(acc, g.word)
    return acc


_TERM_RE = re.compile(r"(NOT|CNOT|TOF4|TOF)\(([a-d](?:\s*,\s*[a-d])*)\)")


def parse_circuit(text: str, n: int = 4) -> Circuit:
    """Parse whitespace-separated gate terms KIND(line{,line}).

    The last argument is the target, the preceding ones are controls.
    """
    perm.check_width(n)
    gates = []
    pos = 0
    length = len(text)
    while pos < length:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TERM_RE.match(text, pos)
        if not m:
            raise CircuitSyntaxError(f"unrecognized gate term in {text!r}", pos)
        kind = m.group(1)
        lines = [LINE_NAMES.index(s.strip()) for s in m.group(2).split(",")]
        if len(lines) != KIND_ARITY[kind]:
            raise ArityMismatch(f"{kind} takes {KIND_ARITY[kind]} lines", pos)
        if len(set(lines)) != len(lines):
            raise DuplicateLine(f"repeated line in {m.group(0)}", pos)
        if max(lines) >= n:
            raise LineOutOfWidth(f"line beyond width {n} in {m.group(0)}", pos)
        gates.append(Gate.make(kind, lines[:-1], lines[-1], n))
        pos = m.end()
    return Circuit(tuple(gates), n)


def format_circuit(c: Circuit) -> str:
    """Canonical whitespace form; controls printed in line order."""
    return " ".join(g.text() for g in c.gates)


def transform_circuit(c: Circuit, sigma, invert: bool = False) -> Circuit:
    """Relabel every gate's lines by sigma; if invert, also reverse the order.

    simulate(result) equals the sigma-conjugate of simulate(c), inverted when
    requested (gates are involutions, so reversal inverts the function).
    """
    gates = tuple(g.relabel(sigma) for g in c.gates)
    if invert:
        gates = gates[::-1]
    return Circuit(gates, c.width)


def sigma_word(sigma) -> int:
    """The permutation word of the bit relabeling x_i -> x_sigma(i).

    Bit i of the argument becomes bit sigma[i] of the result.
    """
    n = len(sigma)
    values = []
    for x in range(1 << n):
        y = 0
        for i in range(n):
            if x >> i & 1:
                y |= 1 << sigma[i]
        values.append(y)
    return perm.encode(values, n if n != 1 else 2)


def conjugate_by_perm(word: int, sigma) -> int:
    """Conjugate a function word by the line relabeling sigma.

    The result maps x to s(word(s_inv(x))) where s = sigma_word(sigma); for an
    adjacent transposition this agrees with perm.conjugate_adjacent.
    """
    s = sigma_word(sigma)
    return perm.compose(perm.compose(perm.inverse(s), word), s)
