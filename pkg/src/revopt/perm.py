"""Word-packed permutation arithmetic.

A reversible n-bit function (n in {2, 3, 4}) is stored in a single 64-bit
word, four bits per output value: nibble i holds f(i).  For n < 4 the unused
high nibbles carry the identity pattern (nibble i = i) so that every routine
below works unchanged at any width.
"""

from __future__ import annotations

from math import factorial

from .errors import BadWidth, NotAPermutation, OutOfRange

MASK64 = (1 << 64) - 1

#: The identity function under the nibble layout (nibble i = i).
IDENTITY = 0xFEDCBA9876543210

#: Adjacent line swaps generating the relabeling group at n = 4.
ADJACENT_TRANSPOSITIONS = ((0, 1), (1, 2), (2, 3))

# Masks for conjugation by the adjacent transposition (j, j+1).  The first
# triple moves nibbles between index positions whose bits j and j+1 differ,
# the second swaps bits j and j+1 inside every nibble value.
_POS_MASKS = (
    (0xF00FF00FF00FF00F, 0x00F000F000F000F0, 0x0F000F000F000F00, 4),
    (0xFF0000FFFF0000FF, 0x0000FF000000FF00, 0x00FF000000FF0000, 8),
    (0xFFFF00000000FFFF, 0x00000000FFFF0000, 0x0000FFFF00000000, 16),
)
_VAL_MASKS = tuple(
    (
        MASK64 ^ (0x3333333333333333 << j),
        0x1111111111111111 << j,
        0x2222222222222222 << j,
    )
    for j in range(3)
)


def check_width(n: int) -> None:
    if n not in (2, 3, 4):
        raise BadWidth(f"unsupported bit-width {n}")


def encode(values, n: int = 4) -> int:
    """Pack a value list into a permutation word."""
    check_width(n)
    size = 1 << n
    values = list(values)
    if len(values) != size or sorted(values) != list(range(size)):
        raise NotAPermutation(f"not a permutation of 0..{size - 1}: {values}")
    word = 0
    for i, v in enumerate(values):
        word |= v << (4 * i)
    for i in range(size, 16):
        word |= i << (4 * i)
    return word


def decode(word: int, n: int = 4) -> list[int]:
    """Unpack the low 2^n nibbles of a permutation word."""
    check_width(n)
    return [(word >> (4 * i)) & 15 for i in range(1 << n)]


def is_perm_word(word: int, n: int = 4) -> bool:
    """True iff the word satisfies the layout invariants for width n."""
    if n not in (2, 3, 4):
        return False
    size = 1 << n
    seen = 0
    for i in range(16):
        v = (word >> (4 * i)) & 15
        if i >= size:
            if v != i:
                return False
        else:
            if v >= size:
                return False
            seen |= 1 << v
    return seen == (1 << size) - 1


def compose(p: int, q: int) -> int:
    """Apply p first, then q: compose(p, q)(x) = q(p(x))."""
    r = 0
    for i in range(16):
        r |= ((q >> (((p >> (4 * i)) & 15) << 2)) & 15) << (4 * i)
    return r


def inverse(p: int) -> int:
    q = 0
    for i in range(16):
        q |= i << (((p >> (4 * i)) & 15) << 2)
    return q


def apply_word(p: int, x: int) -> int:
    """Evaluate the packed function at a single point."""
    return (p >> (4 * x)) & 15


def conjugate_adjacent(p: int, t) -> int:
    """Conjugate by the relabeling that swaps the two lines of t.

    The result maps x to s(p(s(x))) where s swaps bits t[0] and t[1]; applying
    the same transposition twice returns p.
    """
    j = _transposition_index(t)
    pk, pa, pb, s = _POS_MASKS[j]
    p = (p & pk) | ((p & pa) << s) | ((p & pb) >> s)
    vk, vl, vh = _VAL_MASKS[j]
    return (p & vk) | ((p & vl) << 1) | ((p & vh) >> 1)


def _transposition_index(t) -> int:
    if t in (0, 1, 2):
        return t
    try:
        j = ADJACENT_TRANSPOSITIONS.index(tuple(t))
    except ValueError:
        raise ValueError(f"not an adjacent transposition: {t!r}") from None
    return j


def order_key(p: int) -> int:
    """The total-order key: the raw word, compared as an unsigned integer."""
    return p & MASK64


def rank_perm(values) -> int:
    """Lexicographic rank of a permutation of {0..m-1} in [0, m!)."""
    values = list(values)
    m = len(values)
    if sorted(values) != list(range(m)):
        raise NotAPermutation(f"not a permutation of 0..{m - 1}")
    rank = 0
    for i in range(m):
        smaller = sum(1 for j in range(i + 1, m) if values[j] < values[i])
        rank = rank * (m - i) + smaller
    return rank


def unrank_perm(r: int, m: int) -> list[int]:
    """Inverse of rank_perm: the permutation of {0..m-1} at rank r."""
    if not 0 <= r < factorial(m):
        raise OutOfRange(f"rank {r} outside [0, {m}!)")
    digits = []
    for i in range(1, m + 1):
        r, d = divmod(r, i)
        digits.append(d)
    digits.reverse()
    pool = list(range(m))
    return [pool.pop(d) for d in digits]


def format_truth_table(values) -> str:
    """Bracketed decimal truth-table text, e.g. "[0,1,3,2]"."""
    return "[" + ",".join(str(v) for v in values) + "]"


def parse_truth_table(text: str, n: int | None = None) -> tuple[int, int]:
    """Parse truth-table text into (word, n).

    Accepts the bracket-delimited comma-separated decimal form.  If n is not
    given it is inferred from the number of entries.
    """
    s = text.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise NotAPermutation(f"truth table must be bracket-delimited: {text!r}")
    try:
        values = [int(v) for v in s[1:-1].split(",")]
    except ValueError:
        raise NotAPermutation(f"bad truth-table entry in {text!r}") from None
    if n is None:
        size = len(values)
        n = size.bit_length() - 1
        if 1 << n != size:
            raise NotAPermutation(f"truth table length {size} is not a power of two")
    return encode(values, n), n
