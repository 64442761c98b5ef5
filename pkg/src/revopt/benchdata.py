"""Embedded reference data: known census counts, benchmark functions with
their optimal circuits, and the five hardest 4-bit functions.

All circuits below are re-simulated against their specifications at import
time by the test suite; nothing here is trusted blindly.
"""

from __future__ import annotations

from .gates import Architecture

#: Known per-size counts of canonical representatives ("reduced functions"),
#: sizes 0..7, for each architecture at n=4.
REDUCED_COUNTS = {
    Architecture.FULL: (1, 4, 33, 425, 6538, 101983, 1482686, 19466575),
    Architecture.LNN: (1, 10, 100, 1083, 11885, 124628, 1226080, 11201218),
}

#: Known per-size total function counts (class-size sums), sizes 0..7.
TOTAL_COUNTS = {
    Architecture.FULL: (1, 32, 784, 16204, 294507, 4807552, 70763560, 932651938),
    Architecture.LNN: (1, 20, 303, 3947, 46108, 493788, 4886991, 44754539),
}

#: Hash-table load factor targets (initial sizing / growth trigger).
INITIAL_LOAD = 0.6
MAX_LOAD = 0.85

#: Sizes 0..10 histogram of the 322,560 linear (NOT/CNOT-computable) 4-bit
#: functions, and the published mean size of a uniform random 4-bit function.
LINEAR_HISTOGRAM = (1, 16, 162, 1206, 6589, 26182, 72062, 118424, 84225, 13555, 138)
LINEAR_TOTAL = 322560
RANDOM_MEAN_SIZE = 11.93937
RANDOM_MODE_SIZE = 12

#: Largest minimal size of any 4-bit function on the unrestricted
#: architecture; exactly 144 functions (5 equivalence classes) attain it.
MAX_SIZE_FULL = 15
HARDEST_FUNCTION_COUNT = 144

#: The five equivalence-class representatives of minimal size 15, each with
#: its class size and a 15-gate implementation.
HARDEST = (
    (
        [1, 5, 0, 8, 9, 11, 2, 15, 3, 12, 4, 6, 10, 14, 13, 7],
        24,
        "CNOT(a,c) CNOT(c,d) CNOT(d,a) TOF(b,d,c) CNOT(a,b) TOF(c,d,b) "
        "TOF4(a,b,c,d) CNOT(c,a) NOT(b) NOT(c) CNOT(a,d) TOF(b,d,c) "
        "TOF(b,c,a) TOF(a,c,b) NOT(c)",
    ),
    (
        [1, 9, 0, 4, 10, 8, 2, 11, 3, 15, 5, 12, 7, 14, 13, 6],
        24,
        "NOT(d) CNOT(d,c) TOF4(a,c,d,b) TOF(a,d,c) TOF(b,d,a) TOF(c,d,b) "
        "TOF(b,c,d) TOF(a,d,b) CNOT(a,d) NOT(a) NOT(b) NOT(c) "
        "TOF4(b,c,d,a) CNOT(b,c) TOF(a,d,c)",
    ),
    (
        [3, 1, 7, 13, 11, 0, 8, 15, 2, 5, 10, 6, 9, 14, 12, 4],
        48,
        "NOT(b) CNOT(b,a) TOF(a,b,c) TOF(a,d,b) CNOT(c,d) TOF4(b,c,d,a) "
        "TOF4(a,b,c,d) CNOT(a,c) CNOT(c,b) TOF(b,d,c) NOT(a) NOT(b) "
        "CNOT(c,d) CNOT(d,a) TOF(a,b,c)",
    ),
    (
        [3, 1, 11, 7, 8, 0, 9, 5, 2, 6, 15, 13, 14, 4, 10, 12],
        24,
        "CNOT(c,b) CNOT(a,d) CNOT(d,a) TOF4(a,b,c,d) TOF(a,b,c) TOF(b,c,a) "
        "TOF(a,d,b) CNOT(b,c) NOT(d) NOT(c) NOT(a) TOF(c,d,b) TOF(b,c,d) "
        "CNOT(d,c) CNOT(a,c)",
    ),
    (
        [3, 5, 11, 1, 8, 0, 9, 7, 2, 6, 14, 13, 10, 4, 12, 15],
        24,
        "CNOT(c,b) TOF(b,d,a) CNOT(a,d) CNOT(d,c) TOF(b,c,a) TOF(a,c,b) "
        "TOF(a,d,c) TOF(b,c,a) NOT(d) NOT(c) NOT(b) CNOT(d,a) TOF(b,c,d) "
        "CNOT(d,b) TOF(a,b,c)",
    ),
)

#: A size-15 function that is not itself a listed representative: it is the
#: inverse of the third HARDEST entry relabeled by (a,b,c,d) -> (c,a,b,d).
HARDEST_NONCANONICAL_EXAMPLE = [6, 8, 15, 13, 4, 0, 12, 1, 3, 9, 11, 14, 10, 2, 5, 7]

#: Benchmark functions: name -> (truth table, expected optimal size per
#: architecture, known optimal circuit text per architecture).
BENCHMARKS = {
    "4_49": {
        "spec": [15, 1, 12, 3, 5, 6, 8, 7, 0, 10, 13, 9, 2, 4, 14, 11],
        "size": {Architecture.FULL: 12, Architecture.LNN: 16},
        "circuit": {
            Architecture.FULL: "NOT(a) CNOT(c,a) CNOT(a,d) TOF(a,b,d) CNOT(d,a) "
            "TOF(c,d,b) TOF(a,d,c) TOF(b,c,a) TOF(a,b,d) NOT(a) CNOT(d,b) CNOT(d,c)",
            Architecture.LNN: "CNOT(d,c) TOF(c,d,b) CNOT(b,a) NOT(c) TOF(b,c,d) "
            "CNOT(c,b) TOF4(a,b,c,d) TOF4(a,c,d,b) TOF(a,b,c) CNOT(a,b) NOT(a) "
            "CNOT(c,d) TOF(b,d,c) TOF(b,c,a) TOF(a,c,b) NOT(c)",
        },
    },
    "4bit-7-8": {
        "spec": [0, 1, 2, 3, 4, 5, 6, 8, 7, 9, 10, 11, 12, 13, 14, 15],
        "size": {Architecture.FULL: 7, Architecture.LNN: 7},
        "circuit": {
            Architecture.FULL: "CNOT(d,b) CNOT(d,a) CNOT(c,d) TOF4(a,b,d,c) "
            "CNOT(c,d) CNOT(d,b) CNOT(d,a)",
            Architecture.LNN: "CNOT(d,c) TOF(c,d,b) TOF4(b,c,d,a) TOF4(a,b,c,d) "
            "TOF4(b,c,d,a) TOF(c,d,b) CNOT(d,c)",
        },
    },
    "decode42": {
        "spec": [1, 2, 4, 8, 0, 3, 5, 6, 7, 9, 10, 11, 12, 13, 14, 15],
        "size": {Architecture.FULL: 10, Architecture.LNN: 13},
        "circuit": {
            Architecture.FULL: "CNOT(c,b) CNOT(d,a) CNOT(c,a) TOF(a,d,b) CNOT(b,c) "
            "TOF4(a,b,c,d) TOF(b,d,c) CNOT(c,a) CNOT(a,b) NOT(a)",
            Architecture.LNN: "NOT(d) NOT(c) CNOT(c,b) TOF(b,d,c) TOF(b,c,a) "
            "TOF4(a,c,d,b) TOF4(a,b,c,d) CNOT(d,c) TOF(b,c,a) TOF4(a,c,d,b) "
            "NOT(d) TOF(c,d,b) NOT(c)",
        },
    },
    "hwb4": {
        "spec": [0, 2, 4, 12, 8, 5, 9, 11, 1, 6, 10, 13, 3, 14, 7, 15],
        "size": {Architecture.FULL: 11, Architecture.LNN: 16},
        "circuit": {
            Architecture.FULL: "CNOT(b,d) CNOT(d,a) CNOT(a,c) CNOT(c,d) TOF(a,d,b) "
            "TOF(b,c,a) CNOT(d,c) CNOT(c,b) TOF(a,c,b) CNOT(a,c) CNOT(b,d)",
            Architecture.LNN: "TOF(a,b,c) CNOT(c,d) CNOT(b,c) TOF(b,c,a) "
            "TOF4(a,c,d,b) NOT(a) CNOT(a,b) CNOT(d,c) CNOT(b,a) TOF(b,c,d) "
            "TOF(b,c,a) TOF4(a,c,d,b) TOF(a,b,c) NOT(b) CNOT(c,d) TOF(a,b,c)",
        },
    },
    "imark": {
        "spec": [4, 5, 2, 14, 0, 3, 6, 10, 11, 8, 15, 1, 12, 13, 7, 9],
        "size": {Architecture.FULL: 7, Architecture.LNN: 11},
        "circuit": {
            Architecture.FULL: "TOF(c,d,a) TOF(a,b,d) CNOT(d,c) CNOT(b,c) "
            "CNOT(d,a) TOF(a,c,b) NOT(c)",
            Architecture.LNN: "TOF4(b,c,d,a) TOF4(a,b,c,d) CNOT(b,c) TOF4(a,b,c,d) "
            "TOF4(b,c,d,a) CNOT(d,c) TOF(a,c,b) CNOT(b,a) TOF(c,d,b) NOT(c) CNOT(b,a)",
        },
    },
    "mperk": {
        "spec": [3, 11, 2, 10, 0, 7, 1, 6, 15, 8, 14, 9, 13, 5, 12, 4],
        "size": {Architecture.FULL: 9, Architecture.LNN: 11},
        "circuit": {
            Architecture.FULL: "NOT(c) CNOT(d,c) TOF(c,d,b) TOF(a,c,d) CNOT(b,a) "
            "CNOT(d,a) CNOT(c,a) CNOT(a,b) CNOT(b,c)",
            Architecture.LNN: "CNOT(d,c) TOF(a,c,b) CNOT(b,a) TOF(c,d,b) CNOT(a,b) "
            "NOT(c) TOF(b,c,d) CNOT(c,b) CNOT(b,a) TOF(c,d,b) CNOT(b,c)",
        },
    },
    "oc5": {
        "spec": [6, 0, 12, 15, 7, 1, 5, 2, 4, 10, 13, 3, 11, 8, 14, 9],
        "size": {Architecture.FULL: 11, Architecture.LNN: 14},
        "circuit": {
            Architecture.FULL: "TOF(b,d,c) TOF(c,d,b) TOF(a,b,c) NOT(a) CNOT(d,b) "
            "CNOT(c,a) CNOT(a,c) TOF(a,b,d) CNOT(c,a) CNOT(c,b) TOF4(a,b,d,c)",
            Architecture.LNN: "CNOT(d,c) TOF4(a,c,d,b) CNOT(c,b) TOF(b,d,c) "
            "CNOT(b,a) CNOT(b,c) TOF(b,c,d) CNOT(c,b) NOT(a) CNOT(a,b) CNOT(b,c) "
            "TOF(b,c,a) TOF4(b,c,d,a) TOF4(a,b,d,c)",
        },
    },
    "oc6": {
        "spec": [9, 0, 2, 15, 11, 6, 7, 8, 14, 3, 4, 13, 5, 1, 12, 10],
        "size": {Architecture.FULL: 12, Architecture.LNN: 14},
        "circuit": {
            Architecture.FULL: "TOF4(a,b,c,d) TOF(b,d,c) CNOT(d,a) TOF(b,c,d) "
            "CNOT(c,b) CNOT(b,c) TOF(a,d,c) TOF(b,c,a) TOF(a,b,c) NOT(a) "
            "CNOT(d,b) CNOT(a,d)",
            Architecture.LNN: "TOF(b,c,a) TOF4(a,c,d,b) TOF4(a,b,c,d) NOT(b) "
            "CNOT(b,a) CNOT(d,c) TOF4(b,c,d,a) CNOT(c,b) TOF(a,b,c) CNOT(c,d) "
            "TOF(b,d,c) NOT(b) TOF(a,b,c) TOF(b,c,d)",
        },
    },
    "oc7": {
        "spec": [6, 15, 9, 5, 13, 12, 3, 7, 2, 10, 1, 11, 0, 14, 4, 8],
        "size": {Architecture.FULL: 13, Architecture.LNN: 15},
        "circuit": {
            Architecture.FULL: "CNOT(b,d) NOT(b) TOF(a,b,c) TOF(b,d,a) TOF(c,d,b) "
            "CNOT(a,d) CNOT(a,c) CNOT(b,a) TOF4(a,b,c,d) TOF(c,d,b) CNOT(c,a) "
            "NOT(a) CNOT(b,c)",
            Architecture.LNN: "TOF(b,c,d) TOF(c,d,b) TOF4(b,c,d,a) TOF(a,b,c) "
            "NOT(b) TOF4(a,b,d,c) TOF(b,c,d) CNOT(c,b) CNOT(b,a) NOT(d) "
            "TOF(c,d,b) TOF4(a,b,d,c) NOT(a) CNOT(c,d) TOF(a,b,c)",
        },
    },
    "oc8": {
        "spec": [11, 3, 9, 2, 7, 13, 15, 14, 8, 1, 4, 10, 0, 12, 6, 5],
        "size": {Architecture.FULL: 12, Architecture.LNN: 14},
        "circuit": {
            Architecture.FULL: "CNOT(a,b) TOF(b,c,a) TOF(c,d,b) CNOT(d,a) "
            "TOF4(a,b,d,c) TOF(a,b,d) NOT(b) TOF(a,d,b) TOF(b,d,a) TOF(b,c,d) "
            "NOT(a) CNOT(a,d)",
            Architecture.LNN: "CNOT(a,b) TOF(b,d,c) CNOT(c,d) NOT(c) TOF(b,c,a) "
            "TOF4(a,b,c,d) CNOT(a,b) CNOT(d,c) CNOT(b,c) TOF4(a,c,d,b) CNOT(c,b) "
            "CNOT(b,a) TOF4(a,b,c,d) TOF(b,d,c)",
        },
    },
    "nth_prime4_inc": {
        "spec": [0, 2, 3, 5, 7, 11, 13, 1, 4, 6, 8, 9, 10, 12, 14, 15],
        "size": {Architecture.FULL: 11},
        "circuit": {
            Architecture.FULL: "TOF(a,b,c) CNOT(d,b) TOF(a,c,b) TOF(b,d,c) "
            "TOF(b,c,d) CNOT(a,b) TOF4(b,c,d,a) CNOT(c,b) TOF4(a,b,d,c) "
            "CNOT(b,a) TOF(b,d,a)",
        },
    },
    "nth_prime4": {
        "spec": [2, 3, 5, 7, 11, 13, 0, 1, 4, 6, 8, 9, 10, 12, 14, 15],
        "size": {Architecture.LNN: 11},
        "circuit": {
            Architecture.LNN: "CNOT(d,c) TOF(b,c,a) CNOT(b,c) NOT(b) TOF(b,c,d) "
            "TOF(b,c,a) TOF4(a,b,d,c) TOF(a,c,b) NOT(a) TOF4(a,c,d,b) CNOT(b,a)",
        },
    },
    "rd32": {
        "spec": [0, 7, 6, 9, 4, 11, 10, 13, 8, 15, 14, 1, 12, 3, 2, 5],
        "size": {Architecture.FULL: 4, Architecture.LNN: 7},
        "circuit": {
            Architecture.FULL: "TOF(a,b,d) CNOT(a,b) TOF(b,c,d) CNOT(b,c)",
            Architecture.LNN: "TOF(b,c,d) NOT(c) TOF4(a,b,c,d) NOT(c) CNOT(a,b) "
            "TOF4(a,b,c,d) CNOT(b,c)",
        },
    },
    "shift4": {
        "spec": [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 0],
        "size": {Architecture.FULL: 4, Architecture.LNN: 4},
        "circuit": {
            Architecture.FULL: "TOF4(a,b,c,d) TOF(a,b,c) CNOT(a,b) NOT(a)",
            Architecture.LNN: "TOF4(a,b,c,d) TOF(a,b,c) CNOT(a,b) NOT(a)",
        },
    },
}


def _hardest_linear_spec() -> list[int]:
    # a,b,c,d -> b^1, a^c^1, d^1, a  (line a is bit 0)
    out = []
    for x in range(16):
        a, b, c, d = (x >> 0) & 1, (x >> 1) & 1, (x >> 2) & 1, (x >> 3) & 1
        out.append((b ^ 1) | ((a ^ c ^ 1) << 1) | ((d ^ 1) << 2) | (a << 3))
    return out


#: A linear function of maximal size (10) with a known optimal circuit.
HARDEST_LINEAR_SPEC = _hardest_linear_spec()
HARDEST_LINEAR_SIZE = 10
HARDEST_LINEAR_CIRCUIT = (
    "CNOT(b,a) CNOT(c,d) CNOT(d,b) NOT(d) CNOT(a,b) CNOT(d,c) CNOT(b,d) "
    "CNOT(d,a) NOT(d) CNOT(c,b)"
)
