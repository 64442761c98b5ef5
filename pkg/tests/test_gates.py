"""Gate semantics, libraries, the circuit grammar, and circuit transforms."""

import random

import pytest
from hypothesis import given, strategies as st

from revopt import perm
from revopt.errors import (
    ArityMismatch,
    CircuitSyntaxError,
    DuplicateLine,
    LineOutOfWidth,
)
from revopt.gates import (
    Architecture,
    Circuit,
    Gate,
    conjugate_by_perm,
    format_circuit,
    gate_library,
    parse_circuit,
    sigma_word,
    simulate,
    transform_circuit,
)


def test_gate_word_semantics():
    g = Gate.make("TOF", (0, 1), 2)
    for x in range(16):
        want = x ^ 4 if (x & 3) == 3 else x
        assert perm.apply_word(g.word, x) == want


def test_gates_are_involutions():
    for n in (2, 3, 4):
        for g in gate_library(n):
            assert perm.compose(g.word, g.word) == perm.IDENTITY


def test_library_counts():
    assert len(gate_library(4, Architecture.FULL)) == 32  # 4+12+12+4
    assert len(gate_library(4, Architecture.LNN)) == 20  # 4+6+6+4
    assert len(gate_library(3, Architecture.FULL)) == 12  # 3+6+3
    assert len(gate_library(2, Architecture.FULL)) == 4  # 2+2
    for arch in Architecture:
        lib = gate_library(4, arch)
        assert len({g.word for g in lib}) == len(lib)


def test_lnn_library_is_contiguous_subset():
    full = {g.word for g in gate_library(4, Architecture.FULL)}
    for g in gate_library(4, Architecture.LNN):
        assert g.word in full
        lines = sorted(g.lines)
        assert lines == list(range(lines[0], lines[-1] + 1))


def test_narrow_gate_words_fix_high_rows():
    # the identity embedding of perm words must survive gate application
    for n in (2, 3):
        for g in gate_library(n):
            assert perm.is_perm_word(g.word, n)
            for x in range(1 << n, 16):
                assert perm.apply_word(g.word, x) == x


def test_gate_make_validation():
    with pytest.raises(ArityMismatch):
        Gate.make("TOF", (0,), 2)
    with pytest.raises(DuplicateLine):
        Gate.make("CNOT", (1,), 1)
    with pytest.raises(LineOutOfWidth):
        Gate.make("CNOT", (2,), 1, width=2)


def test_simulate_applies_first_gate_first():
    # NOT(a) then CNOT(a,b): 0 -> 1 -> 3
    c = parse_circuit("NOT(a) CNOT(a,b)")
    assert perm.apply_word(simulate(c), 0) == 3
    # the other order: 0 -> 0 -> 1
    c2 = parse_circuit("CNOT(a,b) NOT(a)")
    assert perm.apply_word(simulate(c2), 0) == 1


def test_parse_format_roundtrip():
    text = "NOT(a) CNOT(b,a) TOF(a,c,d) TOF4(a,b,c,d)"
    c = parse_circuit(text)
    assert format_circuit(c) == text
    assert parse_circuit(format_circuit(c)) == c
    assert parse_circuit("") == Circuit((), 4)
    # controls are printed sorted regardless of input order
    assert format_circuit(parse_circuit("TOF(c,a,d)")) == "TOF(a,c,d)"


def test_parse_errors():
    for bad in ("XOR(a,b)", "NOT(a,b)", "CNOT(a,a)", "NOT(e)", "NOT a"):
        with pytest.raises(CircuitSyntaxError):
            parse_circuit(bad)
    with pytest.raises(LineOutOfWidth):
        parse_circuit("TOF4(a,b,c,d)", 3)


@given(st.permutations(list(range(4))), st.booleans())
def test_transform_circuit_matches_word_conjugation(sigma, invert):
    c = parse_circuit("NOT(a) CNOT(b,a) TOF(a,c,d) TOF4(a,b,c,d) CNOT(c,d)")
    f = simulate(c)
    want = conjugate_by_perm(perm.inverse(f) if invert else f, sigma)
    assert simulate(transform_circuit(c, sigma, invert)) == want


def test_sigma_word_moves_bits():
    sigma = (1, 2, 0, 3)  # bit i of x becomes bit sigma[i]
    w = sigma_word(sigma)
    for x in range(16):
        y = perm.apply_word(w, x)
        for i in range(4):
            assert (y >> sigma[i]) & 1 == (x >> i) & 1


def test_conjugation_by_identity_and_composition():
    rng = random.Random(11)
    for _ in range(50):
        vals = list(range(16))
        rng.shuffle(vals)
        f = perm.encode(vals)
        assert conjugate_by_perm(f, (0, 1, 2, 3)) == f
        a = tuple(rng.sample(range(4), 4))
        b = tuple(rng.sample(range(4), 4))
        ab = tuple(b[a[i]] for i in range(4))  # a then b
        assert conjugate_by_perm(conjugate_by_perm(f, a), b) == conjugate_by_perm(f, ab)
