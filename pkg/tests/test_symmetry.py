"""Relabeling/inversion equivalence: chain, classes, canonical forms."""

import random

from hypothesis import given, settings, strategies as st

from revopt import perm
from revopt.gates import Architecture, conjugate_by_perm, gate_library
from revopt.symmetry import (
    apply_witness,
    canonical,
    equivalence_class,
    gate_conjugation_table,
    symmetry_group,
)


def rand_word(rng, n=4):
    vals = list(range(1 << n))
    rng.shuffle(vals)
    return perm.encode(vals, n)


def test_chain_visits_every_relabeling_once():
    for n in (2, 3, 4):
        g = symmetry_group(n)
        import math

        assert len(g.chain_perms) == math.factorial(n)
        assert len(set(g.chain_perms)) == len(g.chain_perms)
        assert all(g.valid)
        assert g.order == 2 * math.factorial(n)
        # consecutive chain perms differ by one swap of consecutive values
        for k in range(1, len(g.chain_perms)):
            a, b = g.chain_perms[k - 1], g.chain_perms[k]
            diff = [i for i in range(n) if a[i] != b[i]]
            assert len(diff) == 2
            v = sorted(a[i] for i in diff)
            assert v[1] == v[0] + 1
            assert sorted(b[i] for i in diff) == v


def test_lnn_group_is_identity_and_reversal():
    g = symmetry_group(4, Architecture.LNN)
    assert g.relabelings == [(0, 1, 2, 3), (3, 2, 1, 0)]
    assert sum(g.valid) == 2
    assert g.order == 4


def test_positions_follow_lexicographic_sigma_order():
    g = symmetry_group(4)
    sigmas = [g.perm_at(p) for p in g.positions()]
    assert sigmas == sorted(sigmas)


@settings(max_examples=60)
@given(st.permutations(list(range(16))))
def test_class_membership_and_witnesses(vals):
    f = perm.encode(vals)
    g = symmetry_group(4)
    cls = equivalence_class(f, g)
    assert 48 % len(cls) == 0  # orbit size divides the group order
    words = [w for w, _ in cls]
    assert len(set(words)) == len(words)
    assert f in words
    for w, wit in cls:
        assert apply_witness(w, wit) == f


@settings(max_examples=60)
@given(st.permutations(list(range(16))))
def test_canonical_is_class_minimum_and_constant(vals):
    f = perm.encode(vals)
    g = symmetry_group(4)
    rep, wit = canonical(f, g)
    cls = equivalence_class(f, g)
    assert rep == min(w for w, _ in cls)
    assert apply_witness(rep, wit) == f
    # idempotent and constant on the class
    assert canonical(rep, g)[0] == rep
    for w, _ in cls:
        assert canonical(w, g)[0] == rep


def test_canonical_respects_inversion_and_relabeling():
    rng = random.Random(3)
    g = symmetry_group(4)
    for _ in range(40):
        f = rand_word(rng)
        rep = canonical(f, g)[0]
        assert canonical(perm.inverse(f), g)[0] == rep
        sigma = tuple(rng.sample(range(4), 4))
        assert canonical(conjugate_by_perm(f, sigma), g)[0] == rep


def test_lnn_classes_refine_full_classes():
    rng = random.Random(4)
    gl = symmetry_group(4, Architecture.LNN)
    gf = symmetry_group(4)
    for _ in range(30):
        f = rand_word(rng)
        lnn_words = {w for w, _ in equivalence_class(f, gl)}
        full_words = {w for w, _ in equivalence_class(f, gf)}
        assert lnn_words <= full_words
        assert len(lnn_words) in (1, 2, 4)


def test_gate_conjugation_closure_exhaustive():
    for arch in Architecture:
        g = symmetry_group(4, arch)
        lib = gate_library(4, arch)
        t = gate_conjugation_table(g, lib)
        assert len(t) == len(lib) * len(g.relabelings)  # 32*24 or 20*2
        for (gi, sigma), gj in t.items():
            want = conjugate_by_perm(lib[gi].word, sigma)
            assert lib[gj].word == want
        # each conjugation by a fixed sigma permutes the library
        for sigma in g.relabelings:
            images = [t[gi, sigma] for gi in range(len(lib))]
            assert sorted(images) == list(range(len(lib)))


def test_small_width_groups():
    g3 = symmetry_group(3)
    rng = random.Random(9)
    for _ in range(30):
        f = rand_word(rng, 3)
        cls = equivalence_class(f, g3)
        assert 12 % len(cls) == 0
        rep, wit = canonical(f, g3)
        assert rep == min(w for w, _ in cls)
        assert apply_witness(rep, wit) == f
