"""Synthesis: table walk, meet-in-the-middle, and the size-15 fallback."""

import random

import numpy as np
import pytest

from revopt import benchdata, perm, synth
from revopt.errors import NotReachable, SizeExceedsL
from revopt.gates import (
    Architecture,
    conjugate_by_perm,
    gate_library,
    parse_circuit,
    simulate,
)
from revopt.symmetry import canonical, symmetry_group
from revopt.synth import (
    HARDEST_FALLBACK,
    MEET_IN_MIDDLE,
    TABLE_WALK,
    classify_hardest,
    find_min_circuit,
    min_sizes_batch,
    synthesize,
)


def rand_word(rng, n=4):
    vals = list(range(1 << n))
    rng.shuffle(vals)
    return perm.encode(vals, n)


def test_n3_sizes_match_oracle_everywhere(t3, oracle3):
    words = np.fromiter(oracle3, np.uint64, len(oracle3))
    sizes = min_sizes_batch(words, t3)
    for w, s in zip(words, sizes):
        assert s == oracle3[int(w)]


def test_n3_circuits_are_valid_and_minimal_sampled(t3, oracle3):
    rng = random.Random(0)
    words = rng.sample(list(oracle3), 800)
    for w in words:
        r = find_min_circuit(w, t3)
        assert r.size == oracle3[w]
        assert len(r.circuit.gates) == r.size
        assert simulate(r.circuit) == w
        assert all(max(g.lines) < 3 for g in r.circuit.gates)


def test_table_walk_exact_for_stored_sizes(full_k7):
    rng = random.Random(1)
    for s in range(5):
        level = full_k7.levels[s]
        picks = level if s < 3 else rng.sample(list(level), 60)
        for w in picks:
            r = find_min_circuit(int(w), full_k7)
            assert r.method == TABLE_WALK
            assert r.size == s
            assert simulate(r.circuit) == int(w)


def test_meet_in_middle_sizes_and_circuits(full_k7):
    rng = random.Random(2)
    # size k+1 witnesses: compose a size-7 representative with one more gate
    lib = gate_library(4)
    for w in rng.sample(list(full_k7.levels[7]), 10):
        g = rng.choice(lib)
        f = perm.compose(int(w), g.word)
        r = find_min_circuit(f, full_k7)
        assert r.method in (TABLE_WALK, MEET_IN_MIDDLE)
        assert 6 <= r.size <= 8
        assert simulate(r.circuit) == f


def test_synthesized_size_is_truly_minimal(full_k7):
    # cross-check the returned size against the table/shell size oracle
    rng = random.Random(3)
    words = np.array([rand_word(rng) for _ in range(10)], np.uint64)
    sizes = min_sizes_batch(words, full_k7)
    for w, s in zip(words, sizes):
        if s < 0:
            continue
        r = find_min_circuit(int(w), full_k7)
        assert r.size == s
        assert simulate(r.circuit) == int(w)


def test_size_monotonicity_under_one_gate(full_k7):
    rng = random.Random(4)
    lib = gate_library(4)
    pairs = []
    for _ in range(10):
        f = rand_word(rng)
        g = rng.choice(lib)
        pairs.append((f, perm.compose(f, g.word)))
    flat = np.array([w for p in pairs for w in p], np.uint64)
    sizes = min_sizes_batch(flat, full_k7)
    for i in range(0, len(flat), 2):
        a, b = int(sizes[i]), int(sizes[i + 1])
        if a >= 0 and b >= 0:
            assert abs(a - b) <= 1


def test_l_bound_is_enforced(full_k7):
    f = perm.encode(benchdata.BENCHMARKS["4_49"]["spec"])  # size 12
    with pytest.raises(SizeExceedsL):
        find_min_circuit(f, full_k7, L=11)
    r = find_min_circuit(f, full_k7, L=12)
    assert r.size == 12
    with pytest.raises(ValueError):
        find_min_circuit(f, full_k7, L=20)  # L may not exceed 2k


def test_invalid_input_rejected(full_k7):
    with pytest.raises(NotReachable):
        find_min_circuit(0, full_k7)


def test_hardest_circuits_simulate_to_their_specs():
    for vals, class_size, text in benchdata.HARDEST:
        c = parse_circuit(text)
        assert len(c.gates) == 15
        assert simulate(c) == perm.encode(vals)


def test_hardest_class_sizes_and_census():
    g = symmetry_group(4)
    from revopt.symmetry import equivalence_class

    total = 0
    reps = set()
    for vals, class_size, _ in benchdata.HARDEST:
        cls = equivalence_class(perm.encode(vals), g)
        assert len(cls) == class_size
        total += len(cls)
        reps.add(canonical(perm.encode(vals), g)[0])
    assert total == benchdata.HARDEST_FUNCTION_COUNT  # 24+24+48+24+24 = 144
    assert len(reps) == 5  # the five classes are distinct


def test_classify_hardest_covers_whole_classes():
    from revopt.symmetry import equivalence_class

    g = symmetry_group(4)
    rng = random.Random(5)
    for vals, _, _ in benchdata.HARDEST:
        members = [w for w, _ in equivalence_class(perm.encode(vals), g)]
        for w in [members[0]] + rng.sample(members, 3):
            r = classify_hardest(w)
            assert r is not None
            assert r.method == HARDEST_FALLBACK
            assert r.size == 15
            assert simulate(r.circuit) == w


def test_classify_hardest_rejects_easier_functions(full_k7):
    assert classify_hardest(perm.IDENTITY) is None
    assert classify_hardest(perm.encode(benchdata.BENCHMARKS["hwb4"]["spec"])) is None


def test_worked_example_is_row_3_inverted_and_relabeled():
    f = perm.encode(benchdata.HARDEST_NONCANONICAL_EXAMPLE)
    row3 = perm.encode(benchdata.HARDEST[2][0])
    sigma = (2, 0, 1, 3)  # (a,b,c,d) -> (c,a,b,d)
    assert f == conjugate_by_perm(perm.inverse(row3), sigma)
    g = symmetry_group(4)
    assert canonical(f, g)[0] == canonical(row3, g)[0]
    r = classify_hardest(f)
    assert r is not None and r.size == 15 and simulate(r.circuit) == f


def test_synthesize_falls_back_for_size_15(full_k7):
    # L=8 keeps the (hopeless) shell scan short; size 15 exceeds any L <= 14
    f = perm.encode(benchdata.HARDEST[0][0])
    r = synthesize(f, full_k7, L=8)
    assert r.method == HARDEST_FALLBACK and r.size == 15
    assert simulate(r.circuit) == f


def test_min_sizes_batch_marks_unreachable(full_k7):
    f = perm.encode(benchdata.HARDEST[0][0])  # size 15 > k + 2
    out = min_sizes_batch(np.array([f, perm.IDENTITY], np.uint64), full_k7,
                          max_shell=2)
    assert out[0] == -1 and out[1] == 0


def test_lnn_results_use_lnn_gates_only(lnn_k7):
    rng = random.Random(6)
    lnn_words = {g.word for g in gate_library(4, Architecture.LNN)}
    for w in rng.sample(list(lnn_k7.levels[6]), 15):
        r = find_min_circuit(int(w), lnn_k7)
        assert r.size == 6
        assert simulate(r.circuit) == int(w)
        assert all(g.word in lnn_words for g in r.circuit.gates)


def test_lnn_size_never_below_full_size(full_k7, lnn_k7):
    # words of known LNN size 5: the unrestricted size can only be smaller
    rng = random.Random(7)
    words = np.array(rng.sample(list(lnn_k7.levels[5]), 40), np.uint64)
    sl = min_sizes_batch(words, lnn_k7)
    sf = min_sizes_batch(words, full_k7)
    assert all(s == 5 for s in sl)
    assert all(0 <= s <= 5 for s in sf)
