"""Shared fixtures: disk-cached synthesis tables and a brute-force oracle."""

import os

import numpy as np
import pytest

from revopt import _kernels as K
from revopt import perm, table
from revopt.gates import Architecture, gate_library

CACHE_DIR = os.environ.get("REVOPT_TEST_CACHE", "/tmp/revopt_test_cache")


def _cached_table(name: str, k: int, n: int, arch: Architecture) -> table.CanonTable:
    os.makedirs(CACHE_DIR, exist_ok=True)
    path = os.path.join(CACHE_DIR, name)
    if os.path.exists(path):
        try:
            return table.load(path, n=n, arch=arch)
        except Exception:
            os.remove(path)
    t = table.bfs_build(k, n, arch)
    table.save(t, path)
    return t


@pytest.fixture(scope="session")
def full_k7():
    """Depth-7 all-to-all table for n=4 (builds once, then loads from disk)."""
    return _cached_table("full_k7.rvtb", 7, 4, Architecture.FULL)


@pytest.fixture(scope="session")
def lnn_k7():
    """Depth-7 linear-nearest-neighbor table for n=4."""
    return _cached_table("lnn_k7.rvtb", 7, 4, Architecture.LNN)


@pytest.fixture(scope="session")
def full_k7_path(full_k7):
    return os.path.join(CACHE_DIR, "full_k7.rvtb")


@pytest.fixture(scope="session")
def lnn_k7_path(lnn_k7):
    return os.path.join(CACHE_DIR, "lnn_k7.rvtb")


@pytest.fixture(scope="session")
def t3():
    """Complete n=3 table (every 3-bit function has size <= 8)."""
    return table.bfs_build(8, 3, Architecture.FULL)


def naive_sizes(n: int, arch: Architecture = Architecture.FULL) -> dict:
    """Uncanonicalized breadth-first sizes over the whole function space."""
    gates = np.array([g.word for g in gate_library(n, arch)], np.uint64)
    sizes = {perm.IDENTITY: 0}
    frontier = np.array([perm.IDENTITY], np.uint64)
    s = 0
    while frontier.size:
        s += 1
        parts = []
        for g in gates:
            out = np.empty_like(frontier)
            K.compose_many(frontier, np.uint64(g), out)
            parts.append(out)
        cand = np.unique(np.concatenate(parts))
        new = cand[~np.isin(cand, np.fromiter(sizes, np.uint64, len(sizes)))]
        for w in new:
            sizes[int(w)] = s
        frontier = new
    return sizes


@pytest.fixture(scope="session")
def oracle3():
    """word -> minimal size, for all 40320 3-bit functions."""
    sizes = naive_sizes(3)
    assert len(sizes) == 40320
    return sizes
