"""Command-line interface and experiment drivers."""

from __future__ import annotations

import argparse
import json
import random as _random
import statistics
import sys
import time

import numpy as np

from . import _kernels as K
from . import benchdata, enumeration, perm, synth, table
from .errors import RevoptError, SizeExceedsL
from .gates import Architecture, format_circuit, parse_circuit, simulate


def _arch(s: str) -> Architecture:
    return Architecture.LNN if s == "lnn" else Architecture.FULL


def _emit(args, human: str, payload: dict) -> None:
    if args.json:
        print(json.dumps(payload, indent=1, sort_keys=True))
    else:
        print(human)


def _get_table(args, need_k: int = 7) -> table.CanonTable:
    if getattr(args, "tables", None):
        return table.load(args.tables, arch=_arch(args.arch) if hasattr(args, "arch") else None)
    k = getattr(args, "k", None) or need_k
    arch = _arch(getattr(args, "arch", "full"))
    return table.bfs_build(k, getattr(args, "n", 4), arch)


def cmd_bfs(args) -> int:
    arch = _arch(args.arch)
    t0 = time.time()
    t = table.bfs_build(args.k, args.n, arch)
    counts = t.counts()
    lines = []
    for i, (red, tot) in enumerate(counts):
        lines.append(f"size {i}: reduced {red} total {tot}")
    if args.out:
        table.save(t, args.out)
        lines.append(f"wrote {args.out}")
    _emit(args, "\n".join(lines), {
        "command": "bfs", "n": args.n, "arch": arch.value, "k": args.k,
        "reduced": [c[0] for c in counts], "total": [c[1] for c in counts],
        "seconds": time.time() - t0,
    })
    return 0


def cmd_synth(args) -> int:
    t = _get_table(args)
    f, _ = perm.parse_truth_table(args.spec, t.n)
    r = synth.synthesize(f, t, args.L)
    ok = simulate(r.circuit) == f
    text = format_circuit(r.circuit) if r.circuit.gates else "(empty circuit)"
    _emit(args, f"size {r.size} [{r.method}]\n{text}", {
        "command": "synth", "spec": args.spec, "size": r.size,
        "method": r.method, "circuit": format_circuit(r.circuit),
        "verified": ok, "stats": r.search_stats,
    })
    return 0 if ok else 1


def cmd_verify(args) -> int:
    f, n = perm.parse_truth_table(args.spec)
    c = parse_circuit(args.circuit, n)
    got = simulate(c)
    ok = got == f
    vals = perm.decode(got, n)
    human = f"{'PASS' if ok else 'FAIL'}\nsimulated: {perm.format_truth_table(vals)}"
    if not ok:
        diff = [i for i in range(1 << n) if perm.apply_word(got, i) != perm.apply_word(f, i)]
        human += f"\ndiffers at rows: {diff}"
    _emit(args, human, {
        "command": "verify", "pass": ok,
        "simulated": vals, "expected": perm.decode(f, n),
    })
    return 0 if ok else 1


def _linear_words_closure() -> np.ndarray:
    """All words reachable with NOT and CNOT gates only."""
    from .gates import gate_library

    gates = np.array(
        [g.word for g in gate_library(4) if g.kind in ("NOT", "CNOT")], np.uint64
    )
    seen = np.array([perm.IDENTITY], np.uint64)
    frontier = seen
    while frontier.size:
        parts = []
        for g in gates:
            out = np.empty_like(frontier)
            K.compose_many(frontier, g, out)
            parts.append(out)
        cand = np.unique(np.concatenate(parts))
        frontier = cand[~np.isin(cand, seen)]
        seen = np.union1d(seen, frontier)
    return seen


def _linear_words_affine() -> np.ndarray:
    """All invertible affine maps x -> Mx + c over 4-bit vectors."""
    words = []
    for cols in range(1 << 16):
        m = [(cols >> (4 * j)) & 15 for j in range(4)]
        # GF(2) column independence by elimination
        basis = []
        ok = True
        for v in m:
            for b in basis:
                v = min(v, v ^ b)
            if v == 0:
                ok = False
                break
            basis.append(v)
        if not ok:
            continue
        image = [0] * 16
        for x in range(16):
            y = 0
            for j in range(4):
                if x >> j & 1:
                    y ^= m[j]
            image[x] = y
        for c in range(16):
            words.append(perm.encode([y ^ c for y in image]))
    return np.unique(np.array(words, np.uint64))


def cmd_linear(args) -> int:
    t = _get_table(args, need_k=6)
    if t.k < 5:
        print("error: linear synthesis needs a table of depth k >= 5", file=sys.stderr)
        return 2
    t0 = time.time()
    closure = _linear_words_closure()
    affine = _linear_words_affine()
    if not np.array_equal(closure, affine):
        print("error: linear generators disagree", file=sys.stderr)
        return 1
    sizes = synth.min_sizes_batch(closure, t)
    hist = np.bincount(sizes, minlength=11)
    lines = [f"size {i}: {int(c)}" for i, c in enumerate(hist)]
    lines.append(f"total: {int(hist.sum())}")
    _emit(args, "\n".join(lines), {
        "command": "linear", "histogram": [int(c) for c in hist],
        "total": int(hist.sum()), "seconds": time.time() - t0,
    })
    return 0


def cmd_random(args) -> int:
    t = _get_table(args)
    arch = t.arch
    rng = _random.Random(args.seed)
    t0 = time.time()
    words = []
    for _ in range(args.samples):
        vals = list(range(16))
        rng.shuffle(vals)  # Fisher-Yates, unbiased
        words.append(perm.encode(vals))
    sizes = synth.min_sizes_batch(np.array(words, np.uint64), t)
    results = []
    unsolved = 0
    for w, s in zip(words, sizes):
        if s >= 0:
            results.append(int(s))
            continue
        r = synth.classify_hardest(w) if (t.n == 4 and arch is Architecture.FULL) else None
        if r is not None:
            results.append(r.size)
        else:
            unsolved += 1
    hist = {}
    for s in results:
        hist[s] = hist.get(s, 0) + 1
    mean = statistics.fmean(results) if results else float("nan")
    stderr = (statistics.stdev(results) / len(results) ** 0.5) if len(results) > 1 else 0.0
    lines = [f"size {s}: {hist[s]}" for s in sorted(hist)]
    lines.append(f"samples {args.samples} mean {mean:.5f} stderr {stderr:.5f} unsolved {unsolved}")
    _emit(args, "\n".join(lines), {
        "command": "random", "samples": args.samples, "seed": args.seed,
        "arch": arch.value, "histogram": {str(k): v for k, v in sorted(hist.items())},
        "mean": mean, "stderr": stderr, "unsolved": unsolved,
        "seconds": time.time() - t0,
    })
    return 0


def cmd_benchmarks(args) -> int:
    t = _get_table(args)
    arch = t.arch
    L = args.L or 2 * t.k
    rows = []
    failed = False
    for name, rec in benchdata.BENCHMARKS.items():
        if arch not in rec["size"]:
            continue
        f = perm.encode(rec["spec"])
        expected = rec["size"][arch]
        printed = parse_circuit(rec["circuit"][arch])
        verify_ok = simulate(printed) == f and len(printed) == expected
        if expected > L:
            rows.append((name, expected, None, verify_ok, "verify-only"))
            failed |= not verify_ok
            continue
        try:
            r = synth.synthesize(f, t, L)
            ok = r.size == expected and simulate(r.circuit) == f
            rows.append((name, expected, r.size, ok and verify_ok, format_circuit(r.circuit)))
            failed |= not (ok and verify_ok)
        except SizeExceedsL:
            rows.append((name, expected, None, False, "no circuit within L"))
            failed = True
    lines = []
    for name, exp, got, ok, detail in rows:
        lines.append(
            f"{name:16s} expected {exp:2d} found {got if got is not None else '-':>2} "
            f"{'PASS' if ok else 'FAIL'}  {detail}"
        )
    _emit(args, "\n".join(lines), {
        "command": "benchmarks", "arch": arch.value,
        "rows": [
            {"name": n_, "expected": e, "found": g, "pass": ok}
            for n_, e, g, ok, _ in rows
        ],
    })
    return 1 if failed else 0


def cmd_searchall(args) -> int:
    arch = _arch(args.arch)
    seed = table.bfs_build(max(args.from_size, 1), args.n, arch)
    if args.sparse:
        red, tot = enumeration.next_size_counts_sparse(seed, args.from_size)
        _emit(args, f"size {args.from_size + 1}: reduced {red} total {tot}", {
            "command": "searchall", "mode": "sparse",
            "size": args.from_size + 1, "reduced": red, "total": tot,
        })
        return 0
    res = enumeration.run_pipeline(
        args.from_size, args.to_size, seed, slices=args.slices,
        workers=args.threads, budget_bytes=args.budget_bytes,
        workdir=args.workdir,
    )
    lines = [f"size {s}: reduced {r} total {c}" for s, (r, c) in sorted(res.items())]
    _emit(args, "\n".join(lines), {
        "command": "searchall",
        "counts": {str(s): list(rc) for s, rc in sorted(res.items())},
    })
    return 0


def cmd_table_info(args) -> int:
    t = table.load(args.tables)
    with open(args.tables, "rb") as fh:
        digest = K.crc64(fh.read())
    counts = [int(level.shape[0]) for level in t.levels]
    human = (
        f"n={t.n} arch={t.arch.value} k={t.k}\n"
        f"entries {t.entry_count} slots {t.slot_count} load {t.load:.3f}\n"
        f"reduced per size: {counts}\nfile crc64 {digest:#018x}"
    )
    _emit(args, human, {
        "command": "table-info", "n": t.n, "arch": t.arch.value, "k": t.k,
        "entries": t.entry_count, "slots": t.slot_count,
        "reduced": counts, "crc64": digest,
    })
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="revopt", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, tables=True, arch=True):
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        if tables:
            sp.add_argument("--tables", help="path to a table file")
            sp.add_argument("--k", type=int, help="table depth when building in-process")
        if arch:
            sp.add_argument("--arch", choices=["full", "lnn"], default="full")

    sp = sub.add_parser("bfs", help="build a canonical-representative table")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--n", type=int, default=4)
    sp.add_argument("--arch", choices=["full", "lnn"], default="full")
    sp.add_argument("--out", help="write the table to this path")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(fn=cmd_bfs)

    sp = sub.add_parser("synth", help="synthesize a minimal circuit")
    sp.add_argument("--spec", required=True, help='truth table, e.g. "[0,1,3,2]"')
    sp.add_argument("--L", type=int, default=None)
    common(sp)
    sp.set_defaults(fn=cmd_synth)

    sp = sub.add_parser("verify", help="check a circuit against a truth table")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--circuit", required=True)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("linear", help="histogram of all linear-function sizes")
    common(sp)
    sp.set_defaults(fn=cmd_linear)

    sp = sub.add_parser("random", help="size statistics over random functions")
    sp.add_argument("--samples", type=int, default=300)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--L", type=int, default=None)
    common(sp)
    sp.set_defaults(fn=cmd_random)

    sp = sub.add_parser("benchmarks", help="synthesize the benchmark suite")
    sp.add_argument("--L", type=int, default=None)
    common(sp)
    sp.set_defaults(fn=cmd_benchmarks)

    sp = sub.add_parser("searchall", help="dense enumeration pipeline")
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("--from-size", type=int, default=1)
    sp.add_argument("--to-size", type=int, default=8)
    sp.add_argument("--slices", type=int, default=1)
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--budget-bytes", type=int, default=1 << 28)
    sp.add_argument("--workdir", default=None)
    sp.add_argument("--sparse", action="store_true",
                    help="one sparse step from --from-size (for n=4)")
    sp.add_argument("--arch", choices=["full", "lnn"], default="full")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(fn=cmd_searchall)

    sp = sub.add_parser("table-info", help="describe a table file")
    sp.add_argument("--tables", required=True)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(fn=cmd_table_info)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except RevoptError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
