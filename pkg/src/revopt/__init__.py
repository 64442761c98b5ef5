"""Gate-count-optimal synthesis of small reversible circuits.

Permutations of 2^n truth-table rows (n <= 4) are packed into 64-bit words.
A breadth-first table of canonical class representatives up to depth k,
combined with a meet-in-the-middle search, yields provably minimal circuits
over NOT/CNOT/TOF/TOF4 up to 2k gates, on all-to-all or linear-nearest-
neighbor line connectivity.  A bit-vector pipeline enumerates optimal sizes
for entire function spaces.
"""

from .errors import RevoptError
from .gates import (
    Architecture,
    Circuit,
    Gate,
    format_circuit,
    gate_library,
    parse_circuit,
    simulate,
    transform_circuit,
)
from .perm import (
    IDENTITY,
    apply_word,
    compose,
    decode,
    encode,
    format_truth_table,
    inverse,
    parse_truth_table,
)
from .symmetry import canonical, equivalence_class, symmetry_group
from .table import CanonTable, bfs_build, load, save
from .synth import (
    SynthesisResult,
    classify_hardest,
    find_min_circuit,
    min_sizes_batch,
    synthesize,
)
from .enumeration import (
    AlmostReducedScheme,
    BitSlice,
    FactorialScheme,
    find_almost_reduced_equivalent,
    is_almost_reduced,
    load_bits,
    run_pipeline,
    save_bits,
    scheme_for,
)

__version__ = "0.1.0"

__all__ = [
    "RevoptError",
    "Architecture",
    "Circuit",
    "Gate",
    "format_circuit",
    "gate_library",
    "parse_circuit",
    "simulate",
    "transform_circuit",
    "IDENTITY",
    "apply_word",
    "compose",
    "decode",
    "encode",
    "format_truth_table",
    "inverse",
    "parse_truth_table",
    "canonical",
    "equivalence_class",
    "symmetry_group",
    "CanonTable",
    "bfs_build",
    "load",
    "save",
    "SynthesisResult",
    "classify_hardest",
    "find_min_circuit",
    "min_sizes_batch",
    "synthesize",
    "AlmostReducedScheme",
    "BitSlice",
    "FactorialScheme",
    "find_almost_reduced_equivalent",
    "is_almost_reduced",
    "load_bits",
    "run_pipeline",
    "save_bits",
    "scheme_for",
    "__version__",
]
