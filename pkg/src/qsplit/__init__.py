"""Depth-neutral quantum circuit obfuscation and interlocking split compilation.

Pipeline: obfuscate a circuit with seeded random gate insertion (zero depth
overhead), split it along an interlocking per-qubit boundary into two
segments with their own registers, compile each segment independently with
an untrusted mock compiler, then recombine via the owner-held manifest so
the inserted gates cancel and the original functionality is restored.
"""

from importlib import resources

from .circuit import Circuit, Gate, Layering, canonical_order, compose, depth, invert, layering
from .gates import GateKind
from .sim import (CountDist, NoiseModel, accuracy, distribution_tvd, exact_distribution,
                  run_statevector, sample_counts, tvd, unitary)
from .qasm import ManifestError, QasmError, emit_qasm, parse_qasm, read_manifest, write_manifest
from .obfuscate import (EmptySlotMap, InsertionPolicy, NoSlotError, ObfuscatedCircuit,
                        ObfuscationRecord, RecordError, build_obfuscated,
                        find_empty_positions, insert_random_gates, strip_inverse)
from .splitting import (InfeasibleSplitError, Segment, SplitError, SplitManifest,
                        generate_interlock_pattern, recombine, split)
from .compiler import (CompiledSegment, CouplingGraph, compile_segment, peephole_optimize,
                       route, undo_layout)
from .attack import (attack_complexity, baseline_complexity, collusion_reconstruct,
                     enumerate_mappings)
from .bench import run_bench, run_pipeline

__version__ = "0.1.0"


def benchmarks_dir() -> str:
    """Path to the bundled benchmark circuits."""
    return str(resources.files(__name__) / "benchmarks")
