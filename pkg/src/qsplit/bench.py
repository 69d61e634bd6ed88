"""Benchmark harness: the full pipeline per circuit per iteration, reported
as JSON plus an aligned text table.

Per iteration: obfuscate -> interlock split -> compile both segments
(peephole + routing) -> undo layouts -> recombine -> simulate original,
stripped (RC), and restored circuits -> TVD and accuracy columns. The
compile step runs inside a file-access watch window and receives nothing
but a segment and a coupling graph; the report embeds every input needed
to reproduce it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .audit import FileAccessWatch
from .circuit import Circuit, depth
from .compiler import CouplingGraph, compile_segment, undo_layout
from .obfuscate import InsertionPolicy, ObfuscatedCircuit, build_obfuscated, strip_inverse
from .splitting import Segment, SplitManifest, generate_interlock_pattern, recombine, split
from . import sim


def derive_seed(master: int, *indices: int) -> int:
    """Stable per-(circuit, iteration, stage) seed derivation."""
    return int(np.random.SeedSequence([master, *indices]).generate_state(1)[0])


def coupling_for(spec: str, n: int, edges: list[tuple[int, int]] | None = None) -> CouplingGraph:
    if spec == "line":
        return CouplingGraph.line(n)
    if spec == "ring":
        return CouplingGraph.ring(n)
    if spec == "full":
        return CouplingGraph.full(n)
    if spec == "custom":
        if edges is None:
            raise ValueError("custom coupling needs an edge list")
        return CouplingGraph(max((max(e) for e in edges), default=n - 1) + 1,
                             frozenset(tuple(e) for e in edges))
    raise ValueError(f"unknown coupling '{spec}' (use line|ring|full|custom)")


@dataclass
class PipelineResult:
    obfuscated: ObfuscatedCircuit
    manifest: SplitManifest
    left: Segment
    right: Segment
    restored: Circuit
    compile_opens: list[str]
    compile_violations: list[str]


def run_pipeline(c: Circuit, policy: InsertionPolicy, split_seed: int,
                 coupling: str = "line", compile_seed: int = 0) -> PipelineResult:
    """One obfuscate/split/compile/recombine pass with audited compilation."""
    obf = build_obfuscated(c, policy)
    manifest = generate_interlock_pattern(obf, split_seed)
    left, right = split(obf, manifest)
    with FileAccessWatch() as watch:
        compiled_l = compile_segment(left, coupling_for(coupling, left.circuit.num_qubits),
                                     compile_seed)
        compiled_r = compile_segment(right, coupling_for(coupling, right.circuit.num_qubits),
                                     compile_seed)
    restored = recombine(Segment(undo_layout(compiled_l), "L"),
                         Segment(undo_layout(compiled_r), "R"), manifest)
    return PipelineResult(obf, manifest, left, right, restored,
                          list(watch.opens), list(watch.violations))


def _ideal_outcome(c: Circuit, input_state: int) -> str:
    probs = sim.exact_distribution(c, input_state)
    return format(int(np.argmax(probs)), f"0{c.num_qubits}b")


def run_bench(circuits: list[tuple[str, Circuit]], iterations: int = 20,
              shots: int = 1000, noise: sim.NoiseModel | None = None,
              seed: int = 0, coupling: str = "line",
              policy: InsertionPolicy | None = None,
              input_state: int = 0) -> dict:
    """Run the pipeline `iterations` times per circuit and aggregate a report."""
    base_policy = policy or InsertionPolicy()
    noise = noise or sim.NoiseModel()
    report: dict = {
        "config": {
            "iterations": iterations,
            "shots": shots,
            "noise": {"p1": noise.p1, "p2": noise.p2, "pm": noise.pm},
            "seed": seed,
            "coupling": coupling,
            "input_state": input_state,
            "ideal_outcome": "argmax of the exact noiseless distribution",
            "policy": {
                "gate_limit": base_policy.gate_limit,
                "kinds": [k.value for k in base_policy.kinds],
                "cx_probability": base_policy.cx_probability,
            },
            "seed_derivation": "seedseq(seed, circuit_index, iteration, stage)",
        },
        "circuits": [],
        "audit": {"forbidden_opens": []},
    }

    for ci, (name, c) in enumerate(circuits):
        row: dict = {"name": name, "num_qubits": c.num_qubits,
                     "depth": depth(c), "gate_count": c.gate_count}
        ideal = _ideal_outcome(c, input_state)
        per_iter: list[dict] = []
        errors: list[str] = []
        for it in range(iterations):
            pol = InsertionPolicy(base_policy.gate_limit, base_policy.kinds,
                                  base_policy.cx_probability,
                                  seed=derive_seed(seed, ci, it, 0),
                                  allow_depth_growth=base_policy.allow_depth_growth)
            try:
                res = run_pipeline(c, pol, split_seed=derive_seed(seed, ci, it, 1),
                                   coupling=coupling)
            except Exception as e:  # report per-circuit failures, keep running
                errors.append(f"iteration {it}: {e}")
                continue
            report["audit"]["forbidden_opens"].extend(res.compile_violations)
            sim_seed = derive_seed(seed, ci, it, 2)
            counts_orig = sim.sample_counts(c, input_state, shots, noise, sim_seed)
            counts_rc = sim.sample_counts(strip_inverse(res.obfuscated), input_state,
                                          shots, noise, sim_seed)
            counts_restored = sim.sample_counts(res.restored, input_state, shots,
                                                noise, sim_seed)
            acc = sim.accuracy(counts_orig, ideal)
            acc_restored = sim.accuracy(counts_restored, ideal)
            per_iter.append({
                "depth_obfuscated": res.obfuscated.depth_obfuscated,
                "gate_obfuscated": res.obfuscated.circuit.gate_count,
                "tvd_obfuscated": sim.tvd(counts_orig, counts_rc),
                "tvd_restored": sim.tvd(counts_orig, counts_restored),
                "accuracy": acc,
                "accuracy_restored": acc_restored,
            })
        row["iterations_completed"] = len(per_iter)
        row["errors"] = errors
        if per_iter:
            mean = lambda key: float(np.mean([r[key] for r in per_iter]))
            row["depth_obfuscated"] = mean("depth_obfuscated")
            row["gate_obfuscated"] = mean("gate_obfuscated")
            row["gate_change_pct"] = 100.0 * (row["gate_obfuscated"] - row["gate_count"]) / row["gate_count"]
            row["tvd_obfuscated"] = mean("tvd_obfuscated")
            row["tvd_restored"] = mean("tvd_restored")
            row["accuracy"] = mean("accuracy")
            row["accuracy_restored"] = mean("accuracy_restored")
            row["accuracy_change_abs"] = abs(row["accuracy"] - row["accuracy_restored"])
            row["accuracy_change_pct"] = (
                100.0 * row["accuracy_change_abs"] / row["accuracy"]
                if row["accuracy"] > 0 else float("nan"))
        report["circuits"].append(row)
    return report


_TABLE_COLUMNS = [
    ("Circuit", "name", "s"),
    ("Depth", "depth", "d"),
    ("DepthObf", "depth_obfuscated", ".1f"),
    ("Gates", "gate_count", "d"),
    ("GatesObf", "gate_obfuscated", ".1f"),
    ("Gate%", "gate_change_pct", ".1f"),
    ("TVDobf", "tvd_obfuscated", ".3f"),
    ("TVDrest", "tvd_restored", ".3f"),
    ("Acc", "accuracy", ".3f"),
    ("AccRest", "accuracy_restored", ".3f"),
    ("Acc%", "accuracy_change_pct", ".2f"),
]


def format_table(report: dict) -> str:
    rows = [[title for title, _, _ in _TABLE_COLUMNS]]
    for entry in report["circuits"]:
        row = []
        for _, key, fmt in _TABLE_COLUMNS:
            v = entry.get(key)
            if v is None:
                row.append("-")
            elif fmt == "s":
                row.append(str(v))
            elif fmt == "d":
                row.append(f"{v:d}")
            else:
                row.append(f"{v:{fmt}}")
        rows.append(row)
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip()
             for r in rows]
    return "\n".join(lines)
