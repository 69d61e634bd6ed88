"""Interlocking per-qubit cuts: manifest generation, split, and recombination.

A manifest assigns each original qubit a cut layer t_q: gates on q at layers
below t_q belong to the left segment, the rest to the right. A valid cut
never straddles a gate, and interlocking means the cut layers are not all
equal. Segments are re-indexed onto their own (possibly smaller) registers;
the qubit maps in the manifest are the only way back.

Generation guarantees the owner-side structure: every inverse gate lands in
the left segment and at least one inserted gate lands in the right one, so
the left segment is R^-1 plus early original gates and the right segment is
R plus the rest. This is done by forcing a designated inserted gate (and
everything at-or-after it on its wires) to the right via per-wire cut upper
bounds; the straddle repair only ever raises cuts and provably respects
those bounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .circuit import Circuit, Gate, canonical_order, layering
from .obfuscate import ObfuscatedCircuit

_GENERATION_ATTEMPTS = 64


class SplitError(ValueError):
    """Manifest/circuit mismatch or inconsistent segments."""


class InfeasibleSplitError(ValueError):
    """No interlocking cut exists for this circuit/seed."""


@dataclass(frozen=True)
class SplitManifest:
    original_num_qubits: int
    cut_layers: tuple[int, ...]
    qubit_map_l: tuple[int, ...]  # segment-local index -> original index
    qubit_map_r: tuple[int, ...]
    seed: int = 0
    version: int = 1

    def validate_structure(self) -> None:
        if self.original_num_qubits < 0:
            raise SplitError("original_num_qubits must be non-negative")
        if len(self.cut_layers) != self.original_num_qubits:
            raise SplitError(
                f"cut_layers has {len(self.cut_layers)} entries for "
                f"{self.original_num_qubits} qubits")
        for name, m in (("qubit_map_L", self.qubit_map_l), ("qubit_map_R", self.qubit_map_r)):
            if len(set(m)) != len(m):
                raise SplitError(f"{name} is not injective")
            if any(not 0 <= q < self.original_num_qubits for q in m):
                raise SplitError(f"{name} references a qubit outside the original register")


@dataclass(frozen=True)
class Segment:
    circuit: Circuit
    side: Literal["L", "R"]


def _gate_side(cuts: tuple[int, ...], lvl: int, g: Gate) -> str:
    """'L', 'R', or 'X' (straddling)."""
    left = [cuts[q] > lvl for q in g.operands]
    if all(left):
        return "L"
    if not any(left):
        return "R"
    return "X"


def validate_manifest(m: SplitManifest, c: Circuit) -> list[str]:
    """Check m against c; returns each gate's side. Raises SplitError."""
    m.validate_structure()
    if m.original_num_qubits != c.num_qubits:
        raise SplitError(
            f"manifest is for {m.original_num_qubits} qubits, circuit has {c.num_qubits}")
    lay = layering(c)
    for q, t in enumerate(m.cut_layers):
        if not 0 <= t <= lay.depth:
            raise SplitError(f"cut_layers[{q}]={t} exceeds circuit depth {lay.depth}")
    sides = []
    for i, g in enumerate(c.gates):
        side = _gate_side(m.cut_layers, lay.layer_of[i], g)
        if side == "X":
            raise SplitError(
                f"gate {i} ({g.kind.value} {g.operands}) straddles the cut boundary")
        sides.append(side)
    used_l = sorted({q for i, g in enumerate(c.gates) if sides[i] == "L" for q in g.operands})
    used_r = sorted({q for i, g in enumerate(c.gates) if sides[i] == "R" for q in g.operands})
    if sorted(m.qubit_map_l) != used_l:
        raise SplitError("qubit_map_L does not cover exactly the qubits used on the left")
    if sorted(m.qubit_map_r) != used_r:
        raise SplitError("qubit_map_R does not cover exactly the qubits used on the right")
    return sides


def _must_right_closure(c: Circuit, seed_gate: int) -> set[int]:
    """Gates forced right of the cut with seed_gate: itself plus everything
    at-or-after it on any shared wire, transitively."""
    wire_seq: dict[int, list[int]] = {}
    for i, g in enumerate(c.gates):
        for q in g.operands:
            wire_seq.setdefault(q, []).append(i)
    pos = {(q, i): k for q, seq in wire_seq.items() for k, i in enumerate(seq)}
    closure = {seed_gate}
    work = [seed_gate]
    while work:
        i = work.pop()
        for q in c.gates[i].operands:
            seq = wire_seq[q]
            for j in seq[pos[(q, i)] + 1:]:
                if j not in closure:
                    closure.add(j)
                    work.append(j)
    return closure


def generate_interlock_pattern(o: ObfuscatedCircuit, seed: int,
                               min_distinct: int = 2) -> SplitManifest:
    """Seed-deterministic interlocking manifest for an obfuscated circuit."""
    c = o.circuit
    lay = layering(c)
    d = lay.depth
    if d < 2:
        raise InfeasibleSplitError(f"depth {d} < 2: nothing to interlock")
    if not o.r_gate_indices:
        raise InfeasibleSplitError("obfuscated circuit has no inserted gates")

    rng = np.random.default_rng(seed)
    for _ in range(_GENERATION_ATTEMPTS):
        designated = o.r_gate_indices[int(rng.integers(len(o.r_gate_indices)))]
        closure = _must_right_closure(c, designated)
        # Per-wire cap: cut must stay at or below the first must-right gate.
        cap = [d - 1] * c.num_qubits
        for i in closure:
            for q in c.gates[i].operands:
                cap[q] = min(cap[q], lay.layer_of[i])
        if any(t < 1 for t in cap):
            continue  # designated gate unusable (cannot keep inverses left)
        cuts = [int(rng.integers(1, cap[q] + 1)) for q in range(c.num_qubits)]
        cuts = _repair(c, lay, cuts)
        if _acceptable(o, lay, cuts, min_distinct):
            sides = [_gate_side(tuple(cuts), lay.layer_of[i], g)
                     for i, g in enumerate(c.gates)]
            used_l = tuple(sorted({q for i, g in enumerate(c.gates)
                                   if sides[i] == "L" for q in g.operands}))
            used_r = tuple(sorted({q for i, g in enumerate(c.gates)
                                   if sides[i] == "R" for q in g.operands}))
            manifest = SplitManifest(c.num_qubits, tuple(cuts), used_l, used_r, seed)
            validate_manifest(manifest, c)
            return manifest
    raise InfeasibleSplitError(
        f"no interlocking cut with {min_distinct} distinct layers found "
        f"after {_GENERATION_ATTEMPTS} attempts (seed {seed})")


def _repair(c: Circuit, lay, cuts: list[int]) -> list[int]:
    """Raise the lower cuts of straddling gates until no gate straddles.

    Monotone (cuts only increase, bounded by depth) so it terminates; pulls
    straddlers wholly into the left segment, which keeps the inverse gates
    left and never pushes a cut past the must-right caps (straddlers are
    never in the closure, so their layer is strictly below every cap).
    """
    changed = True
    while changed:
        changed = False
        for i, g in enumerate(c.gates):
            lvl = lay.layer_of[i]
            if _gate_side(tuple(cuts), lvl, g) == "X":
                for q in g.operands:
                    if cuts[q] <= lvl:
                        cuts[q] = lvl + 1
                changed = True
    return cuts


def _acceptable(o: ObfuscatedCircuit, lay, cuts: list[int], min_distinct: int) -> bool:
    if len(set(cuts)) < min_distinct:
        return False
    tup = tuple(cuts)
    for i in o.inverse_gate_indices:
        if _gate_side(tup, lay.layer_of[i], o.circuit.gates[i]) != "L":
            return False
    return any(_gate_side(tup, lay.layer_of[i], o.circuit.gates[i]) == "R"
               for i in o.r_gate_indices)


def split(o: ObfuscatedCircuit | Circuit, m: SplitManifest) -> tuple[Segment, Segment]:
    """Cut the circuit along the manifest into re-indexed L and R segments."""
    c = o.circuit if isinstance(o, ObfuscatedCircuit) else o
    sides = validate_manifest(m, c)
    to_local_l = {orig: loc for loc, orig in enumerate(m.qubit_map_l)}
    to_local_r = {orig: loc for loc, orig in enumerate(m.qubit_map_r)}
    gates_l, gates_r = [], []
    for g, side in zip(c.gates, sides):
        if side == "L":
            gates_l.append(Gate(g.kind, tuple(to_local_l[q] for q in g.operands)))
        else:
            gates_r.append(Gate(g.kind, tuple(to_local_r[q] for q in g.operands)))
    # a trailing measure-all travels with the temporally last segment
    left = Segment(Circuit(len(m.qubit_map_l), tuple(gates_l), f"{c.name}_l"), "L")
    right = Segment(Circuit(len(m.qubit_map_r), tuple(gates_r), f"{c.name}_r",
                            measure_all=c.measure_all), "R")
    return left, right


def recombine(left: Segment, right: Segment, m: SplitManifest) -> Circuit:
    """Map both segments back through the qubit maps and merge.

    The merged gate list is re-emitted in canonical (ASAP layer-major)
    order, so recombine(split(o, m)) reproduces o.circuit gate-for-gate
    whenever o.circuit is canonically ordered, and compiled segments
    recombine into a functional equivalent of the original.
    """
    m.validate_structure()
    out: list[Gate] = []
    for seg, qmap in ((left, m.qubit_map_l), (right, m.qubit_map_r)):
        if seg.circuit.num_qubits != len(qmap):
            raise SplitError(
                f"segment {seg.side} has {seg.circuit.num_qubits} qubits but its "
                f"qubit map covers {len(qmap)}")
        for g in seg.circuit.gates:
            for q in g.operands:
                if q >= len(qmap):
                    raise SplitError(f"segment {seg.side} local index {q} outside its qubit map")
            out.append(Gate(g.kind, tuple(qmap[q] for q in g.operands)))
    measured = left.circuit.measure_all or right.circuit.measure_all
    return canonical_order(
        Circuit(m.original_num_qubits, tuple(out), name="recombined",
                measure_all=measured))
