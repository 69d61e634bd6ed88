"""Depth-neutral random gate insertion and inverse-prefix construction.

The obfuscator walks the circuit's layers ("columns") in order. At each
column it may insert one random gate, drawn from the policy, into slots
that are prefix-idle: a slot (layer t, qubit q) qualifies only if the
original circuit has no gate on q at any layer <= t. Insertions also
consume the wire (one inserted gate per qubit), so the inserted circuit R
is wire-disjoint and sits entirely in the leading idle region.

Each inserted gate's adjoint is then placed in an earlier prefix-idle slot
on the same wires, which is always possible because insertion requires
column >= 1 (unless the policy explicitly allows depth growth). The result
is the inverse-prefixed circuit: per wire, adjoint then gate then the
original gates, so the pair cancels and the whole circuit stays
functionally identical while the ASAP depth is unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import (Circuit, Gate, canonical_permutation, first_layer_by_qubit,
                      layering)
from .gates import GateKind
from . import sim

EQUIVALENCE_CHECK_LIMIT = 8
_ALLOWED_KINDS = (GateKind.X, GateKind.CX, GateKind.H)


class NoSlotError(RuntimeError):
    """Circuit too dense to obfuscate depth-neutrally at this gate limit."""


class RecordError(ValueError):
    """Obfuscation record does not match the circuit it claims to describe."""


@dataclass(frozen=True)
class EmptySlotMap:
    idle: tuple[tuple[int, ...], ...]  # per layer, sorted idle qubit indices


def find_empty_positions(c: Circuit) -> EmptySlotMap:
    """Per-layer idle qubits: all_qubits minus the operands used in that layer."""
    lay = layering(c)
    all_qubits = set(range(c.num_qubits))
    idle = []
    for layer in lay.layers:
        used = {q for idx in layer for q in c.gates[idx].operands}
        idle.append(tuple(sorted(all_qubits - used)))
    return EmptySlotMap(tuple(idle))


@dataclass(frozen=True)
class InsertionPolicy:
    gate_limit: int = 4
    kinds: tuple[GateKind, ...] = (GateKind.X, GateKind.CX)
    cx_probability: float = 0.5
    seed: int = 0
    allow_depth_growth: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "kinds", tuple(self.kinds))
        if self.gate_limit < 1:
            raise ValueError("gate_limit must be >= 1")
        if not self.kinds:
            raise ValueError("allowed kinds must be non-empty")
        for k in self.kinds:
            if k not in _ALLOWED_KINDS:
                raise ValueError(f"kind {k.value} not insertable (use X, CX, H)")
        if not 0.0 <= self.cx_probability <= 1.0:
            raise ValueError("cx_probability outside [0, 1]")


@dataclass(frozen=True)
class ObfuscationRecord:
    seed: int
    insertions: tuple[tuple[int, Gate], ...]  # (column/layer, gate)
    policy: InsertionPolicy
    r: Circuit
    r_inverse: Circuit
    original_name: str = ""


def insert_random_gates(c: Circuit, policy: InsertionPolicy) -> ObfuscationRecord:
    """Seeded column walk choosing the random circuit R (one gate per column)."""
    lay = layering(c)
    first = first_layer_by_qubit(c, lay)
    rng = np.random.default_rng(policy.seed)
    min_col = 0 if policy.allow_depth_growth else 1
    use_cx = GateKind.CX in policy.kinds
    single_kinds = sorted((k for k in policy.kinds if k.arity == 1), key=lambda k: k.value)

    insertions: list[tuple[int, Gate]] = []
    used: set[int] = set()
    for t in range(min_col, lay.depth):
        if len(insertions) >= policy.gate_limit:
            break
        avail = [q for q in range(c.num_qubits) if first[q] > t and q not in used]
        if not avail:
            continue
        u = rng.random()
        gate: Gate | None = None
        if use_cx and u < policy.cx_probability and len(avail) >= 2:
            pair_count = len(avail) * (len(avail) - 1) // 2
            pick = int(rng.integers(pair_count))
            a, b = _nth_pair(avail, pick)
            gate = Gate(GateKind.CX, (a, b))  # control = lower index
            used.update((a, b))
        elif single_kinds:
            q = avail[int(rng.integers(len(avail)))]
            kind = single_kinds[int(rng.integers(len(single_kinds)))]
            gate = Gate(kind, (q,))
            used.add(q)
        if gate is not None:
            insertions.append((t, gate))

    if not insertions:
        raise NoSlotError(
            "no prefix-idle slot available; retry with a smaller gate_limit, a "
            "sparser circuit, or allow_depth_growth")
    r = Circuit(c.num_qubits, tuple(g for _, g in insertions), name="r")
    r_inv = Circuit(c.num_qubits, tuple(g.adjoint for _, g in reversed(insertions)),
                    name="r_inverse")
    return ObfuscationRecord(policy.seed, tuple(insertions), policy, r, r_inv, c.name)


def _nth_pair(items: list[int], n: int) -> tuple[int, int]:
    """n-th 2-subset of items in lexicographic order (items sorted ascending)."""
    k = len(items)
    for i in range(k - 1):
        run = k - 1 - i
        if n < run:
            return items[i], items[i + 1 + n]
        n -= run
    raise IndexError("pair index out of range")


@dataclass(frozen=True)
class ObfuscatedCircuit:
    circuit: Circuit
    record: ObfuscationRecord
    r_gate_indices: tuple[int, ...]
    inverse_gate_indices: tuple[int, ...]
    depth_original: int
    depth_obfuscated: int
    depth_grew: bool
    equivalence_checked: bool = False
    equivalence_ok: bool | None = None


def build_obfuscated(c: Circuit, policy: InsertionPolicy) -> ObfuscatedCircuit:
    """Insert R and place R's adjoints in earlier prefix-idle slots.

    If every insertion sits at column >= 1 the adjoints fit before their
    partners on the same (otherwise untouched) wires and the ASAP depth is
    preserved exactly; column-0 insertions force a prepended layer and set
    depth_grew.
    """
    record = insert_random_gates(c, policy)
    return assemble(c, record)


def assemble(c: Circuit, record: ObfuscationRecord) -> ObfuscatedCircuit:
    lay = layering(c)
    d = lay.depth
    by_slot: dict[int, list[tuple[int, Gate, str]]] = {}
    prepend: list[Gate] = []
    for t, g in record.insertions:
        if t >= 1:
            by_slot.setdefault(t - 1, []).append((0, g.adjoint, "rinv"))
        else:
            prepend.append(g.adjoint)
        by_slot.setdefault(t, []).append((1, g, "r"))

    merged: list[tuple[Gate, str]] = [(g, "rinv") for g in prepend]
    for t in range(d):
        for _, g, tag in sorted(by_slot.get(t, ()), key=lambda x: (x[0], min(x[1].operands))):
            merged.append((g, tag))
        for idx in lay.layers[t]:
            merged.append((c.gates[idx], "orig"))

    raw = Circuit(c.num_qubits, tuple(g for g, _ in merged), c.name, c.measure_all)
    perm = canonical_permutation(raw)
    gates = tuple(raw.gates[i] for i in perm)
    tags = [merged[i][1] for i in perm]
    circuit = Circuit(c.num_qubits, gates, c.name, c.measure_all)

    r_idx = tuple(i for i, tag in enumerate(tags) if tag == "r")
    inv_idx = tuple(i for i, tag in enumerate(tags) if tag == "rinv")
    d_obf = layering(circuit).depth
    grew = bool(prepend)

    checked, ok = False, None
    if c.num_qubits <= EQUIVALENCE_CHECK_LIMIT:
        checked = True
        ok = bool(np.allclose(sim.unitary(circuit), sim.unitary(c), atol=1e-9))
    return ObfuscatedCircuit(circuit, record, r_idx, inv_idx, d, d_obf, grew, checked, ok)


def strip_inverse(o: ObfuscatedCircuit) -> Circuit:
    """The RC portion: obfuscated circuit minus the R^-1 gates.

    This is what an adversary holding only the right half reconstructs, and
    what the obfuscation-efficacy TVD is measured against.
    """
    drop = set(o.inverse_gate_indices)
    gates = tuple(g for i, g in enumerate(o.circuit.gates) if i not in drop)
    return o.circuit.with_gates(gates, name=(o.circuit.name or "c") + "_rc")


def locate_record(circuit: Circuit, record: ObfuscationRecord) -> ObfuscatedCircuit:
    """Rebind a record to its obfuscated circuit (file round-trip path).

    Each inserted gate and its adjoint are, by construction, the first two
    gates on their wires; locate them and rebuild the index sets.
    """
    claimed: set[int] = set()
    r_idx: list[int] = []
    inv_idx: list[int] = []
    for _, g in record.insertions:
        inv = _find_gate(circuit, g.adjoint, claimed)
        if inv is None:
            raise RecordError(f"inverse of {g.kind.value} {g.operands} not found")
        claimed.add(inv)
        pos = _find_gate(circuit, g, claimed)
        if pos is None or pos < inv:
            raise RecordError(f"inserted gate {g.kind.value} {g.operands} not found after its inverse")
        claimed.add(pos)
        inv_idx.append(inv)
        r_idx.append(pos)
    original = circuit.with_gates(
        tuple(g for i, g in enumerate(circuit.gates) if i not in claimed))
    d_obf = layering(circuit).depth
    d_orig = layering(original).depth
    return ObfuscatedCircuit(circuit, record, tuple(sorted(r_idx)), tuple(sorted(inv_idx)),
                             d_orig, d_obf, depth_grew=d_obf > d_orig)


def _find_gate(c: Circuit, g: Gate, claimed: set[int]) -> int | None:
    for i, cand in enumerate(c.gates):
        if i not in claimed and cand == g:
            return i
    return None


def record_to_json_dict(record: ObfuscationRecord) -> dict:
    return {
        "seed": record.seed,
        "insertions": [
            {"layer": t, "kind": g.kind.value, "operands": list(g.operands)}
            for t, g in record.insertions
        ],
        "policy": {
            "gate_limit": record.policy.gate_limit,
            "kinds": [k.value for k in record.policy.kinds],
            "cx_probability": record.policy.cx_probability,
        },
    }


def record_from_json_dict(d: dict, num_qubits: int, original_name: str = "") -> ObfuscationRecord:
    try:
        policy = InsertionPolicy(
            gate_limit=int(d["policy"]["gate_limit"]),
            kinds=tuple(GateKind(k) for k in d["policy"]["kinds"]),
            cx_probability=float(d["policy"]["cx_probability"]),
            seed=int(d["seed"]),
        )
        insertions = tuple(
            (int(e["layer"]), Gate(GateKind(e["kind"]), tuple(e["operands"])))
            for e in d["insertions"]
        )
    except (KeyError, TypeError, ValueError) as e:
        raise RecordError(f"malformed obfuscation record: {e}") from e
    if not insertions:
        raise RecordError("record has no insertions")
    r = Circuit(num_qubits, tuple(g for _, g in insertions), name="r")
    r_inv = Circuit(num_qubits, tuple(g.adjoint for _, g in reversed(insertions)),
                    name="r_inverse")
    return ObfuscationRecord(int(d["seed"]), insertions, policy, r, r_inv, original_name)
