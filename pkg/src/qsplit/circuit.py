"""Circuit values, ASAP layering, depth, inversion, and composition.

Circuits are immutable: every transform returns a new value. Gate order is
program order; layering derives the canonical ASAP schedule from it (each
gate sits one past its latest same-wire predecessor).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .gates import GateKind


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    operands: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "operands", tuple(int(q) for q in self.operands))
        if len(self.operands) != self.kind.arity:
            raise ValueError(
                f"{self.kind.value} takes {self.kind.arity} operand(s), got {len(self.operands)}"
            )
        if len(set(self.operands)) != len(self.operands):
            raise ValueError(f"duplicate operand in {self.kind.value} {self.operands}")
        if any(q < 0 for q in self.operands):
            raise ValueError("negative qubit index")

    @property
    def adjoint(self) -> "Gate":
        return Gate(self.kind.adjoint, self.operands)


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    gates: tuple[Gate, ...] = ()
    name: str = field(default="", compare=False)
    measure_all: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.num_qubits < 0:
            raise ValueError("num_qubits must be non-negative")
        for g in self.gates:
            if max(g.operands) >= self.num_qubits:
                raise ValueError(
                    f"gate {g.kind.value} {g.operands} exceeds register of {self.num_qubits}"
                )

    @property
    def gate_count(self) -> int:
        return len(self.gates)

    def with_gates(self, gates, name: str | None = None) -> "Circuit":
        return Circuit(self.num_qubits, tuple(gates),
                       self.name if name is None else name, self.measure_all)


@dataclass(frozen=True)
class Layering:
    layers: tuple[tuple[int, ...], ...]  # gate indices, grouped by layer
    layer_of: tuple[int, ...]  # gate index -> layer index

    @property
    def depth(self) -> int:
        return len(self.layers)


def layering(c: Circuit) -> Layering:
    """ASAP layering: layer(g) = 1 + max layer of earlier gates sharing a wire."""
    frontier = [0] * c.num_qubits
    layer_of: list[int] = []
    for g in c.gates:
        lvl = max((frontier[q] for q in g.operands), default=0)
        layer_of.append(lvl)
        for q in g.operands:
            frontier[q] = lvl + 1
    n_layers = max(layer_of, default=-1) + 1
    layers: list[list[int]] = [[] for _ in range(n_layers)]
    for idx, lvl in enumerate(layer_of):
        layers[lvl].append(idx)
    return Layering(tuple(tuple(l) for l in layers), tuple(layer_of))


def depth(c: Circuit) -> int:
    return layering(c).depth


def first_layer_by_qubit(c: Circuit, lay: Layering | None = None) -> list[int]:
    """Layer of each qubit's first gate; depth(c) for untouched qubits."""
    lay = lay or layering(c)
    first = [lay.depth] * c.num_qubits
    for idx, g in enumerate(c.gates):
        for q in g.operands:
            first[q] = min(first[q], lay.layer_of[idx])
    return first


def invert(c: Circuit) -> Circuit:
    """Adjoint of each gate, in reverse order; invert(invert(c)) == c."""
    return c.with_gates(tuple(g.adjoint for g in reversed(c.gates)))


def compose(a: Circuit, b: Circuit) -> Circuit:
    if a.num_qubits != b.num_qubits:
        raise ValueError(
            f"qubit-count mismatch: {a.num_qubits} vs {b.num_qubits}"
        )
    return Circuit(a.num_qubits, a.gates + b.gates, a.name,
                   a.measure_all or b.measure_all)


def canonical_permutation(c: Circuit) -> list[int]:
    """Gate order sorted by (ASAP layer, lowest operand).

    Within a layer operand sets are disjoint, so the lowest operand breaks
    ties totally. Reordering by this permutation never changes any per-wire
    gate sequence.
    """
    lay = layering(c)
    return sorted(range(len(c.gates)),
                  key=lambda i: (lay.layer_of[i], min(c.gates[i].operands)))


def canonical_order(c: Circuit) -> Circuit:
    return c.with_gates(tuple(c.gates[i] for i in canonical_permutation(c)))
