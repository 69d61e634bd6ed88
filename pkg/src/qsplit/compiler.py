"""Mock third-party compiler: peephole cancellation and SWAP-insertion routing.

This pass deliberately stands in for an untrusted external compiler. Its API
accepts only a circuit and a coupling graph (no manifests, no obfuscation
records), mirroring the deployment where each compiler sees one segment.
Routing is naive greedy shortest-path; layout tracking lets the owner undo
the final permutation before recombination.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, Gate
from .gates import GateKind
from .splitting import Segment


@dataclass(frozen=True)
class CouplingGraph:
    num_nodes: int
    edges: frozenset[tuple[int, int]]  # normalized (low, high)

    def __post_init__(self) -> None:
        norm = frozenset((min(a, b), max(a, b)) for a, b in self.edges)
        object.__setattr__(self, "edges", norm)
        if self.num_nodes < 1:
            raise ValueError("graph needs at least one node")
        for a, b in norm:
            if a == b:
                raise ValueError(f"self-loop on node {a}")
            if not 0 <= a < self.num_nodes or not 0 <= b < self.num_nodes:
                raise ValueError(f"edge ({a},{b}) references a missing node")
        if not self._connected():
            raise ValueError("coupling graph must be connected")

    def _connected(self) -> bool:
        if self.num_nodes == 1:
            return True
        seen = {0}
        work = [0]
        while work:
            v = work.pop()
            for w in self.neighbors(v):
                if w not in seen:
                    seen.add(w)
                    work.append(w)
        return len(seen) == self.num_nodes

    def neighbors(self, v: int) -> list[int]:
        return sorted({b if a == v else a for a, b in self.edges if v in (a, b)})

    def adjacent(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.edges

    def is_complete(self) -> bool:
        return len(self.edges) == self.num_nodes * (self.num_nodes - 1) // 2

    def shortest_path(self, a: int, b: int) -> list[int]:
        """BFS path a..b; neighbors explored in index order, so ties break low."""
        prev = {a: a}
        queue = deque([a])
        while queue:
            v = queue.popleft()
            if v == b:
                break
            for w in self.neighbors(v):
                if w not in prev:
                    prev[w] = v
                    queue.append(w)
        path = [b]
        while path[-1] != a:
            path.append(prev[path[-1]])
        return path[::-1]

    @classmethod
    def line(cls, n: int) -> "CouplingGraph":
        return cls(n, frozenset((i, i + 1) for i in range(n - 1)))

    @classmethod
    def ring(cls, n: int) -> "CouplingGraph":
        if n <= 2:
            return cls.line(n)
        return cls(n, frozenset((i, (i + 1) % n) for i in range(n)))

    @classmethod
    def full(cls, n: int) -> "CouplingGraph":
        return cls(n, frozenset((i, j) for i in range(n) for j in range(i + 1, n)))


@dataclass(frozen=True)
class CompiledSegment:
    circuit: Circuit
    initial_layout: tuple[int, ...]  # logical -> physical
    final_layout: tuple[int, ...]


def peephole_optimize(c: Circuit) -> Circuit:
    """Cancel adjacent (gate, adjoint) pairs on identical operands to fixpoint.

    A pair cancels only when no gate in between touches any of its operands.
    Never increases the gate count; unitary-equivalent to the input.
    """
    gates = list(c.gates)
    while True:
        cancelled = False
        for i in range(len(gates)):
            g = gates[i]
            ops = set(g.operands)
            for j in range(i + 1, len(gates)):
                if ops & set(gates[j].operands):
                    if gates[j].kind == g.kind.adjoint and gates[j].operands == g.operands:
                        del gates[j], gates[i]
                        cancelled = True
                    break
            if cancelled:
                break
        if not cancelled:
            return c.with_gates(tuple(gates))


# Standard 6-CX Toffoli network (exact, no global phase).
def _ccx_network(a: int, b: int, c: int) -> list[Gate]:
    k = GateKind
    return [
        Gate(k.H, (c,)),
        Gate(k.CX, (b, c)), Gate(k.TDG, (c,)),
        Gate(k.CX, (a, c)), Gate(k.T, (c,)),
        Gate(k.CX, (b, c)), Gate(k.TDG, (c,)),
        Gate(k.CX, (a, c)), Gate(k.T, (b,)), Gate(k.T, (c,)),
        Gate(k.H, (c,)), Gate(k.CX, (a, b)),
        Gate(k.T, (a,)), Gate(k.TDG, (b,)), Gate(k.CX, (a, b)),
    ]


def decompose_ccx(c: Circuit) -> Circuit:
    out: list[Gate] = []
    for g in c.gates:
        if g.kind is GateKind.CCX:
            out.extend(_ccx_network(*g.operands))
        else:
            out.append(g)
    return c.with_gates(tuple(out))


def route(c: Circuit, graph: CouplingGraph, seed: int = 0) -> CompiledSegment:
    """Map the circuit onto the coupling graph, inserting SWAPs as needed.

    The initial layout is trivial (logical i on physical i). Non-adjacent
    two-qubit gates walk their first operand along the BFS shortest path.
    The pass is deterministic; `seed` is accepted for interface stability
    but not consumed. Output acts on physical wires and equals the input up
    to the final-layout permutation.
    """
    del seed
    n_log = c.num_qubits
    n_phys = graph.num_nodes
    if n_phys < n_log:
        raise ValueError(f"graph has {n_phys} nodes but circuit needs {n_log}")
    work = c if graph.is_complete() else decompose_ccx(c)

    l2p = list(range(n_phys))
    p2l = list(range(n_phys))
    out: list[Gate] = []

    def do_swap(u: int, v: int) -> None:
        out.append(Gate(GateKind.SWAP, (min(u, v), max(u, v))))
        lu, lv = p2l[u], p2l[v]
        p2l[u], p2l[v] = lv, lu
        l2p[lu], l2p[lv] = v, u

    for g in work.gates:
        if g.kind.arity == 1:
            out.append(Gate(g.kind, (l2p[g.operands[0]],)))
            continue
        if g.kind.arity == 2:
            a, b = (l2p[q] for q in g.operands)
            if not graph.adjacent(a, b):
                path = graph.shortest_path(a, b)
                for hop in path[1:-1]:
                    do_swap(a, hop)
                    a = hop
            out.append(Gate(g.kind, (l2p[g.operands[0]], l2p[g.operands[1]])))
            continue
        # CCX survives only on complete graphs, where all pairs are adjacent.
        out.append(Gate(g.kind, tuple(l2p[q] for q in g.operands)))

    circuit = Circuit(n_phys, tuple(out), name=c.name, measure_all=c.measure_all)
    return CompiledSegment(circuit, tuple(range(n_phys)), tuple(l2p))


def undo_layout(cs: CompiledSegment) -> Circuit:
    """Append SWAPs so the net permutation is the identity.

    The result is functionally equal to the circuit that was routed (owner-
    side step; the appended SWAPs need not respect the coupling graph).
    """
    n = cs.circuit.num_qubits
    l2p = list(cs.final_layout)
    p2l = [0] * n
    for logical, phys in enumerate(l2p):
        p2l[phys] = logical
    gates = list(cs.circuit.gates)
    for pos in range(n):
        while p2l[pos] != pos:
            m = p2l[pos]  # logical m sits at pos; move it home
            gates.append(Gate(GateKind.SWAP, (min(pos, m), max(pos, m))))
            other = p2l[m]
            p2l[m], p2l[pos] = m, other
            l2p[m], l2p[other] = m, pos
    return cs.circuit.with_gates(tuple(gates))


def compile_segment(segment: Segment | Circuit, graph: CouplingGraph,
                    seed: int = 0) -> CompiledSegment:
    """The full untrusted pass: peephole optimization, then routing."""
    c = segment.circuit if isinstance(segment, Segment) else segment
    return route(peephole_optimize(c), graph, seed)


def layout_permutation_matrix(layout: tuple[int, ...]) -> np.ndarray:
    """Permutation matrix P with unitary(routed) == P @ unitary(input):
    the bit at logical position q moves to physical position layout[q]."""
    n = len(layout)
    dim = 2**n
    p = np.zeros((dim, dim))
    for i in range(dim):
        j = 0
        for q in range(n):
            j |= ((i >> q) & 1) << layout[q]
        p[j, i] = 1.0
    return p
