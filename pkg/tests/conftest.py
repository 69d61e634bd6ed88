from pathlib import Path

import numpy as np
import pytest

from qsplit import Circuit, Gate, GateKind, benchmarks_dir, parse_qasm

ALL_KINDS = tuple(GateKind)
PERMUTATION_KINDS = (GateKind.X, GateKind.CX, GateKind.CCX, GateKind.SWAP)


def random_circuit(rng: np.random.Generator, num_qubits: int, max_gates: int,
                   kinds=ALL_KINDS, name: str = "rand") -> Circuit:
    """Seeded random circuit over the given kinds (arity-compatible only)."""
    usable = [k for k in kinds if k.arity <= num_qubits]
    n_gates = int(rng.integers(0, max_gates + 1))
    gates = []
    for _ in range(n_gates):
        kind = usable[int(rng.integers(len(usable)))]
        ops = rng.choice(num_qubits, size=kind.arity, replace=False)
        gates.append(Gate(kind, tuple(int(q) for q in ops)))
    return Circuit(num_qubits, tuple(gates), name)


def load_benchmarks() -> dict[str, Circuit]:
    out = {}
    for path in sorted(Path(benchmarks_dir()).glob("*.qasm")):
        out[path.stem] = parse_qasm(path.read_text(), path.stem)
    return out


@pytest.fixture(scope="session")
def benchmarks() -> dict[str, Circuit]:
    return load_benchmarks()


@pytest.fixture(scope="session")
def client():
    from fastapi.testclient import TestClient

    from qsplit.service.app import create_app

    with TestClient(create_app()) as c:
        yield c
