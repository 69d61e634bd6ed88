"""Statevector simulation, shot sampling, synthetic noise, and outcome metrics.

Conventions:
- qubit 0 is the least significant bit of a basis index; outcome strings are
  written most-significant-first, so index 5 on 4 qubits reads "0101".
- Noise uses the quantum-trajectory method: after each gate an independent
  X flip is applied to each operand (probability p1 for 1-qubit gates, p2
  per operand for multi-qubit gates), and each measured bit flips with
  probability pm. This is a stand-in channel, not a device model; all-zero
  probabilities reproduce the noiseless path exactly.
- Everything is deterministic given (circuit, input, shots, noise, seed).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, Gate
from .gates import GateKind

STATEVECTOR_QUBIT_LIMIT = 20
UNITARY_QUBIT_LIMIT = 10

# Cache noiseless prefix states only while they fit in ~2^22 amplitudes.
_PREFIX_CACHE_AMPLITUDES = 1 << 22


def _apply(arr: np.ndarray, gate: Gate, n: int) -> np.ndarray:
    """Apply a gate to the first n axes of arr (shape (2,)*n + extra)."""
    k = gate.kind.arity
    axes = [n - 1 - q for q in gate.operands]
    moved = np.moveaxis(arr, axes, range(k))
    shape = moved.shape
    flat = moved.reshape(2**k, -1)
    flat = gate.kind.matrix @ flat
    return np.moveaxis(flat.reshape(shape), range(k), axes)


def run_statevector(c: Circuit, input_state: int = 0) -> np.ndarray:
    """Evolve the given basis state through the circuit; returns 2^n amplitudes."""
    n = c.num_qubits
    if n > STATEVECTOR_QUBIT_LIMIT:
        raise ValueError(f"statevector limited to {STATEVECTOR_QUBIT_LIMIT} qubits, got {n}")
    if not 0 <= input_state < 2**n:
        raise ValueError(f"input state {input_state} out of range for {n} qubits")
    state = np.zeros((2,) * n, dtype=complex)
    state.reshape(-1)[input_state] = 1.0
    for g in c.gates:
        state = _apply(state, g, n)
    state = state.reshape(-1)
    norm = np.linalg.norm(state)
    if abs(norm - 1.0) > 1e-9:
        raise AssertionError(f"statevector norm drifted to {norm}")
    return state


def unitary(c: Circuit) -> np.ndarray:
    """Full 2^n x 2^n unitary: gate matrices embedded on their operands, in program order."""
    n = c.num_qubits
    if n > UNITARY_QUBIT_LIMIT:
        raise ValueError(f"unitary limited to {UNITARY_QUBIT_LIMIT} qubits, got {n}")
    dim = 2**n
    u = np.eye(dim, dtype=complex).reshape((2,) * n + (dim,))
    for g in c.gates:
        u = _apply(u, g, n)
    return u.reshape(dim, dim)


def exact_distribution(c: Circuit, input_state: int = 0) -> np.ndarray:
    """Exact outcome probabilities |a_i|^2 for the noiseless circuit."""
    amps = run_statevector(c, input_state)
    return np.abs(amps) ** 2


@dataclass(frozen=True)
class NoiseModel:
    p1: float = 0.001
    p2: float = 0.01
    pm: float = 0.02

    def __post_init__(self) -> None:
        for name in ("p1", "p2", "pm"):
            v = getattr(self, name)
            if not 0.0 <= v <= 0.5:
                raise ValueError(f"{name}={v} outside [0, 0.5]")

    @property
    def is_noiseless(self) -> bool:
        return self.p1 == 0.0 and self.p2 == 0.0 and self.pm == 0.0


@dataclass(frozen=True)
class CountDist:
    counts: dict[str, int]
    shots: int

    def __post_init__(self) -> None:
        if self.shots < 1:
            raise ValueError("shots must be positive")
        if sum(self.counts.values()) != self.shots:
            raise ValueError("counts do not sum to shots")
        widths = {len(k) for k in self.counts}
        if len(widths) != 1:
            raise ValueError("inconsistent outcome widths")
        if any(set(k) - {"0", "1"} for k in self.counts):
            raise ValueError("outcomes must be bitstrings")
        if any(v < 0 for v in self.counts.values()):
            raise ValueError("negative count")

    @property
    def bits(self) -> int:
        return len(next(iter(self.counts)))

    def to_json_dict(self) -> dict:
        return {"shots": self.shots, "counts": dict(sorted(self.counts.items()))}

    @classmethod
    def from_json_dict(cls, d: dict) -> "CountDist":
        if "shots" not in d or "counts" not in d:
            raise ValueError("count distribution needs 'shots' and 'counts'")
        return cls({str(k): int(v) for k, v in d["counts"].items() if v}, int(d["shots"]))


def _bitstring(index: int, n: int) -> str:
    return format(index, f"0{n}b") if n else ""


def _counts_from_indices(indices: np.ndarray, n: int, shots: int) -> CountDist:
    values, counts = np.unique(indices, return_counts=True)
    return CountDist({_bitstring(int(v), n): int(c) for v, c in zip(values, counts)}, shots)


_PERMUTATION_KINDS = {GateKind.X, GateKind.CX, GateKind.CCX, GateKind.SWAP}


def _walk_basis(idx: np.ndarray, g: Gate) -> np.ndarray:
    """Apply a permutation gate to a vector of basis indices in place."""
    k, ops = g.kind, g.operands
    if k is GateKind.X:
        idx ^= 1 << ops[0]
    elif k is GateKind.CX:
        c, t = ops
        idx ^= ((idx >> c) & 1) << t
    elif k is GateKind.CCX:
        a, b, t = ops
        idx ^= ((idx >> a) & (idx >> b) & 1) << t
    else:  # SWAP
        a, b = ops
        diff = ((idx >> a) ^ (idx >> b)) & 1
        idx ^= (diff << a) | (diff << b)
    return idx


def is_permutation_circuit(c: Circuit) -> bool:
    """True when every gate maps basis states to basis states."""
    return all(g.kind in _PERMUTATION_KINDS for g in c.gates)


def _flip_mix(p: np.ndarray, q: int, n: int, prob: float) -> np.ndarray:
    flipped = np.flip(p.reshape((2,) * n), axis=n - 1 - q).reshape(-1)
    return (1.0 - prob) * p + prob * flipped


def exact_noisy_distribution(c: Circuit, input_state: int,
                             noise: NoiseModel) -> np.ndarray:
    """Exact outcome distribution under the bit-flip channel.

    Permutation circuits only: gates permute basis states and each noise
    event is a classical bit-flip mixture, so the whole channel is a Markov
    chain over 2^n basis states and the trajectory average has a closed
    form. This is the estimator-free oracle the sampled TVDs converge to.
    """
    if not is_permutation_circuit(c):
        raise ValueError("exact noisy distribution requires a permutation-only circuit")
    n = c.num_qubits
    if n > STATEVECTOR_QUBIT_LIMIT:
        raise ValueError(f"limited to {STATEVECTOR_QUBIT_LIMIT} qubits, got {n}")
    p = np.zeros(2**n)
    p[input_state] = 1.0
    for g in c.gates:
        target = _walk_basis(np.arange(2**n, dtype=np.int64), g)
        moved = np.zeros_like(p)
        moved[target] = p
        p = moved
        rate = noise.p1 if g.kind.arity == 1 else noise.p2
        if rate > 0.0:
            for q in g.operands:
                p = _flip_mix(p, q, n, rate)
    if noise.pm > 0.0:
        for q in range(n):
            p = _flip_mix(p, q, n, noise.pm)
    return p


def _sample_basis_trajectories(c: Circuit, input_state: int, shots: int,
                               noise: NoiseModel, rng: np.random.Generator) -> np.ndarray:
    """Trajectory sampler for permutation-only circuits.

    Basis states stay basis states under X/CX/CCX/SWAP and under the bit-flip
    channel, so each shot reduces to an integer walk; distributionally
    identical to the statevector trajectories, orders of magnitude cheaper.
    """
    idx = np.full(shots, input_state, dtype=np.int64)
    for g in c.gates:
        _walk_basis(idx, g)
        p = noise.p1 if g.kind.arity == 1 else noise.p2
        if p > 0.0:
            for q in g.operands:
                idx ^= (rng.random(shots) < p).astype(np.int64) << q
    if noise.pm > 0.0:
        for q in range(c.num_qubits):
            idx ^= (rng.random(shots) < noise.pm).astype(np.int64) << q
    return idx


def _draw_outcome(state: np.ndarray, u: float) -> int:
    cum = np.cumsum(np.abs(state.reshape(-1)) ** 2)
    cum[-1] = 1.0  # guard float drift at the top bin
    return int(np.searchsorted(cum, u, side="right"))


def _sample_trajectories(c: Circuit, input_state: int, shots: int,
                         noise: NoiseModel, rng: np.random.Generator) -> np.ndarray:
    """Statevector trajectories for circuits with non-permutation gates.

    Shots share the noiseless evolution until their first flip, so the
    prefix states are computed once (memory permitting) and only the
    post-flip suffix is evolved per shot.
    """
    n = c.num_qubits
    dim = 2**n

    events: list[tuple[int, int]] = []  # (gate index, qubit)
    rates: list[float] = []
    for gi, g in enumerate(c.gates):
        p = noise.p1 if g.kind.arity == 1 else noise.p2
        if p > 0.0:
            events.extend((gi, q) for q in g.operands)
            rates.extend([p] * len(g.operands))
    flips = np.zeros((max(len(events), 1), shots), dtype=bool)
    for ei, p in enumerate(rates):
        flips[ei] = rng.random(shots) < p
    u_outcome = rng.random(shots)

    state = np.zeros((2,) * n, dtype=complex)
    state.reshape(-1)[input_state] = 1.0
    keep_prefix = dim * (len(c.gates) + 1) <= _PREFIX_CACHE_AMPLITUDES
    prefix = [state]
    for g in c.gates:
        state = _apply(state, g, n)
        if keep_prefix:
            prefix.append(state)
    final_state = state

    x_gate = [Gate(GateKind.X, (q,)) for q in range(n)]
    first_flip = np.where(flips.any(axis=0), flips.argmax(axis=0), -1) if events \
        else np.full(shots, -1)

    outcomes = np.empty(shots, dtype=np.int64)
    clean = np.nonzero(first_flip < 0)[0]
    if clean.size:
        cum = np.cumsum(np.abs(final_state.reshape(-1)) ** 2)
        cum[-1] = 1.0
        outcomes[clean] = np.searchsorted(cum, u_outcome[clean], side="right")
    for shot in np.nonzero(first_flip >= 0)[0]:
        ei = int(first_flip[shot])
        gi = events[ei][0]
        if keep_prefix:
            st = prefix[gi + 1]
        else:
            st = prefix[0]
            for g in c.gates[:gi + 1]:
                st = _apply(st, g, n)
        # flips attached to gate gi, then the remaining gates with theirs
        while ei < len(events) and events[ei][0] == gi:
            if flips[ei, shot]:
                st = _apply(st, x_gate[events[ei][1]], n)
            ei += 1
        for gj in range(gi + 1, len(c.gates)):
            st = _apply(st, c.gates[gj], n)
            while ei < len(events) and events[ei][0] == gj:
                if flips[ei, shot]:
                    st = _apply(st, x_gate[events[ei][1]], n)
                ei += 1
        outcomes[shot] = _draw_outcome(st, float(u_outcome[shot]))

    if noise.pm > 0.0:
        for q in range(n):
            flip = rng.random(shots) < noise.pm
            outcomes ^= flip.astype(np.int64) << q
    return outcomes


def sample_counts(c: Circuit, input_state: int = 0, shots: int = 1000,
                  noise: NoiseModel | None = None, seed: int = 0) -> CountDist:
    """Outcome histogram over `shots` runs; measures every qubit."""
    if shots < 1:
        raise ValueError("shots must be positive")
    n = c.num_qubits
    rng = np.random.default_rng(seed)
    if noise is None or noise.is_noiseless:
        probs = exact_distribution(c, input_state)
        counts = rng.multinomial(shots, probs)
        nz = np.nonzero(counts)[0]
        return CountDist({_bitstring(int(i), n): int(counts[i]) for i in nz}, shots)
    if is_permutation_circuit(c):
        outcomes = _sample_basis_trajectories(c, input_state, shots, noise, rng)
    else:
        outcomes = _sample_trajectories(c, input_state, shots, noise, rng)
    return _counts_from_indices(outcomes, n, shots)


def tvd(a: CountDist, b: CountDist) -> float:
    """Total variation distance: sum |a_i - b_i| / (2N) over all outcomes."""
    if a.shots != b.shots:
        raise ValueError(f"shot-count mismatch: {a.shots} vs {b.shots}")
    if a.bits != b.bits:
        raise ValueError(f"outcome width mismatch: {a.bits} vs {b.bits}")
    keys = a.counts.keys() | b.counts.keys()
    total = sum(abs(a.counts.get(k, 0) - b.counts.get(k, 0)) for k in keys)
    return total / (2 * a.shots)


def accuracy(d: CountDist, ideal: str) -> float:
    """Fraction of shots that produced the ideal outcome string."""
    if len(ideal) != d.bits:
        raise ValueError(f"ideal width {len(ideal)} != outcome width {d.bits}")
    return d.counts.get(ideal, 0) / d.shots


def distribution_tvd(p: np.ndarray, q: np.ndarray) -> float:
    """Exact statevector-level distance sum |p_i - q_i| / 2."""
    if p.shape != q.shape:
        raise ValueError("distribution length mismatch")
    return float(np.abs(p - q).sum() / 2.0)


def counts_to_distribution(d: CountDist) -> np.ndarray:
    out = np.zeros(2**d.bits)
    for k, v in d.counts.items():
        out[int(k, 2)] = v / d.shots
    return out
