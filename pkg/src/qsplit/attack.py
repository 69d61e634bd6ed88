"""Colluding-compiler attack complexity: closed form, counting oracle, and
a small-scale exhaustive reconstruction demo.

The closed form counts injective partial qubit correspondences between a
held n-qubit segment and candidate partner segments of every size i up to
the machine limit:

    sum_i k_i * sum_{j=0..min(n,i)} C(n,j) * C(i,j) * j!

k_i is how many i-qubit candidate segments the other compiler exposes.
Everything uses exact big-integer arithmetic; 12! already overflows 32 bits
and realistic machine sizes overflow 64 quickly. j=0 (no shared qubits) is
counted, following the summation's lower bound.
"""

from __future__ import annotations

from itertools import combinations, permutations
from math import comb, factorial
from typing import Iterator, Sequence

import numpy as np

from .circuit import Circuit, Gate
from .splitting import Segment
from . import sim

ENUMERATION_LIMIT = 8
COLLUSION_QUBIT_LIMIT = 6


def attack_complexity(n: int, n_max: int, k: Sequence[int]) -> int:
    """Exact mapping count for a held n-qubit segment; k[i-1] = k_i."""
    if not 1 <= n <= n_max:
        raise ValueError(f"need 1 <= n <= n_max, got n={n}, n_max={n_max}")
    if len(k) != n_max:
        raise ValueError(f"k must have n_max={n_max} entries, got {len(k)}")
    if any(ki < 0 for ki in k):
        raise ValueError("k entries must be non-negative")
    total = 0
    for i in range(1, n_max + 1):
        inner = sum(comb(n, j) * comb(i, j) * factorial(j)
                    for j in range(min(n, i) + 1))
        total += k[i - 1] * inner
    return total


def baseline_complexity(n: int, k_n: int) -> int:
    """Prior-work search space: equal-width segments, full bijections only."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if k_n < 0:
        raise ValueError("k_n must be non-negative")
    return k_n * factorial(n)


def iter_partial_maps(n: int, i: int) -> Iterator[tuple[tuple[int, int], ...]]:
    """All injective partial maps from j-subsets of [n) to j-subsets of [i),
    j = 0..min(n, i), as sorted (left, right) pair tuples."""
    for j in range(min(n, i) + 1):
        for left in combinations(range(n), j):
            for right in permutations(range(i), j):
                yield tuple(zip(left, right))


def enumerate_mappings(n: int, i: int) -> int:
    """Counting oracle: generate every injective partial map explicitly."""
    if n > ENUMERATION_LIMIT or i > ENUMERATION_LIMIT:
        raise ValueError(f"enumeration limited to {ENUMERATION_LIMIT} qubits per side")
    count = 0
    for _ in iter_partial_maps(n, i):
        count += 1
    return count


def _relabel_index_map(perm: Sequence[int], n: int) -> np.ndarray:
    """idx[i] = basis index with bit q of i moved to bit perm[q]."""
    idx = np.zeros(2**n, dtype=np.int64)
    for i in range(2**n):
        j = 0
        for q in range(n):
            j |= ((i >> q) & 1) << perm[q]
        idx[i] = j
    return idx


def _matches_up_to_relabeling(u: np.ndarray, ref: np.ndarray, n: int,
                              tol: float) -> bool:
    for perm in permutations(range(n)):
        idx = _relabel_index_map(perm, n)
        if np.allclose(u[np.ix_(idx, idx)], ref, atol=tol):
            return True
    return False


def collusion_reconstruct(left: Segment, right: Segment, reference: np.ndarray,
                          tol: float = 1e-9) -> list[tuple[tuple[int, int], ...]]:
    """Exhaustive colluding-compiler search at oracle scale.

    Enumerates every injective partial correspondence between the two
    segments' qubits, assembles each candidate on a combined register
    (left locals keep their indices, unmatched right locals are appended
    in order), and returns the correspondences whose unitary equals the
    reference under some wire relabeling. Candidates whose register size
    does not match the reference cannot match and are skipped.
    """
    n_l = left.circuit.num_qubits
    n_r = right.circuit.num_qubits
    if n_l + n_r > COLLUSION_QUBIT_LIMIT:
        raise ValueError(
            f"collusion search limited to {COLLUSION_QUBIT_LIMIT} combined qubits")
    ref_qubits = int(round(np.log2(reference.shape[0])))
    if reference.shape != (2**ref_qubits, 2**ref_qubits):
        raise ValueError("reference must be a square 2^m unitary")

    matches = []
    for mapping in iter_partial_maps(n_l, n_r):
        matched_r = {r: l for l, r in mapping}
        size = n_l + n_r - len(mapping)
        if size != ref_qubits:
            continue
        r_wire = {}
        nxt = n_l
        for r in range(n_r):
            if r in matched_r:
                r_wire[r] = matched_r[r]
            else:
                r_wire[r] = nxt
                nxt += 1
        gates = [Gate(g.kind, g.operands) for g in left.circuit.gates]
        gates += [Gate(g.kind, tuple(r_wire[q] for q in g.operands))
                  for g in right.circuit.gates]
        candidate = Circuit(size, tuple(gates), name="candidate")
        if _matches_up_to_relabeling(sim.unitary(candidate), reference, size, tol):
            matches.append(mapping)
    return matches
