"""Fixed, parameter-free gate set with exact unitaries and adjoints.

Multi-qubit matrices are written with operand 0 as the most significant
local bit, i.e. CX acts on |control,target> with the control on the left.
Keeping the set parameter-free means every adjoint is another member of
the set and simulation results are bit-reproducible.
"""

from __future__ import annotations

import enum
from math import sqrt

import numpy as np

_SQ2 = 1.0 / sqrt(2.0)
_T_PHASE = (1.0 + 1.0j) * _SQ2  # exp(i*pi/4)


class GateKind(enum.Enum):
    X = "x"
    Y = "y"
    Z = "z"
    H = "h"
    S = "s"
    SDG = "sdg"
    T = "t"
    TDG = "tdg"
    CX = "cx"
    CCX = "ccx"
    SWAP = "swap"

    @property
    def arity(self) -> int:
        return _ARITY[self]

    @property
    def adjoint(self) -> "GateKind":
        return _ADJOINT[self]

    @property
    def matrix(self) -> np.ndarray:
        """Read-only 2^arity x 2^arity complex unitary."""
        return _MATRIX[self]


_ARITY = {
    GateKind.X: 1,
    GateKind.Y: 1,
    GateKind.Z: 1,
    GateKind.H: 1,
    GateKind.S: 1,
    GateKind.SDG: 1,
    GateKind.T: 1,
    GateKind.TDG: 1,
    GateKind.CX: 2,
    GateKind.CCX: 3,
    GateKind.SWAP: 2,
}

# X, Y, Z, H, CX, CCX, SWAP are their own adjoints; the phases pair up.
_ADJOINT = {k: k for k in GateKind}
_ADJOINT[GateKind.S] = GateKind.SDG
_ADJOINT[GateKind.SDG] = GateKind.S
_ADJOINT[GateKind.T] = GateKind.TDG
_ADJOINT[GateKind.TDG] = GateKind.T


def _perm(dim: int, swaps: dict[int, int]) -> np.ndarray:
    m = np.eye(dim, dtype=complex)
    for a, b in swaps.items():
        m[[a, b]] = m[[b, a]]
    return m


_MATRIX = {
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    GateKind.Z: np.array([[1, 0], [0, -1]], dtype=complex),
    GateKind.H: np.array([[1, 1], [1, -1]], dtype=complex) * _SQ2,
    GateKind.S: np.array([[1, 0], [0, 1j]], dtype=complex),
    GateKind.SDG: np.array([[1, 0], [0, -1j]], dtype=complex),
    GateKind.T: np.array([[1, 0], [0, _T_PHASE]], dtype=complex),
    GateKind.TDG: np.array([[1, 0], [0, _T_PHASE.conjugate()]], dtype=complex),
    # |control,target>: flips the target when the control bit is 1
    GateKind.CX: _perm(4, {2: 3}),
    GateKind.CCX: _perm(8, {6: 7}),
    GateKind.SWAP: _perm(4, {1: 2}),
}

for _m in _MATRIX.values():
    _m.setflags(write=False)

SINGLE_QUBIT_KINDS = tuple(k for k in GateKind if k.arity == 1)
