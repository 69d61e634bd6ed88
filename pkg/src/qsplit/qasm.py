"""OpenQASM 2.0 subset: parse/emit circuits, plus manifest file round-trip.

Supported grammar (whitespace-insensitive, `//` comments):

    OPENQASM 2.0;
    include "qelib1.inc";          // optional, ignored
    qreg <id>[n];                  // exactly one
    creg <id>[m];                  // optional
    <gate> <id>[i] (, <id>[j] (, <id>[k]));
    measure <qreg> -> <creg>;      // optional, trailing, full-register only

Gate names: x y z h s sdg t tdg cx ccx swap. Emission is canonical (one
statement per line, lowercase, register named q/c), so emit is idempotent
and parse(emit(c)) == c.
"""

from __future__ import annotations

import json
import re

from .circuit import Circuit, Gate
from .gates import GateKind
from .splitting import SplitManifest


class QasmError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        super().__init__(f"line {line}, col {col}: {message}" if line else message)


_GATE_NAMES = {k.value: k for k in GateKind}
_STMT_RE = re.compile(r"^(?P<name>[A-Za-z_][A-Za-z0-9_]*)\s*(?P<rest>.*)$", re.S)
_REG_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*\[\s*(\d+)\s*\]$")
_OPERAND_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*\[\s*(\d+)\s*\]$")


def _statements(text: str):
    """Yield (statement, line, col) with comments stripped; split on ';'."""
    buf: list[str] = []
    start: tuple[int, int] | None = None
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "/" and text[i:i + 2] == "//":
            while i < len(text) and text[i] != "\n":
                i += 1
            continue
        if ch == ";":
            stmt = "".join(buf).strip()
            if stmt:
                yield stmt, start[0], start[1]
            buf, start = [], None
        else:
            if not ch.isspace() and start is None:
                start = (line, col)
            buf.append(ch)
        if ch == "\n":
            line += 1
            col = 1
        else:
            col += 1
        i += 1
    tail = "".join(buf).strip()
    if tail:
        raise QasmError(f"missing ';' after '{tail[:30]}'", start[0], start[1])


def parse_qasm(text: str, name: str = "") -> Circuit:
    """Parse the subset grammar into a Circuit (trailing measure -> measure_all)."""
    qreg: tuple[str, int] | None = None
    creg: tuple[str, int] | None = None
    gates: list[Gate] = []
    measured = False
    saw_header = False

    for stmt, line, col in _statements(text):
        m = _STMT_RE.match(stmt)
        if not m:
            raise QasmError(f"syntax error near '{stmt[:30]}'", line, col)
        head, rest = m.group("name"), m.group("rest").strip()

        if head == "OPENQASM":
            if rest != "2.0":
                raise QasmError(f"unsupported version '{rest}'", line, col)
            saw_header = True
            continue
        if head == "include":
            continue
        if measured:
            raise QasmError("statements after trailing measure", line, col)
        if head in ("qreg", "creg"):
            rm = _REG_RE.match(rest)
            if not rm:
                raise QasmError(f"syntax error in {head} declaration", line, col)
            reg = (rm.group(1), int(rm.group(2)))
            if head == "qreg":
                if qreg is not None:
                    raise QasmError("duplicate qreg declaration", line, col)
                qreg = reg
            else:
                if creg is not None:
                    raise QasmError("duplicate creg declaration", line, col)
                creg = reg
            continue
        if head == "measure":
            parts = [p.strip() for p in rest.split("->")]
            if len(parts) != 2:
                raise QasmError("syntax error in measure statement", line, col)
            if qreg is None:
                raise QasmError("measure before qreg declaration", line, col)
            if parts[0] != qreg[0]:
                raise QasmError(
                    f"measure supports only the full register '{qreg[0]}'", line, col)
            if creg is None or parts[1] != creg[0]:
                raise QasmError("measure target is not the declared creg", line, col)
            if creg[1] != qreg[1]:
                raise QasmError(
                    f"creg size {creg[1]} != qreg size {qreg[1]} for full-register measure",
                    line, col)
            measured = True
            continue

        kind = _GATE_NAMES.get(head)
        if kind is None:
            raise QasmError(f"unknown gate '{head}'", line, col)
        if qreg is None:
            raise QasmError("gate before qreg declaration", line, col)
        if not rest:
            raise QasmError(f"missing operands for '{head}'", line, col)
        operands: list[int] = []
        for piece in rest.split(","):
            om = _OPERAND_RE.match(piece.strip())
            if not om:
                raise QasmError(f"syntax error in operand '{piece.strip()}'", line, col)
            if om.group(1) != qreg[0]:
                raise QasmError(f"unknown register '{om.group(1)}'", line, col)
            idx = int(om.group(2))
            if idx >= qreg[1]:
                raise QasmError(f"qubit index {idx} out of range [0, {qreg[1]})", line, col)
            operands.append(idx)
        if len(operands) != kind.arity:
            raise QasmError(
                f"'{head}' takes {kind.arity} operand(s), got {len(operands)}", line, col)
        if len(set(operands)) != len(operands):
            raise QasmError(f"duplicate operand in '{stmt}'", line, col)
        gates.append(Gate(kind, tuple(operands)))

    if not saw_header:
        raise QasmError("missing OPENQASM 2.0 header", 1, 1)
    if qreg is None:
        raise QasmError("missing qreg declaration", 1, 1)
    return Circuit(qreg[1], tuple(gates), name, measured)


def emit_qasm(c: Circuit) -> str:
    """Canonical text form; parse_qasm(emit_qasm(c)) == c and re-emit is byte-identical."""
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{c.num_qubits}];"]
    if c.measure_all:
        lines.append(f"creg c[{c.num_qubits}];")
    for g in c.gates:
        ops = ",".join(f"q[{q}]" for q in g.operands)
        lines.append(f"{g.kind.value} {ops};")
    if c.measure_all:
        lines.append("measure q -> c;")
    return "\n".join(lines) + "\n"


class ManifestError(ValueError):
    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


def _require(d: dict, key: str, kind) -> object:
    if key not in d:
        raise ManifestError("missing field", key)
    v = d[key]
    if kind is int and isinstance(v, bool):
        raise ManifestError("expected integer", key)
    if not isinstance(v, kind):
        raise ManifestError(f"expected {kind.__name__}", key)
    return v


def _int_list(d: dict, key: str) -> tuple[int, ...]:
    v = _require(d, key, list)
    for i, x in enumerate(v):
        if isinstance(x, bool) or not isinstance(x, int):
            raise ManifestError("expected integer", f"{key}[{i}]")
    return tuple(v)


def read_manifest(text: str) -> SplitManifest:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ManifestError(f"invalid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise ManifestError("manifest must be a JSON object")
    version = _require(doc, "version", int)
    if version != 1:
        raise ManifestError(f"unsupported version {version}", "version")
    m = SplitManifest(
        original_num_qubits=_require(doc, "original_num_qubits", int),
        cut_layers=_int_list(doc, "cut_layers"),
        qubit_map_l=_int_list(doc, "qubit_map_L"),
        qubit_map_r=_int_list(doc, "qubit_map_R"),
        seed=_require(doc, "seed", int),
    )
    m.validate_structure()
    return m


def write_manifest(m: SplitManifest) -> str:
    return json.dumps({
        "version": 1,
        "original_num_qubits": m.original_num_qubits,
        "cut_layers": list(m.cut_layers),
        "qubit_map_L": list(m.qubit_map_l),
        "qubit_map_R": list(m.qubit_map_r),
        "seed": m.seed,
    }, indent=2) + "\n"
