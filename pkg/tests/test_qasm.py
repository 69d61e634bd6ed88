import json

import numpy as np
import pytest

from qsplit import Circuit, Gate, GateKind, ManifestError, QasmError, emit_qasm, parse_qasm
from qsplit.qasm import read_manifest, write_manifest
from qsplit.splitting import SplitManifest

from conftest import random_circuit


class TestParse:
    def test_minimal(self):
        c = parse_qasm("OPENQASM 2.0;\nqreg q[1];\nx q[0];\n")
        assert c == Circuit(1, (Gate(GateKind.X, (0,)),))

    def test_whitespace_and_comments(self):
        text = """
        OPENQASM 2.0;   // header
        include "qelib1.inc";
        qreg  r [ 3 ] ;
        cx r[0] , r[2];   // entangle
        ccx
            r[0], r[1], r[2];
        """
        c = parse_qasm(text)
        assert c.num_qubits == 3
        assert c.gates == (Gate(GateKind.CX, (0, 2)), Gate(GateKind.CCX, (0, 1, 2)))

    def test_all_gate_names(self):
        body = "\n".join(f"{k.value} " + ",".join(f"q[{i}]" for i in range(k.arity)) + ";"
                         for k in GateKind)
        c = parse_qasm(f"OPENQASM 2.0;\nqreg q[3];\n{body}")
        assert [g.kind for g in c.gates] == list(GateKind)

    def test_measure_all_flag(self):
        c = parse_qasm("OPENQASM 2.0;\nqreg q[2];\ncreg c[2];\nx q[0];\nmeasure q -> c;")
        assert c.measure_all

    def test_unknown_gate(self):
        with pytest.raises(QasmError, match="unknown gate 'rz'"):
            parse_qasm("OPENQASM 2.0;\nqreg q[1];\nrz q[0];")

    def test_index_out_of_range(self):
        with pytest.raises(QasmError, match="out of range"):
            parse_qasm("OPENQASM 2.0;\nqreg q[2];\nx q[2];")

    def test_duplicate_operand(self):
        with pytest.raises(QasmError, match="duplicate operand"):
            parse_qasm("OPENQASM 2.0;\nqreg q[2];\ncx q[0],q[0];")

    def test_syntax_error_carries_position(self):
        with pytest.raises(QasmError) as err:
            parse_qasm("OPENQASM 2.0;\nqreg q[2];\nx q[;")
        assert err.value.line == 3

    def test_missing_header(self):
        with pytest.raises(QasmError, match="header"):
            parse_qasm("qreg q[1];\nx q[0];")

    def test_missing_qreg(self):
        with pytest.raises(QasmError, match="qreg"):
            parse_qasm("OPENQASM 2.0;\nx q[0];")

    def test_duplicate_qreg(self):
        with pytest.raises(QasmError, match="duplicate qreg"):
            parse_qasm("OPENQASM 2.0;\nqreg q[1];\nqreg p[1];")

    def test_statements_after_measure(self):
        with pytest.raises(QasmError, match="after trailing measure"):
            parse_qasm("OPENQASM 2.0;\nqreg q[1];\ncreg c[1];\nmeasure q -> c;\nx q[0];")

    def test_partial_measure_rejected(self):
        with pytest.raises(QasmError, match="full register"):
            parse_qasm("OPENQASM 2.0;\nqreg q[2];\ncreg c[2];\nmeasure q[0] -> c[0];")

    def test_creg_size_mismatch(self):
        with pytest.raises(QasmError, match="creg size"):
            parse_qasm("OPENQASM 2.0;\nqreg q[2];\ncreg c[1];\nmeasure q -> c;")

    def test_wrong_arity(self):
        with pytest.raises(QasmError, match="takes 2 operand"):
            parse_qasm("OPENQASM 2.0;\nqreg q[2];\ncx q[0];")

    def test_missing_semicolon(self):
        with pytest.raises(QasmError, match="missing ';'"):
            parse_qasm("OPENQASM 2.0;\nqreg q[1];\nx q[0]")


class TestEmit:
    def test_empty_circuit(self):
        assert emit_qasm(Circuit(2)) == (
            'OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[2];\n')

    def test_cx_statement_format(self):
        text = emit_qasm(Circuit(2, (Gate(GateKind.CX, (0, 1)),)))
        assert "cx q[0],q[1];" in text.splitlines()

    def test_measure_emitted(self):
        text = emit_qasm(Circuit(1, (), measure_all=True))
        assert text.endswith("creg c[1];\nmeasure q -> c;\n")

    def test_emit_idempotent(self, benchmarks):
        for c in benchmarks.values():
            once = emit_qasm(parse_qasm(emit_qasm(c)))
            assert once == emit_qasm(c)


class TestRoundTrip:
    def test_benchmarks_round_trip(self, benchmarks):
        assert len(benchmarks) == 8
        for name, c in benchmarks.items():
            assert parse_qasm(emit_qasm(c), name) == c

    def test_zero_qubit_degenerate_round_trip(self):
        # an empty split side serializes as a 0-wide register
        empty = Circuit(0)
        assert parse_qasm(emit_qasm(empty)) == empty

    def test_random_circuits_round_trip(self):
        rng = np.random.default_rng(17)
        for i in range(200):
            c = random_circuit(rng, int(rng.integers(1, 8)), 25)
            if rng.random() < 0.3:
                c = Circuit(c.num_qubits, c.gates, c.name, measure_all=True)
            assert parse_qasm(emit_qasm(c)) == c

    def test_mutation_fuzz_never_accepts_invalid(self):
        # random byte mutations either fail to parse or yield a valid circuit
        rng = np.random.default_rng(23)
        base = emit_qasm(random_circuit(rng, 4, 12))
        accepted = 0
        for _ in range(500):
            raw = bytearray(base.encode())
            for _ in range(int(rng.integers(1, 4))):
                pos = int(rng.integers(len(raw)))
                raw[pos] = int(rng.integers(32, 127))
            try:
                c = parse_qasm(raw.decode(errors="replace"))
            except QasmError:
                continue
            accepted += 1
            # invariants of accepted circuits always hold
            assert c.num_qubits >= 0
            for gate in c.gates:
                assert len(gate.operands) == gate.kind.arity
                assert len(set(gate.operands)) == len(gate.operands)
                assert max(gate.operands) < c.num_qubits
        assert accepted > 0  # some mutations are harmless (e.g. comments)


class TestManifestIO:
    def manifest(self):
        return SplitManifest(3, (1, 2, 1), (0, 1), (0, 1, 2), seed=9)

    def test_round_trip(self):
        m = self.manifest()
        assert read_manifest(write_manifest(m)) == m

    def test_canonical_rewrite(self):
        text = write_manifest(self.manifest())
        assert write_manifest(read_manifest(text)) == text

    def test_missing_field_names_it(self):
        doc = json.loads(write_manifest(self.manifest()))
        del doc["cut_layers"]
        with pytest.raises(ManifestError, match="cut_layers"):
            read_manifest(json.dumps(doc))

    def test_bad_type_names_path(self):
        doc = json.loads(write_manifest(self.manifest()))
        doc["qubit_map_L"][1] = "x"
        with pytest.raises(ManifestError, match=r"qubit_map_L\[1\]"):
            read_manifest(json.dumps(doc))

    def test_non_injective_map_rejected(self):
        doc = json.loads(write_manifest(self.manifest()))
        doc["qubit_map_R"] = [0, 0, 1]
        with pytest.raises(Exception, match="injective"):
            read_manifest(json.dumps(doc))

    def test_invalid_json(self):
        with pytest.raises(ManifestError, match="invalid JSON"):
            read_manifest("{nope")
