"""HTTP service exposing the pipeline: obfuscate, split, compile, recombine,
simulate, tvd, attack-complexity, and bench.

Each endpoint is a stateless wrapper over the core package. Domain errors
map to HTTP 400/409 with a structured {code, message} detail the CLI turns
into exit codes.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, HTTPException

from .. import sim
from ..attack import attack_complexity, baseline_complexity
from ..bench import coupling_for, run_bench
from ..circuit import Circuit
from ..compiler import CompiledSegment, CouplingGraph, compile_segment, undo_layout
from ..gates import GateKind
from ..obfuscate import (InsertionPolicy, NoSlotError, RecordError, build_obfuscated,
                         locate_record, record_from_json_dict, record_to_json_dict)
from ..qasm import QasmError, emit_qasm, parse_qasm
from ..splitting import (InfeasibleSplitError, Segment, SplitError, SplitManifest,
                         generate_interlock_pattern, recombine, split)
from . import schemas as s

STATEVECTOR_CHECK_INPUTS = 16


def _bad_request(code: str, message: str, status: int = 400) -> HTTPException:
    return HTTPException(status_code=status, detail={"code": code, "message": message})


def _parse(qasm: str, name: str = "") -> Circuit:
    try:
        return parse_qasm(qasm, name)
    except QasmError as e:
        raise _bad_request("parse_error", str(e)) from e


def _policy(gate_limit: int, kinds: list[str], cx_probability: float, seed: int,
            allow_depth_growth: bool) -> InsertionPolicy:
    try:
        return InsertionPolicy(gate_limit, tuple(GateKind(k) for k in kinds),
                               cx_probability, seed, allow_depth_growth)
    except ValueError as e:
        raise _bad_request("validation_error", str(e)) from e


def _coupling(spec: s.CouplingSpec, width: int) -> CouplingGraph:
    try:
        n = spec.num_nodes if spec.num_nodes is not None else width
        return coupling_for(spec.kind, n, spec.edges)
    except ValueError as e:
        raise _bad_request("validation_error", str(e)) from e


def _manifest_from_model(m: s.ManifestModel) -> SplitManifest:
    return SplitManifest(m.original_num_qubits, tuple(m.cut_layers),
                         tuple(m.qubit_map_L), tuple(m.qubit_map_R), m.seed, m.version)


def _manifest_to_model(m: SplitManifest) -> s.ManifestModel:
    return s.ManifestModel(version=m.version, original_num_qubits=m.original_num_qubits,
                           cut_layers=list(m.cut_layers), qubit_map_L=list(m.qubit_map_l),
                           qubit_map_R=list(m.qubit_map_r), seed=m.seed)


def _segment_from(qasm: str, layout: s.LayoutModel | None, side: str) -> Segment:
    c = _parse(qasm, f"segment_{side}")
    if layout is not None:
        compiled = CompiledSegment(c, tuple(layout.initial_layout),
                                   tuple(layout.final_layout))
        if sorted(layout.final_layout) != list(range(c.num_qubits)):
            raise _bad_request("validation_error",
                               f"{side} final_layout is not a permutation of the register")
        c = undo_layout(compiled)
    return Segment(c, "L" if side == "left" else "R")


def _check_equivalence(restored: Circuit, reference: Circuit) -> s.EquivalenceReport:
    if restored.num_qubits != reference.num_qubits:
        return s.EquivalenceReport(checked=True, passed=False, method="register-width")
    n = reference.num_qubits
    if n <= 8:
        ok = bool(np.allclose(sim.unitary(restored), sim.unitary(reference), atol=1e-9))
        return s.EquivalenceReport(checked=True, passed=ok, method="unitary")
    rng = np.random.default_rng(0)
    inputs = {0} | {int(x) for x in rng.integers(0, 2**n, STATEVECTOR_CHECK_INPUTS)}
    for basis in sorted(inputs):
        a = sim.run_statevector(restored, basis)
        b = sim.run_statevector(reference, basis)
        if not np.allclose(a, b, atol=1e-9):
            return s.EquivalenceReport(checked=True, passed=False,
                                       method="statevector-basis")
    return s.EquivalenceReport(checked=True, passed=True, method="statevector-basis")


def create_app() -> FastAPI:
    app = FastAPI(title="qsplit", version="0.1.0",
                  description="Quantum circuit obfuscation and split compilation service")

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": "0.1.0"}

    @app.post("/obfuscate", response_model=s.ObfuscateResponse)
    def obfuscate(req: s.ObfuscateRequest) -> s.ObfuscateResponse:
        c = _parse(req.qasm, req.name)
        policy = _policy(req.gate_limit, req.kinds, req.cx_probability, req.seed,
                         req.allow_depth_growth)
        try:
            o = build_obfuscated(c, policy)
        except NoSlotError as e:
            raise _bad_request("no_slot", str(e), status=409) from e
        return s.ObfuscateResponse(
            obfuscated_qasm=emit_qasm(o.circuit),
            record=s.RecordModel(**record_to_json_dict(o.record)),
            depth=o.depth_original, depth_obfuscated=o.depth_obfuscated,
            depth_grew=o.depth_grew, gate_count=c.gate_count,
            gate_count_obfuscated=o.circuit.gate_count,
            equivalence_checked=o.equivalence_checked, equivalence_ok=o.equivalence_ok)

    @app.post("/split", response_model=s.SplitResponse)
    def split_endpoint(req: s.SplitRequest) -> s.SplitResponse:
        c = _parse(req.obfuscated_qasm, "obfuscated")
        try:
            record = record_from_json_dict(req.record.model_dump(), c.num_qubits)
            o = locate_record(c, record)
        except (RecordError, ValueError) as e:
            raise _bad_request("validation_error", str(e)) from e
        try:
            manifest = generate_interlock_pattern(o, req.seed, req.min_distinct)
        except InfeasibleSplitError as e:
            raise _bad_request("infeasible_split", str(e), status=409) from e
        left, right = split(o, manifest)
        return s.SplitResponse(manifest=_manifest_to_model(manifest),
                               left_qasm=emit_qasm(left.circuit),
                               right_qasm=emit_qasm(right.circuit))

    @app.post("/compile", response_model=s.CompileResponse)
    def compile_endpoint(req: s.CompileRequest) -> s.CompileResponse:
        c = _parse(req.qasm, "segment")
        graph = _coupling(req.coupling, c.num_qubits)
        try:
            compiled = compile_segment(c, graph, req.seed)
        except ValueError as e:
            raise _bad_request("validation_error", str(e)) from e
        return s.CompileResponse(
            compiled_qasm=emit_qasm(compiled.circuit),
            layout=s.LayoutModel(initial_layout=list(compiled.initial_layout),
                                 final_layout=list(compiled.final_layout)),
            gate_count_in=c.gate_count, gate_count_out=compiled.circuit.gate_count)

    @app.post("/recombine", response_model=s.RecombineResponse)
    def recombine_endpoint(req: s.RecombineRequest) -> s.RecombineResponse:
        manifest = _manifest_from_model(req.manifest)
        left = _segment_from(req.left_qasm, req.left_layout, "left")
        right = _segment_from(req.right_qasm, req.right_layout, "right")
        try:
            restored = recombine(left, right, manifest)
        except SplitError as e:
            raise _bad_request("validation_error", str(e)) from e
        equivalence = s.EquivalenceReport(checked=False)
        if req.reference_qasm is not None:
            equivalence = _check_equivalence(restored, _parse(req.reference_qasm, "reference"))
        return s.RecombineResponse(recombined_qasm=emit_qasm(restored),
                                   equivalence=equivalence)

    @app.post("/simulate", response_model=s.CountsModel)
    def simulate(req: s.SimulateRequest) -> s.CountsModel:
        c = _parse(req.qasm, "simulated")
        noise = sim.NoiseModel(req.noise.p1, req.noise.p2, req.noise.pm) if req.noise else None
        try:
            counts = sim.sample_counts(c, req.input_state, req.shots, noise, req.seed)
        except ValueError as e:
            raise _bad_request("validation_error", str(e)) from e
        return s.CountsModel(**counts.to_json_dict())

    @app.post("/tvd", response_model=s.TvdResponse)
    def tvd_endpoint(req: s.TvdRequest) -> s.TvdResponse:
        try:
            a = sim.CountDist.from_json_dict(req.a.model_dump())
            b = sim.CountDist.from_json_dict(req.b.model_dump())
            return s.TvdResponse(tvd=sim.tvd(a, b))
        except ValueError as e:
            raise _bad_request("validation_error", str(e)) from e

    @app.post("/attack-complexity", response_model=s.AttackResponse)
    def attack(req: s.AttackRequest) -> s.AttackResponse:
        try:
            total = attack_complexity(req.n, req.n_max, req.k)
            base = baseline_complexity(req.n, req.k[req.n - 1])
        except ValueError as e:
            raise _bad_request("validation_error", str(e)) from e
        fraction = base / total if total else 0.0
        return s.AttackResponse(complexity=total, baseline=base, baseline_fraction=fraction)

    @app.post("/bench")
    def bench(req: s.BenchRequest) -> dict:
        circuits = [(bc.name, _parse(bc.qasm, bc.name)) for bc in req.circuits]
        policy = _policy(req.policy.gate_limit, req.policy.kinds,
                         req.policy.cx_probability, 0, req.policy.allow_depth_growth)
        noise = sim.NoiseModel(req.noise.p1, req.noise.p2, req.noise.pm)
        if req.coupling.kind == "custom":
            raise _bad_request("validation_error",
                               "bench sizes graphs per segment; use line|ring|full")
        return run_bench(circuits, req.iterations, req.shots, noise, req.seed,
                         req.coupling.kind, policy, req.input_state)

    return app


app = create_app()
