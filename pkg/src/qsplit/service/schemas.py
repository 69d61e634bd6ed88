"""Request/response models for the pipeline service.

The compile endpoint's request model is the threat-model boundary: it
carries a segment, a coupling spec, and a seed, nothing else. Obfuscation
records and split manifests have no representation there.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field


class NoiseSpec(BaseModel):
    p1: float = Field(0.001, ge=0.0, le=0.5)
    p2: float = Field(0.01, ge=0.0, le=0.5)
    pm: float = Field(0.02, ge=0.0, le=0.5)


class PolicySpec(BaseModel):
    gate_limit: int = Field(4, ge=1)
    kinds: list[str] = ["x", "cx"]
    cx_probability: float = Field(0.5, ge=0.0, le=1.0)
    allow_depth_growth: bool = False


class InsertionEntry(BaseModel):
    layer: int
    kind: str
    operands: list[int]


class RecordPolicy(BaseModel):
    gate_limit: int
    kinds: list[str]
    cx_probability: float


class RecordModel(BaseModel):
    seed: int
    insertions: list[InsertionEntry]
    policy: RecordPolicy


class ManifestModel(BaseModel):
    version: int = 1
    original_num_qubits: int
    cut_layers: list[int]
    qubit_map_L: list[int]
    qubit_map_R: list[int]
    seed: int


class CouplingSpec(BaseModel):
    kind: Literal["line", "ring", "full", "custom"] = "line"
    num_nodes: Optional[int] = None  # defaults to the segment width
    edges: Optional[list[tuple[int, int]]] = None  # custom only


class LayoutModel(BaseModel):
    initial_layout: list[int]
    final_layout: list[int]


class ObfuscateRequest(BaseModel):
    qasm: str
    name: str = ""
    seed: int = 0
    gate_limit: int = Field(4, ge=1)
    kinds: list[str] = ["x", "cx"]
    cx_probability: float = Field(0.5, ge=0.0, le=1.0)
    allow_depth_growth: bool = False


class ObfuscateResponse(BaseModel):
    obfuscated_qasm: str
    record: RecordModel
    depth: int
    depth_obfuscated: int
    depth_grew: bool
    gate_count: int
    gate_count_obfuscated: int
    equivalence_checked: bool
    equivalence_ok: Optional[bool]


class SplitRequest(BaseModel):
    obfuscated_qasm: str
    record: RecordModel
    seed: int = 0
    min_distinct: int = Field(2, ge=2)


class SplitResponse(BaseModel):
    manifest: ManifestModel
    left_qasm: str
    right_qasm: str


class CompileRequest(BaseModel):
    """The untrusted compiler sees exactly this much."""
    qasm: str
    coupling: CouplingSpec = CouplingSpec()
    seed: int = 0


class CompileResponse(BaseModel):
    compiled_qasm: str
    layout: LayoutModel
    gate_count_in: int
    gate_count_out: int


class RecombineRequest(BaseModel):
    left_qasm: str
    right_qasm: str
    manifest: ManifestModel
    left_layout: Optional[LayoutModel] = None
    right_layout: Optional[LayoutModel] = None
    reference_qasm: Optional[str] = None


class EquivalenceReport(BaseModel):
    checked: bool
    passed: Optional[bool] = None
    method: Optional[str] = None


class RecombineResponse(BaseModel):
    recombined_qasm: str
    equivalence: EquivalenceReport


class SimulateRequest(BaseModel):
    qasm: str
    shots: int = Field(1000, ge=1)
    input_state: int = Field(0, ge=0)
    noise: Optional[NoiseSpec] = None
    seed: int = 0


class CountsModel(BaseModel):
    shots: int
    counts: dict[str, int]


class TvdRequest(BaseModel):
    a: CountsModel
    b: CountsModel


class TvdResponse(BaseModel):
    tvd: float


class AttackRequest(BaseModel):
    n: int = Field(ge=1)
    n_max: int = Field(ge=1)
    k: list[int]


class AttackResponse(BaseModel):
    complexity: int
    baseline: int
    baseline_fraction: float


class BenchCircuit(BaseModel):
    name: str
    qasm: str


class BenchRequest(BaseModel):
    circuits: list[BenchCircuit]
    iterations: int = Field(20, ge=1)
    shots: int = Field(1000, ge=1)
    noise: NoiseSpec = NoiseSpec()
    seed: int = 0
    coupling: CouplingSpec = CouplingSpec()
    policy: PolicySpec = PolicySpec()
    input_state: int = Field(0, ge=0)


class ErrorDetail(BaseModel):
    code: str
    message: str
