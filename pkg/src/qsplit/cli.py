"""Command-line client for the pipeline service.

Every subcommand goes through the HTTP interface: against a remote server
when --server (or QSPLIT_SERVER) is set, otherwise against an embedded
in-process instance of the app. File handling stays on the client; the
service only ever sees content.

Exit codes: 0 success, 2 validation/parse error, 3 infeasible obfuscation
or split, 4 equivalence check failed.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

EXIT_VALIDATION = 2
EXIT_INFEASIBLE = 3
EXIT_EQUIVALENCE = 4

_EXIT_BY_CODE = {
    "parse_error": EXIT_VALIDATION,
    "validation_error": EXIT_VALIDATION,
    "no_slot": EXIT_INFEASIBLE,
    "infeasible_split": EXIT_INFEASIBLE,
}


def _make_client(server: str | None):
    if server:
        import httpx

        return httpx.Client(base_url=server, timeout=600.0)
    import warnings

    with warnings.catch_warnings():
        # some starlette builds warn about their own httpx test transport
        warnings.filterwarnings("ignore", message="Using `httpx` with `starlette.testclient`")
        from fastapi.testclient import TestClient

    from .service.app import create_app

    return TestClient(create_app())


def _call(ctx: click.Context, path: str, payload: dict) -> dict:
    client = _make_client(ctx.obj.get("server"))
    with client:
        resp = client.post(path, json=payload)
    if resp.status_code >= 400:
        detail = resp.json().get("detail")
        if isinstance(detail, dict) and "code" in detail:
            click.echo(f"error ({detail['code']}): {detail['message']}", err=True)
            sys.exit(_EXIT_BY_CODE.get(detail["code"], EXIT_VALIDATION))
        click.echo(f"error: {detail}", err=True)
        sys.exit(EXIT_VALIDATION)
    return resp.json()


def _noise_option(value: str | None) -> dict | None:
    if value is None:
        return None
    try:
        p1, p2, pm = (float(x) for x in value.split(","))
    except ValueError:
        raise click.BadParameter("expected p1,p2,pm (e.g. 0.001,0.01,0.02)")
    return {"p1": p1, "p2": p2, "pm": pm}


def _coupling_option(value: str) -> dict:
    if value.startswith("file:"):
        edges = json.loads(Path(value[5:]).read_text())
        nodes = max(max(e) for e in edges) + 1
        return {"kind": "custom", "num_nodes": nodes, "edges": edges}
    if value in ("line", "ring", "full"):
        return {"kind": value}
    raise click.BadParameter("expected line|ring|full|file:<edges.json>")


def _counts_file(path: str) -> dict:
    doc = json.loads(Path(path).read_text())
    return {"shots": doc["shots"], "counts": doc["counts"]}


@click.group()
@click.option("--server", envvar="QSPLIT_SERVER", default=None,
              help="Remote service URL; default runs the service in-process.")
@click.pass_context
def main(ctx: click.Context, server: str | None) -> None:
    """Quantum circuit obfuscation and interlocking split compilation."""
    ctx.ensure_object(dict)
    ctx.obj["server"] = server


@main.command()
@click.argument("input_qasm", type=click.Path(exists=True))
@click.option("--gate-limit", default=4, show_default=True)
@click.option("--kinds", default="x,cx", show_default=True,
              help="Comma-separated insertable kinds (x, cx, h).")
@click.option("--cx-prob", default=0.5, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--allow-depth-growth", is_flag=True)
@click.option("--out-prefix", default="obfuscated", show_default=True)
@click.pass_context
def obfuscate(ctx, input_qasm, gate_limit, kinds, cx_prob, seed,
              allow_depth_growth, out_prefix):
    """Insert a seeded random circuit and its inverse into prefix-idle slots."""
    payload = {
        "qasm": Path(input_qasm).read_text(),
        "name": Path(input_qasm).stem,
        "seed": seed,
        "gate_limit": gate_limit,
        "kinds": [k.strip() for k in kinds.split(",") if k.strip()],
        "cx_probability": cx_prob,
        "allow_depth_growth": allow_depth_growth,
    }
    result = _call(ctx, "/obfuscate", payload)
    Path(f"{out_prefix}.qasm").write_text(result["obfuscated_qasm"])
    Path(f"{out_prefix}.record.json").write_text(json.dumps(result["record"], indent=2) + "\n")
    click.echo(json.dumps({
        "depth": result["depth"],
        "depth_obfuscated": result["depth_obfuscated"],
        "depth_grew": result["depth_grew"],
        "gate_count": result["gate_count"],
        "gate_count_obfuscated": result["gate_count_obfuscated"],
        "files": [f"{out_prefix}.qasm", f"{out_prefix}.record.json"],
    }, indent=2))


@main.command()
@click.argument("obfuscated_qasm", type=click.Path(exists=True))
@click.argument("record_json", type=click.Path(exists=True))
@click.option("--seed", default=0, show_default=True)
@click.option("--min-distinct", default=2, show_default=True)
@click.option("--out-prefix", default="segment", show_default=True)
@click.pass_context
def split(ctx, obfuscated_qasm, record_json, seed, min_distinct, out_prefix):
    """Cut the obfuscated circuit along a fresh interlocking boundary."""
    payload = {
        "obfuscated_qasm": Path(obfuscated_qasm).read_text(),
        "record": json.loads(Path(record_json).read_text()),
        "seed": seed,
        "min_distinct": min_distinct,
    }
    result = _call(ctx, "/split", payload)
    Path(f"{out_prefix}_left.qasm").write_text(result["left_qasm"])
    Path(f"{out_prefix}_right.qasm").write_text(result["right_qasm"])
    Path("manifest.json").write_text(json.dumps(result["manifest"], indent=2) + "\n")
    click.echo(json.dumps({
        "cut_layers": result["manifest"]["cut_layers"],
        "files": [f"{out_prefix}_left.qasm", f"{out_prefix}_right.qasm", "manifest.json"],
    }, indent=2))


@main.command("compile")
@click.argument("segment_qasm", type=click.Path(exists=True))
@click.option("--coupling", default="line", show_default=True,
              help="line|ring|full|file:<edges.json>")
@click.option("--seed", default=0, show_default=True)
@click.option("--out-prefix", default="compiled", show_default=True)
@click.pass_context
def compile_cmd(ctx, segment_qasm, coupling, seed, out_prefix):
    """Run the untrusted pass (peephole + routing) on one segment."""
    payload = {
        "qasm": Path(segment_qasm).read_text(),
        "coupling": _coupling_option(coupling),
        "seed": seed,
    }
    result = _call(ctx, "/compile", payload)
    Path(f"{out_prefix}.qasm").write_text(result["compiled_qasm"])
    Path(f"{out_prefix}.layout.json").write_text(json.dumps(result["layout"], indent=2) + "\n")
    click.echo(json.dumps({
        "gate_count_in": result["gate_count_in"],
        "gate_count_out": result["gate_count_out"],
        "final_layout": result["layout"]["final_layout"],
        "files": [f"{out_prefix}.qasm", f"{out_prefix}.layout.json"],
    }, indent=2))


@main.command()
@click.argument("left_qasm", type=click.Path(exists=True))
@click.argument("right_qasm", type=click.Path(exists=True))
@click.argument("manifest_json", type=click.Path(exists=True))
@click.option("--left-layout", type=click.Path(exists=True), default=None)
@click.option("--right-layout", type=click.Path(exists=True), default=None)
@click.option("--reference", type=click.Path(exists=True), default=None,
              help="Original circuit; enables the equivalence check.")
@click.option("--out", default="recombined.qasm", show_default=True)
@click.pass_context
def recombine(ctx, left_qasm, right_qasm, manifest_json, left_layout,
              right_layout, reference, out):
    """Undo layouts, map segments back, and restore the original circuit."""
    payload = {
        "left_qasm": Path(left_qasm).read_text(),
        "right_qasm": Path(right_qasm).read_text(),
        "manifest": json.loads(Path(manifest_json).read_text()),
        "left_layout": json.loads(Path(left_layout).read_text()) if left_layout else None,
        "right_layout": json.loads(Path(right_layout).read_text()) if right_layout else None,
        "reference_qasm": Path(reference).read_text() if reference else None,
    }
    result = _call(ctx, "/recombine", payload)
    Path(out).write_text(result["recombined_qasm"])
    eq = result["equivalence"]
    if eq["checked"]:
        verdict = "PASS" if eq["passed"] else "FAIL"
        click.echo(f"equivalence {verdict} ({eq['method']}); wrote {out}")
        if not eq["passed"]:
            sys.exit(EXIT_EQUIVALENCE)
    else:
        click.echo(f"wrote {out}")


@main.command()
@click.argument("input_qasm", type=click.Path(exists=True))
@click.option("--shots", default=1000, show_default=True)
@click.option("--input", "input_state", default=0, show_default=True)
@click.option("--noise", default=None, help="p1,p2,pm bit-flip probabilities.")
@click.option("--seed", default=0, show_default=True)
@click.option("--out", default="counts.json", show_default=True)
@click.pass_context
def simulate(ctx, input_qasm, shots, input_state, noise, seed, out):
    """Sample an outcome histogram from the statevector simulator."""
    payload = {
        "qasm": Path(input_qasm).read_text(),
        "shots": shots,
        "input_state": input_state,
        "noise": _noise_option(noise),
        "seed": seed,
    }
    result = _call(ctx, "/simulate", payload)
    Path(out).write_text(json.dumps(result, indent=2) + "\n")
    click.echo(json.dumps(result))


@main.command()
@click.argument("counts_a", type=click.Path(exists=True))
@click.argument("counts_b", type=click.Path(exists=True))
@click.pass_context
def tvd(ctx, counts_a, counts_b):
    """Total variation distance between two stored histograms."""
    result = _call(ctx, "/tvd", {"a": _counts_file(counts_a), "b": _counts_file(counts_b)})
    click.echo(json.dumps(result))


@main.command("attack-complexity")
@click.option("--n", required=True, type=int, help="Qubits in the held segment.")
@click.option("--n-max", required=True, type=int, help="Machine qubit limit.")
@click.option("--k", required=True, help="Comma-separated candidate counts k_1..k_nmax.")
@click.pass_context
def attack_complexity_cmd(ctx, n, n_max, k):
    """Exact colluding-compiler search-space size and the equal-width baseline."""
    kvec = [int(x) for x in k.split(",")]
    result = _call(ctx, "/attack-complexity", {"n": n, "n_max": n_max, "k": kvec})
    click.echo(json.dumps(result))


@main.command()
@click.option("--dir", "directory", required=True, type=click.Path(exists=True),
              help="Directory of .qasm benchmark circuits.")
@click.option("--iterations", default=20, show_default=True)
@click.option("--shots", default=1000, show_default=True)
@click.option("--noise", default="0.001,0.01,0.02", show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--coupling", default="line", show_default=True)
@click.option("--gate-limit", default=4, show_default=True)
@click.option("--kinds", default="x,cx", show_default=True)
@click.option("--cx-prob", default=0.5, show_default=True)
@click.option("--out", default="report.json", show_default=True)
@click.pass_context
def bench(ctx, directory, iterations, shots, noise, seed, coupling,
          gate_limit, kinds, cx_prob, out):
    """Full pipeline over a benchmark directory; JSON report plus a table."""
    circuits = [{"name": p.stem, "qasm": p.read_text()}
                for p in sorted(Path(directory).glob("*.qasm"))]
    if not circuits:
        click.echo(f"no .qasm files in {directory}", err=True)
        sys.exit(EXIT_VALIDATION)
    payload = {
        "circuits": circuits,
        "iterations": iterations,
        "shots": shots,
        "noise": _noise_option(noise),
        "seed": seed,
        "coupling": _coupling_option(coupling),
        "policy": {
            "gate_limit": gate_limit,
            "kinds": [k.strip() for k in kinds.split(",") if k.strip()],
            "cx_probability": cx_prob,
            "allow_depth_growth": False,
        },
    }
    report = _call(ctx, "/bench", payload)
    Path(out).write_text(json.dumps(report, indent=2) + "\n")
    from .bench import format_table

    click.echo(format_table(report))
    click.echo(f"report written to {out}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve(host, port):
    """Run the pipeline service."""
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
