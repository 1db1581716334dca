"""Command-line client for the curvature service.

The CLI is a thin HTTP client: by default it mounts the FastAPI app on an
in-process transport (no sockets, fully deterministic); `--server URL`
targets a running instance instead.  Exit codes are a stable contract:

    0  success, all checks passed
    1  a computation-level check failed (verify-model / selftest)
    2  input or parse error (bad file, bad expression, bad flags)
    3  precondition violation (non-Cotton-like tensor, degenerate metric)
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from .jsonutil import canonical_json

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT = 2
EXIT_PRECONDITION = 3


def _client(server: str | None):
    if server:
        import httpx
        return httpx.Client(base_url=server, timeout=600.0)
    import warnings
    with warnings.catch_warnings():
        # starlette's TestClient warns about the httpx major it was built
        # against; the in-process transport works fine with what we pin
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient
    from .service import create_app
    return TestClient(create_app(), raise_server_exceptions=False)


def _post(ctx_server: str | None, path: str, payload: dict):
    import httpx
    try:
        with _client(ctx_server) as client:
            return client.post(path, json=payload)
    except httpx.HTTPError as exc:
        click.echo(f"error: cannot reach service: {exc}", err=True)
        sys.exit(EXIT_INPUT)


def _fail_from_response(response) -> "int":
    detail = None
    try:
        detail = response.json().get("detail")
    except Exception:
        pass
    if isinstance(detail, dict):
        message = detail.get("annotated") or detail.get("message") or str(detail)
        click.echo(f"error: {message}", err=True)
        if detail.get("kind") == "precondition":
            return EXIT_PRECONDITION
        return EXIT_INPUT
    if isinstance(detail, list):   # request-model validation
        for item in detail:
            click.echo(f"error: {item.get('msg')} at {item.get('loc')}", err=True)
        return EXIT_INPUT
    click.echo(f"error: service returned {response.status_code}: "
               f"{response.text[:400]}", err=True)
    return EXIT_INPUT


def _parse_at(at_options: tuple[str, ...]) -> list[dict]:
    points = []
    for spec in at_options:
        mapping = {}
        for piece in spec.split(","):
            if "=" not in piece:
                click.echo(f"error: --at entries look like coord=value, got "
                           f"{piece!r}", err=True)
                sys.exit(EXIT_INPUT)
            name, value = piece.split("=", 1)
            mapping[name.strip()] = value.strip()
        points.append(mapping)
    return points


def _check_tolerance(mode: str | None, tolerance: float | None):
    if tolerance is not None and mode != "float":
        click.echo("error: --tolerance applies in float mode only "
                   "(pass --mode float)", err=True)
        sys.exit(EXIT_INPUT)


def common_options(command):
    decorators = [
        click.option("--mode", type=click.Choice(["exact", "float"]),
                     default=None, help="Scalar backend (overrides file mode)."),
        click.option("--report", type=click.Choice(["text", "json"]),
                     default="text", show_default=True,
                     help="Output format; json output is canonical."),
        click.option("--seed", type=int, default=None,
                     help="Random seed; required whenever sampling is used."),
        click.option("--tolerance", type=float, default=None,
                     help="Zero threshold, float mode only."),
        click.option("--server", type=str, default=None,
                     help="URL of a running service; default is in-process."),
    ]
    for decorator in reversed(decorators):
        command = decorator(command)
    return command


@click.group()
@click.version_option(package_name="cottonkit")
def main():
    """Curvature toolkit: exact Cotton/Schouten tensors, chart classification,
    and Cotton-like tensor decomposition."""


# -- rendering ---------------------------------------------------------------------

def _render_components(label: str, block: dict) -> list[str]:
    lines = []
    if block["zero"]:
        lines.append(f"  {label}: 0")
    else:
        for key, value in sorted(block["components"].items()):
            lines.append(f"  {label}[{key}] = {value}")
    return lines


def _render_curvature(body: dict) -> str:
    lines = [f"mode: {body['mode']}   coords: {', '.join(body['coords'])}"]
    for entry in body["points"]:
        point = ", ".join(f"{k}={v}" for k, v in entry["point"].items())
        sig = entry["signature"]
        lines.append(f"\npoint ({point})   signature (+{sig['positives']}, "
                     f"-{sig['negatives']})")
        lines.extend(_render_components("Ric", entry["ricci"]))
        lines.append(f"  s = {entry['scalar_curvature']}")
        lines.extend(_render_components("P", entry["schouten"]))
        lines.extend(_render_components("C", entry["cotton"]))
        lines.extend(_render_components("nabla C", entry["nabla_cotton"]))
        if entry.get("weyl") is not None:
            lines.extend(_render_components("W", entry["weyl"]))
        checks = entry["symmetry_checks"]
        status = "ok" if checks["ok"] else "VIOLATED"
        lines.append(f"  Cotton symmetries: {status} (antisymmetry "
                     f"{checks['cotton_antisymmetry']}, cyclic "
                     f"{checks['cotton_cyclic']}, trace {checks['cotton_trace']})")
        div_status = "ok" if checks["div_schouten_equals_d_trace"] else "VIOLATED"
        lines.append(f"  div P = d(tr P): {div_status} "
                     f"(residual {checks['div_schouten_residual']})")
    return "\n".join(lines)


def _render_classify(body: dict) -> str:
    lines = [f"verdict: {body['verdict']}   ({body['disclaimer']})",
             f"mode: {body['mode']}   samples: {body['sample_count']}"
             + (f"   seed: {body['seed']}" if body.get("seed") is not None else "")]
    if body.get("witness"):
        point = ", ".join(f"{k}={v}" for k, v in body["witness"].items())
        lines.append(f"nonparallel witness: ({point})")
    for e in body["evidence"]:
        point = ", ".join(f"{k}={v}" for k, v in e["point"].items())
        if e["skipped"]:
            lines.append(f"  ({point})  skipped (degenerate)")
        else:
            lines.append(f"  ({point})  |C| = {e['cotton_norm']:.3g}  "
                         f"|nabla C| = {e['nabla_cotton_norm']:.3g}")
    return "\n".join(lines)


def _render_verify_model(body: dict) -> str:
    lines = [f"model a(t) = {body['a']}   mode: {body['mode']}   "
             f"samples: {body['samples']}   seed: {body['seed']}"]
    for check in body["checks"]:
        status = "PASS" if check["passed"] else "FAIL"
        lines.append(f"  [{status}] {check['name']}: {check['detail']}")
    lines.append("result: " + ("PASS" if body["passed"] else "FAIL"))
    return "\n".join(lines)


def _render_decompose(body: dict) -> str:
    lines = [f"kind: {body['kind']}   kernel dimension: {body['kernel_dim']}   "
             f"index q: {body['index_q']}   mode: {body['mode']}"]
    for vec, causal in zip(body["kernel_basis"],
                           body["kernel_causal"] or [""] * len(body["kernel_basis"])):
        lines.append(f"  kernel vector {vec}" + (f"  ({causal})" if causal else ""))
    if body.get("u") is not None:
        lines.append(f"  u = {body['u']}")
        lines.append(f"  v = {body['v']}")
        lines.append(f"  a = {body['a']}")
        lines.append(f"  reconstruction residual = {body['residual']}")
    cert = body.get("certificate")
    if cert:
        lines.append(f"  exact certificate: tensor == {cert['scale']} * "
                     f"(e1 ^ e2_raw)(x)e1 with e1 = {cert['e1']}, "
                     f"e2_raw = {cert['e2_raw']} (residual {cert['residual']})")
    return "\n".join(lines)


def _render_selftest(body: dict) -> str:
    lines = [f"selftest   mode: {body['mode']}   seed: {body['seed']}"]
    for c in body["criteria"]:
        status = "PASS" if c["passed"] else "FAIL"
        lines.append(f"  [{c['id']:>2}] {status}  {c['name']} "
                     f"({c['seconds']:.2f}s)")
        lines.append(f"        {c['detail']}")
    lines.append("result: " + ("PASS" if body["passed"] else "FAIL"))
    return "\n".join(lines)


def _emit(body: dict, report: str, renderer) -> None:
    if report == "json":
        click.echo(canonical_json(body))
    else:
        click.echo(renderer(body))


# -- commands -----------------------------------------------------------------------

@main.command()
@click.argument("metric_file", type=click.Path(exists=True, dir_okay=False,
                                               path_type=Path))
@click.option("--at", "at_options", multiple=True,
              help="Evaluation point coord=value[,...]; repeatable.")
@click.option("--samples", type=int, default=None,
              help="Additionally evaluate at this many seeded random points.")
@common_options
def curvature(metric_file, at_options, samples, mode, report, seed, tolerance,
              server):
    """Ricci, scalar, Schouten, Cotton, nabla-Cotton, and Weyl at points."""
    _check_tolerance(mode, tolerance)
    payload = {"metric": metric_file.read_text(encoding="utf-8"),
               "at": _parse_at(at_options) or None,
               "samples": samples, "seed": seed, "mode": mode,
               "tolerance": tolerance}
    response = _post(server, "/curvature", payload)
    if response.status_code != 200:
        sys.exit(_fail_from_response(response))
    _emit(response.json(), report, _render_curvature)
    sys.exit(EXIT_OK)


@main.command()
@click.argument("metric_file", type=click.Path(exists=True, dir_okay=False,
                                               path_type=Path))
@click.option("--samples", type=int, default=20, show_default=True)
@click.option("--at", "at_options", multiple=True,
              help="Explicit sample points; repeatable.")
@click.option("--allow-skip", is_flag=True,
              help="Skip degenerate sample points instead of failing.")
@common_options
def classify(metric_file, samples, at_options, allow_skip, mode, report, seed,
             tolerance, server):
    """Chart-local classification: conformally flat / ECS / nonparallel."""
    _check_tolerance(mode, tolerance)
    at = _parse_at(at_options)
    if not at and seed is None:
        click.echo("error: --seed is required when sampling points", err=True)
        sys.exit(EXIT_INPUT)
    payload = {"metric": metric_file.read_text(encoding="utf-8"),
               "samples": samples if not at else None,
               "at": at or None, "seed": seed, "mode": mode,
               "tolerance": tolerance, "allow_skip": allow_skip}
    payload = {k: v for k, v in payload.items() if v is not None}
    response = _post(server, "/classify", payload)
    if response.status_code != 200:
        sys.exit(_fail_from_response(response))
    _emit(response.json(), report, _render_classify)
    sys.exit(EXIT_OK)


@main.command(name="verify-model")
@click.option("--a", "a_source", default="0", show_default=True,
              help="Polynomial a(t) for the model's g_tt = x^3 + a(t) x.")
@click.option("--samples", type=int, default=20, show_default=True)
@common_options
def verify_model(a_source, samples, mode, report, seed, tolerance, server):
    """Seven structural checks of the cubic pp-wave model family."""
    _check_tolerance(mode, tolerance)
    payload = {"a": a_source, "samples": samples, "seed": seed or 0,
               "mode": mode or "exact", "tolerance": tolerance}
    response = _post(server, "/verify-model", payload)
    if response.status_code != 200:
        sys.exit(_fail_from_response(response))
    body = response.json()
    _emit(body, report, _render_verify_model)
    sys.exit(EXIT_OK if body["passed"] else EXIT_CHECK_FAILED)


@main.command()
@click.argument("tensor_file", type=click.Path(exists=True, dir_okay=False,
                                               path_type=Path))
@common_options
def decompose(tensor_file, mode, report, seed, tolerance, server):
    """Kernel and rank-one decomposition of a pointwise Cotton-like tensor."""
    payload = {"tensor": tensor_file.read_text(encoding="utf-8"),
               "tolerance": tolerance}
    response = _post(server, "/decompose", payload)
    if response.status_code != 200:
        sys.exit(_fail_from_response(response))
    _emit(response.json(), report, _render_decompose)
    sys.exit(EXIT_OK)


@main.command()
@click.option("--criteria", type=int, multiple=True,
              help="Run only these criterion ids (1-12); repeatable.")
@click.option("--corrupt-fixture", is_flag=True, hidden=True,
              help="Perturb the model fixture to prove the matrix can fail.")
@common_options
def selftest(criteria, corrupt_fixture, mode, report, seed, tolerance, server):
    """Run the acceptance matrix; nonzero exit on any failing criterion."""
    _check_tolerance(mode, tolerance)
    payload = {"mode": mode or "exact", "seed": seed or 0,
               "criteria": list(criteria) or None,
               "corrupt_fixture": corrupt_fixture}
    response = _post(server, "/selftest", payload)
    if response.status_code != 200:
        sys.exit(_fail_from_response(response))
    body = response.json()
    _emit(body, report, _render_selftest)
    sys.exit(EXIT_OK if body["passed"] else EXIT_CHECK_FAILED)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
def serve(host, port):
    """Run the service under uvicorn."""
    import uvicorn
    from .service import app
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
