"""Command-line client for the compute service.

Every subcommand builds a request, sends it through the HTTP layer and
renders the response.  By default the service runs in-process (no daemon
needed); ``--server URL`` targets a running instance instead.  Exit
codes: 0 success, 1 validation/parse error, 2 size guard, 3 internal
invariant violation.
"""

from __future__ import annotations

import json
import sys

import click

from .errors import EXIT_INVARIANT, EXIT_SIZE_GUARD, EXIT_VALIDATION

GUARD_OPTIONS = ("carrier_cap", "dimension_cap", "oracle_cap", "tuple_cap",
                 "closure_cap", "power_cap")


def _client(server: str | None):
    if server:
        import httpx
        return httpx.Client(base_url=server, timeout=600.0)
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # starlette testclient deprecation
        from fastapi.testclient import TestClient
    from .service import create_app
    return TestClient(create_app(), raise_server_exceptions=False)


def _exit_code(status: int) -> int:
    if status in (400, 422):
        return EXIT_VALIDATION
    if status == 409:
        return EXIT_SIZE_GUARD
    return EXIT_INVARIANT


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        click.echo(f"error: file not found: {path}", err=True)
        sys.exit(EXIT_VALIDATION)
    except json.JSONDecodeError as exc:
        click.echo(f"error: {path} is not valid JSON: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)


def _basis_arg(value: str):
    """A preset name, or a path to a basis document."""
    from .variety import PRESET_NAMES
    if value in PRESET_NAMES:
        return value
    return _load_json(value)


def _options_payload(ctx) -> dict | None:
    obj = ctx.obj
    opts = {k: obj[k] for k in (*GUARD_OPTIONS, "threads", "seed")
            if obj.get(k) is not None}
    return opts or None


def _post(ctx, path: str, payload: dict) -> dict:
    opts = _options_payload(ctx)
    if opts:
        payload = dict(payload, options=opts)
    client = _client(ctx.obj.get("server"))
    try:
        resp = client.post(path, json=payload)
    except Exception as exc:  # connection-level failure to a remote server
        click.echo(f"error: cannot reach service: {exc}", err=True)
        sys.exit(EXIT_INVARIANT)
    try:
        body = resp.json()
    except ValueError:
        click.echo(f"error: non-JSON response (status {resp.status_code})",
                   err=True)
        sys.exit(EXIT_INVARIANT)
    if resp.status_code >= 400:
        reason = body.get("error", {}).get("reason") \
            if isinstance(body.get("error"), dict) else None
        kind = body.get("error", {}).get("type", "Error") \
            if isinstance(body.get("error"), dict) else "Error"
        if reason is None:
            reason = json.dumps(body, sort_keys=True)
        click.echo(f"{kind}: {reason}", err=True)
        sys.exit(_exit_code(resp.status_code))
    if ctx.obj.get("report") == "json":
        click.echo(json.dumps(body, indent=2, sort_keys=True))
        return body
    return body


def _print_set(label: str, rep: dict):
    if rep.get("elements") is not None:
        members = ", ".join(rep["elements"])
        click.echo(f"{label}: size {rep['size']} = {{{members}}}")
    elif rep.get("basis") is not None:
        members = "; ".join(rep["basis"]) or "-"
        click.echo(f"{label}: size {rep['size']}, span of [{members}]")
    else:
        click.echo(f"{label}: size {rep['size']}")


def _print_commutator(body: dict):
    _print_set("result", body["result"])
    for w in body.get("witnesses", []):
        parts = [f"value {w.get('value')}"]
        if "triple" in w:
            parts.append(f"from triple ({', '.join(w['triple'])})")
        parts.append(f"[{w.get('kind')}]")
        click.echo("  witness: " + " ".join(parts))
    stats = body.get("stats", {})
    if stats:
        line = ", ".join(f"{k}={v}" for k, v in sorted(stats.items()))
        click.echo(f"  stats: {line}")


@click.group()
@click.option("--server", default=None, metavar="URL",
              help="Use a running service instead of in-process compute.")
@click.option("--report", type=click.Choice(["text", "json"]),
              default="text", show_default=True)
@click.option("--threads", type=int, default=None,
              help="Worker threads (default: OMEGA_THREADS or 1).")
@click.option("--seed", type=int, default=None)
@click.option("--carrier-cap", type=int, default=None)
@click.option("--dimension-cap", type=int, default=None)
@click.option("--oracle-cap", type=int, default=None)
@click.option("--tuple-cap", type=int, default=None)
@click.option("--closure-cap", type=int, default=None)
@click.option("--power-cap", type=int, default=None)
@click.pass_context
def main(ctx, **kwargs):
    """Exact relative commutators of finite omega-groups."""
    ctx.obj = kwargs


@main.command()
@click.argument("algebra", type=click.Path())
@click.pass_context
def validate(ctx, algebra):
    """Validate an algebra document."""
    body = _post(ctx, "/validate", {"algebra": _load_json(algebra)})
    if ctx.obj["report"] == "text":
        info = body["result"]["algebra"]
        click.echo(f"valid: {info['name']} ({info['backend']}, "
                   f"size {info['size']})")
        click.echo(f"subsets: {', '.join(body['result']['subsets'])}")


@main.command()
@click.argument("algebra", type=click.Path())
@click.option("--basis", required=True, help="Preset name or document path.")
@click.pass_context
def satisfies(ctx, algebra, basis):
    """Check whether an algebra satisfies an identity basis."""
    body = _post(ctx, "/satisfies", {"algebra": _load_json(algebra),
                                     "basis": _basis_arg(basis)})
    if ctx.obj["report"] == "text":
        click.echo(f"satisfies: {str(body['result']).lower()}")


@main.command()
@click.argument("algebra", type=click.Path())
@click.option("--basis", required=True)
@click.pass_context
def reflect(ctx, algebra, basis):
    """Quotient by the identity-value ideal of the whole algebra."""
    body = _post(ctx, "/reflect", {"algebra": _load_json(algebra),
                                   "basis": _basis_arg(basis)})
    if ctx.obj["report"] == "text":
        res = body["result"]
        click.echo(f"reflection: size {res['algebra']['size']}")
        _print_set("kernel", res["kernel"])


@main.command()
@click.option("--algebra", "algebra_path", required=True, type=click.Path())
@click.option("--left", default="all", show_default=True)
@click.option("--right", default="all", show_default=True)
@click.option("--basis", default=None)
@click.option("--higgins", is_flag=True,
              help="Use the abelian basis (Higgins commutator).")
@click.pass_context
def commutator(ctx, algebra_path, left, right, basis, higgins):
    """Relative commutator [left, right] over the basis's subvariety."""
    payload = {"algebra": _load_json(algebra_path), "left": left,
               "right": right, "higgins": higgins}
    if basis is not None:
        payload["basis"] = _basis_arg(basis)
    body = _post(ctx, "/commutator", payload)
    if ctx.obj["report"] == "text":
        _print_commutator(body)


@main.command()
@click.option("--algebra", "algebra_path", required=True, type=click.Path())
@click.option("--left", default="all", show_default=True)
@click.option("--right", default="all", show_default=True)
@click.option("--basis", required=True)
@click.pass_context
def cvalues(ctx, algebra_path, left, right, basis):
    """Difference-instance ideal C(left, right) only."""
    body = _post(ctx, "/cvalues", {"algebra": _load_json(algebra_path),
                                   "left": left, "right": right,
                                   "basis": _basis_arg(basis)})
    if ctx.obj["report"] == "text":
        _print_commutator(body)


@main.command()
@click.option("--algebra", "algebra_path", required=True, type=click.Path())
@click.option("--ideal", required=True)
@click.option("--basis", required=True)
@click.option("--direct", is_flag=True,
              help="Use the squared-carrier test instead of the commutator.")
@click.pass_context
def central(ctx, algebra_path, ideal, basis, direct):
    """Is the extension by this ideal central for the basis's subvariety?"""
    body = _post(ctx, "/central", {"algebra": _load_json(algebra_path),
                                   "ideal": ideal,
                                   "basis": _basis_arg(basis),
                                   "direct": direct})
    if ctx.obj["report"] == "text":
        click.echo(f"central: {str(body['result']).lower()}")


@main.command()
@click.option("--algebra", "algebra_path", required=True, type=click.Path())
@click.option("--left", default="all", show_default=True)
@click.option("--right", default="all", show_default=True)
@click.option("--basis", required=True)
@click.pass_context
def oracle(ctx, algebra_path, left, right, basis):
    """Universal-property search: smallest ideal whose quotient kills the
    commutator (exponential; small carriers only)."""
    body = _post(ctx, "/oracle", {"algebra": _load_json(algebra_path),
                                  "left": left, "right": right,
                                  "basis": _basis_arg(basis)})
    if ctx.obj["report"] == "text":
        _print_set("minimum", body["result"])


@main.command("image-condition")
@click.option("--algebra", "algebra_path", required=True, type=click.Path())
@click.option("--basis", required=True)
@click.pass_context
def image_condition_cmd(ctx, algebra_path, basis):
    """Do difference instances already span all identity values?"""
    body = _post(ctx, "/image-condition",
                 {"algebra": _load_json(algebra_path),
                  "basis": _basis_arg(basis)})
    if ctx.obj["report"] == "text":
        click.echo(f"image condition: {str(body['result']).lower()}")


@main.command()
@click.option("--module", "module_path", required=True, type=click.Path())
@click.option("--left", default="all", show_default=True)
@click.option("--right", default="all", show_default=True)
@click.option("--no-crosscheck", is_flag=True)
@click.pass_context
def peiffer(ctx, module_path, left, right, no_crosscheck):
    """Peiffer commutator of two normal precrossed submodules."""
    body = _post(ctx, "/peiffer", {"module": _load_json(module_path),
                                   "left": left, "right": right,
                                   "crosscheck": not no_crosscheck})
    if ctx.obj["report"] == "text":
        res = body["result"]
        members = ", ".join(res["peiffer"]["K_elements"])
        click.echo(f"peiffer commutator: {{{members}}} (trivial G part)")
        click.echo(f"crossed module: {str(res['is_crossed']).lower()}")
        if "crosscheck" in res:
            click.echo(f"agrees with the relative commutator: "
                       f"{str(res['crosscheck']).lower()}")


@main.command("pxm-convert")
@click.option("--module", "module_path", type=click.Path(), default=None)
@click.option("--algebra", "algebra_path", type=click.Path(), default=None)
@click.option("-o", "--output", type=click.Path(), default=None)
@click.pass_context
def pxm_convert(ctx, module_path, algebra_path, output):
    """Convert between precrossed modules and (d, c) table carriers."""
    payload = {}
    if module_path:
        payload["module"] = _load_json(module_path)
    if algebra_path:
        payload["algebra"] = _load_json(algebra_path)
    body = _post(ctx, "/pxm-convert", payload)
    doc = body["result"].get("document") or body["result"].get("module")
    _emit_document(ctx, doc, output)


@main.command("make-ring")
@click.option("--p", required=True, type=int)
@click.option("--generators", required=True,
              help="Comma-separated generator names.")
@click.option("--max-degree", required=True, type=int)
@click.option("--nil-squares", is_flag=True)
@click.option("--subset", "subset_specs", multiple=True, metavar="NAME=EXPRS",
              help="Named ideal, e.g. S=b or I=a1^2,a2^2,b^2.")
@click.option("--name", default=None)
@click.option("-o", "--output", type=click.Path(), default=None)
@click.pass_context
def make_ring(ctx, p, generators, max_degree, nil_squares, subset_specs,
              name, output):
    """Build a truncated polynomial ring document."""
    subsets = {}
    for spec in subset_specs:
        key, _, exprs = spec.partition("=")
        if not _ or not key:
            click.echo(f"error: bad --subset {spec!r}", err=True)
            sys.exit(EXIT_VALIDATION)
        subsets[key.strip()] = {"ideal_of":
                                [e.strip() for e in exprs.split(",")]}
    payload = {"p": p, "generators":
               [g.strip() for g in generators.split(",")],
               "max_degree": max_degree, "nil_squares": nil_squares,
               "subsets": subsets}
    if name:
        payload["name"] = name
    body = _post(ctx, "/make-ring", payload)
    _emit_document(ctx, body["result"]["document"], output,
                   summary=body["result"]["algebra"])


@main.command("make-group")
@click.option("--kind", required=True,
              help="cyclic:N | symmetric:N | dihedral:N | quaternion, "
                   "joined with x for direct products.")
@click.option("--name", default=None)
@click.option("-o", "--output", type=click.Path(), default=None)
@click.pass_context
def make_group(ctx, kind, name, output):
    """Build a group document from a kind string."""
    payload = {"kind": kind}
    if name:
        payload["name"] = name
    body = _post(ctx, "/make-group", payload)
    _emit_document(ctx, body["result"]["document"], output,
                   summary=body["result"]["algebra"])


def _emit_document(ctx, doc, output, summary=None):
    text = json.dumps(doc, indent=2, sort_keys=True)
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        if ctx.obj["report"] == "text":
            what = summary or {}
            click.echo(f"wrote {output}"
                       + (f" ({what.get('name')}, size {what.get('size')})"
                          if what else ""))
    elif ctx.obj["report"] == "text":
        click.echo(text)


@main.command()
@click.argument("name", type=click.Choice(["cex1", "cex2", "higgins",
                                           "peiffer"]))
@click.pass_context
def demo(ctx, name):
    """Run a packaged demonstration (each one asserts its claims)."""
    body = _post(ctx, f"/demo/{name}", {})
    if ctx.obj["report"] == "text":
        res = body["result"]
        click.echo(res["headline"])
        if name == "cex2":
            _print_set("[R,R]_B", res["relative_commutator"]["result"])
            _print_set("C_B(R,R)", res["c_values"]["result"])
            click.echo(f"image condition: {res['image_condition']}, "
                       f"backend agreement: {res['backend_agreement']}")
        elif name == "cex1":
            _print_set("[S,R1]_B", res["S_R1"]["result"])
            _print_set("[S,R2]_B", res["S_R2"]["result"])
            _print_set("[S,R1vR2]_B", res["S_join"]["result"])
            click.echo(f"witness generator: {res['witness']}")
            st = res["stage"]
            click.echo(
                "stage ring: upstairs [SvI,R1vI] size "
                f"{st['upstairs_S_R1_size']} maps to size "
                f"{st['upstairs_S_R1_image_size']}; joined commutator size "
                f"{st['upstairs_S_join_size']} maps to size "
                f"{st['upstairs_S_join_image_size']}")
        elif name == "higgins":
            for row in res["groups"]:
                click.echo(f"  {row['group']}: {row['pairs']} ideal pairs "
                           "agree with the normal-closure oracle")
            ring = res["ring"]
            click.echo(f"  {ring['name']}: {ring['pairs']} ideal pairs agree "
                       "with the product-ideal oracle")
        elif name == "peiffer":
            for row in res["modules"]:
                click.echo(f"  {row['module']}: carrier {row['carrier_size']}"
                           f", crossed={row['crossed']}, peiffer size "
                           f"{row['peiffer_size']}, crosscheck "
                           f"{row['crosscheck']}")
        click.echo("demo ok")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
def serve(host, port):
    """Run the HTTP service (requires uvicorn)."""
    try:
        import uvicorn
    except ImportError:
        click.echo("error: uvicorn is not installed "
                   "(pip install 'relcomm[server]')", err=True)
        sys.exit(EXIT_VALIDATION)
    from .service import create_app
    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
