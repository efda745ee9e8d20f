"""Command line front end; a thin client of the HTTP service.

Every subcommand marshals its input files into a service request, posts it
(to an in-process application instance by default, or to a remote server
via --server), and writes the response payload.  Diagnostics and witnesses
go to stderr; data goes to --output.

Exit codes: 0 success, 1 validation error, 2 negative decision (e.g. not
circular), 3 resource cap exceeded.
"""

from __future__ import annotations

import sys
from typing import Optional

import click
import httpx


def _client(server: Optional[str]) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    import warnings

    from .service.app import app

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from starlette.testclient import TestClient

        return TestClient(app, raise_server_exceptions=False)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write(path: str, data: str) -> None:
    if path == "-":
        sys.stdout.write(data)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(data)


def _call(ctx: click.Context, endpoint: str, payload: dict, output: str = "-") -> None:
    with _client(ctx.obj.get("server")) as client:
        resp = client.post("/v1/" + endpoint, json=payload)
    if resp.status_code == 400:
        click.echo("error: " + resp.json().get("error", "validation error"), err=True)
        sys.exit(1)
    if resp.status_code == 507:
        click.echo("error: " + resp.json().get("error", "resource cap"), err=True)
        sys.exit(3)
    if resp.status_code == 422:
        click.echo("error: malformed request: %s" % resp.text, err=True)
        sys.exit(1)
    if resp.status_code != 200:
        click.echo("error: service returned HTTP %d" % resp.status_code, err=True)
        sys.exit(1)
    body = resp.json()
    for warning in body.get("warnings") or []:
        click.echo("warning: " + warning, err=True)
    if body.get("decision") is False:
        witness = body.get("witness") or "negative decision"
        click.echo(witness, err=True)
        sys.exit(2)
    if body.get("output") is not None:
        _write(output, body["output"])


input_opt = click.option("--input", "input_", default="-", help="input file or - for stdin")
output_opt = click.option("--output", default="-", help="output file or - for stdout")
format_opt = click.option(
    "--format", "fmt", type=click.Choice(["txt", "dot"]), default="txt", help="output format"
)


@click.group()
@click.option("--server", default=None, help="URL of a running service (default: in-process)")
@click.pass_context
def main(ctx: click.Context, server: Optional[str]) -> None:
    """Split systems, closures, 1-nested networks and Buneman graphs."""
    ctx.ensure_object(dict)
    ctx.obj["server"] = server


@main.command()
@input_opt
@output_opt
@click.pass_context
def closure(ctx, input_, output):
    """Intersection closure of a split system."""
    _call(ctx, "closure", {"system": _read(input_)}, output)


@main.command()
@input_opt
@output_opt
@click.pass_context
def iclosure(ctx, input_, output):
    """Incompatibility-intersection closure of a split system."""
    _call(ctx, "iclosure", {"system": _read(input_)}, output)


@main.command()
@input_opt
@output_opt
@click.pass_context
def components(ctx, input_, output):
    """Connected components of the incompatibility graph."""
    _call(ctx, "components", {"system": _read(input_)}, output)


@main.command(name="is-circular")
@input_opt
@output_opt
@click.option("--brute-force", is_flag=True, help="scan all orderings (n <= 10)")
@click.pass_context
def is_circular_cmd(ctx, input_, output, brute_force):
    """Decide circularity; prints a displaying ordering on success."""
    _call(ctx, "is-circular", {"system": _read(input_), "brute_force": brute_force}, output)


@main.command(name="is-maximal")
@input_opt
@output_opt
@click.pass_context
def is_maximal_cmd(ctx, input_, output):
    """Test whether a circular system generates a maximal circular closure."""
    _call(ctx, "is-maximal", {"system": _read(input_)}, output)


@main.command()
@input_opt
@output_opt
@format_opt
@click.pass_context
def synthesize(ctx, input_, output, fmt):
    """Minimal 1-nested network displaying a circular split system."""
    _call(ctx, "synthesize", {"system": _read(input_), "format": fmt}, output)


@main.command(name="splits-of")
@input_opt
@output_opt
@click.option("--oracle", is_flag=True, help="use the brute-force minimal-cut enumeration")
@click.pass_context
def splits_of_cmd(ctx, input_, output, oracle):
    """All splits displayed by a network."""
    _call(ctx, "splits-of", {"network": _read(input_), "oracle": oracle}, output)


@main.command()
@input_opt
@output_opt
@click.option("--split", required=True, help="split as 'a b | c d'")
@click.pass_context
def multiplicity(ctx, input_, output, split):
    """Number of minimal cuts of a network inducing one split."""
    _call(ctx, "multiplicity", {"network": _read(input_), "split": split}, output)


@main.command()
@input_opt
@output_opt
@format_opt
@click.option("--move", type=click.Choice(["R1", "R2", "R1'", "R2'"]), default=None)
@click.option("--vertex", type=int, default=None)
@click.option("--detail", type=int, default=None)
@click.pass_context
def resolve(ctx, input_, output, fmt, move, vertex, detail):
    """Apply one partial-resolution move, or resolve maximally."""
    _call(
        ctx,
        "resolve",
        {"network": _read(input_), "format": fmt, "move": move, "vertex": vertex, "detail": detail},
        output,
    )


@main.command()
@input_opt
@output_opt
@format_opt
@click.option("--max-vertices", type=int, default=None, help="vertex cap (default 10^6)")
@click.pass_context
def buneman(ctx, input_, output, fmt, max_vertices):
    """Buneman graph of a split system."""
    _call(
        ctx,
        "buneman",
        {"system": _read(input_), "format": fmt, "max_vertices": max_vertices},
        output,
    )


@main.command()
@input_opt
@output_opt
@click.option("--max-vertices", type=int, default=None)
@click.pass_context
def marguerites(ctx, input_, output, max_vertices):
    """Describe the marguerites of the Buneman graph's blocks."""
    _call(ctx, "marguerites", {"system": _read(input_), "max_vertices": max_vertices}, output)


@main.command()
@input_opt
@output_opt
@click.pass_context
def embed(ctx, input_, output):
    """Embed a maximal partially-resolved network into its Buneman graph."""
    _call(ctx, "embed", {"network": _read(input_)}, output)


@main.command()
@input_opt
@output_opt
@format_opt
@click.option("--max-vertices", type=int, default=None)
@click.pass_context
def extract(ctx, input_, output, fmt, max_vertices):
    """Extract the optimal 1-nested network from the Buneman graph."""
    _call(
        ctx,
        "extract",
        {"system": _read(input_), "format": fmt, "max_vertices": max_vertices},
        output,
    )


@main.command(name="check-equal")
@input_opt
@click.option("--other", required=True, help="second network file")
@click.pass_context
def check_equal(ctx, input_, other):
    """Compare two networks by their displayed split systems."""
    _call(ctx, "check-equal", {"network": _read(input_), "other": _read(other)})
    click.echo("equivalent")


@main.command()
@input_opt
@output_opt
@format_opt
@click.pass_context
def tree(ctx, input_, output, fmt):
    """Unrooted phylogenetic tree of a compatible split system."""
    _call(ctx, "tree", {"system": _read(input_), "format": fmt}, output)


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8037)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
