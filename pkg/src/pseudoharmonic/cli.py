"""Command-line front end.

Every subcommand is a thin client of the HTTP service: by default the
request is dispatched in process through an ASGI transport (no socket, no
server to start), and --server redirects the same request to a remote
instance.  Exit codes: 0 all good, 1 a check failed or a computation could
not be completed, 2 bad usage.
"""

from __future__ import annotations

import asyncio
import sys
from dataclasses import dataclass

import click
import httpx

from .csvio import identity_table, metrics_table, spectrum_table, state_table, wavefn_table


@dataclass(frozen=True)
class RunConfig:
    """One subcommand invocation: model parameters plus whatever it scans."""

    subcommand: str
    s: float | None = None
    g: float | None = None
    family: str = "gp"
    z_min: float = -0.95
    z_max: float = 0.95
    steps: int = 191
    trunc: int | None = None
    n_max: int | None = None
    tol: float | None = None
    out: str | None = None
    grid: tuple | None = None
    server: str | None = None

    def params_payload(self) -> dict:
        if self.s is not None and self.g is not None:
            raise click.UsageError("give either --s or --g, not both")
        payload = {}
        if self.s is not None:
            payload["s"] = self.s
        if self.g is not None:
            payload["g"] = self.g
        return payload


def _call(server: str | None, method: str, path: str, payload: dict | None = None):
    """One request against the service, remote or in process."""

    async def go():
        if server is None:
            from .service.app import app

            transport = httpx.ASGITransport(app=app)
            base = "http://service.local"
        else:
            transport = None
            base = server
        async with httpx.AsyncClient(
            transport=transport, base_url=base, timeout=600.0
        ) as client:
            response = await client.request(method, path, json=payload)
            try:
                body = response.json()
            except ValueError:
                body = {"detail": response.text}
            return response.status_code, body

    try:
        return asyncio.run(go())
    except httpx.HTTPError as exc:
        raise click.ClickException(f"service unreachable: {exc}") from exc


def _flatten_detail(detail) -> str:
    """Render request-validation details as 'location: message' lines."""
    if isinstance(detail, list):
        parts = []
        for item in detail:
            if isinstance(item, dict) and "msg" in item:
                loc = ".".join(str(p) for p in item.get("loc", []) if p != "body")
                parts.append(f"{loc}: {item['msg']}" if loc else str(item["msg"]))
            else:
                parts.append(str(item))
        return "; ".join(parts)
    return str(detail)


def _demand_ok(status: int, body: dict):
    """Map HTTP failure onto the CLI exit-code contract."""
    if status < 400:
        return
    detail = _flatten_detail(body.get("detail", body))
    if status in (400, 404, 422):
        raise click.UsageError(f"rejected by service: {detail}")
    click.echo(f"computation failed: {detail}", err=True)
    sys.exit(1)


def _emit(text: str, out: str | None):
    if out is None:
        click.echo(text, nl=False)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _parse_grid(_ctx, _param, value):
    if value is None:
        return None
    pieces = value.split(":")
    if len(pieces) != 3:
        raise click.BadParameter("expected min:max:count")
    try:
        lo, hi, count = float(pieces[0]), float(pieces[1]), int(pieces[2])
    except ValueError as exc:
        raise click.BadParameter(f"expected min:max:count, got {value!r}") from exc
    return lo, hi, count


def _parse_z(_ctx, _param, value):
    try:
        return complex(value)
    except ValueError as exc:
        raise click.BadParameter(f"not a complex number: {value!r}") from exc


def _param_options(fn):
    fn = click.option("--s", type=float, default=None, help="oscillator index s >= 0")(fn)
    fn = click.option("--g", type=float, default=None, help="barrier strength g = s(s+1)")(fn)
    fn = click.option(
        "--server", type=str, default=None, help="remote service URL (default: in process)"
    )(fn)
    return fn


@click.group()
def main():
    """Pseudoharmonic-oscillator toolbox: spectra, coherent states, checks."""


@main.command()
@_param_options
@click.option("--nmax", type=click.IntRange(min=0), default=10, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None)
def spectrum(s, g, server, nmax, out):
    """Energy table E_n = 2n + s + 3/2 as CSV."""
    cfg = RunConfig(subcommand="spectrum", s=s, g=g, n_max=nmax, out=out, server=server)
    payload = cfg.params_payload() | {"n_max": nmax}
    status, body = _call(server, "POST", "/spectrum", payload)
    _demand_ok(status, body)
    rows = body["levels"]
    _emit(spectrum_table([r["n"] for r in rows], [r["energy"] for r in rows]), out)


@main.command()
@_param_options
@click.option("--n", type=click.IntRange(min=0), default=0, show_default=True, help="level index")
@click.option("--grid", callback=_parse_grid, default=None, help="min:max:count")
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None)
def wavefn(s, g, server, n, grid, out):
    """Eigenfunction psi_n sampled on a grid, as CSV columns x, psi."""
    cfg = RunConfig(subcommand="wavefn", s=s, g=g, n_max=n, grid=grid, out=out, server=server)
    payload = cfg.params_payload() | {"n": n}
    if grid is not None:
        payload["grid"] = {"min": grid[0], "max": grid[1], "count": grid[2]}
    status, body = _call(server, "POST", "/wavefunction", payload)
    _demand_ok(status, body)
    _emit(wavefn_table(body["x"], body["psi"]), out)


@main.command()
@_param_options
@click.option("--family", type=click.Choice(["bg", "gp"]), default="gp", show_default=True)
@click.option("--z", callback=_parse_z, default="0", show_default=True,
              help="complex label, e.g. 0.5 or 0.3+0.2j")
@click.option("--trunc", type=click.IntRange(min=1), default=None, help="fixed dimension")
@click.option("--tol", type=float, default=1e-12, show_default=True, help="tail threshold")
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None)
def state(s, g, server, family, z, trunc, tol, out):
    """Coherent-state coefficients as CSV columns n, re, im, abs2."""
    cfg = RunConfig(subcommand="state", s=s, g=g, family=family, trunc=trunc, tol=tol,
                    out=out, server=server)
    payload = cfg.params_payload() | {
        "family": family,
        "z_re": z.real,
        "z_im": z.imag,
        "tail_threshold": tol,
    }
    if trunc is not None:
        payload["dim"] = trunc
    status, body = _call(server, "POST", "/state", payload)
    _demand_ok(status, body)
    coeff = [complex(row["re"], row["im"]) for row in body["coeff"]]
    _emit(state_table(coeff), out)


@main.command("metrics-scan")
@_param_options
@click.option("--family", type=click.Choice(["bg", "gp"]), default="gp", show_default=True)
@click.option("--zmin", type=float, default=-0.95, show_default=True)
@click.option("--zmax", type=float, default=0.95, show_default=True)
@click.option("--steps", type=click.IntRange(min=0), default=191, show_default=True)
@click.option("--trunc", type=click.IntRange(min=4), default=None, help="fixed dimension")
@click.option("--tol", type=float, default=1e-12, show_default=True, help="tail threshold")
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None)
def metrics_scan(s, g, server, family, zmin, zmax, steps, trunc, tol, out):
    """Squeezing and Mandel Q along a real-z segment, as CSV."""
    cfg = RunConfig(subcommand="metrics-scan", s=s, g=g, family=family, z_min=zmin,
                    z_max=zmax, steps=steps, trunc=trunc, tol=tol, out=out, server=server)
    payload = cfg.params_payload() | {
        "family": family,
        "z_min": zmin,
        "z_max": zmax,
        "steps": steps,
        "tail_threshold": tol,
    }
    if trunc is not None:
        payload["dim"] = trunc
    status, body = _call(server, "POST", "/metrics/scan", payload)
    _demand_ok(status, body)
    for warning in body["warnings"]:
        click.echo(f"warning: {warning}", err=True)
    for r in body["records"]:
        if r.get("error"):
            click.echo(f"warning: z={r['z']}: {r['error']}", err=True)
    _emit(metrics_table(body["records"]), out)


@main.command("identity-check")
@_param_options
@click.option("--family", type=click.Choice(["bg", "gp"]), default="gp", show_default=True)
@click.option("--nmax", type=click.IntRange(min=0, max=12), default=None,
              help="highest moment (default 8 for bg, 10 for gp)")
@click.option("--tol", type=float, default=None, help="override the family tolerance")
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None)
def identity_check(s, g, server, family, nmax, tol, out):
    """Moment equations of the resolution of identity; exits 1 on failure."""
    cfg = RunConfig(subcommand="identity-check", s=s, g=g, family=family, n_max=nmax,
                    tol=tol, out=out, server=server)
    payload = cfg.params_payload() | {"family": family}
    if nmax is not None:
        payload["n_max"] = nmax
    if tol is not None:
        payload["tolerance"] = tol
    status, body = _call(server, "POST", "/checks/identity", payload)
    _demand_ok(status, body)
    table = identity_table(body["rows"])
    if out is not None:
        _emit(table, out)
    click.echo(table, nl=False)
    scheme = body["scheme"]
    click.echo(
        f"# {body['family']} moments, {scheme['kind']} rule with {scheme['node_count']} nodes; "
        f"max rel err {body['max_rel_err']:.3e} against tolerance {body['tolerance']:.1e}"
    )
    if not body["passed"]:
        click.echo("identity check FAILED", err=True)
        sys.exit(1)
    click.echo("identity check passed")


@main.command("algebra-check")
@_param_options
@click.option("--trunc", type=click.IntRange(min=8, max=4096), default=256, show_default=True)
@click.option("--nmax", type=click.IntRange(min=0, max=16), default=6, show_default=True,
              help="highest level for the grid realizations")
@click.option("--tol", type=float, default=1e-12, show_default=True,
              help="interior commutator bound")
def algebra_check(s, g, server, trunc, nmax, tol):
    """Commutation relations and their grid realizations; exits 1 on failure."""
    cfg = RunConfig(subcommand="algebra-check", s=s, g=g, trunc=trunc, n_max=nmax, tol=tol,
                    server=server)
    payload = cfg.params_payload() | {"dim": trunc, "n_grid": nmax, "interior_tol": tol}
    status, body = _call(server, "POST", "/checks/algebra", payload)
    _demand_ok(status, body)
    comm = body["commutators"]
    click.echo(f"interior commutator residual: {comm['max_interior']:.3e} (D = {body['dim']})")
    for row in body["grid"]:
        click.echo(
            f"n={row['n']}: M+ {row['ladder_plus']:.2e}  M- {row['ladder_minus']:.2e}  "
            f"A {row['shift_a']:.2e}  A+ {row['shift_adjoint']:.2e}"
        )
    if not body["passed"]:
        click.echo("algebra check FAILED", err=True)
        sys.exit(1)
    click.echo("algebra check passed")


@main.command("verify-all")
@_param_options
def verify_all(s, g, server):
    """Run the whole invariant battery; exits 0 only if every check passes."""
    if s is not None or g is not None:
        raise click.UsageError("verify-all uses its own parameter sweep; drop --s/--g")
    status, body = _call(server, "POST", "/verify", None)
    _demand_ok(status, body)
    for result in body["results"]:
        click.echo(result["line"])
    n_pass = sum(1 for r in body["results"] if r["passed"])
    click.echo(f"{n_pass}/{len(body['results'])} checks passed in {body['elapsed']:.1f} s")
    if not body["all_passed"]:
        sys.exit(1)


@main.command()
@click.option("--host", type=str, default="127.0.0.1", show_default=True)
@click.option("--port", type=click.IntRange(min=1, max=65535), default=8473, show_default=True)
def serve(host, port):
    """Run the HTTP service so other machines (or CLIs) can use it."""
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
