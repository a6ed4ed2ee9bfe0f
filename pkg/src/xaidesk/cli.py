"""Operator and scripting interface.

Every command is a thin client of the HTTP API: with ``--api-url`` (or
``XAIDESK_API_URL``) requests go to a running server, otherwise they are
served by an in-process application instance, so the full workflow runs
offline with no divergent logic paths.

Exit codes: 0 success, 1 usage or request error, 2 backend unavailable.
"""

from __future__ import annotations

import json
import os
import sys
import warnings

import click
import httpx


class ApiError(Exception):
    def __init__(self, status: int, detail: str):
        super().__init__(f"HTTP {status}: {detail}")
        self.status = status


class ApiClient:
    """httpx-based client; falls back to an in-process app when no URL is set."""

    def __init__(self, base_url: str | None, user: str):
        self.user = user
        if base_url:
            self._client = httpx.Client(base_url=base_url, timeout=300.0)
        else:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                from starlette.testclient import TestClient

                from .service import create_app

                self._client = TestClient(create_app())

    def request(self, method: str, path: str, **kwargs):
        headers = dict(kwargs.pop("headers", {}))
        headers["X-User-Id"] = self.user
        try:
            response = self._client.request(method, path, headers=headers, **kwargs)
        except httpx.HTTPError as exc:
            raise ApiError(503, f"cannot reach API: {exc}") from exc
        if response.status_code >= 400:
            try:
                detail = response.json().get("detail", response.text)
            except ValueError:
                detail = response.text
            raise ApiError(response.status_code, detail)
        return response.json()


@click.group()
@click.option("--api-url", envvar="XAIDESK_API_URL", default=None, help="Remote API base URL; omit to run in-process.")
@click.option("--user", "user_id", envvar="XAIDESK_USER", default="default", show_default=True, help="User id sent as X-User-Id.")
@click.pass_context
def cli(ctx: click.Context, api_url: str | None, user_id: str):
    """Explanation artifacts: explain, store, search, chat, evaluate."""
    ctx.obj = {"api_url": api_url, "user": user_id}


def _client(ctx: click.Context) -> ApiClient:
    return ApiClient(ctx.obj["api_url"], ctx.obj["user"])


@cli.command()
@click.option("--host", default=None, help="Bind address (default from XAIDESK_HOST).")
@click.option("--port", type=int, default=None, help="Port (default from XAIDESK_PORT).")
def serve(host: str | None, port: int | None):
    """Start the HTTP service."""
    import uvicorn

    from .service import AppConfig, create_app

    config = AppConfig.from_env()
    uvicorn.run(create_app(config), host=host or config.host, port=port or config.port)


@cli.command()
@click.argument("csv_file", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def ingest(ctx: click.Context, csv_file: str):
    """Upload a CSV dataset; prints the dataset id."""
    with open(csv_file, "rb") as fh:
        data = fh.read()
    payload = _client(ctx).request(
        "POST", "/datasets", files={"file": (os.path.basename(csv_file), data, "text/csv")}
    )
    click.echo(f"dataset_id: {payload['dataset_id']}")
    click.echo(f"rows: {payload['n_rows']}")
    click.echo(f"summary artifact: {payload['summary_artifact_id']}")


@cli.command()
@click.argument("dataset_id")
@click.argument("row_id", type=int)
@click.option("--method", type=click.Choice(["occlusion", "lime"]), default="occlusion", show_default=True)
@click.option("--k", type=int, default=7, show_default=True, help="Top-k features (lime).")
@click.option("--samples", type=int, default=1000, show_default=True, help="Perturbation count (lime).")
@click.option("--seed", type=int, default=0, show_default=True, help="Sampling seed (lime).")
@click.pass_context
def explain(ctx: click.Context, dataset_id: str, row_id: int, method: str, k: int, samples: int, seed: int):
    """Explain one sample and persist the artifact."""
    if method == "occlusion":
        payload = _client(ctx).request(
            "POST", "/explain/occlusion", json={"dataset_id": dataset_id, "row_id": row_id}
        )
    else:
        payload = _client(ctx).request(
            "POST",
            "/explain/lime",
            json={"dataset_id": dataset_id, "row_id": row_id, "k": k, "n_samples": samples, "seed": seed},
        )
    result = payload["result"]
    click.echo(
        f"sample {result['sample_id']}  method={result['method']}  "
        f"target={result['target_class']}  baseline={result['baseline_confidence']:.3f}"
    )
    click.echo(f"{'token':<20}{'position':>9}{'importance':>12}")
    for attribution in result["attributions"]:
        click.echo(
            f"{attribution['token']:<20}{attribution['position']:>9}"
            f"{attribution['importance']:>+12.4f}"
        )
    click.echo(f"artifact: {payload['artifact_id']}")


@cli.command()
@click.option("--strategy", type=click.Choice(["naive", "constrained"]), default="constrained", show_default=True)
@click.pass_context
def chat(ctx: click.Context, strategy: str):
    """Interactive question loop over stored explanations."""
    client = _client(ctx)
    click.echo("Ask about stored explanations (empty line or Ctrl-D to quit).")
    while True:
        try:
            question = click.prompt("you", prompt_suffix="> ", default="", show_default=False)
        except (EOFError, click.Abort):
            break
        if not question.strip():
            break
        payload = client.request("POST", "/chat", json={"question": question, "strategy": strategy})
        click.echo(payload["text"])
        if payload["cited_artifact_ids"]:
            click.echo(f"[cited: {', '.join(payload['cited_artifact_ids'])}]")


_METRIC_ROWS = [
    ("Hallucination rate (down)", "hallucination_rate"),
    ("Citations per response (up)", "citations_per_response"),
    ("Grounding completeness (up)", "grounding_completeness"),
]


@cli.command("eval")
@click.option("--suite", type=click.Path(exists=True, dir_okay=False), default=None, help="Query suite JSON; omit for the bundled 30-query suite.")
@click.option("--strategy", type=click.Choice(["naive", "constrained", "both"]), default="constrained", show_default=True)
@click.pass_context
def eval_command(ctx: click.Context, suite: str | None, strategy: str):
    """Run the faithfulness evaluation suite and print the metric table."""
    client = _client(ctx)
    queries = None
    if suite:
        with open(suite, encoding="utf-8") as fh:
            queries = json.load(fh)
    strategies = ["naive", "constrained"] if strategy == "both" else [strategy]
    reports = {}
    for s in strategies:
        body = {"strategy": s}
        if queries is not None:
            body["queries"] = queries
        reports[s] = client.request("POST", "/eval/faithfulness", json=body)["report"]

    header = f"{'Metric':<30}" + "".join(f"{s:>14}" for s in strategies)
    click.echo(header)
    for label, key in _METRIC_ROWS:
        row = f"{label:<30}" + "".join(f"{reports[s][key]:>14.2f}" for s in strategies)
        click.echo(row)
    n = reports[strategies[0]]["n_queries"]
    click.echo(f"(n = {n} queries, micro-averaged)")


@cli.command()
@click.option("--user", "user_override", default=None, help="Rehydrate this user instead of the session user.")
@click.pass_context
def rehydrate(ctx: click.Context, user_override: str | None):
    """Rebuild the vector index from persisted metadata if it is empty."""
    client = _client(ctx)
    if user_override:
        client.user = user_override
    payload = client.request("POST", "/admin/rehydrate")
    click.echo(f"rehydrated: {payload['count']}")


@cli.group()
def artifacts():
    """Inspect stored artifacts."""


@artifacts.command("ls")
@click.pass_context
def artifacts_ls(ctx: click.Context):
    for record in _client(ctx).request("GET", "/artifacts"):
        click.echo(f"{record['artifact_id']}  {record['plot_type']:<20}  {record['title']}")


@artifacts.command("get")
@click.argument("artifact_id")
@click.pass_context
def artifacts_get(ctx: click.Context, artifact_id: str):
    record = _client(ctx).request("GET", f"/artifacts/{artifact_id}")
    click.echo(json.dumps(record, indent=2, sort_keys=True))


def main(argv: list[str] | None = None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.UsageError as exc:
        exc.show()
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.Abort:
        return 1
    except ApiError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2 if exc.status == 503 else 1
    except httpx.HTTPError as exc:
        click.echo(f"error: cannot reach API: {exc}", err=True)
        return 2


if __name__ == "__main__":
    sys.exit(main())
