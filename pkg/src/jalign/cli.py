"""`ja` command line interface. A thin client over the HTTP service."""

from __future__ import annotations

import asyncio
import functools
import json
import re
import sys
from pathlib import Path

import click

from jalign.client import JaClient, ServiceError
from jalign.errors import InvalidInputError, JalignError

_EXIT_BY_KIND = {
    "validation": 2,
    "conflict": 2,
    "not_found": 2,
    "backend": 3,
    "coverage": 4,
}

_SHOT_TOKENS = {"zero", "few"}
_STYLE_TOKENS = {"reasoning": "reasoning", "plain": "plain", "non_reasoning": "plain"}
_ALL_SLUGS = ("zero_plain", "zero_reasoning", "few_plain", "few_reasoning")


def parse_conditions_expr(expr: str) -> list[str]:
    """Expand a conditions expression into slugs.

    Accepts full slugs ("zero_plain,few_reasoning"), bare axis tokens that
    expand across the other axis ("zero", "reasoning"), the word "all", and a
    cross product written with x or × ("zero,few x reasoning,plain").
    """
    expr = expr.strip().lower()
    if not expr:
        raise InvalidInputError("empty conditions expression")
    cross = re.split(r"\s*[×]\s*|\s+x\s+|(?<=[a-z_,])x(?=[a-z_,])", expr)
    cross = [part for part in cross if part]
    if len(cross) > 2:
        raise InvalidInputError(f"conditions expression has too many cross terms: {expr!r}")
    if len(cross) == 2:
        shots = [t.strip() for t in cross[0].split(",") if t.strip()]
        styles = [t.strip() for t in cross[1].split(",") if t.strip()]
        bad = [t for t in shots if t not in _SHOT_TOKENS]
        bad += [t for t in styles if t not in _STYLE_TOKENS]
        if bad:
            raise InvalidInputError(f"unknown condition tokens: {bad}")
        slugs = []
        for shot in shots:
            for style in styles:
                slug = f"{shot}_{_STYLE_TOKENS[style]}"
                if slug not in slugs:
                    slugs.append(slug)
        return slugs

    slugs: list[str] = []

    def _add(slug: str) -> None:
        if slug not in slugs:
            slugs.append(slug)

    for token in (t.strip() for t in expr.split(",")):
        if not token:
            continue
        if token == "all":
            for slug in _ALL_SLUGS:
                _add(slug)
        elif token in _SHOT_TOKENS:
            _add(f"{token}_plain")
            _add(f"{token}_reasoning")
        elif token in _STYLE_TOKENS:
            _add(f"zero_{_STYLE_TOKENS[token]}")
            _add(f"few_{_STYLE_TOKENS[token]}")
        else:
            normalised = token.replace("-", "_").replace(".", "_")
            if normalised.endswith("_non_reasoning"):
                normalised = normalised[: -len("_non_reasoning")] + "_plain"
            if normalised not in _ALL_SLUGS:
                raise InvalidInputError(f"unknown condition token: {token!r}")
            _add(normalised)
    return slugs


def _client(ctx: click.Context) -> JaClient:
    server = ctx.obj.get("server")
    if server:
        return JaClient(base_url=server)
    return JaClient(project_root=ctx.obj["project"])


def _fail(exc: Exception) -> None:
    kind = getattr(exc, "kind", "validation")
    click.echo(f"error ({kind}): {exc}", err=True)
    raise SystemExit(_EXIT_BY_KIND.get(kind, 1))


def run_async(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return asyncio.run(fn(*args, **kwargs))
        except (ServiceError, JalignError) as exc:
            _fail(exc)

    return wrapper


@click.group()
@click.option(
    "--project",
    type=click.Path(file_okay=False, path_type=Path),
    default=Path("."),
    show_default=True,
    help="Project directory (used when no --server is given).",
)
@click.option(
    "--server",
    default=None,
    help="Base URL of a running service; when set, commands go over the network.",
)
@click.pass_context
def main(ctx: click.Context, project: Path, server: str | None) -> None:
    """Joint-attention assessment pipeline: annotate, describe, judge, evaluate."""
    ctx.ensure_object(dict)
    ctx.obj["project"] = project
    ctx.obj["server"] = server


@main.command()
@click.argument("manifest", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.pass_context
@run_async
async def ingest(ctx: click.Context, manifest: Path) -> None:
    """Validate a manifest file and initialise the project from it."""
    doc = json.loads(manifest.read_text(encoding="utf-8"))
    async with _client(ctx) as client:
        result = await client.ingest(doc)
    click.echo(
        f"ingested {result['video_count']} videos "
        f"({result['segment_count']} segments)"
    )


@main.command()
@click.option("--backend", default="mock", show_default=True, help="mock or wire:<name>.")
@click.option("--video", "videos", multiple=True, help="Restrict to specific video ids.")
@click.pass_context
@run_async
async def describe(ctx: click.Context, backend: str, videos: tuple[str, ...]) -> None:
    """Produce behaviour descriptions for every segment."""
    async with _client(ctx) as client:
        run = await client.describe(
            backend=backend, video_ids=list(videos) or None
        )
    click.echo(f"describe run {run['run_id']} sealed={run['sealed']}")
    if run["failures"]:
        click.echo(f"  {len(run['failures'])} failures", err=True)


@main.command()
@click.option("--backend", default="mock", show_default=True, help="mock or wire:<name>.")
@click.option(
    "--conditions",
    default="all",
    show_default=True,
    help='Condition slugs or an expression like "zero,few x reasoning,plain".',
)
@click.option("--describe-run", default=None, help="Describe run id (default: latest).")
@click.pass_context
@run_async
async def judge(
    ctx: click.Context, backend: str, conditions: str, describe_run: str | None
) -> None:
    """Turn descriptions into Strong/Moderate/Poor judgements per condition."""
    slugs = parse_conditions_expr(conditions)
    async with _client(ctx) as client:
        result = await client.judge(
            backend=backend, conditions=slugs, describe_run_id=describe_run
        )
    for run in result["runs"]:
        line = f"judge run {run['run_id']} condition={run['condition']} sealed={run['sealed']}"
        click.echo(line)
        if run["failures"]:
            click.echo(f"  {len(run['failures'])} failures", err=True)


@main.command()
@click.option(
    "--conditions",
    default="all",
    show_default=True,
    help="Conditions to evaluate (same grammar as judge).",
)
@click.option(
    "--judge-run",
    "judge_runs",
    multiple=True,
    help="Explicit run for one condition, as slug=run_id. Repeatable.",
)
@click.pass_context
@run_async
async def evaluate(
    ctx: click.Context, conditions: str, judge_runs: tuple[str, ...]
) -> None:
    """Compute alignment reports against every rater's annotations."""
    slugs = parse_conditions_expr(conditions)
    mapping = {}
    for item in judge_runs:
        if "=" not in item:
            raise InvalidInputError(f"--judge-run needs slug=run_id, got {item!r}")
        key, _, value = item.partition("=")
        mapping[key.strip()] = value.strip()
    async with _client(ctx) as client:
        run = await client.evaluate(
            conditions=slugs, judge_run_ids=mapping or None
        )
    click.echo(f"evaluate run {run['run_id']} sealed={run['sealed']}")
    for artifact in run["artifacts"]:
        click.echo(f"  {artifact}")


@main.command()
@click.option("--run", "run_id", default=None, help="Run id (default: latest evaluate run).")
@click.option(
    "--out",
    type=click.Path(file_okay=False, path_type=Path),
    required=True,
    help="Directory to write the exported artifacts into.",
)
@click.pass_context
@run_async
async def export(ctx: click.Context, run_id: str | None, out: Path) -> None:
    """Download a run's artifacts (radar export, reports, summaries)."""
    async with _client(ctx) as client:
        if run_id is None:
            listing = await client.list_runs(kind="evaluate")
            runs = listing["runs"]
            if not runs:
                raise ServiceError(404, "not_found", "no evaluate runs to export")
            run_id = runs[-1]["run_id"]
        files = (await client.run_files(run_id))["files"]
        out.mkdir(parents=True, exist_ok=True)
        for name in files:
            data = await client.download(run_id, name)
            target = out / name
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_bytes(data)
            click.echo(f"wrote {target}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
@click.option(
    "--ui",
    "ui_dir",
    type=click.Path(exists=True, file_okay=False, path_type=Path),
    default=None,
    help="Static annotation UI directory to mount at /ui.",
)
@click.pass_context
def serve(ctx: click.Context, host: str, port: int, ui_dir: Path | None) -> None:
    """Run the HTTP service for this project."""
    import uvicorn

    from jalign.service.app import create_app

    app = create_app(ctx.obj["project"], ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port, log_level="info")


if __name__ == "__main__":
    main()
