"""Command-line entry point: import, align, index, infer, query, check,
export, serve. All state round-trips through the N-Quads snapshot file."""
from __future__ import annotations

import os
import sys

import click

from . import indexer, kres, rdf_io, rules
from .kb import Config, KnowledgeBase
from .terms import Iri, Literal, SkolemNode, Term, TermError
from .vocab import BUILTIN_PREFIXES

_KIND_ALIASES = {"owl": "owl_ontology", "skos": "skos_thesaurus", "terminology": "terminology"}


def _load_kb(db: str) -> KnowledgeBase:
    if os.path.exists(db):
        try:
            return KnowledgeBase.load(db)
        except (ValueError, TermError) as exc:
            raise click.ClickException(f"corrupt snapshot {db}: {exc}")
    return KnowledgeBase()


def _save_kb(kb: KnowledgeBase, db: str) -> None:
    tmp = db + ".tmp"
    kb.save(tmp)
    os.replace(tmp, db)


@click.group()
@click.option("--db", envvar="FLUENTKB_DB", default="fluentkb.nq", show_default=True,
              help="Path of the N-Quads snapshot file.")
@click.pass_context
def main(ctx: click.Context, db: str):
    """Knowledge-base engine for historical manuscripts."""
    ctx.ensure_object(dict)
    ctx.obj["db"] = db


@main.command("import")
@click.option("--kind", "kind", type=click.Choice(sorted(_KIND_ALIASES)), required=True)
@click.option("--id", "resource_id", required=True, help="Resource IRI (also its named graph).")
@click.option("--label", default=None)
@click.option("--replace", is_flag=True, default=False)
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def import_cmd(ctx, kind, resource_id, label, replace, file):
    """Import a Turtle resource file as a knowledge resource."""
    kb = _load_kb(ctx.obj["db"])
    try:
        rid = Iri(resource_id)
    except TermError as exc:
        raise click.ClickException(str(exc))
    with open(file, encoding="utf-8") as f:
        text = f.read()
    outcome = rdf_io.parse_turtle(text, rid)
    if not outcome.ok:
        for line, col, msg in outcome.diagnostics:
            click.echo(f"{file}:{line}:{col}: {msg}", err=True)
        sys.exit(1)
    try:
        report = kres.import_resource(kb, outcome.quads, _KIND_ALIASES[kind], rid,
                                      label=label, replace=replace)
    except kres.KresError as exc:
        raise click.ClickException(str(exc))
    if not report.accepted:
        click.echo("import rejected, inconsistencies detected:", err=True)
        for clash in report.clashes:
            click.echo(f"  {clash.describe()}", err=True)
        sys.exit(1)
    _save_kb(kb, ctx.obj["db"])
    click.echo(f"imported {rid.value}: {report.entity_count} entities")


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def align(ctx, file):
    """Load correspondences from a CSV (entity1,entity2,relation,confidence)."""
    kb = _load_kb(ctx.obj["db"])
    with open(file, encoding="utf-8") as f:
        text = f.read()
    try:
        n = kres.load_alignments_csv(kb, text)
    except (kres.KresError, TermError, ValueError) as exc:
        raise click.ClickException(str(exc))
    _save_kb(kb, ctx.obj["db"])
    click.echo(f"stored {n} correspondences")


@main.command()
@click.option("--theta", type=float, default=None, help="Score threshold (default 0.35).")
@click.option("--lambda", "lambda_", type=float, default=None,
              help="Temporal factor weight (default 0.3).")
@click.option("--transcriptions", "transcriptions_file", default=None,
              type=click.Path(exists=True, dir_okay=False),
              help="JSON Lines transcriptions to load before indexing.")
@click.pass_context
def index(ctx, theta, lambda_, transcriptions_file):
    """Semantically index transcriptions against the terminologies."""
    kb = _load_kb(ctx.obj["db"])
    try:
        if transcriptions_file:
            with open(transcriptions_file, encoding="utf-8") as f:
                loaded = indexer.load_transcriptions_jsonl(kb, f.read())
            click.echo(f"loaded {len(loaded)} transcriptions")
        proposed = indexer.index_all(kb, theta=theta, lambda_=lambda_)
    except (indexer.IndexerError, TermError) as exc:
        raise click.ClickException(str(exc))
    _save_kb(kb, ctx.obj["db"])
    click.echo(f"proposed associations: {len(proposed)}")
    for a in proposed:
        click.echo(f"  {a.occurrence.surface_form!r} -> {a.concept.value} score {a.score:.3f}")


@main.command()
@click.option("--rules", "rules_file", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--max-rounds", type=int, default=None)
@click.pass_context
def infer(ctx, rules_file, max_rounds):
    """Saturate with the rule file, then infer manuscript writing times."""
    kb = _load_kb(ctx.obj["db"])
    with open(rules_file, encoding="utf-8") as f:
        text = f.read()
    try:
        compiled = rules.compile_rules(text)
    except rules.RuleSyntaxError as exc:
        raise click.ClickException(f"{rules_file}:{exc}")
    static = [r for r in compiled if r.kind == "static"]
    fluent = [r for r in compiled if r.kind == "fluent_generating"]
    try:
        report = rules.saturate(kb, static, fluent, round_cap=max_rounds)
    except rules.RoundCapExceeded as exc:
        raise click.ClickException(str(exc))
    wt = rules.infer_writing_times(kb)
    _save_kb(kb, ctx.obj["db"])
    click.echo(f"rounds: {report.rounds}")
    click.echo(f"new static triples: {report.new_static_triples}")
    click.echo(f"new fluents: {report.new_fluents}")
    click.echo(f"blocked fluents: {report.blocked_fluents}")
    for d in report.diagnostics:
        click.echo(f"  warning: {d}", err=True)
    click.echo(f"inferred writing times: {wt.updated}")
    for m, reason in wt.contradictions:
        click.echo(f"  contradiction for {m.value}: {reason}", err=True)


def _parse_query_term(token: str) -> Term | None:
    if token == "?":
        return None
    if token.startswith("<") and token.endswith(">"):
        return Iri(token[1:-1])
    if token.startswith('"'):
        return Literal(token.strip('"'))
    if token.startswith("_:"):
        return SkolemNode(token[2:])
    prefix, sep, local = token.partition(":")
    if sep and prefix in BUILTIN_PREFIXES:
        return Iri(BUILTIN_PREFIXES[prefix] + local)
    return Iri(token)


@main.command()
@click.argument("pattern")
@click.pass_context
def query(ctx, pattern):
    """Match a quad pattern "S P O G" (wildcards '?')."""
    parts = pattern.split()
    if len(parts) != 4:
        raise click.UsageError('pattern must have four positions: "S P O G"')
    kb = _load_kb(ctx.obj["db"])
    try:
        s, p, o, g = (_parse_query_term(t) for t in parts)
    except TermError as exc:
        raise click.ClickException(str(exc))
    if g is not None and not isinstance(g, Iri):
        raise click.ClickException("graph position must be an IRI or '?'")
    for q in kb.dataset.match(subject=s, predicate=p, object=o, graph=g):
        click.echo(q.nq_line())


@main.command()
@click.pass_context
def check(ctx):
    """Report consistency clashes over the whole store."""
    kb = _load_kb(ctx.obj["db"])
    clashes = sorted(kres.find_clashes(kb.dataset.quads(), kb.config.alignment_trust))
    if not clashes:
        click.echo("no clashes")
        return
    for clash in clashes:
        click.echo(clash.describe())
    sys.exit(1)


@main.command()
@click.argument("out", type=click.Path(dir_okay=False))
@click.pass_context
def export(ctx, out):
    """Write the canonical N-Quads snapshot to OUT."""
    kb = _load_kb(ctx.obj["db"])
    kb.save(out)
    click.echo(f"exported {kb.dataset.size} quads to {out}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=7341, show_default=True)
@click.option("--rules", "rules_file", default=None,
              type=click.Path(exists=True, dir_okay=False),
              help="Rule file backing POST /actions/saturate.")
@click.option("--read-only", is_flag=True, default=False)
@click.option("--token", default=None, help="Optional static bearer token.")
@click.pass_context
def serve(ctx, host, port, rules_file, read_only, token):
    """Serve the JSON HTTP API over the snapshot."""
    import uvicorn

    from .api import ApiConfig, create_app

    if not 1 <= port <= 65535:
        raise click.UsageError("port must be in [1, 65535]")
    config = ApiConfig(bind=host, port=port, snapshot_path=ctx.obj["db"],
                       read_only=read_only, rules_path=rules_file, token=token)
    app = create_app(config)
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
