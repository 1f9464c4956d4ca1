"""Command line interface for the collection pipeline."""

from __future__ import annotations

import json
import sys
import zlib
from pathlib import Path

import click

from .analysis import build_analysis
from .config import AppConfig, dump_mr_set, load_config, load_mr_set
from .generate import MrSetRequest, generate_balanced_set
from .render import load_render_config, render_svg
from .schema import load_schema, parse_textual_mr
from .similarity import (
    RemoteSimilarityClient,
    SimilarityCache,
    SimilarityScore,
    SynonymLexicon,
    score_baseline,
)
from .store import (
    CorpusStore,
    SimilarityRecord,
    export_corpus,
    import_ratings_csv,
    load_corpus,
)
from .validation import Submission, validate_submission


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="Deployment config file (JSON).")
@click.pass_context
def main(ctx: click.Context, config_path: str | None) -> None:
    """Collect and quality-control NLG training data."""
    ctx.obj = load_config(config_path)


def _parse_counts(spec: str) -> dict[int, int]:
    counts = {}
    for part in spec.split(","):
        k, _, v = part.partition("=")
        counts[int(k)] = int(v)
    return counts


@main.command("gen-mrs")
@click.option("--counts", default="3=25,5=25,8=25", show_default=True,
              help="MRs per complexity, e.g. 3=25,5=25,8=25.")
@click.option("--seed", default=42, show_default=True, type=int)
@click.option("--schema", "schema_path", type=click.Path(exists=True), default=None)
@click.option("--out", "out_path", required=True, type=click.Path())
@click.pass_obj
def gen_mrs(config: AppConfig, counts: str, seed: int, schema_path: str | None, out_path: str) -> None:
    """Generate a balanced MR set file."""
    schema = load_schema(schema_path or config.schema_path)
    request = MrSetRequest(counts=_parse_counts(counts), seed=seed, schema=schema)
    mrs = generate_balanced_set(request)
    dump_mr_set(mrs, seed, out_path)
    click.echo(f"wrote {len(mrs)} MRs to {out_path}")


@main.command()
@click.option("--mrs", "mrs_path", required=True, type=click.Path(exists=True))
@click.option("--schema", "schema_path", type=click.Path(exists=True), default=None)
@click.option("--out-dir", required=True, type=click.Path())
@click.pass_obj
def render(config: AppConfig, mrs_path: str, schema_path: str | None, out_dir: str) -> None:
    """Render every MR of a set file to an SVG stimulus."""
    schema = load_schema(schema_path or config.schema_path)
    mrs = load_mr_set(mrs_path, schema)
    render_config = load_render_config(schema)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for mr_id, mr in mrs.items():
        svg = render_svg(mr, render_config, zlib.crc32(mr_id.encode()), schema)
        (out / f"{mr_id}.svg").write_text(svg, "utf-8")
    click.echo(f"rendered {len(mrs)} stimuli into {out_dir}")


@main.command()
@click.option("--submissions", "subs_path", required=True, type=click.Path(exists=True),
              help="Candidate submissions, one JSON object per line.")
@click.option("--mrs", "mrs_path", required=True, type=click.Path(exists=True))
@click.option("--schema", "schema_path", type=click.Path(exists=True), default=None)
@click.option("--report-file", type=click.Path(), default=None)
@click.pass_obj
def validate(config: AppConfig, subs_path: str, mrs_path: str, schema_path: str | None,
             report_file: str | None) -> None:
    """Validate a corpus of candidate submissions offline.

    Each line needs: worker, mr_id, text, issued_at, submitted_at, modality,
    batch_id, country.  Reports one verdict line per submission.
    """
    schema = load_schema(schema_path or config.schema_path)
    mrs = load_mr_set(mrs_path, schema)
    validation = config.load_validation()
    history: dict[str, list[str]] = {}
    accepted = rejected = 0
    reports = []
    with open(subs_path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            doc = json.loads(line)
            sub = Submission(
                worker_id=doc["worker"],
                mr_id=doc["mr_id"],
                text=doc["text"],
                issued_at=doc["issued_at"],
                submitted_at=doc["submitted_at"],
                modality=doc["modality"],
                batch_id=doc["batch_id"],
                country_code=doc["country"],
            )
            report = validate_submission(
                sub, mrs[sub.mr_id], schema, history.get(sub.worker_id, []), validation
            )
            if report.accepted:
                accepted += 1
                history.setdefault(sub.worker_id, []).append(sub.text)
                click.echo(f"line {line_no}: accepted")
            else:
                rejected += 1
                click.echo(f"line {line_no}: rejected ({', '.join(report.failures())})")
            reports.append({"line": line_no, **report.to_dict()})
    if report_file:
        Path(report_file).write_text(
            "\n".join(json.dumps(r, ensure_ascii=False) for r in reports) + "\n", "utf-8"
        )
    click.echo(f"{accepted} accepted, {rejected} rejected")
    if rejected:
        sys.exit(1)


@main.command()
@click.option("--store", "store_path", type=click.Path(), default=None)
@click.option("--mrs", "mrs_path", type=click.Path(exists=True), default=None)
@click.option("--schema", "schema_path", type=click.Path(exists=True), default=None)
@click.option("--scorer", type=click.Choice(["baseline", "remote"]), default="baseline",
              show_default=True)
@click.option("--endpoint", default=None, help="Remote similarity service URL.")
@click.option("--lexicon", "lexicon_path", type=click.Path(exists=True), default=None)
@click.pass_obj
def score(config: AppConfig, store_path: str | None, mrs_path: str | None,
          schema_path: str | None, scorer: str, endpoint: str | None,
          lexicon_path: str | None) -> None:
    """Score accepted utterances for MR/utterance similarity."""
    schema = load_schema(schema_path or config.schema_path)
    mrs = load_mr_set(mrs_path or config.mr_set_path, schema)
    store = CorpusStore(store_path or config.store_path)
    lexicon = SynonymLexicon.load(lexicon_path)
    remote = None
    if scorer == "remote":
        url = endpoint or config.similarity_endpoint
        remote = RemoteSimilarityClient(url, SimilarityCache(config.similarity_cache))
    scored = 0
    already = {s.utterance_id for s in store.corpus.similarities}
    from .schema import canonical_textual_mr

    for sub in list(store.corpus.submissions):
        if sub.utterance_id in already:
            continue
        mr = mrs[sub.mr_id]
        if remote is not None:
            raw = remote.score(canonical_textual_mr(mr, schema), sub.text)
        else:
            raw = score_baseline(mr, sub.text, lexicon, schema)
        s = SimilarityScore.from_raw(raw)
        store.append(
            SimilarityRecord(
                utterance_id=sub.utterance_id,
                scorer=scorer,
                raw=s.raw,
                normalized=s.normalized,
                bucket=s.bucket.value,
            )
        )
        scored += 1
    click.echo(f"scored {scored} utterances with the {scorer} scorer")


@main.command()
@click.option("--store", "store_path", type=click.Path(exists=True), default=None)
@click.option("--mrs", "mrs_path", type=click.Path(exists=True), default=None)
@click.option("--schema", "schema_path", type=click.Path(exists=True), default=None)
@click.option("--include-self", is_flag=True, default=False,
              help="Include the self-evaluation stream in descriptive tables.")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="text",
              show_default=True)
@click.option("--out", "out_path", type=click.Path(), default=None)
@click.pass_obj
def analyze(config: AppConfig, store_path: str | None, mrs_path: str | None,
            schema_path: str | None, include_self: bool, fmt: str,
            out_path: str | None) -> None:
    """Run the full statistical analysis over the stored corpus."""
    schema = load_schema(schema_path or config.schema_path)
    mrs = load_mr_set(mrs_path or config.mr_set_path, schema)
    corpus = load_corpus(store_path or config.store_path)
    report = build_analysis(corpus, mrs, include_self=include_self)
    rendered = report.to_json() if fmt == "json" else report.to_text()
    if out_path:
        Path(out_path).write_text(rendered, "utf-8")
        click.echo(f"wrote report to {out_path}")
    else:
        click.echo(rendered, nl=False)


@main.command()
@click.option("--store", "store_path", type=click.Path(exists=True), default=None)
@click.option("--mrs", "mrs_path", type=click.Path(exists=True), default=None)
@click.option("--schema", "schema_path", type=click.Path(exists=True), default=None)
@click.option("--out", "out_path", required=True, type=click.Path())
@click.pass_obj
def export(config: AppConfig, store_path: str | None, mrs_path: str | None,
           schema_path: str | None, out_path: str) -> None:
    """Export the filtered corpus as MR/utterance pairs."""
    schema = load_schema(schema_path or config.schema_path)
    mrs = load_mr_set(mrs_path or config.mr_set_path, schema)
    corpus = load_corpus(store_path or config.store_path)
    count = export_corpus(corpus, mrs, schema, out_path)
    click.echo(f"exported {count} records to {out_path}")


@main.command("import-ratings")
@click.option("--store", "store_path", type=click.Path(), default=None)
@click.option("--ratings", "csv_path", required=True, type=click.Path(exists=True))
@click.pass_obj
def import_ratings(config: AppConfig, store_path: str | None, csv_path: str) -> None:
    """Import a ratings CSV (declared header row) into the store."""
    store = CorpusStore(store_path or config.store_path)
    added = import_ratings_csv(store, csv_path)
    click.echo(f"imported {added} ratings")


@main.command()
@click.option("--host", default=None)
@click.option("--port", default=None, type=int)
@click.pass_obj
def serve(config: AppConfig, host: str | None, port: int | None) -> None:
    """Run the collection HTTP service."""
    import uvicorn

    from .service import create_app

    app = create_app(config)
    uvicorn.run(app, host=host or config.host, port=port or config.port, log_level="warning")


if __name__ == "__main__":
    main()
