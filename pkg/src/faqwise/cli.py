"""Command-line interface: parse, build, ask, bench, serve.

Exit codes: 0 success, 1 runtime failure, 2 usage or input error.
"""

from __future__ import annotations

import json
import os
import sys
from dataclasses import asdict
from pathlib import Path

import click

from . import evaluation, matcher, model_store, service
from .embedding import BASELINE_EMBEDDER_ID, DEFAULT_DIMENSION, EmbedderSpec, embed_batch
from .engine_client import EngineConfig
from .errors import FaqwiseError, InvalidCase
from .faq_parser import ParseReport, QaPair, parse_faq

ENV_MODEL = "FAQWISE_MODEL"
ENV_BIND = "FAQWISE_BIND"
ENV_THRESHOLD = "FAQWISE_THRESHOLD"

EXIT_RUNTIME = 1
EXIT_USAGE = 2


@click.group()
def main() -> None:
    """Extract FAQ pages into a question-answering knowledge base."""


def _read_source(url, file, proxy):
    if (url is None) == (file is None):
        raise click.UsageError("provide exactly one of --url or --file")
    if url is not None:
        return service.fetch_url(url, proxy), url
    return Path(file).read_bytes(), None


def _report_dict(report: ParseReport) -> dict:
    doc = asdict(report)
    doc["winning_signature"] = {
        "tag": report.winning_signature.tag,
        "ancestor_tags": list(report.winning_signature.ancestor_tags),
        "depth": report.winning_signature.depth,
    }
    return doc


def _fail(message: str, code: int) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


@main.command()
@click.option("--url", help="URL of the FAQ page to fetch")
@click.option("--file", type=click.Path(exists=True), help="local HTML file")
@click.option("--proxy", help="proxy prefix prepended to the URL verbatim")
@click.option("--out", type=click.Path(), help="write the report as JSON")
@click.option("--json", "as_json", is_flag=True, help="print JSON to stdout")
def parse(url, file, proxy, out, as_json):
    """Extract Q&A pairs from a FAQ page and print a parse report."""
    html, source = _read_source(url, file, proxy)
    try:
        report = parse_faq(html, source_url=source)
    except FaqwiseError as exc:
        _fail(f"{type(exc).__name__}: {exc}", EXIT_USAGE)
    doc = _report_dict(report)
    if out:
        Path(out).write_text(json.dumps(doc, ensure_ascii=False, indent=2) + "\n",
                             encoding="utf-8")
    if as_json:
        click.echo(json.dumps(doc, ensure_ascii=False, indent=2))
    else:
        sig = report.winning_signature
        click.echo(f"pairs:          {len(report.pairs)}")
        click.echo(f"candidates:     {report.candidate_count}")
        click.echo(f"signature:      <{sig.tag}> under {list(sig.ancestor_tags)} "
                   f"at depth {sig.depth} ({report.winning_votes} votes)")
        click.echo(f"scope distance: {report.answer_scope_distance}")
        for pair in report.pairs:
            click.echo(f"[{pair.index}] Q: {pair.question}")
            click.echo(f"    A: {pair.answer}")


def _load_pairs_file(path) -> list[QaPair]:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(doc, list):
        raise click.UsageError("--pairs file must be a JSON array of "
                               '{"question", "answer"} objects')
    return [
        QaPair(item["question"], item.get("answer", ""), i)
        for i, item in enumerate(doc)
    ]


@main.command()
@click.option("--url", help="URL of the FAQ page to fetch")
@click.option("--file", type=click.Path(exists=True), help="local HTML file")
@click.option("--pairs", type=click.Path(exists=True), help="JSON list of pairs")
@click.option("--proxy", help="proxy prefix prepended to the URL verbatim")
@click.option("--out", "out", required=True, type=click.Path(), help="model file to write")
@click.option("--embedder", "embedder_id", default=BASELINE_EMBEDDER_ID, show_default=True)
@click.option("--dim", default=DEFAULT_DIMENSION, show_default=True, type=int)
@click.option("--threshold", default=matcher.DEFAULT_THRESHOLD, show_default=True, type=float)
def build(url, file, pairs, proxy, out, embedder_id, dim, threshold):
    """Parse (or read) pairs, embed the questions, and save a model file."""
    source = ""
    try:
        if pairs is not None:
            if url is not None or file is not None:
                raise click.UsageError("--pairs excludes --url/--file")
            qa = _load_pairs_file(pairs)
            source = str(pairs)
        else:
            html, source = _read_source(url, file, proxy)
            qa = parse_faq(html, source_url=source).pairs
            source = source or str(file)
        spec = EmbedderSpec(id=embedder_id, dimension=dim)
        matrix = embed_batch([p.question for p in qa], spec)
        kb = matcher.KnowledgeBase(
            pairs=tuple(qa), matrix=matrix, embedder=spec,
            default_threshold=threshold, source=source,
        )
        model_store.save_model(kb, out)
    except FaqwiseError as exc:
        _fail(f"{type(exc).__name__}: {exc}", EXIT_USAGE)
    click.echo(f"wrote model with {len(qa)} pairs to {out}")


def _model_option():
    return click.option(
        "--model", "model_path", type=click.Path(exists=True),
        envvar=ENV_MODEL, required=True,
        help=f"model file (defaults to ${ENV_MODEL})",
    )


def _print_result(kb, result, as_json):
    if as_json:
        doc = {
            "answer": result.answer,
            "matched_question": (
                kb.pairs[result.matched_index].question
                if result.matched_index is not None else None
            ),
            "confidence": result.confidence,
            "source": result.source,
            "rejected": result.rejected,
        }
        click.echo(json.dumps(doc, ensure_ascii=False))
        return
    if result.rejected:
        click.echo(service.DEFAULT_FALLBACK_MESSAGE)
        click.echo(f"(confidence {result.confidence:.4f})")
    else:
        click.echo(result.answer)
        click.echo(f"(matched: {kb.pairs[result.matched_index].question!r}, "
                   f"confidence {result.confidence:.4f}, source {result.source or 'n/a'})")


@main.command()
@_model_option()
@click.option("--threshold", type=float, help="override the model's threshold")
@click.option("--json", "as_json", is_flag=True, help="print JSON per answer")
@click.argument("question", required=False)
def ask(model_path, threshold, as_json, question):
    """Answer one question, or start an interactive loop when none is given."""
    try:
        kb = model_store.load_model(model_path)
    except FaqwiseError as exc:
        _fail(f"{type(exc).__name__}: {exc}", EXIT_USAGE)
    if question is not None:
        _print_result(kb, matcher.answer(kb, question, threshold), as_json)
        return
    while True:
        try:
            line = input("? ")
        except EOFError:
            break
        if not line.strip():
            continue
        _print_result(kb, matcher.answer(kb, line, threshold), as_json)


def _parse_thresholds(spec_text: str) -> list[float]:
    """Either a comma list '0.5,0.75' or a range 'start:stop:count'."""
    if ":" in spec_text:
        parts = spec_text.split(":")
        if len(parts) != 3:
            raise click.UsageError("threshold range must be start:stop:count")
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 2:
            return [start]
        step = (stop - start) / (count - 1)
        return [start + i * step for i in range(count)]
    return [float(x) for x in spec_text.split(",") if x.strip()]


@main.command()
@_model_option()
@click.option("--testset", required=True, type=click.Path(exists=True),
              help="CSV with columns test_question,expected_question")
@click.option("--thresholds", "thresholds_spec", default="0:1:101",
              show_default=True, help="comma list or start:stop:count range")
@click.option("--out", type=click.Path(), help="write the sweep as CSV")
def bench(model_path, testset, thresholds_spec, out):
    """Sweep thresholds over a paraphrase test set and report the best f1."""
    try:
        kb = model_store.load_model(model_path)
        cases = evaluation.load_testset(testset, kb)
        thresholds = sorted(_parse_thresholds(thresholds_spec))
        results = evaluation.threshold_sweep(kb, cases, thresholds)
    except (FaqwiseError, InvalidCase) as exc:
        _fail(f"{type(exc).__name__}: {exc}", EXIT_USAGE)
    if out:
        evaluation.export_curve(results, out)
    best = max(results, key=lambda r: r.f1)
    click.echo(f"{len(cases)} cases over {len(results)} thresholds")
    click.echo(
        f"best f1 {best.f1:.6f} at threshold {best.threshold:.4f} "
        f"(precision {best.precision:.6f}, recall {best.recall:.6f})"
    )


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True),
              help="JSON config file; flags override its values")
@click.option("--bind", envvar=ENV_BIND, help="host:port to bind")
@click.option("--model", "model_path", type=click.Path(exists=True), envvar=ENV_MODEL)
@click.option("--faq-url")
@click.option("--pairs", type=click.Path(exists=True), help="JSON list of pairs")
@click.option("--engine-url", help="knowledge-engine webhook URL")
@click.option("--threshold", type=float, envvar=ENV_THRESHOLD)
@click.option("--proxy", help="proxy prefix for fetching the FAQ page")
@click.option("--origin", "origins", multiple=True, help="allowed CORS origin")
def serve(config_path, bind, model_path, faq_url, pairs, engine_url,
          threshold, proxy, origins):
    """Run the HTTP service until interrupted."""
    doc = {}
    if config_path:
        doc = json.loads(Path(config_path).read_text(encoding="utf-8"))
    cfg = service.ServiceConfig(
        bind_address=bind or doc.get("bind_address", "127.0.0.1:8000"),
        model_path=model_path or doc.get("model_path"),
        faq_url=faq_url or doc.get("faq_url"),
        pairs=_load_pairs_file(pairs) if pairs else None,
        engine=(EngineConfig(webhook_url=engine_url or doc["engine_url"])
                if (engine_url or doc.get("engine_url")) else None),
        threshold=threshold if threshold is not None
        else doc.get("threshold", matcher.DEFAULT_THRESHOLD),
        allowed_origins=list(origins) or doc.get("allowed_origins", ["*"]),
        proxy_prefix=proxy or doc.get("proxy_prefix"),
        fallback_message=doc.get("fallback_message",
                                 service.DEFAULT_FALLBACK_MESSAGE),
    )
    try:
        cfg.mode
    except ValueError as exc:
        _fail(str(exc), EXIT_USAGE)
    try:
        service.run(cfg)
    except (OSError, SystemExit) as exc:
        if isinstance(exc, SystemExit) and not exc.code:
            return
        _fail(f"server failed: {exc}", EXIT_RUNTIME)


if __name__ == "__main__":
    main()
