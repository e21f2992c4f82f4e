"""Command-line entry points.

Exit codes: 0 success, 2 input errors, 3 configuration errors (including
knowledge-base fingerprint mismatches), 4 runtime/analysis failures.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import config as cfg
from . import kernel
from .dataset import EMOTIONS, ImageFetcher, load_annotations
from .errors import ConfigError, EmopaletteError, InputError
from .kb import (
    DEFAULT_K_EMOTION,
    DEFAULT_K_IMAGE,
    DEFAULT_MIN_SHARE,
    build_knowledge_base,
    load_kb,
    save_kb,
)
from .palette import dominant_palette, format_palette, preprocess
from .psycho import AnalysisOptions, analyze_trials, load_trials
from .runtime import ActiveConfig
from .scoring import score_emotions


def config_options(fn):
    fn = click.option("--partitions", type=click.Path(exists=True, dir_okay=False),
                      default=None, help="Partition configuration file.")(fn)
    fn = click.option("--mapping", type=click.Path(exists=True, dir_okay=False),
                      default=None, help="Basic-color mapping table file.")(fn)
    return fn


def parse_thresholds(pairs: tuple[str, ...]) -> dict[str, float]:
    out = {}
    for pair in pairs:
        try:
            emotion, value = pair.split("=", 1)
            emotion = emotion.strip().lower()
            if emotion not in EMOTIONS:
                raise ValueError(f"unknown emotion {emotion!r}")
            out[emotion] = float(value)
        except ValueError as exc:
            raise InputError(f"bad --threshold {pair!r}: {exc}") from exc
    return out


@click.group()
def cli():
    """Fuzzy color-emotion toolkit."""


@cli.command("init-config")
@click.option("--out-dir", type=click.Path(file_okay=False), default=".",
              show_default=True)
def init_config(out_dir):
    """Write the default partition and mapping files for editing."""
    partitions, mapping = cfg.write_defaults(out_dir)
    click.echo(f"wrote {partitions}")
    click.echo(f"wrote {mapping}")


@cli.command("build-kb")
@click.option("--annotations", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--kb", "kb_path", required=True, type=click.Path(dir_okay=False))
@click.option("--threshold", "thresholds", multiple=True,
              help="Per-emotion agreement threshold, e.g. shyness=0.3.")
@click.option("--k-image", default=DEFAULT_K_IMAGE, show_default=True)
@click.option("--k-emotion", default=DEFAULT_K_EMOTION, show_default=True)
@click.option("--min-share", default=DEFAULT_MIN_SHARE, show_default=True)
@click.option("--workers", default=4, show_default=True)
@click.option("--cache-dir", type=click.Path(file_okay=False), default=None,
              help="Image download cache (or set EMOPALETTE_CACHE_DIR).")
@click.option("--report", "report_path", type=click.Path(dir_okay=False),
              default=None, help="Write the build report here as well.")
@config_options
def build_kb(annotations, kb_path, thresholds, k_image, k_emotion, min_share,
             workers, cache_dir, report_path, partitions, mapping):
    """Learn per-emotion fuzzy palettes from an annotated image corpus."""
    active = ActiveConfig.load(partitions, mapping)
    click.echo(f"config fingerprint: {active.fingerprint}", err=True)
    annotation_set = load_annotations(annotations, parse_thresholds(thresholds))
    if annotation_set.skipped_rows:
        click.echo(f"skipped {annotation_set.skipped_rows} unreadable rows", err=True)

    fetcher = ImageFetcher(cache_dir=cache_dir)
    kb, report = build_knowledge_base(
        annotation_set.selected,
        lambda image_id: annotation_set.record(image_id).url,
        fetcher, active.space, active.mapping, active.fingerprint,
        k_img=k_image, k_emotion=k_emotion, min_share=min_share,
        workers=workers,
    )
    save_kb(kb, kb_path)

    lines = ["emotion\tselected\tused\tskipped\tpalette_size"]
    for emotion in EMOTIONS:
        r = report[emotion]
        lines.append(f"{emotion}\t{r['selected']}\t{r['used']}"
                     f"\t{r['skipped']}\t{r['palette_size']}")
    text = "\n".join(lines)
    click.echo(text)
    if report_path:
        Path(report_path).write_text(text + "\n")
    click.echo(f"wrote {kb_path}")


@cli.command("tag")
@click.argument("images", nargs=-1, required=True,
                type=click.Path(exists=True, dir_okay=False))
@click.option("--kb", "kb_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--k-image", default=DEFAULT_K_IMAGE, show_default=True)
@click.option("--show-palette", is_flag=True, help="Also print the image palette.")
@click.option("--weighted", is_flag=True,
              help="Proportion-weighted similarity instead of plain Jaccard.")
@config_options
def tag(images, kb_path, k_image, show_palette, weighted, partitions, mapping):
    """Rank emotions for images by Jaccard similarity against the KB."""
    active = ActiveConfig.load(partitions, mapping)
    click.echo(f"config fingerprint: {active.fingerprint}", err=True)
    kb = load_kb(kb_path, expected_fingerprint=active.fingerprint)
    for path in images:
        data = Path(path).read_bytes()
        palette = dominant_palette(preprocess(data), active.space, k=k_image)
        if show_palette:
            click.echo(format_palette(palette))
        for score in score_emotions(palette, kb, weighted=weighted):
            click.echo(f"{path}\t{score.emotion}\t{score.jaccard:.6f}")


@cli.command("report")
@click.option("--kb", "kb_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
@config_options
def report(kb_path, out_dir, partitions, mapping):
    """Emit distribution tables, palette strips and the heatmap for a KB."""
    from . import render

    active = ActiveConfig.load(partitions, mapping)
    click.echo(f"config fingerprint: {active.fingerprint}", err=True)
    kb = load_kb(kb_path, expected_fingerprint=active.fingerprint)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    matrix = out / "basic_colors.tsv"
    matrix.write_text(render.format_tsv(render.basic_matrix_rows(kb)))
    distributions = out / "hsi_distributions.tsv"
    distributions.write_text(
        render.format_tsv(render.hsi_distribution_rows(kb, active.space))
    )
    heatmap = render.heatmap_png(kb, out / "heatmap.png")
    strips = out / "strips"
    strips.mkdir(exist_ok=True)
    for emotion, palette in kb.palettes.items():
        render.palette_strip(
            [(rec.color, float(rec.frequency)) for rec in palette.entries],
            active.space, strips / f"{emotion}.png",
        )
    for artifact in (matrix, distributions, heatmap):
        click.echo(f"wrote {artifact}")
    click.echo(f"wrote {strips}/<emotion>.png x{len(kb.palettes)}")


@cli.command("analyze-2afc")
@click.argument("trials", type=click.Path(exists=True, dir_okay=False))
@click.option("--out-dir", type=click.Path(file_okay=False), default=None)
@click.option("--monotonize", type=click.Choice(["none", "pav"]), default="none",
              show_default=True)
@click.option("--probabilities", type=click.Choice(["rate", "transformed"]),
              default="rate", show_default=True)
@click.option("--x-low", default=0.0, show_default=True,
              help="Augmentation point with p=0.")
@click.option("--x-high", default=1.0, show_default=True,
              help="Augmentation point with p=1.")
def analyze_2afc(trials, out_dir, monotonize, probabilities, x_low, x_high):
    """Analyze a 2AFC trial file: hit rates, Spearman-Karber mean/SE, fit."""
    from . import render

    options = AnalysisOptions(monotonize=monotonize, probabilities=probabilities,
                              x_low=x_low, x_high=x_high)
    participants = load_trials(trials)
    analysis = analyze_trials(participants, options)
    click.echo(analysis.describe())
    if out_dir:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.txt").write_text(analysis.describe() + "\n")
        (out / "points.tsv").write_text(render.psychometric_plot_data(analysis))
        render.psychometric_chart(analysis, out / "psychometric.png")
        click.echo(f"wrote {out}/report.txt, points.tsv, psychometric.png")


@cli.command("serve")
@click.option("--kb", "kb_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--index-dir", required=True, type=click.Path(file_okay=False))
@click.option("--bind", default="127.0.0.1:8750", show_default=True,
              help="host:port to listen on.")
@click.option("--rescore", type=click.Choice(["eager", "lazy"]), default="eager",
              show_default=True)
@config_options
def serve(kb_path, index_dir, bind, rescore, partitions, mapping):
    """Serve the retrieval and tagging HTTP API."""
    import uvicorn

    from .service import create_app

    active = ActiveConfig.load(partitions, mapping)
    click.echo(f"config fingerprint: {active.fingerprint}", err=True)
    app = create_app(kb_path=kb_path, index_dir=index_dir, active=active,
                     rescore=rescore)
    try:
        host, port = bind.rsplit(":", 1)
        port = int(port)
    except ValueError as exc:
        raise InputError(f"bad --bind {bind!r}: expected host:port") from exc
    uvicorn.run(app, host=host, port=port, log_level="info")


@cli.command("backend")
def backend():
    """Print which histogram kernel backend is active."""
    click.echo(kernel.backend_name())


def main():
    try:
        cli(standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        sys.exit(exc.exit_code)
    except click.exceptions.Abort:
        sys.exit(130)
    except InputError as exc:
        click.echo(f"input error: {exc}", err=True)
        sys.exit(2)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(3)
    except EmopaletteError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(4)


if __name__ == "__main__":
    main()
