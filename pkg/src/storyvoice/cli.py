"""Command-line entry point.

Subcommands::

    render    story -> styled text (plain, annotated or DSyntS XML)
    translate story -> DSyntS XML
    swap      story, old, new -> text with old's lines given to new
    validate  story -> invariant violations
    eval      candidate, reference -> similarity report
    polarity  word list -> polarity report
    freq      word list -> frequency CSV

Settings resolve as flag, then ``--config`` INI file, then defaults. A story
argument is a file path or the name of a story in the data directory.
Artifacts go to stdout; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import configparser
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import DATA_DIR

ENV_DATA = "STORYVOICE_DATA"
OUTPUT_MODES = ("plain", "annotated", "xml")
GENITIVES = {"of": "of_genitive", "s": "s_genitive"}


class CliError(Exception):
    pass


@dataclass
class RunConfig:
    story: str
    voices: dict = field(default_factory=dict)
    narrator: str = "neutral"
    seed: int = 0
    genitive: str = "of"
    output: str = "plain"
    models_dir: Path | None = None
    lexicon_dir: Path | None = None

    def __post_init__(self):
        if self.genitive not in GENITIVES:
            raise CliError(f"genitive must be one of {sorted(GENITIVES)}, got {self.genitive!r}")
        if self.output not in OUTPUT_MODES:
            raise CliError(f"output must be one of {list(OUTPUT_MODES)}, got {self.output!r}")
        if self.seed < 0:
            raise CliError(f"seed must be non-negative, got {self.seed}")


def data_dir() -> Path:
    env = os.environ.get(ENV_DATA)
    return Path(env) if env else DATA_DIR


def resolve_story(name: str) -> Path:
    path = Path(name)
    if path.is_file():
        return path
    candidate = data_dir() / "stories" / f"{name}.story"
    if candidate.is_file():
        return candidate
    raise CliError(f"no story file or bundled story named {name!r}")


def _parse_voice(text: str) -> tuple[str, str]:
    entity, sep, model = text.partition("=")
    if not sep or not entity or not model:
        raise argparse.ArgumentTypeError(f"expected ENTITY=MODEL, got {text!r}")
    return entity.strip(), model.strip()


def _read_config(path) -> dict:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
    except OSError as exc:
        raise CliError(f"cannot read config {path}: {exc.strerror}") from None
    except configparser.Error as exc:
        raise CliError(f"bad config {path}: {exc}") from None
    out = dict(cp.items("run")) if cp.has_section("run") else {}
    if cp.has_section("voices"):
        out["voices"] = dict(cp.items("voices"))
    return out


def build_config(args) -> RunConfig:
    """Merge flags over the config file over defaults."""
    file_cfg = _read_config(args.config) if getattr(args, "config", None) else {}
    voices = dict(file_cfg.get("voices", {}))
    voices.update(dict(getattr(args, "voice", None) or []))

    def pick(name, default):
        value = getattr(args, name, None)
        if value is not None:
            return value
        return file_cfg.get(name, default)

    models_dir = pick("models_dir", None)
    lexicon_dir = pick("lexicon_dir", None)
    try:
        seed = int(pick("seed", 0))
    except ValueError:
        raise CliError("seed must be an integer") from None
    return RunConfig(
        story=args.story,
        voices=voices,
        narrator=pick("narrator", "neutral"),
        seed=seed,
        genitive=pick("genitive", "of"),
        output=pick("output", "plain"),
        models_dir=Path(models_dir) if models_dir else data_dir() / "models",
        lexicon_dir=Path(lexicon_dir) if lexicon_dir else data_dir() / "lexicon",
    )


# -- pipeline ------------------------------------------------------------------


def _lexicon(cfg: RunConfig):
    from .lexicon import Lexicon, default_lexicon

    if cfg.lexicon_dir is None or cfg.lexicon_dir.resolve() == (DATA_DIR / "lexicon").resolve():
        return default_lexicon()
    return Lexicon.load(cfg.lexicon_dir)


def _plans(cfg: RunConfig, lexicon):
    from .story import load_story
    from .translator import translate_story

    graph = load_story(resolve_story(cfg.story), lexicon)
    return graph, translate_story(graph, lexicon)


def _voice_map(cfg: RunConfig, plans):
    from .persona import UnknownModelError, get_model

    for name in cfg.voices.values():
        get_model(name, cfg.models_dir)
    voice_map = {}
    for speaker in dict.fromkeys(p.speaker for p in plans if p.direct):
        name = cfg.voices.get(speaker, speaker)
        try:
            voice_map[speaker] = get_model(name, cfg.models_dir)
        except UnknownModelError:
            if speaker in cfg.voices:
                raise
            raise CliError(f"speaker {speaker!r} has no --voice and no model named after it") from None
    return voice_map


def _render(cfg: RunConfig, plans, lexicon) -> str:
    from .dsynts import emit_dsynts
    from .persona import get_model
    from .realizer import RealizationOptions, render_story_text, style_plans

    narrator = get_model(cfg.narrator, cfg.models_dir)
    voice_map = _voice_map(cfg, plans)
    if cfg.output == "xml":
        return emit_dsynts(style_plans(plans, voice_map, narrator, cfg.seed, lexicon))
    return render_story_text(
        plans,
        voice_map,
        narrator,
        cfg.seed,
        RealizationOptions(GENITIVES[cfg.genitive]),
        lexicon,
        annotated=cfg.output == "annotated",
    )


def cmd_render(args) -> str:
    cfg = build_config(args)
    lexicon = _lexicon(cfg)
    _, plans = _plans(cfg, lexicon)
    return _render(cfg, plans, lexicon)


def cmd_translate(args) -> str:
    from .dsynts import emit_dsynts

    cfg = build_config(args)
    lexicon = _lexicon(cfg)
    _, plans = _plans(cfg, lexicon)
    return emit_dsynts(plans)


def cmd_swap(args) -> str:
    from .translator import substitute_speaker

    cfg = build_config(args)
    lexicon = _lexicon(cfg)
    graph, plans = _plans(cfg, lexicon)
    plans = substitute_speaker(plans, args.old, args.new, graph)
    return _render(cfg, plans, lexicon)


def cmd_validate(args) -> str:
    from .story import parse_story, validate

    cfg = build_config(args)
    lexicon = _lexicon(cfg)
    path = resolve_story(cfg.story)
    graph = parse_story(path.read_text(encoding="utf-8"), lexicon, check=False)
    violations = validate(graph, lexicon)
    if violations:
        raise CliError(f"{len(violations)} violation(s):\n" + "\n".join(str(v) for v in violations))
    return f"{path}: ok ({len(graph.timeline)} timespans)\n"


def _read(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None


def _plot_dir(args) -> Path | None:
    if not args.plot_dir:
        return None
    path = Path(args.plot_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def cmd_eval(args) -> str:
    from .evalharness import similarity_report

    report = similarity_report(_read(args.candidate), _read(args.reference))
    plots = _plot_dir(args)
    if plots is not None:
        from .plotting import plot_similarity

        plot_similarity(report, plots / "similarity.png")
    return report.to_kv() if args.format == "kv" else report.to_text()


def cmd_polarity(args) -> str:
    from .evalharness import load_polarity_lexicon, polarity, read_words

    lexicon = load_polarity_lexicon(args.lexicon or data_dir() / "eval" / "polarity.tsv")
    report = polarity(read_words(_read(args.words)), lexicon)
    plots = _plot_dir(args)
    if plots is not None:
        from .plotting import plot_polarity

        plot_polarity(report, plots / "polarity.png")
    return report.to_text()


def cmd_freq(args) -> str:
    from .evalharness import frequencies_csv, read_words, word_frequencies

    table = word_frequencies(read_words(_read(args.words)))
    plots = _plot_dir(args)
    if plots is not None:
        from .plotting import plot_frequencies

        plot_frequencies(table, plots / "frequencies.png")
    return frequencies_csv(table)


# -- argument parsing --------------------------------------------------------------


def _story_options(p: argparse.ArgumentParser, styling: bool = True) -> None:
    p.add_argument("story", help="story file path or bundled story name")
    p.add_argument("--config", help="INI file with [run] and [voices] sections")
    p.add_argument("--lexicon-dir", dest="lexicon_dir", help="directory with frames.tsv and morph.tsv")
    if not styling:
        return
    p.add_argument("--voice", action="append", type=_parse_voice, metavar="ENTITY=MODEL",
                   help="personality model for a speaker (repeatable)")
    p.add_argument("--narrator", help="model for narration and attribution (default neutral)")
    p.add_argument("--seed", type=int, help="random seed (default 0)")
    p.add_argument("--genitive", choices=sorted(GENITIVES), help="possessive style (default of)")
    p.add_argument("--output", choices=OUTPUT_MODES, help="output mode (default plain)")
    p.add_argument("--models-dir", dest="models_dir", help="directory of *.model files")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="storyvoice", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("render", help="render a story as styled text")
    _story_options(p)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("translate", help="emit the story's DSyntS XML")
    _story_options(p, styling=False)
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("swap", help="give one character's lines to another and render")
    _story_options(p)
    p.add_argument("old", help="entity whose direct speech is reassigned")
    p.add_argument("new", help="entity who says it instead")
    p.set_defaults(func=cmd_swap)

    p = sub.add_parser("validate", help="check a story's invariants")
    _story_options(p, styling=False)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("eval", help="compare a rendering with a reference text")
    p.add_argument("candidate")
    p.add_argument("reference")
    p.add_argument("--format", choices=("text", "kv"), default="text")
    p.add_argument("--plot-dir", dest="plot_dir", help="also write similarity.png here")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("polarity", help="classify descriptive words by polarity")
    p.add_argument("words", help="file of whitespace- or comma-separated words")
    p.add_argument("--lexicon", help="polarity TSV (default: bundled)")
    p.add_argument("--plot-dir", dest="plot_dir", help="also write polarity.png here")
    p.set_defaults(func=cmd_polarity)

    p = sub.add_parser("freq", help="word frequency table as CSV")
    p.add_argument("words", help="file of whitespace- or comma-separated words")
    p.add_argument("--plot-dir", dest="plot_dir", help="also write frequencies.png here")
    p.set_defaults(func=cmd_freq)
    return parser


def _qualified(exc: BaseException) -> str:
    module = type(exc).__module__
    if module in ("builtins", __name__):
        module = "storyvoice.cli"
    message = str(exc)
    if isinstance(exc, KeyError) and exc.args:
        message = str(exc.args[0])
    return f"{module}: {type(exc).__name__}: {message}"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = args.func(args)
    except (CliError, ValueError, KeyError, OSError) as exc:
        print(f"error: {_qualified(exc)}", file=sys.stderr)
        return 1
    except Exception as exc:
        if type(exc).__module__.startswith("storyvoice"):
            print(f"error: {_qualified(exc)}", file=sys.stderr)
            return 1
        raise
    sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
