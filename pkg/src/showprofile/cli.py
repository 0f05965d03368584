"""``showprofile`` command-line entry point.

Exit status: 0 on success, 1 on a data or pipeline error, 2 on a usage error.
Log verbosity comes from the ``SHOWPROFILE_LOG_LEVEL`` environment variable.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Mapping, Optional, Sequence

from . import report as rp
from .ingest import IngestError, SyntheticSpec, generate_synthetic, parse_dataset, write_dataset, write_synthetic
from .lexicon import SentimentLexicons
from .model import Dataset, validate_dataset
from .retrieval import ShowCorpus, read_corpora, retrieve_all, write_corpora

logger = logging.getLogger("showprofile")

EXIT_OK, EXIT_DATA, EXIT_USAGE = 0, 1, 2
LOG_ENV = "SHOWPROFILE_LOG_LEVEL"


class UsageError(Exception):
    pass


def _write_json(obj, path: Optional[str]) -> None:
    text = rp.dumps_report(obj)
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text, encoding="utf-8", newline="\n")


def _load_corpora(path: str, dataset: Dataset) -> dict[str, ShowCorpus]:
    corpora = read_corpora(path)
    for sid, c in corpora.items():
        if sid not in dataset.show_by_id:
            raise ValueError(f"corpus file names unknown show {sid!r}")
        missing = [m for m in c.members if m not in dataset.microblog_by_id]
        if missing:
            raise ValueError(f"corpus {sid} references {len(missing)} unknown microblogs, e.g. {sorted(missing)[0]}")
    return corpora


def _parse_transition(text: str) -> tuple[str, str, str, int]:
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("expected USER,FROM,TO,GAP")
    try:
        return parts[0], parts[1], parts[2], int(parts[3])
    except ValueError:
        raise argparse.ArgumentTypeError("GAP must be an integer number of seconds") from None


# ---------------------------------------------------------------- commands


def cmd_generate(args) -> int:
    spec = SyntheticSpec(
        seed=args.seed,
        n_users=args.users,
        n_shows=args.shows,
        n_microblogs=args.microblogs,
        planted_clusters=args.clusters,
        planted_transitions=tuple(args.transition or ()),
    )
    try:
        spec.validate()
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    dataset, truth = generate_synthetic(spec)
    write_synthetic(dataset, truth, args.out)
    logger.info("wrote %d microblogs to %s", len(dataset.microblogs), args.out)
    return EXIT_OK


def cmd_ingest(args) -> int:
    skipped: dict[str, int] = {}
    dataset = parse_dataset(args.dataset, lenient=args.lenient, skipped=skipped)
    violations = validate_dataset(dataset)
    summary = {
        "microblogs": len(dataset.microblogs),
        "users": len(dataset.users),
        "follows": len(dataset.follows),
        "shows": len(dataset.shows),
        "skipped_lines": skipped,
        "violations": [asdict(v) for v in violations],
    }
    if args.out:
        write_dataset(dataset, args.out)
    _write_json(summary, args.summary)
    return EXIT_DATA if violations else EXIT_OK


def cmd_retrieve(args) -> int:
    if not args.all and not args.show:
        raise UsageError("retrieve needs --show ID or --all")
    dataset = parse_dataset(args.dataset)
    if not args.all:
        unknown = [s for s in args.show if s not in dataset.show_by_id]
        if unknown:
            raise ValueError(f"unknown show ids: {unknown}")
    corpora = retrieve_all(dataset, None if args.all else args.show, workers=args.workers)
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    write_corpora(corpora, args.out)
    return EXIT_OK


def cmd_profile(args) -> int:
    dataset = parse_dataset(args.dataset)
    corpora = _load_corpora(args.corpora, dataset)
    if args.aspect == "user":
        section = rp.user_section(dataset, corpora, args.k, args.seed)
    elif args.aspect == "content":
        lex = SentimentLexicons.load(args.lexicon) if args.lexicon else SentimentLexicons.default()
        section = rp.content_section(dataset, corpora, lex, args.threshold, args.seed)
    elif args.aspect == "social":
        section = rp.social_section(dataset, corpora)
    else:
        section = rp.propagation_section(
            dataset, corpora, args.window, args.strict_attribution,
            args.windows_from, args.windows_count, args.focus,
        )
    _write_json(section, args.out)
    return EXIT_OK


CONFIG_KEYS = ("dataset", "out", "seed", "k", "threshold", "window", "lexicon", "aspects", "workers",
               "strict_attribution", "windows_from", "windows_count", "focus", "lenient")


def cmd_report(args) -> int:
    overrides = {key: getattr(args, key) for key in CONFIG_KEYS}
    if overrides["aspects"] is not None:
        overrides["aspects"] = tuple(a.strip() for a in overrides["aspects"].split(",") if a.strip())
    try:
        if args.config:
            config = rp.load_config(args.config, overrides)
        else:
            config = rp.PipelineConfig(**{k: v for k, v in overrides.items() if v is not None})
        config.validate()
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    path = rp.run_pipeline(config)
    logger.info("report written to %s", path)
    return EXIT_OK


def cmd_export(args) -> int:
    with open(args.report, encoding="utf-8") as fh:
        report = json.load(fh)
    if args.selector == "all":
        rp.export_all(report, args.out)
    else:
        rp.export_plot_data(report, args.selector, args.out)
    return EXIT_OK


# ------------------------------------------------------------------ parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="showprofile", description="Profile TV shows from microblog traces.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write a seeded synthetic dataset with ground truth")
    g.add_argument("--out", required=True)
    g.add_argument("--seed", type=int, default=7)
    g.add_argument("--users", type=int, default=200)
    g.add_argument("--shows", type=int, default=6)
    g.add_argument("--microblogs", type=int, default=2000)
    g.add_argument("--clusters", type=int, default=2)
    g.add_argument("--transition", type=_parse_transition, action="append",
                   help="planted transition USER,FROM,TO,GAP (repeatable)")
    g.set_defaults(func=cmd_generate)

    i = sub.add_parser("ingest", help="parse and validate a dataset directory")
    i.add_argument("--dataset", required=True)
    i.add_argument("--lenient", action="store_true", help="skip malformed lines instead of failing")
    i.add_argument("--out", help="write the normalized dataset here")
    i.add_argument("--summary", help="summary JSON path (default stdout)")
    i.set_defaults(func=cmd_ingest)

    r = sub.add_parser("retrieve", help="build show corpora")
    r.add_argument("--dataset", required=True)
    r.add_argument("--show", action="append", help="show id (repeatable)")
    r.add_argument("--all", action="store_true")
    r.add_argument("--workers", type=int, default=1)
    r.add_argument("--out", required=True)
    r.set_defaults(func=cmd_retrieve)

    pr = sub.add_parser("profile", help="run one aspect profiler")
    aspects = pr.add_subparsers(dest="aspect", required=True, parser_class=_Parser)
    for name in rp.ASPECTS:
        a = aspects.add_parser(name)
        a.add_argument("--dataset", required=True)
        a.add_argument("--corpora", "--corpus", dest="corpora", required=True,
                       help="corpus file or directory of corpus files")
        a.add_argument("--out", help="output JSON (default stdout)")
        if name in ("user", "content"):
            a.add_argument("--seed", type=int, default=7)
        if name == "user":
            a.add_argument("--k", type=int, default=3)
        if name == "content":
            a.add_argument("--lexicon")
            a.add_argument("--threshold", type=int, default=1)
        if name == "propagation":
            a.add_argument("--window", type=int, default=rp.prop.DEFAULT_WINDOW)
            a.add_argument("--strict-attribution", action="store_true")
            a.add_argument("--windows-from", type=int)
            a.add_argument("--windows-count", type=int, default=0)
            a.add_argument("--focus")
        a.set_defaults(func=cmd_profile)

    rep = sub.add_parser("report", help="run the full pipeline")
    rep.add_argument("--config", help="key=value config file; flags override it")
    rep.add_argument("--dataset")
    rep.add_argument("--out")
    rep.add_argument("--seed", type=int)
    rep.add_argument("--k", type=int)
    rep.add_argument("--threshold", type=int)
    rep.add_argument("--window", type=int)
    rep.add_argument("--lexicon")
    rep.add_argument("--aspects", help="comma-separated subset of " + ",".join(rp.ASPECTS))
    rep.add_argument("--workers", type=int)
    rep.add_argument("--strict-attribution", action="store_const", const=True)
    rep.add_argument("--windows-from", type=int)
    rep.add_argument("--windows-count", type=int)
    rep.add_argument("--focus")
    rep.add_argument("--lenient", action="store_const", const=True)
    rep.set_defaults(func=cmd_report)

    e = sub.add_parser("export", help="write figure CSVs from a report")
    e.add_argument("--report", required=True)
    e.add_argument("--selector", required=True, choices=[*rp.EXPORTS, "all"])
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_export)
    return p


def _configure_logging(env: Mapping[str, str]) -> None:
    level = env.get(LOG_ENV, "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")


def main(argv: Optional[Sequence[str]] = None) -> int:
    _configure_logging(os.environ)
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"showprofile: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except rp.PipelineError as exc:
        print(f"showprofile: {exc}", file=sys.stderr)
        return EXIT_DATA
    except IngestError as exc:
        print(f"showprofile: [ingest] {exc}", file=sys.stderr)
        return EXIT_DATA
    except (OSError, ValueError, KeyError) as exc:
        print(f"showprofile: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
