"""Pipeline orchestration, report assembly and plot-data export.

``run_pipeline`` runs ingest, retrieval and the selected aspect profilers
and writes ``report.json`` plus one CSV per figure into the output
directory. Outputs are byte-identical for identical inputs and parameters,
whatever the worker count.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import shutil
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from importlib import resources
from pathlib import Path
from typing import Any, Callable, Mapping, Optional, Sequence

import jsonschema

from . import profiler_content as content
from . import profiler_propagation as prop
from . import profiler_social as social
from . import profiler_user as user
from .graphkit import UndefinedResultError
from .ingest import FILES, parse_dataset
from .lexicon import SentimentLexicons
from .model import Dataset
from .retrieval import ShowCorpus, empty_corpus, multi_show_members, retrieve_all

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "1.0"
ASPECTS = ("user", "content", "social", "propagation")


class PipelineError(RuntimeError):
    def __init__(self, stage: str, message: str):
        self.stage = stage
        super().__init__(f"[{stage}] {message}")


def stage_seed(seed: int, stage: str) -> int:
    """Per-stage seed derived from the single top-level seed."""
    digest = hashlib.sha256(f"{seed}:{stage}".encode()).digest()
    return int.from_bytes(digest[:4], "big")


# ------------------------------------------------------------------- config


@dataclass
class PipelineConfig:
    dataset: Optional[str] = None
    out: Optional[str] = None
    seed: int = 7
    k: int = 3
    threshold: int = 1
    window: int = prop.DEFAULT_WINDOW
    lexicon: Optional[str] = None
    aspects: tuple[str, ...] = ASPECTS
    workers: int = 1
    strict_attribution: bool = False
    windows_from: Optional[int] = None
    windows_count: int = 0
    focus: Optional[str] = None
    lenient: bool = False

    def validate(self) -> None:
        if not self.dataset:
            raise ValueError("config needs a dataset directory")
        if not self.out:
            raise ValueError("config needs an output directory")
        unknown = set(self.aspects) - set(ASPECTS)
        if unknown:
            raise ValueError(f"unknown aspects: {sorted(unknown)}")
        if self.k < 1 or self.threshold < 1 or self.window < 1 or self.workers < 1:
            raise ValueError("k, threshold, window and workers must be positive")


def _coerce(name: str, raw: str) -> Any:
    kinds = {f.name: f.type for f in fields(PipelineConfig)}
    if name not in kinds:
        raise ValueError(f"unknown config key {name!r}")
    kind = kinds[name]
    if name == "aspects":
        return tuple(a.strip() for a in raw.split(",") if a.strip())
    if kind == "bool":
        if raw.lower() not in ("true", "false", "1", "0", "yes", "no"):
            raise ValueError(f"{name}: expected a boolean, got {raw!r}")
        return raw.lower() in ("true", "1", "yes")
    if kind in ("int", "Optional[int]"):
        return int(raw)
    return raw


def load_config(path: Path | str, overrides: Optional[Mapping[str, Any]] = None) -> PipelineConfig:
    """Read ``key = value`` lines (``#`` comments allowed); ``overrides`` win."""
    values: dict[str, Any] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, raw = (p.strip() for p in line.split("=", 1))
            values[key] = _coerce(key, raw)
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return PipelineConfig(**values)


# ----------------------------------------------------------------- sections


def _corpus(corpora: Mapping[str, ShowCorpus], sid: str) -> ShowCorpus:
    return corpora.get(sid) or empty_corpus(sid)


def user_section(dataset: Dataset, corpora: Mapping[str, ShowCorpus], k: int, seed: int) -> dict:
    shows = sorted(dataset.shows, key=lambda s: s.show_id)
    authors: set[str] = set()
    per_show = []
    for s in shows:
        a = _corpus(corpora, s.show_id).authors(dataset)
        authors |= a
        h = user.age_histogram(a, dataset)
        per_show.append({"show_id": s.show_id, "authors": len(a), "known_ages": h.known, "mean_age": h.mean})
    ages = user.age_histogram(authors, dataset)
    counts, unknown_region = user.region_counts(authors, dataset)
    try:
        pi = [asdict(r) for r in user.participation_index(counts)]
        pi_note = None
    except ValueError as exc:
        pi, pi_note = None, str(exc)

    vectors = user.label_vectors(corpora, shows, dataset)
    clustering: Optional[dict] = None
    cluster_note = None
    if len(vectors) >= k:
        res = user.kmeans_cluster(vectors, k, seed=seed)
        groups: dict[int, list[str]] = {}
        for uid, c in sorted(res.assignment.items()):
            groups.setdefault(c, []).append(uid)
        clusters = []
        for c in range(k):
            members = groups.get(c, [])
            coh = user.cluster_cohesion(members, dataset)
            clusters.append({
                "cluster": c,
                "size": len(members),
                "centroid": dict(zip(res.labels, (float(x) for x in res.centroids[c]))),
                "internal_edges": coh.internal_edges,
                "density": coh.density,
                "average_clustering": coh.average_clustering,
                "vip_follows": [asdict(r) for r in coh.vip_follows],
            })
        clustering = {
            "k": k,
            "seed": seed,
            "users": len(vectors),
            "iterations": res.iterations,
            "converged": res.converged,
            "degenerate": res.degenerate,
            "objective": res.objective,
            "objective_history": res.objective_history,
            "assignments": [[uid, c] for uid, c in sorted(res.assignment.items())],
            "clusters": clusters,
        }
    else:
        cluster_note = f"{len(vectors)} users with attributed posts, fewer than k={k}"
    return {
        "authors": len(authors),
        "age": {
            "bins": [[a, n] for a, n in ages.bins.items()],
            "known": ages.known,
            "unknown": ages.unknown,
            "mean": ages.mean,
        },
        "regions": {
            "counts": [[rc.region, rc.users] for rc in counts],
            "unknown": unknown_region,
            "participation_index": pi,
            "note": pi_note,
        },
        "per_show": per_show,
        "clustering": clustering,
        "clustering_note": cluster_note,
    }


def content_section(
    dataset: Dataset, corpora: Mapping[str, ShowCorpus], lex: SentimentLexicons, threshold: int, seed: int
) -> dict:
    shows = sorted(dataset.shows, key=lambda s: s.show_id)
    per_show = []
    for s in shows:
        summ = content.sentiment_summary(_corpus(corpora, s.show_id), dataset, lex)
        per_show.append({"show_id": s.show_id, "initial": summ.initial.as_dict(), "repost": summ.repost.as_dict()})
    union = ShowCorpus("*", frozenset().union(*(c.members for c in corpora.values())) if corpora else frozenset(), {})
    overall = content.sentiment_summary(union, dataset, lex)
    net = content.build_show_network(shows, corpora, dataset, threshold)
    network = content.show_network_profile(net, seed=seed, min_common_users=threshold) if net.nodes else None
    if network is not None:
        network["edge_list"] = [[u, v, int(w)] for u, v, w in net.edge_list()]
    return {
        "lexicon_sha256": lex.digest(),
        "sentiment": {
            "overall": {"initial": overall.initial.as_dict(), "repost": overall.repost.as_dict()},
            "per_show": per_show,
        },
        "positive_fraction": [asdict(r) for r in content.positive_fraction_table(shows, corpora, dataset, lex)],
        "show_network": network,
        "multi_show_microblogs": len(multi_show_members(corpora)),
    }


def social_section(dataset: Dataset, corpora: Mapping[str, ShowCorpus]) -> dict:
    shows = sorted(dataset.shows, key=lambda s: s.show_id)
    topology = []
    records: list[social.InfluenceRecord] = []
    uncovered = []
    for s in shows:
        corpus = _corpus(corpora, s.show_id)
        if not corpus.members:
            topology.append({"show_id": s.show_id, "authors": 0, "isolated_fraction": None,
                             "connected_fraction": None, "component_sizes": []})
            continue
        t = social.viewer_topology_stats(corpus, dataset)
        topology.append({
            "show_id": s.show_id,
            "authors": t.authors,
            "isolated_fraction": t.isolated_fraction,
            "connected_fraction": t.connected_fraction,
            "component_sizes": [[size, n] for size, n in t.component_sizes.items()],
        })
        inf = social.actor_influence(s, corpus, dataset)
        records += inf.records
        uncovered += [{"show_id": s.show_id, "actor": a} for a in inf.uncovered]
    accounts = social.actor_accounts(shows)
    copost = social.actor_copost_graph(shows, corpora, dataset)
    follow = social.actor_follow_graph(dataset, accounts)
    both = social.graph_intersection(copost, follow)

    def edges(g):
        return [[u, v] for u, v, _ in g.edge_list()]

    return {
        "viewer_topology": topology,
        "actor_graphs": {
            "nodes": sorted(accounts),
            "copost": edges(copost),
            "follow": edges(follow),
            "intersection": edges(both),
        },
        "influence": [asdict(r) for r in records],
        "uncovered_actors": uncovered,
        "actor_summary": [asdict(a) for a in social.actor_influence_stats(records, dataset, accounts)],
    }


def propagation_section(
    dataset: Dataset,
    corpora: Mapping[str, ShowCorpus],
    window: int,
    strict: bool,
    windows_from: Optional[int] = None,
    windows_count: int = 0,
    focus: Optional[str] = None,
) -> dict:
    shows = sorted(dataset.shows, key=lambda s: s.show_id)
    overlaps, skipped = [], []
    for s in shows:
        if len(s.rounds) < 2:
            skipped.append(s.show_id)
            continue
        overlaps.append(asdict(prop.round_overlap(s, _corpus(corpora, s.show_id), dataset)))
    pg = prop.propagation_graph(shows, corpora, dataset, window, strict)
    labels = {s.show_id: set(s.labels) for s in shows}
    edge_rows = [
        {"src": a, "dst": b, "weight": w, "dst_labels": sorted(labels[b]), "shared_labels": sorted(labels[a] & labels[b])}
        for a, b, w in pg.edge_rows()
    ]
    events = None
    if focus is not None and windows_from is not None and windows_count > 0:
        wins = prop.windowed_propagation_graphs(shows, corpora, dataset, window, windows_from, windows_count, strict)
        reports = prop.propagation_event_report([g for _, _, g in wins], focus)
        events = {
            "focus": focus,
            "windows": [
                {"start": lo, "end": hi, "ranking": [[d, w] for d, w in r.ranking], "total": r.total,
                 "top": r.top, "top_share": r.top_share, "empty": r.empty}
                for (lo, hi, _), r in zip(wins, reports)
            ],
        }
    return {
        "window": window,
        "strict_attribution": strict,
        "round_overlap": overlaps,
        "round_overlap_skipped": skipped,
        "edges": edge_rows,
        "in_degree": [[s, d] for s, d in pg.in_degree().items()],
        "events": events,
    }


# ----------------------------------------------------------------- pipeline


def dataset_fingerprint(directory: Path | str) -> str:
    h = hashlib.sha256()
    for kind in sorted(FILES):
        path = Path(directory) / FILES[kind]
        h.update(FILES[kind].encode())
        h.update(b"\0")
        h.update(path.read_bytes())
        h.update(b"\0")
    return h.hexdigest()


def load_schema() -> dict:
    text = resources.files("showprofile").joinpath("schema/report.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def validate_report(report: Mapping) -> None:
    jsonschema.validate(report, load_schema())


def dumps_report(report: Mapping) -> str:
    return json.dumps(report, ensure_ascii=False, sort_keys=True, indent=2, allow_nan=False) + "\n"


def build_report(config: PipelineConfig) -> dict:
    """Run every stage in memory and return the report document."""
    config.validate()
    try:
        dataset = parse_dataset(config.dataset, lenient=config.lenient, workers=config.workers)
        fingerprint = dataset_fingerprint(config.dataset)
    except (OSError, ValueError) as exc:
        raise PipelineError("ingest", str(exc)) from exc
    try:
        lex = SentimentLexicons.load(config.lexicon) if config.lexicon else SentimentLexicons.default()
    except (OSError, ValueError, KeyError) as exc:
        raise PipelineError("config", f"lexicon: {exc}") from exc
    try:
        corpora = retrieve_all(dataset, workers=config.workers)
    except ValueError as exc:
        raise PipelineError("retrieval", str(exc)) from exc

    tasks: dict[str, Callable[[], dict]] = {
        "user": lambda: user_section(dataset, corpora, config.k, stage_seed(config.seed, "user")),
        "content": lambda: content_section(dataset, corpora, lex, config.threshold, stage_seed(config.seed, "content")),
        "social": lambda: social_section(dataset, corpora),
        "propagation": lambda: propagation_section(
            dataset, corpora, config.window, config.strict_attribution,
            config.windows_from, config.windows_count, config.focus,
        ),
    }
    selected = [a for a in ASPECTS if a in config.aspects]

    def run(aspect: str) -> dict:
        try:
            return tasks[aspect]()
        except (ValueError, KeyError, UndefinedResultError) as exc:
            raise PipelineError(aspect, str(exc)) from exc

    if config.workers > 1 and len(selected) > 1:
        with ThreadPoolExecutor(max_workers=min(config.workers, len(selected))) as pool:
            results = list(pool.map(run, selected))
    else:
        results = [run(a) for a in selected]

    return {
        "schema_version": SCHEMA_VERSION,
        "dataset_fingerprint": fingerprint,
        "parameters": {
            "seed": config.seed,
            "k": config.k,
            "threshold": config.threshold,
            "window": config.window,
            "strict_attribution": config.strict_attribution,
            "lexicon_sha256": lex.digest(),
            "aspects": selected,
            "windows_from": config.windows_from,
            "windows_count": config.windows_count,
            "focus": config.focus,
        },
        "dataset": {
            "microblogs": len(dataset.microblogs),
            "users": len(dataset.users),
            "synthetic_users": sum(1 for u in dataset.users if u.synthetic),
            "follows": len(dataset.follows),
            "shows": len(dataset.shows),
        },
        "corpora": [{"show_id": sid, "microblogs": len(c)} for sid, c in sorted(corpora.items())],
        "sections": dict(zip(selected, results)),
        "denominators": DENOMINATORS,
    }


DENOMINATORS = {
    "age.mean": "users with a known age (age.known)",
    "regions.participation_index": "users of the 10th-ranked region",
    "sentiment.emotional_fraction": "all posts in the row",
    "positive_fraction.fraction": "positive + negative posts of the show",
    "viewer_topology.isolated_fraction": "distinct authors of the show corpus",
    "influence.actor_fraction": "posts in the show corpus",
    "influence.fan_fraction": "posts in the show corpus",
    "vip_follows.in_cluster_fraction": "non-VIP cluster members",
    "vip_follows.outside_fraction": "non-VIP users outside the cluster",
    "degree.fraction_above_40": "shows in the network",
}


def run_pipeline(config: PipelineConfig) -> Path:
    """Write ``report.json`` and ``exports/*.csv`` under ``config.out``.

    Everything is staged in a temporary directory and moved into place only
    on success, so a failed run leaves no partial outputs.
    """
    config.validate()
    out = Path(config.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    staging = Path(tempfile.mkdtemp(prefix=".showprofile-", dir=out.parent))
    try:
        report = build_report(config)
        validate_report(report)
        (staging / "report.json").write_text(dumps_report(report), encoding="utf-8", newline="\n")
        export_all(report, staging / "exports")
        out.mkdir(exist_ok=True)
        for name in ("report.json", "exports"):
            target = out / name
            if target.is_dir():
                shutil.rmtree(target)
            elif target.exists():
                target.unlink()
            shutil.move(str(staging / name), str(target))
    finally:
        shutil.rmtree(staging, ignore_errors=True)
    return out / "report.json"


# ------------------------------------------------------------------- export


def _fmt(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _section(report: Mapping, name: str) -> Mapping:
    sec = report.get("sections", {}).get(name)
    if sec is None:
        raise KeyError(f"report has no {name!r} section")
    return sec


def _rows_age(r):
    return ["age", "users"], _section(r, "user")["age"]["bins"]


def _rows_pi(r):
    pi = _section(r, "user")["regions"]["participation_index"] or []
    return ["region", "UN", "PI"], [[row["region"], row["users"], row["index"]] for row in pi]


def _rows_sentiment(r):
    sec = _section(r, "content")["sentiment"]
    cols = ["positive", "negative", "non_sentiment", "total", "emotional_fraction"]
    rows = []
    for kind in ("initial", "repost"):
        rows.append(["*", kind] + [sec["overall"][kind][c] for c in cols])
    for entry in sec["per_show"]:
        for kind in ("initial", "repost"):
            rows.append([entry["show_id"], kind] + [entry[kind][c] for c in cols])
    return ["show_id", "kind"] + cols, rows


def _rows_positive(r):
    rows = _section(r, "content")["positive_fraction"]
    return (["rank", "show_id", "positive", "negative", "fraction", "view_count", "flag"],
            [[x["rank"], x["show_id"], x["positive"], x["negative"], x["fraction"], x["view_count"], x["flag"]] for x in rows])


def _network(r):
    net = _section(r, "content")["show_network"]
    if net is None:
        raise KeyError("report has no show network")
    return net


def _rows_degree_cdf(r):
    return ["degree", "cdf"], _network(r)["degree"]["cdf"]


def _rows_clustering_cdf(r):
    return ["coefficient", "cdf"], _network(r)["clustering"]["cdf"]


def _cdf(values: Sequence[float]) -> list[tuple[float, float]]:
    vals = sorted(values)
    n = len(vals)
    out = []
    for i, v in enumerate(vals):
        if i + 1 == n or vals[i + 1] != v:
            out.append((v, (i + 1) / n))
    return out


def _rows_influence(r):
    inf = _section(r, "social")["influence"]
    rows = []
    for measure in ("actor_fraction", "fan_fraction"):
        rows += [[measure, v, f] for v, f in _cdf([x[measure] for x in inf])]
    return ["measure", "fraction", "cdf"], rows


def _rows_rounds(r):
    rows = _section(r, "propagation")["round_overlap"]
    return ["show_id", "only_first", "only_second", "both"], [[x["show_id"], x["only_first"], x["only_second"], x["both"]] for x in rows]


def _rows_propagation(r):
    rows = _section(r, "propagation")["edges"]
    return ["src", "dst", "weight"], [[x["src"], x["dst"], x["weight"]] for x in rows]


EXPORTS: dict[str, Callable[[Mapping], tuple[list[str], list]]] = {
    "age_histogram": _rows_age,
    "pi": _rows_pi,
    "sentiment": _rows_sentiment,
    "positive_fraction": _rows_positive,
    "degree_cdf": _rows_degree_cdf,
    "clustering_cdf": _rows_clustering_cdf,
    "influence_cdf": _rows_influence,
    "round_overlap": _rows_rounds,
    "propagation": _rows_propagation,
}


def export_csv_text(report: Mapping, selector: str) -> str:
    if selector not in EXPORTS:
        raise ValueError(f"unknown export selector {selector!r}; choose from {sorted(EXPORTS)}")
    header, rows = EXPORTS[selector](report)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def export_plot_data(report: Mapping, selector: str, out_dir: Path | str) -> Path:
    text = export_csv_text(report, selector)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{selector}.csv"
    path.write_text(text, encoding="utf-8", newline="\n")
    return path


def export_all(report: Mapping, out_dir: Path | str) -> list[Path]:
    """Every export whose source section is present in the report."""
    written = []
    for selector in EXPORTS:
        try:
            written.append(export_plot_data(report, selector, out_dir))
        except KeyError:
            continue
    return written
