import csv
import io
import json
import shutil

import jsonschema
import pytest

from showprofile import report as rp
from showprofile.graphkit import SocialGraph
from showprofile.ingest import FILES, fixture_dir, parse_dataset
from showprofile.profiler_content import show_network_profile
from showprofile.profiler_propagation import propagation_graph
from showprofile.retrieval import retrieve_all


@pytest.fixture(scope="module")
def fixture_report():
    cfg = rp.PipelineConfig(dataset=str(fixture_dir()), out="unused", seed=7,
                            windows_from=1306886400, windows_count=4, focus="v02")
    return rp.build_report(cfg)


def test_report_validates_against_schema(fixture_report):
    rp.validate_report(fixture_report)
    assert set(fixture_report["sections"]) == set(rp.ASPECTS)
    assert fixture_report["dataset_fingerprint"] == rp.dataset_fingerprint(fixture_dir())


def test_schema_rejects_broken_report(fixture_report):
    broken = json.loads(json.dumps(fixture_report))
    del broken["sections"]["user"]["age"]
    with pytest.raises(jsonschema.ValidationError):
        rp.validate_report(broken)
    broken = json.loads(json.dumps(fixture_report))
    broken["sections"]["extra"] = {}
    with pytest.raises(jsonschema.ValidationError):
        rp.validate_report(broken)


def test_every_section_table_has_a_denominator(fixture_report):
    assert all(isinstance(v, str) and v for v in fixture_report["denominators"].values())


def test_stage_seeds_differ_and_are_stable():
    assert rp.stage_seed(7, "user") == rp.stage_seed(7, "user")
    assert rp.stage_seed(7, "user") != rp.stage_seed(7, "content")
    assert rp.stage_seed(7, "user") != rp.stage_seed(8, "user")


def test_aspect_selection(tmp_path):
    cfg = rp.PipelineConfig(dataset=str(fixture_dir()), out=str(tmp_path / "o"), aspects=("user", "content"))
    report = json.loads(rp.run_pipeline(cfg).read_text())
    assert sorted(report["sections"]) == ["content", "user"]
    assert report["parameters"]["aspects"] == ["user", "content"]


def test_missing_shows_file_is_ingest_error_and_leaves_nothing(tmp_path):
    data = tmp_path / "data"
    shutil.copytree(fixture_dir(), data)
    (data / FILES["shows"]).unlink()
    out = tmp_path / "out"
    with pytest.raises(rp.PipelineError) as exc:
        rp.run_pipeline(rp.PipelineConfig(dataset=str(data), out=str(out)))
    assert exc.value.stage == "ingest"
    assert not out.exists()
    assert [p.name for p in tmp_path.iterdir()] == ["data"]


def test_profiler_failure_names_stage(tmp_path):
    cfg = rp.PipelineConfig(dataset=str(fixture_dir()), out=str(tmp_path / "o"), aspects=("propagation",),
                            windows_from=0, windows_count=1, focus="nope")
    with pytest.raises(rp.PipelineError) as exc:
        rp.run_pipeline(cfg)
    assert exc.value.stage == "propagation"
    assert not (tmp_path / "o").exists()


def test_config_file_and_overrides(tmp_path):
    conf = tmp_path / "run.conf"
    conf.write_text("# comment\ndataset = /d\nout=/o\nseed = 3\nk=4\naspects = user, social\nstrict_attribution = yes\n")
    cfg = rp.load_config(conf, {"seed": 9, "k": None})
    assert (cfg.dataset, cfg.seed, cfg.k, cfg.aspects, cfg.strict_attribution) == ("/d", 9, 4, ("user", "social"), True)
    conf.write_text("colour = red\n")
    with pytest.raises(ValueError, match="unknown config key"):
        rp.load_config(conf)
    conf.write_text("just words\n")
    with pytest.raises(ValueError, match="key=value"):
        rp.load_config(conf)
    with pytest.raises(ValueError, match="unknown aspects"):
        rp.PipelineConfig(dataset="d", out="o", aspects=("mood",)).validate()


# ------------------------------------------------------------------ export


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_export_pi_columns(fixture_report):
    got = rows(rp.export_csv_text(fixture_report, "pi"))
    assert got[0] == ["region", "UN", "PI"]
    pi = fixture_report["sections"]["user"]["regions"]["participation_index"]
    assert len(got) == len(pi) + 1 and float(got[10][2]) == 0.0


def test_export_degree_cdf_k5():
    k5 = SocialGraph.build(range(5), [(i, j) for i in range(5) for j in range(i + 1, 5)])
    report = {"sections": {"content": {"show_network": show_network_profile(k5)}}}
    assert rows(rp.export_csv_text(report, "degree_cdf")) == [["degree", "cdf"], ["4", "1.0"]]


def test_export_propagation_matches_graph(fixture_report):
    ds = parse_dataset(fixture_dir())
    pg = propagation_graph(ds.shows, retrieve_all(ds), ds)
    got = rows(rp.export_csv_text(fixture_report, "propagation"))
    assert got[0] == ["src", "dst", "weight"]
    assert [(s, d, int(w)) for s, d, w in got[1:]] == pg.edge_rows()


def test_export_unknown_selector_and_missing_section(fixture_report, tmp_path):
    with pytest.raises(ValueError, match="unknown export selector"):
        rp.export_plot_data(fixture_report, "pie", tmp_path)
    with pytest.raises(KeyError):
        rp.export_plot_data({"sections": {}}, "pi", tmp_path)


def test_export_idempotent_and_dot_decimal(fixture_report, tmp_path):
    first = {p.name: p.read_bytes() for p in rp.export_all(fixture_report, tmp_path / "a")}
    again = {p.name: p.read_bytes() for p in rp.export_all(fixture_report, tmp_path / "a")}
    assert first == again and len(first) == len(rp.EXPORTS)
    for blob in first.values():
        for row in rows(blob.decode())[1:]:
            for cell in row:
                assert "," not in cell


def test_export_rows_sorted_by_natural_key(fixture_report):
    age = [int(r[0]) for r in rows(rp.export_csv_text(fixture_report, "age_histogram"))[1:]]
    assert age == sorted(age)
    cdf = [float(r[0]) for r in rows(rp.export_csv_text(fixture_report, "degree_cdf"))[1:]]
    assert cdf == sorted(cdf)
    ranks = [int(r[0]) for r in rows(rp.export_csv_text(fixture_report, "positive_fraction"))[1:] if r[0]]
    assert ranks == sorted(ranks)
