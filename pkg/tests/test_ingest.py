import json
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from showprofile.ingest import (
    BASE_TIME,
    FIXTURE_SPEC,
    FILES,
    GroundTruth,
    IngestError,
    SyntheticSpec,
    fixture_dir,
    generate_synthetic,
    parse_dataset,
    plant_round_overlap,
    read_ground_truth,
    write_dataset,
    write_synthetic,
)
from showprofile.lexicon import DEFAULT_NEGATIVE, DEFAULT_POSITIVE
from showprofile.model import Dataset, FollowEdge, Microblog, TvShow, UserProfile, normalize_text, validate_dataset

SHOW = {"show_id": "v1", "title": "T", "labels": ["a", "b", "c"], "actors": ["A"], "topics": ["T"],
        "actor_accounts": {"A": "u1"}, "rounds": [[0, 10]], "view_count": 3}


def blog(i, **kw):
    rec = {"id": f"m{i}", "author_id": "u1", "author_name": "n", "author_ip": "1.2.3.4", "timestamp": i, "content": "c"}
    rec.update(kw)
    return rec


def write_dir(tmp_path: Path, microblogs=(), users=(), follows=(), shows=(SHOW,), raw=None) -> Path:
    data = {"microblogs": microblogs, "users": users, "follows": follows, "shows": shows}
    for kind, name in FILES.items():
        if raw and kind in raw:
            text = raw[kind]
        else:
            text = "".join(json.dumps(r) + "\n" for r in data[kind])
        (tmp_path / name).write_text(text, encoding="utf-8")
    return tmp_path


def test_three_line_file(tmp_path):
    ds = parse_dataset(write_dir(tmp_path, [blog(1), blog(2), blog(3)], users=[{"user_id": "u1"}]))
    assert [m.id for m in ds.microblogs] == ["m1", "m2", "m3"]
    assert validate_dataset(ds) == []


def test_missing_content_names_line_and_field(tmp_path):
    bad = blog(2)
    del bad["content"]
    with pytest.raises(IngestError) as exc:
        parse_dataset(write_dir(tmp_path, [blog(1), bad]))
    assert exc.value.line == 2 and exc.value.field == "content"
    assert "microblogs.jsonl:2" in str(exc.value)


def test_duplicate_id_reports_both_lines(tmp_path):
    with pytest.raises(IngestError) as exc:
        parse_dataset(write_dir(tmp_path, [blog(1), blog(2), blog(1)]))
    assert exc.value.line == 3
    assert "line 1" in str(exc.value) and "line 3" in str(exc.value)


@pytest.mark.parametrize("ts", ["soon", "1.5", 1.5, True, None, -4])
def test_bad_timestamps(tmp_path, ts):
    with pytest.raises(IngestError) as exc:
        parse_dataset(write_dir(tmp_path, [blog(1, timestamp=ts)]))
    assert exc.value.field == "timestamp"


@pytest.mark.parametrize("ts,expected", [(7, 7), (7.0, 7), ("7", 7)])
def test_timestamp_forms(tmp_path, ts, expected):
    ds = parse_dataset(write_dir(tmp_path, [blog(1, timestamp=ts)]))
    assert ds.microblogs[0].timestamp == expected


def test_label_count_error(tmp_path):
    with pytest.raises(IngestError) as exc:
        parse_dataset(write_dir(tmp_path, shows=[dict(SHOW, labels=["a", "b"])]))
    assert exc.value.field == "labels"


@pytest.mark.parametrize("patch,field", [
    ({"actor_accounts": {"B": "u9"}}, "actor_accounts"),
    ({"rounds": [[5, 3]]}, "rounds"),
    ({"rounds": [[0, 10], [5, 20]]}, "rounds"),
    ({"view_count": -1}, "view_count"),
])
def test_show_invariants(tmp_path, patch, field):
    with pytest.raises(IngestError) as exc:
        parse_dataset(write_dir(tmp_path, shows=[dict(SHOW, **patch)]))
    assert exc.value.field == field


def test_other_line_errors(tmp_path):
    with pytest.raises(IngestError, match="root_id"):
        parse_dataset(write_dir(tmp_path, [blog(1, root_id="m1")]))
    with pytest.raises(IngestError, match="age"):
        parse_dataset(write_dir(tmp_path, users=[{"user_id": "u1", "age": 0}]))
    with pytest.raises(IngestError, match="follows itself"):
        parse_dataset(write_dir(tmp_path, follows=[{"follower": "u1", "followee": "u1"}]))
    with pytest.raises(IngestError, match="invalid JSON"):
        parse_dataset(write_dir(tmp_path, raw={"users": "{nope\n"}))
    with pytest.raises(IngestError, match="not a JSON object"):
        parse_dataset(write_dir(tmp_path, raw={"users": "[1]\n"}))


def test_missing_file(tmp_path):
    write_dir(tmp_path)
    (tmp_path / "shows.jsonl").unlink()
    with pytest.raises(IngestError, match="shows file not found"):
        parse_dataset(tmp_path)


def test_non_utf8(tmp_path):
    write_dir(tmp_path)
    (tmp_path / "microblogs.jsonl").write_bytes(b'{"id": "\xff"}\n')
    with pytest.raises(IngestError, match="UTF-8"):
        parse_dataset(tmp_path)


def test_lenient_skips_and_counts(tmp_path):
    bad = blog(2)
    del bad["content"]
    skipped = {}
    ds = parse_dataset(write_dir(tmp_path, [blog(1), bad, blog(3)], raw={"follows": "garbage\n"}),
                       lenient=True, skipped=skipped)
    assert [m.id for m in ds.microblogs] == ["m1", "m3"]
    assert skipped == {"microblogs": 1, "users": 0, "follows": 1, "shows": 0}


def test_stub_profiles(tmp_path):
    ds = parse_dataset(write_dir(tmp_path, [blog(1)], follows=[{"follower": "u2", "followee": "u3"}]))
    assert {u.user_id: u.synthetic for u in ds.users} == {"u1": True, "u2": True, "u3": True}
    assert validate_dataset(ds) == []


def test_blank_lines_ignored_and_workers_agree(tmp_path):
    d = write_dir(tmp_path, [blog(2), blog(1)], raw={"users": '\n{"user_id": "u1"}\n\n'})
    assert parse_dataset(d) == parse_dataset(d, workers=4)


ident = st.text("abcxyz", min_size=1, max_size=4)


@st.composite
def valid_datasets(draw):
    uids = sorted(draw(st.sets(ident, min_size=1, max_size=6)))
    users = tuple(UserProfile(u, draw(st.one_of(st.none(), st.integers(1, 120))),
                              draw(st.one_of(st.none(), ident)), draw(st.booleans())) for u in uids)
    mids = sorted(draw(st.sets(ident, max_size=6)))
    posts = tuple(Microblog(m, draw(st.sampled_from(uids)), draw(st.text(max_size=5)), "ip",
                            draw(st.integers(0, 2**40)), draw(st.text(max_size=20)),
                            draw(st.one_of(st.none(), st.sampled_from([x for x in mids if x != m] or [None]))))
                  for m in mids)
    pairs = sorted(draw(st.sets(st.tuples(st.sampled_from(uids), st.sampled_from(uids)), max_size=8)))
    follows = tuple(FollowEdge(a, b) for a, b in pairs if a != b)
    shows = tuple(TvShow(s, draw(st.text(max_size=5)), ("a", "b", "c"), ("A",), frozenset(draw(st.sets(ident, max_size=3))),
                         {"A": draw(st.one_of(st.none(), st.sampled_from(uids)))}, ((0, 5), (5, 9)),
                         draw(st.one_of(st.none(), st.integers(0, 10**9))))
                  for s in sorted(draw(st.sets(ident, max_size=3))))
    return Dataset(posts, users, follows, shows)


@given(valid_datasets())
def test_round_trip(tmp_path_factory, ds):
    d = tmp_path_factory.mktemp("rt")
    write_dataset(ds, d)
    assert parse_dataset(d) == ds


def test_round_trip_with_reposts(tmp_path):
    ds, _ = generate_synthetic(SyntheticSpec(seed=3, n_users=20, n_shows=3, n_microblogs=200))
    write_dataset(ds, tmp_path)
    assert parse_dataset(tmp_path) == ds


# ------------------------------------------------------------- generator


def test_same_seed_same_bytes(tmp_path):
    spec = SyntheticSpec(seed=1, n_users=50, n_shows=4, n_microblogs=400)
    write_synthetic(*generate_synthetic(spec), tmp_path / "a")
    write_synthetic(*generate_synthetic(spec), tmp_path / "b")
    for name in [*FILES.values(), "ground_truth.json"]:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_planted_transition_realized():
    spec = SyntheticSpec(seed=2, n_users=30, n_shows=4, n_microblogs=300,
                         planted_transitions=(("u0001", "v01", "v03", 3600),))
    ds, truth = generate_synthetic(spec)
    mine = sorted((m for m in ds.microblogs if m.author_id == "u0001"), key=lambda m: m.timestamp)
    assert len(mine) == 2
    assert [truth.attribution[m.id] for m in mine] == ["v01", "v03"]
    assert mine[1].timestamp - mine[0].timestamp == 3600
    assert truth.propagation_edges == {("v01", "v03"): 1}


def _hits(text, entries):
    t = normalize_text(text)
    return sum(normalize_text(e) in t for e in entries)


def test_all_positive_mix():
    ds, truth = generate_synthetic(SyntheticSpec(seed=4, n_users=30, n_shows=3, n_microblogs=300, sentiment_mix=(1, 0, 0)))
    for m in ds.microblogs:
        assert _hits(m.content, DEFAULT_POSITIVE) >= 1
        assert _hits(m.content, DEFAULT_NEGATIVE) == 0
    assert set(truth.sentiment.values()) == {"positive"}


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_generated_dataset_is_valid(seed):
    ds, truth = generate_synthetic(SyntheticSpec(seed=seed, n_users=60, n_shows=5, n_microblogs=600, planted_clusters=3))
    assert validate_dataset(ds) == []
    ids = {m.id for m in ds.microblogs}
    users = {u.user_id for u in ds.users}
    assert set(truth.attribution) <= ids and set(truth.sentiment) == ids
    assert set(truth.clusters) <= users
    # a planted topic post literally carries one of its show's topics
    by_show = {s.show_id: s for s in ds.shows}
    for m in ds.microblogs:
        sid = truth.attribution.get(m.id)
        if sid and m.root_id is None and m.author_id not in by_show[sid].linked_accounts().values():
            assert any(normalize_text(t) in normalize_text(m.content) for t in by_show[sid].topics)


@pytest.mark.parametrize("kw", [
    {"n_users": 0},
    {"planted_clusters": 300},
    {"planted_clusters": 7, "n_shows": 6},
    {"sentiment_mix": (0.5, 0.5, 0.5)},
    {"sentiment_mix": (1.5, -0.5, 0.0)},
    {"planted_transitions": (("nobody", "v01", "v02", 10),)},
    {"planted_transitions": (("u0001", "v01", "v01", 10),)},
    {"planted_transitions": (("u0001", "v01", "v02", 0),)},
    {"show_sentiment_mixes": {"v99": (1, 0, 0)}},
])
def test_infeasible_specs(kw):
    with pytest.raises(ValueError):
        generate_synthetic(SyntheticSpec(seed=0, **kw))


def test_ground_truth_json_round_trip(tmp_path):
    ds, truth = generate_synthetic(SyntheticSpec(seed=5, n_users=20, n_shows=3, n_microblogs=100,
                                                 planted_transitions=(("u0002", "v01", "v02", 5),)))
    write_synthetic(ds, truth, tmp_path)
    assert read_ground_truth(tmp_path) == truth
    assert GroundTruth.from_json(truth.to_json()) == truth


def test_bundled_fixture_regenerates_byte_identically(tmp_path):
    write_synthetic(*generate_synthetic(FIXTURE_SPEC), tmp_path)
    for name in [*FILES.values(), "ground_truth.json"]:
        assert (tmp_path / name).read_bytes() == (fixture_dir() / name).read_bytes(), name


def test_plant_round_overlap_shape():
    ds, expected = plant_round_overlap(4, 3, 2, seed=1)
    assert expected == (4, 3, 2)
    assert validate_dataset(ds) == []
    assert all(m.timestamp >= BASE_TIME for m in ds.microblogs)
