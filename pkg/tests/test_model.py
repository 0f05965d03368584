import random
from collections import Counter

from hypothesis import given
from hypothesis import strategies as st

from helpers import dataset, post, show
from showprofile.model import (
    Dataset,
    FollowEdge,
    Microblog,
    SentimentLabel,
    TvShow,
    UserProfile,
    normalize_text,
    validate_dataset,
)


def well_formed():
    shows = [
        show("v1", actors=("A",), accounts={"A": "acct_a"}),
        show("v2", labels=("War", "Love", "Historical")),
        show("v3", rounds=()),
    ]
    posts = [post("m1", "u1", 10, "hello"), post("m2", "u2", 20, "re", root="m1"), post("m3", "acct_a", 5, "x")]
    return dataset(posts, users=["u3"], follows=[("u1", "u2"), ("u2", "u1")], shows=shows)


def rules(ds):
    return [v.rule for v in validate_dataset(ds)]


def test_well_formed_three_show_fixture_is_clean():
    assert validate_dataset(well_formed()) == []


def test_two_labels_is_one_label_count_violation():
    ds = well_formed()
    bad = TvShow("v9", "t", ("Love", "War"), (), frozenset({"t"}))
    ds = Dataset(ds.microblogs, ds.users, ds.follows, ds.shows + (bad,))
    [v] = validate_dataset(ds)
    assert v.rule == "show.label_count" and v.locator == "v9"


def test_self_root_is_one_violation():
    ds = well_formed()
    ds = Dataset(ds.microblogs + (post("m9", "u1", 1, "", root="m9"),), ds.users, ds.follows, ds.shows)
    assert rules(ds) == ["microblog.self_root"]


def test_each_rule_fires():
    users = (UserProfile("u1", age=0), UserProfile("u1"), UserProfile("u2", age=121))
    posts = (Microblog("m1", "ghost", "g", "ip", -1, ""), Microblog("m1", "u1", "n", "ip", 0, ""))
    follows = (FollowEdge("u1", "u1"), FollowEdge("u1", "u2"), FollowEdge("u1", "u2"), FollowEdge("u2", "nobody"))
    shows = (
        TvShow("s", "t", ("a", "b", "c"), ("A",), frozenset(), {"B": "u1"}, ((5, 10), (8, 12)), -1),
        TvShow("s", "t", ("a", "b", "c"), (), frozenset(), {}, ((10, 5),)),
    )
    got = Counter(rules(Dataset(posts, users, follows, shows)))
    assert got == Counter({
        "user.duplicate_id": 1,
        "user.age_range": 2,
        "microblog.duplicate_id": 1,
        "microblog.negative_timestamp": 1,
        "microblog.unknown_author": 1,
        "follow.self_loop": 1,
        "follow.duplicate": 1,
        "follow.unknown_endpoint": 1,
        "show.duplicate_id": 1,
        "show.rounds_order": 2,
        "show.unknown_actor_account": 1,
        "show.negative_view_count": 1,
    })


def test_validate_does_not_mutate():
    ds = well_formed()
    before = (ds.microblogs, ds.users, ds.follows, ds.shows)
    validate_dataset(ds)
    assert (ds.microblogs, ds.users, ds.follows, ds.shows) == before


@st.composite
def messy_datasets(draw):
    uids = [f"u{i}" for i in range(draw(st.integers(1, 5)))]
    users = [UserProfile(draw(st.sampled_from(uids + ["dup"])), age=draw(st.sampled_from([None, 0, 30, 200])))
             for _ in range(draw(st.integers(0, 6)))]
    mids = ["m1", "m2", "m3"]
    posts = [Microblog(draw(st.sampled_from(mids)), draw(st.sampled_from(uids)), "n", "ip",
                       draw(st.integers(-2, 5)), "", draw(st.sampled_from([None, *mids])))
             for _ in range(draw(st.integers(0, 6)))]
    follows = [FollowEdge(draw(st.sampled_from(uids)), draw(st.sampled_from(uids))) for _ in range(draw(st.integers(0, 6)))]
    return Dataset(tuple(posts), tuple(users), tuple(follows), ())


@given(messy_datasets(), st.randoms(use_true_random=False))
def test_validate_is_order_insensitive_and_idempotent(ds, rnd):
    def shuffled(xs):
        xs = list(xs)
        rnd.shuffle(xs)
        return tuple(xs)

    perm = Dataset(shuffled(ds.microblogs), shuffled(ds.users), shuffled(ds.follows), shuffled(ds.shows))
    assert validate_dataset(ds) == validate_dataset(perm)
    assert validate_dataset(ds) == validate_dataset(ds)


def test_normalize_text_nfc_and_casefold():
    decomposed = "Café STRASSE"
    assert normalize_text(decomposed) == normalize_text("Café straße")


def test_sentiment_label_closed_set():
    assert {s.value for s in SentimentLabel} == {"positive", "negative", "non_sentiment"}


def test_dataset_indexes():
    ds = well_formed()
    assert ds.children == {"m1": ["m2"]}
    assert ds.followers["u2"] == {"u1"}
    assert ds.posts_by_author["acct_a"] == ["m3"]
    ds.warm()
    assert ds.show_by_id["v1"].linked_accounts() == {"A": "acct_a"}


def test_records_round_trip():
    ds = well_formed()
    for rec in ds.microblogs:
        assert Microblog.from_record(rec.to_record()) == rec
    for s in ds.shows:
        assert TvShow.from_record(s.to_record()) == s
    rnd = random.Random(0)
    for _ in range(10):
        u = UserProfile(f"u{rnd.randint(0, 9)}", rnd.choice([None, 33]), rnd.choice([None, "r1"]), rnd.random() < 0.5)
        assert UserProfile.from_record(u.to_record()) == u
