import pytest

from kwopt.dataio import (
    CtrMismatchWarning,
    SynthConfig,
    edges_csv,
    keywords_csv,
    load_dataset,
    planted_blocks,
    synthesize,
    write_dataset,
)
from kwopt.errors import ConfigError, DataError

from helpers import components

HEADER = "id,text,impressions,clicks,cpc,ctr,revenue_per_click\n"


def write(tmp_path, kw_rows, edge_rows):
    kw = tmp_path / "keywords.csv"
    ed = tmp_path / "edges.csv"
    kw.write_text(HEADER + "".join(r + "\n" for r in kw_rows))
    ed.write_text("source,target\n" + "".join(r + "\n" for r in edge_rows))
    return kw, ed


BASE_ROWS = [
    "0,boots,100,10,0.50,0.1,1.00",
    "1,blue boots,200,20,0.25,0.1,0.80",
    "2,hiking boots,400,8,1.10,0.02,2.00",
    "3,red boots,1000,50,0.40,0.05,1.20",
]


def test_load_maps_fields(tmp_path):
    ds = load_dataset(*write(tmp_path, BASE_ROWS, ["0,1"]))
    r = ds[3]
    assert (r.text, r.impressions, r.clicks) == ("red boots", 1000, 50)
    assert r.cpc_micros == 400_000 and r.cpc == 0.40
    assert r.rpc_micros == 1_200_000 and r.ctr == 0.05


def test_duplicate_and_reversed_edges_collapse(tmp_path):
    ds = load_dataset(*write(tmp_path, BASE_ROWS, ["1,2", "2,1", "1,2"]))
    assert ds.graph.edges() == [(1, 2)]


def test_clicks_exceeding_impressions_names_row(tmp_path):
    rows = BASE_ROWS[:3] + ["3,red boots,50,60,0.40,1.0,1.20"]
    with pytest.raises(DataError, match=r"keywords.csv:5"):
        load_dataset(*write(tmp_path, rows, []))


@pytest.mark.parametrize("edge,msg", [("0,9", "unknown keyword"), ("2,2", "self-loop"),
                                      ("0,x", "not an integer")])
def test_bad_edges(tmp_path, edge, msg):
    with pytest.raises(DataError, match=msg):
        load_dataset(*write(tmp_path, BASE_ROWS, [edge]))


def test_malformed_rows(tmp_path):
    with pytest.raises(DataError, match=r":3"):
        load_dataset(*write(tmp_path, [BASE_ROWS[0], "1,x,1,1"], []))
    with pytest.raises(DataError, match="0..1"):
        load_dataset(*write(tmp_path, [BASE_ROWS[0], BASE_ROWS[3]], []))
    with pytest.raises(DataError, match="duplicate"):
        load_dataset(*write(tmp_path, [BASE_ROWS[0], BASE_ROWS[0]], []))


def test_missing_file(tmp_path):
    kw, _ = write(tmp_path, BASE_ROWS, [])
    with pytest.raises(FileNotFoundError):
        load_dataset(kw, tmp_path / "nope.csv")


def test_ctr_mismatch_warns_only(tmp_path):
    rows = BASE_ROWS[:3] + ["3,red boots,1000,50,0.40,0.07,1.20"]
    with pytest.warns(CtrMismatchWarning):
        ds = load_dataset(*write(tmp_path, rows, []))
    assert ds[3].ctr == 0.07


def test_round_trip(tmp_path):
    ds = load_dataset(*write(tmp_path, list(reversed(BASE_ROWS)), ["3,0", "1,2"]))
    out = tmp_path / "out"
    out.mkdir()
    write_dataset(ds, out / "k.csv", out / "e.csv")
    again = load_dataset(out / "k.csv", out / "e.csv")
    assert again.content() == ds.content()
    assert keywords_csv(again) == keywords_csv(ds) and edges_csv(again) == edges_csv(ds)


def test_synthesize_deterministic():
    cfg = SynthConfig(n_keywords=60, rng_seed=3)
    a, b = synthesize(cfg), synthesize(cfg)
    assert keywords_csv(a) == keywords_csv(b) and edges_csv(a) == edges_csv(b)
    assert keywords_csv(synthesize(SynthConfig(n_keywords=60, rng_seed=4))) != keywords_csv(a)


def test_synthesize_degenerate_probabilities_give_cliques():
    cfg = SynthConfig(n_keywords=30, n_clusters=3, intra_edge_prob=1.0, inter_edge_prob=0.0)
    ds = synthesize(cfg)
    blocks = planted_blocks(cfg)
    for a in range(30):
        for b in range(a + 1, 30):
            assert (b in ds.graph.adjacency[a]) == (blocks[a] == blocks[b])


def test_synthesize_blocks_recovered_by_components():
    cfg = SynthConfig(n_keywords=120, n_clusters=3, rng_seed=7, intra_edge_prob=0.3,
                      inter_edge_prob=0.0)
    ds = synthesize(cfg)
    blocks = planted_blocks(cfg)
    expected = sorted((frozenset(i for i in range(120) if blocks[i] == b) for b in range(3)), key=min)
    assert components(120, ds.graph.edges()) == expected


def test_synthesized_records_valid():
    ds = synthesize(SynthConfig(n_keywords=200, rng_seed=11))
    for r in ds.records:
        assert 0 <= r.clicks <= r.impressions
        if r.impressions:
            assert abs(r.ctr - r.clicks / r.impressions) <= 1e-6
        assert r.cpc_micros % 10_000 == 0


@pytest.mark.parametrize("kw", [dict(n_keywords=0), dict(intra_edge_prob=0.1, inter_edge_prob=0.2),
                                dict(inter_edge_prob=1.5), dict(n_clusters=0),
                                dict(cpc_range=(0.011, 0.019))])
def test_synth_config_validation(kw):
    with pytest.raises(ConfigError):
        synthesize(SynthConfig(**kw))


def test_synth_config_json(tmp_path):
    cfg = SynthConfig(n_keywords=10, rng_seed=5, cpc_range=(0.1, 0.5))
    p = tmp_path / "synth.json"
    p.write_text(cfg.to_json())
    assert SynthConfig.from_json(p) == cfg
    p.write_text('{"bogus": 1}')
    with pytest.raises(ConfigError):
        SynthConfig.from_json(p)
