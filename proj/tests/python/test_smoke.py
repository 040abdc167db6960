import os

import pytest

import peaksharp as ps

DATA = os.environ.get("PEAKSHARP_DATA_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "data"))


def load(name):
    return ps.load_network(os.path.join(DATA, name))


def test_gene_peak_is_k_invariant():
    net = load("gene.rxn")
    for k in (0.0, 25.0, 50.0):
        s = ps.find_extrema(net, k)
        assert s["modality"] == 1
        assert abs(s["peaks"][0] - 374.5) < 1e-6


def test_verdicts():
    assert ps.check_theorem1(load("gene.rxn"))["regions"][0]["direction"] == "sharpens"
    rep = ps.check_theorem1(load("schlogl.rxn"))
    assert rep["lemma1"]
    assert [r["direction"] for r in rep["regions"]] == ["flattens", "flattens"]


def test_round_trip():
    net = load("schlogl.rxn")
    assert ps.parse_network(ps.serialize_network(net)) == net


def test_parse_error_is_positioned():
    with pytest.raises(ps.ParseError, match=r"^1:\d+: nonaffine_rate"):
        ps.parse_network("reaction 0 -> 1 @ K*K\n")


def test_density_and_oracle():
    net = load("gene.rxn")
    d = ps.stationary_density(net, 0.0)
    assert abs(d["mass"] - 1.0) < 1e-6
    sv = ps.cme_stationary(net, 0.0, 700)
    assert abs(sum(sv["probs"]) - 1.0) < 1e-12
    assert ps.discrete_extrema(sv["probs"])["modality"] == 1


def test_ssa_deterministic():
    net = load("gene.rxn")
    a = ps.ensemble_histogram(net, 0.0, 0, 5.0, 200, 1, threads=1)
    b = ps.ensemble_histogram(net, 0.0, 0, 5.0, 200, 1, threads=3)
    assert a == b
    assert sum(a.values()) == 200


def test_analysis_error():
    with pytest.raises(ps.AnalysisError, match="range"):
        ps.find_extrema(load("gene.rxn"), 99.0)


def test_perturbation():
    rep = ps.perturb_analysis(load("schlogl.rxn"), 5.0, {5: 0.035, 6: 0.035})
    assert rep["inequalities"][2]["negligible"]
